"""Exhaustive fixture streams, one canonical document per line."""

from __future__ import annotations

import json
from typing import Iterator

from adjunct import catalog
from adjunct.finset import FiniteSet
from adjunct.structure import validate_category

from .documents import to_document

KINDS = ("set", "magma", "poset", "graph")


def enumerate_documents(kind: str, size: int = 2, max_edges: int = 1, *,
                        nonassociative: bool = False, up_to_iso: bool = False) -> Iterator[dict]:
    """Structures of ``kind`` within the bounds, in lexicographic order.

    ``size`` is the element or vertex count; ``max_edges`` bounds each hom
    for graphs.  Magmas are unital one-object original graphs.
    """
    if kind == "set":
        for n in range(size + 1):
            yield to_document(FiniteSet(str(i) for i in range(n)))
    elif kind == "magma":
        for M in catalog.unital_magmas(size):
            if nonassociative and validate_category(M):
                continue
            yield to_document(M)
    elif kind == "poset":
        for P in catalog.posets(size):
            yield to_document(P)
    elif kind == "graph":
        for G in catalog.graphs(size, max_edges, up_to_iso=up_to_iso):
            yield to_document(G)
    else:
        raise ValueError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")


def line(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
