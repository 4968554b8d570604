"""Named small structures and exhaustive enumerators used as fixtures."""

from __future__ import annotations

import itertools
from typing import Iterator

from adjunct.finset import FinitePoset, FiniteSet
from adjunct.graphs import ContactTable, Edge, FiniteGraph
from adjunct.ordered import ExplicitOrder, OrderedGraph
from adjunct.structure import OriginalGraph, original_from_table, validate_category


def walking_arrow() -> OriginalGraph:
    return original_from_table(
        ["0", "1"],
        [("1_0", "0", "0"), ("a", "0", "1"), ("1_1", "1", "1")],
        {"0": "1_0", "1": "1_1"},
        {
            ("1_0", "1_0"): "1_0", ("1_0", "a"): "a",
            ("a", "1_1"): "a", ("1_1", "1_1"): "1_1",
        },
    )


def composable_pair() -> OriginalGraph:
    """Three objects with ``f: 0 -> 1``, ``g: 1 -> 2`` and their composite ``fg``."""
    edges = [
        ("1_0", "0", "0"), ("f", "0", "1"), ("fg", "0", "2"),
        ("1_1", "1", "1"), ("g", "1", "2"), ("1_2", "2", "2"),
    ]
    units = {"0": "1_0", "1": "1_1", "2": "1_2"}
    table = {("f", "g"): "fg"}
    for label, src, dst in edges:
        table[units[src], label] = label
        table[label, units[dst]] = label
    return original_from_table(["0", "1", "2"], edges, units, table)


def one_object(elements, unit: str, table: dict) -> OriginalGraph:
    """A one-object original graph ``*`` whose loops are ``elements``."""
    return original_from_table(["*"], [(e, "*", "*") for e in elements], {"*": unit}, table)


def z2() -> OriginalGraph:
    return one_object(
        ["1", "g"], "1",
        {("1", "1"): "1", ("1", "g"): "g", ("g", "1"): "g", ("g", "g"): "1"},
    )


def discrete_category(n: int) -> OriginalGraph:
    vs = [str(i) for i in range(n)]
    return original_from_table(
        vs, [(f"1_{v}", v, v) for v in vs], {v: f"1_{v}" for v in vs},
        {(f"1_{v}", f"1_{v}"): f"1_{v}" for v in vs},
    )


def magma_labels(n: int) -> list[str]:
    return ["1"] + [chr(ord("a") + i) for i in range(n - 1)]


def unital_magmas(n: int) -> Iterator[OriginalGraph]:
    """Unital magmas on ``1, a, b, ...`` with unit ``1``.

    Tables are listed lexicographically: the non-unit cells are read row by
    row and each cell ranges over the elements in label order.
    """
    labels = magma_labels(n)
    cells = [(x, y) for x in labels[1:] for y in labels[1:]]
    for values in itertools.product(labels, repeat=len(cells)):
        table = {("1", y): y for y in labels}
        table.update({(x, "1"): x for x in labels})
        table.update(zip(cells, values))
        yield one_object(labels, "1", table)


def first_nonassociative_magma(n: int = 3) -> OriginalGraph:
    for M in unital_magmas(n):
        if not validate_category(M):
            return M
    raise LookupError(f"every unital magma of order {n} is associative")


def m3() -> OriginalGraph:
    """The canonical non-associative unital magma of order 3 (found by search)."""
    return first_nonassociative_magma(3)


# -- ordered fixtures --------------------------------------------------------


def ordered_from(G: OriginalGraph, pairs) -> OrderedGraph:
    """Order the edges of ``G`` by the label pairs ``(lower, upper)``."""
    order = ExplicitOrder(G.graph, [(G.edge(x), G.edge(y)) for x, y in pairs])
    return OrderedGraph(G.graph, order, G.units, G.contact)


def chain_monoid(z_on_top: bool = True) -> OrderedGraph:
    """The monoid ``{1, z}`` with ``z z = z``, ordered as a 2-chain."""
    M = one_object(["1", "z"], "1", {("1", "1"): "1", ("1", "z"): "z", ("z", "1"): "z", ("z", "z"): "z"})
    return ordered_from(M, [("1", "z")] if z_on_top else [("z", "1")])


def ordered_arrow() -> OrderedGraph:
    """Two objects with absorbing loops ``z_0, z_1`` and ``a <= b`` from 0 to 1.

    Each ``z`` sends every edge it meets to ``b``; on loops ``1 <= z``.
    """
    edges = [("1_0", "0", "0"), ("z_0", "0", "0"), ("a", "0", "1"), ("b", "0", "1"),
             ("1_1", "1", "1"), ("z_1", "1", "1")]
    units = {"0": "1_0", "1": "1_1"}
    table = {}
    for label, src, dst in edges:
        table[units[src], label] = label
        table[label, units[dst]] = label
    table["z_0", "z_0"] = "z_0"
    table["z_1", "z_1"] = "z_1"
    for x in ("a", "b"):
        table["z_0", x] = "b"
        table[x, "z_1"] = "b"
    G = original_from_table(["0", "1"], edges, units, table)
    return ordered_from(G, [("1_0", "z_0"), ("a", "b"), ("1_1", "z_1")])


# -- graphs -----------------------------------------------------------------


def edge_label(a, b, k: int) -> str:
    return f"{a}{b}.{k}"


def graph_from_counts(vertices, counts: dict) -> FiniteGraph:
    """A graph with ``counts[(a, b)]`` edges labelled ``"ab.k"``."""
    return FiniteGraph(
        vertices,
        [Edge(a, b, edge_label(a, b, k)) for (a, b), n in counts.items() for k in range(n)],
    )


def graphs(n_vertices: int, max_edges: int, up_to_iso: bool = False,
           loops_required: bool = False) -> Iterator[FiniteGraph]:
    """Graphs on vertices ``"0", "1", ...`` with at most ``max_edges`` per pair.

    With ``up_to_iso`` only the lexicographically least count table of each
    relabelling class is kept.  With ``loops_required`` every vertex carries
    at least one loop.
    """
    vs = [str(i) for i in range(n_vertices)]
    pairs = [(a, b) for a in vs for b in vs]
    lo = {(a, b): (1 if loops_required and a == b else 0) for a, b in pairs}
    seen = set()
    for counts in itertools.product(*(range(lo[p], max_edges + 1) for p in pairs)):
        table = dict(zip(pairs, counts))
        if up_to_iso:
            key = min(
                tuple(table[(perm[int(a)], perm[int(b)])] for a, b in pairs)
                for perm in itertools.permutations(vs)
            )
            if key in seen:
                continue
            seen.add(key)
        yield graph_from_counts(vs, table)


def small_graphs(max_vertices: int, max_edges: int, up_to_iso: bool = True,
                 loops_required: bool = False) -> list[FiniteGraph]:
    out = []
    for n in range(1, max_vertices + 1):
        out.extend(graphs(n, max_edges, up_to_iso, loops_required))
    return out


def contact_tables(G: FiniteGraph) -> Iterator[ContactTable]:
    """All total contact tables on ``G``, lexicographically."""
    pairs = [
        (x, y)
        for a in G.vertices for b in G.vertices for x in G.hom(a, b)
        for c in G.vertices for y in G.hom(b, c)
    ]
    choices = [G.hom(x.src, y.dst) for x, y in pairs]
    for values in itertools.product(*choices):
        yield ContactTable(G, dict(zip(pairs, values)), check=False)


def first_contact_table(G: FiniteGraph) -> ContactTable | None:
    return next(contact_tables(G), None)


# -- posets -----------------------------------------------------------------


def posets(n: int) -> Iterator[FinitePoset]:
    """Labelled partial orders on ``"0", ..., str(n-1)``."""
    X = FiniteSet(str(i) for i in range(n))
    off = [(x, y) for x in X for y in X if x != y]
    for bits in itertools.product((0, 1), repeat=len(off)):
        rel = {(x, x) for x in X} | {p for p, b in zip(off, bits) if b}
        try:
            yield FinitePoset(X, rel)
        except ValueError:
            continue


def all_posets_up_to(n: int) -> list[FinitePoset]:
    return [P for k in range(n + 1) for P in posets(k)]
