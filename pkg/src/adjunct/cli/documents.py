"""JSON structure documents: parsing, reference resolution and rendering.

Every document is an object with ``"schema": 1`` and a ``"kind"``.  A
document may carry ``"defs"``, a table of named sub-documents; wherever a
document is expected, a string names an entry of an enclosing ``defs``
table, and a string starting with ``@`` names a built-in fixture.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable

from adjunct import catalog
from adjunct.finset import FinitePoset, FiniteSet, Mapping, chain
from adjunct.graphs import ContactTable, Edge, FiniteGraph, ProductGraph, Transport, carte_biproduct
from adjunct.ordered import ExplicitOrder, OrderedGraph
from adjunct.quantale import Quantale, VTransport, WeightedGraph, boolean, tropical, validate_quantale
from adjunct.structure import Character, OriginalGraph

SCHEMA = 1

KINDS = (
    "set", "mapping", "poset", "graph", "transport", "original_graph", "ordered_graph",
    "character", "quantale", "weighted_graph", "vtransport", "task",
)

BUILTINS: dict[str, Callable[[], Any]] = {
    "walking_arrow": catalog.walking_arrow,
    "composable_pair": catalog.composable_pair,
    "z2": catalog.z2,
    "m3": catalog.m3,
    "boolean": boolean,
    "tropical": tropical,
    "chain_monoid": catalog.chain_monoid,
    "chain_monoid_reversed": lambda: catalog.chain_monoid(False),
    "ordered_arrow": catalog.ordered_arrow,
    "chain2": lambda: chain(2),
    "chain3": lambda: chain(3),
}


class ParseError(ValueError):
    """A syntax or validation error with its position in the document."""

    def __init__(self, message: str, path: str = "$", line: int | None = None, column: int | None = None):
        where = f"line {line}, column {column}" if line is not None else path
        super().__init__(f"{where}: {message}")
        self.message = message
        self.path = path
        self.line = line
        self.column = column


@dataclass
class Document:
    kind: str
    body: dict
    value: Any


class _Scope:
    def __init__(self, defs: dict, parent: "_Scope | None", path: str):
        self.defs = defs
        self.parent = parent
        self.path = path
        self.cache: dict = {}

    def lookup(self, name: str, path: str):
        scope = self
        while scope is not None:
            if name in scope.defs:
                if name not in scope.cache:
                    scope.cache[name] = None  # marks a definition under construction
                    scope.cache[name] = resolve(scope.defs[name], scope, f"{scope.path}.defs.{name}")
                elif scope.cache[name] is None:
                    raise ParseError(f"cyclic reference {name!r}", path)
                return scope.cache[name]
            scope = scope.parent
        raise ParseError(f"dangling reference {name!r}", path)


def loads(text: str | bytes) -> dict:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc.reason}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("a document must be a JSON object")
    return data


def parse(text: str | bytes) -> Document:
    """Parse and validate a document; raises :class:`ParseError`."""
    data = loads(text)
    value = _build(data, None, "$")
    return Document(data["kind"], data, value)


def resolve(ref, scope: "_Scope | None", path: str):
    if isinstance(ref, dict):
        return _build(ref, scope, path)
    if isinstance(ref, str):
        if ref.startswith("@"):
            key = ref[1:]
            if key not in BUILTINS:
                raise ParseError(f"unknown built-in {ref!r}", path)
            return BUILTINS[key]()
        if scope is None:
            raise ParseError(f"dangling reference {ref!r}", path)
        return scope.lookup(ref, path)
    raise ParseError("expected a document or a reference", path)


def _need(body: dict, key: str, path: str, types=None):
    if key not in body:
        raise ParseError(f"missing field {key!r}", path)
    value = body[key]
    if types is not None and not isinstance(value, types):
        raise ParseError(f"field {key!r} has the wrong type", f"{path}.{key}")
    return value


def _build(body, parent: "_Scope | None", path: str):
    if not isinstance(body, dict):
        raise ParseError("expected a JSON object", path)
    if body.get("schema") != SCHEMA:
        raise ParseError(f"unsupported schema {body.get('schema')!r}", f"{path}.schema")
    kind = body.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", f"{path}.kind")
    defs = body.get("defs", {})
    if not isinstance(defs, dict):
        raise ParseError("defs must be an object", f"{path}.defs")
    scope = _Scope(defs, parent, path) if defs else parent
    try:
        return _BUILDERS[kind](body, scope, path)
    except ParseError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(str(exc).strip("'\""), path) from None


# -- builders -----------------------------------------------------------------


def _as_key(x):
    return tuple(_as_key(y) for y in x) if isinstance(x, list) else x


def _pairs(spec, path):
    """A mapping given as an object or as a list of ``[key, value]`` pairs."""
    if isinstance(spec, dict):
        return list(spec.items())
    if isinstance(spec, list):
        out = []
        for i, item in enumerate(spec):
            if not (isinstance(item, list) and len(item) == 2):
                raise ParseError("expected a [key, value] pair", f"{path}[{i}]")
            out.append((_as_key(item[0]), _as_key(item[1])))
        return out
    raise ParseError("expected an object or a list of pairs", path)


def _build_set(body, scope, path):
    elems = _need(body, "elements", path, list)
    return FiniteSet(elems)


def _build_mapping(body, scope, path):
    S = resolve(_need(body, "source", path), scope, f"{path}.source")
    T = resolve(_need(body, "target", path), scope, f"{path}.target")
    if not (isinstance(S, FiniteSet) and isinstance(T, FiniteSet)):
        raise ParseError("mapping source and target must be sets", path)
    assignment = dict(_pairs(_need(body, "assignment", path), f"{path}.assignment"))
    for x in S:
        if x not in assignment:
            raise ParseError(f"element {x!r} is not assigned", f"{path}.assignment")
        if assignment[x] not in T:
            raise ParseError(f"value {assignment[x]!r} is not in the target", f"{path}.assignment.{x}")
    return Mapping(S, T, assignment)


def _build_poset(body, scope, path):
    X = FiniteSet(_need(body, "elements", path, list))
    leq = body.get("leq", [])
    pairs = set()
    for i, p in enumerate(leq):
        if not (isinstance(p, list) and len(p) == 2 and p[0] in X and p[1] in X):
            raise ParseError("order pair must name two elements", f"{path}.leq[{i}]")
        pairs.add(tuple(p))
    try:
        return FinitePoset(X, pairs | {(x, x) for x in X})
    except ValueError as exc:
        raise ParseError(f"non-poset order: {exc}", f"{path}.leq") from None


def _build_graph(body, scope, path):
    vertices = _need(body, "vertices", path, list)
    vs = set()
    for i, v in enumerate(vertices):
        if not isinstance(v, str):
            raise ParseError("vertex names must be strings", f"{path}.vertices[{i}]")
        if v in vs:
            raise ParseError(f"duplicate vertex {v!r}", f"{path}.vertices[{i}]")
        vs.add(v)
    edges, labels = [], set()
    for i, e in enumerate(body.get("edges", [])):
        p = f"{path}.edges[{i}]"
        if not isinstance(e, dict):
            raise ParseError("an edge must be an object", p)
        label = _need(e, "label", p, str)
        for end in ("src", "dst"):
            if _need(e, end, p) not in vs:
                raise ParseError(f"unknown vertex {e[end]!r}", f"{p}.{end}")
        if label in labels:
            raise ParseError(f"duplicate edge label {label!r}", f"{p}.label")
        labels.add(label)
        edges.append(Edge(e["src"], e["dst"], label))
    return FiniteGraph(vertices, edges)


def _graph_of(obj):
    if isinstance(obj, FiniteGraph):
        return obj
    if isinstance(obj, (OriginalGraph, OrderedGraph)):
        return obj.graph
    return None


def _edge_lookup(G: FiniteGraph) -> dict:
    return {_as_key(_label(e)): e for e in G.edges}


def _edge(lookup: dict, key, path):
    key = _as_key(key)
    if key not in lookup:
        raise ParseError(f"unknown edge {key!r}", path)
    return lookup[key]


def _build_graph_ref(ref, scope, path):
    if isinstance(ref, dict) and "product" in ref and "kind" not in ref:
        parts = ref["product"]
        if not (isinstance(parts, list) and len(parts) == 2):
            raise ParseError("product needs two factors", path)
        L = _graph_of(resolve(parts[0], scope, f"{path}.product[0]"))
        R = _graph_of(resolve(parts[1], scope, f"{path}.product[1]"))
        if L is None or R is None:
            raise ParseError("product factors must be graphs", path)
        return carte_biproduct(L, R), None
    obj = resolve(ref, scope, path)
    G = _graph_of(obj)
    if G is None:
        raise ParseError("expected a graph", path)
    return G, obj


def _build_transport(body, scope, path):
    S, _ = _build_graph_ref(_need(body, "source", path), scope, f"{path}.source")
    T, _ = _build_graph_ref(_need(body, "target", path), scope, f"{path}.target")
    vmap = {}
    for k, v in _pairs(_need(body, "vertex_map", path), f"{path}.vertex_map"):
        if not S.has_vertex(k):
            raise ParseError(f"unknown source vertex {k!r}", f"{path}.vertex_map")
        if not T.has_vertex(v):
            raise ParseError(f"unknown target vertex {v!r}", f"{path}.vertex_map")
        vmap[k] = v
    for x in S.vertices:
        if x not in vmap:
            raise ParseError(f"vertex {x!r} is not mapped", f"{path}.vertex_map")
    src_edges, tgt_edges = _edge_lookup(S), _edge_lookup(T)
    emap = {}
    for k, v in _pairs(body.get("edge_map", {}), f"{path}.edge_map"):
        emap[_edge(src_edges, k, f"{path}.edge_map")] = _edge(tgt_edges, v, f"{path}.edge_map")
    try:
        return Transport(S, T, vmap, emap)
    except ValueError as exc:
        raise ParseError(str(exc), f"{path}.edge_map") from None


def _contact(G: FiniteGraph, triples, path) -> ContactTable:
    lookup = _edge_lookup(G)
    table = {}
    for i, t in enumerate(triples):
        p = f"{path}[{i}]"
        if not (isinstance(t, list) and len(t) == 3):
            raise ParseError("contact entries are [left, right, result]", p)
        x, y, z = (_edge(lookup, k, p) for k in t)
        if x.dst != y.src or z.src != x.src or z.dst != y.dst:
            raise ParseError("ill-typed contact entry", p)
        table[x, y] = z
    return ContactTable(G, table, check=False)


def _units(G: FiniteGraph, spec, path):
    lookup = _edge_lookup(G)
    if not isinstance(spec, dict):
        raise ParseError("units must map vertices to edge labels", path)
    return {a: _edge(lookup, spec.get(a), f"{path}.{a}") for a in G.vertices}


def _build_original(body, scope, path):
    G, _ = _build_graph_ref(_need(body, "graph", path), scope, f"{path}.graph")
    units = _units(G, _need(body, "units", path), f"{path}.units")
    contact = _contact(G, _need(body, "contact", path, list), f"{path}.contact")
    missing = contact.missing()
    if missing is not None:
        raise ParseError(f"contact table has no entry for {missing[0].label!r}, {missing[1].label!r}", f"{path}.contact")
    return OriginalGraph(G, units, contact)


def _build_ordered(body, scope, path):
    G, _ = _build_graph_ref(_need(body, "graph", path), scope, f"{path}.graph")
    lookup = _edge_lookup(G)
    pairs = []
    for i, p in enumerate(body.get("order", [])):
        if not (isinstance(p, list) and len(p) == 2):
            raise ParseError("order entries are [lower, upper]", f"{path}.order[{i}]")
        pairs.append(tuple(_edge(lookup, k, f"{path}.order[{i}]") for k in p))
    try:
        order = ExplicitOrder(G, pairs)
    except ValueError as exc:
        raise ParseError(f"non-poset order: {exc}", f"{path}.order") from None
    units = _units(G, body["units"], f"{path}.units") if "units" in body else None
    contact = _contact(G, body["contact"], f"{path}.contact") if "contact" in body else None
    if contact is not None and contact.missing() is not None:
        raise ParseError("contact table is not total", f"{path}.contact")
    return OrderedGraph(G, order, units, contact)


def _build_character(body, scope, path):
    base = resolve(_need(body, "base", path), scope, f"{path}.base")
    if isinstance(base, OrderedGraph):
        base = base.original()
    if not isinstance(base, OriginalGraph):
        raise ParseError("character base must be an original graph", f"{path}.base")
    G = base.graph
    raw_values = _need(body, "values", path, dict)
    values = {}
    for a in G.vertices:
        vs = raw_values.get(a)
        if not isinstance(vs, list):
            raise ParseError(f"no value list for vertex {a!r}", f"{path}.values")
        values[a] = tuple(vs)
    lookup = _edge_lookup(G)
    raw_action = _need(body, "action", path, dict)
    action = {}
    for label, table in raw_action.items():
        f = _edge(lookup, label, f"{path}.action")
        action[f] = dict(table)
    for f in G.edges:
        if f not in action:
            raise ParseError(f"no action for edge {f.label!r}", f"{path}.action")
    orders = None
    if "orders" in body:
        orders = {}
        for a in G.vertices:
            pairs = {tuple(p) for p in body["orders"].get(a, [])}
            try:
                FinitePoset(FiniteSet(values[a]), pairs | {(m, m) for m in values[a]})
            except ValueError as exc:
                raise ParseError(f"non-poset order: {exc}", f"{path}.orders.{a}") from None
            orders[a] = frozenset(pairs)
    return Character(base, values, action, orders)


def _build_quantale(body, scope, path):
    if "preset" in body:
        preset = body["preset"]
        if preset == "boolean":
            return boolean()
        if preset == "tropical":
            return tropical(int(body.get("truncation", 3)))
        raise ParseError(f"unknown preset {preset!r}", f"{path}.preset")
    order = _build_poset({"elements": _need(body, "elements", path, list), "leq": body.get("leq", [])}, scope, path)
    table = {}
    for i, t in enumerate(_need(body, "tensor", path, list)):
        if not (isinstance(t, list) and len(t) == 3):
            raise ParseError("tensor entries are [x, y, x.y]", f"{path}.tensor[{i}]")
        table[t[0], t[1]] = t[2]
    Q = Quantale(order, table, _need(body, "unit", path))
    v = validate_quantale(Q)
    if not v:
        law, *cell = v.witness
        raise ParseError(f"non-quantale table: {law} law fails at {cell!r}", f"{path}.tensor")
    return Q


def _build_weighted(body, scope, path):
    Q = resolve(_need(body, "quantale", path), scope, f"{path}.quantale")
    if not isinstance(Q, Quantale):
        raise ParseError("expected a quantale", f"{path}.quantale")
    vertices = _need(body, "vertices", path, list)
    weights = {}
    for i, t in enumerate(_need(body, "weights", path, list)):
        if not (isinstance(t, list) and len(t) == 3):
            raise ParseError("weight entries are [x, y, w]", f"{path}.weights[{i}]")
        weights[t[0], t[1]] = t[2]
    return WeightedGraph(Q, vertices, weights)


def _build_vtransport(body, scope, path):
    S = resolve(_need(body, "source", path), scope, f"{path}.source")
    T = resolve(_need(body, "target", path), scope, f"{path}.target")
    if not (isinstance(S, WeightedGraph) and isinstance(T, WeightedGraph)):
        raise ParseError("vtransport endpoints must be weighted graphs", path)
    vmap = dict(_pairs(_need(body, "vertex_map", path), f"{path}.vertex_map"))
    for x in S.vertices:
        if vmap.get(x) not in T.vertices:
            raise ParseError(f"vertex {x!r} has no valid image", f"{path}.vertex_map")
    return VTransport(S, T, vmap)


@dataclass
class TaskSpec:
    id: str
    op: str
    args: dict
    scope: Any
    path: str

    def arg(self, key: str, default=...):
        if key not in self.args:
            if default is ...:
                raise ParseError(f"missing argument {key!r}", f"{self.path}.args")
            return default
        return self.args[key]

    def obj(self, key: str):
        return resolve(self.arg(key), self.scope, f"{self.path}.args.{key}")


def _build_task(body, scope, path):
    op = _need(body, "op", path, str)
    args = body.get("args", {})
    if not isinstance(args, dict):
        raise ParseError("args must be an object", f"{path}.args")
    # Resolve references eagerly so dangling names surface at parse time.
    for key, val in args.items():
        if isinstance(val, dict) or (isinstance(val, str) and (val.startswith("@") or _defined(scope, val))):
            resolve(val, scope, f"{path}.args.{key}")
    return TaskSpec(body.get("id", op), op, args, scope, path)


def _defined(scope, name) -> bool:
    while scope is not None:
        if name in scope.defs:
            return True
        scope = scope.parent
    return False


_BUILDERS = {
    "set": _build_set,
    "mapping": _build_mapping,
    "poset": _build_poset,
    "graph": _build_graph,
    "transport": _build_transport,
    "original_graph": _build_original,
    "ordered_graph": _build_ordered,
    "character": _build_character,
    "quantale": _build_quantale,
    "weighted_graph": _build_weighted,
    "vtransport": _build_vtransport,
    "task": _build_task,
}


# -- rendering values back to documents ----------------------------------------


def _doc(kind: str, **fields) -> dict:
    return {"schema": SCHEMA, "kind": kind, **fields}


def _label(e: Edge):
    if isinstance(e.label, tuple) and len(e.label) == 2 and all(isinstance(x, Edge) for x in e.label):
        return [_label(e.label[0]), _label(e.label[1])]
    return e.label


def _vertex(v):
    return list(v) if isinstance(v, tuple) else v


def _graph_ref(G: FiniteGraph):
    if isinstance(G, ProductGraph):
        return {"product": [_graph_ref(G.left), _graph_ref(G.right)]}
    return to_document(G)


def to_document(value) -> dict:
    """Serialize a parsed value back into its normalized document."""
    if isinstance(value, Mapping):
        return _doc("mapping", source=to_document(value.source), target=to_document(value.target),
                    assignment={x: y for x, y in value.items()})
    if isinstance(value, FiniteSet):
        return _doc("set", elements=list(value.elements))
    if isinstance(value, FinitePoset):
        idx = value.carrier.index
        pairs = sorted((p for p in value.leq if p[0] != p[1]), key=lambda p: (idx(p[0]), idx(p[1])))
        return _doc("poset", elements=list(value.carrier.elements), leq=[list(p) for p in pairs])
    if isinstance(value, OriginalGraph):
        return _doc("original_graph", graph=_graph_ref(value.graph),
                    units={a: _label(value.units[a]) for a in value.graph.vertices},
                    contact=_contact_rows(value.contact))
    if isinstance(value, OrderedGraph):
        G = value.graph
        pos = {e: i for i, e in enumerate(G.edges)}
        pairs = sorted(
            ((x, y) for x in G.edges for y in G.hom(x.src, x.dst) if x != y and value.order.le(x, y)),
            key=lambda p: (pos[p[0]], pos[p[1]]),
        )
        doc = _doc("ordered_graph", graph=_graph_ref(G), order=[[_label(x), _label(y)] for x, y in pairs])
        if value.units is not None:
            doc["units"] = {a: _label(value.units[a]) for a in G.vertices}
        if value.contact is not None:
            doc["contact"] = _contact_rows(value.contact)
        return doc
    if isinstance(value, FiniteGraph):
        return _doc("graph", vertices=[_vertex(v) for v in value.vertices],
                    edges=[{"label": _label(e), "src": _vertex(e.src), "dst": _vertex(e.dst)} for e in value.edges])
    if isinstance(value, Transport):
        S = value.source
        plain = all(isinstance(x, str) for x in S.vertices)
        vmap = (
            {x: _vertex(value.vmap[x]) for x in S.vertices} if plain
            else [[_vertex(x), _vertex(value.vmap[x])] for x in S.vertices]
        )
        plain_edges = all(isinstance(_label(e), str) for e in S.edges)
        emap = (
            {_label(e): _label(value.emap[e]) for e in S.edges} if plain_edges
            else [[_label(e), _label(value.emap[e])] for e in S.edges]
        )
        return _doc("transport", source=_graph_ref(S), target=_graph_ref(value.target),
                    vertex_map=vmap, edge_map=emap)
    if isinstance(value, Character):
        G = value.base.graph
        doc = _doc("character", base=to_document(value.base),
                   values={a: list(value.values[a]) for a in G.vertices},
                   action={_label(f): {m: value.action[f][m] for m in value.values[f.dst]} for f in G.edges})
        if value.orders is not None:
            doc["orders"] = {
                a: sorted([list(p) for p in value.orders[a] if p[0] != p[1]])
                for a in G.vertices
            }
        return doc
    if isinstance(value, Quantale):
        poset = to_document(value.order)
        return _doc("quantale", elements=poset["elements"], leq=poset["leq"],
                    tensor=[[x, y, value.tensor(x, y)] for x in value.elements for y in value.elements],
                    unit=value.unit)
    if isinstance(value, WeightedGraph):
        return _doc("weighted_graph", quantale=to_document(value.quantale), vertices=list(value.vertices),
                    weights=[[x, y, value.w(x, y)] for x in value.vertices for y in value.vertices])
    if isinstance(value, VTransport):
        return _doc("vtransport", source=to_document(value.source), target=to_document(value.target),
                    vertex_map={x: value(x) for x in value.source.vertices})
    raise TypeError(f"cannot render {type(value).__name__} as a document")


def _contact_rows(c: ContactTable) -> list:
    return [[_label(x), _label(y), _label(c(x, y))] for x, y in c.composable_pairs() if (x, y) in c.table]


def normalize(body: dict) -> dict:
    """The canonical form of a document: parsed and rendered back.

    Task documents keep their own shape, with each definition normalized.
    """
    if body.get("kind") == "task":
        out = {k: v for k, v in body.items() if k != "defs"}
        out.setdefault("id", body.get("op"))
        out.setdefault("args", {})
        if body.get("defs"):
            scope = _build(body, None, "$").scope
            out["defs"] = {name: to_document(scope.lookup(name, f"$.defs.{name}")) for name in body["defs"]}
        return out
    return to_document(_build(body, None, "$"))


def dumps(body) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render(doc: Document) -> str:
    return dumps(normalize(doc.body))
