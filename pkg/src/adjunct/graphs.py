"""Finite directed multigraphs, transports between them, and currying.

Edges are ``Edge(src, dst, label)`` triples, so an edge knows its endpoints
and labels only need to be distinct within one ordered vertex pair.  An edge
of an exponential graph is a transform: its label is the tuple of components
indexed by the exponent's vertices in their stored order.

Composition of transports is written in diagrammatic order:
``compose_transports(f, g)`` applies ``f`` first.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple

from adjunct.checks import BudgetExceeded, Verdict


class Edge(NamedTuple):
    src: Hashable
    dst: Hashable
    label: Hashable


class ContactError(KeyError):
    """A contact (composition) is needed on a pair where none is defined."""


class MissingUnit(ValueError):
    pass


class FiniteGraph:
    """Vertices plus a finite edge set for every ordered pair of vertices."""

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable[Edge] = ()):
        self._vertices = tuple(vertices)
        self._index = {}
        for i, v in enumerate(self._vertices):
            if v in self._index:
                raise ValueError(f"duplicate vertex {v!r}")
            self._index[v] = i
        homs: dict = {}
        for e in edges:
            e = Edge(*e)
            if e.src not in self._index or e.dst not in self._index:
                raise ValueError(f"edge {e.label!r} has an unknown endpoint")
            hom = homs.setdefault((e.src, e.dst), [])
            if e in hom:
                raise ValueError(f"duplicate edge {e.label!r} from {e.src!r} to {e.dst!r}")
            hom.append(e)
        self._homs = {k: tuple(v) for k, v in homs.items()}
        self._edges = tuple(
            e for a in self._vertices for b in self._vertices for e in self._homs.get((a, b), ())
        )
        self._edge_set = frozenset(self._edges)
        self._hash = None

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def edges(self) -> tuple:
        return self._edges

    def index(self, v) -> int:
        return self._index[v]

    def has_vertex(self, v) -> bool:
        try:
            return v in self._index
        except TypeError:
            return False

    def has_edge(self, e) -> bool:
        return e in self._edge_set

    def hom(self, a, b) -> tuple:
        return self._homs.get((a, b), ())

    def hom_size(self, a, b) -> int:
        return len(self._homs.get((a, b), ()))

    def loops(self, a) -> tuple:
        return self.hom(a, a)

    def _key(self):
        return ("graph", self._vertices, self._edges)

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, FiniteGraph) and self._key() == other._key())

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


class ProductGraph(FiniteGraph):
    """Carte biproduct; keeps its factors so currying can find them."""

    def __init__(self, left: FiniteGraph, right: FiniteGraph):
        self.left = left
        self.right = right
        vertices = list(itertools.product(left.vertices, right.vertices))
        edges = [
            Edge((a, s), (b, t), (alpha, u))
            for a, s in vertices
            for b, t in vertices
            for alpha in left.hom(a, b)
            for u in right.hom(s, t)
        ]
        super().__init__(vertices, edges)

    def _key(self):
        return ("product", self.left._key(), self.right._key())


class ExponentialGraph(FiniteGraph):
    """All transports ``exponent -> base`` with every component family as an edge.

    Vertices are enumerated lazily; membership and hom sets are computed
    structurally so that large exponentials can serve as targets cheaply.
    """

    def __init__(self, exponent: FiniteGraph, base: FiniteGraph):
        self.exponent = exponent
        self.base = base
        self._verts = None
        self._idx = None
        self._hash = None

    @property
    def vertices(self) -> tuple:
        if self._verts is None:
            self._verts = tuple(transports(self.exponent, self.base))
        return self._verts

    @property
    def edges(self) -> tuple:
        return tuple(e for a in self.vertices for b in self.vertices for e in self.hom(a, b))

    def index(self, v) -> int:
        if self._idx is None:
            self._idx = {w: i for i, w in enumerate(self.vertices)}
        return self._idx[v]

    def has_vertex(self, v) -> bool:
        return isinstance(v, Transport) and v.source == self.exponent and v.target == self.base

    def has_edge(self, e) -> bool:
        if not (isinstance(e, tuple) and len(e) == 3):
            return False
        phi, psi, comps = e
        if not (self.has_vertex(phi) and self.has_vertex(psi)):
            return False
        if not isinstance(comps, tuple) or len(comps) != len(self.exponent.vertices):
            return False
        return all(
            self.base.has_edge(c) and c.src == phi.v(s) and c.dst == psi.v(s)
            for s, c in zip(self.exponent.vertices, comps)
        )

    def hom(self, phi, psi) -> tuple:
        factors = [self.base.hom(phi.v(s), psi.v(s)) for s in self.exponent.vertices]
        return tuple(Edge(phi, psi, comps) for comps in itertools.product(*factors))

    def hom_size(self, phi, psi) -> int:
        n = 1
        for s in self.exponent.vertices:
            n *= self.base.hom_size(phi.v(s), psi.v(s))
        return n

    def _key(self):
        return ("exponential", self.exponent._key(), self.base._key())

    def __repr__(self) -> str:
        return f"ExponentialGraph({self.exponent!r} -> {self.base!r})"


class Transport:
    """A vertex map plus edge maps respecting endpoints."""

    __slots__ = ("source", "target", "vmap", "emap", "_key", "_hash")

    def __init__(self, source: FiniteGraph, target: FiniteGraph,
                 vmap: Mapping, emap: Mapping, check: bool = True):
        self.source = source
        self.target = target
        self.vmap = vmap
        self.emap = emap
        if check:
            for x in source.vertices:
                if x not in vmap or not target.has_vertex(vmap[x]):
                    raise ValueError(f"vertex {x!r} has no valid image")
            for e in source.edges:
                if e not in emap:
                    raise ValueError(f"edge {e!r} has no image")
                img = emap[e]
                if not (target.has_edge(img) and img.src == vmap[e.src] and img.dst == vmap[e.dst]):
                    raise ValueError(f"edge {e!r} is sent outside the required edge set")
        self._key = (
            tuple(vmap[x] for x in source.vertices),
            tuple(emap[e] for e in source.edges),
        )
        self._hash = None

    def v(self, x):
        return self.vmap[x]

    def e(self, edge):
        return self.emap[edge]

    def __eq__(self, other) -> bool:
        return (
            self is other
            or isinstance(other, Transport)
            and self._key == other._key
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key)
        return self._hash

    def __repr__(self) -> str:
        vs = ", ".join(f"{x!r}->{y!r}" for x, y in zip(self.source.vertices, self._key[0]))
        return f"Transport({vs})"


# -- basic constructions ------------------------------------------------------


def identity_transport(X: FiniteGraph) -> Transport:
    return Transport(X, X, {x: x for x in X.vertices}, {e: e for e in X.edges}, check=False)


def compose_transports(f: Transport, g: Transport) -> Transport:
    """Apply ``f`` first, then ``g``."""
    if f.target != g.source:
        raise ValueError("transports are not composable")
    return Transport(
        f.source,
        g.target,
        {x: g.vmap[y] for x, y in f.vmap.items()},
        {e: g.emap[d] for e, d in f.emap.items()},
        check=False,
    )


@lru_cache(maxsize=4096)
def carte_biproduct(X: FiniteGraph, Y: FiniteGraph) -> ProductGraph:
    return ProductGraph(X, Y)


def product_transport(f: Transport, g: Transport) -> Transport:
    P = carte_biproduct(f.source, g.source)
    Q = carte_biproduct(f.target, g.target)
    vmap = {(a, s): (f.vmap[a], g.vmap[s]) for a, s in P.vertices}
    emap = {
        e: Edge(vmap[e.src], vmap[e.dst], (f.emap[e.label[0]], g.emap[e.label[1]]))
        for e in P.edges
    }
    return Transport(P, Q, vmap, emap, check=False)


@lru_cache(maxsize=4096)
def exponential_graph(T: FiniteGraph, Y: FiniteGraph) -> ExponentialGraph:
    return ExponentialGraph(T, Y)


def components(alpha: Edge) -> tuple:
    """Components of a transform, aligned with the exponent's vertices."""
    return alpha.label


def component(alpha: Edge, s) -> Edge:
    phi = alpha.src
    return alpha.label[phi.source.index(s)]


def make_transform(phi: Transport, psi: Transport, comps: Mapping) -> Edge:
    return Edge(phi, psi, tuple(comps[s] for s in phi.source.vertices))


def count_transports(T: FiniteGraph, Y: FiniteGraph, cap: int | None = None) -> int:
    """Number of transports ``T -> Y``; stops early once it passes ``cap``."""
    total = 0
    Tv, Te = T.vertices, T.edges
    for img in itertools.product(Y.vertices, repeat=len(Tv)):
        vmap = dict(zip(Tv, img))
        n = 1
        for e in Te:
            n *= Y.hom_size(vmap[e.src], vmap[e.dst])
            if n == 0:
                break
        total += n
        if cap is not None and total > cap:
            return total
    return total


def transports(T: FiniteGraph, Y: FiniteGraph, budget: int | None = None,
               vmap: Mapping | None = None) -> Iterator[Transport]:
    """All transports ``T -> Y`` in lexicographic order.

    With ``vmap`` given, only the transports over that vertex map.
    """
    if budget is not None and vmap is None:
        needed = count_transports(T, Y, cap=budget)
        if needed > budget:
            raise BudgetExceeded(needed, budget)
    Tv, Te = T.vertices, T.edges
    if vmap is not None:
        vertex_maps = [tuple(vmap[x] for x in Tv)]
    else:
        vertex_maps = itertools.product(Y.vertices, repeat=len(Tv))
    for img in vertex_maps:
        vm = dict(zip(Tv, img))
        choices = [Y.hom(vm[e.src], vm[e.dst]) for e in Te]
        for eimg in itertools.product(*choices):
            yield Transport(T, Y, vm, dict(zip(Te, eimg)), check=False)


def target_change(g: Transport, T: FiniteGraph) -> Transport:
    """``phi -> phi then g`` on vertices and componentwise ``g`` on transforms."""
    A = exponential_graph(T, g.source)
    B = exponential_graph(T, g.target)
    vmap = {phi: compose_transports(phi, g) for phi in A.vertices}
    emap = {
        alpha: Edge(vmap[alpha.src], vmap[alpha.dst], tuple(g.emap[c] for c in alpha.label))
        for alpha in A.edges
    }
    return Transport(A, B, vmap, emap, check=False)


# -- units and contact ---------------------------------------------------------


def check_units(X: FiniteGraph, units: Mapping) -> None:
    for a in X.vertices:
        u = units.get(a)
        if u is None or u.src != a or u.dst != a or not X.has_edge(u):
            raise MissingUnit(f"vertex {a!r} has no chosen unit loop")


def first_loop_units(X: FiniteGraph) -> dict:
    """Choose the first loop at every vertex as its unit."""
    units = {}
    for a in X.vertices:
        loops = X.loops(a)
        if not loops:
            raise MissingUnit(f"vertex {a!r} has no loop to serve as unit")
        units[a] = loops[0]
    return units


class ContactTable:
    """A composition of edges ``E(a,b) x E(b,c) -> E(a,c)``, stored as a dict.

    Pairs are composed in diagrammatic order: ``table(alpha, beta)`` with
    ``alpha: a -> b`` and ``beta: b -> c``.
    """

    def __init__(self, graph: FiniteGraph, table: Mapping, check: bool = True):
        self.graph = graph
        self.table = dict(table)
        if check:
            for (x, y), z in self.table.items():
                if x.dst != y.src or z.src != x.src or z.dst != y.dst or not graph.has_edge(z):
                    raise ValueError(f"contact of {x!r} and {y!r} is ill-typed")

    def __call__(self, alpha: Edge, beta: Edge) -> Edge:
        try:
            return self.table[alpha, beta]
        except KeyError:
            raise ContactError(f"no contact defined for {alpha!r} and {beta!r}") from None

    def composable_pairs(self) -> Iterator[tuple[Edge, Edge]]:
        G = self.graph
        for a in G.vertices:
            for b in G.vertices:
                for alpha in G.hom(a, b):
                    for c in G.vertices:
                        for beta in G.hom(b, c):
                            yield alpha, beta

    def missing(self) -> tuple | None:
        for pair in self.composable_pairs():
            if pair not in self.table:
                return pair
        return None

    def is_total(self) -> bool:
        return self.missing() is None


def natural_contact(X: FiniteGraph, T: FiniteGraph, uX: Mapping, uT: Mapping) -> ContactTable:
    """The partial contact on ``X x T`` that splits an edge through unit slices.

    Defined on ``<alpha,1_s> . <1_b,u>`` and ``<1_a,u> . <alpha,1_t>``, both
    giving ``<alpha,u>``; these are the only pairs evaluation needs for the
    sections transport.
    """
    P = carte_biproduct(X, T)
    table = {}
    for e in P.edges:
        (a, s), (b, t) = e.src, e.dst
        alpha, u = e.label
        table[Edge((a, s), (b, s), (alpha, uT[s])), Edge((b, s), (b, t), (uX[b], u))] = e
        table[Edge((a, s), (a, t), (uX[a], u)), Edge((a, t), (b, t), (alpha, uT[t]))] = e
    return ContactTable(P, table, check=False)


# -- evaluation, sections, name and realization -------------------------------


def sections_transport(X: FiniteGraph, T: FiniteGraph, uX: Mapping, uT: Mapping) -> Transport:
    check_units(X, uX)
    check_units(T, uT)
    P = carte_biproduct(X, T)
    E = exponential_graph(T, P)
    lam = {}
    for x in X.vertices:
        lam[x] = Transport(
            T, P,
            {t: (x, t) for t in T.vertices},
            {u: Edge((x, u.src), (x, u.dst), (uX[x], u)) for u in T.edges},
            check=False,
        )
    emap = {
        alpha: Edge(
            lam[alpha.src], lam[alpha.dst],
            tuple(Edge((alpha.src, s), (alpha.dst, s), (alpha, uT[s])) for s in T.vertices),
        )
        for alpha in X.edges
    }
    return Transport(X, E, lam, emap, check=False)


def evaluate(alpha: Edge, u: Edge, contact: ContactTable, side: str = "pre") -> Edge:
    """Precontact ``alpha_s . psi(u)`` or postcontact ``phi(u) . alpha_t``."""
    phi, psi = alpha.src, alpha.dst
    if side == "pre":
        return contact(component(alpha, u.src), psi.emap[u])
    if side == "post":
        return contact(phi.emap[u], component(alpha, u.dst))
    raise ValueError(f"side must be 'pre' or 'post', not {side!r}")


def evaluation(Y: FiniteGraph, T: FiniteGraph, contact: ContactTable, side: str = "pre",
               exponential: FiniteGraph | None = None) -> Transport:
    """The evaluation transport on ``Y^T x T``.

    ``exponential`` may be a subgraph of ``Y^T`` (for example only natural
    transforms); it defaults to the full exponential graph.
    """
    E = exponential if exponential is not None else exponential_graph(T, Y)
    P = carte_biproduct(E, T)
    vmap = {(phi, s): phi.vmap[s] for phi, s in P.vertices}
    emap = {e: evaluate(e.label[0], e.label[1], contact, side) for e in P.edges}
    return Transport(P, Y, vmap, emap, check=False)


def _factors(f: Transport) -> tuple[FiniteGraph, FiniteGraph]:
    P = f.source
    if not isinstance(P, ProductGraph):
        raise TypeError("expected a transport out of a Carte biproduct")
    return P.left, P.right


def name_appointment(f: Transport, uX: Mapping, uT: Mapping) -> Transport:
    """Curry ``f: X x T -> Y`` into ``g: X -> Y^T``."""
    X, T = _factors(f)
    check_units(X, uX)
    check_units(T, uT)
    Y = f.target
    E = exponential_graph(T, Y)
    fv, fe = f.vmap, f.emap
    g0 = {}
    for x in X.vertices:
        g0[x] = Transport(
            T, Y,
            {t: fv[(x, t)] for t in T.vertices},
            {u: fe[Edge((x, u.src), (x, u.dst), (uX[x], u))] for u in T.edges},
            check=False,
        )
    emap = {}
    for alpha in X.edges:
        a, b = alpha.src, alpha.dst
        emap[alpha] = Edge(
            g0[a], g0[b],
            tuple(fe[Edge((a, s), (b, s), (alpha, uT[s]))] for s in T.vertices),
        )
    return Transport(X, E, g0, emap, check=False)


def realization(g: Transport, contact: ContactTable, side: str = "pre") -> Transport:
    """Uncurry ``g: X -> Y^T`` with the pre- or post-contact rule."""
    E = g.target
    if not isinstance(E, ExponentialGraph):
        raise TypeError("expected a transport into an exponential graph")
    X, T, Y = g.source, E.exponent, E.base
    P = carte_biproduct(X, T)
    tpos = {s: i for i, s in enumerate(T.vertices)}
    gv, ge = g.vmap, g.emap
    vmap = {(x, t): gv[x].vmap[t] for x, t in P.vertices}
    emap = {}
    for e in P.edges:
        alpha, u = e.label
        comps = ge[alpha].label
        if side == "pre":
            emap[e] = contact(comps[tpos[u.src]], gv[alpha.dst].emap[u])
        elif side == "post":
            emap[e] = contact(gv[alpha.src].emap[u], comps[tpos[u.dst]])
        else:
            raise ValueError(f"side must be 'pre' or 'post', not {side!r}")
    return Transport(P, Y, vmap, emap, check=False)


# -- decomposability and neutrality ------------------------------------------


def _slice_edges(f: Transport, uX, uT, alpha: Edge, u: Edge):
    """``f<alpha,1_s>, f<1_b,u>, f<1_a,u>, f<alpha,1_t>`` for a biproduct edge."""
    a, b, s, t = alpha.src, alpha.dst, u.src, u.dst
    fe = f.emap
    return (
        fe[Edge((a, s), (b, s), (alpha, uT[s]))],
        fe[Edge((b, s), (b, t), (uX[b], u))],
        fe[Edge((a, s), (a, t), (uX[a], u))],
        fe[Edge((a, t), (b, t), (alpha, uT[t]))],
    )


def decomposition_pair(f: Transport, uX, uT, contact: ContactTable, side: str, e: Edge):
    """``(f<alpha,u>, composite through unit slices)`` for one biproduct edge."""
    alpha, u = e.label
    a_s, b_u, a_u, a_t = _slice_edges(f, uX, uT, alpha, u)
    if side == "pre":
        return f.emap[e], contact(a_s, b_u)
    if side == "post":
        return f.emap[e], contact(a_u, a_t)
    raise ValueError(f"side must be 'pre' or 'post', not {side!r}")


def decomposability_check(f: Transport, uX: Mapping, uT: Mapping,
                          contact: ContactTable, side: str = "pre") -> Verdict:
    """Equality of ``f<alpha,u>`` with its factorization through unit slices.

    The witness is the first violating ``(alpha, u)`` in edge order.
    """
    n = 0
    for e in f.source.edges:
        n += 1
        value, composite = decomposition_pair(f, uX, uT, contact, side, e)
        if value != composite:
            return Verdict(False, e.label, n)
    return Verdict(True, None, n)


def neutrality_cases(g: Transport, uX: Mapping, uT: Mapping, contact: ContactTable, side: str):
    """Yield ``(case, lhs, rhs)`` for every neutrality equation on one side.

    Cases are tagged ``("vertex", a, u)`` for the transports ``g(a)`` and
    ``("edge", alpha, s)`` for the transforms ``g(alpha)``.
    """
    E = g.target
    X, T = g.source, E.exponent
    tpos = {s: i for i, s in enumerate(T.vertices)}
    gv, ge = g.vmap, g.emap
    for a in X.vertices:
        unit_comps = ge[uX[a]].label
        for u in T.edges:
            gu = gv[a].emap[u]
            if side == "pre":
                lhs = contact(unit_comps[tpos[u.src]], gu)
            elif side == "post":
                lhs = contact(gu, unit_comps[tpos[u.dst]])
            else:
                raise ValueError(f"side must be 'pre' or 'post', not {side!r}")
            yield ("vertex", a, u), lhs, gu
    for alpha in X.edges:
        comps = ge[alpha].label
        for s in T.vertices:
            c = comps[tpos[s]]
            if side == "pre":
                lhs = contact(c, gv[alpha.dst].emap[uT[s]])
            else:
                lhs = contact(gv[alpha.src].emap[uT[s]], c)
            yield ("edge", alpha, s), lhs, c


def neutrality_check(g: Transport, uX: Mapping, uT: Mapping,
                     contact: ContactTable, side: str = "pre") -> Verdict:
    n = 0
    for case, lhs, rhs in neutrality_cases(g, uX, uT, contact, side):
        n += 1
        if lhs != rhs:
            return Verdict(False, case, n)
    return Verdict(True, None, n)


def first_triangle_check(X: FiniteGraph, T: FiniteGraph, uX: Mapping, uT: Mapping,
                         side: str = "pre") -> Verdict:
    """``(lambda x Id)`` followed by evaluation is the identity on ``X x T``."""
    lam = sections_transport(X, T, uX, uT)
    contact = natural_contact(X, T, uX, uT)
    P = carte_biproduct(X, T)
    n = 0
    for e in P.edges:
        n += 1
        alpha, u = e.label
        if evaluate(lam.emap[alpha], u, contact, side) != e:
            return Verdict(False, e.label, n)
    for x, t in P.vertices:
        if lam.vmap[x].vmap[t] != (x, t):
            return Verdict(False, (x, t), n)
    return Verdict(True, None, n)


# -- exhaustive round-trip sweep ----------------------------------------------


def round_trip_instance(X: FiniteGraph, uX, T: FiniteGraph, uT, Y: FiniteGraph,
                        contact: ContactTable, cap: int,
                        decomposable=None, neutral=None) -> dict | None:
    """Check both reversal claims on one instance.

    Returns ``None`` when the instance has more than ``cap`` forms or names.
    ``decomposable(f)`` and ``neutral(g)`` default to the equality checks
    (predecomposable; pre- and post-neutral) and may be swapped for other
    predicates with the same meaning.
    """
    if decomposable is None:
        decomposable = lambda f: decomposability_check(f, uX, uT, contact, "pre").ok
    if neutral is None:
        neutral = lambda g: (neutrality_check(g, uX, uT, contact, "pre").ok
                             and neutrality_check(g, uX, uT, contact, "post").ok)
    P = carte_biproduct(X, T)
    if count_transports(P, Y, cap=cap) > cap:
        return None
    E = exponential_graph(T, Y)
    if len(T.vertices) and count_transports(T, Y, cap=cap) > cap:
        return None
    if count_transports(X, E, cap=cap) > cap:
        return None
    out = {"forms": 0, "decomposable": 0, "names": 0, "neutral": 0,
           "failures": [], "non_decomposable": None, "non_neutral": None}
    seen_names = set()
    for f in transports(P, Y):
        out["forms"] += 1
        if decomposable(f):
            out["decomposable"] += 1
            g = name_appointment(f, uX, uT)
            if realization(g, contact, "pre") != f or g in seen_names:
                out["failures"].append(("form", f))
            seen_names.add(g)
        elif out["non_decomposable"] is None:
            out["non_decomposable"] = f
    for g in transports(X, E):
        out["names"] += 1
        if neutral(g):
            out["neutral"] += 1
            if name_appointment(realization(g, contact, "pre"), uX, uT) != g:
                out["failures"].append(("name", g))
        elif out["non_neutral"] is None:
            out["non_neutral"] = g
    return out
