"""Graphs whose edge sets are partially ordered.

All comparisons are written with ``<=``; the direction of every inequality
is an explicit argument:

* decomposition and neutrality: ``"lower"`` asks the composite through the
  unit slices to lie below the plain value, ``"upper"`` asks it to lie above.
* transforms: ``"continuous"`` asks ``alpha_s . psi(u) <= phi(u) . alpha_t``,
  ``"cocontinuous"`` asks the reverse.
* social points: ``"lower"`` asks ``h^F(f^F(m)) <= (h . f)^F(m)``,
  ``"upper"`` the reverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from adjunct.checks import BudgetExceeded, HypothesisFailed, Verdict
from adjunct.graphs import (
    ContactTable,
    Edge,
    FiniteGraph,
    Transport,
    carte_biproduct,
    component,
    count_transports,
    decomposition_pair,
    exponential_graph,
    name_appointment,
    neutrality_cases,
    realization,
    transports,
)
from adjunct.structure import (
    Character,
    OriginalGraph,
    _composable_into,
    character_transforms,
    point_of_transform,
    transform_of_point,
)


class EdgeOrder:
    """A partial order on each edge set of a graph."""

    def le(self, x: Edge, y: Edge) -> bool:
        raise NotImplementedError


class DiscreteOrder(EdgeOrder):
    def le(self, x, y):
        return x == y


class ExplicitOrder(EdgeOrder):
    """Order given by pairs; reflexive pairs are added automatically."""

    def __init__(self, graph: FiniteGraph, pairs=()):
        rel = {(e, e) for e in graph.edges}
        for x, y in pairs:
            if not (graph.has_edge(x) and graph.has_edge(y)):
                raise ValueError(f"order pair ({x!r}, {y!r}) uses an unknown edge")
            if (x.src, x.dst) != (y.src, y.dst):
                raise ValueError(f"order pair ({x!r}, {y!r}) compares different edge sets")
            rel.add((x, y))
        for x, y in rel:
            if x != y and (y, x) in rel:
                raise ValueError(f"edge order is not antisymmetric at ({x!r}, {y!r})")
            for z in graph.hom(x.src, x.dst):
                if (y, z) in rel and (x, z) not in rel:
                    raise ValueError(f"edge order is not transitive at ({x!r}, {y!r}, {z!r})")
        self.graph = graph
        self.pairs = frozenset(rel)

    def le(self, x, y):
        return (x, y) in self.pairs


class ProductOrder(EdgeOrder):
    """Componentwise order on the edges of a Carte biproduct."""

    def __init__(self, left: EdgeOrder, right: EdgeOrder):
        self.left = left
        self.right = right

    def le(self, x, y):
        (a1, u1), (a2, u2) = x.label, y.label
        return self.left.le(a1, a2) and self.right.le(u1, u2)


class PointwiseOrder(EdgeOrder):
    """Componentwise order on transforms with the same endpoints."""

    def __init__(self, base: EdgeOrder):
        self.base = base

    def le(self, x, y):
        return all(self.base.le(p, q) for p, q in zip(x.label, y.label))


@dataclass(frozen=True, eq=False)
class OrderedGraph:
    graph: FiniteGraph
    order: EdgeOrder
    units: Mapping | None = None
    contact: ContactTable | None = None

    def compose(self, x, y):
        return self.contact(x, y)

    def original(self) -> OriginalGraph:
        return OriginalGraph(self.graph, self.units, self.contact)


def discrete(G: OriginalGraph) -> OrderedGraph:
    return OrderedGraph(G.graph, DiscreteOrder(), G.units, G.contact)


def contact_monotone_check(Y: OrderedGraph) -> Verdict:
    """``x <= x'`` implies ``x . y <= x' . y`` and ``y . x <= y . x'``."""
    G, le, c = Y.graph, Y.order.le, Y.contact
    n = 0
    for x, y in c.composable_pairs():
        for x2 in G.hom(x.src, x.dst):
            n += 1
            if le(x, x2) and not le(c(x, y), c(x2, y)):
                return Verdict(False, ("left", x, x2, y), n)
        for y2 in G.hom(y.src, y.dst):
            n += 1
            if le(y, y2) and not le(c(x, y), c(x, y2)):
                return Verdict(False, ("right", x, y, y2), n)
    return Verdict(True, None, n)


def contact_associative(Y: OrderedGraph) -> Verdict:
    c, G = Y.contact, Y.graph
    n = 0
    for x, y in c.composable_pairs():
        for d in G.vertices:
            for z in G.hom(y.dst, d):
                n += 1
                if c(x, c(y, z)) != c(c(x, y), z):
                    return Verdict(False, (x, y, z), n)
    return Verdict(True, None, n)


# -- transports -----------------------------------------------------------------


class NotParallel(ValueError):
    pass


def parallel(f: Transport, g: Transport) -> bool:
    return f.source == g.source and f.target == g.target and f._key[0] == g._key[0]


def transport_leq(f: Transport, g: Transport, order: EdgeOrder) -> bool:
    """Pointwise comparison of the edge maps of parallel transports."""
    if not parallel(f, g):
        raise NotParallel("transports do not share their vertex map")
    return all(order.le(f.emap[e], g.emap[e]) for e in f.source.edges)


def monotone_transport_check(f: Transport, source_order: EdgeOrder, target_order: EdgeOrder) -> Verdict:
    G = f.source
    n = 0
    for x in G.edges:
        for y in G.hom(x.src, x.dst):
            n += 1
            if source_order.le(x, y) and not target_order.le(f.emap[x], f.emap[y]):
                return Verdict(False, (x, y), n)
    return Verdict(True, None, n)


def name_form_leq(g1: Transport, g2: Transport, order: EdgeOrder) -> bool:
    """Order on name forms ``X -> Y^T``.

    Vertex images are transports compared with :func:`transport_leq`, which
    requires equal vertex maps on ``T``; transform images are compared
    componentwise.
    """
    if g1.source != g2.source or g1.target != g2.target:
        raise NotParallel("name forms have different source or target")
    for x in g1.source.vertices:
        p, q = g1.vmap[x], g2.vmap[x]
        if not parallel(p, q):
            raise NotParallel(f"vertex images at {x!r} have different vertex maps")
        if not transport_leq(p, q, order):
            return False
    return all(
        all(order.le(a, b) for a, b in zip(g1.emap[e].label, g2.emap[e].label))
        for e in g1.source.edges
    )


def name_form_parallel(g1: Transport, g2: Transport) -> bool:
    return all(parallel(g1.vmap[x], g2.vmap[x]) for x in g1.source.vertices)


# -- transforms ---------------------------------------------------------------------


def _side_le(order: EdgeOrder, side: str, p, q) -> bool:
    if side in ("continuous", "lower"):
        return order.le(p, q)
    if side in ("cocontinuous", "upper"):
        return order.le(q, p)
    raise ValueError(f"unknown direction {side!r}")


def continuity_check(alpha: Edge, contact: ContactTable, order: EdgeOrder,
                     side: str = "continuous") -> Verdict:
    phi, psi = alpha.src, alpha.dst
    n = 0
    for u in phi.source.edges:
        n += 1
        pre = contact(component(alpha, u.src), psi.emap[u])
        post = contact(phi.emap[u], component(alpha, u.dst))
        if not _side_le(order, side, pre, post):
            return Verdict(False, u, n)
    return Verdict(True, None, n)


def continuous_transform_set(T: FiniteGraph, Y: OrderedGraph, phi: Transport, psi: Transport,
                             side: str = "continuous") -> tuple:
    E = exponential_graph(T, Y.graph)
    return tuple(a for a in E.hom(phi, psi) if continuity_check(a, Y.contact, Y.order, side))


def continuous_composition_closure(T: FiniteGraph, Y: OrderedGraph, side: str = "continuous",
                                   require_hypotheses: bool = True,
                                   budget: int = 10**6) -> Verdict:
    """Composites of (co)continuous transforms stay (co)continuous.

    The hypotheses are associativity and monotonicity of the contact; with
    ``require_hypotheses=False`` the check runs anyway, which is how
    counterexamples for non-monotone contact are searched.
    """
    if require_hypotheses:
        for check in (contact_associative, contact_monotone_check):
            v = check(Y)
            if not v:
                raise HypothesisFailed(f"{check.__name__} fails", v.witness)
    E = exponential_graph(T, Y.graph)
    c, o = Y.contact, Y.order
    V = E.vertices
    homs = {(p, q): continuous_transform_set(T, Y, p, q, side) for p in V for q in V}
    n = 0
    for p in V:
        for q in V:
            for alpha in homs[p, q]:
                for r in V:
                    for beta in homs[q, r]:
                        n += 1
                        if n > budget:
                            raise BudgetExceeded(n, budget)
                        composite = Edge(p, r, tuple(c(x, y) for x, y in zip(alpha.label, beta.label)))
                        if not continuity_check(composite, c, o, side):
                            return Verdict(False, (alpha, beta), n)
    return Verdict(True, None, n)


# -- ordered characters ------------------------------------------------------------


def social_points_ordered(F: Character, x, side: str = "lower") -> tuple:
    X = F.base
    pairs = list(_composable_into(X, x))
    return tuple(
        m for m in F.values[x]
        if all(
            _side_le_values(F, h.src, side, F.act(h, F.act(f, m)), F.act(X.compose(h, f), m))
            for h, f in pairs
        )
    )


def _side_le_values(F: Character, a, side: str, p, q) -> bool:
    if side in ("lower", "continuous"):
        return F.le(a, p, q)
    if side in ("upper", "cocontinuous"):
        return F.le(a, q, p)
    raise ValueError(f"unknown direction {side!r}")


def is_continuous_character_transform(F: Character, x, alpha: dict, side: str = "continuous") -> bool:
    """``h^F(alpha_a(f)) <= alpha_b(h . f)`` for every ``h: b -> a, f: a -> x``."""
    X = F.base
    return all(
        _side_le_values(F, h.src, side, F.act(h, alpha[f]), alpha[X.compose(h, f)])
        for h, f in _composable_into(X, x)
    )


@dataclass(frozen=True)
class ContinuousYoneda:
    lower_points: tuple
    continuous_transforms: int
    generated_ok: bool
    bijective: bool
    witness: object = field(default=None)


def continuous_yoneda_check(F: Character, x, budget: int | None = None) -> ContinuousYoneda:
    """Lower social points against continuous transforms ``X(-;x) => F``.

    ``generated_ok`` records that every lower social point generates a
    continuous transform returning that point at ``1_x``.  ``bijective``
    additionally asks every continuous transform to be generated this way;
    the witness is the first continuous transform that is not.
    """
    X = F.base
    points = social_points_ordered(F, x, "lower")
    conts = [a for a in character_transforms(X, x, F, budget) if is_continuous_character_transform(F, x, a)]
    generated_ok = True
    witness = None
    for m in points:
        alpha = transform_of_point(X, x, F, m)
        if not is_continuous_character_transform(F, x, alpha) or point_of_transform(X, x, alpha) != m:
            generated_ok = False
            witness = ("point", m)
            break
    bijective = generated_ok
    if generated_ok:
        for alpha in conts:
            m = point_of_transform(X, x, alpha)
            if m not in points or transform_of_point(X, x, F, m) != alpha:
                bijective = False
                witness = ("transform", tuple(alpha.items()))
                break
    return ContinuousYoneda(points, len(conts), generated_ok, bijective, witness)


# -- decomposition and neutrality inequalities ------------------------------------


def decomposition_inequality_check(f: Transport, uX, uT, contact: ContactTable, order: EdgeOrder,
                                   side: str = "pre", direction: str = "lower") -> Verdict:
    """Compare ``f<alpha,u>`` with its composite through the unit slices.

    ``lower``: composite <= value.  ``upper``: value <= composite.
    """
    n = 0
    for e in f.source.edges:
        n += 1
        value, composite = decomposition_pair(f, uX, uT, contact, side, e)
        if not _side_le(order, direction, composite, value):
            return Verdict(False, e.label, n)
    return Verdict(True, None, n)


def neutrality_inequality_check(g: Transport, uX, uT, contact: ContactTable, order: EdgeOrder,
                                side: str = "pre", direction: str = "upper") -> Verdict:
    """``upper``: each unit-padded composite lies above the plain edge."""
    n = 0
    for case, composite, plain in neutrality_cases(g, uX, uT, contact, side):
        n += 1
        if not _side_le(order, direction, composite, plain):
            return Verdict(False, case, n)
    return Verdict(True, None, n)


def is_crude_form(f: Transport, uX, uT, Y: OrderedGraph) -> bool:
    """Unit edges ``<1_a,1_s>`` go to the chosen units of ``Y``."""
    X, T = f.source.left, f.source.right
    return all(
        f.emap[Edge((a, s), (a, s), (uX[a], uT[s]))] == Y.units[f.vmap[(a, s)]]
        for a in X.vertices for s in T.vertices
    )


# -- adjunction inequalities ---------------------------------------------------------


@dataclass
class SuiteReport:
    forms: int = 0
    eligible_forms: int = 0
    names: int = 0
    eligible_names: int = 0
    form_pairs: int = 0
    name_pairs: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _tuple_le(order: EdgeOrder, xs: tuple, ys: tuple) -> bool:
    return all(order.le(x, y) for x, y in zip(xs, ys))


def _name_edges(g: Transport) -> tuple:
    """Every target edge a name form mentions, in a fixed order."""
    out = []
    for x in g.source.vertices:
        out.extend(g.vmap[x]._key[1])
    for e in g.source.edges:
        out.extend(g.emap[e].label)
    return tuple(out)


def adjunction_inequality_suite(X: FiniteGraph, uX, T: FiniteGraph, uT, Y: OrderedGraph,
                                budget: int = 10**6) -> SuiteReport:
    """Unit and counit inequalities plus monotonicity of name and realization.

    * each form with lower predecomposition satisfies
      ``realize_pre(name(f)) <= f``;
    * each name form with upper preneutrality satisfies
      ``g <= name(realize_pre(g))``;
    * ``f <= f'`` implies ``name(f) <= name(f')`` and ``g <= g'`` implies
      ``realize_pre(g) <= realize_pre(g')``.
    """
    v = contact_monotone_check(Y)
    if not v:
        raise HypothesisFailed("contact is not monotone", v.witness)
    c, o = Y.contact, Y.order
    P = carte_biproduct(X, T)
    E = exponential_graph(T, Y.graph)
    nf = count_transports(P, Y.graph, cap=budget)
    ng = count_transports(X, E, cap=budget)
    if nf + ng > budget:
        raise BudgetExceeded(nf + ng, budget)
    rep = SuiteReport()

    by_vertex_map: dict = {}
    for f in transports(P, Y.graph):
        rep.forms += 1
        by_vertex_map.setdefault(f._key[0], []).append(f)
        if decomposition_inequality_check(f, uX, uT, c, o, "pre", "lower"):
            rep.eligible_forms += 1
            back = realization(name_appointment(f, uX, uT), c, "pre")
            if not transport_leq(back, f, o):
                rep.failures.append(("unit inequality", f))
    # Members of a group are parallel, so comparisons reduce to flat edge tuples.
    for group in by_vertex_map.values():
        flat = [(f, f._key[1], _name_edges(name_appointment(f, uX, uT))) for f in group]
        for (f1, e1, n1), (f2, e2, n2) in itertools.permutations(flat, 2):
            if _tuple_le(o, e1, e2):
                rep.form_pairs += 1
                if not _tuple_le(o, n1, n2):
                    rep.failures.append(("name not monotone", f1, f2))

    by_shape: dict = {}
    for g in transports(X, E):
        rep.names += 1
        shape = tuple(g.vmap[x]._key[0] for x in X.vertices)
        by_shape.setdefault(shape, []).append(g)
        if neutrality_inequality_check(g, uX, uT, c, o, "pre", "upper"):
            rep.eligible_names += 1
            back = name_appointment(realization(g, c, "pre"), uX, uT)
            if not name_form_leq(g, back, o):
                rep.failures.append(("counit inequality", g))
    for group in by_shape.values():
        flat = [(g, _name_edges(g), realization(g, c, "pre")._key[1]) for g in group]
        for (g1, n1, e1), (g2, n2, e2) in itertools.permutations(flat, 2):
            if _tuple_le(o, n1, n2):
                rep.name_pairs += 1
                if not _tuple_le(o, e1, e2):
                    rep.failures.append(("realization not monotone", g1, g2))
    return rep


# -- regular bounds ----------------------------------------------------------------


@dataclass(frozen=True)
class RegularBound:
    bound: Transport
    regular: bool
    bounds_f: bool
    extremal: bool
    compared: int
    witness: object = None

    @property
    def ok(self) -> bool:
        return self.regular and self.bounds_f and self.extremal


_BOUND_SIDES = {
    # side: (decomposition side, required direction of f, bound lies above f)
    "pre": ("pre", "upper", True),
    "post": ("post", "lower", False),
}


def is_regular(f: Transport, uX, uT, contact: ContactTable, side: str) -> bool:
    return realization(name_appointment(f, uX, uT), contact, side) == f


def regular_bound(f: Transport, uX, uT, Y: OrderedGraph, side: str = "pre",
                  budget: int = 10**6) -> RegularBound:
    """``f+ = realize_pre(name(f))`` or ``f- = realize_post(name(f))``.

    ``pre`` needs upper predecomposition of ``f`` and yields the least
    preregular transport above ``f``; ``post`` needs lower postdecomposition
    and yields the greatest postregular transport below ``f``.  Both also
    need ``f`` to send unit pairs to units.  Extremality is certified by
    comparing with every parallel regular transport.
    """
    dside, direction, above = _BOUND_SIDES[side]
    c, o = Y.contact, Y.order
    v = decomposition_inequality_check(f, uX, uT, c, o, dside, direction)
    if not v:
        raise HypothesisFailed(f"{direction} {dside}decomposition fails", v.witness)
    if not is_crude_form(f, uX, uT, Y):
        raise HypothesisFailed("form does not send unit pairs to units")
    bound = realization(name_appointment(f, uX, uT), c, side)
    regular = is_regular(bound, uX, uT, c, side)
    bounds_f = transport_leq(f, bound, o) if above else transport_leq(bound, f, o)
    vmap = dict(zip(f.source.vertices, f._key[0]))
    n_candidates = 1
    for e in f.source.edges:
        n_candidates *= Y.graph.hom_size(vmap[e.src], vmap[e.dst])
    if n_candidates > budget:
        raise BudgetExceeded(n_candidates, budget)
    compared = 0
    witness = None
    extremal = True
    for h in transports(f.source, Y.graph, vmap=vmap):
        if not is_regular(h, uX, uT, c, side):
            continue
        if above and transport_leq(f, h, o):
            compared += 1
            if not transport_leq(bound, h, o):
                extremal, witness = False, h
                break
        if not above and transport_leq(h, f, o):
            compared += 1
            if not transport_leq(h, bound, o):
                extremal, witness = False, h
                break
    return RegularBound(bound, regular, bounds_f, extremal, compared, witness)


# -- corestriction ---------------------------------------------------------------


CORESTRICTION_HYPOTHESES = {
    # target set: ((side, direction) for the two decomposition inequalities)
    "continuous": (("pre", "lower"), ("post", "upper")),
    "cocontinuous": (("pre", "upper"), ("post", "lower")),
}


def corestriction_check(f: Transport, uX, uT, Y: OrderedGraph, target: str = "continuous",
                        require_hypotheses: bool = True) -> Verdict:
    """Transform images of ``name(f)`` lie in the ``target`` transform set.

    The hypotheses are the two decomposition inequalities that squeeze
    ``f<alpha,u>`` between the pre and post composites in the order that
    ``target`` asks for; see ``CORESTRICTION_HYPOTHESES``.
    """
    c, o = Y.contact, Y.order
    if require_hypotheses:
        for side, direction in CORESTRICTION_HYPOTHESES[target]:
            v = decomposition_inequality_check(f, uX, uT, c, o, side, direction)
            if not v:
                raise HypothesisFailed(f"{direction} {side}decomposition fails", v.witness)
    g = name_appointment(f, uX, uT)
    n = 0
    for alpha in f.source.left.edges:
        n += 1
        if not continuity_check(g.emap[alpha], c, o, target):
            return Verdict(False, alpha, n)
    return Verdict(True, None, n)


def satisfies(f, uX, uT, Y: OrderedGraph, side: str, direction: str) -> bool:
    return decomposition_inequality_check(f, uX, uT, Y.contact, Y.order, side, direction).ok
