"""Original graphs (units plus contact), categories, natural transforms,
characters and the Yoneda correspondences built from social points."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from adjunct.checks import BudgetExceeded, Verdict
from adjunct.graphs import (
    ContactTable,
    Edge,
    FiniteGraph,
    Transport,
    carte_biproduct,
    check_units,
    component,
    count_transports,
    decomposability_check,
    evaluation,
    exponential_graph,
    name_appointment,
    neutrality_check,
    realization,
    transports,
)


@dataclass(frozen=True, eq=False)
class OriginalGraph:
    """A graph with chosen unit loops and a total contact table.

    Unit laws and associativity are not enforced on construction; use
    :func:`validate_original` and :func:`validate_category`.
    """

    graph: FiniteGraph
    units: Mapping
    contact: ContactTable

    def __post_init__(self):
        check_units(self.graph, self.units)
        missing = self.contact.missing()
        if missing is not None:
            raise ValueError(f"contact table is not total: missing {missing!r}")

    def compose(self, alpha: Edge, beta: Edge) -> Edge:
        return self.contact(alpha, beta)

    def unit(self, a) -> Edge:
        return self.units[a]

    def edge(self, label, src=None, dst=None) -> Edge:
        """Look up an edge by label (and endpoints when labels repeat)."""
        hits = [
            e for e in self.graph.edges
            if e.label == label and (src is None or e.src == src) and (dst is None or e.dst == dst)
        ]
        if len(hits) != 1:
            raise KeyError(f"edge label {label!r} is {'ambiguous' if hits else 'unknown'}")
        return hits[0]


def original_from_table(vertices, edges, units, table) -> OriginalGraph:
    """Build an original graph from labels.

    ``edges`` is a list of ``(label, src, dst)``; labels must be unique.
    ``units`` maps vertices to labels; ``table`` maps label pairs to labels.
    """
    es = {label: Edge(src, dst, label) for label, src, dst in edges}
    G = FiniteGraph(vertices, es.values())
    contact = ContactTable(G, {(es[x], es[y]): es[z] for (x, y), z in table.items()})
    return OriginalGraph(G, {a: es[u] for a, u in units.items()}, contact)


def validate_original(G: OriginalGraph) -> Verdict:
    """Both unit laws; witnesses are ``("left"|"right", unit, edge)``."""
    n = 0
    for alpha in G.graph.edges:
        n += 1
        left, right = G.units[alpha.src], G.units[alpha.dst]
        if G.compose(left, alpha) != alpha:
            return Verdict(False, ("left", left, alpha), n)
        if G.compose(alpha, right) != alpha:
            return Verdict(False, ("right", alpha, right), n)
    return Verdict(True, None, n)


def composable_triples(G: OriginalGraph):
    for alpha, beta in G.contact.composable_pairs():
        for gamma in (e for c in G.graph.vertices for e in G.graph.hom(beta.dst, c)):
            yield alpha, beta, gamma


def validate_category(G: OriginalGraph) -> Verdict:
    """Associativity on every composable triple, after the unit laws."""
    units = validate_original(G)
    if not units:
        return units
    n = 0
    for alpha, beta, gamma in composable_triples(G):
        n += 1
        if G.compose(alpha, G.compose(beta, gamma)) != G.compose(G.compose(alpha, beta), gamma):
            return Verdict(False, (alpha, beta, gamma), n)
    return Verdict(True, None, n)


@dataclass(frozen=True)
class Classification:
    crude: Verdict
    natural: Verdict


def classify_transport(f: Transport, X: OriginalGraph, Y: OriginalGraph) -> Classification:
    """Crude: units go to units.  Natural: crude and contact is preserved."""
    n = 0
    crude = Verdict(True)
    for a in X.graph.vertices:
        n += 1
        if f.emap[X.units[a]] != Y.units[f.vmap[a]]:
            crude = Verdict(False, a, n)
            break
    if crude:
        crude = Verdict(True, None, n)
    m = 0
    natural = crude
    if crude:
        natural = Verdict(True)
        for alpha, beta in X.contact.composable_pairs():
            m += 1
            if f.emap[X.compose(alpha, beta)] != Y.compose(f.emap[alpha], f.emap[beta]):
                natural = Verdict(False, (alpha, beta), m)
                break
        if natural:
            natural = Verdict(True, None, m)
    return Classification(crude, natural)


# -- natural transforms -------------------------------------------------------


def natural_transform_check(alpha: Edge, contact: ContactTable) -> Verdict:
    """The square ``alpha_s . psi(u) = phi(u) . alpha_t`` for every edge ``u``."""
    phi, psi = alpha.src, alpha.dst
    n = 0
    for u in phi.source.edges:
        n += 1
        pre = contact(component(alpha, u.src), psi.emap[u])
        post = contact(phi.emap[u], component(alpha, u.dst))
        if pre != post:
            return Verdict(False, u, n)
    return Verdict(True, None, n)


def natural_exponential(T: FiniteGraph, Y: OriginalGraph) -> FiniteGraph:
    """The subgraph of ``Y^T`` keeping natural transforms as edges."""
    E = exponential_graph(T, Y.graph)
    edges = [
        alpha
        for phi in E.vertices for psi in E.vertices
        for alpha in E.hom(phi, psi)
        if natural_transform_check(alpha, Y.contact)
    ]
    return FiniteGraph(E.vertices, edges)


def compose_transforms(alpha: Edge, beta: Edge, contact: ContactTable) -> Edge:
    """Vertical composite, componentwise ``alpha_s . beta_s``."""
    if alpha.dst != beta.src:
        raise ValueError("transforms are not composable")
    return Edge(alpha.src, beta.dst, tuple(contact(a, b) for a, b in zip(alpha.label, beta.label)))


def identity_transform(phi: Transport, Y: OriginalGraph) -> Edge:
    return Edge(phi, phi, tuple(Y.units[phi.vmap[s]] for s in phi.source.vertices))


def evaluations_agree(T: FiniteGraph, Y: OriginalGraph) -> Verdict:
    """Pre- and post-evaluation coincide on the natural exponential."""
    N = natural_exponential(T, Y)
    pre = evaluation(Y.graph, T, Y.contact, "pre", exponential=N)
    post = evaluation(Y.graph, T, Y.contact, "post", exponential=N)
    n = 0
    for e in pre.source.edges:
        n += 1
        if pre.emap[e] != post.emap[e]:
            return Verdict(False, e.label, n)
    return Verdict(True, None, n)


def natural_composition_search(T: FiniteGraph, Y: OriginalGraph,
                               budget: int = 10**6) -> Verdict:
    """Look for natural ``alpha, beta`` whose composite is not natural.

    ``ok`` means no such pair exists; raises ``BudgetExceeded`` when the
    number of composable pairs inspected would pass ``budget``.
    """
    N = natural_exponential(T, Y)
    n = 0
    for phi in N.vertices:
        for psi in N.vertices:
            for alpha in N.hom(phi, psi):
                for xi in N.vertices:
                    for beta in N.hom(psi, xi):
                        n += 1
                        if n > budget:
                            raise BudgetExceeded(n, budget)
                        if not natural_transform_check(compose_transforms(alpha, beta, Y.contact), Y.contact):
                            return Verdict(False, (alpha, beta), n)
    return Verdict(True, None, n)


# -- characters -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Character:
    """Values ``F0(a)`` and, for each edge ``f: a -> x``, a map ``F0(x) -> F0(a)``.

    ``orders`` optionally gives a partial order on every value set as a set
    of pairs; without it the orders are discrete.
    """

    base: OriginalGraph
    values: Mapping
    action: Mapping
    orders: Mapping | None = field(default=None)

    def __post_init__(self):
        G = self.base.graph
        for a in G.vertices:
            if a not in self.values:
                raise ValueError(f"no value set for vertex {a!r}")
        for f in G.edges:
            act = self.action.get(f)
            if act is None:
                raise ValueError(f"no action for edge {f!r}")
            for m in self.values[f.dst]:
                if act.get(m) not in self.values[f.src]:
                    raise ValueError(f"action of {f!r} sends {m!r} outside its target")

    def act(self, f: Edge, m):
        return self.action[f][m]

    def le(self, a, m, n) -> bool:
        if self.orders is None:
            return m == n
        return m == n or (m, n) in self.orders[a]

    def preserves_units(self) -> bool:
        return all(
            self.act(self.base.units[a], m) == m
            for a in self.base.graph.vertices for m in self.values[a]
        )


def representable_character(X: OriginalGraph, x) -> Character:
    """``F0(a) = X(a;x)`` with ``h: b -> a`` acting by ``f -> h . f``."""
    G = X.graph
    if not G.has_vertex(x):
        raise KeyError(f"unknown vertex {x!r}")
    values = {a: G.hom(a, x) for a in G.vertices}
    action = {h: {f: X.compose(h, f) for f in values[h.dst]} for h in G.edges}
    return Character(X, values, action)


def _composable_into(X: OriginalGraph, x):
    """Pairs ``(h, f)`` with ``h: b -> a`` and ``f: a -> x``."""
    G = X.graph
    for a in G.vertices:
        for f in G.hom(a, x):
            for b in G.vertices:
                for h in G.hom(b, a):
                    yield h, f


def social_points(F: Character, x) -> tuple:
    """Points ``m`` with ``h^F(f^F(m)) = (h . f)^F(m)`` for all ``h, f`` into ``x``."""
    X = F.base
    pairs = list(_composable_into(X, x))
    return tuple(
        m for m in F.values[x]
        if all(F.act(h, F.act(f, m)) == F.act(X.compose(h, f), m) for h, f in pairs)
    )


def count_character_transforms(X: OriginalGraph, x, F: Character) -> int:
    n = 1
    for a in X.graph.vertices:
        n *= len(F.values[a]) ** len(X.graph.hom(a, x))
    return n


def character_transforms(X: OriginalGraph, x, F: Character, budget: int | None = None):
    """All families ``alpha_a: X(a;x) -> F0(a)``, natural or not.

    A family is a dict keyed by ``(a, f)``; families come in lexicographic
    order of their value tuples.
    """
    G = X.graph
    if budget is not None:
        needed = count_character_transforms(X, x, F)
        if needed > budget:
            raise BudgetExceeded(needed, budget)
    slots = [f for a in G.vertices for f in G.hom(a, x)]
    choices = [F.values[f.src] for f in slots]
    for vals in itertools.product(*choices):
        yield dict(zip(slots, vals))


def transform_defect(X: OriginalGraph, x, F: Character, alpha: dict, relation) -> tuple | None:
    """First ``(h, f)`` where ``relation(b, h^F(alpha(f)), alpha(h . f))`` fails."""
    for h, f in _composable_into(X, x):
        if not relation(h.src, F.act(h, alpha[f]), alpha[X.compose(h, f)]):
            return h, f
    return None


def is_natural_character_transform(X, x, F, alpha) -> bool:
    return transform_defect(X, x, F, alpha, lambda b, p, q: p == q) is None


def natural_character_transforms(X: OriginalGraph, x, F: Character, budget: int | None = None) -> list:
    return [a for a in character_transforms(X, x, F, budget) if is_natural_character_transform(X, x, F, a)]


def transform_of_point(X: OriginalGraph, x, F: Character, m) -> dict:
    """``alpha_a(f) = f^F(m)``."""
    return {f: F.act(f, m) for a in X.graph.vertices for f in X.graph.hom(a, x)}


def point_of_transform(X: OriginalGraph, x, alpha: dict):
    return alpha[X.units[x]]


def _freeze(alpha: dict) -> tuple:
    return tuple(alpha.items())


@dataclass(frozen=True)
class Correspondence:
    points: tuple
    transforms: tuple
    bijective: bool
    witness: object = None


def yoneda_correspondence(F: Character, x, budget: int | None = None) -> Correspondence:
    """Social points of ``F0(x)`` against natural transforms ``X(-;x) => F``."""
    X = F.base
    points = social_points(F, x)
    nats = natural_character_transforms(X, x, F, budget)
    nat_keys = {_freeze(a) for a in nats}
    for m in points:
        alpha = transform_of_point(X, x, F, m)
        if _freeze(alpha) not in nat_keys:
            return Correspondence(points, tuple(nats), False, ("point", m))
        if point_of_transform(X, x, alpha) != m:
            return Correspondence(points, tuple(nats), False, ("point", m))
    for alpha in nats:
        m = point_of_transform(X, x, alpha)
        if m not in points or _freeze(transform_of_point(X, x, F, m)) != _freeze(alpha):
            return Correspondence(points, tuple(nats), False, ("transform", _freeze(alpha)))
    return Correspondence(points, tuple(nats), len(points) == len(nats))


@dataclass(frozen=True)
class EdgeCorrespondence:
    social_edges: tuple
    transforms: tuple
    bijective: bool
    composition_ok: bool
    witness: object = None


def edge_transform_correspondence(X: OriginalGraph, x, y) -> EdgeCorrespondence:
    """Social edges ``theta: x -> y`` against natural ``X(-;x) => X(-;y)``.

    Also checks that composing the transforms of ``theta`` then ``kappa``
    (with ``kappa: y -> z``) corresponds to ``theta . kappa``.
    """
    Fy = representable_character(X, y)
    corr = yoneda_correspondence(Fy, x)
    composition_ok = True
    witness = corr.witness
    G = X.graph
    for z in G.vertices:
        Fz = representable_character(X, z)
        for theta in social_points(Fy, x):
            for kappa in social_points(Fz, y):
                alpha = transform_of_point(X, x, Fy, theta)
                beta = transform_of_point(X, y, Fz, kappa)
                composite = {f: beta[alpha[f]] for f in alpha}
                if composite[X.units[x]] != X.compose(theta, kappa):
                    composition_ok = False
                    witness = witness or ("composition", theta, kappa)
    return EdgeCorrespondence(corr.points, corr.transforms, corr.bijective, composition_ok, witness)


@dataclass(frozen=True)
class IsoResult:
    inverse: Edge | None
    transforms_inverse: bool


def iso_check(X: OriginalGraph, theta: Edge) -> IsoResult:
    """Find ``theta^-1`` and check the induced transforms are mutually inverse."""
    x, y = theta.src, theta.dst
    for cand in X.graph.hom(y, x):
        if X.compose(theta, cand) == X.units[x] and X.compose(cand, theta) == X.units[y]:
            ok = all(
                X.compose(X.compose(f, theta), cand) == f
                for a in X.graph.vertices for f in X.graph.hom(a, x)
            ) and all(
                X.compose(X.compose(f, cand), theta) == f
                for a in X.graph.vertices for f in X.graph.hom(a, y)
            )
            return IsoResult(cand, ok)
    return IsoResult(None, False)


def fullfaithful_check(X: OriginalGraph) -> Verdict:
    """``|X(a;b)| = |Nat(X(-;a), X(-;b))|`` with a bijective correspondence."""
    n = 0
    for a in X.graph.vertices:
        for b in X.graph.vertices:
            n += 1
            corr = edge_transform_correspondence(X, a, b)
            if not (corr.bijective and corr.composition_ok and len(corr.transforms) == X.graph.hom_size(a, b)):
                return Verdict(False, (a, b), n)
    return Verdict(True, None, n)


# -- restricted bijection between forms and names ------------------------------


@dataclass(frozen=True)
class BijectionReport:
    forms: int
    decomposable: int
    names: int
    neutral_natural: int
    ok: bool
    witness: object = None


def bijection_suite(X: OriginalGraph, T: OriginalGraph, Y: OriginalGraph,
                    budget: int = 10**6) -> BijectionReport:
    """Decomposable forms against neutral names into the natural exponential."""
    uX, uT, c = X.units, T.units, Y.contact
    P = carte_biproduct(X.graph, T.graph)
    E = exponential_graph(T.graph, Y.graph)
    nf = count_transports(P, Y.graph, cap=budget)
    if nf > budget:
        raise BudgetExceeded(nf, budget)
    ng = count_transports(X.graph, E, cap=budget - nf)
    if nf + ng > budget:
        raise BudgetExceeded(nf + ng, budget)

    forms = 0
    decomposable = []
    for f in transports(P, Y.graph):
        forms += 1
        if decomposability_check(f, uX, uT, c, "pre") and decomposability_check(f, uX, uT, c, "post"):
            decomposable.append(f)
    names = 0
    neutral = []
    for g in transports(X.graph, E):
        names += 1
        if not all(natural_transform_check(g.emap[a], c) for a in X.graph.edges):
            continue
        if neutrality_check(g, uX, uT, c, "pre") and neutrality_check(g, uX, uT, c, "post"):
            neutral.append(g)

    neutral_set = set(neutral)
    for f in decomposable:
        g = name_appointment(f, uX, uT)
        if g not in neutral_set:
            return BijectionReport(forms, len(decomposable), names, len(neutral), False, ("name", f))
        if realization(g, c, "pre") != f or realization(g, c, "post") != f:
            return BijectionReport(forms, len(decomposable), names, len(neutral), False, ("round trip", f))
    decomposable_set = set(decomposable)
    for g in neutral:
        f = realization(g, c, "pre")
        if f not in decomposable_set or name_appointment(f, uX, uT) != g:
            return BijectionReport(forms, len(decomposable), names, len(neutral), False, ("realize", g))
    return BijectionReport(forms, len(decomposable), names, len(neutral), len(decomposable) == len(neutral))
