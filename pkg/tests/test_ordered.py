import itertools

import pytest

from adjunct import catalog, graphs, structure
from adjunct.checks import HypothesisFailed
from adjunct.graphs import Edge, carte_biproduct, exponential_graph, first_loop_units, transports
from adjunct.ordered import (
    CORESTRICTION_HYPOTHESES,
    DiscreteOrder,
    ExplicitOrder,
    NotParallel,
    OrderedGraph,
    adjunction_inequality_suite,
    contact_associative,
    contact_monotone_check,
    continuity_check,
    continuous_composition_closure,
    continuous_yoneda_check,
    corestriction_check,
    decomposition_inequality_check,
    is_continuous_character_transform,
    monotone_transport_check,
    neutrality_inequality_check,
    regular_bound,
    satisfies,
    social_points_ordered,
    transport_leq,
)
from adjunct.structure import Character

FIXTURES = [catalog.chain_monoid, lambda: catalog.chain_monoid(False), catalog.ordered_arrow]
LOOP = catalog.graph_from_counts(["0"], {("0", "0"): 1})
LOOP2 = catalog.graph_from_counts(["0"], {("0", "0"): 2})
UNITAL = [LOOP, LOOP2, catalog.graph_from_counts(["0", "1"], {("0", "0"): 1, ("0", "1"): 1, ("1", "1"): 1})]


def forms(X, T, Y):
    return transports(carte_biproduct(X, T), Y.graph)


@pytest.mark.parametrize("make", FIXTURES)
def test_fixtures_are_monotone_categories(make):
    Y = make()
    assert contact_monotone_check(Y) and contact_associative(Y)
    assert structure.validate_category(Y.original())


def test_edge_orders_must_be_partial_orders():
    G = LOOP2
    x, y = G.edges
    with pytest.raises(ValueError):
        ExplicitOrder(G, [(x, y), (y, x)])
    with pytest.raises(ValueError):
        ExplicitOrder(catalog.graph_from_counts(["0", "1"], {("0", "0"): 1, ("1", "1"): 1}),
                      [tuple(catalog.graph_from_counts(["0", "1"], {("0", "0"): 1, ("1", "1"): 1}).edges)])


def test_transport_order_is_antisymmetric():
    Y = catalog.ordered_arrow()
    fs = list(transports(LOOP2, Y.graph))
    for f, g in itertools.product(fs, repeat=2):
        try:
            if transport_leq(f, g, Y.order) and transport_leq(g, f, Y.order):
                assert f == g
        except NotParallel:
            assert f._key[0] != g._key[0]


def test_monotone_transports():
    Y = catalog.chain_monoid()
    one, z = Y.graph.edges
    flip = graphs.Transport(Y.graph, Y.graph, {"*": "*"}, {one: z, z: one})
    v = monotone_transport_check(flip, Y.order, Y.order)
    assert not v and v.witness == (one, z)
    mono = [f for f in transports(Y.graph, Y.graph) if monotone_transport_check(f, Y.order, Y.order)]
    for f, g in itertools.product(mono, repeat=2):
        assert monotone_transport_check(graphs.compose_transports(f, g), Y.order, Y.order)


@pytest.mark.parametrize("make", FIXTURES)
def test_natural_transforms_are_continuous_both_ways(make):
    Y = make()
    for T in UNITAL:
        for a in exponential_graph(T, Y.graph).edges:
            if structure.natural_transform_check(a, Y.contact):
                assert continuity_check(a, Y.contact, Y.order, "continuous")
                assert continuity_check(a, Y.contact, Y.order, "cocontinuous")


def test_strictly_continuous_non_natural_transform():
    Y = catalog.chain_monoid()
    E = exponential_graph(LOOP, Y.graph)
    hits = [a for a in E.edges
            if continuity_check(a, Y.contact, Y.order, "continuous")
            and not structure.natural_transform_check(a, Y.contact)]
    assert hits
    a = hits[0]
    assert [c.label for c in a.label] == ["1"]
    assert (a.src.emap[LOOP.edges[0]].label, a.dst.emap[LOOP.edges[0]].label) == ("z", "1")


@pytest.mark.parametrize("make", FIXTURES)
def test_representable_points_are_lower_social(make):
    X = make()
    O = X.original()
    for x in O.graph.vertices:
        F = structure.representable_character(O, x)
        assert social_points_ordered(F, x, "lower") == F.values[x]


def swap_character():
    """On the monoid ``{1, z}``, ``z`` swaps the 2-chain ``p < q``."""
    M = catalog.chain_monoid().original()
    one, z = M.edge("1"), M.edge("z")
    return Character(M, {"*": ("p", "q")}, {one: {"p": "p", "q": "q"}, z: {"p": "q", "q": "p"}},
                     {"*": frozenset({("p", "q")})})


def test_upper_but_not_lower_social_point():
    F = swap_character()
    assert social_points_ordered(F, "*", "lower") == ("p",)
    assert social_points_ordered(F, "*", "upper") == ("q",)


def arrow_counterexample():
    W = catalog.walking_arrow()
    e = {x: W.edge(x) for x in ("1_0", "a", "1_1")}
    return Character(
        W, {"0": ("p", "q"), "1": ("r",)},
        {e["1_0"]: {"p": "p", "q": "q"}, e["a"]: {"r": "p"}, e["1_1"]: {"r": "r"}},
        {"0": frozenset({("p", "q")}), "1": frozenset()},
    )


def test_continuous_transforms_need_not_come_from_points():
    r = continuous_yoneda_check(arrow_counterexample(), "1")
    assert r.generated_ok
    assert not r.bijective
    assert (len(r.lower_points), r.continuous_transforms) == (1, 2)


def ordered_characters(X):
    """Unit-preserving characters with values drawn from ``{p < q}``."""
    G = X.graph
    for ns in itertools.product((1, 2), repeat=len(G.vertices)):
        values = {a: ("p", "q")[:n] for a, n in zip(G.vertices, ns)}
        orders = {a: frozenset({("p", "q")}) if n == 2 else frozenset() for a, n in zip(G.vertices, ns)}
        slots = [(f, m) for f in G.edges for m in values[f.dst]]
        for imgs in itertools.product(*(values[f.src] for f, _ in slots)):
            action = {f: {} for f in G.edges}
            for (f, m), v in zip(slots, imgs):
                action[f][m] = v
            F = Character(X, values, action, orders)
            if F.preserves_units():
                yield F


@pytest.mark.parametrize("make", [catalog.walking_arrow, lambda: catalog.chain_monoid().original(), catalog.z2])
def test_lower_points_generate_continuous_transforms(make):
    X = make()
    n = 0
    for F in ordered_characters(X):
        for x in X.graph.vertices:
            n += 1
            assert continuous_yoneda_check(F, x).generated_ok
    assert n > 0


def test_continuous_character_transforms_of_representables():
    W = catalog.walking_arrow()
    F = structure.representable_character(W, "1")
    alphas = list(structure.character_transforms(W, "0", F))
    assert [is_continuous_character_transform(F, "0", a) for a in alphas] == [True]


# -- decomposition inequalities ----------------------------------------------------


def test_realizations_are_predecomposable_with_equality():
    Y = catalog.ordered_arrow()
    X, u = LOOP, first_loop_units(LOOP)
    for g in transports(X, exponential_graph(X, Y.graph)):
        f = graphs.realization(g, Y.contact, "pre")
        for d in ("lower", "upper"):
            assert decomposition_inequality_check(f, u, u, Y.contact, Y.order, "pre", d)


def test_upper_pre_without_lower_pre():
    Y = catalog.chain_monoid()
    u = first_loop_units(LOOP2)
    uL = first_loop_units(LOOP)
    hits = [f for f in forms(LOOP, LOOP2, Y)
            if satisfies(f, uL, u, Y, "pre", "upper") and not satisfies(f, uL, u, Y, "pre", "lower")]
    assert hits


def test_upper_preneutrality_can_fail_on_a_chain():
    Y = catalog.chain_monoid(False)
    u = first_loop_units(LOOP2)
    failures = [g for g in transports(LOOP2, exponential_graph(LOOP2, Y.graph))
                if not neutrality_inequality_check(g, u, u, Y.contact, Y.order, "pre", "upper")]
    assert failures


@pytest.mark.parametrize("make", FIXTURES)
@pytest.mark.parametrize("X,T", list(itertools.product(UNITAL[:2], repeat=2)))
def test_adjunction_inequalities(make, X, T):
    Y = make()
    r = adjunction_inequality_suite(X, first_loop_units(X), T, first_loop_units(T), Y, budget=10**5)
    assert r.ok, r.failures[:1]
    assert r.forms > 0 and r.names > 0


def test_suite_requires_monotone_contact():
    Z = catalog.ordered_from(catalog.z2(), [("1", "g")])
    u = first_loop_units(LOOP)
    with pytest.raises(HypothesisFailed):
        adjunction_inequality_suite(LOOP, u, LOOP, u, Z)


@pytest.mark.parametrize("make", FIXTURES)
def test_regular_bounds_sandwich_the_form(make):
    Y = make()
    X, T = LOOP2, LOOP
    uX, uT = first_loop_units(X), first_loop_units(T)
    both = 0
    for f in forms(X, T, Y):
        bounds = {}
        for side in ("pre", "post"):
            try:
                bounds[side] = regular_bound(f, uX, uT, Y, side)
            except HypothesisFailed:
                continue
            assert bounds[side].ok
        if len(bounds) == 2:
            both += 1
            assert transport_leq(bounds["post"].bound, f, Y.order)
            assert transport_leq(f, bounds["pre"].bound, Y.order)
    assert both > 0


def test_regular_bound_checks_its_hypothesis():
    Y = catalog.chain_monoid(False)
    uL, u2 = first_loop_units(LOOP), first_loop_units(LOOP2)
    f = next(f for f in forms(LOOP, LOOP2, Y) if not satisfies(f, uL, u2, Y, "pre", "upper"))
    with pytest.raises(HypothesisFailed):
        regular_bound(f, uL, u2, Y, "pre")


@pytest.mark.parametrize("make", FIXTURES)
def test_corestriction_under_its_hypotheses(make):
    Y = make()
    for X, T in itertools.product(UNITAL, repeat=2):
        uX, uT = first_loop_units(X), first_loop_units(T)
        for f in forms(X, T, Y):
            for target, hyps in CORESTRICTION_HYPOTHESES.items():
                if all(satisfies(f, uX, uT, Y, *h) for h in hyps):
                    assert corestriction_check(f, uX, uT, Y, target)


def test_corestriction_fails_without_the_post_hypothesis():
    Y = catalog.chain_monoid()
    T = catalog.graph_from_counts(["0", "1"], {("0", "0"): 1, ("0", "1"): 1, ("1", "1"): 1})
    uX, uT = first_loop_units(LOOP), first_loop_units(T)
    pre, post = CORESTRICTION_HYPOTHESES["continuous"]
    hits = [f for f in forms(LOOP, T, Y)
            if not satisfies(f, uX, uT, Y, *pre) and satisfies(f, uX, uT, Y, *post)
            and not corestriction_check(f, uX, uT, Y, "continuous", require_hypotheses=False)]
    assert hits
    with pytest.raises(HypothesisFailed):
        corestriction_check(hits[0], uX, uT, Y, "continuous")


@pytest.mark.parametrize("make", FIXTURES)
@pytest.mark.parametrize("side", ["continuous", "cocontinuous"])
def test_closure_under_monotone_associative_contact(make, side):
    Y = make()
    for T in UNITAL + catalog.small_graphs(2, 1):
        assert continuous_composition_closure(T, Y, side)


def test_closure_can_fail_for_non_monotone_contact():
    Z = catalog.ordered_from(catalog.z2(), [("1", "g")])
    assert not contact_monotone_check(Z)
    with pytest.raises(HypothesisFailed):
        continuous_composition_closure(LOOP, Z)
    v = continuous_composition_closure(LOOP, Z, require_hypotheses=False)
    assert not v
    alpha, beta = v.witness
    assert [c.label for c in alpha.label] == [c.label for c in beta.label] == ["g"]


def test_discrete_order_collapses_inequalities_to_equalities():
    Y = catalog.z2()
    D = OrderedGraph(Y.graph, DiscreteOrder(), Y.units, Y.contact)
    u = first_loop_units(LOOP2)
    for f in forms(LOOP2, LOOP2, D):
        for side in ("pre", "post"):
            eq = graphs.decomposability_check(f, u, u, Y.contact, side).ok
            both = all(decomposition_inequality_check(f, u, u, Y.contact, D.order, side, d).ok
                       for d in ("lower", "upper"))
            assert eq == both
