import itertools

import pytest

from adjunct import catalog
from adjunct.checks import BudgetExceeded
from adjunct.graphs import (
    ContactError,
    ContactTable,
    Edge,
    FiniteGraph,
    MissingUnit,
    Transport,
    carte_biproduct,
    check_units,
    component,
    compose_transports,
    count_transports,
    decomposability_check,
    exponential_graph,
    first_loop_units,
    first_triangle_check,
    identity_transport,
    name_appointment,
    natural_contact,
    neutrality_check,
    realization,
    target_change,
    transports,
)

SMALL = catalog.small_graphs(2, 1, up_to_iso=False)
ARROW = FiniteGraph(["u", "v"], [Edge("u", "v", "a")])


def brute_transports(T, Y):
    """Pairs (vertex images, edge images) found by filtering every assignment."""
    out = []
    for vimg in itertools.product(Y.vertices, repeat=len(T.vertices)):
        vm = dict(zip(T.vertices, vimg))
        for eimg in itertools.product(Y.edges, repeat=len(T.edges)):
            if all(y.src == vm[e.src] and y.dst == vm[e.dst] for e, y in zip(T.edges, eimg)):
                out.append((vimg, eimg))
    return out


@pytest.mark.parametrize("T,Y", list(itertools.product(catalog.small_graphs(2, 1), repeat=2)))
def test_transport_enumeration_matches_brute_force(T, Y):
    listed = [f._key for f in transports(T, Y)]
    assert listed == brute_transports(T, Y)
    assert count_transports(T, Y) == len(listed)


def test_transport_budget_is_enforced():
    T = catalog.graph_from_counts(["0", "1"], {("0", "0"): 2, ("0", "1"): 2})
    with pytest.raises(BudgetExceeded):
        list(transports(T, T, budget=3))


def test_transport_rejects_mismatched_edge():
    with pytest.raises(ValueError):
        Transport(ARROW, ARROW, {"u": "v", "v": "v"}, {ARROW.edges[0]: ARROW.edges[0]})


def test_composition_of_transports_is_associative_and_unital():
    graphs = catalog.small_graphs(2, 1)[:5]
    for A, B, C, D in itertools.product(graphs, repeat=4):
        for f in transports(A, B):
            assert compose_transports(identity_transport(A), f) == f == compose_transports(f, identity_transport(B))
            for g in transports(B, C):
                for h in itertools.islice(transports(C, D), 3):
                    assert compose_transports(compose_transports(f, g), h) == \
                        compose_transports(f, compose_transports(g, h))


def test_arrow_product():
    P = carte_biproduct(ARROW, ARROW)
    assert len(P.vertices) == 4
    assert P.hom_size(("u", "u"), ("v", "v")) == 1
    assert len(P.edges) == 1


def test_arrow_exponential_vertices_match_brute_force():
    E = exponential_graph(ARROW, ARROW)
    assert len(E.vertices) == len(brute_transports(ARROW, ARROW)) == 1
    loop = catalog.graph_from_counts(["0", "1"], {("0", "0"): 1, ("0", "1"): 1, ("1", "1"): 1})
    E = exponential_graph(ARROW, loop)
    assert len(E.vertices) == len(brute_transports(ARROW, loop)) == 3


def test_exponential_edges_are_all_component_families():
    T = catalog.graph_from_counts(["0", "1"], {})
    Y = catalog.graph_from_counts(["0"], {("0", "0"): 2})
    E = exponential_graph(T, Y)
    (phi,) = E.vertices
    assert E.hom_size(phi, phi) == 4
    assert all(E.has_edge(alpha) for alpha in E.edges)


def test_target_change_is_functorial():
    T = catalog.graph_from_counts(["0"], {("0", "0"): 1})
    graphs = catalog.small_graphs(2, 1)[:4]
    for A, B, C in itertools.product(graphs, repeat=3):
        for g in transports(A, B):
            assert target_change(identity_transport(A), T) == identity_transport(exponential_graph(T, A))
            for h in transports(B, C):
                assert target_change(compose_transports(g, h), T) == \
                    compose_transports(target_change(g, T), target_change(h, T))


def test_units_must_be_loops():
    with pytest.raises(MissingUnit):
        first_loop_units(ARROW)
    G = catalog.graph_from_counts(["0"], {("0", "0"): 1})
    with pytest.raises(MissingUnit):
        check_units(G, {"0": Edge("0", "1", "x")})


def test_partial_contact_raises_on_missing_pair():
    G = catalog.graph_from_counts(["0"], {("0", "0"): 2})
    x, y = G.edges
    c = ContactTable(G, {(x, x): x}, check=False)
    assert c(x, x) == x
    assert not c.is_total()
    with pytest.raises(ContactError):
        c(x, y)


LOOPED = catalog.small_graphs(2, 2, loops_required=True)


@pytest.mark.parametrize("X,T", list(itertools.product(LOOPED[:8], repeat=2)))
def test_first_triangle_with_natural_contact(X, T):
    uX, uT = first_loop_units(X), first_loop_units(T)
    assert first_triangle_check(X, T, uX, uT, "pre").ok
    assert first_triangle_check(X, T, uX, uT, "post").ok


def test_natural_contact_only_splits_through_unit_slices():
    X = catalog.graph_from_counts(["0"], {("0", "0"): 2})
    uX = first_loop_units(X)
    c = natural_contact(X, X, uX, uX)
    assert not c.is_total()


def _instance():
    Y = catalog.graph_from_counts(["0"], {("0", "0"): 2})
    c = catalog.first_contact_table(Y)
    X = catalog.graph_from_counts(["0"], {("0", "0"): 1})
    return X, first_loop_units(X), Y, c


def test_name_component_formula():
    X, uX, Y, c = _instance()
    T, uT = X, uX
    for f in transports(carte_biproduct(X, T), Y):
        g = name_appointment(f, uX, uT)
        for alpha in X.edges:
            for s in T.vertices:
                e = Edge((alpha.src, s), (alpha.dst, s), (alpha, uT[s]))
                assert component(g.emap[alpha], s) == f.emap[e]
        for x in X.vertices:
            for u in T.edges:
                assert g.vmap[x].emap[u] == f.emap[Edge((x, u.src), (x, u.dst), (uX[x], u))]


def test_round_trips_on_a_loop_target():
    X, uX, Y, c = _instance()
    forms = list(transports(carte_biproduct(X, X), Y))
    decomposable = [f for f in forms if decomposability_check(f, uX, uX, c, "pre")]
    assert len({name_appointment(f, uX, uX) for f in decomposable}) == len(decomposable)
    for f in decomposable:
        assert realization(name_appointment(f, uX, uX), c, "pre") == f
    # realizations are predecomposable by construction
    for g in transports(X, exponential_graph(X, Y)):
        assert decomposability_check(realization(g, c, "pre"), uX, uX, c, "pre")


def test_non_decomposable_and_non_neutral_witnesses():
    # 1-vertex target with two loops; the first contact table sends everything to the first loop
    X, uX, Y, c = _instance()
    forms = list(transports(carte_biproduct(X, X), Y))
    bad = [f for f in forms if not decomposability_check(f, uX, uX, c, "pre")]
    assert [f._key[1][0].label for f in bad] == ["00.1"]
    names = list(transports(X, exponential_graph(X, Y)))
    non_neutral = [g for g in names if not neutrality_check(g, uX, uX, c, "pre")]
    assert non_neutral


def test_sweep_reports_exhausted_instances():
    from sweeps import round_trip_sweep

    s = round_trip_sweep(cap=16)
    assert s["failures"] == 0
    assert s["exhausted"] > 0 and s["instances"] > 0
