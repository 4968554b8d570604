"""Exhaustive sweeps shared by the unit tests and the acceptance run.

Each sweep returns a JSON-ready summary so that two runs, or a run with
ordered predicates under the discrete order, can be compared byte for byte.
"""

import json

from adjunct import catalog, graphs, ordered, structure
from adjunct.cli.tasks import show
from adjunct.ordered import DiscreteOrder
from adjunct.structure import Character

DISCRETE = DiscreteOrder()


def unital_graphs():
    return [(G, graphs.first_loop_units(G)) for G in catalog.small_graphs(2, 2, loops_required=True)]


def contact_targets():
    """Every 1-vertex graph with each contact table; 2-vertex graphs with the first one."""
    out = []
    for Y in catalog.small_graphs(2, 2):
        if len(Y.vertices) == 1:
            out.extend((Y, c) for c in catalog.contact_tables(Y))
        else:
            c = catalog.first_contact_table(Y)
            if c is not None:
                out.append((Y, c))
    return out


def _equality_predicates(uX, uT, c):
    dec = lambda f: graphs.decomposability_check(f, uX, uT, c, "pre").ok
    neu = lambda g: (graphs.neutrality_check(g, uX, uT, c, "pre").ok
                     and graphs.neutrality_check(g, uX, uT, c, "post").ok)
    return dec, neu


def _discrete_predicates(uX, uT, c):
    both = ("lower", "upper")
    dec = lambda f: all(ordered.decomposition_inequality_check(f, uX, uT, c, DISCRETE, "pre", d).ok for d in both)
    neu = lambda g: all(ordered.neutrality_inequality_check(g, uX, uT, c, DISCRETE, side, d).ok
                        for side in ("pre", "post") for d in both)
    return dec, neu


def round_trip_sweep(cap: int = 256, discrete: bool = False) -> dict:
    make = _discrete_predicates if discrete else _equality_predicates
    units = unital_graphs()
    targets = contact_targets()
    summary = {"instances": 0, "exhausted": 0, "forms": 0, "decomposable": 0, "names": 0,
               "neutral": 0, "failures": 0, "non_decomposable": None, "non_neutral": None}
    for i, (X, uX) in enumerate(units):
        for j, (T, uT) in enumerate(units):
            for k, (Y, c) in enumerate(targets):
                dec, neu = make(uX, uT, c)
                out = graphs.round_trip_instance(X, uX, T, uT, Y, c, cap, dec, neu)
                if out is None:
                    summary["exhausted"] += 1
                    continue
                summary["instances"] += 1
                for key in ("forms", "decomposable", "names", "neutral"):
                    summary[key] += out[key]
                summary["failures"] += len(out["failures"])
                for key in ("non_decomposable", "non_neutral"):
                    if summary[key] is None and out[key] is not None:
                        summary[key] = {"X": i, "T": j, "Y": k, "witness": show(out[key])}
    return summary


CATEGORIES = {
    "walking_arrow": catalog.walking_arrow,
    "composable_pair": catalog.composable_pair,
    "z2": catalog.z2,
}


def evaluation_sweep(discrete: bool = False) -> dict:
    """Natural transforms into each validated category, with both evaluations."""
    exponents = catalog.small_graphs(2, 1)
    summary = {}
    for name, make in CATEGORIES.items():
        Y = make()
        assert structure.validate_category(Y)
        rows = []
        for T in exponents:
            if graphs.count_transports(T, Y.graph) > 64:
                continue
            E = graphs.exponential_graph(T, Y.graph)
            if discrete:
                nat = [a for a in E.edges
                       if ordered.continuity_check(a, Y.contact, DISCRETE, "continuous")
                       and ordered.continuity_check(a, Y.contact, DISCRETE, "cocontinuous")]
            else:
                nat = [a for a in E.edges if structure.natural_transform_check(a, Y.contact)]
            agree = all(graphs.evaluate(a, u, Y.contact, "pre") == graphs.evaluate(a, u, Y.contact, "post")
                        for a in nat for u in T.edges)
            rows.append([len(T.vertices), len(T.edges), len(E.edges), len(nat), agree])
        summary[name] = rows
    return summary


def characters(X, budget: int = 4096):
    """Unit-preserving characters over ``X`` with value sets of size one or two."""
    import itertools

    G = X.graph
    sizes = [range(1, 3)] * len(G.vertices)
    for ns in itertools.product(*sizes):
        values = {a: tuple(f"m{i}" for i in range(n)) for a, n in zip(G.vertices, ns)}
        slots = [(f, m) for f in G.edges for m in values[f.dst]]
        total = 1
        for f, _ in slots:
            total *= len(values[f.src])
        if total > budget:
            continue
        for imgs in itertools.product(*(values[f.src] for f, _ in slots)):
            action = {f: {} for f in G.edges}
            for (f, m), v in zip(slots, imgs):
                action[f][m] = v
            F = Character(X, values, action)
            if F.preserves_units():
                yield F


def yoneda_sweep(discrete: bool = False) -> dict:
    summary = {}
    for name, make in (("walking_arrow", catalog.walking_arrow), ("m3", catalog.m3)):
        X = make()
        rows = [0, 0, 0]  # characters, vertex checks, mismatches
        for F in characters(X):
            rows[0] += 1
            for x in X.graph.vertices:
                rows[1] += 1
                if discrete:
                    pts = ordered.social_points_ordered(F, x, "lower")
                    nats = [a for a in structure.character_transforms(X, x, F)
                            if ordered.is_continuous_character_transform(F, x, a)]
                    ok = len(pts) == len(nats)
                else:
                    c = structure.yoneda_correspondence(F, x)
                    ok = c.bijective and len(c.points) == len(c.transforms)
                rows[2] += not ok
        summary[name] = rows
    return summary


def dump(summary) -> str:
    return json.dumps(summary, sort_keys=True)
