"""Named verification tasks and their reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from adjunct import finset, graphs, ordered, quantale, structure
from adjunct.checks import BudgetExceeded, HypothesisFailed, Verdict
from adjunct.finset import FinitePoset, FiniteSet, Mapping
from adjunct.graphs import Edge, FiniteGraph, MissingUnit, Transport
from adjunct.ordered import OrderedGraph
from adjunct.quantale import Quantale, VTransport, WeightedGraph
from adjunct.structure import Character, OriginalGraph

from .documents import ParseError, TaskSpec, dumps, to_document

VERDICTS = ("pass", "fail", "exhausted")


class UnknownTask(ValueError):
    pass


@dataclass
class Report:
    task: str
    op: str
    verdict: str
    witnesses: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    timing: float | None = None

    def to_json(self) -> dict:
        out = {
            "schema": 1, "kind": "report", "task": self.task, "op": self.op,
            "verdict": self.verdict, "witnesses": self.witnesses,
            "counts": self.counts, "details": self.details,
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    @property
    def exit_code(self) -> int:
        return {"pass": 0, "fail": 1}.get(self.verdict, 2)


# -- JSON views of witnesses ------------------------------------------------------


def show(obj) -> Any:
    """A JSON-ready, deterministic view of a library value."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Edge):
        if isinstance(obj.label, str):
            return obj.label
        if isinstance(obj.label, tuple) and len(obj.label) == 2 and all(isinstance(x, Edge) for x in obj.label) \
                and isinstance(obj.src, tuple):
            return [show(obj.label[0]), show(obj.label[1])]
        return {"src": show(obj.src), "dst": show(obj.dst), "components": show(obj.label)}
    if isinstance(obj, Transport):
        return {
            "vertex_map": [[show(x), show(obj.vmap[x])] for x in obj.source.vertices],
            "edge_map": [[show(e), show(obj.emap[e])] for e in obj.source.edges],
        }
    if isinstance(obj, VTransport):
        return {"vertex_map": [[show(x), show(obj(x))] for x in obj.source.vertices]}
    if isinstance(obj, Mapping):
        return [[show(x), show(y)] for x, y in obj.items()]
    if isinstance(obj, (WeightedGraph, FinitePoset, FiniteGraph, Quantale, OriginalGraph)):
        try:
            return to_document(obj)
        except TypeError:
            return repr(obj)
    if isinstance(obj, FiniteSet):
        return [show(x) for x in obj]
    if isinstance(obj, dict):
        return [[show(k), show(v)] for k, v in obj.items()]
    if isinstance(obj, (tuple, list)):
        return [show(x) for x in obj]
    return repr(obj)


# -- argument coercion --------------------------------------------------------------


def _set(spec: TaskSpec, key: str) -> FiniteSet:
    raw = spec.arg(key)
    if isinstance(raw, int) and not isinstance(raw, bool):
        if raw < 0:
            raise ParseError("sizes are non-negative", f"{spec.path}.args.{key}")
        return FiniteSet(str(i) for i in range(raw))
    obj = spec.obj(key)
    if not isinstance(obj, FiniteSet):
        raise ParseError("expected a set or a size", f"{spec.path}.args.{key}")
    return obj


def _typed(spec: TaskSpec, key: str, types, what: str):
    obj = spec.obj(key)
    if isinstance(obj, OrderedGraph) and OriginalGraph in _tuple(types) and obj.contact is not None:
        obj = obj.original()
    if not isinstance(obj, types):
        raise ParseError(f"expected {what}", f"{spec.path}.args.{key}")
    return obj


def _tuple(t):
    return t if isinstance(t, tuple) else (t,)


def _graph(spec: TaskSpec, key: str) -> FiniteGraph:
    obj = spec.obj(key)
    if isinstance(obj, (OriginalGraph, OrderedGraph)):
        return obj.graph
    if not isinstance(obj, FiniteGraph):
        raise ParseError("expected a graph", f"{spec.path}.args.{key}")
    return obj


def _unital(spec: TaskSpec, key: str):
    """A graph with chosen units: given ones, or the first loop at each vertex."""
    obj = spec.obj(key)
    if isinstance(obj, (OriginalGraph, OrderedGraph)) and obj.units is not None:
        return obj.graph, obj.units
    G = obj.graph if isinstance(obj, (OriginalGraph, OrderedGraph)) else obj
    if not isinstance(G, FiniteGraph):
        raise ParseError("expected a graph", f"{spec.path}.args.{key}")
    try:
        return G, graphs.first_loop_units(G)
    except MissingUnit as exc:
        raise ParseError(str(exc), f"{spec.path}.args.{key}") from None


def _ordered(spec: TaskSpec, key: str) -> OrderedGraph:
    obj = spec.obj(key)
    if isinstance(obj, OriginalGraph):
        return ordered.discrete(obj)
    if not (isinstance(obj, OrderedGraph) and obj.contact is not None):
        raise ParseError("expected an ordered graph with a contact table", f"{spec.path}.args.{key}")
    return obj


def _choice(spec: TaskSpec, key: str, options, default):
    val = spec.arg(key, default)
    if val not in options:
        raise ParseError(f"{key} must be one of {', '.join(options)}", f"{spec.path}.args.{key}")
    return val


def _vertex(spec: TaskSpec, key: str, G: FiniteGraph):
    v = spec.arg(key)
    if not G.has_vertex(v):
        raise ParseError(f"unknown vertex {v!r}", f"{spec.path}.args.{key}")
    return v


def _charge(need: int, budget: int) -> None:
    if need > budget:
        raise BudgetExceeded(need, budget)


# -- the operations -----------------------------------------------------------------
#
# Each operation returns ``(ok, witnesses, counts, details)``.

Outcome = tuple
OPS: dict[str, Callable[[TaskSpec, int], Outcome]] = {}


def op(name: str):
    def register(fn):
        OPS[name] = fn
        return fn
    return register


def _verdict(v: Verdict, **counts) -> Outcome:
    counts.setdefault("checked", v.checked)
    return v.ok, ([] if v.ok else [show(v.witness)]), counts, {}


@op("finset.bijection")
def _finset_bijection(spec, budget):
    X, T, Y = _set(spec, "X"), _set(spec, "T"), _set(spec, "Y")
    forms = len(Y) ** (len(X) * len(T))
    _charge(2 * forms, budget)
    v = finset.bijection_check(X, T, Y)
    names = len(finset.exponential(X, finset.exponential(T, Y)))
    return _verdict(v, forms=forms, names=names)


@op("finset.triangles")
def _finset_triangles(spec, budget):
    X, T, Y = _set(spec, "X"), _set(spec, "T"), _set(spec, "Y")
    _charge(len(X) * len(T) + len(Y) ** len(T), budget)
    return _verdict(finset.triangle_check(X, T, Y))


@op("finset.naturality")
def _finset_naturality(spec, budget):
    """Every square for ``u: X -> X`` and ``v: Y -> Y``."""
    X, T, Y = _set(spec, "X"), _set(spec, "T"), _set(spec, "Y")
    squares = len(X) ** len(X) * len(Y) ** len(Y)
    _charge(squares * len(Y) ** (len(X) * len(T)), budget)
    n = 0
    for u in finset.exponential(X, X):
        for v in finset.exponential(Y, Y):
            r = finset.naturality_check(u, v, T)
            n += r.checked
            if not r:
                return False, [show((u, v, r.witness))], {"checked": n, "squares": squares}, {}
    return True, [], {"checked": n, "squares": squares}, {}


def _poset(spec, key) -> FinitePoset:
    return _typed(spec, key, FinitePoset, "a poset")


@op("finset.eval_monotone")
def _finset_eval(spec, budget):
    T, Y = _poset(spec, "T"), _poset(spec, "Y")
    _charge(len(Y.carrier) ** len(T.carrier), budget)
    E = finset.poset_exponential(T, Y)
    return _verdict(finset.poset_eval_monotone_check(T, Y), monotone_maps=len(E.carrier))


@op("finset.limit_continuity")
def _finset_limit(spec, budget):
    P, Q = _poset(spec, "P"), _poset(spec, "Q")
    _charge(len(Q.carrier) ** len(P.carrier), budget)
    n = monotone = 0
    for f in finset.all_mappings(P.carrier, Q.carrier):
        n += 1
        mono = finset.is_monotone(f, P, Q)
        monotone += mono
        if mono != finset.is_limit_continuous(f, P, Q):
            return False, [show(f)], {"checked": n, "monotone": monotone}, {}
    return True, [], {"checked": n, "monotone": monotone}, {}


@op("graphs.count_transports")
def _graphs_count(spec, budget):
    T, Y = _graph(spec, "T"), _graph(spec, "Y")
    n = graphs.count_transports(T, Y, cap=budget)
    _charge(n, budget)
    return True, [], {"transports": n}, {}


@op("graphs.exponential")
def _graphs_exponential(spec, budget):
    T, Y = _graph(spec, "T"), _graph(spec, "Y")
    _charge(graphs.count_transports(T, Y, cap=budget), budget)
    E = graphs.exponential_graph(T, Y)
    V = E.vertices
    edges = sum(E.hom_size(p, q) for p in V for q in V)
    return True, [], {"vertices": len(V), "edges": edges}, {}


@op("graphs.round_trip")
def _graphs_round_trip(spec, budget):
    X, uX = _unital(spec, "X")
    T, uT = _unital(spec, "T")
    Y = _typed(spec, "Y", OriginalGraph, "an original graph")
    out = graphs.round_trip_instance(X, uX, T, uT, Y.graph, Y.contact, cap=budget)
    if out is None:
        raise BudgetExceeded(budget + 1, budget)
    counts = {k: out[k] for k in ("forms", "decomposable", "names", "neutral")}
    details = {
        "non_decomposable": show(out["non_decomposable"]),
        "non_neutral": show(out["non_neutral"]),
    }
    return not out["failures"], [show(f) for f in out["failures"][:1]], counts, details


def _form(spec, key, X, T, Y: FiniteGraph) -> Transport:
    f = _typed(spec, key, Transport, "a transport")
    if f.source != graphs.carte_biproduct(X, T) or f.target != Y:
        raise ParseError("form must run from the product of X and T into Y", f"{spec.path}.args.{key}")
    return f


@op("graphs.decomposability")
def _graphs_decomposability(spec, budget):
    X, uX = _unital(spec, "X")
    T, uT = _unital(spec, "T")
    Y = _typed(spec, "Y", OriginalGraph, "an original graph")
    f = _form(spec, "form", X, T, Y.graph)
    side = _choice(spec, "side", ("pre", "post"), "pre")
    _charge(len(f.source.edges), budget)
    return _verdict(graphs.decomposability_check(f, uX, uT, Y.contact, side))


@op("structure.validate_original")
def _structure_original(spec, budget):
    G = _typed(spec, "graph", OriginalGraph, "an original graph")
    _charge(len(G.graph.edges), budget)
    return _verdict(structure.validate_original(G))


@op("structure.validate_category")
def _structure_category(spec, budget):
    G = _typed(spec, "graph", OriginalGraph, "an original graph")
    _charge(sum(1 for _ in structure.composable_triples(G)), budget)
    return _verdict(structure.validate_category(G))


@op("structure.classify")
def _structure_classify(spec, budget):
    X = _typed(spec, "source", OriginalGraph, "an original graph")
    Y = _typed(spec, "target", OriginalGraph, "an original graph")
    f = _typed(spec, "transport", Transport, "a transport")
    if f.source != X.graph or f.target != Y.graph:
        raise ParseError("transport endpoints differ from source and target", f"{spec.path}.args.transport")
    want = _choice(spec, "expect", ("crude", "natural"), "natural")
    c = structure.classify_transport(f, X, Y)
    v = c.crude if want == "crude" else c.natural
    ok, wit, counts, _ = _verdict(v)
    return ok, wit, counts, {"crude": c.crude.ok, "natural": c.natural.ok}


@op("structure.evaluations_agree")
def _structure_evals(spec, budget):
    T = _graph(spec, "T")
    Y = _typed(spec, "Y", OriginalGraph, "an original graph")
    _charge(graphs.count_transports(T, Y.graph, cap=budget), budget)
    return _verdict(structure.evaluations_agree(T, Y))


@op("structure.composition_search")
def _structure_composition(spec, budget):
    T = _graph(spec, "T")
    Y = _typed(spec, "Y", OriginalGraph, "an original graph")
    _charge(graphs.count_transports(T, Y.graph, cap=budget), budget)
    return _verdict(structure.natural_composition_search(T, Y, budget=budget))


def _character(spec, key="character") -> Character:
    return _typed(spec, key, Character, "a character")


@op("structure.yoneda")
def _structure_yoneda(spec, budget):
    F = _character(spec)
    x = _vertex(spec, "x", F.base.graph)
    _charge(structure.count_character_transforms(F.base, x, F), budget)
    c = structure.yoneda_correspondence(F, x, budget)
    counts = {"social_points": len(c.points), "natural_transforms": len(c.transforms)}
    return c.bijective, ([] if c.bijective else [show(c.witness)]), counts, {"points": show(c.points)}


@op("structure.edge_correspondence")
def _structure_edges(spec, budget):
    X = _typed(spec, "graph", OriginalGraph, "an original graph")
    x, y = _vertex(spec, "x", X.graph), _vertex(spec, "y", X.graph)
    _charge(structure.count_character_transforms(X, x, structure.representable_character(X, y)), budget)
    c = structure.edge_transform_correspondence(X, x, y)
    ok = c.bijective and c.composition_ok
    counts = {"social_edges": len(c.social_edges), "natural_transforms": len(c.transforms),
              "hom": X.graph.hom_size(x, y)}
    return ok, ([] if ok else [show(c.witness)]), counts, {}


@op("structure.fullfaithful")
def _structure_fullfaithful(spec, budget):
    X = _typed(spec, "graph", OriginalGraph, "an original graph")
    V = X.graph.vertices
    _charge(sum(structure.count_character_transforms(X, a, structure.representable_character(X, b))
                for a in V for b in V), budget)
    return _verdict(structure.fullfaithful_check(X))


@op("structure.iso")
def _structure_iso(spec, budget):
    X = _typed(spec, "graph", OriginalGraph, "an original graph")
    label = spec.arg("edge")
    theta = next((e for e in X.graph.edges if e.label == label), None)
    if theta is None:
        raise ParseError(f"unknown edge {label!r}", f"{spec.path}.args.edge")
    _charge(len(X.graph.edges), budget)
    r = structure.iso_check(X, theta)
    ok = r.inverse is not None and r.transforms_inverse
    return ok, ([] if ok else [label]), {}, {"inverse": show(r.inverse)}


@op("structure.bijection_suite")
def _structure_bijection(spec, budget):
    X = _typed(spec, "X", OriginalGraph, "an original graph")
    T = _typed(spec, "T", OriginalGraph, "an original graph")
    Y = _typed(spec, "Y", OriginalGraph, "an original graph")
    r = structure.bijection_suite(X, T, Y, budget=budget)
    counts = {"forms": r.forms, "decomposable": r.decomposable, "names": r.names,
              "neutral_natural": r.neutral_natural}
    return r.ok, ([] if r.ok else [show(r.witness)]), counts, {}


@op("ordered.contact")
def _ordered_contact(spec, budget):
    Y = _ordered(spec, "Y")
    _charge(len(Y.graph.edges) ** 3, budget)
    mono, assoc = ordered.contact_monotone_check(Y), ordered.contact_associative(Y)
    ok = mono.ok and assoc.ok
    wit = [] if ok else [show(("monotone", mono.witness) if not mono else ("associative", assoc.witness))]
    return ok, wit, {}, {"monotone": mono.ok, "associative": assoc.ok}


@op("ordered.adjunction_suite")
def _ordered_suite(spec, budget):
    X, uX = _unital(spec, "X")
    T, uT = _unital(spec, "T")
    Y = _ordered(spec, "Y")
    r = ordered.adjunction_inequality_suite(X, uX, T, uT, Y, budget=budget)
    counts = {k: getattr(r, k) for k in ("forms", "eligible_forms", "names", "eligible_names",
                                         "form_pairs", "name_pairs")}
    return r.ok, [show(w) for w in r.failures[:1]], counts, {}


@op("ordered.regular_bound")
def _ordered_bound(spec, budget):
    X, uX = _unital(spec, "X")
    T, uT = _unital(spec, "T")
    Y = _ordered(spec, "Y")
    f = _form(spec, "form", X, T, Y.graph)
    side = _choice(spec, "side", ("pre", "post"), "pre")
    r = ordered.regular_bound(f, uX, uT, Y, side, budget=budget)
    details = {"bound": show(r.bound), "regular": r.regular, "bounds_form": r.bounds_f, "extremal": r.extremal}
    return r.ok, ([] if r.ok else [show(r.witness)]), {"compared": r.compared}, details


@op("ordered.corestriction")
def _ordered_corestriction(spec, budget):
    X, uX = _unital(spec, "X")
    T, uT = _unital(spec, "T")
    Y = _ordered(spec, "Y")
    f = _form(spec, "form", X, T, Y.graph)
    target = _choice(spec, "target", ("continuous", "cocontinuous"), "continuous")
    _charge(len(X.edges), budget)
    v = ordered.corestriction_check(f, uX, uT, Y, target, bool(spec.arg("require_hypotheses", True)))
    return _verdict(v)


@op("ordered.closure")
def _ordered_closure(spec, budget):
    T = _graph(spec, "T")
    Y = _ordered(spec, "Y")
    side = _choice(spec, "side", ("continuous", "cocontinuous"), "continuous")
    _charge(graphs.count_transports(T, Y.graph, cap=budget), budget)
    return _verdict(ordered.continuous_composition_closure(
        T, Y, side, bool(spec.arg("require_hypotheses", True)), budget=budget))


@op("ordered.social_points")
def _ordered_social(spec, budget):
    F = _character(spec)
    x = _vertex(spec, "x", F.base.graph)
    side = _choice(spec, "side", ("lower", "upper"), "lower")
    _charge(len(F.values[x]) * len(F.base.graph.edges) ** 2, budget)
    pts = ordered.social_points_ordered(F, x, side)
    return True, [], {"points": len(pts), "values": len(F.values[x])}, {"points": show(pts)}


@op("ordered.continuous_yoneda")
def _ordered_yoneda(spec, budget):
    F = _character(spec)
    x = _vertex(spec, "x", F.base.graph)
    _charge(structure.count_character_transforms(F.base, x, F), budget)
    r = ordered.continuous_yoneda_check(F, x, budget)
    counts = {"lower_points": len(r.lower_points), "continuous_transforms": r.continuous_transforms}
    details = {"generated_ok": r.generated_ok, "bijective": r.bijective}
    ok = r.generated_ok if spec.arg("mode", "generated") == "generated" else r.bijective
    return ok, ([] if ok else [show(r.witness)]), counts, details


def _quantale(spec, key="quantale") -> Quantale:
    return _typed(spec, key, Quantale, "a quantale")


@op("quantale.validate")
def _quantale_validate(spec, budget):
    Q = _quantale(spec)
    _charge(len(Q.elements) ** 4, budget)
    return _verdict(quantale.validate_quantale(Q), elements=len(Q.elements))


@op("quantale.meet_distribution")
def _quantale_meets(spec, budget):
    Q = _quantale(spec)
    _charge(len(Q.elements) ** 4, budget)
    return _verdict(quantale.meet_distribution_check(Q))


def _weighted(spec, key) -> WeightedGraph:
    return _typed(spec, key, WeightedGraph, "a weighted graph")


@op("quantale.v_category")
def _quantale_category(spec, budget):
    X = _weighted(spec, "graph")
    _charge(len(X.vertices) ** 3, budget)
    return _verdict(quantale.v_category_validate(X))


@op("quantale.exponential")
def _quantale_exponential(spec, budget):
    T, Y = _weighted(spec, "T"), _weighted(spec, "Y")
    _charge(len(Y.vertices) ** len(T.vertices), budget)
    E = quantale.v_exponential(T, Y)
    weights = [[show(p), show(q), E.w(p, q)] for p in E.vertices for q in E.vertices]
    return True, [], {"vertices": len(E.vertices)}, {"weights": weights}


@op("quantale.adjunction_suite")
def _quantale_suite(spec, budget):
    X, T, Y = _weighted(spec, "X"), _weighted(spec, "T"), _weighted(spec, "Y")
    r = quantale.v_adjunction_suite(X, T, Y, budget=budget)
    counts = {"forms": r.forms, "eligible_forms": r.eligible_forms, "names": r.names,
              "eligible_names": r.eligible_names}
    return r.ok, [show(w) for w in r.failures[:1]], counts, {}


@op("quantale.classify")
def _quantale_classify(spec, budget):
    f = _typed(spec, "transport", VTransport, "a vtransport")
    want = _choice(spec, "expect", ("crude", "continuous", "cocontinuous", "natural"), "natural")
    _charge(len(f.source.vertices) ** 3, budget)
    c = quantale.v_functor_classify(f)
    ok, wit, counts, _ = _verdict(getattr(c, want))
    details = {k: getattr(c, k).ok for k in ("crude", "continuous", "cocontinuous", "natural")}
    return ok, wit, counts, details


# -- running ------------------------------------------------------------------------


def run_task(spec: TaskSpec, budget: int = 10**6, timing: bool = False) -> Report:
    """Dispatch a parsed task; unknown names raise :class:`UnknownTask`.

    Argument and hypothesis errors propagate; an over-budget enumeration
    yields an ``exhausted`` report.
    """
    fn = OPS.get(spec.op)
    if fn is None:
        raise UnknownTask(f"unknown task {spec.op!r}")
    start = time.perf_counter()
    try:
        ok, witnesses, counts, details = fn(spec, budget)
        verdict = "pass" if ok else "fail"
    except BudgetExceeded as exc:
        verdict, witnesses, counts = "exhausted", [], {"needed": exc.needed, "budget": exc.budget}
        details = {}
    elapsed = round(time.perf_counter() - start, 6) if timing else None
    return Report(spec.id, spec.op, verdict, witnesses, counts, details, elapsed)


def render(report: Report, fmt: str = "text") -> str:
    if fmt == "machine":
        return dumps(report.to_json())
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    compact = lambda v: json.dumps(v, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    lines = [f"verdict: {report.verdict}", f"task: {report.task}", f"op: {report.op}"]
    for title, table in (("counts", report.counts), ("details", report.details)):
        if table:
            lines.append(f"{title}:")
            lines += [f"  {k}: {compact(table[k])}" for k in sorted(table)]
    if report.witnesses:
        lines.append("witnesses:")
        lines += [f"  - {compact(w)}" for w in report.witnesses]
    if report.timing is not None:
        lines.append(f"timing: {report.timing}s")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Report:
    """Read back a machine-format report."""
    data = json.loads(text)
    if data.get("kind") != "report" or data.get("verdict") not in VERDICTS:
        raise ValueError("not a report document")
    return Report(data["task"], data["op"], data["verdict"], data["witnesses"],
                  data["counts"], data["details"], data.get("timing"))


__all__ = ["OPS", "Report", "UnknownTask", "HypothesisFailed", "parse_report", "render", "run_task", "show"]
