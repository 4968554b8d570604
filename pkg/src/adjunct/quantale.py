"""Graphs weighted in a finite commutative quantale.

In a quantale every hom-object is a single value, so an arrow between two
values exists exactly when they are ordered.  A weighted-graph transport is
then just a vertex map that does not decrease weights, and every equation
about edge maps becomes a comparison of values.

Two instances are provided: the Boolean quantale, whose weighted graphs are
relations, and a truncated tropical chain ``{0, 1, ..., n, inf}`` ordered
by reversed numeric order with saturating addition, whose weighted graphs
are distance tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Hashable, Iterable, Iterator, Mapping

from adjunct.checks import BudgetExceeded, Verdict
from adjunct.finset import FinitePoset, FiniteSet


class Quantale:
    def __init__(self, order: FinitePoset, tensor: Mapping, unit: Hashable):
        self.order = order
        self.elements = order.carrier.elements
        self.table = dict(tensor)
        self.unit = unit
        for x in self.elements:
            for y in self.elements:
                if self.table.get((x, y)) not in order.carrier:
                    raise ValueError(f"tensor cell ({x!r}, {y!r}) is missing or outside the carrier")
        if unit not in order.carrier:
            raise ValueError(f"unit {unit!r} is not an element")
        self._meet2 = None

    def le(self, x, y) -> bool:
        return self.order.le(x, y)

    def tensor(self, x, y):
        return self.table[x, y]

    def tensor_all(self, xs: Iterable):
        return reduce(self.tensor, xs, self.unit)

    def _bound(self, xs, lower: bool):
        xs = list(xs)
        cands = [
            z for z in self.elements
            if all((self.le(z, x) if lower else self.le(x, z)) for x in xs)
        ]
        best = [
            z for z in cands
            if all((self.le(w, z) if lower else self.le(z, w)) for w in cands)
        ]
        if len(best) != 1:
            raise ValueError(f"no {'meet' if lower else 'join'} for {xs!r}")
        return best[0]

    def _tables(self):
        if self._meet2 is None:
            E = self.elements
            self._top = self._bound([], lower=True)
            self._bottom = self._bound([], lower=False)
            self._meet2 = {(x, y): self._bound([x, y], lower=True) for x in E for y in E}
            self._join2 = {(x, y): self._bound([x, y], lower=False) for x in E for y in E}

    def meet(self, xs: Iterable):
        self._tables()
        return reduce(lambda a, b: self._meet2[a, b], xs, self._top)

    def join(self, xs: Iterable):
        self._tables()
        return reduce(lambda a, b: self._join2[a, b], xs, self._bottom)

    @property
    def top(self):
        self._tables()
        return self._top

    @property
    def bottom(self):
        self._tables()
        return self._bottom

    def __repr__(self) -> str:
        return f"Quantale({list(self.elements)!r}, unit={self.unit!r})"


def validate_quantale(Q: Quantale) -> Verdict:
    """Lattice, associative, commutative, monotone, unital, middle-four interchange.

    Witnesses are tagged with the failing law.
    """
    E = Q.elements
    n = 1
    try:
        Q._bound([], lower=True)
        Q._bound([], lower=False)
    except ValueError:
        return Verdict(False, ("lattice",), n)
    for x, y in itertools.product(E, repeat=2):
        n += 1
        try:
            Q._bound([x, y], lower=True)
            Q._bound([x, y], lower=False)
        except ValueError:
            return Verdict(False, ("lattice", x, y), n)
    for x in E:
        n += 1
        if Q.tensor(Q.unit, x) != x or Q.tensor(x, Q.unit) != x:
            return Verdict(False, ("unit", x), n)
    for x, y in itertools.product(E, repeat=2):
        n += 1
        if Q.tensor(x, y) != Q.tensor(y, x):
            return Verdict(False, ("commutative", x, y), n)
    for x, y, z in itertools.product(E, repeat=3):
        n += 1
        if Q.tensor(Q.tensor(x, y), z) != Q.tensor(x, Q.tensor(y, z)):
            return Verdict(False, ("associative", x, y, z), n)
    for x, x2, y in itertools.product(E, repeat=3):
        n += 1
        if Q.le(x, x2) and not (Q.le(Q.tensor(x, y), Q.tensor(x2, y)) and Q.le(Q.tensor(y, x), Q.tensor(y, x2))):
            return Verdict(False, ("monotone", x, x2, y), n)
    for p, s, r, t in itertools.product(E, repeat=4):
        n += 1
        if Q.tensor(Q.tensor(p, s), Q.tensor(r, t)) != Q.tensor(Q.tensor(p, r), Q.tensor(s, t)):
            return Verdict(False, ("interchange", p, s, r, t), n)
    return Verdict(True, None, n)


def meet_distribution_check(Q: Quantale) -> Verdict:
    """``(p1 . r1) meet (p2 . r2) = (p1 meet p2) . (r1 meet r2)`` and ``top . top = top``.

    Binary and empty meets generate all finite ones, so this decides the
    property for families of any size.
    """
    n = 1
    if Q.tensor(Q.top, Q.top) != Q.top:
        return Verdict(False, ("empty",), n)
    for p1, r1, p2, r2 in itertools.product(Q.elements, repeat=4):
        n += 1
        lhs = Q.meet([Q.tensor(p1, r1), Q.tensor(p2, r2)])
        rhs = Q.tensor(Q.meet([p1, p2]), Q.meet([r1, r2]))
        if lhs != rhs:
            return Verdict(False, (p1, r1, p2, r2), n)
    return Verdict(True, None, n)


@lru_cache(maxsize=None)
def boolean() -> Quantale:
    B = FiniteSet(["0", "1"])
    order = FinitePoset(B, [("0", "0"), ("0", "1"), ("1", "1")])
    table = {(x, y): ("1" if x == y == "1" else "0") for x in B for y in B}
    return Quantale(order, table, "1")


INF = "inf"


@lru_cache(maxsize=None)
def tropical(n: int = 3) -> Quantale:
    """``{0, ..., n, inf}`` with ``x <= y`` iff ``x >= y`` numerically.

    Sums above ``n`` saturate to ``inf``.
    """
    elems = [str(i) for i in range(n + 1)] + [INF]

    def num(x):
        return float("inf") if x == INF else int(x)

    def add(x, y):
        s = num(x) + num(y)
        return INF if s > n else str(int(s))

    C = FiniteSet(elems)
    order = FinitePoset(C, [(x, y) for x in elems for y in elems if num(x) >= num(y)])
    return Quantale(order, {(x, y): add(x, y) for x in elems for y in elems}, "0")


def tropical_value(x) -> float:
    return float("inf") if x == INF else int(x)


# -- weighted graphs -------------------------------------------------------------


class WeightedGraph:
    """Vertices with a quantale weight ``W(x, y)`` on every ordered pair."""

    def __init__(self, quantale: Quantale, vertices: Iterable[Hashable], weights: Mapping):
        self.quantale = quantale
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex")
        self.weights = {}
        for x in self.vertices:
            for y in self.vertices:
                w = weights.get((x, y))
                if w not in quantale.order.carrier:
                    raise ValueError(f"weight of ({x!r}, {y!r}) is missing or not a quantale element")
                self.weights[x, y] = w
        self._hash = None

    def w(self, x, y):
        return self.weights[x, y]

    def _key(self):
        return (self.vertices, tuple(self.weights[x, y] for x in self.vertices for y in self.vertices))

    def __eq__(self, other) -> bool:
        return self is other or (
            isinstance(other, WeightedGraph)
            and self.quantale is other.quantale
            and self._key() == other._key()
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"WeightedGraph({len(self.vertices)} vertices)"


class ProductWeighted(WeightedGraph):
    def __init__(self, left: WeightedGraph, right: WeightedGraph):
        Q = left.quantale
        if right.quantale is not Q:
            raise ValueError("weighted graphs over different quantales")
        vs = list(itertools.product(left.vertices, right.vertices))
        super().__init__(
            Q, vs,
            {((x, s), (y, t)): Q.tensor(left.w(x, y), right.w(s, t)) for x, s in vs for y, t in vs},
        )
        self.left = left
        self.right = right


class ExponentialWeighted(WeightedGraph):
    def __init__(self, exponent: WeightedGraph, base: WeightedGraph):
        Q = base.quantale
        if exponent.quantale is not Q:
            raise ValueError("weighted graphs over different quantales")
        vs = list(vtransports(exponent, base))
        super().__init__(
            Q, vs,
            {(p, q): Q.meet(base.w(p(s), q(s)) for s in exponent.vertices) for p in vs for q in vs},
        )
        self.exponent = exponent
        self.base = base


class NotVTransport(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class VTransport:
    """A vertex map with ``W_X(x, y) <= W_Y(f x, f y)`` for every pair."""

    __slots__ = ("source", "target", "values", "_index")

    def __init__(self, source: WeightedGraph, target: WeightedGraph, vmap, check: bool = True):
        if isinstance(vmap, Mapping):
            values = tuple(vmap[x] for x in source.vertices)
        else:
            values = tuple(vmap)
        self.source = source
        self.target = target
        self.values = values
        self._index = {x: i for i, x in enumerate(source.vertices)}
        if check:
            bad = weight_violation(self)
            if bad is not None:
                raise NotVTransport(f"weight decreases on {bad!r}", bad)

    def __call__(self, x):
        return self.values[self._index[x]]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VTransport)
            and self.values == other.values
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return "VTransport(" + ", ".join(f"{x!r}->{y!r}" for x, y in zip(self.source.vertices, self.values)) + ")"


def weight_violation(f: VTransport):
    Q = f.source.quantale
    for x in f.source.vertices:
        for y in f.source.vertices:
            if not Q.le(f.source.w(x, y), f.target.w(f(x), f(y))):
                return (x, y)
    return None


def vtransports(T: WeightedGraph, Y: WeightedGraph, budget: int | None = None) -> Iterator[VTransport]:
    """All weight-respecting vertex maps, in lexicographic order of images."""
    total = len(Y.vertices) ** len(T.vertices)
    if budget is not None and total > budget:
        raise BudgetExceeded(total, budget)
    for values in itertools.product(Y.vertices, repeat=len(T.vertices)):
        f = VTransport(T, Y, values, check=False)
        if weight_violation(f) is None:
            yield f


def v_biproduct(X: WeightedGraph, Y: WeightedGraph) -> ProductWeighted:
    return ProductWeighted(X, Y)


@lru_cache(maxsize=1024)
def v_exponential(T: WeightedGraph, Y: WeightedGraph) -> ExponentialWeighted:
    return ExponentialWeighted(T, Y)


def v_category_validate(X: WeightedGraph) -> Verdict:
    """``e <= W(x,x)`` and ``W(x,y) . W(y,z) <= W(x,z)``."""
    Q = X.quantale
    n = 0
    for x in X.vertices:
        n += 1
        if not Q.le(Q.unit, X.w(x, x)):
            return Verdict(False, ("unit", x), n)
    for x, y, z in itertools.product(X.vertices, repeat=3):
        n += 1
        if not Q.le(Q.tensor(X.w(x, y), X.w(y, z)), X.w(x, z)):
            return Verdict(False, ("contact", x, y, z), n)
    return Verdict(True, None, n)


def unit_violation(X: WeightedGraph):
    Q = X.quantale
    for x in X.vertices:
        if not Q.le(Q.unit, X.w(x, x)):
            return x
    return None


class UnitConditionFailed(ValueError):
    pass


def v_name(f: VTransport) -> VTransport:
    """Curry ``f: X (x) T -> Y`` into ``X -> Y^T`` and verify both transports."""
    P = f.source
    if not isinstance(P, ProductWeighted):
        raise TypeError("expected a transport out of a weighted biproduct")
    X, T, Y = P.left, P.right, f.target
    for G in (X, T):
        bad = unit_violation(G)
        if bad is not None:
            raise UnitConditionFailed(f"unit is not below the self-weight at {bad!r}")
    E = v_exponential(T, Y)
    images = []
    for x in X.vertices:
        try:
            images.append(VTransport(T, Y, [f((x, t)) for t in T.vertices]))
        except NotVTransport as exc:
            raise NotVTransport(f"partial form at {x!r} decreases weight on {exc.witness!r}", (x, exc.witness))
    return VTransport(X, E, images)


def v_realize(g: VTransport, side: str = "pre") -> VTransport:
    """Uncurry ``g: X -> Y^T``; needs ``Y`` to be a category over the quantale.

    ``pre`` and ``post`` give the same vertex map; the argument is kept so
    that both routes can be asserted equal.
    """
    E = g.target
    if not isinstance(E, ExponentialWeighted):
        raise TypeError("expected a transport into a weighted exponential")
    if side not in ("pre", "post"):
        raise ValueError(f"side must be 'pre' or 'post', not {side!r}")
    X, T, Y = g.source, E.exponent, E.base
    v = v_category_validate(Y)
    if not v:
        raise NotVTransport("target is not a category over the quantale", v.witness)
    P = v_biproduct(X, T)
    return VTransport(P, Y, [g(x)(t) for x, t in P.vertices])


def v_condition_check(h: VTransport, kind: str) -> Verdict:
    """Weight form of lower decomposability (forms) or upper neutrality (names).

    Each edge-set image is replaced by the weight of the hom it lands in.
    For a form ``f`` on ``X (x) T``, lower decomposability asks
    ``W(f(a,s), f(b,s)) . W(f(b,s), f(b,t)) <= W(f(a,s), f(b,t))`` and the
    post-side analogue.  For a name ``g: X -> Y^T``, upper neutrality asks
    the unit-padded composites ``W(g(a)s, g(b)s) . W(g(b)s, g(b)s)`` and
    ``W(g(a)s, g(a)s) . W(g(a)s, g(a)t)`` to lie above the plain weights.
    """
    Q = h.target.quantale
    n = 0
    if kind == "lower_decomposable":
        X, T, Y = h.source.left, h.source.right, h.target
        for a, b in itertools.product(X.vertices, repeat=2):
            for s, t in itertools.product(T.vertices, repeat=2):
                n += 1
                fas, fbs, fbt, fat = h((a, s)), h((b, s)), h((b, t)), h((a, t))
                pre = Q.tensor(Y.w(fas, fbs), Y.w(fbs, fbt))
                post = Q.tensor(Y.w(fas, fat), Y.w(fat, fbt))
                if not Q.le(pre, Y.w(fas, fbt)):
                    return Verdict(False, ("pre", a, b, s, t), n)
                if not Q.le(post, Y.w(fas, fbt)):
                    return Verdict(False, ("post", a, b, s, t), n)
        return Verdict(True, None, n)
    if kind == "upper_neutral":
        X, E = h.source, h.target
        T, Y = E.exponent, E.base
        for a, b in itertools.product(X.vertices, repeat=2):
            for s in T.vertices:
                n += 1
                p, q = h(a)(s), h(b)(s)
                if not Q.le(Y.w(p, q), Q.tensor(Y.w(p, q), Y.w(q, q))):
                    return Verdict(False, ("edge", a, b, s), n)
        for a in X.vertices:
            for s, t in itertools.product(T.vertices, repeat=2):
                n += 1
                p, q = h(a)(s), h(a)(t)
                if not Q.le(Y.w(p, q), Q.tensor(Y.w(p, p), Y.w(p, q))):
                    return Verdict(False, ("vertex", a, s, t), n)
        return Verdict(True, None, n)
    raise ValueError(f"unknown condition {kind!r}")


@dataclass
class VSuiteReport:
    forms: int = 0
    eligible_forms: int = 0
    names: int = 0
    eligible_names: int = 0
    failures: list = None

    def __post_init__(self):
        if self.failures is None:
            self.failures = []

    @property
    def ok(self) -> bool:
        return not self.failures and self.forms == self.names


def v_adjunction_suite(X: WeightedGraph, T: WeightedGraph, Y: WeightedGraph,
                       budget: int = 10**6) -> VSuiteReport:
    """Unit and counit comparisons for the weighted adjunction.

    Edge data is propositional, so each comparison amounts to the round
    trip being defined (its weight inequalities hold) and returning the same
    vertex map.  The form and name counts must also agree.
    """
    P = v_biproduct(X, T)
    need = len(Y.vertices) ** len(P.vertices) + len(Y.vertices) ** len(T.vertices)
    if need > budget:
        raise BudgetExceeded(need, budget)
    E = v_exponential(T, Y)
    if len(E.vertices) ** len(X.vertices) + need > budget:
        raise BudgetExceeded(len(E.vertices) ** len(X.vertices) + need, budget)
    rep = VSuiteReport()
    for f in vtransports(P, Y):
        rep.forms += 1
        if v_condition_check(f, "lower_decomposable"):
            rep.eligible_forms += 1
            try:
                back = v_realize(v_name(f), "pre")
                if back.values != f.values or v_realize(v_name(f), "post").values != f.values:
                    rep.failures.append(("unit", f))
            except ValueError as exc:
                rep.failures.append(("unit", f, str(exc)))
    for g in vtransports(X, E):
        rep.names += 1
        if v_condition_check(g, "upper_neutral"):
            rep.eligible_names += 1
            try:
                back = v_name(v_realize(g))
                if back.values != g.values:
                    rep.failures.append(("counit", g))
            except ValueError as exc:
                rep.failures.append(("counit", g, str(exc)))
    return rep


@dataclass(frozen=True)
class VClassification:
    crude: Verdict
    continuous: Verdict
    cocontinuous: Verdict
    natural: Verdict


def v_functor_classify(f: VTransport) -> VClassification:
    """Compare the two routes from ``X(a;b) (x) X(b;c)`` into ``Y(fa;fc)``.

    Composing in the source certifies ``W_X(a,b) . W_X(b,c)``; transporting
    first certifies ``W_Y(fa,fb) . W_Y(fb,fc)``.  Continuous asks the first
    to lie below the second, cocontinuous the reverse, natural both.  Crude
    asks ``e <= W_Y(fx, fx)``.
    """
    X, Y = f.source, f.target
    Q = X.quantale
    n = 0
    crude = Verdict(True)
    for x in X.vertices:
        n += 1
        if not Q.le(Q.unit, Y.w(f(x), f(x))):
            crude = Verdict(False, x, n)
            break
    else:
        crude = Verdict(True, None, n)
    flags = {}
    for name, want in (("continuous", "le"), ("cocontinuous", "ge"), ("natural", "eq")):
        m = 0
        verdict = None
        for a, b, c in itertools.product(X.vertices, repeat=3):
            m += 1
            src = Q.tensor(X.w(a, b), X.w(b, c))
            tgt = Q.tensor(Y.w(f(a), f(b)), Y.w(f(b), f(c)))
            ok = {"le": Q.le(src, tgt), "ge": Q.le(tgt, src), "eq": src == tgt}[want]
            if not ok:
                verdict = Verdict(False, (a, b, c), m)
                break
        flags[name] = verdict if verdict is not None else Verdict(True, None, m)
    return VClassification(crude, flags["continuous"], flags["cocontinuous"], flags["natural"])


def metric_spaces(Q: Quantale, n: int, symmetric: bool = True, categories_only: bool = True) -> Iterator[WeightedGraph]:
    """Weighted graphs on ``"0", ..., str(n-1)`` with unit self-weights.

    Off-diagonal weights range over the quantale in element order; with
    ``categories_only`` only categories over the quantale are kept.
    """
    vs = [str(i) for i in range(n)]
    if symmetric:
        slots = [(x, y) for i, x in enumerate(vs) for y in vs[i + 1:]]
    else:
        slots = [(x, y) for x in vs for y in vs if x != y]
    for values in itertools.product(Q.elements, repeat=len(slots)):
        w = {(x, x): Q.unit for x in vs}
        for (x, y), v in zip(slots, values):
            w[x, y] = v
            if symmetric:
                w[y, x] = v
        G = WeightedGraph(Q, vs, w)
        if not categories_only or v_category_validate(G):
            yield G
