"""Finite sets, mappings and posets with the curry/uncurry adjunction.

Everything here is immutable and enumerates in a fixed order: a product
lists pairs with the left factor varying slowest, and an exponential lists
mappings lexicographically by their value tuples.
"""

from __future__ import annotations

import itertools
from typing import Hashable, Iterable, Iterator, Mapping as AbcMapping

from adjunct.checks import Verdict, first_failure

Atom = Hashable


class FiniteSet:
    __slots__ = ("elements", "_index", "_hash")

    def __init__(self, elements: Iterable[Atom] = ()):
        self.elements = tuple(elements)
        index = {}
        for i, x in enumerate(self.elements):
            if x in index:
                raise ValueError(f"duplicate element {x!r}")
            index[x] = i
        self._index = index
        self._hash = None

    def _key(self):
        return ("set", self.elements)

    def index(self, x: Atom) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise KeyError(f"unknown element {x!r}") from None

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, FiniteSet) and self._key() == other._key())

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteSet({list(self.elements)!r})"


class ProductSet(FiniteSet):
    """The set of pairs, remembering its two factors."""

    __slots__ = ("left", "right")

    def __init__(self, left: FiniteSet, right: FiniteSet):
        super().__init__(itertools.product(left.elements, right.elements))
        self.left = left
        self.right = right

    def _key(self):
        return ("product", self.left._key(), self.right._key())


class ExponentialSet(FiniteSet):
    """All mappings ``exponent -> base``, remembering both sets.

    Membership, size and index are computed structurally; the element tuple
    is only built when something iterates over it.
    """

    __slots__ = ("exponent", "base", "_elements")

    def __init__(self, exponent: FiniteSet, base: FiniteSet):
        self.exponent = exponent
        self.base = base
        self._elements = None
        self._hash = None

    @property
    def elements(self) -> tuple:
        if self._elements is None:
            self._elements = tuple(
                Mapping(self.exponent, self.base, values, check=False)
                for values in itertools.product(self.base.elements, repeat=len(self.exponent))
            )
        return self._elements

    def _key(self):
        return ("exponential", self.exponent._key(), self.base._key())

    def __len__(self) -> int:
        return len(self.base) ** len(self.exponent)

    def __iter__(self) -> Iterator["Mapping"]:
        if self._elements is not None:
            return iter(self._elements)
        return (
            Mapping(self.exponent, self.base, values, check=False)
            for values in itertools.product(self.base.elements, repeat=len(self.exponent))
        )

    def __contains__(self, x) -> bool:
        return (
            isinstance(x, Mapping)
            and x.source == self.exponent
            and x.target == self.base
            and all(v in self.base for v in x.values)
        )

    def index(self, x) -> int:
        if x not in self:
            raise KeyError(f"unknown element {x!r}")
        rank, n = 0, len(self.base)
        for v in x.values:
            rank = rank * n + self.base.index(v)
        return rank


class Mapping:
    """A total function between finite sets, stored as a value tuple."""

    __slots__ = ("source", "target", "values", "_hash")

    def __init__(self, source: FiniteSet, target: FiniteSet, assignment, check: bool = True):
        if isinstance(assignment, AbcMapping):
            values = tuple(assignment[x] for x in source.elements)
        elif callable(assignment):
            values = tuple(assignment(x) for x in source.elements)
        else:
            values = tuple(assignment)
        if check:
            if len(values) != len(source):
                raise ValueError("assignment does not cover the source")
            for x, y in zip(source.elements, values):
                if y not in target:
                    raise ValueError(f"value {y!r} of {x!r} is outside the target")
        self.source = source
        self.target = target
        self.values = values
        self._hash = None

    def __call__(self, x: Atom) -> Atom:
        return self.values[self.source.index(x)]

    def items(self):
        return zip(self.source.elements, self.values)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mapping)
            and self.values == other.values
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.values)
        return self._hash

    def __repr__(self) -> str:
        return "Mapping({" + ", ".join(f"{x!r}: {y!r}" for x, y in self.items()) + "})"


def product(X: FiniteSet, T: FiniteSet) -> ProductSet:
    return ProductSet(X, T)


def projections(X: FiniteSet, T: FiniteSet) -> tuple[Mapping, Mapping]:
    P = product(X, T)
    return (
        Mapping(P, X, [p[0] for p in P], check=False),
        Mapping(P, T, [p[1] for p in P], check=False),
    )


def exponential(T: FiniteSet, Y: FiniteSet) -> ExponentialSet:
    return ExponentialSet(T, Y)


def identity(X: FiniteSet) -> Mapping:
    return Mapping(X, X, X.elements, check=False)


def compose(f: Mapping, g: Mapping) -> Mapping:
    """Apply ``f`` first, then ``g``."""
    if f.target != g.source:
        raise ValueError("mappings are not composable")
    return Mapping(f.source, g.target, [g(y) for y in f.values], check=False)


def product_map(u: Mapping, v: Mapping) -> Mapping:
    """The mapping ``<x, t> -> <u(x), v(t)>``."""
    P, Q = product(u.source, v.source), product(u.target, v.target)
    return Mapping(P, Q, [(u(x), v(t)) for x, t in P], check=False)


def exponential_map(v: Mapping, T: FiniteSet) -> Mapping:
    """Post-composition ``phi -> phi then v`` between exponentials over ``T``."""
    A, B = exponential(T, v.source), exponential(T, v.target)
    return Mapping(A, B, [compose(phi, v) for phi in A], check=False)


def name(f: Mapping) -> Mapping:
    """Curry a mapping on ``X x T`` into a mapping ``X -> Y^T``."""
    P = f.source
    if not isinstance(P, ProductSet):
        raise TypeError("name needs a mapping whose source is a product set")
    X, T, Y = P.left, P.right, f.target
    E = exponential(T, Y)
    n = len(T)
    values = [Mapping(T, Y, f.values[i * n:(i + 1) * n], check=False) for i in range(len(X))]
    return Mapping(X, E, values, check=False)


def realize(g: Mapping) -> Mapping:
    """Uncurry ``g: X -> Y^T`` into a mapping on ``X x T``."""
    E = g.target
    if not isinstance(E, ExponentialSet):
        raise TypeError("realize needs a mapping into an exponential set")
    P = product(g.source, E.exponent)
    values = [v for phi in g.values for v in phi.values]
    return Mapping(P, E.base, values, check=False)


def unit_section(X: FiniteSet, T: FiniteSet) -> Mapping:
    P = product(X, T)
    E = exponential(T, P)
    return Mapping(X, E, [Mapping(T, P, [(x, t) for t in T], check=False) for x in X], check=False)


def counit_eval(Y: FiniteSet, T: FiniteSet) -> Mapping:
    P = product(exponential(T, Y), T)
    return Mapping(P, Y, [phi(s) for phi, s in P], check=False)


def bijection_check(X: FiniteSet, T: FiniteSet, Y: FiniteSet) -> Verdict:
    """``name`` and ``realize`` are mutually inverse on every mapping.

    ``checked`` counts forms plus names, so it is ``2 * |Y|^(|X| |T|)``.
    """
    n = 0
    for f in exponential(product(X, T), Y):
        n += 1
        if realize(name(f)) != f:
            return Verdict(False, ("form", f), n)
    for g in exponential(X, exponential(T, Y)):
        n += 1
        if name(realize(g)) != g:
            return Verdict(False, ("name", g), n)
    return Verdict(True, None, n)


def triangle_check(X: FiniteSet, T: FiniteSet, Y: FiniteSet) -> Verdict:
    """Both triangle identities, pointwise.

    Pairing then evaluating returns each ``(x, t)``; pairing a map ``phi``
    and then evaluating under post-composition returns ``phi``.
    """
    n = 0
    P = product(X, T)
    eta, eps = unit_section(X, T), counit_eval(P, T)
    for x, t in P:
        n += 1
        if eps((eta(x), t)) != (x, t):
            return Verdict(False, ("left", (x, t)), n)
    E = exponential(T, Y)
    eta_E, eps_Y = unit_section(E, T), counit_eval(Y, T)
    for phi in E:
        n += 1
        # post-composition with evaluation, applied to this one map only
        if compose(eta_E(phi), eps_Y) != phi:
            return Verdict(False, ("right", phi), n)
    return Verdict(True, None, n)


def naturality_check(u: Mapping, v: Mapping, T: FiniteSet) -> Verdict:
    """``name`` commutes with precomposition by ``u x T`` and postcomposition by ``v``.

    ``u: X' -> X`` and ``v: Y -> Y'``; every form ``f`` on ``X x T`` is tried.
    """
    uT = product_map(u, identity(T))
    vT = exponential_map(v, T)
    return first_failure(
        exponential(product(u.target, T), v.source),
        lambda f: name(compose(uT, compose(f, v))) == compose(u, compose(name(f), vT)),
    )


# -- posets -----------------------------------------------------------------


class FinitePoset:
    """A finite set with a validated partial order."""

    __slots__ = ("carrier", "leq", "_hash")

    def __init__(self, carrier: FiniteSet, leq: Iterable[tuple[Atom, Atom]]):
        rel = frozenset(leq)
        for x, y in rel:
            if x not in carrier or y not in carrier:
                raise ValueError(f"order pair ({x!r}, {y!r}) leaves the carrier")
        for x in carrier:
            if (x, x) not in rel:
                raise ValueError(f"order is not reflexive at {x!r}")
        for x, y in rel:
            if x != y and (y, x) in rel:
                raise ValueError(f"order is not antisymmetric at ({x!r}, {y!r})")
        for x, y in rel:
            for z in carrier:
                if (y, z) in rel and (x, z) not in rel:
                    raise ValueError(f"order is not transitive at ({x!r}, {y!r}, {z!r})")
        self.carrier = carrier
        self.leq = rel
        self._hash = None

    @classmethod
    def generated(cls, carrier: FiniteSet, pairs: Iterable[tuple[Atom, Atom]] = ()) -> "FinitePoset":
        """Reflexive-transitive closure of ``pairs``."""
        rel = {(x, x) for x in carrier} | set(pairs)
        changed = True
        while changed:
            changed = False
            for (x, y), (y2, z) in itertools.product(list(rel), repeat=2):
                if y == y2 and (x, z) not in rel:
                    rel.add((x, z))
                    changed = True
        return cls(carrier, rel)

    def le(self, x: Atom, y: Atom) -> bool:
        return (x, y) in self.leq

    def __iter__(self):
        return iter(self.carrier)

    def __len__(self):
        return len(self.carrier)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinitePoset) and self.carrier == other.carrier and self.leq == other.leq

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.carrier, self.leq))
        return self._hash

    def __repr__(self) -> str:
        pairs = sorted((self.carrier.index(x), self.carrier.index(y)) for x, y in self.leq if x != y)
        shown = [(self.carrier.elements[i], self.carrier.elements[j]) for i, j in pairs]
        return f"FinitePoset({list(self.carrier.elements)!r}, {shown!r})"


def chain(n: int) -> FinitePoset:
    X = FiniteSet(str(i) for i in range(n))
    return FinitePoset(X, [(str(i), str(j)) for i in range(n) for j in range(i, n)])


def discrete(X: FiniteSet) -> FinitePoset:
    return FinitePoset(X, [(x, x) for x in X])


def is_monotone(f: Mapping, P: FinitePoset, Q: FinitePoset) -> bool:
    return all(Q.le(f(x), f(y)) for x, y in P.leq)


def poset_product(P: FinitePoset, Q: FinitePoset) -> FinitePoset:
    C = product(P.carrier, Q.carrier)
    return FinitePoset(C, [((x, s), (y, t)) for (x, y) in P.leq for (s, t) in Q.leq])


def pointwise_le(phi: Mapping, psi: Mapping, Y: FinitePoset) -> bool:
    return all(Y.le(a, b) for a, b in zip(phi.values, psi.values))


def poset_exponential(T: FinitePoset, Y: FinitePoset) -> FinitePoset:
    """Monotone maps ``T -> Y`` ordered pointwise, in exponential order."""
    maps = [phi for phi in exponential(T.carrier, Y.carrier) if is_monotone(phi, T, Y)]
    return FinitePoset(
        FiniteSet(maps),
        [(phi, psi) for phi in maps for psi in maps if pointwise_le(phi, psi, Y)],
    )


def poset_eval_monotone_check(T: FinitePoset, Y: FinitePoset) -> Verdict:
    """Evaluation on monotone maps times ``T`` is monotone; reports a bad pair."""
    E = poset_exponential(T, Y)
    cases = (
        ((phi, s), (psi, t))
        for phi in E.carrier for s in T.carrier
        for psi in E.carrier for t in T.carrier
        if E.le(phi, psi) and T.le(s, t)
    )
    n = 0
    for (phi, s), (psi, t) in cases:
        n += 1
        if not Y.le(phi(s), psi(t)):
            return Verdict(False, ((phi, s), (psi, t)), n)
    return Verdict(True, None, n)


def limit_set(P: FinitePoset, x: Atom) -> FiniteSet:
    if x not in P.carrier:
        raise KeyError(f"unknown element {x!r}")
    return FiniteSet(y for y in P.carrier if P.le(x, y))


def is_limit_continuous(f: Mapping, P: FinitePoset, Q: FinitePoset) -> bool:
    """``f`` sends each limit set into the limit set of the image point."""
    return all(
        all(f(y) in limit_set(Q, f(x)) for y in limit_set(P, x))
        for x in P.carrier
    )


def all_mappings(X: FiniteSet, Y: FiniteSet) -> Iterator[Mapping]:
    return iter(exponential(X, Y))

