"""Nominal sets: permutation action, support, freshness and name abstraction.

A nominal set is represented by a *carrier* object that knows how to act on,
take the support of, print and parse its elements.  Elements themselves are
plain hashable values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .names import FinPerm, Name, fresh_name, swap


class NominalSet:
    """Carrier contract.  Subclasses implement `act` and `support`."""

    def act(self, p: FinPerm, x):
        raise NotImplementedError

    def support(self, x) -> frozenset:
        raise NotImplementedError

    def is_fresh(self, a: Name, x) -> bool:
        return a not in self.support(x)

    def fmt(self, x) -> str:
        return str(x)

    def parse(self, text: str):
        raise NotImplementedError(f"{type(self).__name__} has no text format")


@dataclass(frozen=True)
class Atoms(NominalSet):
    """The nominal set of names itself."""

    def act(self, p, a):
        return p(a)

    def support(self, a):
        return frozenset([a])


@dataclass(frozen=True)
class Bits(NominalSet):
    """The two-element set {0, 1} with the trivial action."""

    def act(self, p, i):
        return i

    def support(self, i):
        return frozenset()


def support(X: NominalSet, x) -> frozenset:
    return X.support(x)


def is_fresh(X: NominalSet, a: Name, x) -> bool:
    return X.is_fresh(a, x)


@dataclass(frozen=True)
class Abstraction:
    """A name abstraction <binder>body.

    Values built through `abstract` are in canonical form (see there), which
    makes structural equality coincide with alpha-equivalence.
    """

    binder: Name
    body: object


def abstract(X: NominalSet, a: Name, x) -> Abstraction:
    """<a>x, with the binder renamed to the least name fresh for the result."""
    c = fresh_name(X.support(x) - {a})
    if c == a:
        return Abstraction(a, x)
    return Abstraction(c, X.act(swap(a, c), x))


def abs_support(X: NominalSet, t: Abstraction) -> frozenset:
    return X.support(t.body) - {t.binder}


def abs_act(X: NominalSet, p: FinPerm, t: Abstraction) -> Abstraction:
    return abstract(X, p(t.binder), X.act(p, t.body))


def alpha_equal(X: NominalSet, s: Abstraction, t: Abstraction, fresh: Name | None = None) -> bool:
    """<a>x = <b>y iff (a c).x = (b c).y for c fresh for a, b, x, y.

    `fresh` overrides the choice of c; it must be fresh in that sense.
    """
    avoid = X.support(s.body) | X.support(t.body) | {s.binder, t.binder}
    c = fresh_name(avoid) if fresh is None else fresh
    if c in avoid:
        raise ValueError(f"{c} is not fresh")
    return X.act(swap(s.binder, c), s.body) == X.act(swap(t.binder, c), t.body)


def concrete(X: NominalSet, t: Abstraction, c: Name):
    """The body of t with its binder renamed to c; c must be fresh for t."""
    if c in abs_support(X, t):
        raise ValueError(f"{c} is not fresh for the abstraction")
    return X.act(swap(t.binder, c), t.body)


def abs_subst(X, t: Abstraction, a: Name, i: int) -> Abstraction:
    """Substitution pushed under the binder: (<b>x)(a:=i) = <b>(x(a:=i)) for b != a.

    X must provide `subst`.  When a is the binder it is fresh for t, so t is
    returned unchanged.
    """
    if a == t.binder:
        return t
    return abstract(X, t.binder, X.subst(t.body, a, i))
