"""01-substitution sets: carriers, shipped instances and law checkers."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations, product
from typing import Callable, Iterable

from . import nominal
from .cube import BITS, subsets
from .names import FinPerm, Name, fresh_name
from .nominal import Abstraction, NominalSet
from .report import Report
from .syntax import ParseError, Tokens, matching_close, split_top


class SubSet(NominalSet):
    """A nominal set with a 01-substitution x(a:=i).

    Carriers also enumerate their elements by support, which every checker
    relies on.
    """

    def subst(self, x, a: Name, i: int):
        raise NotImplementedError

    def enumerate_with_support(self, A: Iterable[Name]) -> list:
        """All elements whose support is contained in A, without repeats."""
        raise NotImplementedError

    def elements(self, U: Iterable[Name], max_support: int | None = None) -> list:
        """Elements supported in U with support of size <= max_support."""
        seen, out = set(), []
        U = frozenset(U)
        k = len(U) if max_support is None else min(max_support, len(U))
        for S in subsets(U, k):
            if len(S) != k:
                continue
            for x in self.enumerate_with_support(S):
                if x not in seen:
                    seen.add(x)
                    out.append(x)
        return out


# -- discrete sets

@dataclass(frozen=True)
class Discrete(SubSet):
    """A finite set with trivial action and substitution."""

    values: tuple = (0, 1)

    def act(self, p, x):
        return x

    def support(self, x):
        return frozenset()

    def subst(self, x, a, i):
        return x

    def enumerate_with_support(self, A):
        return list(self.values)

    def parse(self, text):
        text = text.strip()
        for v in self.values:
            if str(v) == text:
                return v
        raise ParseError(f"{text!r} is not one of {[str(v) for v in self.values]}", text, 0)


# -- free 01-substitution sets on a finite set of generators

@dataclass(frozen=True, order=True)
class Gen:
    """A generator label b0, b1, ... (a separate sort from names)."""

    index: int

    def __str__(self):
        return f"b{self.index}"

    __repr__ = __str__


def gens(k: int) -> tuple:
    return tuple(Gen(i) for i in range(k))


@dataclass(frozen=True)
class FreeElement:
    """An assignment of a name or a bit to each generator, injective on names."""

    pairs: tuple

    def __getitem__(self, g):
        for h, v in self.pairs:
            if h == g:
                return v
        raise KeyError(g)

    def values(self):
        return tuple(v for _, v in self.pairs)

    def __str__(self):
        return "[" + ", ".join(f"{g}=>{v}" for g, v in self.pairs) + "]"

    __repr__ = __str__


@dataclass(frozen=True)
class FreeSub(SubSet):
    """The free 01-substitution set on the given generators.

    Substitution replaces occurrences of the name by the bit directly.
    """

    gens: tuple

    @classmethod
    def of(cls, k: int) -> FreeSub:
        return cls(gens(k))

    def element(self, *values) -> FreeElement:
        if len(values) != len(self.gens):
            raise ValueError(f"expected {len(self.gens)} values")
        names = [v for v in values if isinstance(v, Name)]
        if len(set(names)) != len(names):
            raise ValueError(f"assignment {values} is not injective on names")
        return FreeElement(tuple(zip(self.gens, values)))

    def act(self, p, x):
        return FreeElement(tuple((g, p(v) if isinstance(v, Name) else v) for g, v in x.pairs))

    def support(self, x):
        return frozenset(v for _, v in x.pairs if isinstance(v, Name))

    def subst(self, x, a, i):
        return FreeElement(tuple((g, i if v == a and isinstance(v, Name) else v) for g, v in x.pairs))

    def enumerate_with_support(self, A):
        choices = list(BITS) + sorted(A)
        out = []
        for values in product(choices, repeat=len(self.gens)):
            names = [v for v in values if isinstance(v, Name)]
            if len(set(names)) == len(names):
                out.append(FreeElement(tuple(zip(self.gens, values))))
        return out

    def parse(self, text):
        t = Tokens(text)
        t.expect("[")
        vals = {}
        if not t.accept("]"):
            while True:
                pos = t.pos
                tok = t.next()
                g = next((h for h in self.gens if str(h) == tok), None)
                if g is None:
                    raise ParseError(f"unknown generator {tok!r}", text, pos)
                if g in vals:
                    raise ParseError(f"generator {g} assigned twice", text, pos)
                t.expect("=>")
                vals[g] = t.name_or_bit()
                if t.accept("]"):
                    break
                t.expect(",")
        t.finish()
        missing = [str(g) for g in self.gens if g not in vals]
        if missing:
            raise ParseError(f"no value for {', '.join(missing)}", text, 0)
        try:
            return self.element(*(vals[g] for g in self.gens))
        except ValueError as e:
            raise ParseError(str(e), text, 0) from None


# -- products

@dataclass(frozen=True)
class ProductSub(SubSet):
    left: SubSet
    right: SubSet

    def act(self, p, x):
        return (self.left.act(p, x[0]), self.right.act(p, x[1]))

    def support(self, x):
        return self.left.support(x[0]) | self.right.support(x[1])

    def subst(self, x, a, i):
        return (self.left.subst(x[0], a, i), self.right.subst(x[1], a, i))

    def enumerate_with_support(self, A):
        return [(x, y) for x in self.left.enumerate_with_support(A)
                for y in self.right.enumerate_with_support(A)]

    def fmt(self, x):
        return f"({self.left.fmt(x[0])}, {self.right.fmt(x[1])})"

    def parse(self, text):
        s = text.strip()
        if not s.startswith("(") or matching_close(s, 0) != len(s) - 1:
            raise ParseError("expected a parenthesised pair", text, 0)
        parts = split_top(s[1:-1], ",")
        if len(parts) != 2:
            raise ParseError(f"expected 2 components, found {len(parts)}", text, 1)
        return (self.left.parse(parts[0]), self.right.parse(parts[1]))


# -- name abstractions

@dataclass(frozen=True)
class Box(SubSet):
    """Name abstractions over a 01-substitution set, substituting under the binder."""

    inner: SubSet

    def abstract(self, a: Name, x) -> Abstraction:
        return nominal.abstract(self.inner, a, x)

    def act(self, p, t):
        return nominal.abs_act(self.inner, p, t)

    def support(self, t):
        return nominal.abs_support(self.inner, t)

    def subst(self, t, a, i):
        return nominal.abs_subst(self.inner, t, a, i)

    def concrete(self, t, c):
        return nominal.concrete(self.inner, t, c)

    def enumerate_with_support(self, A):
        A = frozenset(A)
        c = fresh_name(A)
        seen, out = set(), []
        for x in self.inner.enumerate_with_support(A | {c}):
            t = self.abstract(c, x)
            if t not in seen:
                seen.add(t)
                out.append(t)
        return out

    def fmt(self, t):
        return f"<{t.binder}>{self.inner.fmt(t.body)}"

    def parse(self, text):
        t = Tokens(text)
        t.expect("<")
        a = t.name()
        t.expect(">")
        if t.at_end():
            raise t.error("expected an abstraction body")
        return self.abstract(a, self.inner.parse(t.rest()))


def cubes(X: SubSet, n: int) -> SubSet:
    """n-fold iterated abstraction over X."""
    for _ in range(n):
        X = Box(X)
    return X


# -- law checkers

def test_names(U: Iterable[Name]) -> list[Name]:
    """The names of U plus one name outside it."""
    U = frozenset(U)
    return sorted(U) + [fresh_name(U)]


def test_perms(N: list[Name], seed: int = 0, limit: int = 120) -> list[FinPerm]:
    """All permutations of N, or a seeded sample of `limit` of them."""
    if len(N) <= 5:
        return [FinPerm(dict(zip(N, img))) for img in permutations(N)]
    rng = random.Random(seed)
    out = [FinPerm()]
    while len(out) < limit:
        img = N[:]
        rng.shuffle(img)
        out.append(FinPerm(dict(zip(N, img))))
    return out


def check_sub_laws(X: SubSet, U: Iterable[Name], max_support: int | None = None,
                   seed: int = 0, elements: list | None = None) -> Report:
    """Check the four substitution laws and the nominal-set axioms on every element supported in U."""
    U = frozenset(U)
    xs = X.elements(U, max_support) if elements is None else elements
    N = test_names(U)
    perms = test_perms(N, seed)
    fmt = X.fmt
    rep = Report(f"laws {X}")
    for name, note in [("a # x(a:=i)", ""), ("a # x => x(a:=i) = x", ""),
                       ("substitutions at distinct names commute", ""),
                       ("substitution is equivariant", ""),
                       ("action is a group action", ""), ("support is equivariant", "")]:
        rep.declare(name, note)
    for x in xs:
        supp = X.support(x)
        for a in N:
            for i in BITS:
                y = X.subst(x, a, i)
                rep.record("a # x(a:=i)", X.is_fresh(a, y), (fmt(x), f"{a}:={i}", fmt(y)))
                if a not in supp:
                    rep.record("a # x => x(a:=i) = x", y == x, (fmt(x), f"{a}:={i}", fmt(y)))
        for a in N:
            for b in N:
                if a == b:
                    continue
                for i in BITS:
                    for j in BITS:
                        lhs = X.subst(X.subst(x, a, i), b, j)
                        rhs = X.subst(X.subst(x, b, j), a, i)
                        rep.record("substitutions at distinct names commute", lhs == rhs,
                                   (fmt(x), f"{a}:={i}", f"{b}:={j}", fmt(lhs), fmt(rhs)))
        for p in perms:
            px = X.act(p, x)
            rep.record("support is equivariant", X.support(px) == p.image(supp), (str(p), fmt(x)))
            for a in N:
                for i in BITS:
                    lhs = X.act(p, X.subst(x, a, i))
                    rhs = X.subst(px, p(a), i)
                    rep.record("substitution is equivariant", lhs == rhs,
                               (str(p), fmt(x), f"{a}:={i}", fmt(lhs), fmt(rhs)))
        rep.record("action is a group action", X.act(FinPerm(), x) == x, ("identity", fmt(x)))
        for p, q in zip(perms, reversed(perms)):
            ok = X.act(p, X.act(q, x)) == X.act(p * q, x)
            rep.record("action is a group action", ok, (str(p), str(q), fmt(x)))
    return rep


def check_morphism(f: Callable, X: SubSet, Y: SubSet, U: Iterable[Name],
                   max_support: int | None = None, seed: int = 0,
                   elements: list | None = None) -> Report:
    """Check that f: X -> Y is equivariant and commutes with substitution."""
    U = frozenset(U)
    xs = X.elements(U, max_support) if elements is None else elements
    N = test_names(U)
    perms = test_perms(N, seed)
    rep = Report(f"morphism {getattr(f, '__name__', f)}")
    rep.declare("equivariance")
    rep.declare("f(x(a:=i)) = (f x)(a:=i)")
    for x in xs:
        fx = f(x)
        for p in perms:
            lhs, rhs = f(X.act(p, x)), Y.act(p, fx)
            rep.record("equivariance", lhs == rhs, (str(p), X.fmt(x), Y.fmt(lhs), Y.fmt(rhs)))
        for a in N:
            for i in BITS:
                lhs, rhs = f(X.subst(x, a, i)), Y.subst(fx, a, i)
                rep.record("f(x(a:=i)) = (f x)(a:=i)", lhs == rhs,
                           (X.fmt(x), f"{a}:={i}", Y.fmt(lhs), Y.fmt(rhs)))
    return rep


def restrictions(X: SubSet, t: Abstraction) -> tuple:
    """The two endpoint maps <a>x -> x(a:=0), x(a:=1) on an abstraction."""
    return tuple(X.subst(t.body, t.binder, i) for i in BITS)
