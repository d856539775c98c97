"""From cubical sets to 01-substitution sets and back.

`IStarSet(F)` is the 01-substitution set of germs [A, x] of a cubical set F;
`epsilon` and `unit` witness the two round trips, and `transport_morphism`
turns a 01-substitution map between germ sets back into a natural
transformation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

from .cube import CubeMorphism, generator_subst, inclusion, injection_from_perm, subsets
from .names import FinPerm, Name, fresh_name, format_nameset, swap, universe
from .presheaf import CubicalSet, NatTrans, Representable, check_naturality, from_sub
from .report import Report
from .subsets import FreeElement, FreeSub, SubSet, check_morphism, gens
from .syntax import ParseError, Tokens, split_top


class TransportError(ValueError):
    pass


class EqClass:
    """The class [A, x] of an element x of F A.

    Equality is decided by looking for a common restriction to F(A n A');
    the hash goes through the least-support normal form, which agrees with it.
    """

    __slots__ = ("functor", "names", "element")

    def __init__(self, functor: CubicalSet, names: Iterable[Name], element):
        self.functor = functor
        self.names = frozenset(names)
        self.element = element

    def __eq__(self, other):
        if not isinstance(other, EqClass):
            return NotImplemented
        return class_equal(self, other)

    def __hash__(self):
        return hash(normal_form(self))

    def __str__(self):
        return f"[{format_nameset(self.names)}, {self.functor.fmt(self.element)}]"

    __repr__ = __str__


def class_equal(c1: EqClass, c2: EqClass) -> bool:
    """[A,x] = [A',x'] iff some y in F(A n A') restricts to x and to x'."""
    F = c1.functor
    if c2.functor != F:
        raise ValueError("classes of different functors")
    A, B = c1.names, c2.names
    D = A & B
    to_a, to_b = inclusion(D, A), inclusion(D, B)
    return any(F.act(to_a, y) == c1.element and F.act(to_b, y) == c2.element
               for y in F.on_object(D))


def class_equal_union(c1: EqClass, c2: EqClass) -> bool:
    """The same relation decided in F(A u A'): both elements include to the same thing."""
    F = c1.functor
    top = c1.names | c2.names
    return F.act(inclusion(c1.names, top), c1.element) == F.act(inclusion(c2.names, top), c2.element)


def i_star_act(p: FinPerm, c: EqClass) -> EqClass:
    return EqClass(c.functor, p.image(c.names), c.functor.act(injection_from_perm(p, c.names), c.element))


def i_star_subst(c: EqClass, a: Name, i: int) -> EqClass:
    f = generator_subst(c.names, a, i)
    return EqClass(c.functor, f.cod, c.functor.act(f, c.element))


def class_support(c: EqClass, fresh: Name | None = None) -> frozenset:
    """The names a of A for which swapping a with a fresh name moves the class."""
    b = fresh_name(c.names) if fresh is None else fresh
    if b in c.names:
        raise ValueError(f"{b} is not fresh for {format_nameset(c.names)}")
    return frozenset(a for a in c.names if not class_equal(i_star_act(swap(a, b), c), c))


def canonical_representative(c: EqClass, A: Iterable[Name]):
    """The unique x in F A with [A, x] = c; needs supp c <= A.

    Names of the representative outside A are substituted by 0, then the
    result is included into A.
    """
    A = frozenset(A)
    supp = class_support(c)
    if not supp <= A:
        raise ValueError(f"support {format_nameset(supp)} of {c} is not inside {format_nameset(A)}")
    F, B, y = c.functor, c.names, c.element
    for b in sorted(B - A):
        f = generator_subst(B, b, 0)
        y, B = F.act(f, y), f.cod
    return F.act(inclusion(B, A), y)


@lru_cache(maxsize=1 << 16)
def _normal_form(F, names, element):
    c = EqClass(F, names, element)
    S = class_support(c)
    return S, canonical_representative(c, S)


def normal_form(c: EqClass) -> tuple:
    """(least support S, the representative in F S)."""
    return _normal_form(c.functor, c.names, c.element)


@dataclass(frozen=True)
class IStarSet(SubSet):
    """Germs [A, x] of a cubical set, with (a:=i) acting through the generator morphisms."""

    functor: CubicalSet

    def cls(self, A, x) -> EqClass:
        return EqClass(self.functor, A, x)

    def act(self, p, c):
        return i_star_act(p, c)

    def support(self, c):
        return class_support(c)

    def subst(self, c, a, i):
        return i_star_subst(c, a, i)

    def enumerate_with_support(self, A):
        A = frozenset(A)
        return [EqClass(self.functor, A, x) for x in self.functor.on_object(A)]

    def fmt(self, c):
        return str(c)

    def parse(self, text):
        s = text.strip()
        if not (s.startswith("[") and s.endswith("]")):
            raise ParseError("expected [{names}, element]", text, 0)
        parts = split_top(s[1:-1], ",")
        if len(parts) < 2:
            raise ParseError("expected [{names}, element]", text, 1)
        t = Tokens(parts[0])
        A = t.nameset()
        t.finish()
        x = self.functor.parse(",".join(parts[1:]))
        if x not in self.functor.on_object(A):
            raise ParseError(f"element is not in F{format_nameset(A)}", text, 0)
        return EqClass(self.functor, A, x)


def i_star(F: CubicalSet) -> IStarSet:
    return IStarSet(F)


def i_star_morphism(phi: NatTrans) -> Callable[[EqClass], EqClass]:
    """[A, x] |-> [A, phi_A x]."""
    def apply(c: EqClass) -> EqClass:
        return EqClass(phi.target, c.names, phi.component(c.names, c.element))
    apply.__name__ = "i_star_morphism"
    return apply


class Epsilon:
    """The comparison I*(from_sub X) -> X, [A, x] |-> x, with its inverse."""

    def __init__(self, X: SubSet):
        self.carrier = X
        self.functor = from_sub(X)
        self.source = IStarSet(self.functor)
        self.__name__ = "epsilon"

    def __call__(self, c: EqClass):
        return c.element

    def inverse(self, x) -> EqClass:
        return EqClass(self.functor, self.carrier.support(x), x)


def epsilon(X: SubSet) -> Epsilon:
    return Epsilon(X)


def transport_morphism(g: Callable[[EqClass], EqClass], F: CubicalSet, G: CubicalSet,
                       max_size: int = 3) -> NatTrans:
    """The natural transformation phi with g[A, x] = [A, phi_A x]."""
    def component(n, x):
        A = universe(n)
        d = g(EqClass(F, A, x))
        if d.functor != G:
            raise TransportError(f"g sends {F.fmt(x)} outside I*({G})")
        if not class_support(d) <= A:
            raise TransportError(f"g enlarges the support of [{format_nameset(A)}, {F.fmt(x)}]")
        return canonical_representative(d, A)
    return NatTrans(F, G, component, max_size)


def unit(F: CubicalSet, max_size: int = 3) -> NatTrans:
    """F -> from_sub(I* F), x |-> [A, x]."""
    return NatTrans(F, from_sub(IStarSet(F)), lambda n, x: EqClass(F, universe(n), x), max_size)


def counit_inverse(F: CubicalSet, max_size: int = 3) -> NatTrans:
    """from_sub(I* F) -> F, d |-> the representative of d in F A."""
    return NatTrans(from_sub(IStarSet(F)), F,
                    lambda n, d: canonical_representative(d, universe(n)), max_size)


# -- the free 01-substitution set as I* of a representable

class FreeOracle:
    """Explicit bijection I*(C(B, -)) = FreeSub(B).

    Generator b_k corresponds to the k-th name of B in ascending order.
    """

    def __init__(self, base: Iterable[Name]):
        self.base = tuple(sorted(base))
        self.rep = Representable(frozenset(self.base))
        self.istar = IStarSet(self.rep)
        self.free = FreeSub(gens(len(self.base)))

    def to_free(self, c: EqClass) -> FreeElement:
        x = c.element
        return FreeElement(tuple((g, x(b)) for g, b in zip(self.free.gens, self.base)))

    def from_free(self, e: FreeElement) -> EqClass:
        S = self.free.support(e)
        table = {b: v for b, v in zip(self.base, e.values())}
        return EqClass(self.rep, S, CubeMorphism(self.rep.base, S, table))


def check_oracle(base: Iterable[Name], U: Iterable[Name], max_support: int | None = None,
                 seed: int = 0) -> Report:
    """The oracle bijection is a bijection commuting with action and substitution."""
    o = FreeOracle(base)
    U = frozenset(U)
    rep = Report(f"oracle I*C({format_nameset(o.base)},-) = FreeSub")
    rep.declare("bijection on each support bound")
    for A in _bounds(U, max_support):
        classes = o.istar.enumerate_with_support(A)
        frees = o.free.enumerate_with_support(A)
        images = [o.to_free(c) for c in classes]
        ok = sorted(map(str, images)) == sorted(map(str, frees)) and len(set(images)) == len(images)
        rep.record("bijection on each support bound", ok, format_nameset(A))
        ok = all(o.to_free(o.from_free(e)) == e for e in frees) and \
            all(o.from_free(o.to_free(c)) == c for c in classes)
        rep.record("bijection on each support bound", ok, ("inverse", format_nameset(A)))
    elems = o.istar.elements(U, max_support)
    rep.extend(check_morphism(o.to_free, o.istar, o.free, U, max_support, seed, elems))
    rep.extend(check_morphism(o.from_free, o.free, o.istar, U, max_support, seed,
                              o.free.elements(U, max_support)), prefix="inverse ")
    return rep


def check_epsilon(X: SubSet, U: Iterable[Name], max_support: int | None = None,
                  seed: int = 0) -> Report:
    """epsilon is well defined, bijective on each support bound, and a 01Sub morphism."""
    eps = epsilon(X)
    U = frozenset(U)
    rep = Report(f"epsilon {X}")
    rep.declare("well defined on representatives")
    rep.declare("bijection on each support bound")
    for A in _bounds(U, max_support):
        classes = eps.source.enumerate_with_support(A)
        xs = X.enumerate_with_support(A)
        images = [eps(c) for c in classes]
        ok = len(set(images)) == len(images) and set(images) == set(xs)
        rep.record("bijection on each support bound", ok, format_nameset(A))
        for c in classes:
            rep.record("bijection on each support bound", eps.inverse(eps(c)) == c, str(c))
            bigger = A | {fresh_name(U | A)}
            alt = EqClass(eps.functor, bigger, eps.functor.act(inclusion(A, bigger), c.element))
            S = X.support(c.element)
            small = EqClass(eps.functor, S, canonical_representative(c, S))
            ok = alt == c and small == c and eps(alt) == eps(c) == eps(small)
            rep.record("well defined on representatives", ok, str(c))
    rep.extend(check_morphism(eps, eps.source, X, U, max_support, seed))
    return rep


def check_unit(F: CubicalSet, bound: int) -> Report:
    """F -> from_sub(I* F) is natural and bijective at every level up to `bound`."""
    eta = unit(F, bound)
    back = counit_inverse(F, bound)
    rep = Report(f"unit {F}")
    rep.extend(check_naturality(eta, bound), prefix="unit ")
    rep.extend(check_naturality(back, bound), prefix="inverse ")
    rep.declare("bijective at each level")
    for n in range(bound + 1):
        A = universe(n)
        xs = F.on_object(A)
        ds = eta.target.on_object(A)
        images = [eta.canonical_component(n, x) for x in xs]
        ok = len(set(images)) == len(xs) and set(images) == set(ds) and \
            all(back.canonical_component(n, eta.canonical_component(n, x)) == x for x in xs)
        rep.record("bijective at each level", ok, n)
    return rep


def _bounds(U: frozenset, max_support: int | None) -> list[frozenset]:
    k = len(U) if max_support is None else min(max_support, len(U))
    return subsets(U, k)
