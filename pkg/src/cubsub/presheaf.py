"""Computable cubical sets (functors from the cube category to finite sets)."""

from __future__ import annotations

import re

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable

from .cube import (CubeMorphism, MorphismError, compose, decompose, enumerate_morphisms,
                   identity, inclusion, left_inverse, pullback_squares,
                   read_morphism, renaming, subsets)
from .names import FinPerm, Name, universe
from .report import Report
from .subsets import SubSet
from .syntax import ParseError, Tokens


class CubicalSet:
    """Contract: `on_object(A)` lists F A without repeats, `act(f, x)` is F f applied to x."""

    def on_object(self, A: frozenset) -> list:
        raise NotImplementedError

    def act(self, f: CubeMorphism, x):
        raise NotImplementedError

    def on_morphism(self, f: CubeMorphism) -> Callable:
        return lambda x: self.act(f, x)

    def fmt(self, x) -> str:
        return str(x)

    def parse(self, text: str):
        raise NotImplementedError(f"{type(self).__name__} has no element syntax")


@dataclass(frozen=True)
class Representable(CubicalSet):
    """A |-> C(B, A), acting by post-composition."""

    base: frozenset

    def on_object(self, A):
        return enumerate_morphisms(self.base, A)

    def act(self, f, x):
        return compose(f, x)

    def parse(self, text):
        t = Tokens(text)
        x = read_morphism(t)
        t.finish()
        if x.dom != self.base:
            raise ParseError(f"element must have domain {sorted(self.base)}", text, 0)
        x.check()
        return x


@dataclass(frozen=True)
class SubCubicalSet(CubicalSet):
    """The cubical set of a 01-substitution set: A |-> {x | supp x <= A}.

    A morphism f acts by x |-> pi.(x(a1:=f a1)...(an:=f an)) where pi agrees
    with f on the names f keeps and a1..an are the names f sends to bits.
    """

    carrier: SubSet

    def on_object(self, A):
        return self.carrier.enumerate_with_support(A)

    def act(self, f, x):
        pi, subs = decompose(f)
        return self.act_with(pi, subs, x)

    def act_with(self, pi: FinPerm, subs: Iterable[tuple[Name, int]], x):
        """The action formula for an explicitly chosen permutation and listing."""
        X = self.carrier
        for a, i in subs:
            x = X.subst(x, a, i)
        return X.act(pi, x)

    def fmt(self, x):
        return self.carrier.fmt(x)

    def parse(self, text):
        return self.carrier.parse(text)


def from_sub(X: SubSet) -> SubCubicalSet:
    return SubCubicalSet(X)


_LABEL = re.compile(r"[A-Za-z0-9_.]+")


@dataclass(frozen=True, eq=False)
class TabulatedCubicalSet(CubicalSet):
    """A functor given by finite tables on the canonical objects [0], ..., [N].

    `levels[n]` lists the element labels of F[n]; `table` maps (f, label) to a
    label for every morphism f between canonical objects.  Other objects are
    reached through the order-preserving renaming A = [|A|].
    """

    levels: tuple
    table: dict = field(repr=False)

    @property
    def max_size(self) -> int:
        return len(self.levels) - 1

    def on_object(self, A):
        n = len(A)
        if n > self.max_size:
            raise ValueError(f"tabulated only up to size {self.max_size}")
        return list(self.levels[n])

    def canonical(self, f: CubeMorphism) -> CubeMorphism:
        to_dom = renaming(universe(len(f.dom)), f.dom)
        from_cod = renaming(f.cod, universe(len(f.cod)))
        return compose(from_cod, compose(f, to_dom))

    def act(self, f, x):
        if len(f.dom) > self.max_size or len(f.cod) > self.max_size:
            raise ValueError(f"tabulated only up to size {self.max_size}")
        return self.table[(self.canonical(f), x)]

    def parse(self, text):
        return text.strip()

    @classmethod
    def tabulate(cls, F: CubicalSet, N: int) -> TabulatedCubicalSet:
        """Tabulate F on [0..N].

        Elements are labelled by their printed form when that is a single
        token, otherwise by position (x0, x1, ...) within their level.
        """
        levels, label = [], []
        for n in range(N + 1):
            elems = F.on_object(universe(n))
            shown = [F.fmt(x) for x in elems]
            if not all(_LABEL.fullmatch(s) for s in shown):
                shown = [f"x{k}" for k in range(len(elems))]
            levels.append(tuple(shown))
            label.append(dict(zip(elems, shown)))
        table = {}
        for m, n in product(range(N + 1), repeat=2):
            for f in enumerate_morphisms(universe(m), universe(n)):
                for x in F.on_object(universe(m)):
                    table[(f, label[m][x])] = label[n][F.act(f, x)]
        return cls(tuple(levels), table)

    def with_entry(self, f: CubeMorphism, x, y) -> TabulatedCubicalSet:
        """A copy with one action entry overwritten."""
        table = dict(self.table)
        table[(self.canonical(f), x)] = y
        return TabulatedCubicalSet(self.levels, table)

    def to_text(self) -> str:
        lines = [f"[{n}] " + " ".join(level) for n, level in enumerate(self.levels)]
        for (f, x), y in sorted(self.table.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
            lines.append(f"{f} : {x} -> {y}")
        return "\n".join(lines) + "\n"


def load_tabulated(text: str) -> TabulatedCubicalSet:
    """Read the plain-text table format (see FORMATS.md)."""
    levels: dict[int, tuple] = {}
    table = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            t = Tokens(line)
            if t.peek() == "[":
                t.expect("[")
                pos = t.pos
                tok = t.next()
                if not tok.isdigit():
                    raise ParseError(f"expected an object size, found {tok!r}", line, pos)
                t.expect("]")
                labels = []
                while not t.at_end():
                    labels.append(t.next())
                if len(set(labels)) != len(labels):
                    raise ParseError("repeated element label", line, 0)
                levels[int(tok)] = tuple(labels)
            else:
                f = read_morphism(t)
                t.expect(":")
                x = t.next()
                t.expect("->")
                y = t.next()
                t.finish()
                key = (f, x)
                if key in table:
                    raise ParseError(f"action of {f} on {x} given twice", line, 0)
                table[key] = y
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e}") from None
    if sorted(levels) != list(range(len(levels))):
        raise ParseError(f"object sizes must be 0..N, got {sorted(levels)}")
    F = TabulatedCubicalSet(tuple(levels[n] for n in range(len(levels))), table)
    for (f, x), y in table.items():
        for A in (f.dom, f.cod):
            if A != universe(len(A)) or len(A) > F.max_size:
                raise ParseError(f"{f}: only canonical objects [0..{F.max_size}] may appear")
        if x not in levels[len(f.dom)] or y not in levels[len(f.cod)]:
            raise ParseError(f"{f} : {x} -> {y} mentions an unknown element")
    for m, n in product(range(len(levels)), repeat=2):
        for f in enumerate_morphisms(universe(m), universe(n)):
            for x in levels[m]:
                if (f, x) not in table:
                    raise ParseError(f"missing action line for {f} : {x}")
    return F


# -- natural transformations

@dataclass(frozen=True, eq=False)
class NatTrans:
    """Components on canonical objects, extended to all objects by renaming.

    `components` is either a dict ``{n: {x: y}}`` or a function ``(n, x) -> y``.
    """

    source: CubicalSet
    target: CubicalSet
    components: object
    max_size: int = 3

    def canonical_component(self, n: int, x):
        if callable(self.components):
            return self.components(n, x)
        return self.components[n][x]

    def component(self, A: frozenset, x):
        n = len(A)
        c = universe(n)
        if A == c:
            return self.canonical_component(n, x)
        y = self.canonical_component(n, self.source.act(renaming(A, c), x))
        return self.target.act(renaming(c, A), y)

    def __call__(self, A, x):
        return self.component(A, x)


def identity_nat(F: CubicalSet, max_size: int = 3) -> NatTrans:
    return NatTrans(F, F, lambda n, x: x, max_size)


def compose_nat(psi: NatTrans, phi: NatTrans) -> NatTrans:
    return NatTrans(phi.source, psi.target,
                    lambda n, x: psi.canonical_component(n, phi.canonical_component(n, x)),
                    min(phi.max_size, psi.max_size))


def nat_equal(phi: NatTrans, psi: NatTrans, bound: int | None = None) -> bool:
    bound = phi.max_size if bound is None else bound
    return all(phi.canonical_component(n, x) == psi.canonical_component(n, x)
               for n in range(bound + 1) for x in phi.source.on_object(universe(n)))


def precomposition(base: frozenset, g: CubeMorphism, max_size: int = 3) -> NatTrans:
    """The transformation C(B, -) -> C(B', -), x |-> x . g, for g in C(B', B)."""
    if g.cod != base:
        raise MorphismError("precomposition needs g to land in the base")
    return NatTrans(Representable(base), Representable(g.dom),
                    lambda n, x: compose(x, g), max_size)


# -- checkers

def check_functor_laws(F: CubicalSet, U: Iterable[Name], bound: int) -> Report:
    """F(id) = id and F(g.f) = F(g).F(f) over all objects of U of size <= bound."""
    objs = subsets(U, bound)
    rep = Report(f"functor laws {F}")
    rep.declare("F maps into F B")
    rep.declare("F(id) = id")
    rep.declare("F(g.f) = F(g).F(f)")
    elems = {A: F.on_object(A) for A in objs}
    homs = {(A, B): enumerate_morphisms(A, B) for A in objs for B in objs}
    acts = {}
    for (A, B), fs in homs.items():
        members = set(elems[B])
        for f in fs:
            for x in elems[A]:
                y = F.act(f, x)
                acts[f, x] = y
                rep.record("F maps into F B", y in members, (str(f), F.fmt(x), F.fmt(y)))
    for A in objs:
        idA = identity(A)
        for x in elems[A]:
            rep.record("F(id) = id", acts[idA, x] == x, (str(idA), F.fmt(x)))
    for A in objs:
        for B in objs:
            for f in homs[A, B]:
                for C in objs:
                    for g in homs[B, C]:
                        gf = compose(g, f)
                        for x in elems[A]:
                            lhs, rhs = acts[gf, x], acts[g, acts[f, x]]
                            rep.record("F(g.f) = F(g).F(f)", lhs == rhs,
                                       (str(f), str(g), F.fmt(x), F.fmt(lhs), F.fmt(rhs)))
    return rep


def pullback_witness(FD, FA, FB, FC, p, q, f, g):
    """Return None if the square of finite sets (f.p = g.q) is a pullback.

    Otherwise return a witness: a non-commuting element, a pair (a, b) with
    f a = g b that has no or several mediating elements.
    """
    for d in FD:
        if f(p(d)) != g(q(d)):
            return ("square does not commute at", d)
    mediators = {}
    for d in FD:
        mediators.setdefault((p(d), q(d)), []).append(d)
    for a in FA:
        fa = f(a)
        for b in FB:
            if fa == g(b):
                ds = mediators.get((a, b), [])
                if len(ds) != 1:
                    return ("pair with %d mediators" % len(ds), a, b, tuple(ds))
    return None


def check_pullback_preservation(F: CubicalSet, U: Iterable[Name], bound: int) -> Report:
    """F sends every intersection square of inclusions (|A u A'| <= bound) to a pullback."""
    objs = subsets(U, bound)
    rep = Report(f"pullback preservation {F}")
    rep.declare("intersection squares are pullbacks")
    for A in objs:
        for A2 in objs:
            top = A | A2
            if len(top) > bound:
                continue
            D = A & A2
            p, q = inclusion(D, A), inclusion(D, A2)
            f, g = inclusion(A, top), inclusion(A2, top)
            w = pullback_witness(F.on_object(D), F.on_object(A), F.on_object(A2), F.on_object(top),
                                 F.on_morphism(p), F.on_morphism(q),
                                 F.on_morphism(f), F.on_morphism(g))
            rep.record("intersection squares are pullbacks", w is None,
                       (sorted(A), sorted(A2), _show(F, w)))
    return rep


def check_injection_pullbacks(F: CubicalSet, U: Iterable[Name], bound: int) -> Report:
    """Replay the left-inverse argument for pullbacks on every square of injections.

    For each square: the left-inverse square commutes in the cube category,
    F preserves the retractions, the image square of left inverses commutes,
    and the image of the original square is a pullback of sets.
    """
    rep = Report(f"injection pullbacks {F}")
    for name in ("left-inverse square commutes", "F preserves retractions",
                 "F-image of left-inverse square commutes", "F-image is a pullback"):
        rep.declare(name)
    for p, q, f, g in pullback_squares(U, bound):
        pl, gl = left_inverse(p), left_inverse(g)
        wit = tuple(str(h) for h in (p, q, f, g))
        rep.record("left-inverse square commutes", compose(q, pl) == compose(gl, f), wit)
        FD, FA, FB = F.on_object(p.dom), F.on_object(p.cod), F.on_object(q.cod)
        ok = all(F.act(pl, F.act(p, d)) == d for d in FD) and \
            all(F.act(gl, F.act(g, b)) == b for b in FB)
        rep.record("F preserves retractions", ok, wit)
        ok = all(F.act(q, F.act(pl, a)) == F.act(gl, F.act(f, a)) for a in FA)
        rep.record("F-image of left-inverse square commutes", ok, wit)
        w = pullback_witness(FD, FA, FB, F.on_object(f.cod), F.on_morphism(p),
                             F.on_morphism(q), F.on_morphism(f), F.on_morphism(g))
        rep.record("F-image is a pullback", w is None, wit + (_show(F, w),))
    return rep


def check_naturality(phi: NatTrans, bound: int | None = None) -> Report:
    """All naturality squares between canonical objects [0..bound] commute."""
    bound = phi.max_size if bound is None else bound
    F, G = phi.source, phi.target
    rep = Report("naturality")
    rep.declare("naturality squares commute")
    rep.declare("components land in the target")
    for m in range(bound + 1):
        A = universe(m)
        targets = set(G.on_object(A))
        for x in F.on_object(A):
            y = phi.canonical_component(m, x)
            rep.record("components land in the target", y in targets, (m, F.fmt(x)))
        for n in range(bound + 1):
            for f in enumerate_morphisms(A, universe(n)):
                for x in F.on_object(A):
                    lhs = phi.canonical_component(n, F.act(f, x))
                    rhs = G.act(f, phi.canonical_component(m, x))
                    rep.record("naturality squares commute", lhs == rhs,
                               (str(f), F.fmt(x), G.fmt(lhs), G.fmt(rhs)))
    return rep


def _show(F, w):
    if w is None:
        return None
    return tuple(F.fmt(v) if not isinstance(v, (str, tuple)) else v for v in w)

