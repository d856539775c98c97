"""The cube category: finite name sets, and maps A -> B + {0,1} that are
injective on the names they hit.

Bits are the plain ints 0 and 1; anything else in a table is a `Name`.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb, perm
from typing import Iterable, Mapping

from .names import FinPerm, Name, fresh_names, format_nameset
from .syntax import ParseError, Tokens

BITS = (0, 1)


class MorphismError(ValueError):
    pass


def is_bit(v) -> bool:
    return type(v) is int and v in BITS


class CubeMorphism:
    """A morphism dom -> cod of the cube category.

    Construction does not check the injectivity condition; use `validate` or
    `check` (the parser always checks).
    """

    __slots__ = ("dom", "cod", "_table", "_key", "_hash")

    def __init__(self, dom: Iterable[Name], cod: Iterable[Name], table: Mapping[Name, object]):
        self.dom = frozenset(dom)
        self.cod = frozenset(cod)
        self._table = dict(table)
        self._key = (self.dom, self.cod, tuple(sorted(self._table.items(), key=lambda kv: kv[0])))
        self._hash = hash(self._key)

    def __call__(self, a: Name):
        return self._table[a]

    def items(self):
        return self._key[2]

    @property
    def table(self) -> dict:
        return dict(self._table)

    def name_part(self) -> frozenset:
        """The subset of the domain sent to names (f^-1 B)."""
        return frozenset(a for a, v in self._table.items() if isinstance(v, Name))

    def bit_part(self) -> frozenset:
        return frozenset(a for a, v in self._table.items() if not isinstance(v, Name))

    def image(self) -> frozenset:
        return frozenset(v for v in self._table.values() if isinstance(v, Name))

    def __eq__(self, other):
        return isinstance(other, CubeMorphism) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __str__(self):
        return format_morphism(self)

    def __repr__(self):
        return f"CubeMorphism({self})"

    def check(self) -> None:
        """Raise MorphismError unless the morphism is valid."""
        if set(self._table) != set(self.dom):
            missing = sorted(set(self.dom) - set(self._table))
            extra = sorted(set(self._table) - set(self.dom))
            raise MorphismError(f"table is not total on the domain (missing {missing}, extra {extra})")
        seen = {}
        for a, v in sorted(self._table.items()):
            if isinstance(v, Name):
                if v not in self.cod:
                    raise MorphismError(f"{a}=>{v} leaves the codomain {format_nameset(self.cod)}")
                if v in seen:
                    raise MorphismError(f"{seen[v]} and {a} both map to {v}")
                seen[v] = a
            elif not is_bit(v):
                raise MorphismError(f"{a}=>{v!r} is neither a name nor a bit")


def validate(f: CubeMorphism) -> bool:
    try:
        f.check()
    except MorphismError:
        return False
    return True


def identity(A: Iterable[Name]) -> CubeMorphism:
    A = frozenset(A)
    return CubeMorphism(A, A, {a: a for a in A})


def compose(g: CubeMorphism, f: CubeMorphism) -> CubeMorphism:
    """g after f: names go through g, bits stay put."""
    if f.cod != g.dom:
        raise MorphismError(
            f"cannot compose: codomain {format_nameset(f.cod)} != domain {format_nameset(g.dom)}")
    return _compose(g, f)


@lru_cache(maxsize=1 << 16)
def _compose(g, f):
    gt = g._table
    return CubeMorphism(f.dom, g.cod, {a: gt[v] if isinstance(v, Name) else v
                                       for a, v in f._table.items()})


def is_injection(f: CubeMorphism) -> bool:
    return all(isinstance(v, Name) for v in f._table.values())


def left_inverse(f: CubeMorphism) -> CubeMorphism:
    """The retraction of an injection: undo f on its image, send the rest to 0."""
    if not is_injection(f):
        raise MorphismError(f"left_inverse needs an injection, got {f}")
    back = {v: a for a, v in f._table.items()}
    return CubeMorphism(f.cod, f.dom, {c: back.get(c, 0) for c in f.cod})


def generator_subst(A: Iterable[Name], a: Name, i: int) -> CubeMorphism:
    """The morphism A -> A - {a} sending a to i and fixing the rest."""
    A = frozenset(A)
    if a not in A:
        return identity(A)
    return CubeMorphism(A, A - {a}, {b: (i if b == a else b) for b in A})


def injection_from_perm(p: FinPerm, A: Iterable[Name]) -> CubeMorphism:
    """The restriction of p to A, as an injection A -> pA."""
    A = frozenset(A)
    return CubeMorphism(A, p.image(A), {a: p(a) for a in A})


def inclusion(A: Iterable[Name], B: Iterable[Name]) -> CubeMorphism:
    A, B = frozenset(A), frozenset(B)
    if not A <= B:
        raise MorphismError(f"{format_nameset(A)} is not a subset of {format_nameset(B)}")
    return CubeMorphism(A, B, {a: a for a in A})


def renaming(A: Iterable[Name], B: Iterable[Name]) -> CubeMorphism:
    """The order-preserving bijection between equinumerous name sets."""
    A, B = sorted(A), sorted(B)
    if len(A) != len(B):
        raise MorphismError("renaming needs name sets of equal size")
    return CubeMorphism(A, B, dict(zip(A, B)))


@lru_cache(maxsize=1 << 14)
def decompose(f: CubeMorphism) -> tuple[FinPerm, tuple]:
    """Split f into a renaming permutation and a list of bit assignments.

    Returns ``(pi, ((a1, i1), ..., (an, in)))`` where pi agrees with f on the
    name part and the a_k list the bit part in ascending order.
    """
    f.check()
    pi = FinPerm.from_partial_bijection({a: v for a, v in f._table.items() if isinstance(v, Name)})
    subs = tuple(sorted((a, v) for a, v in f._table.items() if not isinstance(v, Name)))
    return pi, subs


def alternative_completion(f: CubeMorphism) -> FinPerm:
    """Another permutation agreeing with f on its name part.

    Differs from the one `decompose` picks: the unmatched names are paired in
    descending order and then shuffled by a cycle through names fixed by
    neither, plus two fresh names.  Used to test choice-independence.
    """
    pairs = {a: v for a, v in f._table.items() if isinstance(v, Name)}
    dom, rng = set(pairs), set(pairs.values())
    m = dict(pairs)
    m.update(zip(sorted(rng - dom), sorted(dom - rng, reverse=True)))
    pi = FinPerm(m)
    free = sorted((f.dom | f.cod) - rng) + fresh_names(f.dom | f.cod, 2)
    rotate = FinPerm({free[k]: free[(k + 1) % len(free)] for k in range(len(free))})
    alt = rotate * pi
    assert all(alt(a) == v for a, v in pairs.items())
    return alt


def morphism_count(m: int, n: int) -> int:
    """|C(A, B)| for |A| = m, |B| = n."""
    return sum(comb(m, k) * perm(n, k) * 2 ** (m - k) for k in range(min(m, n) + 1))


def enumerate_morphisms(A: Iterable[Name], B: Iterable[Name]) -> list[CubeMorphism]:
    return list(_enumerate(frozenset(A), frozenset(B)))


@lru_cache(maxsize=None)
def _enumerate(A, B):
    A_sorted, B_sorted = sorted(A), sorted(B)
    out = []
    for k in range(min(len(A), len(B)) + 1):
        for named in combinations(A_sorted, k):
            rest = [a for a in A_sorted if a not in named]
            for targets in permutations(B_sorted, k):
                for bits in product(BITS, repeat=len(rest)):
                    table = dict(zip(named, targets))
                    table.update(zip(rest, bits))
                    out.append(CubeMorphism(A, B, table))
    return tuple(out)


def subsets(U: Iterable[Name], max_size: int | None = None) -> list[frozenset]:
    """All subsets of U of size <= max_size, smallest first."""
    U = sorted(U)
    top = len(U) if max_size is None else min(max_size, len(U))
    return [frozenset(c) for k in range(top + 1) for c in combinations(U, k)]


def pullback_squares(U: Iterable[Name], max_size: int):
    """Pullback squares of injections D -> A -> C, D -> B -> C with objects in U.

    Yields ``(p, q, f, g)`` with f.p = g.q; D is the set-level pullback
    realised as the subset of A that f sends into the image of g.
    """
    objs = subsets(U, max_size)
    for C in objs:
        injections = {}
        for X in objs:
            if len(X) <= len(C):
                injections[X] = [h for h in enumerate_morphisms(X, C) if is_injection(h)]
        for A, fs in injections.items():
            for f in fs:
                for B, gs in injections.items():
                    for g in gs:
                        g_back = {v: b for b, v in g.items()}
                        D = frozenset(a for a in A if f(a) in g_back)
                        p = inclusion(D, A)
                        q = CubeMorphism(D, B, {d: g_back[f(d)] for d in D})
                        yield p, q, f, g


def injection_square_commutes(p, q, f, g) -> bool:
    """Whether the square of left inverses q.p' = g'.f commutes."""
    return compose(q, left_inverse(p)) == compose(left_inverse(g), f)


# -- text format: {a0,a1} -> {a2} : a0=>a2, a1=>0

def format_morphism(f: CubeMorphism) -> str:
    body = ", ".join(f"{a}=>{v}" for a, v in f.items())
    head = f"{format_nameset(f.dom)} -> {format_nameset(f.cod)} :"
    return f"{head} {body}" if body else head


def read_morphism(t: Tokens) -> CubeMorphism:
    start = t.pos
    dom = t.nameset()
    t.expect("->")
    cod = t.nameset()
    t.expect(":")
    table = {}
    positions = {}
    while t.peek() is not None and t.peek(1) == "=>":
        pos = t.pos
        a = t.name()
        if a in table:
            raise ParseError(f"{a} assigned twice", t.text, pos)
        if a not in dom:
            raise ParseError(f"{a} is not in the domain {format_nameset(dom)}", t.text, pos)
        t.expect("=>")
        vpos = t.pos
        v = t.name_or_bit()
        if isinstance(v, Name):
            if v not in cod:
                raise ParseError(f"{v} is not in the codomain {format_nameset(cod)}", t.text, vpos)
            if v in positions:
                raise ParseError(
                    f"injectivity violated: {positions[v]} and {a} both map to {v}", t.text, vpos)
            positions[v] = a
        table[a] = v
        if not t.accept(","):
            break
    missing = sorted(dom - set(table))
    if missing:
        raise ParseError(f"no value given for {', '.join(map(str, missing))}", t.text, start)
    return CubeMorphism(dom, cod, table)


def parse_morphism(text: str) -> CubeMorphism:
    t = Tokens(text)
    f = read_morphism(t)
    t.finish()
    return f
