"""Open boxes, fillings and uniform-Kan structures on 01-substitution sets.

An open (A, a)-box assigns an element to every face (b, i) of the cube on A
except one face at the distinguished name a: a 1-open box misses (a, 1), a
0-open box misses (a, 0).  Boxes are validated when built.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable

from .cube import BITS, subsets
from .names import FinPerm, Name, format_nameset, fresh_name
from .report import Report
from .subsets import Box, Discrete, SubSet, cubes, test_names, test_perms
from .syntax import ParseError, Tokens, split_top


class BoxError(ValueError):
    pass


def box_faces(A: Iterable[Name], a: Name, open_bit: int) -> list[tuple[Name, int]]:
    """The faces (b, i) of the cube on A, minus the open one."""
    return [(b, i) for b in sorted(A) for i in BITS if (b, i) != (a, open_bit)]


def _compatible(X, f1, v1, f2, v2) -> bool:
    (b, i), (b2, i2) = f1, f2
    return b == b2 or X.subst(v1, b2, i2) == X.subst(v2, b, i)


@dataclass(frozen=True)
class OpenBox:
    carrier: SubSet
    open_bit: int
    names: frozenset
    missing: Name
    entries: tuple

    def __post_init__(self):
        X = self.carrier
        if self.open_bit not in BITS:
            raise BoxError(f"open bit must be 0 or 1, got {self.open_bit!r}")
        if not self.names:
            raise BoxError("a box needs a non-empty name set")
        if self.missing not in self.names:
            raise BoxError(f"{self.missing} is not in {format_nameset(self.names)}")
        faces = [f for f, _ in self.entries]
        if faces != box_faces(self.names, self.missing, self.open_bit):
            raise BoxError(f"entries {faces} do not cover the box faces exactly")
        for (b, i), v in self.entries:
            if not X.is_fresh(b, v):
                raise BoxError(f"face ({b},{i}) = {X.fmt(v)} mentions {b}")
        for k, (f1, v1) in enumerate(self.entries):
            for f2, v2 in self.entries[k + 1:]:
                if not _compatible(X, f1, v1, f2, v2):
                    raise BoxError(f"faces {f1} and {f2} disagree on their common edge")

    def __getitem__(self, face):
        for f, v in self.entries:
            if f == face:
                return v
        raise KeyError(face)

    def items(self):
        return self.entries

    @property
    def faces(self):
        return [f for f, _ in self.entries]

    def support(self) -> frozenset:
        out = frozenset()
        for _, v in self.entries:
            out |= self.carrier.support(v)
        return out

    def __str__(self):
        return format_box(self)


def make_box(X: SubSet, open_bit: int, A: Iterable[Name], a: Name, table) -> OpenBox:
    """Build a box from a dict {(b, i): element}; raises BoxError if invalid."""
    return OpenBox(X, open_bit, frozenset(A), a, tuple(sorted(dict(table).items())))


def box_of_element(X: SubSet, x, A: Iterable[Name], a: Name, open_bit: int = 1) -> OpenBox:
    """The box u_x with u_x(b, i) = x(b:=i)."""
    A = frozenset(A)
    if a not in A:
        raise BoxError(f"{a} is not in {format_nameset(A)}")
    return OpenBox(X, open_bit, A, a, tuple((f, X.subst(x, *f)) for f in box_faces(A, a, open_bit)))


def is_filling(x, u: OpenBox) -> bool:
    X = u.carrier
    return all(X.subst(x, b, i) == v for (b, i), v in u.entries)


def box_subst(u: OpenBox, c: Name, j: int) -> OpenBox:
    """Entrywise substitution at a name outside the box's names."""
    if c in u.names:
        raise BoxError(f"{c} is one of the box names {format_nameset(u.names)}")
    X = u.carrier
    return OpenBox(X, u.open_bit, u.names, u.missing,
                   tuple((f, X.subst(v, c, j)) for f, v in u.entries))


def box_act(p: FinPerm, u: OpenBox) -> OpenBox:
    X = u.carrier
    moved = sorted(((p(b), i), X.act(p, v)) for (b, i), v in u.entries)
    return OpenBox(X, u.open_bit, p.image(u.names), p(u.missing), tuple(moved))


def search_bound(u: OpenBox) -> frozenset:
    return u.names | u.support()


def search_filling(u: OpenBox, bound: Iterable[Name] | None = None) -> list:
    """All fillings of u with support inside `bound` (default: names of u and its entries)."""
    bound = search_bound(u) if bound is None else frozenset(bound)
    return [x for x in u.carrier.enumerate_with_support(bound) if is_filling(x, u)]


def enumerate_boxes(X: SubSet, A: Iterable[Name], a: Name, open_bit: int,
                    U: Iterable[Name]) -> list[OpenBox]:
    """Every valid box of the given shape whose entries are supported in U."""
    A, U = frozenset(A), frozenset(U)
    faces = box_faces(A, a, open_bit)
    options = [X.enumerate_with_support(U - {b}) for b, _ in faces]
    out = []

    def extend(k, chosen):
        if k == len(faces):
            out.append(OpenBox(X, open_bit, A, a, tuple(zip(faces, chosen))))
            return
        for v in options[k]:
            if all(_compatible(X, faces[k], v, faces[m], w) for m, w in enumerate(chosen)):
                extend(k + 1, chosen + [v])

    extend(0, [])
    return out


def box_shapes(U: Iterable[Name], max_dim: int):
    """(A, a, open_bit) for non-empty A inside U with |A| <= max_dim."""
    for A in subsets(U, max_dim):
        if A:
            for a in sorted(A):
                for bit in BITS:
                    yield A, a, bit


# -- Kan structures

class KanStructure:
    """Filling operations for 1-open boxes (`fill_up`) and 0-open boxes (`fill_down`)."""

    def __init__(self, fill_up: Callable, fill_down: Callable, name: str = "kan"):
        self.fill_up = fill_up
        self.fill_down = fill_down
        self.name = name

    def fill(self, u: OpenBox):
        return self.fill_up(u) if u.open_bit == 1 else self.fill_down(u)

    def __repr__(self):
        return f"KanStructure({self.name})"


def discrete_kan(D: Discrete) -> KanStructure:
    """In a discrete set compatible faces are all equal; fill with that value."""
    def fill(u):
        values = {v for _, v in u.entries}
        if len(values) != 1:
            raise BoxError(f"faces of a discrete box differ: {values}")
        return values.pop()
    return KanStructure(fill, fill, "discrete")


def least_filling_kan(X: SubSet) -> KanStructure:
    """Brute-force candidate: the first filling in enumeration order."""
    def fill(u):
        found = search_filling(u)
        if not found:
            raise BoxError(f"no filling for {u}")
        return found[0]
    return KanStructure(fill, fill, "least filling")


def open_face(K: KanStructure, u: OpenBox):
    """The face of the filling at the open position: (fill u)(a:=open_bit)."""
    return u.carrier.subst(K.fill(u), u.missing, u.open_bit)


def plus_face(K: KanStructure, u: OpenBox):
    if u.open_bit != 1:
        raise BoxError("plus_face needs a 1-open box")
    return open_face(K, u)


def minus_face(K: KanStructure, u: OpenBox):
    if u.open_bit != 0:
        raise BoxError("minus_face needs a 0-open box")
    return open_face(K, u)


def check_uniform_kan(K: KanStructure, X: SubSet, U: Iterable[Name], max_dim: int,
                      seed: int = 0, boxes: list | None = None) -> Report:
    """Fillings, equivariance and substitution-uniformity of K on all boxes in U."""
    U = frozenset(U)
    N = test_names(U)
    perms = test_perms(N, seed)
    rep = Report(f"uniform-Kan {K.name} on {X}")
    for name in ("fill is a filling", "fill is equivariant", "fill commutes with fresh substitution",
                 "open face is fresh for the open name"):
        rep.declare(name)
    if boxes is None:
        boxes = [u for A, a, bit in box_shapes(U, max_dim) for u in enumerate_boxes(X, A, a, bit, U)]
    for u in boxes:
        try:
            x = K.fill(u)
        except BoxError as e:
            rep.record("fill is a filling", False, (str(u), str(e)))
            continue
        if not rep.record("fill is a filling", is_filling(x, u), (str(u), X.fmt(x))):
            continue
        rep.record("open face is fresh for the open name",
                   X.is_fresh(u.missing, open_face(K, u)), str(u))
        for p in perms:
            lhs, rhs = X.act(p, x), K.fill(box_act(p, u))
            rep.record("fill is equivariant", lhs == rhs, (str(p), str(u), X.fmt(lhs), X.fmt(rhs)))
        for c in N:
            if c in u.names:
                continue
            for j in BITS:
                lhs, rhs = X.subst(x, c, j), K.fill(box_subst(u, c, j))
                rep.record("fill commutes with fresh substitution", lhs == rhs,
                           (str(u), f"{c}:={j}", X.fmt(lhs), X.fmt(rhs)))
    return rep


def kan_obstruction(X: SubSet, U: Iterable[Name], max_dim: int):
    """The first box (in enumeration order) with no filling at all, or None."""
    for A, a, bit in box_shapes(U, max_dim):
        for u in enumerate_boxes(X, A, a, bit, U):
            if not search_filling(u):
                return u
    return None


# -- cubes: iterated abstractions, faces and degeneracies

def face(X: SubSet, n: int, m: int, i: int, cube):
    """Face m (1-based) at bit i of an n-cube: drop binder m and substitute i for it."""
    if not 1 <= m <= n:
        raise IndexError(f"face index {m} out of range 1..{n}")
    body_carrier = cubes(X, n - 1)
    if m == 1:
        return body_carrier.subst(cube.body, cube.binder, i)
    return body_carrier.abstract(cube.binder, face(X, n - 1, m - 1, i, cube.body))


def degeneracy(X: SubSet, n: int, m: int, cube, fresh: Name | None = None, _avoid=frozenset()):
    """Insert a fresh binder after position m (0 <= m <= n) of an n-cube."""
    if not 0 <= m <= n:
        raise IndexError(f"degeneracy index {m} out of range 0..{n}")
    here = cubes(X, n)
    if m == 0:
        avoid = here.support(cube) | _avoid
        a = fresh_name(avoid) if fresh is None else fresh
        if a in avoid:
            raise ValueError(f"{a} is not fresh")
        return Box(here).abstract(a, cube)
    inner = degeneracy(X, n - 1, m - 1, cube.body, fresh, _avoid | {cube.binder})
    return Box(here).abstract(cube.binder, inner)


@dataclass(frozen=True)
class AbstractedBox:
    """<a1 ... a(n+1)> u for an open ({a1..a(n+1)}, a1)-box u."""

    binders: tuple
    box: OpenBox

    def __str__(self):
        return "<" + " ".join(map(str, self.binders)) + ">" + str(self.box)


def unpack_cube(X: SubSet, n: int, cube) -> tuple[tuple, object]:
    """Concrete binders (least fresh names, outermost first) and body of an n-cube."""
    avoid = set(cubes(X, n).support(cube))
    binders = []
    for k in range(n, 0, -1):
        c = fresh_name(avoid)
        avoid.add(c)
        binders.append(c)
        cube = cubes(X, k).concrete(cube, c)
    return tuple(binders), cube


def pack_cube(X: SubSet, binders: tuple, x):
    for k, b in enumerate(reversed(binders)):
        x = cubes(X, k + 1).abstract(b, x)
    return x


def open_box_of_cube(X: SubSet, n: int, cube, open_bit: int = 1) -> AbstractedBox:
    """The boundary box of an (n+1)-cube, open at its first dimension."""
    binders, x = unpack_cube(X, n + 1, cube)
    return AbstractedBox(binders, box_of_element(X, x, binders, binders[0], open_bit))


def abstracted_box_equal(s: AbstractedBox, t: AbstractedBox) -> bool:
    """Equality up to renaming the binders to common fresh names."""
    if len(s.binders) != len(t.binders) or s.box.open_bit != t.box.open_bit:
        return False
    avoid = set(s.binders) | set(t.binders) | s.box.support() | t.box.support()
    fresh = []
    for _ in s.binders:
        c = fresh_name(avoid)
        avoid.add(c)
        fresh.append(c)
    ps = FinPerm.from_partial_bijection(dict(zip(s.binders, fresh)))
    pt = FinPerm.from_partial_bijection(dict(zip(t.binders, fresh)))
    return box_act(ps, s.box) == box_act(pt, t.box)


def abstracted_box_act(p: FinPerm, t: AbstractedBox) -> AbstractedBox:
    return AbstractedBox(tuple(p(b) for b in t.binders), box_act(p, t.box))


def check_split(K: KanStructure, X: SubSet, n: int, U: Iterable[Name], open_bit: int = 1,
                seed: int = 0) -> Report:
    """On (n+1)-cubes supported in U: filling the boundary box gives back that box,
    and taking boundaries commutes with permutations."""
    U = frozenset(U)
    C = cubes(X, n + 1)
    perms = test_perms(test_names(U), seed)
    rep = Report(f"split {K.name} n={n}")
    rep.declare("boundary of the filled box is the box")
    rep.declare("boundary map is equivariant")
    for cube in C.elements(U):
        ab = open_box_of_cube(X, n, cube, open_bit)
        filled = pack_cube(X, ab.binders, K.fill(ab.box))
        again = open_box_of_cube(X, n, filled, open_bit)
        rep.record("boundary of the filled box is the box", abstracted_box_equal(again, ab), str(ab))
        for p in perms:
            ok = abstracted_box_equal(open_box_of_cube(X, n, C.act(p, cube), open_bit),
                                      abstracted_box_act(p, ab))
            rep.record("boundary map is equivariant", ok, (str(p), C.fmt(cube)))
    return rep


# -- fibrations

def lies_over(u: OpenBox, p: Callable, Y: SubSet, y) -> bool:
    return all(p(v) == Y.subst(y, b, i) for (b, i), v in u.entries)


def fillings_over(u: OpenBox, p: Callable, y, bound: Iterable[Name] | None = None) -> list:
    return [x for x in search_filling(u, bound) if p(x) == y]


def check_fibration(p: Callable, X: SubSet, Y: SubSet, U: Iterable[Name], max_dim: int,
                    seed: int = 0, perm_samples: int = 6) -> Report:
    """Every open box over y has a filling over y, and the least such filling
    is equivariant and commutes with substitution at names fresh for (A, y)."""
    U = frozenset(U)
    N = test_names(U)
    perms = test_perms(N, seed)[:perm_samples]
    rep = Report(f"fibration {getattr(p, '__name__', p)}")
    for name in ("filling over y exists", "fill over y is equivariant", "fill over y commutes with fresh substitution"):
        rep.declare(name)

    def choose(u, y):
        found = fillings_over(u, p, y, search_bound(u) | Y.support(y))
        return found[0] if found else None

    boxes = {(A, a, bit): enumerate_boxes(X, A, a, bit, U) for A, a, bit in box_shapes(U, max_dim)}
    for y in Y.elements(U):
        for shape, candidates in boxes.items():
            for u in candidates:
                if not lies_over(u, p, Y, y):
                    continue
                x = choose(u, y)
                if not rep.record("filling over y exists", x is not None, (Y.fmt(y), str(u))):
                    continue
                for pi in perms:
                    rhs = choose(box_act(pi, u), Y.act(pi, y))
                    lhs = X.act(pi, x)
                    rep.record("fill over y is equivariant", lhs == rhs,
                               (str(pi), Y.fmt(y), str(u)))
                ysupp = Y.support(y)
                for c in N:
                    if c in u.names or c in ysupp:
                        continue
                    for j in BITS:
                        lhs, rhs = X.subst(x, c, j), choose(box_subst(u, c, j), y)
                        rep.record("fill over y commutes with fresh substitution", lhs == rhs,
                                   (Y.fmt(y), str(u), f"{c}:={j}"))
    return rep


# -- text format: 1-open ({a0,a1}, a0) { (a0,0)=>elem; (a1,0)=>elem; (a1,1)=>elem }

def format_box(u: OpenBox) -> str:
    X = u.carrier
    body = "; ".join(f"({b},{i})=>{X.fmt(v)}" for (b, i), v in u.entries)
    return f"{u.open_bit}-open ({format_nameset(u.names)}, {u.missing}) {{ {body} }}"


_HEAD = re.compile(r"\s*([01])-open\s*\(")
_ENTRY = re.compile(r"\s*\(\s*(a\d+)\s*,\s*([01])\s*\)\s*=>")


def parse_box(X: SubSet, text: str) -> OpenBox:
    m = _HEAD.match(text)
    if m is None:
        raise ParseError("expected '0-open (' or '1-open ('", text, 0)
    open_bit = int(m.group(1))
    close = text.find(")", m.end())
    if close < 0:
        raise ParseError("unterminated box shape", text, m.end())
    t = Tokens(text[m.end():close])
    A = t.nameset()
    t.expect(",")
    a = t.name()
    t.finish()
    rest = text[close + 1:].strip()
    if not (rest.startswith("{") and rest.endswith("}")):
        raise ParseError("expected '{ entries }' after the shape", text, close + 1)
    table = {}
    for chunk in split_top(rest[1:-1], ";"):
        if not chunk.strip():
            continue
        em = _ENTRY.match(chunk)
        if em is None:
            raise ParseError(f"bad box entry {chunk.strip()!r}", text, text.find(chunk))
        face = (Tokens(em.group(1)).name(), int(em.group(2)))
        if face in table:
            raise ParseError(f"face {face} given twice", text, text.find(chunk))
        table[face] = X.parse(chunk[em.end():])
    faces = box_faces(A, a, open_bit)
    if set(table) != set(faces):
        raise ParseError(f"box faces must be exactly {faces}", text, 0)
    try:
        return OpenBox(X, open_bit, A, a, tuple((f, table[f]) for f in faces))
    except BoxError as e:
        raise ParseError(str(e), text, 0) from None
