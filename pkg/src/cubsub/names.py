"""Names (atoms), finite name sets and finite permutations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping


@dataclass(frozen=True, order=True, slots=True)
class Name:
    """The atom with the given index in the fixed enumeration a0, a1, ..."""

    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError(f"name index must be a natural number, got {self.index!r}")

    def __str__(self):
        return f"a{self.index}"

    __repr__ = __str__


NameSet = frozenset


def name(i: int) -> Name:
    return Name(i)


def names(*indices: int) -> frozenset:
    return frozenset(Name(i) for i in indices)


def universe(n: int) -> frozenset:
    """The canonical name set {a0, ..., a(n-1)}."""
    return frozenset(Name(i) for i in range(n))


def format_nameset(A: Iterable[Name]) -> str:
    return "{" + ",".join(str(a) for a in sorted(A)) + "}"


def fresh_name(avoid: Iterable[Name]) -> Name:
    """Least-index name not in `avoid`."""
    taken = {a.index for a in avoid}
    i = 0
    while i in taken:
        i += 1
    return Name(i)


def fresh_names(avoid: Iterable[Name], k: int) -> list[Name]:
    avoid = set(avoid)
    out = []
    for _ in range(k):
        a = fresh_name(avoid)
        out.append(a)
        avoid.add(a)
    return out


class FinPerm:
    """A finitely supported permutation of names.

    Stored without fixed points, so structural equality is group equality.
    ``p(a)`` applies the permutation and ``p * q`` is the composite p after q.
    """

    __slots__ = ("_map", "_key")

    def __init__(self, mapping: Mapping[Name, Name] | Iterable[tuple[Name, Name]] = ()):
        items = dict(mapping)
        m = {a: b for a, b in items.items() if a != b}
        if set(m) != set(m.values()):
            raise ValueError(f"not a permutation: {items}")
        self._map = m
        self._key = tuple(sorted(m.items()))

    @classmethod
    def identity(cls) -> FinPerm:
        return cls()

    @classmethod
    def swap(cls, a: Name, b: Name) -> FinPerm:
        return cls({a: b, b: a})

    @classmethod
    def from_partial_bijection(cls, pairs: Mapping[Name, Name]) -> FinPerm:
        """Extend an injective finite map to a permutation.

        Range elements that are not in the domain are sent back to domain
        elements that are not in the range, pairing both in ascending order.
        The carrier stays inside domain | range.
        """
        pairs = dict(pairs)
        if len(set(pairs.values())) != len(pairs):
            raise ValueError(f"partial bijection is not injective: {pairs}")
        dom, rng = set(pairs), set(pairs.values())
        m = dict(pairs)
        m.update(zip(sorted(rng - dom), sorted(dom - rng)))
        return cls(m)

    def __call__(self, a: Name) -> Name:
        return self._map.get(a, a)

    def __mul__(self, other: FinPerm) -> FinPerm:
        carrier = set(self._map) | set(other._map)
        return FinPerm({a: self(other(a)) for a in carrier})

    def inverse(self) -> FinPerm:
        return FinPerm({b: a for a, b in self._map.items()})

    def image(self, A: Iterable[Name]) -> frozenset:
        return frozenset(self(a) for a in A)

    @property
    def carrier(self) -> frozenset:
        return frozenset(self._map)

    def items(self):
        return self._key

    def is_identity(self) -> bool:
        return not self._map

    def fixes(self, A: Iterable[Name]) -> bool:
        return all(self(a) == a for a in A)

    def __eq__(self, other):
        return isinstance(other, FinPerm) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def cycles(self) -> list[tuple[Name, ...]]:
        seen, out = set(), []
        for a in sorted(self._map):
            if a in seen:
                continue
            cyc = [a]
            seen.add(a)
            b = self(a)
            while b != a:
                cyc.append(b)
                seen.add(b)
                b = self(b)
            out.append(tuple(cyc))
        return out

    def __str__(self):
        if not self._map:
            return "()"
        return "".join("(" + " ".join(str(a) for a in c) + ")" for c in self.cycles())

    def __repr__(self):
        return f"FinPerm{self}"


def swap(a: Name, b: Name) -> FinPerm:
    return FinPerm.swap(a, b)


def perm_compose(p: FinPerm, q: FinPerm) -> FinPerm:
    """p after q."""
    return p * q


def perm_inverse(p: FinPerm) -> FinPerm:
    return p.inverse()


def perm_apply(p: FinPerm, a: Name) -> Name:
    return p(a)


def perm_from_partial_bijection(pairs: Mapping[Name, Name]) -> FinPerm:
    return FinPerm.from_partial_bijection(pairs)


def perm_from_cycles(cycles: Iterable[Iterable[Name]]) -> FinPerm:
    """The product of the cycles as written; the rightmost cycle acts first."""
    p = FinPerm()
    for cyc in cycles:
        cyc = list(cyc)
        if len(set(cyc)) != len(cyc):
            raise ValueError(f"repeated name in cycle {cyc}")
        m = {cyc[k]: cyc[(k + 1) % len(cyc)] for k in range(len(cyc))}
        p = p * FinPerm(m)
    return p
