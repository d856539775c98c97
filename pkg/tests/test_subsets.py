from dataclasses import dataclass
from math import comb, perm

import pytest

from cubsub.cube import enumerate_morphisms
from cubsub.names import name, names, swap, universe
from cubsub.subsets import (Box, Discrete, FreeElement, FreeSub, ProductSub, check_morphism,
                            check_sub_laws, cubes, gens)
from cubsub.syntax import ParseError

a0, a1, a2 = name(0), name(1), name(2)
F1, F2 = FreeSub.of(1), FreeSub.of(2)


def test_freesub_subst_examples():
    assert F1.subst(F1.element(a0), a0, 0) == F1.element(0)
    assert F1.subst(F1.element(a2), a0, 1) == F1.element(a2)
    assert Discrete().subst(1, a0, 0) == 1


def test_freesub_format():
    x = F2.element(a1, 0)
    assert str(x) == "[b0=>a1, b1=>0]"
    assert F2.parse("[b0=>a1, b1=>0]") == x
    assert F2.parse(" [ b1 => 0 , b0 => a1 ] ") == x
    for bad in ["[b0=>a1]", "[b0=>a1, b1=>a1]", "[b0=>a1, b0=>0]", "[b2=>0, b0=>0, b1=>0]", "b0=>a1"]:
        with pytest.raises(ParseError):
            F2.parse(bad)


@pytest.mark.parametrize("k", range(3))
@pytest.mark.parametrize("n", range(4))
def test_freesub_count_matches_cube(k, n):
    # |FreeSub(B) supported in A| = |C(B, A)|, cross-checked against the cube enumeration
    got = F_k = FreeSub.of(k).enumerate_with_support(universe(n))
    assert len(got) == len(set(F_k))
    expect = sum(comb(k, j) * perm(n, j) * 2 ** (k - j) for j in range(min(k, n) + 1))
    assert len(got) == expect == len(enumerate_morphisms(universe(k), universe(n)))


@pytest.mark.parametrize("X", [Discrete(), F1, F2, ProductSub(F1, Discrete()), Box(F1)],
                         ids=str)
def test_laws_hold(X):
    rep = check_sub_laws(X, universe(3), 3)
    assert rep.ok, rep
    assert rep["a # x(a:=i)"].total > 0


def test_box_elements_dedup():
    B = Box(F1)
    xs = B.enumerate_with_support(names(0))
    assert len(xs) == len(set(xs))
    # <c>[b0=>c], <c>[b0=>a0], <c>[b0=>0], <c>[b0=>1]
    assert len(xs) == 4


def test_cubes_iterates_box():
    assert cubes(F1, 2) == Box(Box(F1))


@dataclass(frozen=True)
class BrokenFree(FreeSub):
    """Substitution that also kills names other than a, breaking a # x => x(a:=i) = x."""

    def subst(self, x, a, i):
        return FreeElement(tuple((g, i if isinstance(v, type(a)) else v) for g, v in x.pairs))


def test_negative_control_eq2():
    X = BrokenFree(gens(1))
    rep = check_sub_laws(X, universe(2), 2)
    assert not rep.ok
    assert not rep["a # x => x(a:=i) = x"].ok
    w = rep.failures("a # x => x(a:=i) = x")
    assert w and "[b0=>a" in w[0][0]


def test_check_morphism_examples():
    assert check_morphism(lambda x: x, F1, F1, universe(3)).ok
    assert check_morphism(lambda x: 0, F1, Discrete(), universe(3)).ok


def test_negative_control_non_equivariant():
    def bad(x):
        return F1.element(0) if x == F1.element(a0) else x
    rep = check_morphism(bad, F1, F1, universe(2))
    assert not rep["equivariance"].ok
    assert rep.failures("equivariance")


def test_product_and_box_parse_round_trip():
    P = ProductSub(F2, Discrete((0, 1, 2)))
    B = Box(F2)
    for X in (P, B, Box(B)):
        for x in X.elements(universe(2), 2):
            assert X.parse(X.fmt(x)) == x


def test_act_swaps_names():
    x = F2.element(a0, a1)
    assert F2.act(swap(a0, a2), x) == F2.element(a2, a1)
