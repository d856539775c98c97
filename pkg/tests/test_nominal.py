import pytest

from cubsub.names import name, names, swap
from cubsub.nominal import Abstraction, Atoms, abstract, abs_act, abs_support, alpha_equal, concrete
from cubsub.subsets import Box, FreeSub, restrictions

a0, a1, a2, a3, a4 = (name(i) for i in range(5))
X = FreeSub.of(2)


def test_atoms_support():
    A = Atoms()
    assert A.support(a1) == names(1)
    assert A.is_fresh(a0, a1) and not A.is_fresh(a1, a1)
    assert A.act(swap(a1, a2), a1) == a2


def test_abstraction_canonical_form():
    x = X.element(a3, 0)
    t = abstract(X, a3, x)
    # binder renamed to the least name outside the body's other support
    assert t.binder == a0 and t.body == X.element(a0, 0)
    assert abstract(X, a2, x) == abstract(X, a4, X.element(a3, 0))  # binder not in body
    assert abs_support(X, t) == frozenset()


def test_alpha_equality_matches_structural():
    # raw (non-canonical) abstractions compared by alpha_equal, with two different fresh names
    s = Abstraction(a1, X.element(a1, a2))
    t = Abstraction(a3, X.element(a3, a2))
    u = Abstraction(a3, X.element(a2, a3))
    for fresh in (None, name(7)):
        assert alpha_equal(X, s, t, fresh)
        assert not alpha_equal(X, s, u, fresh)
    assert abstract(X, s.binder, s.body) == abstract(X, t.binder, t.body)
    with pytest.raises(ValueError):
        alpha_equal(X, s, t, fresh=a2)


def test_action_and_concretion():
    t = abstract(X, a1, X.element(a1, a2))
    p = swap(a2, a4)
    assert abs_act(X, p, t) == abstract(X, a1, X.element(a1, a4))
    assert concrete(X, t, a3) == X.element(a3, a2)
    with pytest.raises(ValueError):
        concrete(X, t, a2)


def test_endpoint_maps_well_defined():
    # two representatives of the same abstraction give the same endpoints
    Y = FreeSub.of(2)
    for x in Y.enumerate_with_support(names(0, 1)):
        r1 = Abstraction(a0, x)
        r2 = Abstraction(a3, Y.act(swap(a0, a3), x))
        assert restrictions(Y, r1) == restrictions(Y, r2)


def test_box_subst_under_binder():
    B = Box(FreeSub.of(1))
    t = B.abstract(a0, FreeSub.of(1).element(a1))
    assert B.support(t) == names(1)
    assert B.subst(t, a1, 1) == B.abstract(a0, FreeSub.of(1).element(1))
    assert B.subst(t, a0, 1) == t
