"""Acceptance criteria 1-9, each run at its stated bound and time limit.

Every test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary and printed directly when this file is run as a script.
"""

import time
from dataclasses import dataclass
from math import comb, perm

import pytest

from cubsub.cube import (alternative_completion, compose, decompose, enumerate_morphisms,
                         identity, morphism_count, parse_morphism, subsets)
from cubsub.equivalence import (IStarSet, check_epsilon, check_oracle, check_unit, epsilon,
                                i_star_morphism, transport_morphism)
from cubsub.kan import (KanStructure, box_shapes, check_fibration, check_uniform_kan, degeneracy,
                        discrete_kan, enumerate_boxes, face, search_bound, search_filling)
from cubsub.names import name, names, universe
from cubsub.presheaf import (NatTrans, Representable, TabulatedCubicalSet, check_functor_laws,
                             check_injection_pullbacks, check_naturality,
                             check_pullback_preservation, from_sub, identity_nat, nat_equal,
                             precomposition)
from cubsub.subsets import (Box, Discrete, FreeElement, FreeSub, ProductSub, check_morphism,
                            check_sub_laws, cubes, gens)

RESULTS = {}
U3, U4 = universe(3), universe(4)
D, F1, F2 = Discrete(), FreeSub.of(1), FreeSub.of(2)


def verdict(number, title, limit, body):
    start = time.perf_counter()
    failures = body()
    elapsed = time.perf_counter() - start
    if elapsed >= limit:
        failures.append(f"took {elapsed:.1f}s, limit {limit}s")
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {number}: {status} {title} ({elapsed:.2f}s, limit {limit}s)"
    RESULTS[number] = line
    print(line)
    for f in failures:
        print(f"    {f}")
    assert not failures, failures


def bad_reports(*reports):
    return [f"{r.title}: {name} {w}" for r in reports for name, w in r.failures()] + \
        [f"{r.title}: violations with no witness" for r in reports if not r.ok and not r.failures()]


# 1

def cube_laws():
    out = []
    objs = subsets(U4, 2)
    homs = {(A, B): enumerate_morphisms(A, B) for A in objs for B in objs}
    pos = {(A, B): {f: k for k, f in enumerate(fs)} for (A, B), fs in homs.items()}
    for (A, B), fs in homs.items():
        for f in fs:
            if compose(f, identity(A)) != f or compose(identity(B), f) != f:
                out.append(f"identity law fails at {f}")
    # comp[A, B, C][g][f] is the position of g.f in C(A, C); every entry comes from compose
    comp = {(A, B, C): [[pos[A, C][compose(g, f)] for f in homs[A, B]] for g in homs[B, C]]
            for A in objs for B in objs for C in objs}
    checked = 0
    for A in objs:
        for B in objs:
            for C in objs:
                abc = comp[A, B, C]
                for D_ in objs:
                    acd, bcd, abd = comp[A, C, D_], comp[B, C, D_], comp[A, B, D_]
                    for h, row in enumerate(acd):
                        hg_row = bcd[h]
                        for g, gf in enumerate(abc):
                            checked += len(gf)
                            if [row[k] for k in gf] != abd[hg_row[g]]:
                                out.append(f"associativity fails at {homs[B, C][g]}, {homs[C, D_][h]}")
    if len(enumerate_morphisms(names(0), names(1))) != 3:
        out.append("|C({a},{b})| != 3")
    for m in range(4):
        for n in range(4):
            formula = sum(comb(m, k) * perm(n, k) * 2 ** (m - k) for k in range(min(m, n) + 1))
            got = len(set(enumerate_morphisms(universe(m), universe(n))))
            if not got == formula == morphism_count(m, n):
                out.append(f"count C({m},{n}): enumerated {got}, formula {formula}")
    if checked == 0:
        out.append("no triples checked")
    return out


def test_criterion_1_cube_category():
    verdict(1, "cube category identity, associativity and counts", 10, cube_laws)


# 2

def sub_laws():
    carriers = [D, FreeSub.of(0), F1, F2, ProductSub(F1, D), ProductSub(F2, D), Box(F1)]
    functors = [Representable(frozenset()), Representable(names(0)), Representable(names(0, 1)),
                from_sub(D), from_sub(F1)]
    reps = [check_sub_laws(X, U3, 3) for X in carriers]
    reps += [check_sub_laws(IStarSet(F), U3, 3) for F in functors]
    return bad_reports(*reps)


def test_criterion_2_substitution_laws():
    verdict(2, "substitution laws for all carriers and five I*F", 30, sub_laws)


# 3

def composition_law():
    rep = check_functor_laws(from_sub(F1), U4, 2)
    out = bad_reports(rep)
    if rep["F(g.f) = F(g).F(f)"].total == 0:
        out.append("no composable pairs checked")
    return out


def test_criterion_3_composition_law():
    verdict(3, "from_sub(FreeSub) composition law, objects <= 2", 60, composition_law)


# 4

def pullbacks():
    Fs = [Representable(frozenset()), Representable(names(0)), Representable(names(0, 1))]
    Fs += [from_sub(X) for X in (D, F1, F2, ProductSub(F1, D))]
    reps = [check_pullback_preservation(F, U4, 3) for F in Fs]
    reps += [check_injection_pullbacks(F, U3, 3) for F in Fs[:2] + Fs[3:5]]
    return bad_reports(*reps)


def test_criterion_4_pullback_preservation():
    verdict(4, "intersection pullbacks preserved at size <= 3", 30, pullbacks)


# 5

def round_trips():
    reps = [check_epsilon(X, U3, 3) for X in (D, F1, ProductSub(F1, D))]
    tables = [TabulatedCubicalSet.tabulate(Representable(names(0)), 2),
              TabulatedCubicalSet.tabulate(from_sub(F1), 2),
              TabulatedCubicalSet.tabulate(from_sub(D), 2)]
    reps += [check_unit(T, 2) for T in tables]
    return bad_reports(*reps)


def test_criterion_5_round_trips():
    verdict(5, "epsilon bijections and unit isomorphism on tables", 60, round_trips)


# 6

def transport():
    out = []
    base = names(0, 1)
    R = Representable(base)
    classes = IStarSet(R).elements(U3, 2)
    for B in (names(0), base):
        for g in enumerate_morphisms(B, base):
            phi = precomposition(base, g, 2)
            back = transport_morphism(i_star_morphism(phi), phi.source, phi.target, 2)
            if not nat_equal(back, phi, 2):
                out.append(f"transport(I*(phi)) != phi for g = {g}")
            once, twice = i_star_morphism(phi), i_star_morphism(back)
            if any(once(c) != twice(c) for c in classes):
                out.append(f"I*(transport(I*(phi))) != I*(phi) for g = {g}")
    for F in (R, from_sub(F1)):
        ident = identity_nat(F, 2)
        if not nat_equal(transport_morphism(i_star_morphism(ident), F, F, 2), ident, 2):
            out.append(f"identity not recovered for {F}")
    # g not of the form I*(phi) a priori: an epsilon-conjugated endomap
    Dn = Discrete((0, 1, 2))
    eps = epsilon(Dn)
    flip = {0: 1, 1: 0, 2: 2}

    def g(c):
        return eps.inverse(flip[eps(c)])
    out += bad_reports(check_morphism(g, eps.source, eps.source, U3, 2))
    phi = transport_morphism(g, eps.functor, eps.functor, 2)
    out += bad_reports(check_naturality(phi, 2))
    if any(i_star_morphism(phi)(c) != g(c) for c in eps.source.elements(U3, 2)):
        out.append("I*(transport(g)) != g on the discrete endomap")
    return out


def test_criterion_6_transport():
    verdict(6, "transport and I* mutually inverse", 30, transport)


# 7

def oracle():
    return bad_reports(*(check_oracle(universe(k), U3, 3) for k in range(3)))


def test_criterion_7_free_oracle():
    verdict(7, "I*(C(B,-)) = FreeSub(B) for |B| <= 2", 30, oracle)


# 8

@dataclass(frozen=True)
class BrokenFree(FreeSub):
    def subst(self, x, a, i):
        return FreeElement(tuple((g, i if isinstance(v, type(a)) else v) for g, v in x.pairs))


def _prefer_missing(u):
    found = search_filling(u, search_bound(u))
    pref = F1.element(u.missing)
    return pref if pref in found else found[0]


def _corrupted_table():
    R = Representable(names(0))
    T = TabulatedCubicalSet.tabulate(R, 2)
    lab1 = dict(zip(R.on_object(universe(1)), T.levels[1]))
    lab2 = dict(zip(R.on_object(universe(2)), T.levels[2]))
    f = parse_morphism("{a0}->{a0,a1}: a0=>a1")
    return T.with_entry(f, lab1[identity(names(0))], lab2[parse_morphism("{a0}->{a0,a1}: a0=>a0")])


def _shifted_nat():
    R = Representable(names(0))
    level = R.on_object(names(0))
    shifted = dict(zip(level, level[1:] + level[:1]))
    return NatTrans(R, R, lambda n, x: shifted[x] if n == 1 else x, 2)


def kan_suite():
    out = bad_reports(check_uniform_kan(discrete_kan(D), D, U4, 3))
    U2 = universe(2)
    one_dim = [u for A, a, bit in box_shapes(U2, 1) for u in enumerate_boxes(F1, A, a, bit, U2)]
    controls = [
        ("subst moving fresh names", check_sub_laws(BrokenFree(gens(1)), U2, 2),
         "a # x => x(a:=i) = x"),
        ("non-equivariant map", check_morphism(
            lambda x: F1.element(0) if x == F1.element(name(0)) else x, F1, F1, U2), "equivariance"),
        ("corrupted table", check_functor_laws(_corrupted_table(), U3, 2), "F(g.f) = F(g).F(f)"),
        ("permuted component", check_naturality(_shifted_nat(), 2), "naturality squares commute"),
        ("non-uniform filler", check_uniform_kan(
            KanStructure(_prefer_missing, _prefer_missing, "prefer-missing"), F1, U2, 1,
            boxes=one_dim), "fill commutes with fresh substitution"),
        ("lift-less fibration", check_fibration(lambda x: 0, F1, Discrete((0,)), U2, 2),
         "filling over y exists"),
    ]
    for label, rep, check in controls:
        ws = rep.failures(check)
        if rep[check].ok or not ws:
            out.append(f"negative control not detected: {label}")
        else:
            print(f"    detected {label}: {check}; witness {ws[0]}")
    # face/degeneracy identities on sampled cubes
    for n in range(3):
        for cube in cubes(F1, n).elements(U2)[::3]:
            for m in range(n + 1):
                dg = degeneracy(F1, n, m, cube)
                if dg != degeneracy(F1, n, m, cube, fresh=name(9)):
                    out.append(f"degeneracy depends on the fresh name at {cube}")
                for i in (0, 1):
                    if face(F1, n + 1, m + 1, i, dg) != cube:
                        out.append(f"face {m + 1},{i} after degeneracy {m} is not id at {cube}")
            for m in range(1, n + 1):
                for m2 in range(m + 1, n + 1):
                    for i in (0, 1):
                        for j in (0, 1):
                            lhs = face(F1, n - 1, m, i, face(F1, n, m2, j, cube))
                            rhs = face(F1, n - 1, m2 - 1, j, face(F1, n, m, i, cube))
                            if lhs != rhs:
                                out.append(f"face identity fails at {cube}")
    return out


def test_criterion_8_kan_suite():
    verdict(8, "discrete Kan, negative controls, faces and degeneracies", 30, kan_suite)


# 9

def action_independence():
    out = []
    objs = subsets(U4, 2)
    for X in (D, F1, F2, ProductSub(F1, D), Box(F1)):
        F = from_sub(X)
        elems = {A: F.on_object(A) for A in objs}
        for A in objs:
            for B in objs:
                for f in enumerate_morphisms(A, B):
                    pi, subs = decompose(f)
                    alt = alternative_completion(f)
                    rev = tuple(reversed(subs))
                    for x in elems[A]:
                        y = F.act(f, x)
                        if F.act_with(alt, subs, x) != y or F.act_with(pi, rev, x) != y:
                            out.append(f"action formula depends on choices at {f}, {X.fmt(x)}")
    return out


def test_criterion_9_choice_independence():
    verdict(9, "action formula independent of completion and listing order", 30, action_independence)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
