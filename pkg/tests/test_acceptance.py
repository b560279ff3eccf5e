"""Acceptance checks, one test per criterion.

Each test records a PASS/FAIL line through the ``criterion`` fixture; the
lines are repeated in the terminal summary.
"""
import time
from fractions import Fraction

import numpy as np

from lierecog import linalg as la
from lierecog.chevalley import random_conjugate, random_invertible, standard_copy
from lierecog.oracles import elementary, recognize_sl2, recognize_sl3
from lierecog.presentations import evaluate_relations, relation_set
from lierecog.probe import ENUMERATION_LIMIT, _enumerate, estimate_probability, fixpoint_table, generation_bound
from lierecog.randgrp import (GroupHandle, bray_generators, centralizer_of_involution, derived_group,
                              evaluate_slp, find_involution, formula_complement, pseudo_order)
from lierecog.recog import compute_high_weight, highest_root_weight, labelled_from_copy, recognize

from helpers import natural


def test_criterion_01_relations(criterion):
    suites = [("G2", q) for q in (3, 4, 5, 8, 9)] + [("F4", 3), ("E6", 3), ("E7", 3),
                                                     ("3D4", 2), ("3D4", 3), ("2E6", 2)]
    bad = []
    t0 = time.time()
    for typ, q in suites:
        rep = evaluate_relations(relation_set(typ, q), standard_copy(typ, q).generators())
        if not rep.passed or rep.total == 0:
            bad.append(f"{typ}({q})")
    clean = time.time() - t0

    # single-slot corruptions must each break at least one relation
    missed = []
    for typ, q in [("G2", 3), ("F4", 3), ("E6", 3), ("E7", 3), ("3D4", 2), ("2E6", 2)]:
        G = standard_copy(typ, q)
        F, rs = G.F, relation_set(typ, q)
        A = G.generators()
        keys = sorted(A)
        rng = np.random.default_rng(7)
        for k in range(50):
            s = keys[rng.integers(len(keys))]
            B = dict(A)
            kind = k % 3
            if kind == 0:
                B[s] = la.matmul(F, A[s], G.random_element(rng, length=6))
            elif kind == 1:
                other = keys[(keys.index(s) + 1 + rng.integers(len(keys) - 1)) % len(keys)]
                B[s] = A[other]
            else:
                B[s] = la.matmul(F, A[s], A[s])
            if np.array_equal(B[s], A[s]):
                B[s] = la.matmul(F, A[s], G.n(G.rootsys.simple(1)))
            if evaluate_relations(rs, B, stop_on_failure=True).passed:
                missed.append(f"{typ}({q}) slot {s} kind {kind}")
    ok = not bad and not missed
    criterion(1, ok, f"{len(suites)} suites in {clean:.1f}s, 300 corruptions, "
                     f"failing suites {bad}, undetected {len(missed)}")
    assert ok, (bad, missed[:5])


def test_criterion_02_recognize(criterion):
    cases = [("G2", 3), ("G2", 5), ("G2", 8), ("3D4", 3), ("E6", 3)]
    notes = []
    ok = True
    for typ, q in cases:
        G = standard_copy(typ, q)
        C = random_conjugate(G, 11)
        h = GroupHandle(G.F, C.gens, seed=11)
        res = recognize(h, typ, q, seed=11)
        gens = res.generators
        good = res.report.passed and res.attempts <= 10
        good &= evaluate_relations(relation_set(typ, q), gens.matrices()).passed
        for s, x in gens.slots.items():
            good &= gens.handle.check_slp(x)
            good &= np.array_equal(evaluate_slp(G.F, gens.handle.slp(x), C.gens), x.mat)
        ok &= bool(good)
        notes.append(f"{typ}({q}):{res.attempts}")
    criterion(2, ok, "attempts " + " ".join(notes))
    assert ok


def test_criterion_03_high_weight(criterion):
    notes = []
    ok = True
    for typ in ("G2", "F4", "E6"):
        for q in (3, 4):
            G = standard_copy(typ, q)
            T = random_invertible(G.F, G.d, np.random.default_rng(q))
            w = compute_high_weight(G.F, labelled_from_copy(G, T), np.random.default_rng(1))
            good = tuple(w) == highest_root_weight(typ)
            ok &= good
            notes.append(f"{typ}({q})={tuple(w)}")
    criterion(3, ok, " ".join(notes))
    assert ok


def test_criterion_04_bray(criterion):
    total = 0
    bad = 0
    for q in (3, 4):
        G = standard_copy("G2", q)
        h = GroupHandle(G.F, G.generator_list(), seed=q)
        x = find_involution(h)
        for y in bray_generators(h, x, 500):
            total += 1
            # independent of the handle's own commute test
            if not np.array_equal(la.matmul(G.F, x.mat, y.mat), la.matmul(G.F, y.mat, x.mat)):
                bad += 1
    ok = total == 1000 and bad == 0
    criterion(4, ok, f"{total} outputs, {bad} not centralizing")
    assert ok


def test_criterion_05_formula(criterion):
    G = standard_copy("G2", 8)
    F, R = G.F, G.rootsys
    b = R.simple(2)
    notes = []
    ok = True
    for seed in range(5):
        h = GroupHandle(F, G.generator_list() + [G.x(b, 1), G.h(b, F.omega)], seed=seed)
        u, v = h.gens[-2], h.gens[-1]
        N = h.subgroup(centralizer_of_involution(h, u, n=20).gens + [v])
        D = derived_group(N.subgroup(formula_complement(N, v, 10, 7)), size=10)
        profile = {D.order(D.random_element()) for _ in range(40)}
        order = _enumerate(F, D.mats(), ENUMERATION_LIMIT)
        cent = all(np.array_equal(la.matmul(F, g.mat, v.mat), la.matmul(F, v.mat, g.mat)) for g in D.gens)
        good = profile <= {1, 2, 3, 7, 9} and order == 504 and cent
        ok &= good
        notes.append(f"seed {seed}: |D|={order} orders {sorted(profile)}")
    criterion(5, ok, "; ".join(notes))
    assert ok


def test_criterion_06_bounds(criterion):
    cases = [("+", 8), ("+", 16), ("+", 32), ("-", 8), ("-", 16)]
    vals = {c: generation_bound(*c).value for c in cases}
    ok = all(v < 1 for v in vals.values())
    criterion(6, ok, " ".join(f"{e}{q}:{float(v):.4f}" for (e, q), v in vals.items()))
    assert ok


PLUS4 = {"P_1": (25, 5525, 3), "P_2": (15, 394485, 1), "N_1": (60, 16320, 3),
         "N_2^-": (84, 6580224, 3), "N_4^+.2": (432, 1292648448, 1), "N_4^-.2": (1200, 1006387200, 3)}
MINUS4 = {"P_1": (17, 5397), "P_2": (5, 350805), "P_3": (85, 283985), "N_1": (68, 16448),
          "N_2^-": (136, 6842368), "N_4^+": (1633, 2299035648), "O_4^-(q^2).2": (2400, 2012774400),
          "U_3(q)": (8160, 1082315243520)}


def test_criterion_07_golden_tables(criterion):
    plus = {r.label: (r.fix, r.index, r.multiplicity) for r in fixpoint_table("+", 4).rows}
    minus = {r.label: (r.fix, r.index) for r in fixpoint_table("-", 4).rows}
    ok = (plus == PLUS4 and minus == MINUS4
          and generation_bound("+", 4).value == Fraction(485395, 480896)
          and generation_bound("-", 4).value == Fraction(843690305, 2299035648))
    criterion(7, ok, f"q=4 tables: {len(plus)} + rows, {len(minus)} - rows")
    assert ok


def test_criterion_08_monte_carlo(criterion):
    short = estimate_probability("g2-short-pair", 8, 200, seed=1)
    long_ = estimate_probability("g2-long-pair", 4, 1000, seed=1)
    target = 1 / 69888
    ok = short.estimate >= 0.5 and long_.estimate <= 0.01 and long_.low <= target <= long_.high
    criterion(8, ok, f"short q=8 {short.hits}/200; long q=4 {long_.hits}/1000 "
                     f"interval [{long_.low:.2e}, {long_.high:.2e}]")
    assert ok


def test_criterion_09_oracles(criterion):
    variants = [(3, None, False), (5, None, True), (4, None, True), (3, 9, True), (2, 8, True),
                (7, None, False), (8, None, True), (9, None, True), (4, 16, True), (5, 25, False)]
    done = {2: 0, 3: 0}
    for n, oracle in ((2, recognize_sl2), (3, recognize_sl3)):
        for q, big, conj in variants:
            for seed in (1, 2):
                F, gens = natural(n, q, big, conj, seed)
                h = GroupHandle(F, gens, seed=seed)
                iso = oracle(h, q, np.random.default_rng(seed))
                good = True
                for _ in range(50):
                    g, k = h.random_element(), h.random_element()
                    A = iso.forward(g)
                    good &= np.array_equal(iso.backward(A).mat, g.mat)
                    good &= np.array_equal(iso.forward(h.mul(g, k)), la.matmul(F, A, iso.forward(k)))
                    good &= la.rank(F, A) == n
                if n == 3:
                    good &= np.array_equal(iso.forward(iso.elementary(0, 2, 1)), elementary(F, 3, 0, 2, 1))
                done[n] += bool(good)
    ok = done == {2: 20, 3: 20}
    criterion(9, ok, f"SL2 {done[2]}/20, SL3 {done[3]}/20 instances, 50 elements each")
    assert ok


# weighted toward the cheap copies; the large ones are slow per element
ORDER_PLAN = [("G2", 3, 2600), ("G2", 4, 2000), ("G2", 5, 1500), ("G2", 8, 1000), ("G2", 9, 800),
              ("3D4", 2, 800), ("3D4", 3, 200), ("F4", 3, 500), ("E6", 3, 300), ("2E6", 2, 200),
              ("E7", 3, 100)]


def test_criterion_10_pseudo_order(criterion):
    checked = 0
    bad = []
    for typ, q, n in ORDER_PLAN:
        G = standard_copy(typ, q)
        h = GroupHandle(G.F, G.generator_list(), seed=q)
        for _ in range(n):
            g = h.random_element().mat
            m, _exact = pseudo_order(G.F, g)
            if not la.is_identity(la.mat_pow(G.F, g, m)):
                bad.append((typ, q, m))
            checked += 1
    ok = checked == 10_000 and not bad
    criterion(10, ok, f"{checked} elements, {len(bad)} with g^n != 1")
    assert ok
