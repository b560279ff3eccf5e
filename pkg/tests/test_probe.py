import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lierecog.chevalley import standard_copy
from lierecog.errors import ScenarioUnavailable
from lierecog.probe import (SCENARIOS, _setup, _sl_exponent, estimate_probability, exact_probability, fix_from_class_sizes,
                            fixpoint_table, generation_bound, order_centralizer_x, order_omega8, wilson)
from lierecog.randgrp import GroupHandle


def test_group_orders():
    # |Omega_8^+(2)| = 174182400, |Omega_8^-(2)| = 197406720
    assert order_omega8("+", 2) == 174182400
    assert order_omega8("-", 2) == 197406720


@pytest.mark.parametrize("eps", "+-")
@pytest.mark.parametrize("q", [4, 8, 16, 32])
def test_class_counts_are_integral(eps, q):
    if eps == "-" and q == 32:
        q = 2
    xg = Fraction(order_omega8(eps, q), order_centralizer_x(eps, q))
    assert xg.denominator == 1
    for r in fixpoint_table(eps, q).rows:
        meet = r.fix * xg / r.index
        assert meet.denominator == 1 and meet > 0


@pytest.mark.parametrize("q", [4, 8, 16])
def test_u3_and_o4_rows_match_class_counts(q):
    t = fixpoint_table("-", q)
    u = t.row("U_3(q)")
    assert fix_from_class_sizes("-", q, u.index, 2 * q**2 * (q**2 - q + 1)) == u.fix
    o = t.row("O_4^-(q^2).2")
    assert fix_from_class_sizes("-", q, o.index, q**4 * (q**4 + 1)) == o.fix


def test_bounds_decrease_with_q():
    vals = [generation_bound("+", q).value for q in (4, 8, 16, 32, 64)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert generation_bound("+", 4).value > 1


def test_bad_arguments():
    with pytest.raises(ValueError):
        fixpoint_table("+", 3)
    with pytest.raises(ValueError):
        fixpoint_table("x", 4)
    with pytest.raises(ValueError):
        fixpoint_table("+", 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 400), st.data())
def test_wilson_interval_contains_estimate(n, data):
    k = data.draw(st.integers(0, n))
    lo, hi = wilson(k, n)
    assert 0 <= lo <= k / n <= hi <= 1


def test_sl_exponents():
    assert _sl_exponent(4, 3) == 4 * 15 * 63
    assert _sl_exponent(5, 2) == 5 * 24
    assert _sl_exponent(3, 3) == 3 * 8 * 26


def test_exact_values():
    assert exact_probability("g2-long-pair", 4) == Fraction(1, 69888)
    assert exact_probability("trivial", 8) == 1
    assert exact_probability("g2-sl3", 4) is None


def test_estimates_are_seeded_and_independent_of_jobs():
    a = estimate_probability("g2-sl3", 4, 12, seed=3)
    b = estimate_probability("g2-sl3", 4, 12, seed=3, jobs=2)
    assert (a.hits, a.low, a.high) == (b.hits, b.low, b.high)
    out = a.to_json()
    assert out["version"] == "v1" and out["seed"] == 3
    json.dumps(out)


def test_trivial_scenario():
    e = estimate_probability("trivial", 4, 10)
    assert e.hits == 10


def test_unavailable_scenarios():
    with pytest.raises(ScenarioUnavailable):
        estimate_probability("g2-long-pair", 3, 5)
    with pytest.raises(ScenarioUnavailable):
        estimate_probability("no-such-thing", 4, 5)
    assert "d4-pair-generates" in SCENARIOS


def test_certificate_accepts_its_target():
    S = _setup("g2-short-pair", 8, 0)
    G = standard_copy("G2", 8)
    R = G.rootsys
    r = R.simple(2)
    gens = [G.x(s, c) for s in (r, R.neg(r)) for c in G.space.bases[r]]
    rng = np.random.default_rng(0)
    assert S.cert.matches(S.F, GroupHandle(S.F, gens, seed=rng), rng)
    # a long-root SL2 is isomorphic but not conjugate
    r = R.simple(1)
    gens = [G.x(s, c) for s in (r, R.neg(r)) for c in G.space.bases[r]]
    assert not S.cert.matches(S.F, GroupHandle(S.F, gens, seed=rng), rng)
