"""Fixed-point tables for Omega_8^{+-}(q), the generation bound, and Monte Carlo checks.

The tables list, for an element x of order q+1 in a long SL2 of
Omega_8^eps(q) (q even), each class of maximal subgroups M containing a
conjugate of x with fix_{G/M}(x) and |G:M|.  The bound is
sum_M mult * fix^2 / |G:M|, an upper bound for the probability that two
conjugates of x fail to generate.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
import sympy
from scipy.stats import binomtest

from . import linalg as la
from .chevalley import standard_copy
from .errors import ScenarioUnavailable
from .gf import Field, field_create, parse_field_spec
from .randgrp import Elem, GroupHandle
from .rootdata import root_system


@dataclass(frozen=True)
class FixRow:
    label: str
    fix: int
    index: int
    multiplicity: int        # 3 when the row stands for three triality-permuted classes


@dataclass(frozen=True)
class FixTable:
    eps: str
    q: int
    rows: tuple[FixRow, ...]

    def row(self, label: str) -> FixRow:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)


def _whole(x: Fraction | int, what: str) -> int:
    x = Fraction(x)
    if x.denominator != 1 or x <= 0:
        raise ValueError(f"{what} is not a positive integer: {x}")
    return int(x)


def _check_q(eps: str, q: int) -> None:
    if eps not in "+-" or len(eps) != 1:
        raise ValueError("eps is '+' or '-'")
    if q % 2 or q < 2 or q & (q - 1):
        raise ValueError("q must be a power of 2")
    if eps == "+" and q == 2:
        raise ValueError("the + table needs q > 2")


def _rows_plus(q: int) -> list[tuple[str, Fraction, Fraction, int]]:
    F = Fraction
    return [
        ("P_1", F((q + 1) ** 2), F((q**4 - 1) * (q**3 + 1), q - 1), 3),
        ("P_2", F(3 * (q + 1)), F((q**6 - 1) * (q**2 + 1) ** 2, q - 1), 1),
        ("N_1", F(q * (q**2 - 1)), F(q**3 * (q**4 - 1)), 3),
        ("N_2^-", F(q * (q - 1) * (q**2 - q + 2), 2), F(q**6 * (q**4 - 1) * (q**3 - 1), 2 * (q + 1)), 3),
        ("N_4^+.2", F(q**3 * (q - 1) ** 3, 4), F(q**8 * (q**6 - 1) * (q**2 + 1) ** 2, 4 * (q**2 - 1)), 1),
        ("N_4^-.2", F(q**3 * (q + 1) * (q**2 - 1), 4), F(q**8 * (q**6 - 1) * (q**2 - 1), 4), 3),
    ]


def _rows_minus(q: int) -> list[tuple[str, Fraction, Fraction, int]]:
    F = Fraction
    g = math.gcd(3, q + 1)
    return [
        ("P_1", F(q**2 + 1), F((q**4 + 1) * (q**3 - 1), q - 1), 1),
        ("P_2", F(q + 1), F((q**6 - 1) * (q**4 + 1), q - 1), 1),
        ("P_3", F((q**2 + 1) * (q + 1)), F((q**4 + 1) * (q**3 + 1) * (q**2 + 1)), 1),
        ("N_1", F(q * (q**2 + 1)), F(q**3 * (q**4 + 1)), 1),
        ("N_2^-", F(q**2 * (q**2 + 1), 2), F(q**6 * (q**4 + 1) * (q**3 + 1), 2 * (q + 1)), 1),
        ("N_4^+", F(q**3 * (q**2 + 1) * (q - 1), 2) + 1, F(q**8 * (q**6 - 1) * (q**4 + 1), 2 * (q**2 - 1)), 1),
        ("O_4^-(q^2).2", F(q**3 * (q**2 - 1) * (q + 1), 2), F(q**8 * (q**6 - 1) * (q**2 - 1), 2), 1),
        ("U_3(q)", F(2 * g * q**2 * (q**4 - 1)), F(g * q**9 * (q**8 - 1) * (q**3 - 1)), 1),
    ]


def fixpoint_table(eps: str, q: int) -> FixTable:
    _check_q(eps, q)
    raw = _rows_plus(q) if eps == "+" else _rows_minus(q)
    rows = tuple(FixRow(lab, _whole(f, f"fix({lab})"), _whole(i, f"index({lab})"), m) for lab, f, i, m in raw)
    return FixTable(eps, q, rows)


@dataclass(frozen=True)
class Bound:
    eps: str
    q: int
    value: Fraction

    @property
    def below_one(self) -> bool:
        return self.value < 1


def generation_bound(eps: str, q: int) -> Bound:
    t = fixpoint_table(eps, q)
    total = sum((Fraction(r.multiplicity * r.fix**2, r.index) for r in t.rows), Fraction(0))
    return Bound(eps, q, total)


# ------------------------------------------------------------ group orders

def order_omega8(eps: str, q: int) -> int:
    """|Omega_8^eps(q)| for q even."""
    e = 1 if eps == "+" else -1
    return q**12 * (q**4 - e) * (q**2 - 1) * (q**4 - 1) * (q**6 - 1)


def order_centralizer_x(eps: str, q: int) -> int:
    """|C_G(x)| = |Omega_4^eps(q)| (q+1) |SL2(q)|: trivial on V_4, a torus of one SL2 factor on V_4'."""
    e = 1 if eps == "+" else -1
    return q**2 * (q**2 - e) * (q**2 - 1) * (q + 1) * q * (q**2 - 1)


def fix_from_class_sizes(eps: str, q: int, index: int, meet: int) -> Fraction:
    """fix_{G/M}(x) = |G:M| |x^G meet M| / |x^G|."""
    xg = Fraction(order_omega8(eps, q), order_centralizer_x(eps, q))
    return Fraction(index) * meet / xg


# ------------------------------------------------------------- Monte Carlo

@dataclass
class Estimate:
    scenario: str
    q: int
    trials: int
    hits: int
    seed: int
    low: float
    high: float
    exact: Fraction | None = None

    @property
    def estimate(self) -> float:
        return self.hits / self.trials

    def to_json(self) -> dict:
        out = {"version": "v1", "scenario": self.scenario, "q": self.q, "trials": self.trials,
               "hits": self.hits, "seed": self.seed, "estimate": self.estimate,
               "wilson95": [self.low, self.high]}
        if self.exact is not None:
            out["exact"] = str(self.exact)
        return out


def wilson(hits: int, trials: int) -> tuple[float, float]:
    ci = binomtest(hits, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass
class _Certificate:
    """Order exponent, primes that must show, and composition dimensions of the target.

    ``inv_ranks`` holds rank(t - 1) over the involutions of the target; it
    separates long-root, short-root and diagonal SL2 classes, which agree on
    everything else.
    """

    exponent: int | None
    primes: frozenset[int]
    dims: tuple[int, ...]
    inv_ranks: frozenset[int] | None = None
    order: int | None = None          # exact order when small enough to enumerate
    spaces: tuple[int, int] | None = None   # dims of fixed space and commutator space

    def matches(self, F: Field, K: GroupHandle, rng: np.random.Generator, n: int = 30) -> bool:
        seen: set[int] = set()
        for _ in range(n):
            g = K.random_element()
            m = K.order(g)
            if self.exponent is not None and self.exponent % m:
                return False
            if self.inv_ranks is not None and m % 2 == 0:
                if _inv_rank(F, K, g, m) not in self.inv_ranks:
                    return False
            seen |= set(sympy.factorint(m))
        if not self.primes <= seen:
            return False
        if self.spaces is not None and _spaces(F, K) != self.spaces:
            return False
        if _dims(F, K, rng) != self.dims:
            return False
        return self.order is None or _enumerate(F, K.mats(), self.order) == self.order


ENUMERATION_LIMIT = 5000


def _enumerate(F: Field, gens, limit: int) -> int | None:
    """|<gens>| by orbit of the identity, or None once it passes ``limit``."""
    one = la.identity(F, gens[0].shape[0])
    seen = {one.tobytes()}
    frontier = [one]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = la.matmul(F, a, g)
                k = b.tobytes()
                if k not in seen:
                    seen.add(k)
                    nxt.append(b)
                    if len(seen) > limit:
                        return None
        frontier = nxt
    return len(seen)


def _spaces(F: Field, K: GroupHandle) -> tuple[int, int]:
    gens = K.mats()
    return la.common_fixed_space(F, gens).dim, la.commutator_space(F, gens).dim


def _dims(F: Field, K: GroupHandle, rng) -> tuple[int, ...]:
    return tuple(sorted(f.dim for f in la.chop(F, K.mats(), rng)))


def _inv_rank(F: Field, K: GroupHandle, g: Elem, m: int) -> int:
    return la.rank(F, la.minus_identity(F, K.power(g, m // 2).mat))


def _certificate(F: Field, K: GroupHandle, exponent: int | None, rng, n: int = 100,
                 involutions: bool = True) -> _Certificate:
    """Primes dividing at least a fifth of sampled orders must show up in a match."""
    count: dict[int, int] = {}
    ranks: set[int] = set()
    for _ in range(n):
        g = K.random_element()
        m = K.order(g)
        for r in sympy.factorint(m):
            count[r] = count.get(r, 0) + 1
        if m % 2 == 0:
            ranks.add(_inv_rank(F, K, g, m))
    common = frozenset(r for r, c in count.items() if c >= n // 5)
    order = _enumerate(F, K.mats(), ENUMERATION_LIMIT)
    return _Certificate(exponent, common, _dims(F, K, rng), frozenset(ranks) if involutions else None, order,
                        _spaces(F, K))


def _sl_exponent(q: int, n: int) -> int:
    """A multiple of the exponent of SL_n(q): unipotent part times the torus orders."""
    p = int(sympy.factorint(q).popitem()[0])
    u = p
    while u < n:
        u *= p
    return u * math.prod(q**k - 1 for k in range(2, n + 1))


def _find_order(K: GroupHandle, n: int, tries: int = 500) -> Elem:
    for _ in range(tries):
        g = K.random_element()
        if K.order(g) == n:
            return g
    raise ScenarioUnavailable(f"no element of order {n} found")


@dataclass
class _Setup:
    F: Field
    gens: list[np.ndarray]
    x: np.ndarray            # fixed element
    y: np.ndarray            # element conjugated by random g
    cert: _Certificate | None
    fixed_group: list[np.ndarray] | None = None   # use <fixed_group, y^g> instead of <x, y^g>


def _root_sl2(G, r) -> list[np.ndarray]:
    R = G.rootsys
    return [G.x(s, c) for s in (r, R.neg(r)) for c in G.space.bases[s]]


def _g2_pair(q: int, long: bool, rng) -> _Setup:
    if q % 2:
        raise ScenarioUnavailable("the G2 scenarios need q even")
    G = standard_copy("G2", q)
    F = G.F
    r = G.rootsys.simple(1 if long else 2)
    A = GroupHandle(F, _root_sl2(G, r), seed=rng)
    z = la.matmul(F, G.x(r, 1), G.x(G.rootsys.neg(r), 1))     # order 3
    cert = _certificate(F, A, _sl_exponent(q, 2), rng)
    return _Setup(F, G.generator_list(), z, z, cert)


def _g2_sl3(q: int, rng) -> _Setup:
    if q % 2:
        raise ScenarioUnavailable("the G2 scenarios need q even")
    G = standard_copy("G2", q)
    F = G.F
    R = G.rootsys
    a, b = R.simple(1), R.simple(2)
    A1 = _root_sl2(G, a)
    # subsystem SL3 of long roots: a and its sum with 3b
    other = R.add(R.add(R.add(a, b), b), b)
    S = GroupHandle(F, A1 + _root_sl2(G, other), seed=rng)
    cert = _certificate(F, S, _sl_exponent(q, 3), rng)
    t = G.x(a, 1)
    return _Setup(F, G.generator_list(), t, t, cert, fixed_group=A1)


def _3d4_sl3(q: int, rng) -> _Setup:
    if q % 2:
        raise ScenarioUnavailable("the 3D4 scenario needs q even")
    G = standard_copy("3D4", q)
    F = G.F
    R = G.rootsys
    a, b = R.simple(1), R.simple(2)
    A = GroupHandle(F, _root_sl2(G, a), seed=rng)
    x = _find_order(A, q + 1).mat
    t = G.x(a, 1)
    other = R.add(R.add(R.add(a, b), b), b)
    S = GroupHandle(F, _root_sl2(G, a) + [G.generators()[(other, i)] for i in range(G.space.degree(other))]
                    + [G.generators()[(R.neg(other), i)] for i in range(G.space.degree(other))], seed=rng)
    cert = _certificate(F, S, _sl_exponent(q, 3), rng)
    return _Setup(F, G.generator_list(), x, t, cert)


@lru_cache(maxsize=None)
def _d4_adjoint(q: int) -> tuple[Field, tuple[np.ndarray, ...], tuple]:
    p, a = parse_field_spec(q)
    F = field_create(p, a)
    R = root_system("D4")
    out = {}
    for k in range(1, 5):
        for r in (R.simple(k), R.neg(R.simple(k))):
            terms = [np.asarray(T % p, dtype=np.int64) for T in R.exp_terms(r)]
            mats = []
            for c in F.basis:
                M = la.identity(F, R.dim)
                ck = 1
                for T in terms:
                    ck = F.mul(ck, c)
                    M = F.add(M, F.mul(T, ck))
                mats.append(M)
            out[r] = mats
    gens = tuple(m for mats in out.values() for m in mats)
    return F, gens, tuple(out[R.simple(1)] + out[R.neg(R.simple(1))])


def _d4_generation(q: int, rng) -> _Setup:
    if q % 2 or q < 4:
        raise ScenarioUnavailable("the D4 scenario needs q even, q > 2")
    F, gens, sl2 = _d4_adjoint(q)
    A = GroupHandle(F, list(sl2), seed=rng)
    x = _find_order(A, q + 1).mat
    Gh = GroupHandle(F, list(gens), seed=rng)
    # whole group: primes and composition dimensions carry the certificate
    cert = _certificate(F, Gh, None, rng, involutions=False)
    return _Setup(F, list(gens), x, x, cert)


def _trivial(q: int, rng) -> _Setup:
    G = standard_copy("G2", q)
    return _Setup(G.F, G.generator_list(), G.generator_list()[0], G.generator_list()[0], None)


SCENARIOS: dict[str, tuple[str, Callable]] = {
    "d4-pair-generates": ("<x, x^g> = D4(q), x of order q+1 in a long SL2", _d4_generation),
    "g2-short-pair": ("<x, x^g> is a short-root SL2, x of order 3 in a short SL2 of G2(q)",
                      lambda q, rng: _g2_pair(q, False, rng)),
    "g2-long-pair": ("<y, y^g> is a long-root SL2, y of order 3 in a long SL2 of G2(q)",
                     lambda q, rng: _g2_pair(q, True, rng)),
    "g2-sl3": ("<A1, t^g> = SL3(q), A1 a long SL2 of G2(q), t an involution of A1", _g2_sl3),
    "3d4-sl3": ("<x, t^g> is a subsystem SL3(q) of 3D4(q)", _3d4_sl3),
    "trivial": ("<x, x> = <x>", _trivial),
}


def exact_probability(scenario: str, q: int) -> Fraction | None:
    if scenario == "g2-long-pair":
        return Fraction(1, q**4 * (q**4 + q**2 + 1))
    if scenario == "trivial":
        return Fraction(1)
    return None


_SETUPS: dict[tuple[str, int, int], _Setup] = {}


def _setup(scenario: str, q: int, seed: int) -> _Setup:
    key = (scenario, q, seed)
    if key not in _SETUPS:
        try:
            build = SCENARIOS[scenario][1]
        except KeyError:
            raise ScenarioUnavailable(f"unknown scenario {scenario!r}") from None
        _SETUPS[key] = build(q, np.random.default_rng([seed, 0]))
    return _SETUPS[key]


def _trial(scenario: str, q: int, seed: int, i: int) -> bool:
    S = _setup(scenario, q, seed)
    if S.cert is None:
        return True
    F = S.F
    rng = np.random.default_rng([seed, 1, i])
    G = GroupHandle(F, S.gens, seed=rng)
    g = G.random_element().mat
    yg = la.matmul(F, la.matmul(F, la.inverse(F, g), S.y), g)
    first = S.fixed_group if S.fixed_group is not None else [S.x]
    K = GroupHandle(F, list(first) + [yg], seed=rng)
    return S.cert.matches(F, K, rng)


def _chunk(args) -> int:
    scenario, q, seed, lo, hi = args
    return sum(_trial(scenario, q, seed, i) for i in range(lo, hi))


def estimate_probability(scenario: str, q, trials: int, seed: int = 0, jobs: int = 1) -> Estimate:
    """Frequency of the scenario's event over seeded trials, with a 95% Wilson interval.

    Trial i draws from its own stream (seed, i), so the result does not
    depend on ``jobs``.
    """
    p, a = parse_field_spec(q)
    q = p**a
    _setup(scenario, q, seed)
    if jobs <= 1:
        hits = _chunk((scenario, q, seed, 0, trials))
    else:
        step = math.ceil(trials / jobs)
        parts = [(scenario, q, seed, lo, min(lo + step, trials)) for lo in range(0, trials, step)]
        with ProcessPoolExecutor(jobs) as ex:
            hits = sum(ex.map(_chunk, parts))
    low, high = wilson(hits, trials)
    return Estimate(scenario, q, trials, hits, seed, low, high, exact_probability(scenario, q))
