"""Root systems, Chevalley structure constants and commutator expansions.

Node labels follow the usual conventions for the exceptional types with
one twist: for G2 node 1 is the long simple root (alpha) and node 2 the
short one (beta).  Roots are integer coefficient tuples over the simple
roots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ParallelRoots, UnsupportedType

Root = tuple[int, ...]


def _gram(typ: str) -> np.ndarray:
    """Symmetric Gram matrix of the simple roots, integer-scaled."""
    if typ == "G2":
        return np.array([[6, -3], [-3, 2]])
    if typ == "F4":
        B = np.diag([4, 4, 2, 2])
        B[0, 1] = B[1, 0] = -2
        B[1, 2] = B[2, 1] = -2
        B[2, 3] = B[3, 2] = -1
        return B
    if typ in ("E6", "E7", "E8"):
        n = int(typ[1])
        B = 2 * np.eye(n, dtype=int)
        edges = [(1, 3), (3, 4), (4, 5), (2, 4)] + [(k, k + 1) for k in range(5, n)]
        for i, j in edges:
            B[i - 1, j - 1] = B[j - 1, i - 1] = -1
        return B
    if typ == "D4":
        B = 2 * np.eye(4, dtype=int)
        for i, j in [(1, 2), (2, 3), (2, 4)]:
            B[i - 1, j - 1] = B[j - 1, i - 1] = -1
        return B
    if typ.startswith("A") and typ[1:].isdigit():
        n = int(typ[1:])
        B = 2 * np.eye(n, dtype=int)
        for i in range(n - 1):
            B[i, i + 1] = B[i + 1, i] = -1
        return B
    raise UnsupportedType(typ)


# edges of the Dynkin diagram, (r, s) with r < s
def dynkin_edges(typ: str) -> list[tuple[int, int]]:
    B = _gram(typ)
    n = B.shape[0]
    return [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if B[i, j] != 0]


@dataclass
class RootSystem:
    """A crystallographic root system with Chevalley structure constants."""

    type: str
    gram: np.ndarray
    roots: list[Root] = field(default_factory=list)
    positive: list[Root] = field(default_factory=list)
    index: dict[Root, int] = field(default_factory=dict)
    signs: dict[Root, int] = field(default_factory=dict)

    # ------------------------------------------------------------ basic data
    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    def ip(self, r: Sequence[int], s: Sequence[int]) -> int:
        return int(np.asarray(r) @ self.gram @ np.asarray(s))

    def norm(self, r: Sequence[int]) -> int:
        return self.ip(r, r)

    def pairing(self, r: Sequence[int], s: Sequence[int]) -> int:
        """<r, s^vee> = 2(r,s)/(s,s)."""
        v = 2 * self.ip(r, s)
        n = self.norm(s)
        assert v % n == 0
        return v // n

    @property
    def cartan(self) -> np.ndarray:
        l = self.rank
        return np.array([[self.pairing(self.simple(i), self.simple(j)) for j in range(1, l + 1)]
                         for i in range(1, l + 1)])

    def simple(self, i: int) -> Root:
        r = [0] * self.rank
        r[i - 1] = 1
        return tuple(r)

    def is_root(self, r: Sequence[int]) -> bool:
        return tuple(r) in self.index

    def is_long(self, r: Sequence[int]) -> bool:
        return self.norm(r) == self._long_norm

    @property
    def highest_root(self) -> Root:
        return max(self.positive, key=lambda r: (sum(r), r))

    def height(self, r: Sequence[int]) -> int:
        return sum(r)

    def neg(self, r: Root) -> Root:
        return tuple(-x for x in r)

    def add(self, r: Root, s: Root) -> Root:
        return tuple(a + b for a, b in zip(r, s))

    def coroot_coefficients(self, r: Root) -> list[Fraction]:
        """r^vee = sum c_i alpha_i^vee."""
        n = self.norm(r)
        return [Fraction(k * self.norm(self.simple(i + 1)), n) for i, k in enumerate(r)]

    def reflect(self, r: Root, s: Root) -> Root:
        """w_s(r)."""
        k = self.pairing(r, s)
        return tuple(a - k * b for a, b in zip(r, s))

    # -------------------------------------------------------- structure constants
    def p_value(self, r: Root, s: Root) -> int:
        """Largest p with s - p r a root."""
        p = 0
        cur = s
        while True:
            cur = tuple(b - a for a, b in zip(r, cur))
            if cur in self.index:
                p += 1
            else:
                return p

    def _order_key(self, r: Root):
        return (sum(r), r)

    def extraspecial(self, xi: Root) -> tuple[Root, Root]:
        best = None
        for a in self.positive:
            b = tuple(x - y for x, y in zip(xi, a))
            if b in self.index and sum(b) > 0:
                cand = (a, b) if self._order_key(a) < self._order_key(b) else (b, a)
                if best is None or self._order_key(cand[0]) < self._order_key(best[0]):
                    best = cand
        assert best is not None
        return best

    def N(self, r: Root, s: Root) -> int:
        """Structure constant N_{r,s} in the normalized Chevalley basis (0 if r+s is not a root)."""
        t = self.add(r, s)
        if t not in self.index:
            return 0
        base = self._N_raw(r, s)
        sr, ss, st = (self.signs.get(self._abs(x), 1) for x in (r, s, t))
        return sr * ss * st * base

    def _abs(self, r: Root) -> Root:
        return r if sum(r) > 0 else self.neg(r)

    def _N_raw(self, r: Root, s: Root) -> int:
        return _structure_constant(self, r, s)

    # ------------------------------------------------------ commutator formula
    def commutator_expansion(self, a: Root, b: Root) -> list[tuple[int, int, Root, int]]:
        """Terms (i, j, i a + j b, C) with [x_a(c), x_b(d)] = prod x_{ia+jb}(C c^i d^j).

        Commutators are [x, y] = x^-1 y^-1 x y; the product is taken in
        order of increasing i + j, then increasing i.
        """
        a, b = tuple(a), tuple(b)
        if a == b or a == self.neg(b):
            raise ParallelRoots(f"{a} and {b} are parallel")
        terms = []
        for i in range(1, 4):
            for j in range(1, 4):
                rt = tuple(i * x + j * y for x, y in zip(a, b))
                if rt in self.index:
                    c = self._carter_C(a, b, i, j)
                    terms.append((i, j, rt, c))
        terms.sort(key=lambda t: (t[0] + t[1], t[0]))
        return terms

    def _M(self, r: Root, s: Root, i: int) -> Fraction:
        val = Fraction(1)
        cur = s
        for k in range(i):
            val *= self.N(r, cur)
            cur = self.add(r, cur)
        return val / math.factorial(i)

    def _carter_C(self, a: Root, b: Root, i: int, j: int) -> int:
        # Standard expansion [x_s(u), x_r(t)] = prod x_{ir+js}(C_{ijrs} (-t)^i u^j)
        # with r = b, s = a, t = d, u = c; the root i*a + j*b has
        # Carter indices (j, i) relative to (r, s) = (b, a).
        r, s = b, a
        I, J = j, i
        if J == 1:
            C = self._M(r, s, I)
        elif I == 1:
            C = (-1) ** J * self._M(s, r, J)
        elif (I, J) == (3, 2):
            C = Fraction(1, 3) * self._M(self.add(r, s), r, 2)
        elif (I, J) == (2, 3):
            C = Fraction(-2, 3) * self._M(self.add(s, r), s, 2)
        else:
            raise AssertionError((I, J))
        C *= (-1) ** I
        assert C.denominator == 1
        return int(C)

    # ------------------------------------------------------ adjoint matrices
    @property
    def dim(self) -> int:
        return len(self.roots) + self.rank

    def ad_matrix(self, r: Root) -> np.ndarray:
        return _ad_matrix(self, tuple(r))

    def exp_terms(self, r: Root) -> list[np.ndarray]:
        """Integer matrices A_k = ad(e_r)^k / k!, k >= 1, until zero."""
        return _exp_terms(self, tuple(r))


def _structure_constant(rs: RootSystem, r: Root, s: Root) -> int:
    cache = rs.__dict__.setdefault("_Ncache", {})
    key = (r, s)
    if key in cache:
        return cache[key]
    val = _compute_N(rs, r, s)
    cache[key] = val
    return val


def _compute_N(rs: RootSystem, r: Root, s: Root) -> int:
    t = rs.add(r, s)
    if t not in rs.index:
        return 0
    hr, hs, ht = sum(r), sum(s), sum(t)
    if hr > 0 and hs > 0:
        a, b = rs.extraspecial(t)
        pab = rs.p_value(a, b) + 1
        if (r, s) == (a, b):
            return pab
        if (r, s) == (b, a):
            return -pab
        # four-root identity with r + s + (-a) + (-b) = 0
        na, nb = rs.neg(a), rs.neg(b)
        total = Fraction(0)
        sa = rs.add(s, na)
        if sa in rs.index:
            total += Fraction(_structure_constant(rs, s, na) * _structure_constant(rs, r, nb), rs.norm(sa))
        ra = rs.add(r, na)
        if ra in rs.index:
            total += Fraction(_structure_constant(rs, na, r) * _structure_constant(rs, s, nb), rs.norm(ra))
        val = -Fraction(rs.norm(t)) / (-pab) * total
        assert val.denominator == 1, (r, s, val)
        return int(val)
    if hr < 0 and hs < 0:
        return -_structure_constant(rs, rs.neg(r), rs.neg(s))
    # mixed signs: three-root identity with r + s + (-t) = 0
    nt = rs.neg(t)
    if hr > 0:  # r > 0 > s
        if ht > 0:
            val = Fraction(rs.norm(t), rs.norm(r)) * _structure_constant(rs, s, nt)
        else:
            val = Fraction(rs.norm(t), rs.norm(s)) * _structure_constant(rs, nt, r)
    else:  # s > 0 > r
        if ht > 0:
            val = Fraction(rs.norm(t), rs.norm(s)) * _structure_constant(rs, nt, r)
        else:
            val = Fraction(rs.norm(t), rs.norm(r)) * _structure_constant(rs, s, nt)
    assert val.denominator == 1
    return int(val)


def _ad_matrix(rs: RootSystem, r: Root) -> np.ndarray:
    cache = rs.__dict__.setdefault("_adcache", {})
    if r in cache:
        return cache[r]
    n = len(rs.roots)
    d = rs.dim
    X = np.zeros((d, d), dtype=np.int64)
    nr = rs.neg(r)
    for j, s in enumerate(rs.roots):
        if s == nr:
            for i, c in enumerate(rs.coroot_coefficients(r)):
                assert c.denominator == 1
                X[n + i, j] = int(c)
            continue
        t = rs.add(r, s)
        if t in rs.index:
            X[rs.index[t], j] = rs.N(r, s)
    ir = rs.index[r]
    for i in range(rs.rank):
        X[ir, n + i] = -rs.pairing(r, rs.simple(i + 1))
    cache[r] = X
    return X


def _exp_terms(rs: RootSystem, r: Root) -> list[np.ndarray]:
    cache = rs.__dict__.setdefault("_expcache", {})
    if r in cache:
        return cache[r]
    X = _ad_matrix(rs, r)
    terms = []
    cur = np.eye(rs.dim, dtype=np.int64)
    k = 1
    while True:
        cur = cur @ X
        if not cur.any():
            break
        assert np.all(cur % k == 0)
        cur = cur // k
        terms.append(cur.copy())
        k += 1
    cache[r] = terms
    return terms


def _build(typ: str) -> RootSystem:
    B = _gram(typ)
    rs = RootSystem(typ, B)
    l = B.shape[0]
    simples = [rs.simple(i + 1) for i in range(l)]
    pos = {s: None for s in simples}
    rs.index = {s: k for k, s in enumerate(simples)}
    layer = list(simples)
    while layer:
        nxt = []
        for r in layer:
            for i, a in enumerate(simples):
                if r == a:
                    continue
                p = 0
                cur = r
                while True:
                    cur = tuple(x - y for x, y in zip(cur, a))
                    if cur in pos:
                        p += 1
                    else:
                        break
                qv = p - rs.pairing(r, a)
                if qv > 0:
                    new = tuple(x + y for x, y in zip(r, a))
                    if new not in pos:
                        pos[new] = None
                        nxt.append(new)
        layer = nxt
    positive = sorted(pos, key=lambda r: (sum(r), r))
    rs.positive = positive
    rs.roots = positive + [rs.neg(r) for r in positive]
    rs.index = {r: k for k, r in enumerate(rs.roots)}
    rs._long_norm = max(rs.norm(r) for r in positive)
    return rs


EXPECTED_COUNTS = {"G2": 12, "F4": 48, "E6": 72, "E7": 126, "E8": 240, "D4": 24}


# ------------------------------------------------- compound-root generators
# Each compound generator is defined from previously defined ones:
#   ("comm", r, s, e): x(c) = [x_r(c), x_s(e)]
#   ("conj", r, e, k): x(c) = x_r(e c)^{n_k},  n_k = x_k(1) x_{-k}(-1) x_k(1)
# r, s, k are simple-root indices (negative for negative roots) or root tuples.

def compound_definitions(typ: str, R: RootSystem | None = None) -> dict[Root, tuple]:
    """Formulas building root elements of rank-2 subsystems from fundamental ones."""
    base = {"3D4": "G2", "2E6": "F4"}.get(typ, typ)
    R = R or root_system(base)
    defs: dict[Root, tuple] = {}

    def sroot(i):
        return R.simple(abs(i)) if i > 0 else R.neg(R.simple(abs(i)))

    if base in ("E6", "E7", "E8"):
        for r, s in dynkin_edges(base):
            rt = R.add(R.simple(r), R.simple(s))
            defs[rt] = ("comm", sroot(r), sroot(s), 1)
            defs[R.neg(rt)] = ("comm", sroot(-r), sroot(-s), -1)
    elif base == "F4":
        a1, a2, a3, a4 = (R.simple(i) for i in range(1, 5))
        r12, r23, r34 = R.add(a1, a2), R.add(a2, a3), R.add(a3, a4)
        r233 = R.add(r23, a3)
        for sg in (1, -1):
            f = (lambda r: r) if sg == 1 else R.neg
            defs[f(r12)] = ("conj", f(a1), 1, 2)
            defs[f(r23)] = ("conj", f(a3), -1, 2)
            defs[f(r34)] = ("conj", f(a3), 1, 4)
            defs[f(r233)] = ("conj", f(a2), 1, 3)
    elif base == "G2":
        al, be = R.simple(1), R.simple(2)
        ab = R.add(al, be)
        a2b = R.add(ab, be)
        a3b = R.add(a2b, be)
        aa3b = R.add(a3b, al)
        for sg in (1, -1):
            f = (lambda r: r) if sg == 1 else R.neg
            defs[f(ab)] = ("conj", f(be), -1, 1)
            defs[f(a2b)] = ("conj", f(ab), 1, 2)
            defs[f(a3b)] = ("conj", f(al), 1, 2)
            defs[f(aa3b)] = ("conj", f(a3b), -1, 1)
    elif base == "D4":
        for r, s in dynkin_edges(base):
            rt = R.add(R.simple(r), R.simple(s))
            defs[rt] = ("comm", sroot(r), sroot(s), 1)
            defs[R.neg(rt)] = ("comm", sroot(-r), sroot(-s), -1)
    else:
        raise UnsupportedType(typ)
    return defs


def generator_roots(typ: str) -> list[Root]:
    """Roots carrying standard generators: fundamental and rank-2 compound roots, both signs."""
    base = {"3D4": "G2", "2E6": "F4"}.get(typ, typ)
    R = root_system(base)
    fund = [R.simple(i) for i in range(1, R.rank + 1)]
    out = fund + [R.neg(r) for r in fund]
    for r in compound_definitions(typ):
        out.append(r)
    return sorted(set(out), key=lambda r: (sum(r) < 0, abs(sum(r)), tuple(abs(x) for x in r), r))


def _int_exp(rs: RootSystem, r: Root, c: int) -> np.ndarray:
    M = np.eye(rs.dim, dtype=np.int64)
    for k, A in enumerate(rs.exp_terms(r), start=1):
        M = M + (c ** k) * A
    return M


def _normalize_signs(rs: RootSystem) -> None:
    """Choose Chevalley basis signs so compound generators equal x_r(+c).

    Each compound generator formula is evaluated with integer matrices; if
    it produces x_r(-c) instead of x_r(c), the basis vector e_r (and e_-r)
    is negated, which is the same as flipping the extraspecial sign of r.
    """
    if rs.type not in ("G2", "F4", "E6", "E7", "E8", "D4"):
        return
    defs = compound_definitions(rs.type, rs)
    rs.signs = {}
    for key in ("_adcache", "_expcache"):
        rs.__dict__.pop(key, None)

    def x(r, c):
        return _int_exp(rs, r, c)

    def n(k):
        a = rs.simple(k)
        return x(a, 1) @ x(rs.neg(a), -1) @ x(a, 1)

    def ninv(k):
        a = rs.simple(k)
        return x(a, -1) @ x(rs.neg(a), 1) @ x(a, -1)

    def evaluate(root, c):
        if root not in defs:
            return x(root, c)
        d = defs[root]
        if d[0] == "comm":
            _, r, s, e = d
            A, Bm = evaluate(r, c), evaluate(s, e)
            Ai, Bi = evaluate(r, -c), evaluate(s, -e)
            return Ai @ Bi @ A @ Bm
        _, r, e, k = d
        return ninv(k) @ evaluate(r, e * c) @ n(k)

    # positive roots first, in order of height, then negatives
    order = sorted(defs, key=lambda r: (abs(sum(r)), sum(r) < 0))
    for root in order:
        M = evaluate(root, 1)
        for key in ("_adcache", "_expcache"):
            rs.__dict__.pop(key, None)
        if np.array_equal(M, x(root, 1)):
            continue
        if np.array_equal(M, x(root, -1)):
            pos = rs._abs(root)
            if root != pos and pos in defs and rs.signs.get(pos, 1) != 1:
                raise AssertionError(f"inconsistent signs for {root}")
            rs.signs[pos] = -rs.signs.get(pos, 1)
            for key in ("_adcache", "_expcache"):
                rs.__dict__.pop(key, None)
            if not np.array_equal(evaluate(root, 1), x(root, 1)):
                raise AssertionError(f"sign flip did not fix {root}")
            continue
        raise AssertionError(f"compound formula for {root} is not a root element")
    # all formulas must agree after the flips
    for root in order:
        if not np.array_equal(evaluate(root, 1), x(root, 1)):
            raise AssertionError(f"sign normalization failed at {root}")


@lru_cache(maxsize=None)
def root_system(typ: str) -> RootSystem:
    """Root system of the given type with normalized structure constants."""
    typ = typ.upper()
    if typ not in EXPECTED_COUNTS and not (typ.startswith("A") and typ[1:].isdigit()):
        raise UnsupportedType(typ)
    rs = _build(typ)
    if typ in EXPECTED_COUNTS:
        assert len(rs.roots) == EXPECTED_COUNTS[typ]
    _normalize_signs(rs)
    return rs


def commutator_expansion(rs: RootSystem, a: Root, b: Root):
    return rs.commutator_expansion(a, b)


# ------------------------------------------------------------ twisted data

@dataclass(frozen=True)
class TwistedData:
    type: str                         # "3D4" or "2E6"
    twisted: RootSystem               # G2 or F4
    untwisted: RootSystem             # D4 or E6
    order: int                        # 3 or 2
    node_orbits: dict[int, tuple[int, ...]]   # twisted node -> untwisted nodes (tau-ordered)
    orbits: dict[Root, tuple[Root, ...]]      # twisted root -> untwisted roots

    def restrict(self, r: Root) -> Root:
        out = [0] * self.twisted.rank
        for i, nodes in self.node_orbits.items():
            out[i - 1] = sum(r[j - 1] for j in nodes)
        return tuple(out)


@lru_cache(maxsize=None)
def twisted_root_data(typ: str) -> TwistedData:
    typ = typ.upper()
    if typ == "3D4":
        tw, un, order = root_system("G2"), root_system("D4"), 3
        node_orbits = {1: (2,), 2: (1, 3, 4)}
    elif typ == "2E6":
        tw, un, order = root_system("F4"), root_system("E6"), 2
        node_orbits = {1: (2,), 2: (4,), 3: (3, 5), 4: (1, 6)}
    else:
        raise UnsupportedType(typ)
    td = TwistedData(typ, tw, un, order, node_orbits, {})
    orbits: dict[Root, list[Root]] = {r: [] for r in tw.roots}
    for r in un.roots:
        orbits[td.restrict(r)].append(r)
    assert all(orbits[r] for r in tw.roots)
    object.__setattr__(td, "orbits", {r: tuple(v) for r, v in orbits.items()})
    return td
