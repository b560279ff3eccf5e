"""Randomized group machinery over matrix generators.

Every element produced through a :class:`GroupHandle` carries a node in a
shared straight-line-program ledger, so any element can be rewritten as an
SLP in the input generators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import sympy
from sympy.ntheory import pollard_rho

from . import linalg as la
from . import poly
from .errors import EvenOrder, FactorNotSeparated, OrderUnresolved
from .gf import Field


# ------------------------------------------------------------------ SLP ledger

class Ledger:
    """Instruction list shared by a handle and all of its subgroups.

    Instructions are ``("G", k)``, ``("M", i, j)`` and ``("I", i)`` where
    i, j index earlier instructions.
    """

    def __init__(self, ngens: int):
        self.ngens = ngens
        self.ops: list[tuple] = [("G", k) for k in range(ngens)]
        self._inv: dict[int, int] = {}

    def mul(self, i: int, j: int) -> int:
        self.ops.append(("M", i, j))
        return len(self.ops) - 1

    def inv(self, i: int) -> int:
        if i in self._inv:
            return self._inv[i]
        op = self.ops[i]
        if op[0] == "I":
            return op[1]
        self.ops.append(("I", i))
        n = len(self.ops) - 1
        self._inv[i] = n
        self._inv[n] = i
        return n

    def program(self, node: int) -> list[tuple]:
        """Renumbered instruction list computing ``node`` (last line)."""
        need = set()
        stack = [node]
        while stack:
            n = stack.pop()
            if n in need:
                continue
            need.add(n)
            op = self.ops[n]
            if op[0] == "M":
                stack.extend((op[1], op[2]))
            elif op[0] == "I":
                stack.append(op[1])
        order = sorted(need)
        pos = {n: i for i, n in enumerate(order)}
        out = []
        for n in order:
            op = self.ops[n]
            if op[0] == "G":
                out.append(op)
            elif op[0] == "M":
                out.append(("M", pos[op[1]], pos[op[2]]))
            else:
                out.append(("I", pos[op[1]]))
        return out


def slp_text(program: Sequence[tuple]) -> str:
    names = {"G": "GEN", "M": "MUL", "I": "INV"}
    return "\n".join(" ".join([names[op[0]], *map(str, op[1:])]) for op in program) + "\n"


def parse_slp(text: str) -> list[tuple]:
    codes = {"GEN": "G", "MUL": "M", "INV": "I"}
    out = []
    for line in text.splitlines():
        parts = line.split()
        if parts:
            out.append((codes[parts[0]], *map(int, parts[1:])))
    return out


def evaluate_slp(F: Field, program: Sequence[tuple], gens: Sequence[np.ndarray]) -> np.ndarray:
    vals: list[np.ndarray] = []
    for op in program:
        if op[0] == "G":
            vals.append(np.asarray(gens[op[1]], dtype=np.int64))
        elif op[0] == "M":
            vals.append(la.matmul(F, vals[op[1]], vals[op[2]]))
        else:
            vals.append(la.inverse(F, vals[op[1]]))
    return vals[-1]


@dataclass(frozen=True, eq=False)
class Elem:
    mat: np.ndarray
    node: int

    def __repr__(self) -> str:
        return f"Elem(node={self.node}, d={self.mat.shape[0]})"


# ------------------------------------------------------------------- orders

_FACTOR_CACHE: dict[int, tuple[dict[int, int], bool]] = {}


def _factor_int(n: int) -> tuple[dict[int, int], bool]:
    """Prime factorization with bounded effort; flag False if a composite part survives."""
    if n in _FACTOR_CACHE:
        return _FACTOR_CACHE[n]
    fac = sympy.factorint(n, limit=1 << 20)
    out: dict[int, int] = {}
    exact = True
    todo = list(fac.items())
    while todo:
        m, e = todo.pop()
        if m == 1:
            continue
        if sympy.isprime(m):
            out[m] = out.get(m, 0) + e
            continue
        d = pollard_rho(m, max_steps=10**6)
        if d is None or d in (1, m):
            out[m] = out.get(m, 0) + e
            exact = False
            continue
        todo.append((d, e))
        todo.append((m // d, e))
    _FACTOR_CACHE[n] = (out, exact)
    return out, exact


@lru_cache(maxsize=None)
def factor_qk_minus_one(q: int, k: int) -> tuple[tuple[tuple[int, int], ...], bool]:
    """Factorization of q^k - 1 assembled from cyclotomic values."""
    total: dict[int, int] = {}
    exact = True
    for d in sympy.divisors(k):
        val = int(sympy.cyclotomic_poly(d, q))
        fac, ok = _factor_int(val)
        exact &= ok
        for r, e in fac.items():
            total[r] = total.get(r, 0) + e
    return tuple(sorted(total.items())), exact


def _poly_order_of_x(F: Field, f: np.ndarray) -> tuple[int, bool]:
    """Order of x modulo the irreducible f (f != x)."""
    k = poly.deg(f)
    n = F.q ** k - 1
    fac, exact = factor_qk_minus_one(F.q, k)
    one = np.array([1], dtype=np.int64)
    x = poly.x_poly()
    for r, e in fac:
        for _ in range(e):
            if n % r:
                break
            if np.array_equal(poly.trim(poly.powmod(F, x, n // r, f)), one):
                n //= r
            else:
                break
    return n, exact


@dataclass(frozen=True)
class OrderInfo:
    value: int
    exact: bool
    semisimple: int
    unipotent: int


def element_order(F: Field, g: np.ndarray, rng: np.random.Generator | None = None) -> OrderInfo:
    """Order of g from its characteristic polynomial.

    The semisimple part has order lcm of the orders of x modulo the
    irreducible factors; the unipotent part is found by p-th powering.
    """
    g = np.asarray(g, dtype=np.int64)
    if la.is_identity(g):
        return OrderInfo(1, True, 1, 1)
    cp = la.charpoly(F, g, rng)
    s = 1
    exact = True
    maxmult = 1
    for sq, mult in poly.squarefree_decomposition(F, cp):
        maxmult = max(maxmult, mult)
        for f, _ in poly.factor(F, sq, rng):
            n, ok = _poly_order_of_x(F, f)
            exact &= ok
            s = s * n // math.gcd(s, n)
    u = 1
    if maxmult > 1:
        h = la.mat_pow(F, g, s)
        while not la.is_identity(h):
            h = la.mat_pow(F, h, F.p)
            u *= F.p
    return OrderInfo(s * u, exact, s, u)


def pseudo_order(F: Field, g: np.ndarray) -> tuple[int, bool]:
    """A multiple of |g| (the exact order unless factoring gave up)."""
    info = element_order(F, g)
    return info.value, info.exact


def two_part(n: int) -> int:
    return n & -n


def sample_size(epsilon: float, k: float) -> int:
    """Samples needed to see a proportion 1/k event with failure probability epsilon."""
    return max(1, math.ceil(-math.log(epsilon) * k))


# ------------------------------------------------------------- group handles

class GroupHandle:
    """Generators plus a product-replacement stream and an SLP ledger."""

    SLOTS = 10
    BURN_IN = 50

    def __init__(self, F: Field, gens: Sequence, seed: int | np.random.Generator | None = None,
                 ledger: Ledger | None = None):
        self.F = F
        self.rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        if ledger is None:
            mats = [np.asarray(g, dtype=np.int64) for g in gens]
            ledger = Ledger(len(mats))
            self.inputs = mats
            gens = [Elem(m, k) for k, m in enumerate(mats)]
            self._root = self
        self.ledger = ledger
        self.gens: list[Elem] = list(gens)
        if not self.gens:
            raise ValueError("a group handle needs at least one generator")
        self.d = self.gens[0].mat.shape[0]
        self._pr: list[Elem] | None = None
        self._acc: Elem | None = None

    # ---- bookkeeping
    @property
    def root_inputs(self) -> list[np.ndarray]:
        return self._root.inputs

    def subgroup(self, gens: Sequence[Elem], seed=None) -> "GroupHandle":
        rng = self.rng if seed is None else np.random.default_rng(seed)
        child = GroupHandle(self.F, list(gens), self._spawn(rng), ledger=self.ledger)
        child._root = self._root
        return child

    def _spawn(self, rng) -> np.random.Generator:
        return np.random.default_rng(int(rng.integers(1 << 62)))

    def slp(self, x: Elem) -> list[tuple]:
        return self.ledger.program(x.node)

    def check_slp(self, x: Elem) -> bool:
        val = evaluate_slp(self.F, self.slp(x), self.root_inputs)
        return bool(np.array_equal(val, x.mat))

    # ---- arithmetic
    def one(self) -> Elem:
        g = self.gens[0]
        return self.mul(g, self.inv(g))

    def mul(self, x: Elem, y: Elem) -> Elem:
        return Elem(la.matmul(self.F, x.mat, y.mat), self.ledger.mul(x.node, y.node))

    def inv(self, x: Elem) -> Elem:
        return Elem(la.inverse(self.F, x.mat), self.ledger.inv(x.node))

    def prod(self, *xs: Elem) -> Elem:
        out = xs[0]
        for y in xs[1:]:
            out = self.mul(out, y)
        return out

    def power(self, x: Elem, e: int) -> Elem:
        if e < 0:
            x, e = self.inv(x), -e
        if e == 0:
            return self.one()
        result = None
        base = x
        while e:
            if e & 1:
                result = base if result is None else self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def comm(self, x: Elem, y: Elem) -> Elem:
        """[x, y] = x^-1 y^-1 x y."""
        return self.prod(self.inv(x), self.inv(y), x, y)

    def conj(self, x: Elem, y: Elem) -> Elem:
        """x^y = y^-1 x y."""
        return self.prod(self.inv(y), x, y)

    def equal(self, x: Elem, y: Elem) -> bool:
        return bool(np.array_equal(x.mat, y.mat))

    def is_one(self, x: Elem) -> bool:
        return la.is_identity(x.mat)

    def commute(self, x: Elem, y: Elem) -> bool:
        F = self.F
        return bool(np.array_equal(la.matmul(F, x.mat, y.mat), la.matmul(F, y.mat, x.mat)))

    def centralizes(self, x: Elem, ys: Sequence[Elem]) -> bool:
        return all(self.commute(x, y) for y in ys)

    def order(self, x: Elem) -> int:
        info = element_order(self.F, x.mat, self.rng)
        if not info.exact:
            raise OrderUnresolved("order could not be certified")
        return info.value

    def mats(self) -> list[np.ndarray]:
        return [g.mat for g in self.gens]

    # ---- random elements
    def _init_pr(self) -> None:
        slots = list(self.gens)
        while len(slots) < self.SLOTS:
            slots.append(self.gens[len(slots) % len(self.gens)])
        self._pr = slots
        self._acc = self.gens[0]
        for _ in range(self.BURN_IN):
            self._step()

    def _step(self) -> Elem:
        # rattle-style step without inverses: s_i <- s_i s_j (or s_j s_i), acc <- acc s_i
        s = self._pr
        n = len(s)
        i = int(self.rng.integers(n))
        j = int(self.rng.integers(n - 1))
        if j >= i:
            j += 1
        if self.rng.integers(2):
            s[i] = self.mul(s[i], s[j])
        else:
            s[i] = self.mul(s[j], s[i])
        self._acc = self.mul(self._acc, s[i])
        return self._acc

    def random_element(self) -> Elem:
        if len(self.gens) == 1:
            g = self.gens[0]
            if self._pr is None:
                self._pr = [g]
                self._acc = g
            self._acc = self.power(g, int(self.rng.integers(1, 1 << 16)))
            return self._acc
        if self._pr is None:
            self._init_pr()
        return self._step()

    def random_elements(self, n: int) -> list[Elem]:
        return [self.random_element() for _ in range(n)]


def random_element(h: GroupHandle) -> Elem:
    return h.random_element()


# ----------------------------------------------------------------- involutions

def power_to_involution(h: GroupHandle, g: Elem) -> Elem | None:
    n = h.order(g)
    if n % 2:
        return None
    return h.power(g, n // 2)


def find_involution(h: GroupHandle, tries: int = 200, accept: Callable[[Elem], bool] | None = None) -> Elem | None:
    for _ in range(tries):
        t = power_to_involution(h, h.random_element())
        if t is not None and (accept is None or accept(t)):
            return t
    return None


def bray_generators(h: GroupHandle, x: Elem, n: int) -> list[Elem]:
    """Centralizer elements of the involution x by Bray's method.

    For random w put c = [x, w]: odd order 2k+1 gives w c^k; even order 2k
    gives c^k and [x, w^-1]^k.
    """
    out: list[Elem] = []
    while len(out) < n:
        w = h.random_element()
        c = h.comm(x, w)
        try:
            m = h.order(c)
        except OrderUnresolved:
            continue
        if m % 2:
            cand = [h.mul(w, h.power(c, (m - 1) // 2))]
        else:
            c2 = h.comm(x, h.inv(w))
            cand = [h.power(c, m // 2), h.power(c2, m // 2)]
        for y in cand:
            if not h.commute(x, y):
                raise AssertionError("Bray output does not commute with the involution")
            out.append(y)
    return out[:n] if len(out) > n else out


def centralizer_of_involution(h: GroupHandle, x: Elem, n: int = 20) -> GroupHandle:
    gens = [g for g in bray_generators(h, x, n) if not h.is_one(g)]
    if not gens:
        gens = [x]
    return h.subgroup(gens)


def formula_complement(h: GroupHandle, hh: Elem, trials: int, order: int | None = None) -> list[Elem]:
    """Elements a = hh k (hh hh^k)^((|hh|-1)/2) for random k in h."""
    m = order if order is not None else h.order(hh)
    if m % 2 == 0:
        raise EvenOrder(f"element has even order {m}")
    out = []
    for _ in range(trials):
        k = h.random_element()
        a = h.prod(hh, k, h.power(h.mul(hh, h.conj(hh, k)), (m - 1) // 2))
        out.append(a)
    return out


# ------------------------------------------------------------------ subgroups

def derived_group(h: GroupHandle, size: int = 10) -> GroupHandle:
    gens = []
    for _ in range(size):
        a, b = h.random_element(), h.random_element()
        gens.append(h.comm(a, b))
    nontriv = [g for g in gens if not h.is_one(g)]
    return h.subgroup(nontriv or gens[:1])


def normal_closure(h: GroupHandle, sub: GroupHandle | Sequence[Elem], size: int = 10) -> GroupHandle:
    """Random conjugates of elements of sub by elements of h."""
    elems = list(sub.gens) if isinstance(sub, GroupHandle) else list(sub)
    gens = list(elems)
    for k in range(size):
        s = sub.random_element() if isinstance(sub, GroupHandle) and len(sub.gens) > 1 else elems[k % len(elems)]
        gens.append(h.conj(s, h.random_element()))
    return h.subgroup(gens)


def is_abelian_sample(h: GroupHandle) -> bool:
    return all(h.commute(a, b) for a in h.gens for b in h.gens)


def kill_factor(h: GroupHandle, exponent: int, selector: Callable[[Elem], bool] | None = None,
                retries: int = 40, size: int = 10) -> GroupHandle:
    """The factor surviving the power map g -> g^exponent.

    ``exponent`` kills the unwanted factor of a central product; the
    optional selector filters survivors.  The result is the normal closure
    of the survivors.
    """
    survivors: list[Elem] = []
    for _ in range(retries):
        g = h.power(h.random_element(), exponent)
        if h.is_one(g) or la.is_scalar(g.mat):
            continue
        if selector is not None and not selector(g):
            continue
        survivors.append(g)
        if len(survivors) >= 3:
            break
    if not survivors:
        raise FactorNotSeparated("no element survived the power map")
    return normal_closure(h, survivors, size)


def centralizing_part(h: GroupHandle, other: Sequence[Elem], primes: Sequence[int],
                      retries: int = 200, size: int = 10, want: int = 3) -> GroupHandle:
    """Normal closure of prime-power parts of random elements that centralize ``other``."""
    found: list[Elem] = []
    for _ in range(retries):
        g = h.random_element()
        n = h.order(g)
        for r in primes:
            if n % r:
                continue
            rpart = 1
            while n % (rpart * r) == 0:
                rpart *= r
            y = h.power(g, n // rpart)
            if not la.is_scalar(y.mat) and h.centralizes(y, other):
                found.append(y)
                break
        if len(found) >= want:
            break
    if not found:
        raise FactorNotSeparated("no element of the complementary factor was found")
    return normal_closure(h, found, size)


def order_profile(h: GroupHandle, n: int = 50) -> dict[int, int]:
    prof: dict[int, int] = {}
    for _ in range(n):
        m = h.order(h.random_element())
        prof[m] = prof.get(m, 0) + 1
    return prof
