"""Arithmetic in GF(p^a).

Elements are plain integers in ``[0, q)``: the base-p digits of the integer,
little-endian, are the coordinates in the power basis of the modulus root.
Every arithmetic method accepts either Python ints or numpy integer arrays
and works elementwise, so matrices can be processed without Python loops.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np
from sympy import factorint, isprime

from ._conway import CONWAY
from .errors import FieldTooLarge, NotPrime, ZeroElement

DLOG_BUDGET = 1 << 24
# exp/log tables are built up to this size; larger fields multiply digitwise
TABLE_LIMIT = 1 << 20
ADD_TABLE_LIMIT = 1 << 10


def _poly_mulmod(f: list[int], g: list[int], m: Sequence[int], p: int) -> list[int]:
    res = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                res[i + j] = (res[i + j] + x * y) % p
    n = len(m) - 1
    for k in range(len(res) - 1, n - 1, -1):
        c = res[k]
        if c:
            for j in range(n + 1):
                res[k - n + j] = (res[k - n + j] - c * m[j]) % p
    res = res[:n]
    return res + [0] * (n - len(res))


def _least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    primes = list(factorint(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in primes):
            return g
    raise AssertionError("no primitive root")


def _is_primitive_poly(m: Sequence[int], p: int, a: int) -> bool:
    order = p ** a - 1
    x = [0, 1] + [0] * (a - 2)
    one = [1] + [0] * (a - 1)

    def pw(e: int) -> list[int]:
        r, b = one[:], x[:]
        while e:
            if e & 1:
                r = _poly_mulmod(r, b, m, p)
            b = _poly_mulmod(b, b, m, p)
            e >>= 1
        return r

    if pw(order) != one:
        return False
    return all(pw(order // r) != one for r in factorint(order))


def _least_primitive_poly(p: int, a: int) -> tuple[int, ...]:
    # lexicographic on (c_{a-1}, ..., c_0) as integers
    for n in range(p ** a):
        coeffs = [(n // p ** (a - 1 - i)) % p for i in range(a)]
        m = list(reversed(coeffs)) + [1]
        if m[0] == 0:
            continue
        if _is_primitive_poly(m, p, a):
            return tuple(m)
    raise AssertionError("no primitive polynomial")


def parse_field_spec(spec: str | int) -> tuple[int, int]:
    """Parse ``"p^a"`` (or a prime power written as an integer) into ``(p, a)``."""
    if isinstance(spec, int) or "^" not in str(spec):
        q = int(spec)
        fac = factorint(q)
        if len(fac) != 1:
            raise NotPrime(f"{q} is not a prime power")
        (p, a), = fac.items()
        return int(p), int(a)
    p, a = str(spec).split("^")
    return int(p), int(a)


class Field:
    """GF(p^a) with modulus, primitive element ``omega`` and power basis.

    Use :func:`field_create` (cached) rather than instantiating directly.
    """

    def __init__(self, p: int, a: int = 1):
        if not isprime(p):
            raise NotPrime(f"{p} is not prime")
        if a < 1:
            raise ValueError("extension degree must be positive")
        q = p ** a
        if q > DLOG_BUDGET:
            raise FieldTooLarge(f"GF({p}^{a}) exceeds the discrete-log budget {DLOG_BUDGET}")
        self.p, self.a, self.q = p, a, q
        if a == 1:
            w = _least_primitive_root(p)
            self.modulus: tuple[int, ...] = ((-w) % p, 1)
            self.omega = w
        else:
            self.modulus = tuple(CONWAY.get((p, a)) or _least_primitive_poly(p, a))
            self.omega = p  # the root x, i.e. digit vector (0, 1, 0, ...)
        self.basis = tuple(p ** i for i in range(a)) if a > 1 else (1,)
        self._pw = np.array([p ** i for i in range(a)], dtype=np.int64)
        # multiplication-by-omega^k as a companion-style digit map
        self._red = self._reduction_rows()
        self._exp = self._log = None
        self._addt = None
        if q <= TABLE_LIMIT:
            self._build_tables()

    # ----- construction helpers
    def _reduction_rows(self) -> np.ndarray:
        """Digits of x^k mod modulus for k = 0 .. 2a-2."""
        a, p = self.a, self.p
        rows = np.zeros((max(2 * a - 1, 1), a), dtype=np.int64)
        cur = [1] + [0] * (a - 1)
        xpoly = [0, 1] + [0] * (a - 2) if a > 1 else [(-self.modulus[0]) % p]
        for k in range(rows.shape[0]):
            rows[k] = cur
            cur = _poly_mulmod(cur, xpoly, self.modulus, p) if a > 1 else [(cur[0] * xpoly[0]) % p]
        return rows

    def _build_tables(self) -> None:
        q, p, a = self.q, self.p, self.a
        n = q - 1
        exp = np.zeros(4 * n + 1, dtype=np.int64)
        if a == 1:
            # powers of omega mod p, built in blocks
            block = min(n, 1 << 12)
            base = np.ones(block, dtype=np.int64)
            for k in range(1, block):
                base[k] = base[k - 1] * self.omega % p
            step = pow(self.omega, block, p)
            mult = 1
            for start in range(0, n, block):
                stop = min(start + block, n)
                exp[start:stop] = base[: stop - start] * mult % p
                mult = mult * step % p
        else:
            block = min(n, 1 << 12)
            digs = np.zeros((block, a), dtype=np.int64)
            cur = [1] + [0] * (a - 1)
            x = [0, 1] + [0] * (a - 2)
            for k in range(block):
                digs[k] = cur
                cur = _poly_mulmod(cur, x, self.modulus, p)
            step = cur
            mult = [1] + [0] * (a - 1)
            for start in range(0, n, block):
                stop = min(start + block, n)
                mm = self._mul_matrix_digits(mult)
                part = digs[: stop - start] @ mm % p
                exp[start:stop] = part @ self._pw
                mult = _poly_mulmod(mult, step, self.modulus, p)
        exp[n: 2 * n] = exp[:n]
        self._exp = exp
        log = np.zeros(q, dtype=np.int64)
        log[exp[:n]] = np.arange(n)
        log[0] = 2 * n
        self._log = log
        if p > 2 and a > 1 and q <= ADD_TABLE_LIMIT:
            x = np.arange(q)
            self._addt = self._add_digits(x[:, None], x[None, :])

    def _mul_matrix_digits(self, c: Sequence[int]) -> np.ndarray:
        """Row k = digits of (omega^k * c)."""
        a, p = self.a, self.p
        mm = np.zeros((a, a), dtype=np.int64)
        cur = list(c)
        x = [0, 1] + [0] * (a - 2)
        for k in range(a):
            mm[k] = cur
            cur = _poly_mulmod(cur, x, self.modulus, p)
        return mm

    # ----- digit conversions
    def digits(self, x) -> np.ndarray:
        """Coefficient vectors (last axis length a) of encoded elements."""
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self._pw) % self.p

    def from_digits(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=np.int64) % self.p
        return d @ self._pw

    def coeffs(self, x: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.digits(x))

    def elem(self, coeffs: Sequence[int]) -> int:
        return int(self.from_digits(np.asarray(coeffs)))

    # ----- arithmetic
    def _add_digits(self, x, y, sign: int = 1):
        dx, dy = self.digits(x), self.digits(y)
        return self.from_digits(dx + sign * dy)

    def add(self, x, y):
        if self.a == 1:
            return (np.asarray(x) + y) % self.p if isinstance(x, np.ndarray) or isinstance(y, np.ndarray) else (x + y) % self.p
        if self.p == 2:
            return np.bitwise_xor(x, y) if isinstance(x, np.ndarray) or isinstance(y, np.ndarray) else x ^ y
        if self._addt is not None:
            r = self._addt[x, y]
        else:
            r = self._add_digits(x, y)
        return r if isinstance(r, np.ndarray) and r.ndim else int(r)

    def neg(self, x):
        if self.a == 1:
            return (-np.asarray(x)) % self.p if isinstance(x, np.ndarray) else (-x) % self.p
        if self.p == 2:
            return x
        r = self.from_digits(-self.digits(x))
        return r if isinstance(x, np.ndarray) else int(r)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.a == 1:
            if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
                return (np.asarray(x, dtype=np.int64) * y) % self.p
            return (x * y) % self.p
        if self._exp is not None:
            r = self._exp[self._log[x] + self._log[y]]
            return r if isinstance(r, np.ndarray) and r.ndim else int(r)
        return self._mul_digits(x, y)

    def _mul_digits(self, x, y):
        a, p = self.a, self.p
        dx, dy = self.digits(x), self.digits(y)
        dx, dy = np.broadcast_arrays(dx, dy)
        prod = np.zeros(dx.shape[:-1] + (2 * a - 1,), dtype=np.int64)
        for i in range(a):
            prod[..., i: i + a] += dx[..., i: i + 1] * dy
        prod %= p
        r = self.from_digits(prod @ self._red % p)
        return r if isinstance(x, np.ndarray) or isinstance(y, np.ndarray) else int(r)

    def pow(self, x, e: int):
        if isinstance(x, np.ndarray):
            if self._exp is not None:
                n = self.q - 1
                if e == 0:
                    return np.ones_like(x)
                lg = self._log[x]
                out = self._exp[(lg * (e % n)) % n] if e % n else np.ones_like(x)
                return np.where(x == 0, 0, out)
            result = np.ones_like(x)
            base = x.copy()
            if e < 0:
                base = self.inv(base)
                e = -e
            while e:
                if e & 1:
                    result = self.mul(result, base)
                base = self.mul(base, base)
                e >>= 1
            return result
        x = int(x)
        if x == 0:
            if e < 0:
                raise ZeroElement("zero has no inverse")
            return 0 if e else 1
        if self._exp is not None:
            n = self.q - 1
            return int(self._exp[(int(self._log[x]) * e) % n])
        if e < 0:
            x = self.inv(x)
            e = -e
        result, base = 1, x
        e %= self.q - 1
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, x):
        if isinstance(x, np.ndarray):
            if np.any(x == 0):
                raise ZeroElement("zero has no inverse")
            if self._exp is not None:
                n = self.q - 1
                return self._exp[(n - self._log[x]) % n]
            return self.pow(x, self.q - 2)
        if x == 0:
            raise ZeroElement("zero has no inverse")
        return self.pow(x, self.q - 2)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> GF(q)."""
        return int(n) % self.p

    def power_of_omega(self, k: int) -> int:
        return self.pow(self.omega, k)

    def frobenius(self, x, i: int = 1):
        """x^(p^i)."""
        e = pow(self.p, i % self.a, self.q - 1) if self.q > 2 else 1
        if i % self.a == 0:
            return x
        return self.pow(x, e)

    # ----- misc
    def elements(self) -> range:
        return range(self.q)

    def subfield_elements(self, b: int) -> list[int]:
        """Elements of the subfield GF(p^b)."""
        if self.a % b:
            raise ValueError("not a subfield degree")
        qb = self.p ** b
        out = [0]
        gen = self.pow(self.omega, (self.q - 1) // (qb - 1))
        x = 1
        for _ in range(qb - 1):
            out.append(x)
            x = self.mul(x, gen)
        return sorted(out)

    def in_subfield(self, x: int, b: int) -> bool:
        return self.pow(x, self.p ** b) == x

    def sqrt(self, x: int) -> int | None:
        """Some square root of x, or None."""
        if x == 0:
            return 0
        if self.p == 2:
            return self.pow(x, self.q // 2)
        k = dlog(self, x)
        if k % 2:
            return None
        return self.pow(self.omega, k // 2)

    def random(self, rng: np.random.Generator, size=None, nonzero: bool = False):
        lo = 1 if nonzero else 0
        if size is None:
            return int(rng.integers(lo, self.q))
        return rng.integers(lo, self.q, size=size, dtype=np.int64)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.a})" if self.a > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (field_create, (self.p, self.a))


@lru_cache(maxsize=None)
def field_create(p: int, a: int = 1) -> Field:
    """Cached field constructor; the same (p, a) always yields the same object."""
    return Field(p, a)


def field_of_order(q: int) -> Field:
    p, a = parse_field_spec(q)
    return field_create(p, a)


def dlog(f: Field, x: int) -> int:
    """Discrete logarithm to base ``f.omega`` by baby-step giant-step."""
    x = int(x)
    if x == 0:
        raise ZeroElement("log of zero")
    n = f.q - 1
    if n == 1:
        return 0
    m = math.isqrt(n - 1) + 1
    baby = {}
    cur = 1
    for j in range(m):
        baby.setdefault(cur, j)
        cur = f.mul(cur, f.omega)
    giant = f.inv(f.pow(f.omega, m))
    y = x
    for i in range(m + 1):
        j = baby.get(y)
        if j is not None:
            return (i * m + j) % n
        y = f.mul(y, giant)
    raise AssertionError("omega is not primitive")


def frobenius(f: Field, x: int, i: int) -> int:
    return f.frobenius(x, i)
