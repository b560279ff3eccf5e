"""Univariate polynomials over GF(q) as coefficient arrays, constant term first.

Only what the order computations and the module chopper need: products,
division, gcd, modular powers and a Cantor--Zassenhaus factorizer.
"""
from __future__ import annotations

import numpy as np

from .gf import Field

Poly = np.ndarray


def trim(f: Poly) -> Poly:
    f = np.asarray(f, dtype=np.int64)
    nz = np.nonzero(f)[0]
    return f[: nz[-1] + 1].copy() if len(nz) else np.zeros(0, dtype=np.int64)


def deg(f: Poly) -> int:
    return len(trim(f)) - 1


def monic(F: Field, f: Poly) -> Poly:
    f = trim(f)
    if len(f) == 0:
        return f
    return F.mul(f, F.inv(int(f[-1])))


def add(F: Field, f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    a = np.zeros(n, dtype=np.int64)
    b = np.zeros(n, dtype=np.int64)
    a[: len(f)] = f
    b[: len(g)] = g
    return trim(F.add(a, b))


def sub(F: Field, f: Poly, g: Poly) -> Poly:
    return add(F, f, F.neg(np.asarray(g, dtype=np.int64)))


def mul(F: Field, f: Poly, g: Poly) -> Poly:
    f, g = trim(f), trim(g)
    if len(f) == 0 or len(g) == 0:
        return np.zeros(0, dtype=np.int64)
    p = F.p
    if F.a == 1:
        if (p - 1) ** 2 * min(len(f), len(g)) < 2 ** 62:
            return trim(np.convolve(f, g) % p)
        return trim(np.array([int(v) % p for v in np.convolve(f.astype(object), g.astype(object))], dtype=np.int64))
    a = F.a
    df, dg = F.digits(f), F.digits(g)
    n = len(f) + len(g) - 1
    acc = np.zeros((n, 2 * a - 1), dtype=np.int64)
    for i in range(a):
        for j in range(a):
            acc[:, i + j] += np.convolve(df[:, i], dg[:, j])
    acc %= p
    return trim(F.from_digits(acc @ F._red % p))


def scale(F: Field, f: Poly, c: int) -> Poly:
    return trim(F.mul(np.asarray(f, dtype=np.int64), c))


def divmod_(F: Field, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    f, g = trim(f), trim(g)
    if len(g) == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(f) < len(g):
        return np.zeros(0, dtype=np.int64), f
    r = f.copy()
    dg = len(g) - 1
    lead_inv = F.inv(int(g[-1]))
    gm = F.mul(g, lead_inv)
    qt = np.zeros(len(f) - dg, dtype=np.int64)
    for k in range(len(f) - 1, dg - 1, -1):
        c = int(r[k])
        if c:
            qt[k - dg] = c
            r[k - dg: k + 1] = F.sub(r[k - dg: k + 1], F.mul(gm, c))
    qt = F.mul(qt, lead_inv)
    return trim(qt), trim(r[:dg])


def mod(F: Field, f: Poly, g: Poly) -> Poly:
    return divmod_(F, f, g)[1]


def gcd(F: Field, f: Poly, g: Poly) -> Poly:
    f, g = trim(f), trim(g)
    while len(g):
        f, g = g, mod(F, f, g)
    return monic(F, f)


def powmod(F: Field, f: Poly, e: int, m: Poly) -> Poly:
    result = np.array([1], dtype=np.int64)
    base = mod(F, f, m)
    while e:
        if e & 1:
            result = mod(F, mul(F, result, base), m)
        e >>= 1
        if e:
            base = mod(F, mul(F, base, base), m)
    return mod(F, result, m)


def derivative(F: Field, f: Poly) -> Poly:
    f = trim(f)
    if len(f) <= 1:
        return np.zeros(0, dtype=np.int64)
    ks = np.array([F.from_int(k) for k in range(1, len(f))], dtype=np.int64)
    return trim(F.mul(f[1:], ks))


def x_poly() -> Poly:
    return np.array([0, 1], dtype=np.int64)


def evaluate(F: Field, f: Poly, x: int) -> int:
    acc = 0
    for c in trim(f)[::-1]:
        acc = F.add(F.mul(acc, x), int(c))
    return int(acc)


def pth_root(F: Field, f: Poly) -> Poly:
    """g with g^p = f, assuming f is a polynomial in x^p."""
    f = trim(f)
    coeffs = f[:: F.p]
    # inverse Frobenius on coefficients
    return trim(np.array([F.frobenius(int(c), F.a - 1) for c in coeffs], dtype=np.int64))


def squarefree_decomposition(F: Field, f: Poly) -> list[tuple[Poly, int]]:
    """List of (squarefree factor, multiplicity) with f = prod g^m (f monic)."""
    f = monic(F, f)
    out: list[tuple[Poly, int]] = []
    if deg(f) <= 0:
        return out
    p = F.p

    def rec(f: Poly, mult: int) -> None:
        if deg(f) <= 0:
            return
        df = derivative(F, f)
        if len(df) == 0:
            rec(pth_root(F, f), mult * p)
            return
        c = gcd(F, f, df)
        w = divmod_(F, f, c)[0]
        i = 1
        while deg(w) > 0:
            y = gcd(F, w, c)
            z = divmod_(F, w, y)[0]
            if deg(z) > 0:
                out.append((monic(F, z), i * mult))
            i += 1
            w = y
            c = divmod_(F, c, y)[0]
        if deg(c) > 0:
            rec(pth_root(F, c), mult * p)

    rec(f, 1)
    return out


def distinct_degree(F: Field, f: Poly, max_degree: int | None = None) -> list[tuple[Poly, int]]:
    """For squarefree monic f: list of (product of all degree-k irreducible factors, k)."""
    f = monic(F, f)
    out = []
    h = x_poly()
    x = x_poly()
    k = 0
    while deg(f) >= 2 * (k + 1):
        k += 1
        if max_degree is not None and k > max_degree:
            return out
        h = powmod(F, h, F.q, f)
        g = gcd(F, f, sub(F, h, x))
        if deg(g) > 0:
            out.append((g, k))
            f = divmod_(F, f, g)[0]
            h = mod(F, h, f)
    if deg(f) > 0 and (max_degree is None or deg(f) <= max_degree):
        out.append((f, deg(f)))
    return out


def equal_degree(F: Field, f: Poly, k: int, rng: np.random.Generator) -> list[Poly]:
    """Split a squarefree product of degree-k irreducibles (Cantor--Zassenhaus)."""
    f = monic(F, f)
    n = deg(f)
    if n == k:
        return [f]
    while True:
        a = trim(F.random(rng, size=n))
        if deg(a) <= 0:
            continue
        if F.p == 2:
            # absolute trace map to GF(2)
            t = a.copy()
            cur = a
            for _ in range(F.a * k - 1):
                cur = mod(F, mul(F, cur, cur), f)
                t = add(F, t, cur)
            g = gcd(F, f, t)
        else:
            e = (F.q ** k - 1) // 2
            b = powmod(F, a, e, f)
            g = gcd(F, f, sub(F, b, np.array([1], dtype=np.int64)))
        if 0 < deg(g) < n:
            h = divmod_(F, f, g)[0]
            return equal_degree(F, g, k, rng) + equal_degree(F, h, k, rng)


def factor(F: Field, f: Poly, rng: np.random.Generator | None = None,
           max_degree: int | None = None) -> list[tuple[Poly, int]]:
    """Irreducible factorization as (monic factor, multiplicity) pairs.

    With ``max_degree`` only factors up to that degree are returned.
    """
    rng = rng or np.random.default_rng(0)
    out = []
    for sq, m in squarefree_decomposition(F, f):
        for prod, k in distinct_degree(F, sq, max_degree):
            for g in equal_degree(F, prod, k, rng):
                out.append((g, m))
    out.sort(key=lambda t: (deg(t[0]), tuple(t[0])))
    return out


def companion_eval(F: Field, f: Poly, A: np.ndarray, matmul) -> np.ndarray:
    """f(A) by Horner's rule with the supplied field matrix product."""
    f = trim(f)
    d = A.shape[0]
    res = np.zeros((d, d), dtype=np.int64)
    for c in f[::-1]:
        res = matmul(res, A)
        if c:
            res[np.arange(d), np.arange(d)] = F.add(res[np.arange(d), np.arange(d)], int(c))
    return res
