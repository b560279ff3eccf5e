"""Regenerate src/lierecog/_conway.py.

Conway polynomials are computed from their definition: the least monic
primitive polynomial (in the standard alternating-sign order) whose root
norms down compatibly onto every smaller Conway polynomial of a divisor
degree.  Run from the repository root:

    python tools/gen_conway.py > src/lierecog/_conway.py
"""
import itertools
import sys

from sympy import factorint, primerange

LIMIT = 1 << 20


def pmulmod(f, g, m, p):
    # polynomials as coefficient lists, low degree first; m monic
    res = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                res[i + j] = (res[i + j] + a * b) % p
    n = len(m) - 1
    for k in range(len(res) - 1, n - 1, -1):
        c = res[k]
        if c:
            for j in range(n + 1):
                res[k - n + j] = (res[k - n + j] - c * m[j]) % p
    res = res[:n] + [0] * max(0, n - len(res))
    return res


def ppowmod(base, e, m, p):
    n = len(m) - 1
    result = [1] + [0] * (n - 1)
    b = base[:]
    while e:
        if e & 1:
            result = pmulmod(result, b, m, p)
        b = pmulmod(b, b, m, p)
        e >>= 1
    return result


def is_primitive(m, p, n, primes):
    x = [0, 1] + [0] * (n - 2) if n > 1 else [(-m[0]) % p]
    order = p ** n - 1
    one = [1] + [0] * (n - 1)
    if ppowmod(x, order, m, p) != one:
        return False
    return all(ppowmod(x, order // r, m, p) != one for r in primes)


def peval(poly, z, m, p):
    n = len(m) - 1
    acc = [0] * n
    for c in reversed(poly):
        acc = pmulmod(acc, z, m, p)
        acc[0] = (acc[0] + c) % p
    return acc


def candidates(p, n):
    # alternating-sign lexicographic order on (a_{n-1}, ..., a_0)
    for alphas in itertools.product(range(p), repeat=n):
        coeffs = [0] * (n + 1)
        coeffs[n] = 1
        for i, al in enumerate(alphas):
            deg = n - 1 - i
            coeffs[deg] = ((-1) ** (n - deg) * al) % p
        if coeffs[0] == 0:
            continue
        yield coeffs


def conway(p, n, table):
    primes = list(factorint(p ** n - 1))
    divisors = [m for m in range(1, n) if n % m == 0]
    for c in candidates(p, n):
        ok = True
        if n > 1:
            x = [0, 1] + [0] * (n - 2)
            for m in divisors:
                z = ppowmod(x, (p ** n - 1) // (p ** m - 1), c, p)
                if any(peval(table[(p, m)], z, c, p)):
                    ok = False
                    break
        if ok and is_primitive(c, p, n, primes):
            return tuple(c)
    raise RuntimeError((p, n))


def main():
    table = {}
    for p in primerange(2, LIMIT + 1):
        n = 1
        while p ** n <= LIMIT:
            if n == 1 and p > 1024:
                break
            table[(p, n)] = list(conway(p, n, table))
            n += 1
    out = sys.stdout
    out.write('"""Conway polynomials, coefficients listed from the constant term up."""\n\n')
    out.write("# generated by tools/gen_conway.py\n")
    out.write("CONWAY = {\n")
    for (p, n), c in sorted(table.items()):
        if n == 1:
            continue
        out.write(f"    ({p}, {n}): {tuple(c)},\n")
    out.write("}\n")


if __name__ == "__main__":
    main()
