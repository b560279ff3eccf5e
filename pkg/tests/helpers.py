import numpy as np

from lierecog import linalg as la
from lierecog.chevalley import random_invertible
from lierecog.gf import field_create, parse_field_spec
from lierecog.oracles import elementary, subfield_basis


def natural(n, q, big=None, conj=False, seed=0):
    """Elementary generators of SL_n(q), over GF(big) and in a random basis if asked."""
    pb, ab = parse_field_spec(big or q)
    F = field_create(pb, ab)
    B = subfield_basis(F, q)
    gens = [elementary(F, n, i, i + 1, c) for i in range(n - 1) for c in B]
    gens += [elementary(F, n, i + 1, i, c) for i in range(n - 1) for c in B]
    if conj:
        T = random_invertible(F, n, np.random.default_rng(seed))
        Ti = la.inverse(F, T)
        gens = [la.matmul(F, la.matmul(F, Ti, g), T) for g in gens]
    return F, gens


def group_order(F, gens, limit):
    """|<gens>| by breadth-first closure, None past ``limit``."""
    one = la.identity(F, gens[0].shape[0])
    seen = {one.tobytes()}
    frontier = [one]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = la.matmul(F, a, g)
                if b.tobytes() not in seen:
                    seen.add(b.tobytes())
                    nxt.append(b)
                    if len(seen) > limit:
                        return None
        frontier = nxt
    return len(seen)
