"""Hide G2(5) behind a random change of basis, then recover standard generators."""
import numpy as np

from lierecog import random_conjugate, recognize, standard_copy
from lierecog.randgrp import GroupHandle, evaluate_slp


def main():
    G = standard_copy("G2", 5)
    C = random_conjugate(G, seed=3)
    print(f"input: {len(C.gens)} matrices of degree {C.d} over GF({G.F.q})")
    res = recognize(GroupHandle(G.F, C.gens, seed=3), "G2", 5, seed=3)
    for line in res.log:
        print(" ", line)
    print(f"relations checked: {res.report.total}, all hold: {res.report.passed}")
    print(f"high weight of the module: {res.high_weight}")
    gens = res.generators
    slot, x = next(iter(sorted(gens.slots.items())))
    prog = gens.handle.slp(x)
    same = np.array_equal(evaluate_slp(G.F, prog, C.gens), x.mat)
    print(f"slot {slot}: SLP of length {len(prog)} reproduces the matrix: {same}")


if __name__ == "__main__":
    main()
