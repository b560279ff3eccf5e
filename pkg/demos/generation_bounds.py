"""Exact fixed-point bounds against Monte Carlo estimates."""
from lierecog.probe import estimate_probability, fixpoint_table, generation_bound


def main():
    for eps in "+-":
        for q in (4, 8, 16):
            b = generation_bound(eps, q)
            print(f"Omega8{eps}({q}): bound {float(b.value):.4f}  below one: {b.below_one}")
    print()
    for r in fixpoint_table("-", 4).rows:
        print(f"  {r.label:14s} fix {r.fix:6d}  index {r.index}")
    print()
    for scenario, q, n in [("g2-short-pair", 8, 200), ("g2-long-pair", 4, 300)]:
        e = estimate_probability(scenario, q, n, seed=1)
        print(f"{scenario} q={q}: {e.hits}/{e.trials}, 95% interval [{e.low:.4f}, {e.high:.4f}]")


if __name__ == "__main__":
    main()
