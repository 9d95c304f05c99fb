"""Survey how often the greedy sweep uses more classes than the optimum.

    python3 scripts/greedy_vs_bruteforce.py [--seed 2024] [--count 200]

Draws sequences of 2-10 points uniformly in the disk of radius 0.95 and
compares greedy and exhaustive class counts at several radii.
"""

import argparse
from collections import Counter

import numpy as np

from dynsamp import disk


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--radii", type=float, nargs="+", default=[0.05, 0.1, 0.3, 0.6])
    p.add_argument("--max-points", type=int, default=10)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    excess = Counter()
    worst = []
    for _ in range(args.count):
        seq = disk.random_disk_points(rng, int(rng.integers(2, args.max_points + 1)), 0.95)
        for r in args.radii:
            g = disk.sequence_index_greedy(seq, r).index_estimate
            b = disk.sequence_index_bruteforce(seq, r)
            if g > b:
                excess[r] += 1
                worst.append((g - b, r, len(seq), g, b))

    print(f"{'radius':>8} {'cases':>6} {'greedy > optimum':>17}")
    for r in args.radii:
        print(f"{r:8.3f} {args.count:6d} {excess[r]:17d}")
    total = args.count * len(args.radii)
    print(f"total: {sum(excess.values())}/{total}")
    for gap, r, n, g, b in sorted(worst, reverse=True)[:10]:
        print(f"  r={r:g} n={n}: greedy {g}, optimum {b}")


if __name__ == "__main__":
    main()
