"""Condition (iv) profile of the near-duplicate pair model as pairs accumulate.

    python3 scripts/jojo_profile.py [--m 2] [--gap 1e-3] [--max-pairs 8]

Prints, per pair count, the block bounds (always 1, 1), the separation
constant of the eigenvalues and the smallest singular value at each
truncation length, followed by the same table for a separated two-class
block union for contrast.
"""

import argparse

from dynsamp import diag_sampling as ds
from dynsamp import disk


def row(label, model):
    b = ds.condition_iii_bounds(model)
    sep = disk.separation_constant(model.points) if len(model.points) > 1 else float("nan")
    N = ds.default_truncations(model)
    prof = ds.condition_iv_profile(model, N)
    verdict = ds.characterize(model, N_list=N).overall.value
    print(f"{label:>10} {b.alpha:7.4f} {b.beta:7.4f} {sep:10.3e} {N[-1]:7d} {prof[-1]:11.3e}  {verdict}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--gap", type=float, default=1e-3)
    p.add_argument("--max-pairs", type=int, default=8)
    args = p.parse_args()

    print(f"{'model':>10} {'alpha':>7} {'beta':>7} {'separation':>10} {'N_max':>7} {'sigma_min':>11}  verdict")
    for k in range(1, args.max_pairs + 1):
        row(f"pairs={k}", ds.make_jojo_f_model(args.m, k, args.gap))
    for count in (2, 4, 8):
        classes = ds.interleaved_geometric_classes(args.m, count)
        row(f"union={count}", ds.make_block_union_model(args.m, classes))
    one = ds.condition_iv_profile(ds.make_jojo_f_model(args.m, 1, args.gap))[-1]
    last = ds.condition_iv_profile(ds.make_jojo_f_model(args.m, args.max_pairs, args.gap))[-1]
    print(f"decay factor 1 -> {args.max_pairs} pairs: {one / last:.3e}")
    print(f"gap schedule gap*2^-k at pair k; last gap {args.gap * 2.0 ** -(args.max_pairs - 1):.3e}")


if __name__ == "__main__":
    main()
