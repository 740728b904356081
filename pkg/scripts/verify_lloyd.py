"""Seed sweep of the Lloyd oracle against the constructed codebooks.

For each n and seed, reports whether the best of ``--restarts`` runs reaches the
closed-form error, and whether its codebook matches a constructed set literally
or only after mirroring some 2-point copies.

    python scripts/verify_lloyd.py --seeds 10
"""
import argparse

from cantorq.distortion import vn_exact
from cantorq.lloyd import LloydConfig, best_of_restarts, gap_correction
from cantorq.quantizers import family_deviation


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-min", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=9)
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--restarts", type=int, default=64)
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()

    corr = float(gap_correction(args.depth))
    print(f"{'n':>3} {'optimal':>8} {'literal':>8} {'mirrored':>9}   (counts over {args.seeds} seeds)")
    for n in range(args.n_min, args.n_max + 1):
        target = float(vn_exact(n))
        hit = literal = mirrored = 0
        for seed in range(args.seeds):
            r = best_of_restarts(n, args.depth, LloydConfig(restarts=args.restarts, rng_seed=seed))
            if abs(r.discrete_distortion + corr - target) < 1e-9:
                hit += 1
                if family_deviation(r.codebook, n) < 1e-6:
                    literal += 1
                elif family_deviation(r.codebook, n, allow_reflection=True) < 1e-6:
                    mirrored += 1
        print(f"{n:>3} {hit:>8} {literal:>8} {mirrored:>9}")


if __name__ == "__main__":
    main()
