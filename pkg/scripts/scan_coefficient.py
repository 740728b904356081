"""Tabulate n^(2/beta) V_n and summarise its oscillation between 1/9 and f_max.

    python scripts/scan_coefficient.py --n-max 6561 --out scan.csv
"""
import argparse
import csv

from cantorq.asymptotics import f, f_argmax, mp, scan_scaled_errors


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=3**8)
    ap.add_argument("--digits", type=int, default=15)
    ap.add_argument("--out", help="optional CSV path")
    args = ap.parse_args()

    rows = scan_scaled_errors(1, args.n_max)
    lo = min(rows, key=lambda r: r.scaled_error)
    hi = max(rows, key=lambda r: r.scaled_error)
    x_star = f_argmax()
    print(f"inf  {mp.nstr(lo.scaled_error, args.digits)} at n={lo.n}")
    print(f"sup  {mp.nstr(hi.scaled_error, args.digits)} at n={hi.n}")
    print(f"f_max {mp.nstr(f(x_star), args.digits)} at x={mp.nstr(x_star, args.digits)}")
    print(f"gap  {mp.nstr(hi.scaled_error - lo.scaled_error, 6)}")

    # per-level extremes show the oscillation repeating at every scale
    ell = 0
    while 3 ** (ell + 1) <= args.n_max:
        block = [r for r in rows if 3**ell <= r.n < 3 ** (ell + 1)]
        top = max(block, key=lambda r: r.scaled_error)
        print(f"  l={ell:2d}  max {mp.nstr(top.scaled_error, 10)} at n={top.n} (x={mp.nstr(top.x, 6)})")
        ell += 1

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "ell", "regime", "x", "scaled_error"])
            for r in rows:
                w.writerow([r.n, r.ell, r.regime, mp.nstr(r.x, args.digits), mp.nstr(r.scaled_error, args.digits)])


if __name__ == "__main__":
    main()
