"""Truncated mass growth for the three non-admissible mechanisms.

    python3 scripts/divergence_tables.py --out-dir out/

For each candidate (Delta = 1 on every orbit by construction) prints the
mass inside radius R, the fitted log-log slope and R^2.
"""

import argparse
from pathlib import Path

from dilwave.io import growth_table_rows, write_csv
from dilwave.verify import divergence_probe

KINDS = ("trace-zero", "rotation", "shear")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radii", type=float, nargs="+", default=[1, 2, 4, 8, 16, 32, 64])
    ap.add_argument("--out-dir", type=Path)
    args = ap.parse_args()
    for kind in KINDS:
        g = divergence_probe(kind, args.radii)
        print(f"{g.kind}: slope {g.fitted_exponent:.4f}, R^2 {g.fit_quality:.6f}, "
              f"orbit Delta {', '.join(f'{d:.12f}' for d in g.orbit_deltas)}")
        for R, m in zip(g.radii, g.masses):
            print(f"  R = {R:6g}   mass = {m:.10g}")
        if args.out_dir:
            args.out_dir.mkdir(parents=True, exist_ok=True)
            write_csv(*growth_table_rows(g), path=args.out_dir / f"growth_{kind}.csv")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
