"""First-order convergence of the Lie product formula.

    python3 scripts/lie_rate.py

Uses X = [[0,1],[0,0]], Y = X^T and prints the spectral-norm error and the
ratio between successive doublings of m.
"""

import argparse

import numpy as np

from dilwave.verify import lie_convergence_probe


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=1024)
    args = ap.parse_args()
    X = np.array([[0.0, 1.0], [0.0, 0.0]])
    ms = [8]
    while ms[-1] * 2 <= args.m_max:
        ms.append(ms[-1] * 2)
    prev = None
    for m, err in lie_convergence_probe(X, X.T, ms):
        ratio = "" if prev is None else f"   ratio {prev / err:.4f}"
        print(f"m = {m:5d}   error = {err:.6e}{ratio}")
        prev = err
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
