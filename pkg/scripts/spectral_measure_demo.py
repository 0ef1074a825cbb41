#!/usr/bin/env python3
"""Locate the lowest eigenvalues of a Robin problem and extract the point
masses of the boundary-data-map spectral measure at each, checking the
rank-one structure of simple eigenvalues along the way.
"""

import argparse
import math

import numpy as np

from bdm.bdmap import measure_point_mass
from bdm.potential import PotentialSpec
from bdm.spectrum import eig_selfadjoint
from bdm.traces import AnglePair, AngleQuad


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--R", type=float, default=math.pi)
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--theta0", type=float, default=0.0)
    ap.add_argument("--thetaR", type=float, default=0.0)
    args = ap.parse_args()

    R = args.R
    V = PotentialSpec.sampled([0.0, 0.25 * R, 0.6 * R, R],
                              [0.2, -0.9, 0.7, 0.0], R)
    pair = AnglePair(args.theta0, args.thetaR)
    q = AngleQuad(pair, pair.robin_primed())
    spec = eig_selfadjoint(V, R, pair, args.n)
    print(f"lowest {args.n} eigenvalues: "
          + ", ".join(f"{lam.real:.8f}" for lam in spec.eigenvalues))
    total = np.zeros((2, 2), dtype=complex)
    for lam in spec.eigenvalues:
        sig = measure_point_mass(V, R, q, lam.real)
        evals = np.linalg.eigvalsh(sig)
        total += sig
        print(f"lambda = {lam.real:>12.6f}  trace jump = {np.trace(sig).real:.6f}"
              f"  eigs = ({evals[0]:.2e}, {evals[1]:.4f})")
    print(f"accumulated measure trace over the window: {np.trace(total).real:.6f}")


if __name__ == "__main__":
    main()
