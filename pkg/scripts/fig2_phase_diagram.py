"""Phase diagram of the effective chain in the (g1, g0) plane.

Prints an ASCII map (rows: g0, columns: g1) and the location of the
anisotropic critical lines, the zeros of J_m(4 g1 / omega).
"""

import argparse

import numpy as np
from scipy import optimize

from driven_ising import rwa
from driven_ising.model import ModelParams
from driven_ising.specfun import bessel_j

SYMBOLS = {
    rwa.PhaseLabel.PARAMAGNETIC: ".",
    rwa.PhaseLabel.FERRO_Z: "z",
    rwa.PhaseLabel.FERRO_Y: "y",
    rwa.PhaseLabel.ISING_CRITICAL: "-",
    rwa.PhaseLabel.ANISOTROPIC_CRITICAL: "|",
    rwa.PhaseLabel.OUTSIDE_RWA_VALIDITY: " ",
}


def bessel_zeros(m, upper):
    z = np.linspace(0.01, upper, 2000)
    f = np.array([bessel_j(m, x) for x in z])
    brackets = np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))[0]
    return [optimize.brentq(lambda x: bessel_j(m, x), z[i], z[i + 1], xtol=1e-15) for i in brackets]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--j", type=float, default=0.01)
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--cols", type=int, default=72)
    parser.add_argument("--rows", type=int, default=25)
    args = parser.parse_args()

    g1s = np.linspace(0.0, 3.0, args.cols)
    g0s = np.linspace(args.m / 4 + 0.015, args.m / 4 - 0.015, args.rows)
    for g0 in g0s:
        labels = [rwa.classify_phase(ModelParams(args.j, g0, g1, 1.0, args.m), tol=2e-2) for g1 in g1s]
        print(f"{g0:.4f} " + "".join(SYMBOLS[label] for label in labels))
    print(" " * 7 + "g1/omega from 0 to 3; z = FerroZ, y = FerroY, . = paramagnet")
    zeros = [z / 4 for z in bessel_zeros(args.m, 12.0)]
    print("anisotropic critical lines at g1/omega =", ", ".join(f"{z:.6f}" for z in zeros))


if __name__ == "__main__":
    main()
