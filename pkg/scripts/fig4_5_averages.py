"""Cycle-averaged energy and magnetization along the drive amplitude.

Sweeps g1/omega, locates the spikes of the second derivative and compares
them with the zeros of J_m(4 g1 / omega), where the effective chain crosses
an anisotropic critical line.
"""

import argparse

import numpy as np
from scipy import optimize

from driven_ising import observables as obs
from driven_ising.cli import ResultTable, write_atomic
from driven_ising.model import ModelParams
from driven_ising.specfun import bessel_j


def spikes(x, d2, count):
    a = np.abs(d2)
    inner = [i for i in range(2, a.size - 2) if a[i] >= a[i - 1] and a[i] >= a[i + 1]]
    inner.sort(key=lambda i: a[i], reverse=True)
    return sorted(x[i] for i in inner[:count])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--j", type=float, default=0.01)
    parser.add_argument("--g0", type=float, default=0.505)
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--points", type=int, default=601)
    parser.add_argument("--prefix", default="fig")
    args = parser.parse_args()

    template = ModelParams(args.j, args.g0, 0.0, 1.0, args.m)
    z = np.linspace(0.01, 12.0, 1200)
    f = np.array([bessel_j(args.m, x) for x in z])
    zeros = [
        optimize.brentq(lambda x: bessel_j(args.m, x), z[i], z[i + 1]) / 4
        for i in np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))[0]
    ]
    print("zeros of J_m(4 g1):", ", ".join(f"{g:.4f}" for g in zeros))

    for number, quantity in ((4, obs.Quantity.AVERAGED_ENERGY_MINUS), (5, obs.Quantity.AVERAGED_MAGNETIZATION_MINUS)):
        record = obs.sweep_with_curvature(template, "g1", 0.0, 3.0, args.points, quantity)
        found = spikes(record.x, record.second_derivative, len(zeros))
        print(f"{quantity.value}: range [{record.values.min():.5f}, {record.values.max():.5f}], "
              f"curvature spikes at " + ", ".join(f"{g:.4f}" for g in found))
        inner = slice(1, -1)
        table = ResultTable(
            ["g1_over_omega", "value", "second_derivative"],
            np.column_stack([record.x[inner], record.values[inner], record.second_derivative[inner]]),
            metadata={"quantity": quantity.value, "g0": args.g0, "j": args.j, "m": args.m},
        )
        write_atomic(f"{args.prefix}{number}_{quantity.value}.csv", table.to_csv())


if __name__ == "__main__":
    main()
