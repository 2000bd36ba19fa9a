"""Mesh refinement of the matrix solver against exactly solvable limits and the Numerov
oracle, the r_min sensitivity and the box/mesh convergence protocol at the benchmark."""

import numpy as np

from _common import parser, save
from twistscrew import benchmark_problem, solve_lowest
from twistscrew.oracles import bessel_dirichlet_eigenvalue, box_eigenvalue, landau_eps, numerov_eigenvalue
from twistscrew.solver import convergence_check, rmin_sensitivity
from twistscrew.units import ELECTRON_GAAS

MESHES = (250, 500, 1000, 2000, 4000, 8000, 16001)


def main():
    args = parser(__doc__).parse_args()
    cases = {
        "box": (benchmark_problem(B=0.0), lambda p: box_eigenvalue(1, p.grid.r_max - p.grid.r_min)),
        "bessel_nu1": (benchmark_problem(omega1=0.0, kz=0.0, B=0.0), lambda p: bessel_dirichlet_eigenvalue(1, 1, 500.0)),
        "landau_nu0": (benchmark_problem(omega1=0.0, kz=0.0, ell=0), lambda p: landau_eps(0, 0, 1.0, ELECTRON_GAAS)),
        "benchmark": (benchmark_problem(), lambda p: numerov_eigenvalue(p.with_params(n_points=16001), 0).eps),
    }
    cols, header = [np.array(MESHES, dtype=float)], ["n_points"]
    for name, (p, ref) in cases.items():
        errs = []
        for n in MESHES:
            q = p.with_params(n_points=n)
            errs.append(abs(solve_lowest(q, 1).eps[0] - ref(q)) / abs(ref(q)))
        cols.append(np.array(errs))
        header.append(f"relerr_{name}")
        orders = np.log2(np.array(errs[:-2]) / np.array(errs[1:-1]))
        print(f"{name:10s} rel err at N=2000 {errs[3]:.2e}; observed orders {np.round(orders, 2).tolist()}")
    save(args.out, "convergence_study.csv", header, cols)

    for w2 in (0.0, 1.0):
        rep = convergence_check(benchmark_problem(omega2=w2), 2)
        print(f"protocol omega2={w2:g}: mesh {rep.rel_change_mesh:.2e}, box {rep.rel_change_box:.2e}, "
              f"{'PASS' if rep.passed else 'FAIL'}")
    for name in ("benchmark", "landau_nu0"):
        p = cases[name][0]
        print(f"r_min sensitivity {name}: " + ", ".join(
            f"{r:g}: {v[0]:.9e}" for r, v in rmin_sensitivity(p, 1).items()))
        if name == "landau_nu0":
            plain = rmin_sensitivity(p, 1, regular_core=False)
            print("  without the regular-core closure: " + ", ".join(f"{r:g}: {v[0]:.9e}" for r, v in plain.items()))


if __name__ == "__main__":
    main()
