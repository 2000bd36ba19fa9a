"""Density and reduced currents of the ground state at the benchmark for omega2 = 0, 1, 2.

Also prints the near-axis sign law, the field-free zero of j_z and the annular
ring currents on [15, 25] nm.
"""

import numpy as np

from _common import parser, pyplot, save
from twistscrew import benchmark_problem, solve_lowest
from twistscrew.observables import (
    FIG_WINDOW,
    annular_currents,
    axial_zero_radius,
    axis_sign_prediction,
    backflow_fraction,
    current_profile,
)

TWISTS = (0.0, 1.0, 2.0)


def main():
    args = parser(__doc__).parse_args()
    profiles = []
    for w2 in TWISTS:
        s = solve_lowest(benchmark_problem(omega2=w2), 1)
        prof = current_profile(s, 0).window()
        profiles.append(prof)
        rc = annular_currents(s, 0, 20.0, 5.0)
        print(f"omega2={w2:g}: max|j_phi| {np.abs(prof.j_phi).max():.4e}, I_phi {rc.I_phi:.4e}, I_z {rc.I_z:.4e}")
    r = profiles[0].r
    cols = [r] + [p.j_phi for p in profiles] + [p.j_z for p in profiles]
    header = ["r_nm"] + [f"j_phi_w{w:g}" for w in TWISTS] + [f"j_z_w{w:g}" for w in TWISTS]
    save(args.out, "currents_profiles.csv", header, cols)

    p = benchmark_problem()
    print(f"axis sign law at the benchmark: {axis_sign_prediction(p):+d}")
    free = solve_lowest(p.with_params(B=0.0), 1)
    print(f"B=0: closed-form j_z zero at r* = {axial_zero_radius(free.problem):.3f} nm, "
          f"backflow weight {backflow_fraction(free, 0):.3%}")

    if args.plot:
        plt = pyplot()
        fig, (a, b) = plt.subplots(1, 2, figsize=(9, 3.5))
        for w2, prof in zip(TWISTS, profiles):
            a.plot(prof.r, prof.j_phi, label=f"omega2={w2:g}")
            b.plot(prof.r, prof.j_z, label=f"omega2={w2:g}")
        for ax, lab in ((a, "reduced j_phi"), (b, "reduced j_z")):
            ax.set_xlim(*FIG_WINDOW)
            ax.set_xlabel("r (nm)")
            ax.set_ylabel(lab)
        b.axhline(0, color="k", lw=0.5)
        a.legend()
        fig.tight_layout()
        fig.savefig(args.out / "currents_profiles.png", dpi=150)


if __name__ == "__main__":
    main()
