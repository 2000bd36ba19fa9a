"""Lowest two levels versus the local twist omega2 for several kz at B = 1 T."""

import numpy as np

from _common import parser, pyplot, save
from twistscrew import benchmark_problem
from twistscrew.sweeps import SweepSpec, run_sweep, twist_slope, twist_slope_hellmann_feynman

KZ = (0.005, 0.01, 0.02)


def main():
    ap = parser(__doc__)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    w2 = np.round(np.linspace(0.0, 2.0, 21), 12)
    cols, header = [w2], ["omega2"]
    for kz in KZ:
        base = benchmark_problem(kz=kz)
        res = run_sweep(SweepSpec("omega2", w2, base, 2), args.workers)
        cols += [res.energies[:, 0], res.energies[:, 1]]
        header += [f"E0_kz{kz:g}", f"E1_kz{kz:g}"]
        fd = twist_slope(base)
        hf = twist_slope_hellmann_feynman(base)
        print(f"kz={kz:g}: dE0/domega2 at 0+ = {fd:.4f} meV (finite difference), {hf:.4f} meV (Hellmann-Feynman)")
    save(args.out, "levels_vs_twist.csv", header, cols)
    if args.plot:
        plt = pyplot()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for i, kz in enumerate(KZ):
            ax.plot(w2, cols[1 + 2 * i], label=f"E0, kz={kz:g}")
            ax.plot(w2, cols[2 + 2 * i], "--", label=f"E1, kz={kz:g}")
        ax.set_xlabel("omega2")
        ax.set_ylabel("E (meV)")
        ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(args.out / "levels_vs_twist.png", dpi=150)


if __name__ == "__main__":
    main()
