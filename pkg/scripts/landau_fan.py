"""E0 and E1 versus B in [-2, 2] T for omega2 = 0, 0.5, 1 at the benchmark, with the
measured odd-in-B part and the strong-field closed form for comparison."""

import numpy as np

from _common import parser, pyplot, save
from twistscrew import benchmark_problem
from twistscrew.oracles import landau_eps
from twistscrew.units import ELECTRON_GAAS, kinetic_coefficient
from twistscrew.sweeps import landau_fan

TWISTS = (0.0, 0.5, 1.0)


def main():
    ap = parser(__doc__)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    B = np.round(np.linspace(-2.0, 2.0, 41), 12)
    base = benchmark_problem()
    fan = landau_fan(base, B, TWISTS, 2, args.workers)
    cols, header = [B], ["B_tesla"]
    for j, w2 in enumerate(TWISTS):
        cols += [fan.energies[j, :, 0], fan.energies[j, :, 1]]
        header += [f"E0_w{w2:g}", f"E1_w{w2:g}"]
    x = base.mode.ell - base.fields.phi - base.mode.kz * base.geometry.omega1
    C = kinetic_coefficient(ELECTRON_GAAS)
    closed = [C * (landau_eps(0, x, b, ELECTRON_GAAS) + base.mode.kz**2) if b else np.nan for b in B]
    cols.append(np.array(closed))
    header.append("E0_closed_form_w0")
    save(args.out, "landau_fan.csv", header, cols)
    odd = fan.odd_part()
    for j, w2 in enumerate(TWISTS):
        print(f"omega2={w2:g}: max |odd part of E0| = {np.nanmax(np.abs(odd[j, :, 0])):.4f} meV")
    if args.plot:
        plt = pyplot()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for j, w2 in enumerate(TWISTS):
            ax.plot(B, fan.energies[j, :, 0], label=f"E0, omega2={w2:g}")
            ax.plot(B, fan.energies[j, :, 1], "--", label=f"E1, omega2={w2:g}")
        ax.plot(B, closed, "k:", lw=1, label="closed form (omega2=0)")
        ax.set_xlabel("B (T)")
        ax.set_ylabel("E (meV)")
        ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(args.out / "landau_fan.png", dpi=150)


if __name__ == "__main__":
    main()
