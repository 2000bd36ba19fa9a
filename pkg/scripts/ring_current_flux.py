"""Annular ring currents I_phi, I_z of the ground branch versus flux over two flux quanta."""

import numpy as np

from _common import parser, pyplot, save
from twistscrew import benchmark_problem
from twistscrew.sweeps import ring_current_flux_scan


def main():
    ap = parser(__doc__)
    ap.add_argument("--r0", type=float, default=20.0)
    ap.add_argument("--delta", type=float, default=5.0)
    ap.add_argument("--B", type=float, default=1.0)
    args = ap.parse_args()
    phi = np.round(np.linspace(0.0, 2.0, 101), 12)
    scan = ring_current_flux_scan(benchmark_problem(B=args.B), phi, args.r0, args.delta)
    save(args.out, "ring_current_flux.csv", ["phi", "ell", "I_phi", "I_z"], [phi, scan.ell, scan.I_phi, scan.I_z])
    dev = np.max(np.abs(scan.I_phi[50:] - scan.I_phi[:51]) / np.abs(scan.I_phi[:51]))
    print(f"I_phi period-1 deviation over [0, 2]: {dev:.2e}")
    if args.plot:
        plt = pyplot()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(phi, scan.I_phi, label="I_phi")
        ax.set_xlabel("phi")
        ax.set_ylabel("reduced ring current")
        fig.tight_layout()
        fig.savefig(args.out / "ring_current_flux.png", dpi=150)


if __name__ == "__main__":
    main()
