"""Aharonov-Bohm envelopes min_ell E_{n,ell}(phi) over phi in [0, 2] for omega1 = 0, 50, 100 nm
(omega2 = 0, B = 0)."""

import numpy as np

from _common import parser, pyplot, save
from twistscrew import benchmark_problem
from twistscrew.sweeps import ab_envelope, envelope_minima, envelope_period_deviation, minimizer_steps

SCREWS = (0.0, 50.0, 100.0)


def main():
    ap = parser(__doc__)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    phi = np.round(np.linspace(0.0, 2.0, 101), 12)
    cols, header, envs = [phi], ["phi"], []
    for w1 in SCREWS:
        env = ab_envelope(benchmark_problem(omega1=w1, B=0.0, omega2=0.0), phi, n_states=2, workers=args.workers)
        envs.append(env)
        cols += [env.env_energies[0], env.minimizer_ell[0], env.env_energies[1], env.minimizer_ell[1]]
        header += [f"E0_w{w1:g}", f"ell0_w{w1:g}", f"E1_w{w1:g}", f"ell1_w{w1:g}"]
        steps = [(round(float(0.5 * (a + b)), 3), d) for a, b, d in minimizer_steps(env)]
        print(f"omega1={w1:g}: window {env.ell_window}, minima at {envelope_minima(env).tolist()}, "
              f"relabelings {steps}, period deviation {envelope_period_deviation(env):.1e}")
    save(args.out, "ab_envelope.csv", header, cols)
    if args.plot:
        plt = pyplot()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        for w1, env in zip(SCREWS, envs):
            ax.plot(phi, env.env_energies[0], label=f"omega1={w1:g} nm")
        ax.set_xlabel("phi")
        ax.set_ylabel("E0 envelope (meV)")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.out / "ab_envelope.png", dpi=150)


if __name__ == "__main__":
    main()
