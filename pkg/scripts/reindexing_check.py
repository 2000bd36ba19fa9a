"""Screw reindexing E_n(omega1 + 1/kz; ell) = E_n(omega1; ell - 1) across field and twist,
with the half-period control."""

from _common import parser
from twistscrew import benchmark_problem
from twistscrew.sweeps import reindex_check


def main():
    parser(__doc__).parse_args()
    base = benchmark_problem()
    for label, kw in [("field-free", dict(B=0.0, omega2=0.0)), ("B=1 T", {}), ("B=1 T, omega2=1", dict(omega2=1.0)),
                      ("B=-2 T, omega2=-0.5", dict(B=-2.0, omega2=-0.5))]:
        p = base.with_params(**kw)
        full = reindex_check(p, 2)
        half = reindex_check(p, 2, shift=0.5 / p.mode.kz)
        print(f"{label:22s} full period {full:.2e}   half period {half:.2e}")


if __name__ == "__main__":
    main()
