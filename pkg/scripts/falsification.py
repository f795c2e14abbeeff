"""Residual and Dirichlet-solve refinement study on the exponential map.

Prints, per grid, the normalised residual of the exact transformed pressure
under the corrected and the impedance-matched (ren) media, and the error of a
Dirichlet solve with the corrected medium.

    python scripts/falsification.py --levels 4 --omega 2
"""

import argparse
import time

from xform_acoustics.experiment import falsification_experiment
from xform_acoustics.helmholtz import convergence_study, plateau_change


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=33, help="nodes per axis on the coarsest grid")
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--omega", type=float, default=2.0)
    ap.add_argument("--angle", type=float, default=0.6283185307179586)
    args = ap.parse_args()

    t0 = time.perf_counter()
    studies = {}
    for scheme in ("corrected", "ren"):
        exp = falsification_experiment(scheme, n=args.n, omega=args.omega, angle=args.angle)
        studies[scheme] = convergence_study(exp, args.levels)
    exp = falsification_experiment("corrected", n=args.n, omega=args.omega, angle=args.angle)
    studies["solve"] = convergence_study(exp, args.levels, measure="solve")

    print(f"{'nodes':>8} {'h':>10} {'corrected l2':>14} {'ren l2':>14} {'solve max err':>14}")
    for lv in range(args.levels):
        c, r, s = (studies[k].levels[lv] for k in ("corrected", "ren", "solve"))
        print(f"{c.node_count:>8d} {c.grid_spacing:>10.3e} {c.l2:>14.4e} {r.l2:>14.4e} {s.max:>14.4e}")
    print(f"observed order   corrected {studies['corrected'].observed_order:.3f}"
          f"   ren {studies['ren'].observed_order:.3f}   solve {studies['solve'].observed_order:.3f}")
    print(f"ren change between finest levels {plateau_change(studies['ren']):.3%}")
    print(f"ren / corrected at finest level {studies['ren'].values[-1] / studies['corrected'].values[-1]:.1f}")
    print(f"{time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()
