"""Observed orders for the heat reduction and the consistency probes.

    python3 scripts/convergence_study.py
"""

import argparse

from twophase import analysis


def show(title, est, step_name):
    print(title)
    steps = est.h if step_name == "dx" else est.dt
    for h, e in zip(steps, est.errors):
        print(f"    {step_name} = {h:.4e}   error = {e:.4e}")
    if est.exact:
        print("    exact to roundoff")
    else:
        print(f"    slope {est.slope:.4f} (fit misfit {est.fit_residual:.2e})")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, nargs="+", default=[11, 21, 41, 81, 161])
    ap.add_argument("--steps", type=int, nargs="+", default=[10, 20, 40, 80, 160])
    args = ap.parse_args(argv)

    show("heat reduction, explicit (c = 0.4)",
         analysis.heat_convergence("explicit", args.levels), "dx")
    show("heat reduction, implicit (101 nodes)",
         analysis.heat_convergence("implicit", args.steps), "dt")
    show("membrane residual, sin(pi x) at x = 0.5",
         analysis.consistency_order(analysis.PROBES["sin"], "elliptic", 0.5, args.levels), "dx")
    show("parabolic residual, exp(-t) sin(pi x) at (0.5, 0.5)",
         analysis.consistency_order(analysis.PROBES["exp_sin"], "parabolic", 0.5,
                                    args.levels), "dt")
    show("parabolic residual, exp(t) sin(pi x) sin(pi y) at (0.5, 0.5)",
         analysis.consistency_order(analysis.PROBES["exp_sin2d"], "parabolic", (0.5, 0.5),
                                    [21, 41, 81, 161]), "dt")
    show("membrane residual, x^2 at x = 0.5",
         analysis.consistency_order(analysis.PROBES["quadratic"], "elliptic", 0.5,
                                    args.levels), "dx")


if __name__ == "__main__":
    main()
