"""Long-time parabolic runs against the membrane (elliptic) solution.

    python3 scripts/steady_state.py --T 10 --steps 2500
"""

import argparse
import time

import numpy as np

from twophase.elliptic import solve_elliptic
from twophase.parabolic import StepperConfig, solve_parabolic
from twophase.problem import builtin_case


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, default=10.0)
    ap.add_argument("--steps", type=int, default=2500)
    ap.add_argument("--nodes", type=int, default=201)
    ap.add_argument("--cases", nargs="+", default=["fig1", "fig2", "fig3"])
    args = ap.parse_args(argv)

    print(f"{'case':6} {'sup |u(T) - u_ell|':>20} {'|u_t|_inf at T':>16} {'seconds':>8}")
    for name in args.cases:
        start = time.perf_counter()
        prob = builtin_case(name, nodes=args.nodes, steps=args.steps, T=args.T).problem
        trace = solve_parabolic(prob, StepperConfig(mode="implicit"))
        u_ell, rep = solve_elliptic(builtin_case(name, nodes=args.nodes, elliptic=True).problem)
        gap = float(np.max(np.abs(trace.final - u_ell)))
        flag = "" if rep.converged else "  (elliptic solve did not converge)"
        print(f"{name:6} {gap:20.3e} {trace.ut_sup[-1]:16.3e} "
              f"{time.perf_counter() - start:8.1f}{flag}")


if __name__ == "__main__":
    main()
