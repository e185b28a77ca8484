"""Compiled Gauss-Seidel sweeps.

Both the membrane solver and the implicit time step reduce to the pointwise
update

    b_i   = (base_i + w * S_i) / D
    u_i  <- max(b_i - p_i, min(b_i + q_i, 0))

with S_i the current neighbor sum; only the constants differ.
"""

import numpy as np
from numba import njit

OK = 0
NONFINITE = 1


@njit(cache=True)
def pgs_sweeps(u, interior, nbrs, base, w, D, p, q, tol_update, max_sweeps):
    """Sweep in place until the sup-norm update drops below ``tol_update``.

    Returns (sweeps done, last sup-norm update, status).
    """
    upd = np.inf
    K = nbrs.shape[1]
    for k in range(max_sweeps):
        upd = 0.0
        for r in range(interior.shape[0]):
            i = interior[r]
            s = 0.0
            for j in range(K):
                s += u[nbrs[r, j]]
            b = (base[i] + w * s) / D
            new = max(b - p[i], min(b + q[i], 0.0))
            if not np.isfinite(new):
                return k + 1, upd, NONFINITE
            d = abs(new - u[i])
            if d > upd:
                upd = d
            u[i] = new
        if upd < tol_update:
            return k + 1, upd, OK
    return max_sweeps, upd, OK
