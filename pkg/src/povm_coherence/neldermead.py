"""Lockstep Nelder-Mead: many independent simplex searches advanced together.

Each iteration gathers the trial points of every active search into one
array, so a vectorized objective evaluates them in a single call. Searches
are independent; running them together changes nothing but throughput.
"""
from dataclasses import dataclass

import numpy as np

ALPHA, GAMMA, RHO, SIGMA = 1.0, 2.0, 0.5, 0.5


@dataclass
class BatchResult:
    x: np.ndarray  # (R, n) best vertex per search
    fun: np.ndarray  # (R,)
    converged: np.ndarray  # (R,) bool
    iterations: np.ndarray
    nfev: int


def minimize_batch(fun, x0, step, bounds=None, maxiter=500, fatol=1e-8, xatol=1e-4):
    """Minimize ``fun`` from every row of ``x0`` with its own simplex.

    ``fun`` maps an (m, n) array of points to m values. ``step`` (length n)
    sets the initial simplex edge along each axis; edges that would leave the
    box are flipped inward. Points are clipped to ``bounds`` (a sequence of
    (lo, hi) pairs) before evaluation. A search stops once the spread of its
    simplex values is within ``fatol`` and its vertices lie within ``xatol``
    of the best one.
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    r, n = x0.shape
    step = np.broadcast_to(np.asarray(step, dtype=float), (n,))
    if bounds is None:
        lo = np.full(n, -np.inf)
        hi = np.full(n, np.inf)
    else:
        lo, hi = (np.array(b, dtype=float) for b in zip(*bounds))

    def clip(x):
        return np.clip(x, lo, hi)

    simplex = np.repeat(clip(x0)[:, None, :], n + 1, axis=1)  # (R, n+1, n)
    for k in range(n):
        forward = simplex[:, k + 1, k] + step[k]
        simplex[:, k + 1, k] = np.where(forward <= hi[k], forward, simplex[:, k + 1, k] - step[k])
    values = fun(simplex.reshape(-1, n)).reshape(r, n + 1)
    nfev = r * (n + 1)

    converged = np.zeros(r, dtype=bool)
    iterations = np.zeros(r, dtype=int)
    for _ in range(maxiter):
        order = np.argsort(values, axis=1, kind="stable")
        simplex = np.take_along_axis(simplex, order[:, :, None], axis=1)
        values = np.take_along_axis(values, order, axis=1)
        f_spread = values[:, -1] - values[:, 0]
        x_spread = np.max(np.abs(simplex - simplex[:, :1]), axis=(1, 2))
        converged = (f_spread <= fatol) & (x_spread <= xatol)
        active = np.flatnonzero(~converged)
        if active.size == 0:
            break
        iterations[active] += 1
        s = simplex[active]
        v = values[active]
        centroid = s[:, :-1].mean(axis=1)
        worst = s[:, -1]
        xr = clip(centroid + ALPHA * (centroid - worst))
        xe = clip(centroid + GAMMA * (centroid - worst))
        xoc = clip(centroid + RHO * (xr - centroid))
        xic = clip(centroid + RHO * (worst - centroid))
        trial = fun(np.concatenate([xr, xe, xoc, xic])).reshape(4, -1)
        nfev += trial.size
        fr, fe, foc, fic = trial
        best, second_worst, fworst = v[:, 0], v[:, -2], v[:, -1]

        new_x = worst.copy()
        new_f = fworst.copy()
        expand = fr < best
        use_e = expand & (fe < fr)
        use_r = (expand & ~use_e) | ((fr >= best) & (fr < second_worst))
        outside = (fr >= second_worst) & (fr < fworst) & (foc <= fr)
        inside = (fr >= fworst) & (fic < fworst)
        for mask, x, f in ((use_e, xe, fe), (use_r, xr, fr), (outside, xoc, foc), (inside, xic, fic)):
            new_x[mask] = x[mask]
            new_f[mask] = f[mask]
        shrink = ~(use_e | use_r | outside | inside)
        s[:, -1] = new_x
        v[:, -1] = new_f
        if shrink.any():
            sh = s[shrink]
            sh[:, 1:] = clip(sh[:, :1] + SIGMA * (sh[:, 1:] - sh[:, :1]))
            fv = fun(sh[:, 1:].reshape(-1, n)).reshape(-1, n)
            nfev += fv.size
            s[shrink] = sh
            vs = v[shrink]
            vs[:, 1:] = fv
            v[shrink] = vs
        simplex[active] = s
        values[active] = v

    order = np.argsort(values, axis=1, kind="stable")
    simplex = np.take_along_axis(simplex, order[:, :, None], axis=1)
    values = np.take_along_axis(values, order, axis=1)
    f_spread = values[:, -1] - values[:, 0]
    x_spread = np.max(np.abs(simplex - simplex[:, :1]), axis=(1, 2))
    converged = (f_spread <= fatol) & (x_spread <= xatol)
    return BatchResult(simplex[:, 0].copy(), values[:, 0].copy(), converged, iterations, nfev)
