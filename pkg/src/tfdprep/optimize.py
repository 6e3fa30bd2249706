"""Scalar optimization helpers: golden-section maximization on a bracket."""

from __future__ import annotations

import math
from typing import Callable

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(
    f: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = 1e-6,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on [a, b] to relative bracket width ``rel_tol``.

    Returns (x_best, f(x_best)) including the bracket endpoints in the
    comparison, so the result never falls below the best sampled point.
    """
    if b < a:
        a, b = b, a
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if (b - a) <= rel_tol * max(abs(a), abs(b), 1e-300):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
    candidates = [(c, fc), (d, fd)]
    x, fx = max(candidates, key=lambda t: t[1])
    return x, fx


def scan_refine_max(f, grid, rel_tol: float = 1e-6):
    """Grid scan of a unimodal positive function followed by golden refinement.

    Returns ``(x_best, f_best, values, boundary)``.  The boundary flag is set
    when the curve has not decreased by either grid edge (the true optimum
    sits at or beyond the grid), in which case the edge point is reported.
    """
    import numpy as np

    xs = np.asarray(grid, dtype=float)
    values = np.array([f(x) for x in xs])
    k = int(np.argmax(values))
    x_best, f_best = float(xs[k]), float(values[k])
    slack = 1e-12 * max(f_best, 1.0)
    boundary = k == 0 or k == len(xs) - 1
    if values[-1] >= f_best - slack and k != len(xs) - 1:
        boundary, k = True, len(xs) - 1
        x_best, f_best = float(xs[-1]), float(values[-1])
    elif values[0] >= f_best - slack and k != 0:
        boundary, k = True, 0
        x_best, f_best = float(xs[0]), float(values[0])
    if not boundary and len(xs) >= 3:
        x, fx = golden_max(f, float(xs[k - 1]), float(xs[k + 1]), rel_tol)
        if fx >= f_best:
            x_best, f_best = float(x), float(fx)
    return x_best, f_best, values, boundary
