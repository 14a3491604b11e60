"""Tensor Gauss-Legendre quadrature over ordered (Weyl chamber) regions.

Supports up to three dimensions, which covers every numeric identity check
in this package; larger particle counts go through Monte Carlo instead.
"""

import numpy as np

from .special_functions import _gl_nodes

__all__ = ["ordered_grid", "chamber_integral"]


def ordered_grid(n, lo, hi, order=80):
    """Quadrature points and weights for {lo <= y_1 < ... < y_n <= hi}.

    Maps each coordinate to the remaining interval [y_{k-1}, hi] with a
    Gauss-Legendre rule; returns (points, weights) with points of shape
    grid + (n,) and weights of shape grid.
    """
    if n < 1 or n > 3:
        raise ValueError("ordered_grid supports 1 <= n <= 3")
    xi, wi = _gl_nodes(order)
    u = 0.5 * (xi + 1.0)        # nodes on [0, 1]
    w = 0.5 * wi

    shapes = [tuple(order if k == d else 1 for k in range(n)) for d in range(n)]
    ys = []
    weight = np.ones((1,) * n)
    prev = lo
    for d in range(n):
        ud = u.reshape(shapes[d])
        wd = w.reshape(shapes[d])
        span = hi - prev
        y = prev + ud * span
        weight = weight * wd * span
        ys.append(np.broadcast_to(y, (order,) * n))
        prev = y
    pts = np.stack(np.broadcast_arrays(*ys), axis=-1)
    weight = np.broadcast_to(weight, (order,) * n)
    return pts, weight


def chamber_integral(f, n, lo, hi, order=80):
    """Integral of f over the ordered box {lo <= y_1 < ... < y_n <= hi}.

    f must accept an array of shape (..., n) and return shape (...).
    """
    pts, wts = ordered_grid(n, lo, hi, order)
    return float(np.sum(f(pts) * wts))
