"""Shared quadrature and differentiation utilities on uniform grids.

All spatial integrals in the model modules go through `cumulative_integral`
so that discrete identities (orthogonality of corrections, vanishing endpoint
pressure corrections) hold to round-off rather than to quadrature tolerance.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError

# Composite rule: integral of the cubic interpolant over each interval.
# Interior interval [x_i, x_{i+1}] uses nodes i-1..i+2, edge intervals use
# the four nearest nodes.  Exact for cubics, O(h^4) accumulated error.
_EDGE_W = np.array([9.0, 19.0, -5.0, 1.0]) / 24.0
_MID_W = np.array([-1.0, 13.0, 13.0, -1.0]) / 24.0


def uniform_spacing(x: np.ndarray, rtol: float = 1e-9) -> float:
    """Return the grid spacing, validating that `x` is uniform and increasing."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise InvalidParameterError("grid must be a 1-d array with at least 2 points")
    d = np.diff(x)
    dx = (x[-1] - x[0]) / (x.size - 1)
    if dx <= 0.0 or np.any(np.abs(d - dx) > rtol * abs(dx)):
        raise InvalidParameterError("grid must be uniformly spaced and increasing")
    return dx


def cumulative_integral(y: np.ndarray, dx: float) -> np.ndarray:
    """Cumulative integral of samples `y` on a uniform grid with spacing `dx`.

    Returns an array of the same length with entry j equal to the integral
    from the first node to node j (entry 0 is zero).  Uses the composite
    cubic rule above; falls back to quadratic/trapezoid rules for fewer
    than four samples.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    if n < 2:
        raise InvalidParameterError("need at least 2 samples to integrate")
    out = np.empty(n)
    out[0] = 0.0
    if n == 2:
        out[1] = 0.5 * dx * (y[0] + y[1])
        return out
    if n == 3:
        out[1] = dx * (5.0 * y[0] + 8.0 * y[1] - y[2]) / 12.0
        out[2] = out[1] + dx * (-y[0] + 8.0 * y[1] + 5.0 * y[2]) / 12.0
        return out
    inc = np.empty(n - 1)
    inc[0] = dx * (_EDGE_W @ y[:4])
    inc[-1] = dx * (_EDGE_W @ y[-1:-5:-1])
    inc[1:-1] = dx * (
        _MID_W[0] * y[0 : n - 3]
        + _MID_W[1] * y[1 : n - 2]
        + _MID_W[2] * y[2 : n - 1]
        + _MID_W[3] * y[3:n]
    )
    np.cumsum(inc, out=out[1:])
    return out


def integral(y: np.ndarray, dx: float) -> float:
    """Integral of samples over the whole grid (endpoint of the cumulative rule)."""
    return float(cumulative_integral(y, dx)[-1])


def fd_weights(nodes: np.ndarray, x0: float, order: int) -> np.ndarray:
    """Finite-difference weights for the `order`-th derivative at `x0`.

    Fornberg's recurrence; `nodes` may be arbitrarily placed but distinct.
    """
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    if order >= n:
        raise InvalidParameterError("need more nodes than derivative order")
    c = np.zeros((n, order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = nodes[0] - x0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def derivative_of_callable(f, t, h: float, domain=None):
    """Differentiate a scalar callable at times `t` with 5-point stencils.

    Stencils are centered where possible and shifted to stay inside
    `domain = (lo, hi)` near its ends, keeping 4th-order accuracy throughout.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if h <= 0.0:
        raise InvalidParameterError("step h must be positive")
    out = np.empty(t_arr.shape)
    base = (np.arange(5) - 2) * h
    for i, ti in enumerate(t_arr):
        nodes = ti + base
        if domain is not None:
            lo, hi = domain
            if nodes[0] < lo:
                nodes = nodes + (lo - nodes[0])
            elif nodes[-1] > hi:
                nodes = nodes + (hi - nodes[-1])
        w = fd_weights(nodes, ti, 1)
        out[i] = float(np.dot(w, [f(v) for v in nodes]))
    return out if np.ndim(t) else float(out[0])


def derivative_on_grid(y: np.ndarray, dx: float) -> np.ndarray:
    """4th-order first derivative of uniformly sampled data (one-sided at edges)."""
    y = np.asarray(y, dtype=float)
    n = y.size
    if n < 5:
        raise InvalidParameterError("need at least 5 samples for the 4th-order stencil")
    out = np.empty(n)
    out[2:-2] = (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / (12.0 * dx)
    idx = np.arange(5) * dx
    for i, pos in ((0, 0.0), (1, dx)):
        w = fd_weights(idx, pos, 1)
        out[i] = np.dot(w, y[:5])
        out[n - 1 - i] = -np.dot(w, y[-1:-6:-1])
    return out
