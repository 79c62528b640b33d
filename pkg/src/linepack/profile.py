"""Spatial profile of the exact exponential-in-time pipe flow solution.

The exact family p = p0 exp(lam c_s^2 t / sqrt(2 alpha) + psi(x)),
phi = p sqrt(2 G / alpha) reduces the PDE system to a single profile ODE
for G(x) = -psi'(x),

    G' = 2 G^2 - lam sqrt(G),      G(0) = G0,

whose fixed point G* = (lam/2)^(2/3) separates a decaying branch
(G0 < G*, G -> 0 downstream) from a growing branch (G0 > G*, finite-x
blow-up possible).  lam = 0 gives the stationary solution
G = G0/(1 - 2 G0 x), p = p0 sqrt(1 - 2 G0 x).

The primary computation is ODE integration, valid for every sign of lam.
For lam > 0 the ODE also has a closed-form implicit solution through the
antiderivative f(z, lam) of 1/(lam sqrt(z) - 2 z^2); that route is kept as
an independent cross-validation oracle.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import (
    BranchError,
    InvalidParameterError,
    ProfileDegenerateError,
    ProfileSingularError,
    QuadratureError,
    StateInvalidError,
)
from .numerics import cumulative_integral, uniform_spacing

# Degeneracy floor for sqrt(G) in the ODE right-hand side; reaching it means
# the no-reversal assumption failed inside the pipe.
G_FLOOR = 1e-14
# Blow-up cap, relative to G0; reaching it means the profile is singular
# inside the pipe (e.g. lam=0 with 2*G0*L >= 1).
G_CAP_FACTOR = 1e10

_ODE_RTOL = 1e-10
_ODE_ATOL = 1e-12


@dataclass(frozen=True)
class GProfile:
    """G(x; lam, g0) on a uniform grid, with optional parameter sensitivities."""

    lam: float
    g0: float
    x: np.ndarray
    g: np.ndarray
    psi: np.ndarray
    dg_dlam: Optional[np.ndarray] = None
    dg_dg0: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.x.shape != self.g.shape or self.x.shape != self.psi.shape:
            raise StateInvalidError("x, g, psi must have matching shapes")
        if self.x[0] != 0.0:
            raise StateInvalidError("profile grid must start at x = 0")
        if self.psi[0] != 0.0:
            raise StateInvalidError("psi must vanish at x = 0")
        if np.any(self.g <= 0.0):
            raise StateInvalidError("profile G must stay positive")


def _rhs(x: float, y: np.ndarray, lam: float) -> np.ndarray:
    g = y[0]
    return np.array([2.0 * g * g - lam * math.sqrt(max(g, G_FLOOR))])


def g_profile_ode(lam: float, g0: float, x: np.ndarray) -> GProfile:
    """Integrate the profile ODE G' = 2G^2 - lam sqrt(G) on a uniform grid.

    Parameters
    ----------
    lam, g0 : float
        Profile parameters; any sign of `lam`, `g0` > 0.
    x : np.ndarray
        Strictly increasing uniform grid starting at 0.

    Returns
    -------
    GProfile
        Profile with psi(x) = -int_0^x G computed by high-order quadrature
        on the same grid.  Sensitivity fields are left unfilled.

    Raises
    ------
    ProfileDegenerateError
        G reaches the degeneracy floor before the end of the grid
        (flow reversal inside the pipe).
    ProfileSingularError
        G blows up before the end of the grid.
    """
    if not (math.isfinite(g0) and g0 > 0.0):
        raise InvalidParameterError(f"g0 must be positive, got {g0!r}")
    if not math.isfinite(lam):
        raise InvalidParameterError(f"lam must be finite, got {lam!r}")
    x = np.asarray(x, dtype=float)
    dx = uniform_spacing(x)
    if x[0] != 0.0:
        raise InvalidParameterError("profile grid must start at x = 0")

    cap = G_CAP_FACTOR * g0

    def hit_floor(xx, y, lam=lam):
        return y[0] - G_FLOOR

    def hit_cap(xx, y, lam=lam):
        return y[0] - cap

    hit_floor.terminal = True
    hit_floor.direction = -1.0
    hit_cap.terminal = True
    hit_cap.direction = 1.0

    sol = solve_ivp(
        _rhs,
        (0.0, x[-1]),
        [g0],
        t_eval=x,
        args=(lam,),
        method="DOP853",
        rtol=_ODE_RTOL,
        atol=_ODE_ATOL,
        events=(hit_floor, hit_cap),
        dense_output=False,
    )
    if sol.status == 1:
        if sol.t_events[0].size:
            raise ProfileDegenerateError(
                f"G reached the degeneracy floor at x = {sol.t_events[0][0]:.6g} "
                f"(lam = {lam:.6g}, g0 = {g0:.6g})"
            )
        raise ProfileSingularError(
            f"G blew up at x = {sol.t_events[1][0]:.6g} (lam = {lam:.6g}, g0 = {g0:.6g})"
        )
    if not sol.success:
        raise ProfileSingularError(f"profile integration failed: {sol.message}")
    g = sol.y[0].copy()
    g[0] = g0
    if np.any(g <= 0.0):
        raise ProfileDegenerateError("profile lost positivity on the grid")
    psi = -cumulative_integral(g, dx)
    return GProfile(lam=lam, g0=g0, x=x, g=g, psi=psi)


def f_antiderivative(z, lam: float):
    """Closed-form antiderivative f(z, lam) of 1/(lam sqrt(z) - 2 z^2).

    With a = (lam/2)^(1/3),

        f = (1/(3 a^2)) [ -log|a - sqrt(z)| + (1/2) log(a^2 + a sqrt(z) + z)
                          + sqrt(3) arctan((1 + 2 sqrt(z)/a)/sqrt(3)) ]

    so that f(G0, lam) - f(G, lam) = x along a profile.  The absolute value
    in the first logarithm covers both branches; f diverges only at the
    fixed point z = (lam/2)^(2/3).

    Raises
    ------
    BranchError
        lam <= 0 (no real closed form; use g_profile_ode) or z at the
        fixed point.
    InvalidParameterError
        z <= 0.
    """
    if not (math.isfinite(lam) and lam > 0.0):
        raise BranchError(f"closed form requires lam > 0, got {lam!r}; use g_profile_ode")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0.0) or not np.all(np.isfinite(z)):
        raise InvalidParameterError("z must be positive and finite")
    a = (lam / 2.0) ** (1.0 / 3.0)
    s = np.sqrt(z)
    if np.any(s == a):
        raise BranchError("f(z, lam) diverges at the fixed point z = (lam/2)^(2/3)")
    val = (
        -np.log(np.abs(a - s))
        + 0.5 * np.log(a * a + a * s + z)
        + math.sqrt(3.0) * np.arctan((1.0 + 2.0 * s / a) / math.sqrt(3.0))
    ) / (3.0 * a * a)
    return val if val.ndim else float(val)


def g_from_inverse(lam: float, g0: float, x) -> np.ndarray:
    """Invert f(G0, lam) - f(G, lam) = x for G at each requested position.

    Validation oracle for `g_profile_ode`; requires lam > 0 and g0 off the
    fixed point.  Raises ProfileDegenerateError (decaying branch runs out
    of positive G) or ProfileSingularError (growing branch blows up) when
    a requested x lies beyond the profile's reach.
    """
    if not (math.isfinite(lam) and lam > 0.0):
        raise BranchError(f"closed-form inversion requires lam > 0, got {lam!r}")
    if not (math.isfinite(g0) and g0 > 0.0):
        raise InvalidParameterError(f"g0 must be positive, got {g0!r}")
    gstar = (lam / 2.0) ** (2.0 / 3.0)
    if abs(g0 - gstar) <= 1e-12 * gstar:
        raise BranchError("g0 sits at the fixed point; the profile is constant")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0.0):
        raise InvalidParameterError("x must be nonnegative")

    f0 = f_antiderivative(g0, lam)
    growing = g0 > gstar
    # On the growing branch f decreases in z, so t(G) = f0 - f(G) - x
    # increases in G; on the decaying branch it decreases in G.  Either way
    # t(g0) = -x <= 0.
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        if xi == 0.0:
            out[i] = g0
            continue

        def target(gg, xi=xi):
            return f0 - f_antiderivative(gg, lam) - xi

        if growing:
            lo, hi = g0, 2.0 * g0
            for _ in range(200):
                if target(hi) > 0.0:
                    break
                lo, hi = hi, 2.0 * hi
            else:
                raise ProfileSingularError(
                    f"profile blows up before x = {xi:.6g} (lam = {lam:.6g}, g0 = {g0:.6g})"
                )
        else:
            lo = g0 * 1e-13
            if target(lo) < 0.0:
                raise ProfileDegenerateError(
                    f"profile degenerates before x = {xi:.6g} (lam = {lam:.6g}, g0 = {g0:.6g})"
                )
            hi = g0
        out[i] = brentq(target, lo, hi, xtol=1e-15 * max(1.0, g0), rtol=8.9e-16)
    return out


def g_sensitivities(profile: GProfile) -> GProfile:
    """Fill dG/dG0 and dG/dlam along an already-solved profile.

    With W(x) = lam sqrt(G) - 2 G^2 = -G'(x), implicit differentiation of
    the profile relation gives

        dG/dG0  = W(x) / W(0),
        dG/dlam = -W(x) * int_0^x sqrt(G)/W dx' = -W(x) * int_0^x dx'/(lam - 2 G^(3/2)),

    the second form avoiding the 0/0 of sqrt(G)/W as G -> 0.  Both are
    valid for any sign of lam; only a profile pinned at the fixed point
    (W = 0) is rejected.

    Returns a new GProfile with the sensitivity fields set.
    """
    g = profile.g
    lam = profile.lam
    dx = uniform_spacing(profile.x)
    root_g = np.sqrt(g)
    w = lam * root_g - 2.0 * g * g
    denom = lam - 2.0 * g * root_g
    scale = np.abs(lam) + 2.0 * g * root_g
    if np.any(np.abs(denom) <= 1e-12 * scale):
        raise QuadratureError(
            "profile sits at (or crosses) the fixed point; sensitivities are singular"
        )
    dg_dg0 = w / w[0]
    dg_dlam = -w * cumulative_integral(1.0 / denom, dx)
    return dataclasses.replace(profile, dg_dlam=dg_dlam, dg_dg0=dg_dg0)


def exact_fields(pipe, lam: float, g0: float, t: float, x: np.ndarray):
    """Exact pressure/flux fields of the exponential family at time t.

    p(t,x) = p0 exp(lam c_s^2 t / sqrt(2 alpha) + psi(x)),
    phi(t,x) = p(t,x) sqrt(2 G(x) / alpha).
    """
    from .core import FieldSnapshot

    x = np.asarray(x, dtype=float)
    if x[-1] > pipe.length * (1.0 + 1e-9):
        raise InvalidParameterError("x grid extends beyond the pipe length")
    prof = g_profile_ode(lam, g0, x)
    c2 = pipe.sound_speed**2
    p = pipe.ref_pressure * np.exp(lam * c2 * t / math.sqrt(2.0 * pipe.alpha) + prof.psi)
    phi = p * np.sqrt(2.0 * prof.g / pipe.alpha)
    return FieldSnapshot(t=t, x=x, p=p, phi=phi)
