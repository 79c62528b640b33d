"""Unbalanced-adiabatic reduced-order solution and its perturbative corrections.

The reduced-order model freezes the exact exponential solution family and
lets its two parameters drift slowly in time: p_UA and phi_UA keep the
exact spatial shape for the instantaneous (lam(t), G0(t)) while the time
exponent accumulates Lambda(t) = int_0^t lam.  The base fields violate
mass balance by a residual r(x,t); first-order corrections (delta_phi,
delta_p) remove its effect subject to the boundary conditions, which fix
either pressure at both ends ("pp") or pressure at x=0 and flux at x=L
("pphi").
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.signal import savgol_filter

from .core import BC_KINDS, BC_PP, BoundarySpec, FieldSnapshot, ParameterSchedule, PipeModel
from .errors import CalibrationError, DegenerateWeightError, InvalidParameterError
from .numerics import cumulative_integral, derivative_of_callable, integral, uniform_spacing
from .profile import GProfile, g_profile_ode, g_sensitivities

_PROFILE_CACHE_SIZE = 4096


@lru_cache(maxsize=_PROFILE_CACHE_SIZE)
def _profile(lam: float, g0: float, n: int, dx: float) -> GProfile:
    """Solved profile with sensitivities on the uniform grid arange(n)*dx."""
    x = np.arange(n) * dx
    return g_sensitivities(g_profile_ode(lam, g0, x))


@dataclass(frozen=True)
class UaFrame:
    """Base fields and residual ingredients at one time instant.

    `sens_cum` is int_0^x (dG/dlam lam_dot + dG/dG0 g0_dot) dx', the rate
    of change of -psi; `r` is the mass-balance residual
    d_x phi_UA + c_s^-2 d_t p_UA of the base fields.
    """

    t: float
    x: np.ndarray
    lam: float
    g0: float
    profile: GProfile
    p: np.ndarray
    phi: np.ndarray
    dpdt: np.ndarray
    dphidx: np.ndarray
    r: np.ndarray
    sens_cum: np.ndarray


def ua_frame(pipe: PipeModel, schedule: ParameterSchedule, t: float, x: np.ndarray) -> UaFrame:
    """Evaluate base fields, analytic derivatives and residual at time t."""
    x = np.asarray(x, dtype=float)
    dx = uniform_spacing(x)
    if x[-1] > pipe.length * (1.0 + 1e-9):
        raise InvalidParameterError("x grid extends beyond the pipe length")
    lam = float(schedule.lam(t))
    g0 = float(schedule.g0(t))
    if g0 <= 0.0:
        raise InvalidParameterError(f"schedule produced g0 = {g0!r} <= 0 at t = {t!r}")
    lam_dot = float(schedule.lam_dot(t))
    g0_dot = float(schedule.g0_dot(t))
    lam_cum = float(schedule.lam_cum(t))

    prof = _profile(lam, g0, x.size, dx)
    c2 = pipe.sound_speed**2
    r2a = math.sqrt(2.0 * pipe.alpha)

    p = pipe.ref_pressure * np.exp((c2 / r2a) * lam_cum + prof.psi)
    phi = np.sqrt(2.0 / pipe.alpha) * p * np.sqrt(prof.g)
    # d_x phi_UA collapses analytically: the psi and G factors cancel
    # through the profile ODE, leaving -lam p / sqrt(2 alpha).
    dphidx = -(lam / r2a) * p
    sens_cum = cumulative_integral(prof.dg_dlam * lam_dot + prof.dg_dg0 * g0_dot, dx)
    dpdt = p * ((c2 / r2a) * lam - sens_cum)
    r = dphidx + dpdt / c2
    return UaFrame(
        t=t,
        x=x,
        lam=lam,
        g0=g0,
        profile=prof,
        p=p,
        phi=phi,
        dpdt=dpdt,
        dphidx=dphidx,
        r=r,
        sens_cum=sens_cum,
    )


def ua_base(pipe: PipeModel, schedule: ParameterSchedule, t: float, x: np.ndarray) -> FieldSnapshot:
    """Adiabatic base fields (exact family with slowly drifting parameters)."""
    fr = ua_frame(pipe, schedule, t, x)
    return FieldSnapshot(t=t, x=fr.x, p=fr.p, phi=fr.phi)


def adiabatic_residual(
    pipe: PipeModel, schedule: ParameterSchedule, t: float, x: np.ndarray
) -> np.ndarray:
    """Mass-balance residual r(x) = d_x phi_UA + c_s^-2 d_t p_UA at time t."""
    return ua_frame(pipe, schedule, t, x).r


def delta_phi_pp(
    pipe: PipeModel, schedule: ParameterSchedule, t: float, x: np.ndarray
) -> np.ndarray:
    """Flux correction for pressure-pressure boundaries.

    delta_phi(x) = delta_phi(0) - int_0^x r dx', with the integration
    constant chosen so that int_0^L phi_UA delta_phi dx = 0, which in turn
    forces delta_p(L) = 0.
    """
    fr = ua_frame(pipe, schedule, t, x)
    dx = uniform_spacing(fr.x)
    r_cum = cumulative_integral(fr.r, dx)
    weight = integral(fr.phi, dx)
    if weight <= 0.0:
        raise DegenerateWeightError(f"int phi_UA dx = {weight!r} is not positive")
    dphi0 = integral(fr.phi * r_cum, dx) / weight
    return dphi0 - r_cum


def delta_phi_pphi(
    pipe: PipeModel, schedule: ParameterSchedule, t: float, x: np.ndarray
) -> np.ndarray:
    """Flux correction when the outlet flux is prescribed: delta_phi = int_x^L r."""
    fr = ua_frame(pipe, schedule, t, x)
    dx = uniform_spacing(fr.x)
    r_cum = cumulative_integral(fr.r, dx)
    return r_cum[-1] - r_cum


def delta_p(
    pipe: PipeModel,
    schedule: ParameterSchedule,
    t: float,
    x: np.ndarray,
    dphi: np.ndarray,
) -> np.ndarray:
    """Pressure correction induced by a flux correction, with delta_p(0) = 0."""
    fr = ua_frame(pipe, schedule, t, x)
    dx = uniform_spacing(fr.x)
    return -pipe.alpha * cumulative_integral(fr.phi * dphi, dx) / fr.p


def ua_solution(
    pipe: PipeModel,
    schedule: ParameterSchedule,
    t: float,
    x: np.ndarray,
    bc_kind: str,
    corrected: bool = True,
) -> FieldSnapshot:
    """UA fields with (default) or without the perturbative corrections."""
    if bc_kind not in BC_KINDS:
        raise InvalidParameterError(f"unknown bc kind {bc_kind!r}")
    fr = ua_frame(pipe, schedule, t, x)
    if not corrected:
        return FieldSnapshot(t=t, x=fr.x, p=fr.p, phi=fr.phi)
    if bc_kind == BC_PP:
        dphi = delta_phi_pp(pipe, schedule, t, x)
    else:
        dphi = delta_phi_pphi(pipe, schedule, t, x)
    dp = delta_p(pipe, schedule, t, x, dphi)
    return FieldSnapshot(t=t, x=fr.x, p=fr.p + dp, phi=fr.phi + dphi)


@dataclass(frozen=True)
class ScheduleDrive:
    """Boundary series induced by a schedule, with analytic time derivatives."""

    p_in: Callable
    p_out: Callable
    phi_out: Callable
    dp_in: Callable
    dp_out: Callable
    dphi_out: Callable


def _vectorized(fn: Callable) -> Callable:
    def wrapped(t):
        tt = np.asarray(t, dtype=float)
        if tt.ndim == 0:
            return fn(float(tt))
        return np.array([fn(float(v)) for v in tt.ravel()]).reshape(tt.shape)

    return wrapped


def schedule_drive(
    pipe: PipeModel, schedule: ParameterSchedule, nx: int = 201
) -> ScheduleDrive:
    """Endpoint series of the UA base fields as callables of time.

    Used to drive the reference solver and the balanced baseline with
    boundary data consistent with the adiabatic scenario.  Derivatives
    follow from the chain rule through the profile sensitivities.
    """
    dx = pipe.length / (nx - 1)
    x = np.arange(nx) * dx
    c2 = pipe.sound_speed**2
    r2a = math.sqrt(2.0 * pipe.alpha)

    def p_in(t):
        return pipe.ref_pressure * math.exp((c2 / r2a) * float(schedule.lam_cum(t)))

    def dp_in(t):
        return p_in(t) * (c2 / r2a) * float(schedule.lam(t))

    def p_out(t):
        fr = ua_frame(pipe, schedule, t, x)
        return float(fr.p[-1])

    def dp_out(t):
        fr = ua_frame(pipe, schedule, t, x)
        return float(fr.dpdt[-1])

    def phi_out(t):
        fr = ua_frame(pipe, schedule, t, x)
        return float(fr.phi[-1])

    def dphi_out(t):
        fr = ua_frame(pipe, schedule, t, x)
        g_l = fr.profile.g[-1]
        g_dot_l = fr.profile.dg_dlam[-1] * float(schedule.lam_dot(t)) + fr.profile.dg_dg0[
            -1
        ] * float(schedule.g0_dot(t))
        return float(fr.phi[-1] * (fr.dpdt[-1] / fr.p[-1] + 0.5 * g_dot_l / g_l))

    return ScheduleDrive(
        p_in=_vectorized(p_in),
        p_out=_vectorized(p_out),
        phi_out=_vectorized(phi_out),
        dp_in=_vectorized(dp_in),
        dp_out=_vectorized(dp_out),
        dphi_out=_vectorized(dphi_out),
    )


def boundary_from_schedule(
    pipe: PipeModel, schedule: ParameterSchedule, bc_kind: str, nx: int = 201
) -> BoundarySpec:
    """BoundarySpec matching the UA endpoints for the chosen bc kind."""
    drive = schedule_drive(pipe, schedule, nx)
    if bc_kind == BC_PP:
        return BoundarySpec(kind=bc_kind, left=drive.p_in, right=drive.p_out)
    return BoundarySpec(kind=bc_kind, left=drive.p_in, right=drive.phi_out)


def _bracketed_root(target: Callable, seed: float, t: float, what: str) -> float:
    """Expand a bracket around `seed` for a scalar root, then solve."""
    try:
        f_seed = target(seed)
    except Exception as exc:
        raise CalibrationError(f"{what} evaluation failed at seed {seed:.6g}, t={t:.6g}: {exc}")
    if f_seed == 0.0:
        return seed
    lo = hi = seed
    flo = fhi = f_seed
    try:
        if f_seed > 0.0:
            for _ in range(200):
                lo /= 1.3
                flo = target(lo)
                if flo <= 0.0:
                    break
                hi, fhi = lo, flo
            else:
                raise CalibrationError(
                    f"{what} bracketing failed on [{lo:.6g}, {seed:.6g}] at t={t:.6g} "
                    "(residual never changes sign; possibly non-monotone)"
                )
        else:
            for _ in range(200):
                hi *= 1.3
                fhi = target(hi)
                if fhi >= 0.0:
                    break
                lo, flo = hi, fhi
            else:
                raise CalibrationError(
                    f"{what} bracketing failed on [{seed:.6g}, {hi:.6g}] at t={t:.6g} "
                    "(residual never changes sign; possibly non-monotone)"
                )
    except CalibrationError:
        raise
    except Exception as exc:
        raise CalibrationError(f"{what} bracketing failed near [{lo:.6g}, {hi:.6g}] at t={t:.6g}: {exc}")
    return brentq(target, lo, hi, xtol=1e-15 * max(1.0, seed), rtol=8.9e-16)


def calibrate(
    pipe: PipeModel,
    bc: BoundarySpec,
    time_grid: np.ndarray,
    nx: int = 201,
    fd_step: float | None = None,
    smooth_window: int = 0,
) -> ParameterSchedule:
    """Recover (lam(t), G0(t)) from boundary series.

    lam(t) comes from the logarithmic time derivative of the inlet
    pressure; G0(t) from a warm-started scalar root solve matching either
    the outlet pressure (pp) or the outlet flux (pphi) at each sample
    time.  The returned schedule interpolates the recovered samples with
    cubic splines; when `smooth_window` > 0 (odd), derivative series are
    regularized with a local cubic polynomial fit of that window length.

    Parameters
    ----------
    pipe : PipeModel
    bc : BoundarySpec
        Boundary series as callables of time.
    time_grid : np.ndarray
        Strictly increasing sample times, at least 5 points.
    nx : int
        Internal profile grid resolution for the root solves.
    fd_step : float, optional
        Stencil step for differentiating the inlet series; defaults to a
        tenth of the median grid spacing.
    smooth_window : int
        Window length for smoothed derivative series; 0 disables.
    """
    t_grid = np.asarray(time_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 5:
        raise InvalidParameterError("time_grid needs at least 5 samples")
    if np.any(np.diff(t_grid) <= 0.0):
        raise InvalidParameterError("time_grid must be strictly increasing")
    spacing = float(np.median(np.diff(t_grid)))
    h = 0.1 * spacing if fd_step is None else float(fd_step)
    domain = (float(t_grid[0]), float(t_grid[-1]))

    c2 = pipe.sound_speed**2
    r2a = math.sqrt(2.0 * pipe.alpha)
    length = pipe.length
    dx = length / (nx - 1)
    x = np.arange(nx) * dx

    def ln_p_in(t):
        v = float(bc.left(t))
        if not (math.isfinite(v) and v > 0.0):
            raise CalibrationError(f"inlet pressure must be positive, got {v!r} at t={t!r}")
        return math.log(v)

    lam_arr = np.array(
        [(r2a / c2) * derivative_of_callable(ln_p_in, t, h, domain) for t in t_grid]
    )

    g0_arr = np.empty_like(t_grid)
    seed = None
    for i, t in enumerate(t_grid):
        p_in = float(bc.left(t))
        rhs = float(bc.right(t))
        lam_i = float(lam_arr[i])
        if bc.kind == BC_PP:
            if not (rhs > 0.0 and p_in > rhs):
                raise CalibrationError(
                    f"pp calibration needs 0 < p_out < p_in, got {rhs!r} vs {p_in!r} at t={t!r}"
                )
            rho = math.log(p_in / rhs)
            if seed is None:
                seed = -math.expm1(-2.0 * rho) / (2.0 * length)

            def target(g0, lam_i=lam_i, rho=rho):
                prof = g_profile_ode(lam_i, g0, x)
                return integral(prof.g, dx) - rho

            what = "G0 (pp)"
        else:
            if seed is None:
                seed = 0.5 * pipe.alpha * (rhs / p_in) ** 2

            def target(g0, lam_i=lam_i, p_in=p_in, rhs=rhs):
                prof = g_profile_ode(lam_i, g0, x)
                p_l = p_in * math.exp(prof.psi[-1])
                return p_l * math.sqrt(2.0 * prof.g[-1] / pipe.alpha) - rhs

            what = "G0 (pphi)"
        g0_arr[i] = seed = _bracketed_root(target, seed, t, what)

    lam_sp = CubicSpline(t_grid, lam_arr)
    g0_sp = CubicSpline(t_grid, g0_arr)
    lam_anti = lam_sp.antiderivative()
    anti0 = float(lam_anti(0.0))

    if smooth_window:
        if smooth_window % 2 == 0 or smooth_window < 5:
            raise InvalidParameterError("smooth_window must be odd and >= 5")
        lam_dot_arr = savgol_filter(
            lam_arr, smooth_window, polyorder=3, deriv=1, delta=spacing
        )
        g0_dot_arr = savgol_filter(
            g0_arr, smooth_window, polyorder=3, deriv=1, delta=spacing
        )
        lam_dot_sp = CubicSpline(t_grid, lam_dot_arr)
        g0_dot_sp = CubicSpline(t_grid, g0_dot_arr)
    else:
        lam_dot_sp = lam_sp.derivative()
        g0_dot_sp = g0_sp.derivative()

    def lam_cum(t):
        return lam_anti(np.asarray(t, dtype=float)) - anti0

    return ParameterSchedule(
        lam=lam_sp,
        lam_dot=lam_dot_sp,
        lam_cum=lam_cum,
        g0=g0_sp,
        g0_dot=g0_dot_sp,
    )
