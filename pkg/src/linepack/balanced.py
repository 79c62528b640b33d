"""Balanced-adiabatic baseline: quasi-stationary fields driven by endpoints.

The balanced model assumes the pipe is at every instant in the stationary
state fixed by the current endpoint pressures,

    p_BA(x) = sqrt(p_in^2 - (x/L)(p_in^2 - p_out^2)),
    phi_BA  = sqrt((p_in^2 - p_out^2)/(alpha L))   (uniform in x),

and applies the same perturbative correction pipeline as the unbalanced
model.  Since phi_BA is uniform, the mass-balance residual reduces to
r = c_s^-2 d_t p_BA.
"""
from __future__ import annotations

import math
from typing import Callable, Tuple

import numpy as np

from .core import BC_KINDS, BC_PP, FieldSnapshot, ParameterSchedule, PipeModel
from .errors import DegenerateWeightError, FlowReversalError, InvalidParameterError
from .numerics import cumulative_integral, integral, uniform_spacing
from .adiabatic import schedule_drive


def _check_endpoints(p_in: float, p_out: float) -> None:
    if not (math.isfinite(p_in) and math.isfinite(p_out) and p_out > 0.0):
        raise InvalidParameterError(f"endpoint pressures must be positive, got {p_in!r}, {p_out!r}")
    if p_in < p_out:
        raise FlowReversalError(
            f"p_in = {p_in!r} < p_out = {p_out!r}: reversed flow is not supported"
        )


def ba_base(pipe: PipeModel, p_in: float, p_out: float, t: float, x: np.ndarray) -> FieldSnapshot:
    """Stationary fields for the instantaneous endpoint pressures.

    Equal endpoint pressures give the no-flow state; p_in < p_out raises
    FlowReversalError.
    """
    _check_endpoints(p_in, p_out)
    x = np.asarray(x, dtype=float)
    if x[-1] > pipe.length * (1.0 + 1e-9):
        raise InvalidParameterError("x grid extends beyond the pipe length")
    dsq = p_in**2 - p_out**2
    p = np.sqrt(p_in**2 - (x / pipe.length) * dsq)
    phi = np.full_like(p, math.sqrt(dsq / (pipe.alpha * pipe.length)))
    return FieldSnapshot(t=t, x=x, p=p, phi=phi)


def ba_corrections(
    pipe: PipeModel,
    p_in: float,
    p_out: float,
    dp_in: float,
    dp_out: float,
    t: float,
    x: np.ndarray,
    bc_kind: str,
) -> Tuple[np.ndarray, np.ndarray]:
    """Perturbative corrections (delta_phi, delta_p) around the balanced base.

    d_t p_BA follows by chain rule through (p_in(t), p_out(t)); the flux
    correction integrates the residual with the constant fixed by the bc
    kind exactly as in the unbalanced pipeline.
    """
    if bc_kind not in BC_KINDS:
        raise InvalidParameterError(f"unknown bc kind {bc_kind!r}")
    base = ba_base(pipe, p_in, p_out, t, x)
    dx = uniform_spacing(base.x)
    c2 = pipe.sound_speed**2
    xl = base.x / pipe.length
    dpdt = (p_in * dp_in * (1.0 - xl) + p_out * dp_out * xl) / base.p
    r = dpdt / c2
    r_cum = cumulative_integral(r, dx)
    if bc_kind == BC_PP:
        weight = integral(base.phi, dx)
        if weight <= 0.0:
            raise DegenerateWeightError("no-flow balanced state has no pp correction")
        dphi = integral(base.phi * r_cum, dx) / weight - r_cum
    else:
        dphi = r_cum[-1] - r_cum
    dp = -pipe.alpha * cumulative_integral(base.phi * dphi, dx) / base.p
    return dphi, dp


def ba_solution(
    pipe: PipeModel,
    p_in: float,
    p_out: float,
    dp_in: float,
    dp_out: float,
    t: float,
    x: np.ndarray,
    bc_kind: str,
    corrected: bool = True,
) -> FieldSnapshot:
    """Balanced fields with or without the perturbative corrections."""
    base = ba_base(pipe, p_in, p_out, t, x)
    if not corrected:
        return base
    dphi, dp = ba_corrections(pipe, p_in, p_out, dp_in, dp_out, t, x, bc_kind)
    return FieldSnapshot(t=t, x=base.x, p=base.p + dp, phi=base.phi + dphi)


def ba_drive_from_schedule(
    pipe: PipeModel, schedule: ParameterSchedule, bc_kind: str, nx: int = 201
) -> Callable:
    """Map a schedule to the endpoint data the balanced model actually sees.

    Returns a callable t -> (p_in, p_out, dp_in, dp_out).  In the pp case
    these are the unbalanced endpoint pressures directly.  In the pphi
    case the balanced model is driven by (p_in, phi_L); the effective
    outlet pressure comes from inverting the stationary flux relation,
    p_out = sqrt(p_in^2 - alpha L phi_L^2).
    """
    if bc_kind not in BC_KINDS:
        raise InvalidParameterError(f"unknown bc kind {bc_kind!r}")
    drive = schedule_drive(pipe, schedule, nx)
    al = pipe.alpha * pipe.length

    if bc_kind == BC_PP:

        def endpoints(t: float):
            return (
                float(drive.p_in(t)),
                float(drive.p_out(t)),
                float(drive.dp_in(t)),
                float(drive.dp_out(t)),
            )

    else:

        def endpoints(t: float):
            p_in = float(drive.p_in(t))
            dp_in = float(drive.dp_in(t))
            phi_l = float(drive.phi_out(t))
            dphi_l = float(drive.dphi_out(t))
            arg = p_in**2 - al * phi_l**2
            if arg <= 0.0:
                raise FlowReversalError(
                    f"prescribed outlet flux exceeds the stationary capacity at t={t!r}"
                )
            p_out = math.sqrt(arg)
            dp_out = (p_in * dp_in - al * phi_l * dphi_l) / p_out
            return p_in, p_out, dp_in, dp_out

    return endpoints
