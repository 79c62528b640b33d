"""Beyond-adiabatic correction: the linearized system integrated in time.

Linearizing the pipe equations around the adiabatic base (p_UA, phi_UA)
and keeping the time derivative of the pressure correction gives

    delta_phi = -d_x(delta_p p_UA) / (alpha phi_UA),
    c_s^-2 d_t delta_p = d_x J - r,     J = d_x(delta_p p_UA) / (alpha phi_UA),

with r the adiabatic mass-balance residual, delta_p(0, x) = 0, and
homogeneous boundary values (delta_p at both ends for "pp"; delta_p at
x=0 and delta_phi at x=L for "pphi").  The parabolic update is
Crank-Nicolson with a conservative face discretization of J on an
internally refined grid; dropping the time term recovers the quadrature
corrections of the adiabatic module, which `steady_correction` exposes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .core import BC_KINDS, BC_PP, ParameterSchedule, PipeModel
from .errors import DegenerateWeightError, InvalidParameterError
from .numerics import uniform_spacing
from .adiabatic import UaFrame, ua_frame

DEFAULT_REFINE = 4


@dataclass(frozen=True)
class Correction:
    """Linearized corrections on the caller's grid at one instant."""

    t: float
    dp: np.ndarray
    dphi: np.ndarray


def _refined_grid(x: np.ndarray, refine: int) -> np.ndarray:
    if refine < 1:
        raise InvalidParameterError("refine must be >= 1")
    n_fine = (x.size - 1) * refine + 1
    return np.linspace(x[0], x[-1], n_fine)


def _face_conductance(fr: UaFrame, dx: float, alpha: float) -> np.ndarray:
    """c_j with J_{j+1/2} = c_j (w_{j+1} - w_j), w = delta_p p_UA; 1/dx^2 folded in."""
    phi_face = 0.5 * (fr.phi[:-1] + fr.phi[1:])
    if np.any(phi_face <= 0.0):
        raise DegenerateWeightError("base flux vanishes on the grid; linearization is degenerate")
    return 1.0 / (dx * dx * alpha * phi_face)


def _apply_operator(c: np.ndarray, p_base: np.ndarray, v: np.ndarray, pp_case: bool) -> np.ndarray:
    w = v * p_base
    j_face = c * (w[1:] - w[:-1])
    out = np.zeros_like(v)
    out[1:-1] = j_face[1:] - j_face[:-1]
    if not pp_case:
        # Half cell at x=L with the prescribed zero flux correction: J_L = 0.
        out[-1] = -2.0 * j_face[-1]
    return out


def _assemble(c: np.ndarray, p_base: np.ndarray, inv_dt: float, theta: float, pp_case: bool):
    """Banded matrix of inv_dt*I - theta*A on the interior unknowns."""
    n = p_base.size
    i0, i1 = (1, n - 1) if pp_case else (1, n)
    m = i1 - i0
    # Interior rows j = 1 .. n-2; the pphi case appends the half cell at n-1.
    a_l = c[: n - 2]
    a_r = c[1 : n - 1]
    main = np.empty(m)
    sub = np.empty(m)
    sup = np.zeros(m)
    main[: n - 2] = inv_dt + theta * (a_l + a_r) * p_base[1 : n - 1]
    sub[: n - 2] = -theta * a_l * p_base[: n - 2]
    sup[: n - 2] = -theta * a_r * p_base[2:n]
    if not pp_case:
        main[-1] = inv_dt + 2.0 * theta * c[-1] * p_base[-1]
        sub[-1] = -2.0 * theta * c[-1] * p_base[-2]
        sup[-1] = 0.0
    ab = np.zeros((3, m))
    ab[0, 1:] = sup[:-1]
    ab[1, :] = main
    ab[2, :-1] = sub[1:]
    return ab, i0, i1


def _dphi_from_dp(fr: UaFrame, dp: np.ndarray, dx: float, alpha: float, pp_case: bool) -> np.ndarray:
    """delta_phi = -J averaged back to nodes, one-sided at the ends."""
    w = dp * fr.p
    phi_face = 0.5 * (fr.phi[:-1] + fr.phi[1:])
    j_face = (w[1:] - w[:-1]) / (dx * alpha * phi_face)
    dphi = np.empty_like(dp)
    dphi[1:-1] = -0.5 * (j_face[:-1] + j_face[1:])
    dphi[0] = -(1.5 * j_face[0] - 0.5 * j_face[1])
    if pp_case:
        dphi[-1] = -(1.5 * j_face[-1] - 0.5 * j_face[-2])
    else:
        dphi[-1] = 0.0
    return dphi


def linearized_solve(
    pipe: PipeModel,
    schedule: ParameterSchedule,
    bc_kind: str,
    x: np.ndarray,
    dt: float,
    t_end: float,
    output_times=None,
    refine: int = DEFAULT_REFINE,
    forcing_scale: float = 1.0,
) -> list:
    """Integrate the linearized correction system from delta_p(0, x) = 0.

    Parameters
    ----------
    pipe : PipeModel
    schedule : ParameterSchedule
    bc_kind : str
        "pp" or "pphi".
    x : np.ndarray
        Output grid; the solve itself runs on a `refine`-times finer grid.
    dt, t_end : float
        Crank-Nicolson step and final time.
    output_times : array-like, optional
        Times at which corrections are reported (default every step);
        non-aligned times are linearly interpolated.
    refine : int
        Internal grid refinement factor.
    forcing_scale : float
        Multiplier on the residual forcing; 1.0 for physics, other values
        for linearity diagnostics.

    Returns
    -------
    list of Correction
        Corrections restricted to the output grid.
    """
    if bc_kind not in BC_KINDS:
        raise InvalidParameterError(f"unknown bc kind {bc_kind!r}")
    if dt <= 0.0 or t_end <= 0.0:
        raise InvalidParameterError("dt and t_end must be positive")
    x = np.asarray(x, dtype=float)
    uniform_spacing(x)
    pp_case = bc_kind == BC_PP
    x_fine = _refined_grid(x, refine)
    dx = x_fine[1] - x_fine[0]
    alpha = pipe.alpha
    inv_dt = 1.0 / (pipe.sound_speed**2 * dt)
    take = slice(None, None, refine)

    t_tol = 1e-9 * max(1.0, t_end)
    if output_times is None:
        wanted = None
    else:
        wanted = np.asarray(output_times, dtype=float)
        if wanted.size and (wanted[0] < -t_tol or wanted[-1] > t_end + t_tol):
            raise InvalidParameterError("output_times must lie within [0, t_end]")

    n_steps = math.ceil((t_end - 1e-12) / dt)
    dp = np.zeros_like(x_fine)
    fr0 = ua_frame(pipe, schedule, 0.0, x_fine)
    c0 = _face_conductance(fr0, dx, alpha)

    outputs = []
    idx = 0

    def emit(t: float, dp_vec: np.ndarray, fr: UaFrame) -> Correction:
        dphi = _dphi_from_dp(fr, dp_vec, dx, alpha, pp_case)
        return Correction(t=t, dp=dp_vec[take].copy(), dphi=dphi[take].copy())

    first = emit(0.0, dp, fr0)
    if wanted is None:
        outputs.append(first)
    else:
        while idx < wanted.size and wanted[idx] <= t_tol:
            outputs.append(first)
            idx += 1

    t = 0.0
    for k in range(n_steps):
        t1 = min((k + 1) * dt, t_end)
        step = t1 - t
        inv_step = 1.0 / (pipe.sound_speed**2 * step)
        fr1 = ua_frame(pipe, schedule, t1, x_fine)
        c1 = _face_conductance(fr1, dx, alpha)
        rhs = (
            dp * inv_step
            + 0.5 * _apply_operator(c0, fr0.p, dp, pp_case)
            - 0.5 * forcing_scale * (fr0.r + fr1.r)
        )
        ab, i0, i1 = _assemble(c1, fr1.p, inv_step, 0.5, pp_case)
        sol = solve_banded((1, 1), ab, rhs[i0:i1])
        dp_new = np.zeros_like(dp)
        dp_new[i0:i1] = sol
        if wanted is None:
            outputs.append(emit(t1, dp_new, fr1))
        else:
            while idx < wanted.size and wanted[idx] <= t1 + t_tol:
                t_req = float(wanted[idx])
                if abs(t_req - t1) <= t_tol:
                    outputs.append(emit(t1, dp_new, fr1))
                else:
                    w = (t_req - t) / step
                    fr_req = ua_frame(pipe, schedule, t_req, x_fine)
                    outputs.append(emit(t_req, (1.0 - w) * dp + w * dp_new, fr_req))
                idx += 1
        dp, fr0, c0, t = dp_new, fr1, c1, t1
    return outputs


def steady_correction(
    pipe: PipeModel,
    schedule: ParameterSchedule,
    t: float,
    x: np.ndarray,
    bc_kind: str,
    refine: int = DEFAULT_REFINE,
):
    """Solve the linearized system with d_t delta_p dropped: A delta_p = r.

    This is the elliptic limit of `linearized_solve` and must agree with
    the quadrature-based corrections of the adiabatic module.
    Returns (delta_p, delta_phi) on the caller's grid.
    """
    if bc_kind not in BC_KINDS:
        raise InvalidParameterError(f"unknown bc kind {bc_kind!r}")
    x = np.asarray(x, dtype=float)
    uniform_spacing(x)
    pp_case = bc_kind == BC_PP
    x_fine = _refined_grid(x, refine)
    dx = x_fine[1] - x_fine[0]
    fr = ua_frame(pipe, schedule, t, x_fine)
    c = _face_conductance(fr, dx, pipe.alpha)
    # inv_dt = 0 and theta = -1 turns the stepping matrix into +A.
    ab, i0, i1 = _assemble(c, fr.p, 0.0, -1.0, pp_case)
    sol = solve_banded((1, 1), ab, fr.r[i0:i1])
    dp = np.zeros_like(x_fine)
    dp[i0:i1] = sol
    dphi = _dphi_from_dp(fr, dp, dx, pipe.alpha, pp_case)
    take = slice(None, None, refine)
    return dp[take].copy(), dphi[take].copy()
