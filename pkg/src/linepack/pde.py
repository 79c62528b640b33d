"""Reference finite-volume solver for the friction-dominated pipe equations.

Eliminating phi through the momentum balance turns the system into a single
degenerate-parabolic equation for pressure,

    c_s^-2 dp/dt = -d_x F(p, d_x p),
    F = sign(-d_x p) sqrt(2 p |d_x p| / alpha),

discretized node-centered with face fluxes from centered gradients and
arithmetic-mean face pressures.  That face average makes the stationary
profile p = p0 sqrt(1 - 2 G0 x) an exact discrete fixed point: the product
pbar * dp telescopes in p^2.  Time stepping is backward Euler with a Newton
iteration and an analytic tridiagonal Jacobian; an explicit mode exists for
cross-checks.  Boundary fluxes are recovered from the half-cell balances so
the discrete line-pack identity holds to the Newton tolerance every step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .core import BC_PP, BoundarySpec, FieldSnapshot, PipeModel
from .errors import (
    GridAlignmentError,
    InvalidParameterError,
    StateInvalidError,
    StepError,
)
from .numerics import uniform_spacing

# Gradient regularization scale, as a fraction of p0/L.
EPS_FACTOR = 1e-8
_MAX_HALVINGS = 8


@dataclass(frozen=True)
class PdeState:
    """Pressure on the solver grid at one instant, with derived node fluxes."""

    t: float
    p: np.ndarray
    phi: np.ndarray


def flux_closure(p: np.ndarray, dx: float, alpha: float, eps: float) -> np.ndarray:
    """Face mass fluxes F_{j+1/2} from nodal pressures.

    F = -sqrt(2 pbar / alpha) * g / (g^2 + eps^2)^(1/4) with g the centered
    pressure gradient and pbar the arithmetic face mean; for |g| >> eps this
    is sign(-g) sqrt(2 pbar |g| / alpha).
    """
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0) or not np.all(np.isfinite(p)):
        raise StateInvalidError("flux closure needs positive finite pressures")
    g = (p[1:] - p[:-1]) / dx
    pbar = 0.5 * (p[1:] + p[:-1])
    return -np.sqrt(2.0 * pbar / alpha) * g / (g * g + eps * eps) ** 0.25


def _flux_jacobian(p: np.ndarray, dx: float, alpha: float, eps: float):
    """d F_{j+1/2} / d p_j and d F_{j+1/2} / d p_{j+1} for all faces."""
    g = (p[1:] - p[:-1]) / dx
    pbar = 0.5 * (p[1:] + p[:-1])
    root = np.sqrt(2.0 * pbar / alpha)
    q = g * g + eps * eps
    f = -root * g / q**0.25
    df_dpbar = f / (2.0 * pbar)
    df_dg = -root * (0.5 * g * g + eps * eps) / q**1.25
    d_left = 0.5 * df_dpbar - df_dg / dx
    d_right = 0.5 * df_dpbar + df_dg / dx
    return d_left, d_right


def node_flux(faces: np.ndarray, f_left: float, f_right: float) -> np.ndarray:
    """Node-centered flux: face averages inside, recovered values at the ends."""
    out = np.empty(faces.size + 1)
    out[1:-1] = 0.5 * (faces[:-1] + faces[1:])
    out[0] = f_left
    out[-1] = f_right
    return out


class ReferenceSolver:
    """Owns one scenario's grid, boundary data and step diagnostics.

    Parameters
    ----------
    pipe : PipeModel
    x : np.ndarray
        Uniform node grid covering [0, L].
    bc : BoundarySpec
    eps : float, optional
        Gradient regularization; defaults to EPS_FACTOR * p0 / L.
    newton_tol : float
        Newton update tolerance relative to the pressure scale.
    max_newton : int
        Iteration cap before a step error is raised.
    """

    def __init__(
        self,
        pipe: PipeModel,
        x: np.ndarray,
        bc: BoundarySpec,
        eps: float | None = None,
        newton_tol: float = 1e-14,
        max_newton: int = 30,
    ) -> None:
        self.pipe = pipe
        self.x = np.asarray(x, dtype=float)
        self.dx = uniform_spacing(self.x)
        if abs(self.x[0]) > 1e-12 * pipe.length or abs(self.x[-1] - pipe.length) > 1e-9 * pipe.length:
            raise InvalidParameterError("solver grid must cover [0, L]")
        self.bc = bc
        self.eps = EPS_FACTOR * pipe.ref_pressure / pipe.length if eps is None else float(eps)
        self.newton_tol = float(newton_tol)
        self.max_newton = int(max_newton)
        self.c2 = pipe.sound_speed**2
        self.max_defect = 0.0
        self.newton_iterations = 0

    def state_from(self, snap: FieldSnapshot) -> PdeState:
        """Initial PdeState from a FieldSnapshot on the solver grid."""
        if snap.x.shape != self.x.shape or np.max(np.abs(snap.x - self.x)) > 1e-9 * self.pipe.length:
            raise GridAlignmentError("snapshot grid does not match the solver grid")
        faces = flux_closure(snap.p, self.dx, self.pipe.alpha, self.eps)
        phi = node_flux(faces, 1.5 * faces[0] - 0.5 * faces[1], 1.5 * faces[-1] - 0.5 * faces[-2])
        return PdeState(t=snap.t, p=snap.p.copy(), phi=phi)

    def snapshot(self, state: PdeState) -> FieldSnapshot:
        return FieldSnapshot(t=state.t, x=self.x, p=state.p, phi=state.phi)

    def _bc_values(self, t: float):
        left = float(self.bc.left(t))
        right = float(self.bc.right(t))
        if not (math.isfinite(left) and left > 0.0):
            raise StateInvalidError(f"left boundary pressure must be positive, got {left!r}")
        if self.bc.kind == BC_PP and not (math.isfinite(right) and right > 0.0):
            raise StateInvalidError(f"right boundary pressure must be positive, got {right!r}")
        return left, right

    def _newton_step(self, pn: np.ndarray, t1: float, dt: float) -> np.ndarray:
        alpha, dx, eps = self.pipe.alpha, self.dx, self.eps
        n = pn.size
        inv = 1.0 / (self.c2 * dt)
        left, right = self._bc_values(t1)
        pp_case = self.bc.kind == BC_PP

        pt = pn.copy()
        pt[0] = left
        if pp_case:
            pt[-1] = right
        scale = self.newton_tol * max(1.0, float(np.max(np.abs(pn))))
        for _ in range(self.max_newton):
            self.newton_iterations += 1
            faces = flux_closure(pt, dx, alpha, eps)
            d_left, d_right = _flux_jacobian(pt, dx, alpha, eps)
            if pp_case:
                res = (pt[1:-1] - pn[1:-1]) * inv + (faces[1:] - faces[:-1]) / dx
                main = inv + (d_left[1:] - d_right[:-1]) / dx
                sub = -d_left[:-1] / dx
                sup = d_right[1:] / dx
                m = n - 2
            else:
                res = np.empty(n - 1)
                res[:-1] = (pt[1:-1] - pn[1:-1]) * inv + (faces[1:] - faces[:-1]) / dx
                res[-1] = (pt[-1] - pn[-1]) * inv + (right - faces[-1]) / (0.5 * dx)
                main = np.empty(n - 1)
                sub = np.empty(n - 1)
                sup = np.empty(n - 1)
                main[:-1] = inv + (d_left[1:] - d_right[:-1]) / dx
                sub[:-1] = -d_left[:-1] / dx
                sup[:-1] = d_right[1:] / dx
                main[-1] = inv - d_right[-1] / (0.5 * dx)
                sub[-1] = -d_left[-1] / (0.5 * dx)
                sup[-1] = 0.0
                m = n - 1
            ab = np.zeros((3, m))
            ab[0, 1:] = sup[:-1]
            ab[1, :] = main
            ab[2, :-1] = sub[1:]
            delta = solve_banded((1, 1), ab, -res)
            if pp_case:
                pt[1:-1] += delta
            else:
                pt[1:] += delta
            if float(np.max(np.abs(delta))) < scale:
                return pt
        raise StepError(
            f"Newton failed to converge in {self.max_newton} iterations at t = {t1:.6g} "
            f"(last update {float(np.max(np.abs(delta))):.3e}, residual {float(np.max(np.abs(res))):.3e})"
        )

    def _explicit_step(self, pn: np.ndarray, t1: float, dt: float) -> np.ndarray:
        alpha, dx, eps = self.pipe.alpha, self.dx, self.eps
        left, right = self._bc_values(t1)
        faces = flux_closure(pn, dx, alpha, eps)
        g = (pn[1:] - pn[:-1]) / dx
        pbar = 0.5 * (pn[1:] + pn[:-1])
        # Effective diffusivity c^2 * (-dF/dg); the centered-gradient stencil
        # is stable for dt <= dx^2 / (2 max D).
        diff = self.c2 * float(
            np.max(np.sqrt(2.0 * pbar / alpha) * (0.5 * g * g + eps * eps) / (g * g + eps * eps) ** 1.25)
        )
        dt_max = dx * dx / (2.0 * diff) if diff > 0.0 else math.inf
        if dt > dt_max:
            raise StepError(f"explicit step dt = {dt:.3e} exceeds stability limit {dt_max:.3e}")
        p1 = pn.copy()
        p1[1:-1] = pn[1:-1] - self.c2 * dt * (faces[1:] - faces[:-1]) / dx
        p1[0] = left
        if self.bc.kind == BC_PP:
            p1[-1] = right
        else:
            p1[-1] = pn[-1] - self.c2 * dt * (right - faces[-1]) / (0.5 * dx)
        return p1

    def _record_defect(self, pn: np.ndarray, p1: np.ndarray, dt: float, f0: float, fn: float) -> None:
        dx = self.dx
        m1 = dx * (0.5 * p1[0] + float(np.sum(p1[1:-1])) + 0.5 * p1[-1])
        m0 = dx * (0.5 * pn[0] + float(np.sum(pn[1:-1])) + 0.5 * pn[-1])
        defect = abs((m1 - m0) + self.c2 * dt * (fn - f0))
        rel = defect / (abs(m1 - m0) + self.c2 * dt * (abs(fn) + abs(f0)) + 1e-300)
        self.max_defect = max(self.max_defect, rel)

    def advance(self, state: PdeState, dt: float, method: str = "implicit", _depth: int = 0) -> PdeState:
        """One conservative step (or a chain of halved substeps on positivity loss)."""
        if dt <= 0.0:
            raise InvalidParameterError("dt must be positive")
        pn = state.p
        t1 = state.t + dt
        if method == "implicit":
            p1 = self._newton_step(pn, t1, dt)
            flux_level = p1
        elif method == "explicit":
            p1 = self._explicit_step(pn, t1, dt)
            flux_level = pn
        else:
            raise InvalidParameterError(f"unknown stepping method {method!r}")
        if np.any(p1 <= 0.0):
            if _depth >= _MAX_HALVINGS:
                raise StateInvalidError(
                    f"pressure positivity lost at t = {t1:.6g} after {_MAX_HALVINGS} dt halvings"
                )
            half = self.advance(state, 0.5 * dt, method, _depth + 1)
            return self.advance(half, 0.5 * dt, method, _depth + 1)
        faces = flux_closure(flux_level, self.dx, self.pipe.alpha, self.eps)
        f0 = faces[0] + 0.5 * self.dx * (p1[0] - pn[0]) / (self.c2 * dt)
        if self.bc.kind == BC_PP:
            fn = faces[-1] - 0.5 * self.dx * (p1[-1] - pn[-1]) / (self.c2 * dt)
        else:
            fn = float(self.bc.right(t1))
        self._record_defect(pn, p1, dt, f0, fn)
        phi = node_flux(flux_closure(p1, self.dx, self.pipe.alpha, self.eps), f0, fn)
        return PdeState(t=t1, p=p1, phi=phi)

    def solve(
        self,
        initial: PdeState,
        t_end: float,
        dt: float,
        output_times=None,
        method: str = "implicit",
    ) -> list:
        """March from the initial state to t_end, collecting requested outputs.

        Outputs fall back to every step time when `output_times` is None;
        non-aligned requests are linearly interpolated between steps.
        """
        if t_end <= initial.t:
            raise InvalidParameterError("t_end must exceed the initial time")
        t_tol = 1e-9 * max(1.0, abs(t_end))
        if output_times is None:
            wanted = None
        else:
            wanted = np.asarray(output_times, dtype=float)
            if wanted.size and (wanted[0] < initial.t - t_tol or wanted[-1] > t_end + t_tol):
                raise InvalidParameterError("output_times must lie within [t0, t_end]")

        outputs = []
        idx = 0
        state = initial
        if wanted is None:
            outputs.append(state)
        else:
            while idx < wanted.size and wanted[idx] <= state.t + t_tol:
                outputs.append(state)
                idx += 1
        while state.t < t_end - t_tol:
            step = min(dt, t_end - state.t)
            prev = state
            state = self.advance(prev, step, method)
            if wanted is None:
                outputs.append(state)
                continue
            while idx < wanted.size and wanted[idx] <= state.t + t_tol:
                t_req = wanted[idx]
                if abs(t_req - state.t) <= t_tol:
                    outputs.append(state)
                else:
                    w = (t_req - prev.t) / (state.t - prev.t)
                    outputs.append(
                        PdeState(
                            t=float(t_req),
                            p=(1.0 - w) * prev.p + w * state.p,
                            phi=(1.0 - w) * prev.phi + w * state.phi,
                        )
                    )
                idx += 1
        return outputs


def solve_scenario(
    pipe: PipeModel,
    bc: BoundarySpec,
    initial: FieldSnapshot,
    t_end: float,
    dt: float,
    output_times=None,
    eps: float | None = None,
    method: str = "implicit",
) -> list:
    """Run one scenario and return FieldSnapshots at the requested times."""
    solver = ReferenceSolver(pipe, initial.x, bc, eps=eps)
    states = solver.solve(solver.state_from(initial), t_end, dt, output_times, method)
    return [solver.snapshot(s) for s in states]
