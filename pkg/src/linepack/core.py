"""Pipe description, unit scaling, parameter schedules and field containers.

The governing equations are the friction-dominated isothermal gas flow
equations for pressure p(t, x) and mass flux phi(t, x) on a single pipe,

    (1/c_s^2) dp/dt + dphi/dx = 0,
    dp/dx + alpha * phi |phi| / (2 p) = 0,

with alpha = f c_s^2 / d collecting friction factor, sound speed and pipe
diameter.  Everything downstream works equally well in SI units or in the
rescaled units produced by `make_scaling`, where the pipe reduces to
length 1, sound speed 1, reference pressure 1 and a single dimensionless
friction number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidParameterError, StateInvalidError

# Boundary condition kinds: pressure at both ends, or pressure at x=0 with
# mass flux at x=L.
BC_PP = "pp"
BC_PPHI = "pphi"
BC_KINDS = (BC_PP, BC_PPHI)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidParameterError(msg)


@dataclass(frozen=True)
class PipeModel:
    """Static pipe data.

    Parameters
    ----------
    length : float
        Pipe length [m].
    alpha : float
        Effective friction coefficient f*c_s^2/d [m/s^2].
    sound_speed : float
        Isothermal sound speed [m/s].
    ref_pressure : float
        Reference (initial inlet) pressure [Pa].
    """

    length: float
    alpha: float
    sound_speed: float
    ref_pressure: float

    def __post_init__(self) -> None:
        for name in ("length", "alpha", "sound_speed", "ref_pressure"):
            v = getattr(self, name)
            _require(math.isfinite(v) and v > 0.0, f"{name} must be positive, got {v!r}")

    @classmethod
    def dimensionless(cls, alpha: float) -> "PipeModel":
        """Unit pipe carrying only the dimensionless friction number."""
        return cls(length=1.0, alpha=alpha, sound_speed=1.0, ref_pressure=1.0)


@dataclass(frozen=True)
class ScalingUnits:
    """Scale factors mapping SI fields to dimensionless ones.

    t -> t/time, x -> x/length, p -> p/pressure, phi -> phi/flux.  In the
    scaled variables the governing equations keep their form with unit
    sound speed and the friction number `alpha`.
    """

    length: float
    time: float
    pressure: float
    flux: float
    alpha: float

    def pipe(self) -> PipeModel:
        """The rescaled pipe (length 1, sound speed 1, pressure 1)."""
        return PipeModel.dimensionless(self.alpha)

    def nondim_snapshot(self, snap: "FieldSnapshot") -> "FieldSnapshot":
        return FieldSnapshot(
            t=snap.t / self.time,
            x=snap.x / self.length,
            p=snap.p / self.pressure,
            phi=snap.phi / self.flux,
        )

    def redim_snapshot(self, snap: "FieldSnapshot") -> "FieldSnapshot":
        return FieldSnapshot(
            t=snap.t * self.time,
            x=snap.x * self.length,
            p=snap.p * self.pressure,
            phi=snap.phi * self.flux,
        )


def make_scaling(pipe: PipeModel, time_unit: float) -> ScalingUnits:
    """Build the scaling for `pipe` with the chosen time unit [s].

    The flux unit phi0 = p0 L / (c_s^2 T) makes the scaled mass balance
    coefficient-free; the friction number is alpha L^3 / (c_s^4 T^2).
    """
    _require(math.isfinite(time_unit) and time_unit > 0.0, "time_unit must be positive")
    c2 = pipe.sound_speed**2
    phi0 = pipe.ref_pressure * pipe.length / (c2 * time_unit)
    alpha_t = pipe.alpha * pipe.length**3 / (c2**2 * time_unit**2)
    return ScalingUnits(
        length=pipe.length,
        time=time_unit,
        pressure=pipe.ref_pressure,
        flux=phi0,
        alpha=alpha_t,
    )


@dataclass(frozen=True)
class FieldSnapshot:
    """Pressure and mass-flux fields at a single instant on a node grid."""

    t: float
    x: np.ndarray
    p: np.ndarray
    phi: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        p = np.asarray(self.p, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "phi", phi)
        if not (x.shape == p.shape == phi.shape) or x.ndim != 1:
            raise StateInvalidError("x, p, phi must be 1-d arrays of equal length")
        if x.size < 2 or np.any(np.diff(x) <= 0.0):
            raise StateInvalidError("x must be strictly increasing")
        if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
            raise StateInvalidError("pressure must be finite and positive")
        if not np.all(np.isfinite(phi)):
            raise StateInvalidError("flux must be finite")


@dataclass(frozen=True)
class ParameterSchedule:
    """Time-dependent parameters (lambda(t), G0(t)) of the base solution.

    All members are vectorized callables of time.  `lam_cum` is the running
    integral of `lam` with lam_cum(0) = 0; `lam_dot` and `g0_dot` are exact
    derivatives where the schedule is analytic and smoothed numerical
    derivatives for calibrated schedules.
    """

    lam: Callable
    lam_dot: Callable
    lam_cum: Callable
    g0: Callable
    g0_dot: Callable

    def __post_init__(self) -> None:
        c0 = float(self.lam_cum(0.0))
        if abs(c0) > 1e-12 * max(1.0, abs(float(self.lam(0.0)))):
            raise InvalidParameterError(f"lam_cum(0) must vanish, got {c0!r}")


def paper_schedule(lambda0: float, tau: float, g0: float) -> ParameterSchedule:
    """Oscillatory draw/pack schedule with constant G0.

    lambda(t) = lambda0 (2 + cos(2 pi t / tau)) cos(pi t / tau); its running
    integral follows from the product-to-sum identity
    lambda(t) = lambda0 (5/2 cos(pi t/tau) + 1/2 cos(3 pi t/tau)).
    """
    _require(math.isfinite(lambda0), "lambda0 must be finite")
    _require(math.isfinite(tau) and tau > 0.0, "tau must be positive")
    _require(math.isfinite(g0) and g0 > 0.0, "g0 must be positive")
    w = math.pi / tau

    def lam(t):
        t = np.asarray(t, dtype=float)
        return lambda0 * (2.0 + np.cos(2.0 * w * t)) * np.cos(w * t)

    def lam_dot(t):
        t = np.asarray(t, dtype=float)
        return lambda0 * (
            -2.0 * w * np.sin(2.0 * w * t) * np.cos(w * t)
            - w * (2.0 + np.cos(2.0 * w * t)) * np.sin(w * t)
        )

    def lam_cum(t):
        t = np.asarray(t, dtype=float)
        return (lambda0 / w) * (2.5 * np.sin(w * t) + np.sin(3.0 * w * t) / 6.0)

    def g0_of(t):
        return g0 + 0.0 * np.asarray(t, dtype=float)

    def g0_dot(t):
        return 0.0 * np.asarray(t, dtype=float)

    return ParameterSchedule(lam=lam, lam_dot=lam_dot, lam_cum=lam_cum, g0=g0_of, g0_dot=g0_dot)


def frozen_schedule(lam_value: float, g0_value: float) -> ParameterSchedule:
    """Constant-parameter schedule; the base solution is then exact."""
    _require(math.isfinite(lam_value), "lam_value must be finite")
    _require(math.isfinite(g0_value) and g0_value > 0.0, "g0_value must be positive")

    def const(v):
        def f(t):
            return v + 0.0 * np.asarray(t, dtype=float)

        return f

    def lam_cum(t):
        return lam_value * np.asarray(t, dtype=float)

    return ParameterSchedule(
        lam=const(lam_value),
        lam_dot=const(0.0),
        lam_cum=lam_cum,
        g0=const(g0_value),
        g0_dot=const(0.0),
    )


@dataclass(frozen=True)
class BoundarySpec:
    """Boundary data as callables of time.

    `left` is always the pressure at x = 0.  For kind "pp", `right` is the
    pressure at x = L; for kind "pphi" it is the mass flux at x = L.
    """

    kind: str
    left: Callable
    right: Callable

    def __post_init__(self) -> None:
        if self.kind not in BC_KINDS:
            raise InvalidParameterError(f"unknown bc kind {self.kind!r}; expected one of {BC_KINDS}")
