"""Pipe data, unit scaling, schedules and field containers."""
import numpy as np
import pytest

from linepack import (
    BoundarySpec,
    FieldSnapshot,
    InvalidParameterError,
    ParameterSchedule,
    PipeModel,
    StateInvalidError,
    frozen_schedule,
    make_scaling,
    paper_schedule,
)

SI_PIPE = PipeModel(length=1e5, alpha=900.0, sound_speed=300.0, ref_pressure=5e6)


@pytest.mark.parametrize("field", ["length", "alpha", "sound_speed", "ref_pressure"])
@pytest.mark.parametrize("bad", [0.0, -1.0, np.nan, np.inf])
def test_pipe_rejects_nonpositive_parameters(field, bad):
    kwargs = dict(length=1.0, alpha=8.6, sound_speed=1.0, ref_pressure=1.0)
    kwargs[field] = bad
    with pytest.raises(InvalidParameterError):
        PipeModel(**kwargs)


def test_dimensionless_pipe_is_unit_sized():
    pipe = PipeModel.dimensionless(8.57)
    assert (pipe.length, pipe.sound_speed, pipe.ref_pressure) == (1.0, 1.0, 1.0)
    assert pipe.alpha == 8.57


def test_make_scaling_flux_and_friction_number():
    s = make_scaling(SI_PIPE, 3600.0)
    # phi0 = p0 L / (c_s^2 T), friction number alpha L^3 / (c_s^4 T^2)
    assert s.flux == pytest.approx(5e6 * 1e5 / (300.0**2 * 3600.0), rel=1e-15)
    assert s.alpha == pytest.approx(900.0 * 1e15 / (300.0**4 * 3600.0**2), rel=1e-15)
    assert (s.length, s.time, s.pressure) == (1e5, 3600.0, 5e6)


def test_scaling_round_trips_snapshots():
    s = make_scaling(SI_PIPE, 3600.0)
    rng = np.random.default_rng(11)
    x = np.linspace(0.0, 1e5, 7)
    snap = FieldSnapshot(t=1800.0, x=x, p=5e6 * (1.0 + 0.1 * rng.random(7)), phi=rng.random(7))
    back = s.redim_snapshot(s.nondim_snapshot(snap))
    np.testing.assert_allclose(back.p, snap.p, rtol=1e-15)
    np.testing.assert_allclose(back.phi, snap.phi, rtol=1e-15)
    np.testing.assert_allclose(back.x, snap.x, rtol=1e-15)
    assert back.t == pytest.approx(snap.t, rel=1e-15)


def test_scaled_equations_keep_their_form():
    # A pressure profile satisfying the momentum balance in SI units must
    # satisfy it in scaled units with the scaled friction number.
    s = make_scaling(SI_PIPE, 3600.0)
    pipe = s.pipe()
    x = np.linspace(0.0, 1e5, 1001)
    g0 = 0.3 / 1e5  # 1/m
    p = 5e6 * np.sqrt(1.0 - 2.0 * g0 * x)
    phi = np.full_like(x, 5e6 * np.sqrt(2.0 * g0 / 900.0))
    snap = s.nondim_snapshot(FieldSnapshot(t=0.0, x=x, p=p, phi=phi))
    dpdx = np.gradient(snap.p, snap.x)
    resid = dpdx + pipe.alpha * snap.phi * np.abs(snap.phi) / (2.0 * snap.p)
    assert np.max(np.abs(resid[1:-1])) < 1e-6


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(t=0.0, x=np.array([0.0, 1.0]), p=np.array([1.0, 1.0, 1.0]), phi=np.zeros(2)),
        dict(t=0.0, x=np.array([0.0, 0.0]), p=np.ones(2), phi=np.zeros(2)),
        dict(t=0.0, x=np.array([0.0, 1.0]), p=np.array([1.0, -0.5]), phi=np.zeros(2)),
        dict(t=0.0, x=np.array([0.0, 1.0]), p=np.array([1.0, np.nan]), phi=np.zeros(2)),
        dict(t=0.0, x=np.array([0.0, 1.0]), p=np.ones(2), phi=np.array([0.0, np.inf])),
    ],
)
def test_snapshot_rejects_invalid_fields(kwargs):
    with pytest.raises(StateInvalidError):
        FieldSnapshot(**kwargs)


def test_paper_schedule_values_and_derivatives():
    sched = paper_schedule(0.05, 2.0, 0.3)
    assert sched.lam(0.0) == pytest.approx(0.15)  # (2 + 1) * lambda0
    assert abs(float(sched.lam(1.0))) < 1e-15  # cos(pi t / tau) zero crossing
    assert sched.lam(2.0) == pytest.approx(-0.15)
    assert float(sched.lam_cum(0.0)) == 0.0
    t = np.linspace(0.0, 5.0, 11)
    h = 1e-6
    fd_dot = (sched.lam(t + h) - sched.lam(t - h)) / (2.0 * h)
    np.testing.assert_allclose(sched.lam_dot(t), fd_dot, atol=1e-7)
    fd_cum = (sched.lam_cum(t + h) - sched.lam_cum(t - h)) / (2.0 * h)
    np.testing.assert_allclose(sched.lam(t), fd_cum, atol=1e-7)
    np.testing.assert_allclose(sched.g0(t), 0.3)
    np.testing.assert_allclose(sched.g0_dot(t), 0.0)


def test_frozen_schedule_is_constant():
    sched = frozen_schedule(0.4, 0.25)
    t = np.array([0.0, 1.7, 9.0])
    np.testing.assert_allclose(sched.lam(t), 0.4)
    np.testing.assert_allclose(sched.lam_dot(t), 0.0)
    np.testing.assert_allclose(sched.lam_cum(t), 0.4 * t)
    np.testing.assert_allclose(sched.g0(t), 0.25)


def test_schedule_requires_vanishing_initial_integral():
    with pytest.raises(InvalidParameterError):
        ParameterSchedule(
            lam=lambda t: 1.0,
            lam_dot=lambda t: 0.0,
            lam_cum=lambda t: 1.0 + t,
            g0=lambda t: 0.3,
            g0_dot=lambda t: 0.0,
        )


def test_boundary_spec_validates_kind():
    with pytest.raises(InvalidParameterError):
        BoundarySpec(kind="flux-flux", left=lambda t: 1.0, right=lambda t: 1.0)
