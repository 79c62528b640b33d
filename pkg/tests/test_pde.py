"""Reference finite-volume solver."""
import numpy as np
import pytest

from linepack import (
    BoundarySpec,
    GridAlignmentError,
    InvalidParameterError,
    ReferenceSolver,
    StateInvalidError,
    StepError,
    boundary_from_schedule,
    exact_fields,
    frozen_schedule,
    solve_scenario,
)
from linepack.pde import flux_closure, node_flux

FROZEN = frozen_schedule(0.05, 0.3)


def _stationary_bc(snap):
    return BoundarySpec(
        kind="pp", left=lambda t: float(snap.p[0]), right=lambda t: float(snap.p[-1])
    )


def test_flux_closure_exact_on_stationary_profile(pipe, x201):
    # pbar * g telescopes in p^2, so the discrete face flux equals the
    # stationary flux on every face to round-off.
    p = np.sqrt(1.0 - 0.6 * x201)
    faces = flux_closure(p, float(x201[1] - x201[0]), pipe.alpha, 1e-8)
    np.testing.assert_allclose(faces, np.sqrt(0.6 / pipe.alpha), rtol=1e-12)


def test_flux_closure_sign_follows_gradient(pipe):
    p_down = np.array([1.0, 0.9, 0.8])
    p_up = p_down[::-1]
    down = flux_closure(p_down, 0.5, pipe.alpha, 1e-8)
    up = flux_closure(p_up, 0.5, pipe.alpha, 1e-8)
    assert np.all(down > 0.0)
    assert np.all(up < 0.0)


def test_flux_closure_rejects_nonpositive_pressure(pipe):
    with pytest.raises(StateInvalidError):
        flux_closure(np.array([1.0, -0.1, 0.8]), 0.5, pipe.alpha, 1e-8)


def test_node_flux_averages_faces():
    out = node_flux(np.array([1.0, 3.0]), -2.0, 7.0)
    np.testing.assert_allclose(out, [-2.0, 2.0, 7.0])


def test_stationary_profile_is_discrete_fixed_point(pipe, x201):
    snap = exact_fields(pipe, 0.0, 0.3, 0.0, x201)
    solver = ReferenceSolver(pipe, x201, _stationary_bc(snap))
    state = solver.state_from(snap)
    for _ in range(200):
        state = solver.advance(state, 0.01)
    drift = np.max(np.abs(state.p - snap.p)) / np.max(snap.p)
    assert drift < 1e-10
    assert solver.max_defect < 1e-12


@pytest.mark.parametrize("kind", ["pp", "pphi"])
def test_short_transient_tracks_exact_family(pipe, kind):
    x = np.linspace(0.0, 1.0, 101)
    bc = boundary_from_schedule(pipe, FROZEN, kind, 101)
    solver = ReferenceSolver(pipe, x, bc)
    state = solver.state_from(exact_fields(pipe, 0.05, 0.3, 0.0, x))
    states = solver.solve(state, 0.2, 0.01)
    final = states[-1]
    ex = exact_fields(pipe, 0.05, 0.3, final.t, x)
    assert np.max(np.abs(final.p - ex.p)) / np.max(ex.p) < 1e-5
    assert np.max(np.abs(final.phi - ex.phi)) / np.max(np.abs(ex.phi)) < 1e-4
    assert solver.max_defect < 1e-12


def test_pphi_outlet_flux_is_pinned(pipe):
    x = np.linspace(0.0, 1.0, 51)
    bc = boundary_from_schedule(pipe, FROZEN, "pphi", 51)
    solver = ReferenceSolver(pipe, x, bc)
    state = solver.state_from(exact_fields(pipe, 0.05, 0.3, 0.0, x))
    state = solver.advance(state, 0.01)
    assert state.phi[-1] == float(bc.right(state.t))


def test_explicit_matches_implicit_on_short_horizon(pipe):
    x = np.linspace(0.0, 1.0, 51)
    snap = exact_fields(pipe, 0.0, 0.3, 0.0, x)
    bc = _stationary_bc(snap)
    results = {}
    for method in ("implicit", "explicit"):
        solver = ReferenceSolver(pipe, x, bc)
        state = solver.state_from(snap)
        for _ in range(50):
            state = solver.advance(state, 2e-4, method=method)
        results[method] = state.p
    np.testing.assert_allclose(results["explicit"], results["implicit"], atol=1e-8)


def test_explicit_step_enforces_stability_limit(pipe):
    x = np.linspace(0.0, 1.0, 51)
    snap = exact_fields(pipe, 0.0, 0.3, 0.0, x)
    solver = ReferenceSolver(pipe, x, _stationary_bc(snap))
    state = solver.state_from(snap)
    with pytest.raises(StepError, match="stability"):
        solver.advance(state, 0.01, method="explicit")


def test_newton_iteration_cap_raises(pipe):
    x = np.linspace(0.0, 1.0, 51)
    snap = exact_fields(pipe, 0.0, 0.3, 0.0, x)
    bc = BoundarySpec(
        kind="pp", left=lambda t: float(snap.p[0]) * 1.2, right=lambda t: float(snap.p[-1])
    )
    solver = ReferenceSolver(pipe, x, bc, max_newton=1)
    with pytest.raises(StepError, match="Newton"):
        solver.advance(solver.state_from(snap), 0.01)


def test_boundary_positivity_is_checked(pipe):
    x = np.linspace(0.0, 1.0, 51)
    snap = exact_fields(pipe, 0.0, 0.3, 0.0, x)
    bc = BoundarySpec(kind="pp", left=lambda t: -1.0, right=lambda t: 0.5)
    solver = ReferenceSolver(pipe, x, bc)
    with pytest.raises(StateInvalidError):
        solver.advance(solver.state_from(snap), 0.01)


def test_state_from_rejects_foreign_grid(pipe, x201):
    snap = exact_fields(pipe, 0.0, 0.3, 0.0, np.linspace(0.0, 1.0, 101))
    solver = ReferenceSolver(pipe, x201, _stationary_bc(snap))
    with pytest.raises(GridAlignmentError):
        solver.state_from(snap)


def test_grid_must_cover_pipe(pipe):
    snap_bc = BoundarySpec(kind="pp", left=lambda t: 1.0, right=lambda t: 0.8)
    with pytest.raises(InvalidParameterError):
        ReferenceSolver(pipe, np.linspace(0.0, 0.5, 26), snap_bc)


def test_solve_interpolates_requested_times(pipe):
    x = np.linspace(0.0, 1.0, 51)
    bc = boundary_from_schedule(pipe, FROZEN, "pp", 51)
    solver = ReferenceSolver(pipe, x, bc)
    init = solver.state_from(exact_fields(pipe, 0.05, 0.3, 0.0, x))
    out = solver.solve(init, 0.02, 0.01, output_times=[0.0, 0.005, 0.01, 0.02])
    assert [round(s.t, 6) for s in out] == [0.0, 0.005, 0.01, 0.02]
    # the in-between request is the linear blend of the bracketing steps
    np.testing.assert_allclose(out[1].p, 0.5 * (out[0].p + out[2].p), rtol=1e-12)


def test_solve_lands_exactly_on_t_end(pipe):
    x = np.linspace(0.0, 1.0, 51)
    bc = boundary_from_schedule(pipe, FROZEN, "pp", 51)
    solver = ReferenceSolver(pipe, x, bc)
    init = solver.state_from(exact_fields(pipe, 0.05, 0.3, 0.0, x))
    out = solver.solve(init, 0.025, 0.01)
    assert out[-1].t == pytest.approx(0.025, abs=1e-12)


def test_solve_rejects_out_of_range_outputs(pipe):
    x = np.linspace(0.0, 1.0, 51)
    bc = boundary_from_schedule(pipe, FROZEN, "pp", 51)
    solver = ReferenceSolver(pipe, x, bc)
    init = solver.state_from(exact_fields(pipe, 0.05, 0.3, 0.0, x))
    with pytest.raises(InvalidParameterError):
        solver.solve(init, 0.02, 0.01, output_times=[0.0, 0.05])
    with pytest.raises(InvalidParameterError):
        solver.solve(init, 0.0, 0.01)


def test_solve_scenario_wrapper_returns_snapshots(pipe):
    x = np.linspace(0.0, 1.0, 51)
    bc = boundary_from_schedule(pipe, FROZEN, "pp", 51)
    init = exact_fields(pipe, 0.05, 0.3, 0.0, x)
    snaps = solve_scenario(pipe, bc, init, 0.05, 0.01)
    assert len(snaps) == 6
    assert snaps[-1].t == pytest.approx(0.05, abs=1e-12)
    assert np.all(snaps[-1].p > 0.0)
