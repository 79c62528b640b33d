"""Scenario runner and comparison harness.

Reads a plain-text config, builds the oscillatory draw/pack scenario, runs
all solver variants against the reference solver for each boundary kind,
computes per-probe error metrics, and writes deterministic CSV files that
downstream tooling (plotting, for one) consumes.

All computation happens in scaled units: lengths in pipe lengths, times in
the scaling time unit, pressures in p0, fluxes in p0 L/(c_s^2 T).  A
dimensional config only changes the scale factors recorded in the output
headers; a dimensionless config sets them to 1.
"""
from __future__ import annotations

import configparser
import dataclasses
import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .adiabatic import (
    boundary_from_schedule,
    delta_p,
    delta_phi_pp,
    ua_base,
    ua_frame,
    ua_solution,
)
from .balanced import ba_drive_from_schedule, ba_solution
from .core import (
    BC_KINDS,
    BoundarySpec,
    FieldSnapshot,
    ParameterSchedule,
    PipeModel,
    ScalingUnits,
    make_scaling,
    paper_schedule,
)
from .errors import GridAlignmentError, InvalidParameterError
from .linearized import linearized_solve
from .numerics import integral, uniform_spacing
from .pde import ReferenceSolver
from .profile import exact_fields

# Variant order fixes both execution bookkeeping and file-write order.
VARIANTS = (
    "reference",
    "ua_linearized",
    "ua_perturbative",
    "ua_base",
    "ba_perturbative",
    "ba_base",
)

# Scaled friction number of the default scenario: alpha L^3 / (c_s^4 T^2)
# for a 100 km pipe, alpha = 900 m/s^2, c_s = 300 m/s, T = 1 h.
ALPHA_DIMLESS_DEFAULT = 900.0 * 1e5**3 / (300.0**4 * 3600.0**2)

_UNIT_TABLE = {
    "m": ("length", 1.0),
    "km": ("length", 1e3),
    "s": ("time", 1.0),
    "min": ("time", 60.0),
    "h": ("time", 3600.0),
    "Pa": ("pressure", 1.0),
    "kPa": ("pressure", 1e3),
    "MPa": ("pressure", 1e6),
    "bar": ("pressure", 1e5),
    "m/s": ("velocity", 1.0),
    "m/s^2": ("acceleration", 1.0),
    "m/s2": ("acceleration", 1.0),
}

_DEFAULTS = {
    "pipe": {
        "length": "100 km",
        "alpha": "900 m/s^2",
        "sound_speed": "300 m/s",
        "ref_pressure": "5 MPa",
    },
    "units": {
        "dimensionless": "false",
        "time_unit": "1 h",
    },
    "schedule": {
        "lambda0": "0.05",
        "tau": "2",
        "g0": "0.3",
    },
    "bc": {
        "kind": "both",
    },
    "grid": {
        "nx": "201",
        "dt": "0.01",
        "t_end": "5",
        "output_every": "1",
        "probes": "0.5",
        "snapshot_times": "",
    },
    "solver": {
        "eps_factor": "1e-8",
        "newton_tol": "1e-14",
        "refine": "4",
    },
}

_PIPE_DIMENSIONS = {
    "length": "length",
    "alpha": "acceleration",
    "sound_speed": "velocity",
    "ref_pressure": "pressure",
}


def _parse_quantity(text: str, key: str, dimension: Optional[str], scaled: bool) -> float:
    parts = text.split()
    if len(parts) == 1:
        if dimension is not None and not scaled:
            raise InvalidParameterError(
                f"config value {key} = {text!r} needs a unit annotation (e.g. '1 m')"
            )
        try:
            return float(parts[0])
        except ValueError:
            raise InvalidParameterError(f"config value {key} = {text!r} is not a number")
    if len(parts) == 2:
        if dimension is None:
            raise InvalidParameterError(f"config value {key} is dimensionless, drop the unit")
        if scaled:
            raise InvalidParameterError(
                f"config value {key} = {text!r}: unit annotations are not allowed in dimensionless mode"
            )
        value, unit = parts
        if unit not in _UNIT_TABLE:
            raise InvalidParameterError(f"unknown unit {unit!r} in config value {key}")
        dim, factor = _UNIT_TABLE[unit]
        if dim != dimension:
            raise InvalidParameterError(
                f"config value {key} expects a {dimension} unit, got {unit!r}"
            )
        try:
            return float(value) * factor
        except ValueError:
            raise InvalidParameterError(f"config value {key} = {text!r} is not a number")
    raise InvalidParameterError(f"cannot parse config value {key} = {text!r}")


def _parse_bool(text: str, key: str) -> bool:
    v = text.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise InvalidParameterError(f"config value {key} = {text!r} is not a boolean")


def _parse_float_list(text: str) -> Tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.replace(",", " ").split())


@dataclass(frozen=True)
class Scenario:
    """Fully resolved, scaled scenario description."""

    scaling: ScalingUnits
    lambda0: float
    tau: float
    g0: float
    bc_kinds: Tuple[str, ...]
    nx: int
    dt: float
    t_end: float
    output_every: int
    probes: Tuple[float, ...]
    snapshot_times: Tuple[float, ...]
    eps_factor: float
    newton_tol: float
    refine: int
    dimensionless: bool
    config_hash: str
    canonical: str

    @property
    def pipe(self) -> PipeModel:
        return PipeModel.dimensionless(self.scaling.alpha)

    def schedule(self) -> ParameterSchedule:
        return paper_schedule(self.lambda0, self.tau, self.g0)

    def x_grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.nx)

    def record_times(self) -> np.ndarray:
        n = int(round(self.t_end / self.dt))
        if abs(n * self.dt - self.t_end) > 1e-9:
            raise InvalidParameterError("t_end must be an integer multiple of dt")
        idx = np.arange(0, n + 1, self.output_every)
        if idx[-1] != n:
            idx = np.append(idx, n)
        return idx * self.dt


def _merge_config(path: Optional[str], overrides: Sequence[str]) -> Dict[str, Dict[str, str]]:
    merged = {sec: dict(keys) for sec, keys in _DEFAULTS.items()}
    if path is not None:
        cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        read = cp.read(path)
        if not read:
            raise InvalidParameterError(f"config file {path!r} not found or unreadable")
        for sec in cp.sections():
            if sec not in merged:
                raise InvalidParameterError(f"unknown config section [{sec}]")
            for key, value in cp.items(sec):
                if key not in merged[sec]:
                    raise InvalidParameterError(f"unknown config key {sec}.{key}")
                merged[sec][key] = value.strip()
    for ov in overrides:
        if "=" not in ov or "." not in ov.split("=", 1)[0]:
            raise InvalidParameterError(f"override {ov!r} must look like section.key=value")
        target, value = ov.split("=", 1)
        sec, key = target.split(".", 1)
        sec, key = sec.strip(), key.strip()
        if sec not in merged or key not in merged[sec]:
            raise InvalidParameterError(f"unknown config key {sec}.{key}")
        merged[sec][key] = value.strip()
    return merged


def load_config(
    path: Optional[str] = None,
    overrides: Sequence[str] = (),
    dimensionless: Optional[bool] = None,
) -> Scenario:
    """Resolve config file + overrides + mode flag into a Scenario."""
    merged = _merge_config(path, overrides)
    scaled = (
        _parse_bool(merged["units"]["dimensionless"], "units.dimensionless")
        if dimensionless is None
        else bool(dimensionless)
    )

    if scaled:
        # Dimensional pipe defaults do not apply; untouched keys fall back
        # to the unit pipe with the default friction number.
        fallback = {
            "length": 1.0,
            "alpha": ALPHA_DIMLESS_DEFAULT,
            "sound_speed": 1.0,
            "ref_pressure": 1.0,
        }
        vals = {}
        for key, default in fallback.items():
            raw = merged["pipe"][key]
            if raw == _DEFAULTS["pipe"][key]:
                vals[key] = default
            else:
                vals[key] = _parse_quantity(raw, f"pipe.{key}", None, True)
        if (vals["length"], vals["sound_speed"], vals["ref_pressure"]) != (1.0, 1.0, 1.0):
            raise InvalidParameterError(
                "dimensionless mode fixes length, sound_speed and ref_pressure to 1"
            )
        scaling = ScalingUnits(length=1.0, time=1.0, pressure=1.0, flux=1.0, alpha=vals["alpha"])
    else:
        pipe = PipeModel(
            **{
                key: _parse_quantity(merged["pipe"][key], f"pipe.{key}", dim, False)
                for key, dim in _PIPE_DIMENSIONS.items()
            }
        )
        time_unit = _parse_quantity(merged["units"]["time_unit"], "units.time_unit", "time", False)
        scaling = make_scaling(pipe, time_unit)

    kind_raw = merged["bc"]["kind"].strip().lower()
    if kind_raw == "both":
        bc_kinds: Tuple[str, ...] = BC_KINDS
    elif kind_raw in BC_KINDS:
        bc_kinds = (kind_raw,)
    else:
        raise InvalidParameterError(f"bc.kind must be pp, pphi or both, got {kind_raw!r}")

    def bare(sec: str, key: str) -> float:
        return _parse_quantity(merged[sec][key], f"{sec}.{key}", None, True)

    nx = int(bare("grid", "nx"))
    output_every = int(bare("grid", "output_every"))
    refine = int(bare("solver", "refine"))
    if nx < 8:
        raise InvalidParameterError("grid.nx must be at least 8")
    if output_every < 1:
        raise InvalidParameterError("grid.output_every must be at least 1")
    if refine < 1:
        raise InvalidParameterError("solver.refine must be at least 1")
    dt = bare("grid", "dt")
    t_end = bare("grid", "t_end")
    if dt <= 0.0 or t_end <= 0.0:
        raise InvalidParameterError("grid.dt and grid.t_end must be positive")
    probes = _parse_float_list(merged["grid"]["probes"])
    if not probes:
        raise InvalidParameterError("grid.probes must name at least one position")
    if any(p < 0.0 or p > 1.0 for p in probes):
        raise InvalidParameterError("probes are scaled positions in [0, 1]")
    snapshot_times = _parse_float_list(merged["grid"]["snapshot_times"])
    if any(t < 0.0 or t > t_end + 1e-12 for t in snapshot_times):
        raise InvalidParameterError("snapshot_times must lie in [0, t_end]")

    fields = {
        "lambda0": bare("schedule", "lambda0"),
        "tau": bare("schedule", "tau"),
        "g0": bare("schedule", "g0"),
        "bc_kinds": bc_kinds,
        "nx": nx,
        "dt": dt,
        "t_end": t_end,
        "output_every": output_every,
        "probes": probes,
        "snapshot_times": snapshot_times,
        "eps_factor": bare("solver", "eps_factor"),
        "newton_tol": bare("solver", "newton_tol"),
        "refine": refine,
        "dimensionless": scaled,
    }
    canonical_parts = [
        f"alpha={scaling.alpha!r}",
        f"scales=({scaling.length!r},{scaling.time!r},{scaling.pressure!r},{scaling.flux!r})",
    ] + [f"{k}={v!r}" for k, v in sorted(fields.items())]
    canonical = "\n".join(canonical_parts)
    digest = hashlib.sha256(canonical.encode()).hexdigest()
    return Scenario(scaling=scaling, config_hash=digest, canonical=canonical, **fields)


@dataclass(frozen=True)
class VariantSeries:
    """Probe time series plus optional full-field snapshots for one variant."""

    bc_kind: str
    variant: str
    times: np.ndarray
    probes: Tuple[float, ...]
    p: np.ndarray
    phi: np.ndarray
    snapshots: Tuple[FieldSnapshot, ...] = ()


@dataclass(frozen=True)
class MetricRecord:
    bc_kind: str
    variant: str
    variable: str
    probe_x: float
    err_l2_rel: float
    err_linf_rel: float


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Scenario
    series: Dict[Tuple[str, str], VariantSeries]
    metrics: Tuple[MetricRecord, ...]
    diagnostics: Dict[Tuple[str, str], Dict[str, float]]
    failures: Dict[Tuple[str, str], str]


def error_metrics(t_base, v_base, t_other, v_other) -> Tuple[float, float]:
    """Relative L2/Linf error of `other` against the baseline series."""
    t_base = np.asarray(t_base, dtype=float)
    t_other = np.asarray(t_other, dtype=float)
    v_base = np.asarray(v_base, dtype=float)
    v_other = np.asarray(v_other, dtype=float)
    if t_base.shape != t_other.shape or v_base.shape != v_other.shape:
        raise GridAlignmentError("series lengths differ")
    if t_base.size and float(np.max(np.abs(t_base - t_other))) > 1e-12 * max(
        1.0, float(np.max(np.abs(t_base)))
    ):
        raise GridAlignmentError("series are sampled at different times")
    diff = v_other - v_base
    norm2 = float(np.sqrt(np.sum(v_base**2)))
    norm_inf = float(np.max(np.abs(v_base))) if v_base.size else 0.0
    d2 = float(np.sqrt(np.sum(diff**2)))
    d_inf = float(np.max(np.abs(diff))) if diff.size else 0.0
    l2 = d2 / norm2 if norm2 > 0.0 else (0.0 if d2 == 0.0 else math.inf)
    linf = d_inf / norm_inf if norm_inf > 0.0 else (0.0 if d_inf == 0.0 else math.inf)
    return l2, linf


def _variant_snapshots(
    scenario: Scenario,
    schedule: ParameterSchedule,
    kind: str,
    variant: str,
    x: np.ndarray,
    merged: np.ndarray,
):
    pipe = scenario.pipe
    extra: Dict[str, float] = {}
    if variant == "reference":
        bc = boundary_from_schedule(pipe, schedule, kind, scenario.nx)
        solver = ReferenceSolver(
            pipe,
            x,
            bc,
            eps=scenario.eps_factor * pipe.ref_pressure / pipe.length,
            newton_tol=scenario.newton_tol,
        )
        init = solver.state_from(ua_base(pipe, schedule, 0.0, x))
        states = solver.solve(init, float(merged[-1]), scenario.dt, merged)
        snaps = [solver.snapshot(s) for s in states]
        extra["max_conservation_defect"] = solver.max_defect
        extra["newton_iterations"] = float(solver.newton_iterations)
    elif variant == "ua_linearized":
        corr = linearized_solve(
            pipe,
            schedule,
            kind,
            x,
            scenario.dt,
            float(merged[-1]),
            output_times=merged,
            refine=scenario.refine,
        )
        snaps = []
        for c in corr:
            fr = ua_frame(pipe, schedule, c.t, x)
            snaps.append(FieldSnapshot(t=c.t, x=x, p=fr.p + c.dp, phi=fr.phi + c.dphi))
    elif variant in ("ua_perturbative", "ua_base"):
        corrected = variant == "ua_perturbative"
        snaps = [
            ua_solution(pipe, schedule, float(t), x, kind, corrected=corrected) for t in merged
        ]
    elif variant in ("ba_perturbative", "ba_base"):
        corrected = variant == "ba_perturbative"
        endpoints = ba_drive_from_schedule(pipe, schedule, kind, scenario.nx)
        snaps = []
        for t in merged:
            p_in, p_out, dp_in, dp_out = endpoints(float(t))
            snaps.append(
                ba_solution(
                    pipe, p_in, p_out, dp_in, dp_out, float(t), x, kind, corrected=corrected
                )
            )
    else:
        raise InvalidParameterError(f"unknown variant {variant!r}")
    return snaps, extra


def compute_scenario(scenario: Scenario, max_workers: Optional[int] = None) -> ScenarioResult:
    """Run every variant for every configured bc kind; never raises on variant failure."""
    x = scenario.x_grid()
    t_rec = scenario.record_times()
    merged = np.unique(np.concatenate([t_rec, np.asarray(scenario.snapshot_times, dtype=float)]))
    schedule = scenario.schedule()

    probe_idx = []
    dx = 1.0 / (scenario.nx - 1)
    for p in scenario.probes:
        i = int(round(p / dx))
        if abs(x[i] - p) > 1e-9:
            raise GridAlignmentError(f"probe x = {p!r} does not coincide with a grid node")
        probe_idx.append(i)

    keys = [(kind, variant) for kind in scenario.bc_kinds for variant in VARIANTS]
    series: Dict[Tuple[str, str], VariantSeries] = {}
    diagnostics: Dict[Tuple[str, str], Dict[str, float]] = {}
    failures: Dict[Tuple[str, str], str] = {}

    workers = max_workers or min(len(keys), 8)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            key: pool.submit(_variant_snapshots, scenario, schedule, key[0], key[1], x, merged)
            for key in keys
        }
        results = {}
        for key in keys:
            try:
                results[key] = futures[key].result()
            except Exception as exc:
                failures[key] = f"{key[0]}/{key[1]}: {type(exc).__name__}: {exc}"

    rec_pos = np.searchsorted(merged, t_rec)
    snap_pos = np.searchsorted(merged, np.asarray(scenario.snapshot_times, dtype=float))
    for key, (snaps, extra) in results.items():
        p_series = np.array([[snaps[k].p[i] for i in probe_idx] for k in rec_pos])
        phi_series = np.array([[snaps[k].phi[i] for i in probe_idx] for k in rec_pos])
        series[key] = VariantSeries(
            bc_kind=key[0],
            variant=key[1],
            times=t_rec,
            probes=scenario.probes,
            p=p_series,
            phi=phi_series,
            snapshots=tuple(snaps[k] for k in snap_pos),
        )
        if extra:
            diagnostics[key] = extra

    metrics = []
    for kind in scenario.bc_kinds:
        ref = series.get((kind, "reference"))
        if ref is None:
            continue
        for variant in VARIANTS[1:]:
            other = series.get((kind, variant))
            if other is None:
                continue
            for var_name in ("p", "phi"):
                base_cols = getattr(ref, var_name)
                other_cols = getattr(other, var_name)
                for j, probe in enumerate(scenario.probes):
                    l2, linf = error_metrics(
                        ref.times, base_cols[:, j], other.times, other_cols[:, j]
                    )
                    metrics.append(
                        MetricRecord(
                            bc_kind=kind,
                            variant=variant,
                            variable=var_name,
                            probe_x=probe,
                            err_l2_rel=l2,
                            err_linf_rel=linf,
                        )
                    )
    return ScenarioResult(
        scenario=scenario,
        series=series,
        metrics=tuple(metrics),
        diagnostics=diagnostics,
        failures=failures,
    )


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _series_header(scenario: Scenario, kind: str, variant: str, extra: Dict[str, float]):
    s = scenario.scaling
    lines = [
        "# linepack scenario series (scaled units)",
        f"# config_hash: {scenario.config_hash}",
        f"# bc_kind: {kind}",
        f"# variant: {variant}",
        f"# scales: time_s={_fmt(s.time)} length_m={_fmt(s.length)} "
        f"pressure_pa={_fmt(s.pressure)} flux_kg_m2_s={_fmt(s.flux)}",
        f"# alpha_dimless: {_fmt(s.alpha)}",
        f"# grid: nx={scenario.nx} dt={_fmt(scenario.dt)} t_end={_fmt(scenario.t_end)}",
        f"# probes: {' '.join(_fmt(p) for p in scenario.probes)}",
    ]
    for key in sorted(extra):
        lines.append(f"# {key}: {_fmt(extra[key])}")
    return lines


def write_result(result: ScenarioResult, out_dir) -> list:
    """Write one CSV per variant plus metrics (and a failure manifest if needed)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenario = result.scenario
    written = []
    for kind in scenario.bc_kinds:
        for variant in VARIANTS:
            vs = result.series.get((kind, variant))
            if vs is None:
                continue
            extra = result.diagnostics.get((kind, variant), {})
            lines = _series_header(scenario, kind, variant, extra)
            lines.append("t,x,p,phi")
            for k, t in enumerate(vs.times):
                for j, probe in enumerate(vs.probes):
                    lines.append(
                        f"{_fmt(t)},{_fmt(probe)},{_fmt(vs.p[k, j])},{_fmt(vs.phi[k, j])}"
                    )
            path = out / f"{kind}_{variant}.csv"
            path.write_text("\n".join(lines) + "\n")
            written.append(path)
            if vs.snapshots:
                lines = _series_header(scenario, kind, variant, {})
                lines.append("t,x,p,phi")
                for snap in vs.snapshots:
                    for i in range(snap.x.size):
                        lines.append(
                            f"{_fmt(snap.t)},{_fmt(snap.x[i])},{_fmt(snap.p[i])},{_fmt(snap.phi[i])}"
                        )
                path = out / f"{kind}_{variant}_fields.csv"
                path.write_text("\n".join(lines) + "\n")
                written.append(path)

    lines = [
        "# linepack metrics (relative to the reference series)",
        f"# config_hash: {scenario.config_hash}",
        "bc_kind,variant,variable,probe_x,err_l2_rel,err_linf_rel",
    ]
    for rec in result.metrics:
        lines.append(
            f"{rec.bc_kind},{rec.variant},{rec.variable},{_fmt(rec.probe_x)},"
            f"{_fmt(rec.err_l2_rel)},{_fmt(rec.err_linf_rel)}"
        )
    path = out / "metrics.csv"
    path.write_text("\n".join(lines) + "\n")
    written.append(path)

    if result.failures:
        lines = [result.failures[key] for key in sorted(result.failures)]
        path = out / "failures.txt"
        path.write_text("\n".join(lines) + "\n")
        written.append(path)
    return written


def run(
    config_path: Optional[str],
    out_dir,
    overrides: Sequence[str] = (),
    dimensionless: Optional[bool] = None,
) -> ScenarioResult:
    """Load config, compute all variants, write results; returns the result."""
    scenario = load_config(config_path, overrides, dimensionless)
    result = compute_scenario(scenario)
    write_result(result, out_dir)
    return result


def convergence_study(scenario: Scenario, levels: int = 3) -> list:
    """Self-convergence of the reference solver under uniform grid refinement.

    Runs the configured scenario's first bc kind at nx, 2(nx-1)+1, ... and
    reports the L2 difference of midpoint probe series between consecutive
    levels plus the observed order.
    """
    if levels < 2:
        raise InvalidParameterError("levels must be at least 2")
    kind = scenario.bc_kinds[0]
    schedule = scenario.schedule()
    probe = scenario.probes[0]
    series = []
    sizes = []
    for lvl in range(levels):
        nx = (scenario.nx - 1) * 2**lvl + 1
        x = np.linspace(0.0, 1.0, nx)
        i = int(round(probe * (nx - 1)))
        if abs(x[i] - probe) > 1e-9:
            raise GridAlignmentError(f"probe {probe!r} is not a node at nx = {nx}")
        pipe = scenario.pipe
        bc = boundary_from_schedule(pipe, schedule, kind, nx)
        solver = ReferenceSolver(
            pipe,
            x,
            bc,
            eps=scenario.eps_factor * pipe.ref_pressure / pipe.length,
            newton_tol=scenario.newton_tol,
        )
        init = solver.state_from(ua_base(pipe, schedule, 0.0, x))
        t_rec = scenario.record_times()
        states = solver.solve(init, float(t_rec[-1]), scenario.dt, t_rec)
        series.append(
            (
                np.array([s.p[i] for s in states]),
                np.array([s.phi[i] for s in states]),
            )
        )
        sizes.append(nx)
    records = []
    for lvl in range(levels - 1):
        d_p = float(np.sqrt(np.sum((series[lvl][0] - series[lvl + 1][0]) ** 2)))
        d_phi = float(np.sqrt(np.sum((series[lvl][1] - series[lvl + 1][1]) ** 2)))
        records.append(
            {
                "bc_kind": kind,
                "nx_coarse": sizes[lvl],
                "nx_fine": sizes[lvl + 1],
                "diff_l2_p": d_p,
                "diff_l2_phi": d_phi,
            }
        )
    for lvl in range(len(records) - 1):
        records[lvl]["order_p"] = math.log2(records[lvl]["diff_l2_p"] / records[lvl + 1]["diff_l2_p"])
        records[lvl]["order_phi"] = math.log2(
            records[lvl]["diff_l2_phi"] / records[lvl + 1]["diff_l2_phi"]
        )
    return records


def validate_scenario(scenario: Scenario, drift_steps: int = 10_000) -> list:
    """Invariant suite: returns (name, passed, detail) triples."""
    checks = []
    pipe = scenario.pipe
    schedule = scenario.schedule()
    x = scenario.x_grid()
    dx = uniform_spacing(x)

    result = compute_scenario(scenario)
    ok = not result.failures
    checks.append(
        (
            "all variants completed",
            ok,
            "no failures" if ok else "; ".join(sorted(result.failures.values())),
        )
    )
    for kind in scenario.bc_kinds:
        extra = result.diagnostics.get((kind, "reference"))
        if extra is None:
            checks.append((f"conservation defect ({kind})", False, "reference run missing"))
            continue
        defect = extra["max_conservation_defect"]
        checks.append(
            (f"conservation defect ({kind})", defect < 1e-12, f"max relative defect {defect:.3e}")
        )

    frozen = dataclasses.replace(scenario, lambda0=0.0, t_end=min(1.0, scenario.t_end))
    frozen_result = compute_scenario(frozen)
    for kind in frozen.bc_kinds:
        ref = frozen_result.series.get((kind, "reference"))
        spread = 0.0
        missing = ref is None
        if ref is not None:
            for variant in VARIANTS[1:]:
                other = frozen_result.series.get((kind, variant))
                if other is None:
                    missing = True
                    continue
                for var_name in ("p", "phi"):
                    _, linf = error_metrics(
                        ref.times,
                        getattr(ref, var_name)[:, 0],
                        other.times,
                        getattr(other, var_name)[:, 0],
                    )
                    spread = max(spread, linf)
        checks.append(
            (
                f"frozen-schedule agreement ({kind})",
                (not missing) and spread < 1e-3,
                f"max relative spread {spread:.3e}" if not missing else "variant missing",
            )
        )

    t_samples = scenario.record_times()[:: max(1, len(scenario.record_times()) // 10)]
    worst_orth = 0.0
    worst_end = 0.0
    for t in t_samples:
        fr = ua_frame(pipe, schedule, float(t), x)
        dphi = delta_phi_pp(pipe, schedule, float(t), x)
        dp = delta_p(pipe, schedule, float(t), x, dphi)
        denom = integral(np.abs(fr.phi * dphi), dx)
        if denom > 0.0:
            worst_orth = max(worst_orth, abs(integral(fr.phi * dphi, dx)) / denom)
        scale = float(np.max(np.abs(dp)))
        if scale > 0.0:
            worst_end = max(worst_end, abs(float(dp[-1])) / scale)
    checks.append(
        ("pp orthogonality", worst_orth < 1e-8, f"max relative weighted integral {worst_orth:.3e}")
    )
    checks.append(
        ("pp endpoint pressure correction", worst_end < 1e-8, f"max |dp(L)|/max|dp| {worst_end:.3e}")
    )

    stationary = exact_fields(pipe, 0.0, scenario.g0, 0.0, x)
    bc = BoundarySpec(
        kind="pp",
        left=lambda t: float(stationary.p[0]),
        right=lambda t: float(stationary.p[-1]),
    )
    solver = ReferenceSolver(
        pipe,
        x,
        bc,
        eps=scenario.eps_factor * pipe.ref_pressure / pipe.length,
        newton_tol=scenario.newton_tol,
    )
    state = solver.state_from(stationary)
    for _ in range(drift_steps):
        state = solver.advance(state, scenario.dt)
    drift = float(np.max(np.abs(state.p - stationary.p)) / np.max(stationary.p))
    checks.append(
        (
            f"stationary fixed point ({drift_steps} steps)",
            drift < 1e-9,
            f"relative drift {drift:.3e}",
        )
    )
    return checks
