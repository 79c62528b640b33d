"""Parsing of a linepack results directory.

The contract is file-based: one ``<kind>_<variant>.csv`` per solver variant
with ``#`` header lines followed by ``t,x,p,phi`` rows, plus a shared
``metrics.csv``.  Nothing here imports the simulator.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

# Variant names in legend order; must match the producer's file naming.
VARIANTS = (
    "reference",
    "ua_linearized",
    "ua_perturbative",
    "ua_base",
    "ba_perturbative",
    "ba_base",
)
BC_KINDS = ("pp", "pphi")
TARGET_PROBE = 0.5  # midpoint, in pipe lengths


class PlotviewError(Exception):
    """Unusable or absent input data."""


@dataclass(frozen=True)
class VariantSeries:
    """One variant's probe series at a single position."""

    variant: str
    probe_x: float
    t: np.ndarray
    p: np.ndarray
    phi: np.ndarray


@dataclass(frozen=True)
class KindBundle:
    """Everything needed to draw one figure: all series for one bc kind."""

    kind: str
    series: Dict[str, VariantSeries]
    missing: Tuple[str, ...]
    # (variant, variable) -> relative L2 error against the reference
    metrics: Dict[Tuple[str, str], float]

    @property
    def probe_x(self) -> Optional[float]:
        for vs in self.series.values():
            return vs.probe_x
        return None


def _parse_table(path: Path) -> np.ndarray:
    rows = [ln for ln in path.read_text().splitlines() if ln and not ln.startswith("#")]
    if not rows:
        raise PlotviewError(f"{path} holds no data rows")
    return np.genfromtxt(io.StringIO("\n".join(rows)), delimiter=",", names=True, dtype=None,
                         encoding="utf-8")


def read_series(path: Path, variant: str) -> VariantSeries:
    """Load one variant file, keeping the probe nearest the pipe midpoint."""
    data = _parse_table(path)
    for column in ("t", "x", "p", "phi"):
        if column not in (data.dtype.names or ()):
            raise PlotviewError(f"{path} lacks a {column!r} column")
    x = np.asarray(data["x"], dtype=float)
    probes = np.unique(x)
    probe = float(probes[np.argmin(np.abs(probes - TARGET_PROBE))])
    keep = x == probe
    t = np.asarray(data["t"], dtype=float)[keep]
    order = np.argsort(t)
    return VariantSeries(
        variant=variant,
        probe_x=probe,
        t=t[order],
        p=np.asarray(data["p"], dtype=float)[keep][order],
        phi=np.asarray(data["phi"], dtype=float)[keep][order],
    )


def read_metrics(path: Path, kind: str, probe_x: Optional[float]) -> Dict[Tuple[str, str], float]:
    """Relative L2 errors for one bc kind, restricted to the plotted probe."""
    data = np.atleast_1d(_parse_table(path))
    out: Dict[Tuple[str, str], float] = {}
    for row in data:
        if str(row["bc_kind"]) != kind:
            continue
        if probe_x is not None and abs(float(row["probe_x"]) - probe_x) > 1e-9:
            continue
        out[(str(row["variant"]), str(row["variable"]))] = float(row["err_l2_rel"])
    return out


def read_results(results_dir) -> Tuple[Dict[str, KindBundle], Tuple[str, ...]]:
    """Scan a results directory into per-kind bundles plus warnings.

    Returns
    -------
    bundles : dict
        ``kind -> KindBundle`` for every bc kind with at least one variant
        file present.
    warnings : tuple of str
        One message per missing variant or metrics file; empty means the
        directory was complete.
    """
    root = Path(results_dir)
    if not root.is_dir():
        raise PlotviewError(f"results directory {root} does not exist")

    warnings = []
    bundles: Dict[str, KindBundle] = {}
    for kind in BC_KINDS:
        present: Dict[str, VariantSeries] = {}
        missing = []
        for variant in VARIANTS:
            path = root / f"{kind}_{variant}.csv"
            if path.is_file():
                present[variant] = read_series(path, variant)
            else:
                missing.append(variant)
        if not present:
            continue
        for variant in missing:
            warnings.append(f"{kind}_{variant}.csv is missing; curve omitted")

        metrics_path = root / "metrics.csv"
        metrics: Dict[Tuple[str, str], float] = {}
        if metrics_path.is_file():
            probe = next(iter(present.values())).probe_x
            metrics = read_metrics(metrics_path, kind, probe)
        else:
            warnings.append("metrics.csv is missing; annotation reduced")
        bundles[kind] = KindBundle(
            kind=kind, series=present, missing=tuple(missing), metrics=metrics
        )

    if not bundles:
        raise PlotviewError(f"no variant files found under {root}")
    return bundles, tuple(warnings)
