"""Figure composition: two stacked panels, six fixed curve styles.

Everything is a pure function of the parsed bundle so that repeated runs
on the same directory produce identical image bytes.
"""
from __future__ import annotations

from typing import Dict, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .reader import VARIANTS, KindBundle

# variant -> (color, linestyle, legend label); fixed comparison convention:
# red for the reference pair, green for the unbalanced model, blue for the
# balanced baseline; solid means corrected (or exact), dashed means not.
STYLES: Dict[str, Tuple[str, str, str]] = {
    "reference": ("red", "-", "reference"),
    "ua_linearized": ("red", "--", "UA linearized"),
    "ua_perturbative": ("green", "-", "UA corrected"),
    "ua_base": ("green", "--", "UA uncorrected"),
    "ba_perturbative": ("blue", "-", "BA corrected"),
    "ba_base": ("blue", "--", "BA uncorrected"),
}
KIND_TITLES = {
    "pp": "pressure-pressure boundary data",
    "pphi": "pressure-flux boundary data",
}
FIGSIZE = (7.5, 6.0)  # inches
DPI = 150

# Deterministic SVG ids (matplotlib salts them with this string).
matplotlib.rcParams["svg.hashsalt"] = "plotview"


def pairwise_spread(bundle: KindBundle, variable: str) -> float:
    """Max over common times of the spread between all present curves.

    Returns ``nan`` when fewer than two curves share a time grid.
    """
    series = list(bundle.series.values())
    if len(series) < 2:
        return float("nan")
    common = series[0].t
    for vs in series[1:]:
        common = np.intersect1d(common, vs.t)
    if common.size == 0:
        return float("nan")
    stack = []
    for vs in series:
        idx = np.searchsorted(vs.t, common)
        stack.append(getattr(vs, variable)[idx])
    arr = np.vstack(stack)
    return float(np.max(arr.max(axis=0) - arr.min(axis=0)))


def _annotation(bundle: KindBundle) -> str:
    lines = []
    for variant in VARIANTS:
        if variant == "reference" or variant not in bundle.series:
            continue
        e_p = bundle.metrics.get((variant, "p"))
        e_phi = bundle.metrics.get((variant, "phi"))
        if e_p is None or e_phi is None:
            continue
        label = STYLES[variant][2]
        lines.append(f"{label}: errL2 p {e_p:.2e}, phi {e_phi:.2e}")
    if not lines:
        lines.append("metrics unavailable")
    lines.append(
        f"max pairwise spread: p {pairwise_spread(bundle, 'p'):.2e}, "
        f"phi {pairwise_spread(bundle, 'phi'):.2e}"
    )
    if bundle.missing:
        lines.append("missing: " + ", ".join(bundle.missing))
    return "\n".join(lines)


def compose(bundle: KindBundle):
    """Build the two-panel comparison figure for one bc kind.

    Parameters
    ----------
    bundle : KindBundle
        Parsed series, metrics and missing-file list for one boundary kind.

    Returns
    -------
    matplotlib.figure.Figure
        Pressure on the top panel, flux on the bottom, one line per
        available variant, legend plus metrics/spread annotation.
    """
    fig, (ax_p, ax_phi) = plt.subplots(
        2, 1, sharex=True, figsize=FIGSIZE, dpi=DPI, constrained_layout=True
    )
    for variant in VARIANTS:
        vs = bundle.series.get(variant)
        if vs is None:
            continue  # missing file renders as a gap in the line-up
        color, style, label = STYLES[variant]
        ax_p.plot(vs.t, vs.p, color=color, linestyle=style, linewidth=1.2, label=label)
        ax_phi.plot(vs.t, vs.phi, color=color, linestyle=style, linewidth=1.2, label=label)

    probe = bundle.probe_x
    at = f" at x = {probe:g}" if probe is not None else ""
    ax_p.set_ylabel("p (dimensionless)")
    ax_phi.set_ylabel("phi (dimensionless)")
    ax_phi.set_xlabel("t (dimensionless)")
    ax_p.set_title(f"{KIND_TITLES.get(bundle.kind, bundle.kind)}{at}")
    ax_p.legend(loc="best", fontsize=8, ncol=2)
    ax_phi.text(
        0.99,
        0.02,
        _annotation(bundle),
        transform=ax_phi.transAxes,
        ha="right",
        va="bottom",
        fontsize=7,
        family="monospace",
        bbox={"boxstyle": "round", "facecolor": "white", "alpha": 0.8, "linewidth": 0.5},
    )
    for ax in (ax_p, ax_phi):
        ax.grid(True, linewidth=0.3, alpha=0.5)
    return fig


def save(fig, path, fmt: str) -> None:
    """Write a figure without run-dependent metadata (stable bytes)."""
    if fmt == "raster":
        fig.savefig(path, format="png")
    else:
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
