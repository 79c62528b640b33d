"""End-to-end checks of the command line interface via subprocess."""
import subprocess
import sys

import numpy as np
import pytest

from linepack import PipeModel, paper_schedule, schedule_drive
from linepack.harness import ALPHA_DIMLESS_DEFAULT

TINY_CFG = """\
[schedule]
lambda0 = 0.05
tau = 2
g0 = 0.3
[grid]
nx = 51
dt = 0.05
t_end = 0.25
probes = 0.5
"""


def run_cli(*argv, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "linepack.cli", *argv],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


@pytest.fixture()
def tiny_cfg(tmp_path):
    path = tmp_path / "tiny.ini"
    path.write_text(TINY_CFG)
    return path


def test_run_writes_results(tiny_cfg, tmp_path):
    out = tmp_path / "results"
    proc = run_cli("run", "--config", str(tiny_cfg), "--dimensionless", "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    assert (out / "pp_reference.csv").exists()
    assert (out / "pphi_ua_linearized.csv").exists()
    assert (out / "metrics.csv").exists()
    assert "metrics.csv" in proc.stdout


def test_run_bc_flag_restricts_kind(tiny_cfg, tmp_path):
    out = tmp_path / "results"
    proc = run_cli(
        "run", "--config", str(tiny_cfg), "--dimensionless", "--bc", "pp", "--out", str(out)
    )
    assert proc.returncode == 0, proc.stderr
    assert (out / "pp_reference.csv").exists()
    assert not (out / "pphi_reference.csv").exists()


def test_run_set_override(tiny_cfg, tmp_path):
    out = tmp_path / "results"
    proc = run_cli(
        "run",
        "--config",
        str(tiny_cfg),
        "--dimensionless",
        "--bc",
        "pp",
        "--set",
        "grid.t_end=0.1",
        "--out",
        str(out),
    )
    assert proc.returncode == 0, proc.stderr
    rows = [
        ln
        for ln in (out / "pp_reference.csv").read_text().splitlines()
        if ln and not ln.startswith("#") and not ln.startswith("t,")
    ]
    assert len(rows) == 3  # t = 0, 0.05, 0.1


def test_unknown_config_key_exits_2(tiny_cfg):
    proc = run_cli("run", "--config", str(tiny_cfg), "--set", "pipe.radius=1")
    assert proc.returncode == 2
    assert "error:" in proc.stderr


def test_missing_subcommand_shows_usage():
    proc = run_cli()
    assert proc.returncode == 2
    assert "usage" in (proc.stderr + proc.stdout).lower()


def test_validate_passes(tmp_path):
    proc = run_cli(
        "validate",
        "--dimensionless",
        "--set",
        "grid.dt=0.05",
        "--set",
        "grid.t_end=0.25",
        "--drift-steps",
        "50",
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "[PASS]" in proc.stdout
    assert "[FAIL]" not in proc.stdout


def test_convergence_writes_table(tmp_path):
    out = tmp_path / "conv"
    proc = run_cli(
        "convergence",
        "--dimensionless",
        "--bc",
        "pp",
        "--set",
        "grid.nx=21",
        "--set",
        "grid.dt=0.05",
        "--set",
        "grid.t_end=0.25",
        "--levels",
        "3",
        "--out",
        str(out),
    )
    assert proc.returncode == 0, proc.stderr
    table = (out / "convergence.csv").read_text().splitlines()
    header = next(ln for ln in table if not ln.startswith("#"))
    for column in ("nx_coarse", "nx_fine", "diff_l2_p", "order_p"):
        assert column in header


def test_calibrate_round_trip(tmp_path):
    # Boundary data generated from a known schedule; recovery should match
    # to spline-interpolation accuracy at this sampling density.
    pipe = PipeModel.dimensionless(ALPHA_DIMLESS_DEFAULT)
    schedule = paper_schedule(0.05, 2.0, 0.3)
    t = np.linspace(0.0, 1.0, 81)
    drive = schedule_drive(pipe, schedule)
    lines = ["t,left,right"]
    for tk in t:
        lines.append(
            f"{float(tk):.17g},{float(drive.p_in(tk)):.17g},{float(drive.p_out(tk)):.17g}"
        )
    src = tmp_path / "boundary.csv"
    src.write_text("\n".join(lines) + "\n")

    out = tmp_path / "schedule.csv"
    proc = run_cli(
        "calibrate",
        "--dimensionless",
        "--bc",
        "pp",
        "--set",
        "grid.nx=101",
        "--input",
        str(src),
        "--out",
        str(out),
    )
    assert proc.returncode == 0, proc.stderr
    data = np.genfromtxt(out, delimiter=",", names=True)
    assert data.dtype.names == ("t", "lam", "g0", "lam_dot", "g0_dot")
    lam_true = np.array([schedule.lam(tk) for tk in t])
    g0_true = np.array([schedule.g0(tk) for tk in t])
    assert np.max(np.abs(data["lam"] - lam_true)) < 1e-3
    assert np.max(np.abs(data["g0"] - g0_true)) < 1e-3


def test_calibrate_requires_single_bc_kind(tmp_path):
    src = tmp_path / "boundary.csv"
    src.write_text("t,left,right\n0,1,0.9\n1,1,0.9\n")
    proc = run_cli("calibrate", "--dimensionless", "--input", str(src))
    assert proc.returncode == 2
    assert "single bc kind" in proc.stderr
