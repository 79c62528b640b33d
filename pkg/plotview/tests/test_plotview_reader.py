"""Results-directory parsing."""
import numpy as np
import pytest

from plotview import PlotviewError, read_results, read_series
from fixture_data import write_results


def test_reads_all_kinds_and_variants(results_dir):
    bundles, warnings = read_results(results_dir)
    assert sorted(bundles) == ["pp", "pphi"]
    assert warnings == ()
    bundle = bundles["pp"]
    assert sorted(bundle.series) == sorted(
        ["reference", "ua_linearized", "ua_perturbative", "ua_base", "ba_perturbative", "ba_base"]
    )
    assert bundle.missing == ()
    vs = bundle.series["reference"]
    assert vs.t.shape == vs.p.shape == vs.phi.shape == (26,)
    assert np.all(np.diff(vs.t) > 0)


def test_prefers_probe_nearest_midpoint(tmp_path):
    root = write_results(tmp_path / "multi", probes=(0.25, 0.5, 0.75))
    bundles, _ = read_results(root)
    assert bundles["pp"].probe_x == 0.5
    # single-probe file away from the midpoint still loads
    solo = write_results(tmp_path / "solo", probes=(0.25,))
    bundles, _ = read_results(solo)
    assert bundles["pp"].probe_x == 0.25


def test_metrics_keyed_by_variant_and_variable(results_dir):
    bundles, _ = read_results(results_dir)
    metrics = bundles["pphi"].metrics
    assert metrics[("ua_perturbative", "p")] == pytest.approx(3e-3)
    assert metrics[("ba_base", "phi")] == pytest.approx(1.2e-2)
    assert ("reference", "p") not in metrics


def test_missing_variant_becomes_warning(results_dir):
    (results_dir / "pp_ua_base.csv").unlink()
    bundles, warnings = read_results(results_dir)
    assert "ua_base" in bundles["pp"].missing
    assert "ua_base" not in bundles["pp"].series
    assert any("pp_ua_base.csv" in w for w in warnings)
    # the other kind is untouched
    assert bundles["pphi"].missing == ()


def test_missing_metrics_becomes_warning(results_dir):
    (results_dir / "metrics.csv").unlink()
    bundles, warnings = read_results(results_dir)
    assert bundles["pp"].metrics == {}
    assert any("metrics.csv" in w for w in warnings)


def test_single_kind_directory(tmp_path):
    root = write_results(tmp_path / "only_pp", kinds=("pp",))
    bundles, warnings = read_results(root)
    assert sorted(bundles) == ["pp"]
    assert warnings == ()


def test_empty_directory_rejected(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(PlotviewError):
        read_results(empty)


def test_nonexistent_directory_rejected(tmp_path):
    with pytest.raises(PlotviewError):
        read_results(tmp_path / "nope")


def test_malformed_file_rejected(tmp_path):
    root = write_results(tmp_path / "bad", kinds=("pp",))
    (root / "pp_reference.csv").write_text("# only comments\n")
    with pytest.raises(PlotviewError):
        read_results(root)


def test_series_missing_column_rejected(tmp_path):
    path = tmp_path / "pp_reference.csv"
    path.write_text("t,x,p\n0,0.5,1\n")
    with pytest.raises(PlotviewError, match="phi"):
        read_series(path, "reference")
