import hashlib
import json
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from plotkit.reader import EXPECTED_HEADER, SchemaError, read_trajectory
from plotkit.render import PlotSpec, render_sweep, sweep_plot_spec

HEADER = ",".join(EXPECTED_HEADER)


def write_csv(path: Path, n_rows=20, scale=1.0, failed=False):
    rows = [HEADER]
    for k in range(n_rows):
        t = 0.5 * k
        erg = scale * (1.0 - np.exp(-0.1 * t))
        rows.append(",".join(f"{v:.11e}" for v in
                    (t, erg, erg, 2 * erg, 4 * erg, 1.0, 1.0 - 0.01 * erg)))
    if failed:
        rows.append("# FAILED reason=trace-drift t=9.5")
    path.write_text("\n".join(rows) + "\n")
    return path


def test_read_trajectory_roundtrip(tmp_path):
    path = write_csv(tmp_path / "a.csv")
    traj = read_trajectory(path)
    assert not traj.failed
    assert len(traj.column("time")) == 20
    assert traj.column("trace")[0] == 1.0


def test_read_trajectory_detects_failure_marker(tmp_path):
    path = write_csv(tmp_path / "a.csv", failed=True)
    traj = read_trajectory(path)
    assert traj.failed
    assert len(traj.column("time")) == 20


def test_missing_column_named(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,ergotropy_B10\n0,1\n")
    with pytest.raises(SchemaError) as err:
        read_trajectory(path)
    assert err.value.column == "ergotropy_B11"
    assert "ergotropy_B11" in str(err.value)


def test_unexpected_column_named(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(HEADER + ",bonus\n" + ",".join(["0"] * 8) + "\n")
    with pytest.raises(SchemaError) as err:
        read_trajectory(path)
    assert err.value.column == "bonus"


def test_single_csv_single_curve(tmp_path):
    path = write_csv(tmp_path / "a.csv")
    spec = PlotSpec(csv_paths=(path,), labels=("a",),
                    out_path=tmp_path / "fig.png")
    result = render_sweep(spec)
    assert result.curve_count == 1
    assert result.out_path.exists()
    assert result.out_path.stat().st_size > 0


def test_curve_count_matches_inputs(tmp_path):
    paths = tuple(write_csv(tmp_path / f"{k}.csv", scale=1.0 + k)
                  for k in range(4))
    spec = PlotSpec(csv_paths=paths, labels=("a", "b", "c", "d"),
                    out_path=tmp_path / "fig.png")
    assert render_sweep(spec).curve_count == 4


def test_rendering_never_modifies_inputs_and_is_idempotent(tmp_path):
    paths = tuple(write_csv(tmp_path / f"{k}.csv", scale=1.0 + k)
                  for k in range(3))
    digests = [hashlib.sha256(p.read_bytes()).hexdigest() for p in paths]
    spec = PlotSpec(csv_paths=paths, labels=("a", "b", "c"),
                    out_path=tmp_path / "fig.png")
    first = render_sweep(spec)
    second = render_sweep(spec)
    assert [hashlib.sha256(p.read_bytes()).hexdigest() for p in paths] == digests
    for (la, ta, va), (lb, tb, vb) in zip(first.curves, second.curves):
        assert la == lb
        assert np.array_equal(ta, tb)
        assert np.array_equal(va, vb)


def test_failed_csv_refused_without_override(tmp_path):
    ok = write_csv(tmp_path / "ok.csv")
    bad = write_csv(tmp_path / "bad.csv", failed=True)
    spec = PlotSpec(csv_paths=(ok, bad), labels=("ok", "bad"),
                    out_path=tmp_path / "fig.png")
    with pytest.raises(ValueError, match="failed"):
        render_sweep(spec)
    spec_ok = PlotSpec(csv_paths=(ok, bad), labels=("ok", "bad"),
                       out_path=tmp_path / "fig.png", allow_failed=True)
    assert render_sweep(spec_ok).curve_count == 2


def test_plotspec_validation(tmp_path):
    path = write_csv(tmp_path / "a.csv")
    with pytest.raises(ValueError):
        PlotSpec(csv_paths=(), labels=(), out_path=tmp_path / "f.png")
    with pytest.raises(ValueError):
        PlotSpec(csv_paths=(path, path), labels=("x", "x"),
                 out_path=tmp_path / "f.png")


def test_vector_and_raster_formats(tmp_path):
    path = write_csv(tmp_path / "a.csv")
    for ext in ("png", "svg"):
        spec = PlotSpec(csv_paths=(path,), labels=("a",),
                        out_path=tmp_path / f"fig.{ext}")
        assert render_sweep(spec).out_path.exists()


def _simulator_cli(*args):
    return subprocess.run([sys.executable, "-m", "planarqb.cli", *args],
                          capture_output=True, text=True)


def _have_simulator():
    try:
        import planarqb  # noqa: F401
        return True
    except ImportError:
        return False


@pytest.fixture(scope="session")
def real_sweep_dir(tmp_path_factory):
    if not _have_simulator():
        pytest.skip("planarqb simulator not installed")
    out = tmp_path_factory.mktemp("real_sweep")
    spec = {"preset": "fig2a", "values": [0.25, 0.5, 1.0],
            "overrides": {"evolution": {"t_end": 60.0}}}
    spec_path = out / "spec.json"
    spec_path.write_text(json.dumps(spec))
    result = _simulator_cli("sweep", str(spec_path), "--out-dir",
                            str(out / "sweep"), "--workers", "2")
    assert result.returncode == 0, result.stderr
    return out / "sweep"


def test_a12_figure_per_sweep_from_cli_output(real_sweep_dir, tmp_path):
    """Acceptance A12: one figure per sweep, curve count == sweep size,
    inputs untouched, schema violations rejected by column name."""
    csvs = sorted(real_sweep_dir.glob("traj_*.csv"))
    before = {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in csvs}

    spec = sweep_plot_spec(real_sweep_dir, out_path=tmp_path / "fig2a.png")
    result = render_sweep(spec)
    ok_count = result.curve_count == 3 and result.out_path.exists()

    after = {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in csvs}
    ok_untouched = before == after

    # tamper with a copy: renamed column must be rejected by name
    broken_dir = tmp_path / "broken"
    shutil.copytree(real_sweep_dir, broken_dir)
    victim = sorted(broken_dir.glob("traj_*.csv"))[0]
    text = victim.read_text().replace("ergotropy_global", "ergotropy_total")
    victim.write_text(text)
    with pytest.raises(SchemaError) as err:
        render_sweep(sweep_plot_spec(broken_dir, out_path=tmp_path / "x.png"))
    ok_schema = err.value.column == "ergotropy_global"

    print(f"\nA12: {'PASS' if ok_count and ok_untouched and ok_schema else 'FAIL'}"
          f" — curves {result.curve_count}/3, inputs untouched {ok_untouched},"
          f" schema names column {err.value.column!r}")
    assert ok_count
    assert ok_untouched
    assert ok_schema


def test_cli_renders_sweep_directory(real_sweep_dir, tmp_path):
    out = tmp_path / "fig.png"
    result = subprocess.run(
        [sys.executable, "-m", "plotkit.cli", str(real_sweep_dir),
         "--column", "ergotropy_B10", "--out", str(out)],
        capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    assert out.exists()
    assert "3 curves" in result.stdout


def test_cli_rejects_schema_violation(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("time,wrong\n0,1\n")
    result = subprocess.run(
        [sys.executable, "-m", "plotkit.cli", str(bad), "--out",
         str(tmp_path / "f.png")],
        capture_output=True, text=True)
    assert result.returncode != 0
    assert "ergotropy_B10" in result.stderr


def test_cli_refuses_failed_without_flag(tmp_path):
    bad = write_csv(tmp_path / "failed.csv", failed=True)
    base = [sys.executable, "-m", "plotkit.cli", str(bad),
            "--out", str(tmp_path / "f.png")]
    refused = subprocess.run(base, capture_output=True, text=True)
    assert refused.returncode != 0
    allowed = subprocess.run(base + ["--allow-failed"],
                             capture_output=True, text=True)
    assert allowed.returncode == 0, allowed.stderr
