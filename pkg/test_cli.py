import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from core import ConfigError, load_config, parse_config
from main import cli, run_command
from schemas import ResolutionSchemaIn, format_number
from utils import format_cell
from utils.svg import display_values

runner = CliRunner()


@pytest.fixture(scope="module")
def small_config(tmp_path_factory):
    path = tmp_path_factory.mktemp("config") / "small.json"
    path.write_text(
        json.dumps({"resolution": {"nx": 40, "ny": 16}, "trials": 100, "probes": 10}),
        encoding="utf-8",
    )
    return path


def write_config(tmp_path, document):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def data_lines(path):
    return [line for line in path.read_text().splitlines() if not line.startswith("#")]


def test_empty_document_gives_defaults():
    config = parse_config("")
    assert config.k_e == 0.01
    assert (config.area.d_w, config.area.d_l, config.area.exclusion_side) == (10, 40, 1)
    assert config.d_h == 3
    assert config.array.kind == "waveguide"
    assert (config.array.n, config.array.n_wg) == (20, 2)
    assert (config.resolution.nx, config.resolution.ny) == (200, 50)
    assert (config.seed, config.trials) == (1, 2000)


def test_negative_k_e_is_rejected():
    with pytest.raises(ConfigError) as error:
        parse_config('{"k_e": -1}')
    assert error.value.detail.startswith("k_e:")
    assert "greater than 0" in error.value.detail


def test_oversized_exclusion_is_rejected():
    with pytest.raises(ConfigError) as error:
        parse_config('{"area": {"exclusion_side": 12}}')
    assert error.value.detail.startswith("area")
    assert "exclusion_side" in error.value.detail


def test_unknown_key_is_rejected():
    with pytest.raises(ConfigError) as error:
        parse_config('{"array": {"kind": "circular", "radius": 2}}')
    assert "radius" in error.value.detail


def test_array_kinds_are_parsed():
    config = parse_config('{"array": {"kind": "focal-segment", "focal_x": 10}}')
    assert config.array.focal_x == 10
    assert config.array.segment_length is None


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError) as error:
        load_config(tmp_path / "absent.json")
    assert "absent.json" in error.value.detail


def test_resolution_flag_parsing():
    assert ResolutionSchemaIn.parse("400x100") == ResolutionSchemaIn(nx=400, ny=100)
    with pytest.raises(ValueError):
        ResolutionSchemaIn.parse("400")


def test_number_formatting():
    assert format_cell(math.inf) == "inf"
    assert format_cell(1 / 3) == "0.333333333"
    assert format_cell(7) == "7"
    assert format_number(math.inf) == "inf"
    assert format_number(2 / 3) == 0.666666667


def test_display_values_only_replace_non_finite_cells():
    values = np.array([[1.0, 2.0, 3.0, 1000.0], [math.inf, 4.0, 5.0, 6.0]])
    shown = display_values(values)
    finite = np.isfinite(values)
    assert np.array_equal(shown[finite], values[finite])
    assert shown[1, 0] == pytest.approx(np.percentile(values[finite], 99.0))
    assert np.all(np.isfinite(shown))


def test_sweep_spacing(tmp_path):
    result = runner.invoke(cli, ["sweep-spacing", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    curve = (tmp_path / "curve.csv").read_text().splitlines()
    assert curve[0].startswith("# config: {")
    rows = data_lines(tmp_path / "curve.csv")
    assert rows[0] == "delta,crb"
    assert len(rows) == 1 + 96
    summary = (tmp_path / "summary.txt").read_text()
    assert "analytic optimum (N=4): 4.24264069 m" in summary
    assert "sampled argmin: 4.2 m" in summary


def test_optimize_spacing(tmp_path):
    result = runner.invoke(cli, ["optimize-spacing", "--out", str(tmp_path), "--quiet"])
    assert result.exit_code == 0, result.output
    report = json.loads((tmp_path / "report.json").read_text())
    assert list(report) == ["config", "result"]
    assert report["result"]["numeric"] == pytest.approx(4.242641, abs=1e-6)
    assert report["result"]["analytic"] == pytest.approx(4.24264069)


def test_compare(tmp_path, small_config):
    result = runner.invoke(cli, ["compare", "--config", str(small_config), "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    rows = data_lines(tmp_path / "compare.csv")
    assert rows[0] == "n,pinching,conventional,delta_crb"
    assert [row.split(",")[0] for row in rows[1:]] == ["4", "8", "12", "16", "20"]
    for row in rows[1:]:
        _, pinching, conventional, delta = (float(v) for v in row.split(","))
        assert pinching < conventional and delta < 0


def test_heatmap_outputs(tmp_path, small_config):
    result = runner.invoke(cli, ["heatmap", "--config", str(small_config), "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    field = (tmp_path / "field.csv").read_text().splitlines()
    assert field[1] == "# grid: nx=40 ny=16 array=pinching-20"
    rows = data_lines(tmp_path / "field.csv")
    assert rows[0] == "x,y,crb"
    assert len(rows) == 1 + 40 * 16
    assert rows[1].split(",")[:2] == ["-19.5", "-4.6875"]
    svg = (tmp_path / "field.svg").read_text()
    assert svg.startswith("<?xml")
    assert svg.splitlines()[1].startswith("<!-- config: {")
    assert "</svg>" in svg
    assert "local maxima" in (tmp_path / "summary.txt").read_text()


def test_heatmap_is_byte_identical(tmp_path, small_config):
    for name in ("a", "b"):
        args = ["heatmap", "--config", str(small_config), "--out", str(tmp_path / name)]
        assert runner.invoke(cli, args).exit_code == 0
    for output in ("field.csv", "field.svg", "summary.txt"):
        assert (tmp_path / "a" / output).read_bytes() == (tmp_path / "b" / output).read_bytes()


def test_resolution_flag_overrides_document(tmp_path, small_config):
    args = ["heatmap", "--config", str(small_config), "--out", str(tmp_path), "--resolution", "32x16"]
    assert runner.invoke(cli, args).exit_code == 0
    assert (tmp_path / "field.csv").read_text().splitlines()[1].startswith("# grid: nx=32 ny=16")


def test_heatmap_resolution_too_low(tmp_path):
    result = runner.invoke(cli, ["heatmap", "--out", str(tmp_path), "--resolution", "8x8"])
    assert result.exit_code == 2
    assert "at least 16x16" in result.output


def test_validate_mc_is_independent_of_workers(tmp_path, small_config):
    outputs = {}
    for workers in (1, 3):
        out = tmp_path / f"w{workers}"
        args = ["validate-mc", "--config", str(small_config), "--out", str(out), "--workers", str(workers)]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0, result.output
        outputs[workers] = (out / "report.json").read_bytes()
    assert outputs[1] == outputs[3]
    report = json.loads(outputs[1])
    assert report["result"]["trials"] == 100
    assert report["config"]["seed"] == 1
    assert "workers" not in report["config"]


def test_seed_flag_changes_the_report(tmp_path, small_config):
    base = ["validate-mc", "--config", str(small_config)]
    runner.invoke(cli, base + ["--out", str(tmp_path / "s1")])
    runner.invoke(cli, base + ["--out", str(tmp_path / "s2"), "--seed", "2"])
    first = json.loads((tmp_path / "s1" / "report.json").read_text())
    second = json.loads((tmp_path / "s2" / "report.json").read_text())
    assert second["config"]["seed"] == 2
    assert first["result"]["mse"] != second["result"]["mse"]


def test_gradient_check(tmp_path):
    result = runner.invoke(cli, ["gradient-check", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert "result: pass" in result.output
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["result"]["probes"] == 400
    assert report["result"]["max_relative_error"] < 1e-6


def test_config_error_exit_code(tmp_path):
    config = write_config(tmp_path, {"k_e": -1})
    result = runner.invoke(cli, ["heatmap", "--config", str(config), "--out", str(tmp_path)])
    assert result.exit_code == 2
    assert "k_e" in result.output


def test_geometry_error_exit_code(tmp_path):
    config = write_config(tmp_path, {"array": {"kind": "focal-segment", "focal_x": -15}})
    result = runner.invoke(cli, ["heatmap", "--config", str(config), "--out", str(tmp_path)])
    assert result.exit_code == 3
    assert "extends beyond" in result.output


def test_unknown_command():
    result = runner.invoke(cli, ["plot"])
    assert result.exit_code == 2
    assert "No such command" in result.output


def test_run_command_exit_status(tmp_path, capsys):
    assert run_command(["sweep-spacing", "--out", str(tmp_path), "--quiet"]) == 0
    assert (tmp_path / "curve.csv").exists()
    assert run_command(["plot"]) == 2
    assert run_command(["heatmap", "--config", str(tmp_path / "missing.json")]) == 2
    assert "missing.json" in capsys.readouterr().err
