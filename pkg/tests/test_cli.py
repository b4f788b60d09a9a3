"""Command-line interface: outputs, exit codes, determinism."""

import json

import pytest
from click.testing import CliRunner

from photonstats.cli import main

CUMULANTS_DOC = """
model:
  kind: jc
  eps_delta: 0.1
  omega2: 1.0
  phi2: 1.5707963267948966
  gamma: 0.01
task: Cumulants
mode: 1
"""

SCAN_DOC = """
model:
  kind: jc
  eps_delta: 0.1
  omega2: 1.0
  gamma: 0.01
task: Scan
method: AnalyticOracle
mode: 1
sweep:
  variable: eps_delta
  start: -1.0
  stop: 1.0
  points: 5
  repeat_param: phi2
  repeat_values: [0.0, 1.5707963267948966]
"""

CLOSED_DOC = """
model:
  kind: jc
  omega2: 1.0
  phi2: 1.5707963267948966
  gamma: 0.0
task: ClosedSystem
closed:
  weights: [0.5, 0.5]
  time: 10.0
  mode: 1
numerics:
  n_fft: 1024
"""

DIST_DOC = """
model:
  kind: jc
  omega2: 1.0
  gamma: 0.1
task: Distribution
distribution:
  law: gaussian
  nbar: [1000.0]
  sigma2: [100.0]
  time: 25.0
  modes: [1]
numerics:
  n_fft: 1024
"""


@pytest.fixture
def runner():
    return CliRunner()


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestCumulantsCommand:
    def test_reports_flux_and_noise(self, runner, tmp_path):
        cfg = write(tmp_path, "c.yaml", CUMULANTS_DOC)
        result = runner.invoke(main, ["cumulants", "--config", cfg])
        assert result.exit_code == 0
        assert "I=" in result.output and "sigma2=" in result.output

    def test_writes_csv(self, runner, tmp_path):
        cfg = write(tmp_path, "c.yaml", CUMULANTS_DOC)
        out = tmp_path / "out"
        out.mkdir()
        result = runner.invoke(main, ["cumulants", "--config", cfg, "--out", str(out)])
        assert result.exit_code == 0
        text = (out / "cumulants.csv").read_text()
        header = text.splitlines()[0]
        assert header == "mode,I,sigma2,snr,method,h,stencil_error"

    def test_method_override(self, runner, tmp_path):
        cfg = write(tmp_path, "c.yaml", CUMULANTS_DOC)
        result = runner.invoke(
            main, ["cumulants", "--config", cfg, "--method", "CharPoly"]
        )
        assert result.exit_code == 0
        assert "method=CharPoly" in result.output

    def test_bad_method_is_config_error(self, runner, tmp_path):
        cfg = write(tmp_path, "c.yaml", CUMULANTS_DOC)
        result = runner.invoke(
            main, ["cumulants", "--config", cfg, "--method", "Magic"]
        )
        assert result.exit_code == 2


class TestConfigErrors:
    def test_invalid_config_exits_2(self, runner, tmp_path):
        cfg = write(tmp_path, "bad.yaml", "model:\n  kind: bogus\n")
        result = runner.invoke(main, ["cumulants", "--config", cfg])
        assert result.exit_code == 2
        assert "model.kind" in result.output

    def test_missing_config_for_plain_command(self, runner):
        result = runner.invoke(main, ["cumulants"])
        assert result.exit_code == 2


class TestScanCommand:
    def test_csv_schema_and_rows(self, runner, tmp_path):
        cfg = write(tmp_path, "s.yaml", SCAN_DOC)
        out = tmp_path / "out"
        out.mkdir()
        result = runner.invoke(main, ["scan", "--config", cfg, "--out", str(out)])
        assert result.exit_code == 0
        lines = (out / "scan_eps_delta.csv").read_text().splitlines()
        assert lines[0] == (
            "sweep_value,phi2,I_1,sigma2_1,snr_1,I_2,sigma2_2,snr_2,"
            "method,stencil_error,error"
        )
        assert len(lines) == 1 + 5 * 2  # grid x repeat values

    def test_determinism(self, runner, tmp_path):
        cfg = write(tmp_path, "s.yaml", SCAN_DOC)
        outputs = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            out.mkdir()
            result = runner.invoke(main, ["scan", "--config", cfg, "--out", str(out)])
            assert result.exit_code == 0
            outputs.append((out / "scan_eps_delta.csv").read_bytes())
        assert outputs[0] == outputs[1]


class TestClosedCommand:
    def test_variance_matches_analytic(self, runner, tmp_path):
        cfg = write(tmp_path, "cl.yaml", CLOSED_DOC)
        out = tmp_path / "out"
        out.mkdir()
        result = runner.invoke(main, ["closed", "--config", cfg, "--out", str(out)])
        assert result.exit_code == 0
        lines = (out / "closed.csv").read_text().splitlines()
        row = dict(zip(lines[0].split(","), lines[1].split(",")))
        assert float(row["variance"]) == pytest.approx(50.0, rel=1e-10)
        assert float(row["fft_variance"]) == pytest.approx(50.0, rel=0.01)


class TestDistributionCommand:
    def test_csv_and_metadata_sidecar(self, runner, tmp_path):
        cfg = write(tmp_path, "d.yaml", DIST_DOC)
        out = tmp_path / "out"
        out.mkdir()
        result = runner.invoke(
            main, ["distribution", "--config", cfg, "--out", str(out)]
        )
        assert result.exit_code == 0
        lines = (out / "distribution.csv").read_text().splitlines()
        assert lines[0] == "n_1,probability"
        total = sum(float(line.split(",")[1]) for line in lines[1:])
        assert total == pytest.approx(1.0, abs=1e-6)
        meta = json.loads((out / "distribution.csv.json").read_text())
        assert meta["n"] == 1024


class TestConserveCommand:
    def test_pass_line(self, runner, tmp_path):
        cfg = write(tmp_path, "c.yaml", CUMULANTS_DOC)
        result = runner.invoke(main, ["conserve", "--config", cfg])
        assert result.exit_code == 0
        assert result.output.startswith("PASS")
