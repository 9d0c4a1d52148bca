"""Basic CLI tests for pnbound."""

import json
from pathlib import Path

from typer.testing import CliRunner

from pnbound.cli.app import app
from pnbound.cli.utils.rich_utils import format_gap_db
from pnbound.config import settings as settings_module
from pnbound.config.settings import get_settings

SAMPLE_SPECS = Path(__file__).parents[2] / "fixtures" / "sample_specs"


def _write_spec(path: Path, **entries) -> Path:
    path.write_text("".join(f"{key}: {value}\n" for key, value in entries.items()), encoding="utf-8")
    return path


class TestCLIBasic:
    """Test basic CLI functionality."""

    def setup_method(self):
        """Set up test fixtures."""
        self.runner = CliRunner()

    def test_help_command(self):
        """Test that help command works."""
        result = self.runner.invoke(app, ["--help"])
        assert result.exit_code == 0
        assert "pnbound" in result.stdout
        assert "preset" in result.stdout

    def test_version_command(self):
        """Test that version command works."""
        result = self.runner.invoke(app, ["--version"])
        assert result.exit_code == 0
        assert "pnbound" in result.stdout
        assert "v" in result.stdout

    def test_invalid_output_format(self):
        """Test that an unknown output format exits with 2."""
        result = self.runner.invoke(app, ["--output", "xml", "preset"])
        assert result.exit_code == 2
        assert "Unsupported output format" in result.stdout

    def test_preset_listing(self):
        """Test that preset without a name lists the presets."""
        result = self.runner.invoke(app, ["preset"])
        assert result.exit_code == 0
        for name in ("fig2", "fig3", "fig4", "fig5"):
            assert name in result.stdout

    def test_preset_listing_json(self):
        """Test the JSON preset listing."""
        result = self.runner.invoke(app, ["--output", "json", "preset"])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert sorted(data) == ["fig2", "fig3", "fig4", "fig5"]
        assert data["fig3"]["snr_db"] == "0:30:2"

    def test_unknown_preset(self):
        """Test that an unknown preset exits with 2."""
        result = self.runner.invoke(app, ["preset", "fig9"])
        assert result.exit_code == 2
        assert "Unknown preset" in result.stdout


class TestRunCommand:
    """Test the run command."""

    def setup_method(self):
        """Set up test fixtures."""
        self.runner = CliRunner()

    def test_run_writes_tables(self, tmp_path):
        """Test a run writes one CSV per table and a manifest."""
        result = self.runner.invoke(
            app, ["run", str(SAMPLE_SPECS / "minimal.yaml"), "--out-dir", str(tmp_path), "--threads", "2"]
        )
        assert result.exit_code == 0, result.stdout
        assert (tmp_path / "minimal_QPSK_n10.csv").exists()
        manifest = json.loads((tmp_path / "minimal_manifest.json").read_text(encoding="utf-8"))
        assert manifest["files"] == ["minimal_QPSK_n10.csv"]

    def test_run_json_output(self, tmp_path):
        """Test the JSON summary of a run."""
        result = self.runner.invoke(
            app,
            ["--output", "json", "run", str(SAMPLE_SPECS / "minimal.yaml"), "--out-dir", str(tmp_path), "--seed", "4"],
        )
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["success"] is True
        assert data["rows"] == 10
        assert json.loads(Path(data["manifest"]).read_text(encoding="utf-8"))["seed"] == 4

    def test_invalid_spec_exits_2(self, tmp_path):
        """Test that an invalid value names the key and exits with 2."""
        result = self.runner.invoke(
            app, ["--output", "json", "run", str(SAMPLE_SPECS / "invalid_rho.yaml"), "--out-dir", str(tmp_path)]
        )
        assert result.exit_code == 2
        data = json.loads(result.stdout)
        assert data["success"] is False
        assert "rho" in data["error"]
        assert data["exit_code"] == 2

    def test_missing_spec_exits_2(self, tmp_path):
        """Test that a missing spec file exits with 2."""
        result = self.runner.invoke(app, ["run", str(tmp_path / "absent.yaml")])
        assert result.exit_code == 2

    def test_bad_estimator_flag_exits_2(self, tmp_path):
        """Test that --estimator accepts only on or off."""
        result = self.runner.invoke(app, ["run", str(SAMPLE_SPECS / "minimal.yaml"), "--estimator", "maybe"])
        assert result.exit_code == 2

    def test_degenerate_prior_exits_3(self, tmp_path):
        """Test that rho just below 1 on the general path is a numerical error."""
        spec = _write_spec(tmp_path / "spec.yaml", name="edge", mode="MBCRB", n=10, rho=0.9999999)
        result = self.runner.invoke(app, ["--output", "json", "run", str(spec), "--out-dir", str(tmp_path)])
        assert result.exit_code == 3
        assert "reduced_model_rho1" in json.loads(result.stdout)["error"]


class TestReportCommand:
    """Test the report command."""

    def setup_method(self):
        """Set up test fixtures."""
        self.runner = CliRunner()

    def test_report_after_run(self, tmp_path):
        """Test a report on the tables of a run."""
        run = self.runner.invoke(app, ["run", str(SAMPLE_SPECS / "minimal.yaml"), "--out-dir", str(tmp_path)])
        assert run.exit_code == 0

        result = self.runner.invoke(
            app, ["--output", "json", "report", str(tmp_path / "minimal_QPSK_n10.csv"), "--name", "figs"]
        )
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert Path(data["script"]).name == "figs.gp"
        assert (tmp_path / "figs.gp").exists()
        assert len(data["summary"]) == 1
        assert data["summary"][0].startswith("MBCRB QPSK N=10: bound(symbol 5)")

    def test_report_missing_table_exits_2(self, tmp_path):
        """Test that a missing table exits with 2."""
        result = self.runner.invoke(app, ["report", str(tmp_path / "absent.csv")])
        assert result.exit_code == 2

    def test_report_schema_error_exits_2(self, tmp_path):
        """Test that a table without the required columns exits with 2."""
        table = tmp_path / "bad.csv"
        table.write_text("a,b\n1,2\n", encoding="utf-8")
        result = self.runner.invoke(app, ["report", str(table)])
        assert result.exit_code == 2


class TestHarnessAndAmplitudeCommands:
    """Test the harness and amplitude commands."""

    def setup_method(self):
        """Set up test fixtures."""
        self.runner = CliRunner()

    def test_harness_needs_one_source(self):
        """Test that harness without a spec or preset exits with 2."""
        result = self.runner.invoke(app, ["harness"])
        assert result.exit_code == 2

    def test_harness_json(self, tmp_path):
        """Test a small DA harness run."""
        spec = _write_spec(
            tmp_path / "spec.yaml",
            name="h", mode="DA", n=4, snr_db=15, rho=0.5, sigma2_init=1.0, report=2,
        )
        result = self.runner.invoke(app, ["--output", "json", "harness", str(spec), "--trials", "100", "--seed", "1"])
        assert result.exit_code == 0
        (row,) = json.loads(result.stdout)
        assert row["mode"] == "DA"
        assert row["trials"] == 100
        assert row["symbol_index"] == 2

    def test_harness_too_few_trials_exits_2(self, tmp_path):
        """Test that fewer than 100 trials is a configuration error."""
        result = self.runner.invoke(app, ["harness", str(SAMPLE_SPECS / "minimal.yaml"), "--trials", "10"])
        assert result.exit_code == 2

    def test_amplitude_json(self):
        """Test the amplitude table on a one-point grid."""
        result = self.runner.invoke(
            app, ["--output", "json", "amplitude", "--snr", "30", "--eps", "1e-3", "--samples", "2000"]
        )
        assert result.exit_code == 0
        (row,) = json.loads(result.stdout)
        assert row["snr_db"] == 30.0
        assert row["sigma2_eps_tilde"] == 1e-3
        assert row["samples"] == 2000

    def test_amplitude_table(self):
        """Test the amplitude table output on a two-point grid."""
        result = self.runner.invoke(app, ["amplitude", "--snr", "0,30", "--eps", "1e-3", "--samples", "2000"])
        assert result.exit_code == 0
        assert "0.001" in result.stdout

    def test_amplitude_rejects_small_budget(self):
        """Test that fewer than 1000 samples exits with 2."""
        result = self.runner.invoke(app, ["amplitude", "--samples", "10"])
        assert result.exit_code == 2


class TestSettingsResolution:
    """Settings resolved by the CLI callback through get_settings."""

    def setup_method(self):
        """Set up test fixtures."""
        self.runner = CliRunner()

    def test_callback_sets_global_settings(self, monkeypatch):
        """Test the callback builds the shared instance from its flags."""
        monkeypatch.setattr(settings_module, "settings", None)
        result = self.runner.invoke(app, ["--quiet", "preset"])
        assert result.exit_code == 0
        assert settings_module.settings is not None
        assert settings_module.settings.quiet is True
        assert settings_module.settings.log_level == "ERROR"
        assert get_settings() is settings_module.settings

    def test_environment_reaches_settings(self, monkeypatch):
        """Test PNBOUND_* variables feed the lazily created instance."""
        monkeypatch.setattr(settings_module, "settings", None)
        monkeypatch.setenv("PNBOUND_THREADS", "3")
        monkeypatch.setenv("PNBOUND_SEED", "17")
        resolved = get_settings()
        assert resolved.threads == 3
        assert resolved.spec_overrides() == {"seed": 17}
        assert get_settings() is resolved


class TestFormatGapDb:
    """Coloring of the estimator-to-bound gap."""

    def test_zero_gap_is_green(self):
        """Test a zero gap, signed or not, counts as within 1 dB."""
        assert format_gap_db(0.0) == "[green]+0.00 dB[/green]"
        assert format_gap_db(-0.0).startswith("[green]")

    def test_negative_gap_is_red(self):
        """Test an estimator beating the bound is flagged."""
        assert format_gap_db(-0.25).startswith("[red]")

    def test_thresholds(self):
        """Test the 1 dB and 3 dB color boundaries."""
        assert format_gap_db(1.0).startswith("[green]")
        assert format_gap_db(2.0).startswith("[yellow]")
        assert format_gap_db(3.5).startswith("[red]")
        assert format_gap_db(float("nan")) == "[dim]-[/dim]"
