"""Unit tests for experiment spec parsing and validation."""

import pytest

from pnbound.application.dto.experiment_spec import format_short, parse_grid, parse_spec
from pnbound.domain.enums import DeltaAveraging, EstimationMode, SweepVariable
from pnbound.domain.repositories.spec_repository import InvalidConfigurationError


class TestParseGrid:
    """Unit tests for parse_grid."""

    def test_scalar_and_list(self) -> None:
        """Test scalars and lists become float lists."""
        assert parse_grid(5) == [5.0]
        assert parse_grid([1, "2.5", 3.0]) == [1.0, 2.5, 3.0]
        assert parse_grid("1e-3") == [1e-3]

    def test_inclusive_range(self) -> None:
        """Test 'start:stop:step' includes the stop value."""
        grid = parse_grid("0:30:2")
        assert len(grid) == 16
        assert grid[0] == 0.0
        assert grid[-1] == 30.0

    def test_fractional_range_is_rounded(self) -> None:
        """Test fractional steps do not accumulate rounding error."""
        grid = parse_grid("0:1:0.1")
        assert len(grid) == 11
        assert grid[3] == 0.3

    @pytest.mark.parametrize("value,match", [
        ("0:10", "start:stop:step"),
        ("0:10:0", "step must be > 0"),
        ("10:0:1", "below start"),
        (True, "Expected a number"),
        ({"a": 1}, "Expected a number"),
    ])
    def test_invalid_grids(self, value, match: str) -> None:
        """Test malformed grids are rejected."""
        with pytest.raises(ValueError, match=match):
            parse_grid(value)


class TestParseSpec:
    """Unit tests for parse_spec and ExperimentSpec."""

    def test_defaults(self) -> None:
        """Test an empty mapping gives the default spec."""
        spec = parse_spec({})
        assert spec.mode == [EstimationMode.NDA, EstimationMode.MBCRB]
        assert spec.constellation == ["QPSK"]
        assert spec.n == [100]
        assert spec.report == "all"
        assert spec.delta_averaging is DeltaAveraging.UNIFORM
        assert not spec.estimator

    def test_labels_are_normalized(self) -> None:
        """Test comma-separated modes and constellation aliases."""
        spec = parse_spec({"mode": "nda, da, NDA", "constellation": ["4QAM", "16qam"]})
        assert spec.mode == [EstimationMode.NDA, EstimationMode.DA]
        assert spec.constellation == ["QPSK", "16QAM"]

    def test_report_accepts_digit_string(self) -> None:
        """Test report: '50' parses to a symbol index."""
        assert parse_spec({"report": "50"}).report == 50

    @pytest.mark.parametrize("mapping,field", [
        ({"rho": 1.5}, "rho"),
        ({"snr_db": 80}, "snr_db"),
        ({"sigma2_zeta": -1e-3}, "sigma2_zeta"),
        ({"n": 1000}, "n"),
        ({"mode": "XYZ"}, "mode"),
        ({"constellation": "8PSK"}, "constellation"),
        ({"report": 0}, "report"),
        ({"delta_grid": 8}, "delta_grid"),
        ({"estimator_trials": 10}, "estimator_trials"),
        ({"bogus": 1}, "bogus"),
    ])
    def test_invalid_values_name_the_field(self, mapping: dict, field: str) -> None:
        """Test validation errors carry the offending key."""
        with pytest.raises(InvalidConfigurationError) as excinfo:
            parse_spec(mapping)
        assert excinfo.value.field == field
        assert field in str(excinfo.value)

    def test_report_beyond_block_length(self) -> None:
        """Test a reported symbol past the shortest block is rejected."""
        with pytest.raises(InvalidConfigurationError, match="exceeds the shortest block length") as excinfo:
            parse_spec({"n": [20, 100], "report": 50})
        assert excinfo.value.field == "report"

    def test_zero_innovation_with_long_block(self) -> None:
        """Test sigma2_zeta = 0 with n > 1 is a configuration error."""
        with pytest.raises(InvalidConfigurationError, match="singular") as excinfo:
            parse_spec({"sigma2_zeta": 0.0, "n": 10})
        assert excinfo.value.field == "sigma2_zeta"

    def test_sweep_needs_matching_report(self) -> None:
        """Test grid sweeps need a single symbol and symbol sweeps need report: all."""
        with pytest.raises(InvalidConfigurationError, match="single reported symbol"):
            parse_spec({"sweep": "rho", "report": "all"})
        with pytest.raises(InvalidConfigurationError, match="needs report: all"):
            parse_spec({"sweep": "symbol_index", "report": 5})

    def test_sweep_variable_inference(self) -> None:
        """Test the x-axis defaults to symbols, then the first multi-valued grid."""
        assert parse_spec({}).sweep_variable is SweepVariable.SYMBOL_INDEX
        assert parse_spec({"report": 5, "rho": [0.1, 0.5]}).sweep_variable is SweepVariable.RHO
        assert parse_spec({"report": 5}).sweep_variable is SweepVariable.SNR_DB
        assert parse_spec({"report": 5, "sweep": "SIGMA2_ZETA"}).sweep_variable is SweepVariable.SIGMA2_ZETA

    def test_with_overrides_revalidates(self, small_spec) -> None:
        """Test overrides replace keys, ignore None and are validated."""
        assert small_spec.with_overrides(seed=None) is small_spec
        assert small_spec.with_overrides(seed=11).seed == 11
        with pytest.raises(InvalidConfigurationError):
            small_spec.with_overrides(rho=2.0)

    def test_mapping_round_trip(self, small_spec) -> None:
        """Test to_mapping parses back to an equal spec."""
        assert parse_spec(small_spec.to_mapping()) == small_spec


class TestFormatShort:
    """Unit tests for grid labels."""

    @pytest.mark.parametrize("value,expected", [
        (0.5, "0.5"),
        (15.0, "15"),
        (0.0, "0"),
        (1e-3, "1e-3"),
        (2.5e-2, "2.5e-2"),
        (1e4, "1e4"),
    ])
    def test_labels(self, value: float, expected: str) -> None:
        """Test compact labels for typical grid values."""
        assert format_short(value) == expected
