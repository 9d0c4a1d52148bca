"""Unit tests for YamlSpecRepository."""

from pathlib import Path

import pytest

from pnbound.domain.enums import EstimationMode, SweepVariable
from pnbound.domain.repositories.spec_repository import (
    ConfigurationNotFoundError,
    InvalidConfigurationError,
    MissingEnvironmentVariableError,
    SpecRepository,
)
from pnbound.infrastructure.repositories.yaml_spec_repository import YamlSpecRepository

SAMPLE_SPECS = Path(__file__).parents[2] / "fixtures" / "sample_specs"


class TestYamlSpecRepository:
    """Test cases for YamlSpecRepository."""

    def test_inheritance(self):
        """Test that YamlSpecRepository implements SpecRepository."""
        assert isinstance(YamlSpecRepository(), SpecRepository)

    @pytest.mark.asyncio
    async def test_load_minimal_spec(self):
        """Test loading the minimal sample spec."""
        spec = await YamlSpecRepository().load_spec(SAMPLE_SPECS / "minimal.yaml")
        assert spec.name == "minimal"
        assert spec.mode == [EstimationMode.MBCRB]
        assert spec.sigma2_zeta == [1e-3]

    @pytest.mark.asyncio
    async def test_range_and_env_default(self, monkeypatch):
        """Test range strings expand and ${VAR:default} falls back."""
        monkeypatch.delenv("PNBOUND_TEST_SEED", raising=False)
        spec = await YamlSpecRepository().load_spec(SAMPLE_SPECS / "snr_sweep.yaml")
        assert spec.snr_db == [0.0, 10.0, 20.0]
        assert spec.seed == 7
        assert spec.sweep_variable is SweepVariable.SNR_DB

    @pytest.mark.asyncio
    async def test_env_substitution(self, monkeypatch):
        """Test ${VAR:default} takes the environment value when set."""
        monkeypatch.setenv("PNBOUND_TEST_SEED", "42")
        spec = await YamlSpecRepository().load_spec(SAMPLE_SPECS / "snr_sweep.yaml")
        assert spec.seed == 42

    @pytest.mark.asyncio
    async def test_missing_env_variable(self, tmp_path, monkeypatch):
        """Test ${VAR} without default fails when unset."""
        monkeypatch.delenv("PNBOUND_UNSET_VAR", raising=False)
        path = tmp_path / "spec.yaml"
        path.write_text("seed: ${PNBOUND_UNSET_VAR}\n", encoding="utf-8")
        with pytest.raises(MissingEnvironmentVariableError, match="PNBOUND_UNSET_VAR"):
            await YamlSpecRepository().load_mapping(path)

    @pytest.mark.asyncio
    async def test_overrides_win(self):
        """Test constructor overrides replace file values."""
        repository = YamlSpecRepository(overrides={"seed": 99, "n": 12})
        spec = await repository.load_spec(SAMPLE_SPECS / "minimal.yaml")
        assert spec.seed == 99
        assert spec.n == [12]

    @pytest.mark.asyncio
    async def test_missing_file(self, tmp_path):
        """Test a missing file raises ConfigurationNotFoundError."""
        with pytest.raises(ConfigurationNotFoundError, match="Spec file not found"):
            await YamlSpecRepository().load_spec(tmp_path / "absent.yaml")

    @pytest.mark.asyncio
    async def test_invalid_value_names_field(self):
        """Test validation errors carry the offending key."""
        with pytest.raises(InvalidConfigurationError) as excinfo:
            await YamlSpecRepository().load_spec(SAMPLE_SPECS / "invalid_rho.yaml")
        assert excinfo.value.field == "rho"

    @pytest.mark.asyncio
    @pytest.mark.parametrize("content,match", [
        ("- a\n- b\n", "key/value mapping"),
        ("n: {a: 1}\n", "nested mapping"),
        ("n: [1, 2\n", "not valid YAML"),
    ])
    async def test_malformed_files(self, tmp_path, content, match):
        """Test non-mapping, nested and unparsable files are rejected."""
        path = tmp_path / "spec.yaml"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(InvalidConfigurationError, match=match):
            await YamlSpecRepository().load_mapping(path)

    @pytest.mark.asyncio
    async def test_empty_file_gives_defaults(self, tmp_path):
        """Test an empty file parses to the default spec."""
        path = tmp_path / "empty.yaml"
        path.write_text("", encoding="utf-8")
        spec = await YamlSpecRepository().load_spec(path)
        assert spec.name == "experiment"
