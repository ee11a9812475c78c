"""Tests for configuration loading."""

import pytest

from gaussons.config import dump_config, load_config, parse_assignment, read_config_file
from gaussons.core.errors import ConfigError
from gaussons.models.data_models import Branch, ExperimentConfig


class TestParseAssignment:
    """Tests for key=value parsing."""

    def test_strips_whitespace(self):
        """Test surrounding spaces are removed."""
        assert parse_assignment("  lambda =  -1 ") == ("lambda", "-1")

    def test_value_may_contain_equals(self):
        """Test that only the first '=' splits."""
        assert parse_assignment("output_dir=a=b") == ("output_dir", "a=b")

    @pytest.mark.parametrize("text", ["lambda", "= 3", ""])
    def test_malformed(self, text):
        """Test lines without a key or an '='."""
        with pytest.raises(ConfigError):
            parse_assignment(text)


class TestReadConfigFile:
    """Tests for configuration files."""

    def test_comments_and_blank_lines(self, tmp_path):
        """Test that comments are dropped and later keys win."""
        path = tmp_path / "run.cfg"
        path.write_text(
            "# parameters\n"
            "lambda = -1\n"
            "\n"
            "omega = 2   # no Gausson\n"
            "lambda = -3\n"
        )
        assert read_config_file(path) == {"lambda": "-3", "omega": "2"}

    def test_missing_file(self, tmp_path):
        """Test that an unreadable file is a ConfigError."""
        with pytest.raises(ConfigError):
            read_config_file(tmp_path / "absent.cfg")

    def test_malformed_line_reports_location(self, tmp_path):
        """Test that the error names the file line."""
        path = tmp_path / "bad.cfg"
        path.write_text("lambda = -1\nomega\n")
        with pytest.raises(ConfigError, match="bad.cfg:2"):
            read_config_file(path)


class TestLoadConfig:
    """Tests for load_config."""

    def test_defaults(self):
        """Test that no file and no overrides give the defaults."""
        assert load_config() == ExperimentConfig()

    def test_overrides_beat_file(self, tmp_path):
        """Test that overrides are applied after the file."""
        path = tmp_path / "run.cfg"
        path.write_text("lambda = -1\nomega = 0.5\nbranch = minus\n")
        cfg = load_config(path, ["omega=0.25", "grid.N=2048"])
        assert cfg.lam == -1.0
        assert cfg.omega == 0.25
        assert cfg.grid_N == 2048
        assert cfg.branch == Branch.MINUS

    def test_unknown_key(self):
        """Test that typos name the offending key."""
        with pytest.raises(ConfigError, match="omgea"):
            load_config(overrides=["omgea=1"])

    def test_bad_value(self):
        """Test that unparsable values are ConfigErrors."""
        with pytest.raises(ConfigError):
            load_config(overrides=["lambda=abc"])

    def test_invalid_physics(self):
        """Test that PhysParams rules apply at load time."""
        with pytest.raises(ConfigError):
            load_config(overrides=["potential=none"])
        with pytest.raises(ConfigError):
            load_config(overrides=["omega=-1"])

    def test_dump_reloads(self, tmp_path):
        """Test that a dumped configuration loads back unchanged."""
        cfg = load_config(overrides=["lambda=-1", "eps=0.5,0.05", "boost=true"])
        path = tmp_path / "echo.cfg"
        path.write_text(dump_config(cfg))
        assert load_config(path) == cfg

    def test_dump_uses_file_keys(self):
        """Test that dumped keys are the file spellings."""
        text = dump_config(ExperimentConfig())
        assert "lambda = -2.0\n" in text
        assert "grid.N = 1024\n" in text
        assert "eps = 0.1,0.01,0.001\n" in text
