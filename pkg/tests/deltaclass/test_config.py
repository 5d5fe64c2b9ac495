"""Tests for run configuration."""

import pytest

from deltaclass.config import (
    DEFAULT_PRECISION,
    ClassifyConfig,
    ConcordanceConfig,
    QuadratureConfig,
    env_precision,
)
from deltaclass.exceptions import ConfigError


class TestClassifyConfig:
    """Test ClassifyConfig validation."""

    def test_defaults(self):
        """Test K = 2 and auto cut."""
        config = ClassifyConfig()
        assert config.K == 2
        assert config.cut is None

    def test_invalid(self):
        """Test K < 2, a negative cut and an empty tail."""
        with pytest.raises(ConfigError):
            ClassifyConfig(K=1)
        with pytest.raises(ConfigError):
            ClassifyConfig(cut=-1)
        with pytest.raises(ConfigError):
            ClassifyConfig(polya_min_tail=0)


class TestConcordanceConfig:
    """Test ConcordanceConfig validation."""

    def test_samples(self):
        """Test samples >= 1."""
        with pytest.raises(ConfigError):
            ConcordanceConfig(samples=0)


class TestQuadratureConfig:
    """Test QuadratureConfig validation."""

    def test_even_nodes(self):
        """Test that an odd node count is rounded up."""
        assert QuadratureConfig(precision=30, simpson_nodes=1001).simpson_nodes == 1002

    def test_low_precision(self):
        """Test precision >= 15."""
        with pytest.raises(ConfigError):
            QuadratureConfig(precision=10)

    def test_env_precision(self, monkeypatch):
        """Test DELTACLASS_PRECISION and its default."""
        monkeypatch.delenv("DELTACLASS_PRECISION", raising=False)
        assert env_precision() == DEFAULT_PRECISION
        monkeypatch.setenv("DELTACLASS_PRECISION", "80")
        assert QuadratureConfig().precision == 80
        monkeypatch.setenv("DELTACLASS_PRECISION", "ten")
        with pytest.raises(ConfigError):
            env_precision()
        monkeypatch.setenv("DELTACLASS_PRECISION", "12")
        with pytest.raises(ConfigError):
            env_precision()
