"""Tests for the arc and segment integral audits."""

import pytest
from mpmath import mp

from deltaclass.config import QuadratureConfig
from deltaclass.contour import (
    arc_limit,
    bound_exponent,
    quad_I,
    quad_J,
    segment_limit,
    simpson_I,
    simpson_J,
    verify_integral_bounds,
)
from deltaclass.exceptions import DomainError


@pytest.fixture
def quick_config():
    """Low-cost quadrature settings for unit tests."""
    return QuadratureConfig(precision=30, simpson_nodes=20_000, mu_max=2)


class TestGeometry:
    """Test the contour parameterization."""

    def test_arc_endpoint_on_line(self):
        """Test that the arc ends where Re z = -s."""
        with mp.workdps(30):
            theta = arc_limit(8, 2)
            assert abs(16 * mp.cos(theta) + 2) < mp.mpf("1e-25")
            # major arc: past the imaginary axis
            assert theta > mp.pi / 2

    def test_segment_meets_circle(self):
        """Test that the segment ends on |z| = 2n."""
        with mp.workdps(30):
            y = segment_limit(8, 2)
            assert abs(mp.sqrt(4 + y * y) - 16) < mp.mpf("1e-25")

    def test_bound_exponents(self):
        """Test mu/2 for I and s - 1 for J."""
        assert bound_exponent("I", 3, 2) == 1
        assert bound_exponent("J", 3, 2) == 2


class TestQuadrature:
    """Test the two integrals and their cross-checks."""

    def test_domain(self):
        """Test n >= 4, 2 <= s <= n/2 and mu <= s."""
        with pytest.raises(DomainError):
            quad_I(3, 2, 0)
        with pytest.raises(DomainError):
            quad_J(8, 5, 0)
        with pytest.raises(DomainError):
            quad_J(8, 2, 3)
        with pytest.raises(DomainError):
            simpson_I(8, 1, 0)

    def test_J_positive(self):
        """Test that J of a positive integrand is positive."""
        value = quad_J(8, 2, 1, precision=30)
        assert value.lower > 0

    def test_I_small_cell(self):
        """Test I(8, 2, 0) < 100 and the Simpson cross-check."""
        value = quad_I(8, 2, 0, precision=30)
        assert value.upper < 100
        simpson = simpson_I(8, 2, 0, nodes=20_000)
        assert abs(value.mid - simpson) <= 1e-4 * abs(value.mid)

    def test_J_cell(self):
        """Test J(16, 4, 2) < 100 (100 * 4 / 16)^3 and the cross-check."""
        value = quad_J(16, 4, 2, precision=30)
        assert value.upper < 100 * 25**3
        simpson = simpson_J(16, 4, 2, nodes=20_000)
        assert abs(value.mid - simpson) <= 1e-4 * abs(value.mid)

    def test_radius_reported(self):
        """Test that every value carries a positive error radius."""
        value = quad_I(8, 3, 1, precision=30)
        assert value.rad > 0
        assert value.lower < value.mid < value.upper


class TestIntegralBounds:
    """Test the bound sweep with b = d = 100."""

    def test_small_sweep(self, quick_config):
        """Test n in {4, 8}, all s and mu <= 2."""
        body = verify_integral_bounds([4, 8], quick_config)
        assert body.b == 100 and body.d == 100
        # n = 4: s = 2; n = 8: s = 2..4; mu <= min(s, 2); both integrals
        assert len(body.cells) == 2 * (3 + 3 * 3)
        assert all(c.passed for c in body.cells)
        assert all(c.agreement for c in body.cells)

    def test_single_cell_margin(self, quick_config):
        """Test the reported ratio and minimal constants for (4, 2, 2)."""
        body = verify_integral_bounds([4], quick_config)
        cell = next(c for c in body.cells if (c.kind, c.s, c.mu) == ("I", 2, 2))
        assert mp.mpf(cell.ratio) < 1
        assert cell.min_b is not None
        assert mp.mpf(cell.min_d) < 100
        mu_zero = next(c for c in body.cells if (c.kind, c.mu) == ("I", 0))
        assert mu_zero.min_b is None

    def test_rejects_small_n(self):
        """Test n = 3."""
        with pytest.raises(DomainError):
            verify_integral_bounds([3])

    @pytest.mark.slow
    def test_full_sweep(self):
        """Test n in {4, 8, 16, 32, 64} with mu <= min(s, 8)."""
        body = verify_integral_bounds([4, 8, 16, 32, 64], QuadratureConfig(precision=30))
        assert all(c.passed for c in body.cells)
        assert all(c.agreement for c in body.cells)
