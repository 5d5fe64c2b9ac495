"""Tests for the forward-difference calculus."""

import random
from fractions import Fraction

import pytest

from deltaclass.classify import ExpPolyForm
from deltaclass.diffcalc import (
    MixedDiffQuery,
    annihilates,
    conjugation_check,
    forward_diff,
    iterated_diff,
    leading_differences,
    mixed_diff,
    mixed_diff_expanded,
    mixed_diff_row,
    mixed_operator_coefficients,
    shifted_diff,
    signed_binomial_rows,
)
from deltaclass.exact import RationalPoly, Sequence, binomial
from deltaclass.exceptions import DomainError, InsufficientDataError


def _x_two_x(start: int, length: int) -> Sequence:
    return Sequence.from_function(lambda a: a * 2**a, start, length)


class TestForwardDiff:
    """Test Delta and its iterates."""

    def test_squares(self):
        """Test first differences of the squares."""
        assert forward_diff(Sequence(0, [0, 1, 4, 9, 16])) == Sequence(0, [1, 3, 5, 7])

    def test_constant(self):
        """Test that constants difference to zero."""
        assert forward_diff(Sequence(3, [7] * 5)).values == (0,) * 4

    def test_keeps_start(self):
        """Test a single difference at a non-zero start."""
        assert forward_diff(Sequence(5, [1, 2])) == Sequence(5, [1])

    def test_too_short(self):
        """Test the two-sample minimum."""
        with pytest.raises(InsufficientDataError):
            forward_diff(Sequence(0, [1]))

    def test_iterated(self):
        """Test Delta^n against composition and on 2^x."""
        squares = Sequence(0, [0, 1, 4, 9, 16])
        assert iterated_diff(squares, 2) == Sequence(0, [2, 2, 2])
        assert iterated_diff(squares, 2) == forward_diff(forward_diff(squares))
        assert iterated_diff(squares, 0) is squares
        powers = Sequence(0, [1, 2, 4, 8, 16, 32])
        assert iterated_diff(powers, 3) == Sequence(0, [1, 2, 4])

    def test_iterated_matches_composition(self):
        """Test the binomial formula against n-fold forward_diff for every n <= 30."""
        rng = random.Random(12)
        for _ in range(4):
            s = Sequence(
                rng.randint(0, 6),
                [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(34)],
            )
            composed = s
            diagonal = leading_differences(s.values)
            for n in range(31):
                assert iterated_diff(s, n) == composed
                assert diagonal[n] == composed.values[0]
                composed = forward_diff(composed)

    def test_iterated_needs_window(self):
        """Test that Delta^n needs n + 1 samples."""
        with pytest.raises(InsufficientDataError):
            iterated_diff(Sequence(0, [1, 2, 3]), 3)
        with pytest.raises(DomainError):
            iterated_diff(Sequence(0, [1, 2, 3]), -1)

    def test_leading_differences(self):
        """Test the Newton diagonal of the squares."""
        assert leading_differences([1, 2, 5, 10, 17]) == [1, 1, 2, 0, 0]
        assert leading_differences([1, 2, 5, 10, 17], 2) == [1, 1, 2]

    def test_signed_binomial_rows(self):
        """Test the Pascal-updated rows against direct binomials."""
        for n, row in signed_binomial_rows(8, 3):
            assert row == [(-1) ** (n - k) * binomial(n, k) for k in range(n + 1)]


class TestShiftedDiff:
    """Test (Delta - 1)."""

    def test_annihilates_powers_of_two(self):
        """Test that 2^x is in the kernel."""
        assert shifted_diff(Sequence(0, [1, 2, 4, 8])).values == (0, 0, 0)

    def test_x_two_x(self):
        """Test (Delta - 1)(x 2^x) = 2^(x+1)."""
        assert shifted_diff(Sequence(0, [0, 2, 8, 24])) == Sequence(0, [2, 4, 8])

    def test_constant(self):
        """Test (Delta - 1) 1 = -1."""
        assert shifted_diff(Sequence(0, [1, 1, 1])).values == (-1, -1)


class TestMixedDiff:
    """Test the mixed operator Delta^(n-a) (Delta-1)^a at a."""

    def test_examples(self):
        """Test closed-form values on x 2^x and 3^x."""
        s = _x_two_x(0, 10)
        assert mixed_diff(s, MixedDiffQuery(a=1, n=2)) == 4
        assert mixed_diff(s, MixedDiffQuery(a=2, n=2)) == 0
        powers = Sequence.from_function(lambda a: 3**a, 0, 10)
        assert mixed_diff(powers, MixedDiffQuery(a=1, n=2)) == 6

    def test_eigenvalue_of_exponentials(self):
        """Test (c-1)^(n-a) (c-2)^a c^a for a rational base."""
        c = Fraction(5, 2)
        s = Sequence.from_function(lambda a: c**a, 0, 20)
        for a in range(4):
            for n in range(a, 10):
                expected = (c - 1) ** (n - a) * (c - 2) ** a * c**a
                assert mixed_diff(s, MixedDiffQuery(a=a, n=n)) == expected

    def test_expanded_path_agrees(self):
        """Test the binomial expansion against the composition."""
        rng = random.Random(7)
        s = Sequence(0, [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(16)])
        for a in range(5):
            for n in range(a, 12):
                q = MixedDiffQuery(a=a, n=n)
                assert mixed_diff(s, q) == mixed_diff_expanded(s, q)

    def test_row_matches_pointwise(self):
        """Test that a row sweep equals per-n evaluation."""
        s = _x_two_x(3, 20)
        values = s.slice(3, s.end)
        row = mixed_diff_row(values, 3, 6, 9)
        assert row == [mixed_diff(s.window(3, s.end), MixedDiffQuery(a=3, n=n)) for n in range(6, 10)]

    def test_linearity(self):
        """Test exact linearity over random rational combinations."""
        rng = random.Random(11)
        f = [Fraction(rng.randint(-20, 20)) for _ in range(12)]
        g = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(12)]
        alpha, beta = Fraction(3, 7), Fraction(-2, 5)
        combined = Sequence(0, [alpha * u + beta * v for u, v in zip(f, g)])
        for a, n in [(0, 4), (2, 5), (3, 11)]:
            q = MixedDiffQuery(a=a, n=n)
            expected = alpha * mixed_diff(Sequence(0, f), q) + beta * mixed_diff(Sequence(0, g), q)
            assert mixed_diff(combined, q) == expected

    def test_annihilation_of_exp_polynomials(self):
        """Test vanishing once n - a > deg P1 and a > deg P2."""
        form = ExpPolyForm(RationalPoly([1, -2, "1/3"]), RationalPoly([4, 1]))
        s = form.synthesize(0, 30)
        for a in range(2, 8):
            for n in range(a + 3, a + 12):
                assert mixed_diff(s, MixedDiffQuery(a=a, n=n)) == 0

    def test_query_domain(self):
        """Test a > n and negative a."""
        with pytest.raises(DomainError):
            MixedDiffQuery(a=3, n=2)
        with pytest.raises(DomainError):
            MixedDiffQuery(a=-1, n=2)

    def test_window_required(self):
        """Test that f(a..a+n) must be present."""
        with pytest.raises(InsufficientDataError):
            mixed_diff(_x_two_x(0, 5), MixedDiffQuery(a=2, n=4))

    def test_operator_coefficients(self):
        """Test (E-1)^(n-a) (E-2)^a expanded in the shift."""
        # (E - 1)(E - 2) = E^2 - 3E + 2
        assert mixed_operator_coefficients(1, 2) == [2, -3, 1]
        assert mixed_operator_coefficients(0, 3) == [-1, 3, -3, 1]


class TestConjugation:
    """Test (Delta-1)^n (2^x h) = 2^(x+n) Delta^n h."""

    def test_square(self):
        """Test h = x^2, n = 1."""
        assert conjugation_check(Sequence.from_function(lambda a: a * a, 0, 6), 1)

    def test_constant(self):
        """Test h constant, both sides zero."""
        assert conjugation_check(Sequence(0, [5] * 6), 1)

    def test_linear_second_order(self):
        """Test h = x, n = 2."""
        assert conjugation_check(Sequence.from_function(lambda a: a, 0, 6), 2)

    def test_rational_h(self):
        """Test a rational h and a higher order."""
        h = Sequence.from_function(lambda a: Fraction(a**3 - 1, 3), 2, 12)
        assert conjugation_check(h, 4)


class TestAnnihilates:
    """Test the annihilator predicate."""

    def test_orders(self):
        """Test the smallest annihilating orders of a form."""
        form = ExpPolyForm(RationalPoly([0, 0, 1]), RationalPoly([1, 1]))
        values = form.synthesize(0, 20).values
        n, k = form.annihilator_orders()
        assert (n, k) == (3, 2)
        assert annihilates(values, n, k)
        assert not annihilates(values, n - 1, k)
        assert not annihilates(values, n, k - 1)

    def test_short_window(self):
        """Test the n + k + 1 sample minimum."""
        with pytest.raises(InsufficientDataError):
            annihilates([1, 2, 3], 2, 1)
