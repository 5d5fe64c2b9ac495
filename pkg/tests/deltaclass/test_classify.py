"""Tests for polynomial and exp-polynomial classification."""

import math
import random
from fractions import Fraction

import pytest

from deltaclass.classify import (
    ClassificationReport,
    ExpPolyForm,
    Verdict,
    classify,
    eval_expoly,
    expoly_fit,
    extend_by_vanishing,
    form_from_strings,
    polya_reconstruct,
    vanishing_scan,
)
from deltaclass.config import ClassifyConfig
from deltaclass.exact import RationalPoly, Sequence, solve_exact
from deltaclass.exceptions import DomainError, InsufficientDataError, ReconstructionError
from deltaclass.parallel import serial_executor


def _random_coefficient(rng: random.Random, rational: bool, bound: int = 10) -> Fraction:
    numerator = rng.randint(-bound, bound)
    return Fraction(numerator, rng.randint(1, bound) if rational else 1)


def _random_form(rng: random.Random, rational: bool = False) -> ExpPolyForm:
    p1 = [_random_coefficient(rng, rational) for _ in range(rng.randint(1, 5))]
    p2 = [_random_coefficient(rng, rational) for _ in range(rng.randint(0, 4))]
    leading = Fraction(0)
    while not leading:
        leading = _random_coefficient(rng, rational)
    return ExpPolyForm(RationalPoly(p1), RationalPoly([*p2, leading]))


def _basis_row(m: int, d1: int, d2: int) -> list[int]:
    return [m**i for i in range(d1 + 1)] + [m**j * 2**m for j in range(d2 + 1)]


class TestExpPolyForm:
    """Test exp-polynomial evaluation."""

    def test_examples(self):
        """Test p1 + p2 * 2^a on small cases."""
        assert eval_expoly(ExpPolyForm(RationalPoly([0, 1]), RationalPoly([1])), 3) == 11
        assert eval_expoly(ExpPolyForm(), 7) == 0
        assert eval_expoly(ExpPolyForm(RationalPoly([1]), RationalPoly(["-1/2"])), 1) == 0

    def test_negative_argument(self):
        """Test that a < 0 is out of domain."""
        with pytest.raises(DomainError):
            eval_expoly(ExpPolyForm(), -1)

    def test_synthesize(self):
        """Test exact synthesis on a window."""
        form = form_from_strings(["1", "3"], ["0", "0", "1"])
        s = form.synthesize(2, 10)
        assert s.start == 2
        assert [v for _, v in s] == [3 * a + 1 + a * a * 2**a for a in range(2, 12)]
        assert not form.is_polynomial
        assert form_from_strings(["1/2"], []).is_polynomial


class TestExpPolyUniqueness:
    """Test that d1 + d2 + 2 consecutive samples pin a form down."""

    def test_consecutive_samples_determine_form(self):
        """Test that the square system on d1 + d2 + 2 points returns the form."""
        rng = random.Random(21)
        for _ in range(40):
            form = _random_form(rng, rational=rng.random() < 0.5)
            d1 = max(form.p1.degree, 0) + rng.randint(0, 2)
            d2 = form.p2.degree + rng.randint(0, 2)
            a0 = rng.randint(0, 10)
            nodes = list(range(a0, a0 + d1 + d2 + 2))
            solution = solve_exact(
                [_basis_row(m, d1, d2) for m in nodes], [form(m) for m in nodes], nodes=nodes
            )
            recovered = ExpPolyForm(RationalPoly(solution[: d1 + 1]), RationalPoly(solution[d1 + 1 :]))
            assert recovered == form

    def test_one_point_fewer_is_not_enough(self):
        """Test a nonzero form vanishing on d1 + d2 + 1 consecutive points."""
        rng = random.Random(22)
        for _ in range(20):
            d1, d2 = rng.randint(0, 3), rng.randint(0, 3)
            a0 = rng.randint(0, 10)
            nodes = list(range(a0, a0 + d1 + d2 + 2))
            rhs = [0] * (len(nodes) - 1) + [1]
            coeffs = solve_exact([_basis_row(m, d1, d2) for m in nodes], rhs, nodes=nodes)
            bump = ExpPolyForm(RationalPoly(coeffs[: d1 + 1]), RationalPoly(coeffs[d1 + 1 :]))
            assert bump != ExpPolyForm()
            assert all(bump(m) == 0 for m in nodes[:-1])
            assert bump(nodes[-1]) == 1


class TestPolyaReconstruct:
    """Test Newton reconstruction from a vanishing tail."""

    def test_square_plus_one(self):
        """Test X^2 + 1 from five samples."""
        s = Sequence(0, [1, 2, 5, 10, 17])
        assert polya_reconstruct(s, 0) == RationalPoly([1, 0, 1])

    def test_constant(self):
        """Test a constant window."""
        assert polya_reconstruct(Sequence(4, [9, 9, 9, 9]), 4) == RationalPoly([9])

    def test_powers_of_two_fail(self):
        """Test that 2^x has no vanishing tail."""
        with pytest.raises(ReconstructionError):
            polya_reconstruct(Sequence(0, [1, 2, 4, 8, 16]), 0)

    def test_base_outside_window(self):
        """Test that B..B+2 must be present."""
        with pytest.raises(InsufficientDataError):
            polya_reconstruct(Sequence(0, [1, 2, 5]), 1)

    def test_nonzero_base(self):
        """Test reconstruction from an interior base point."""
        p = RationalPoly([-3, 0, "1/2", 2])
        s = Sequence.from_function(p, 0, 15)
        assert polya_reconstruct(s, 6) == p

    def test_random_round_trip(self):
        """Test exact recovery of 100 seeded rational polynomials of degree <= 8."""
        rng = random.Random(2024)
        for _ in range(100):
            degree = rng.randint(0, 8)
            p = RationalPoly(
                Fraction(rng.randint(-10, 10), rng.randint(1, 6)) for _ in range(degree + 1)
            )
            start = rng.randint(0, 5)
            s = Sequence.from_function(p, start, degree + 6)
            assert polya_reconstruct(s, start) == p


class TestExpolyFit:
    """Test the exact fit in the mixed basis."""

    def test_x_plus_two_x(self):
        """Test m + 2^m on 2..5 with B = 2, K = 2."""
        s = Sequence(2, [6, 11, 20, 37])
        form = expoly_fit(s, 2, 2)
        assert form.p1 == RationalPoly([0, 1])
        assert form.p2 == RationalPoly([1])

    def test_zero(self):
        """Test the zero window."""
        form = expoly_fit(Sequence(0, [0] * 12), 3, 3)
        assert form.p1.is_zero() and form.p2.is_zero()

    def test_pure_exponential(self):
        """Test 2^m on 1..3 with B = 1, K = 2."""
        form = expoly_fit(Sequence(1, [2, 4, 8]), 1, 2)
        assert form.p1.is_zero()
        assert form.p2 == RationalPoly([1])

    def test_domain(self):
        """Test B >= 1, K >= 2 and the node window."""
        s = Sequence(0, list(range(20)))
        with pytest.raises(DomainError):
            expoly_fit(s, 0, 2)
        with pytest.raises(DomainError):
            expoly_fit(s, 2, 1)
        with pytest.raises(InsufficientDataError):
            expoly_fit(s, 6, 3)


class TestVanishingScan:
    """Test the mixed-difference vanishing scan."""

    def test_x_plus_two_x(self):
        """Test that every coverable a >= 2 is satisfied."""
        s = ExpPolyForm(RationalPoly([0, 1]), RationalPoly([1])).synthesize(1, 40)
        entries = vanishing_scan(s, 2)
        assert entries[0].a == 1
        assert not entries[0].satisfied
        assert all(e.satisfied for e in entries if e.a >= 2)
        # last coverable a has a + 2(a + 1) <= 40
        assert entries[-1].a == 12

    def test_three_to_the_x(self):
        """Test that 3^x never satisfies the condition."""
        s = Sequence.from_function(lambda a: 3**a, 0, 41)
        entries = vanishing_scan(s, 2)
        assert entries
        for entry in entries:
            assert not entry.satisfied
            for n, value in entry.witnesses:
                assert value == 2 ** (n - entry.a) * 3**entry.a

    def test_short_window(self):
        """Test that a window too short for any a gives no entries."""
        assert vanishing_scan(Sequence(0, [1, 2]), 2) == []

    def test_a_min(self):
        """Test the lower bound on a."""
        s = Sequence.from_function(lambda a: a, 0, 30)
        assert [e.a for e in vanishing_scan(s, 2, a_min=4)][0] == 4

    def test_K_domain(self):
        """Test K >= 2."""
        with pytest.raises(DomainError):
            vanishing_scan(Sequence(0, [1] * 10), 1)


class TestExtendByVanishing:
    """Test forward propagation through the vanishing relations."""

    def test_extends_exp_polynomial(self):
        """Test that a seed of x + 2^x extends to the true continuation."""
        form = ExpPolyForm(RationalPoly([0, 1]), RationalPoly([1]))
        seed = form.synthesize(2, 4)
        assert extend_by_vanishing(seed, 2, 2, 30) == form.synthesize(2, 29)

    def test_seed_too_short(self):
        """Test that the seed must reach (K+1)B - 1."""
        with pytest.raises(InsufficientDataError):
            extend_by_vanishing(Sequence(2, [1, 2]), 2, 2, 10)


class TestClassify:
    """Test the classification pipeline."""

    def test_exp_polynomial(self):
        """Test a^2 2^a + 3a + 1 on 2..60."""
        form = form_from_strings(["1", "3"], ["0", "0", "1"])
        report = classify(form.synthesize(2, 59), ClassifyConfig(K=2))
        assert report.verdict is Verdict.EXPOLY
        assert report.form is not None
        assert report.form.p1 == RationalPoly([1, 3])
        assert report.form.p2 == RationalPoly([0, 0, 1])
        assert report.verified_from == 3
        assert report.verified_to == 60
        assert report.integral_coefficients

    def test_cube(self):
        """Test X^3 on 0..20."""
        report = classify(Sequence.from_function(lambda a: a**3, 0, 21))
        assert report.verdict is Verdict.POLYNOMIAL
        assert report.polynomial == RationalPoly([0, 0, 0, 1])
        assert report.verified_from == 0

    def test_factorial_inconclusive(self):
        """Test a! on 1..12."""
        report = classify(Sequence.from_function(math.factorial, 1, 12))
        assert report.verdict is Verdict.INCONCLUSIVE
        assert not report.conclusive
        assert report.reason

    def test_require_integer(self):
        """Test that a rational sample forces Inconclusive."""
        s = Sequence(0, [1, 2, "5/2", 4, 5, 6])
        report = classify(s, ClassifyConfig(require_integer=True))
        assert report.verdict is Verdict.INCONCLUSIVE
        assert report.failures[0].a == 2

    def test_rational_polynomial(self):
        """Test that rational coefficients are reported, not rejected."""
        report = classify(Sequence.from_function(lambda a: Fraction(a * (a - 1), 2), 0, 12))
        assert report.verdict is Verdict.POLYNOMIAL
        assert report.integral_coefficients is False

    def test_cut_outside_window(self):
        """Test an explicit cut beyond the data."""
        report = classify(Sequence(0, [1, 2, 3]), ClassifyConfig(cut=9))
        assert report.verdict is Verdict.INCONCLUSIVE
        assert report.cut == 9

    def test_explicit_cut_ignores_prefix(self):
        """Test that samples before the cut do not matter."""
        s = Sequence.from_function(lambda a: a * a, 0, 20).perturbed(1, 5)
        report = classify(s, ClassifyConfig(cut=3))
        assert report.verdict is Verdict.POLYNOMIAL
        assert report.polynomial == RationalPoly([0, 0, 1])

    def test_closed_form_and_body(self):
        """Test the report helpers."""
        form = form_from_strings(["0", "1"], ["1"])
        report = classify(form.synthesize(1, 30))
        assert report.closed_form(100) == form(100)
        body = report.to_body()
        assert body.verdict == "expoly"
        assert body.p1 == ["0", "1"]
        assert body.p2 == ["1"]
        assert body.K_used == 2

    def test_inconclusive_has_no_closed_form(self):
        """Test closed_form on an Inconclusive report."""
        report = ClassificationReport(Verdict.INCONCLUSIVE, 2)
        with pytest.raises(DomainError):
            report.closed_form(0)

    @pytest.mark.parametrize("K", [2, 3])
    def test_random_round_trip(self, K):
        """Test exact recovery of seeded random forms and the perturbation flip."""
        rng = random.Random(1000 + K)
        executor = serial_executor()
        for _ in range(50):
            form = _random_form(rng)
            s = form.synthesize(1, 40)
            report = classify(s, ClassifyConfig(K=K), executor)
            assert report.verdict is Verdict.EXPOLY, str(form)
            assert report.form == form

            perturbed = s.perturbed(s.end, 1)
            assert classify(perturbed, ClassifyConfig(K=K), executor).verdict is Verdict.INCONCLUSIVE

    @pytest.mark.parametrize("K", [2, 3])
    def test_random_rational_round_trip(self, K):
        """Test exact recovery with numerators and denominators up to 10."""
        rng = random.Random(2000 + K)
        executor = serial_executor()
        for _ in range(40):
            form = _random_form(rng, rational=True)
            report = classify(form.synthesize(1, 40), ClassifyConfig(K=K), executor)
            assert report.verdict is Verdict.EXPOLY, str(form)
            assert report.form == form

    def test_early_perturbation_shrinks_verified_range(self):
        """Test that altering f(2) of 2^x moves the verified start to 3."""
        form = ExpPolyForm(RationalPoly(), RationalPoly([1]))
        report = classify(form.synthesize(1, 40).perturbed(2, 1))
        assert report.verdict is Verdict.EXPOLY
        assert report.form == form
        assert report.verified_from == 3

    @pytest.mark.parametrize("K", [2, 3])
    def test_random_mid_window_perturbation(self, K):
        """Test that any alteration is either Inconclusive or left before verified_from."""
        rng = random.Random(3000 + K)
        executor = serial_executor()
        for _ in range(30):
            form = _random_form(rng)
            s = form.synthesize(1, 40)
            j = rng.randint(s.start, s.end - 1)
            report = classify(s.perturbed(j, rng.choice([-3, -1, 1, 2])), ClassifyConfig(K=K), executor)
            if report.verdict is not Verdict.INCONCLUSIVE:
                assert report.verdict is Verdict.EXPOLY
                assert report.verified_from > j
                assert report.form == form
