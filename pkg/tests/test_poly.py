"""Exact polynomial core: construction, evaluation, derivatives, rescaling."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from slcheck import SparsePoly, SubsetPoly, as_fraction, mask_from_indices, sparse_from_subset
from conftest import fd_partial, random_positive_point, random_subset_poly


class TestConstruction:
    def test_from_weights_defaults_to_zero(self):
        p = SubsetPoly.from_weights(2, {0b01: "1/2"})
        assert p.coeff(0b01) == Fraction(1, 2)
        assert p.coeff(0b00) == 0
        assert p.coeff(0b10) == 0

    def test_rejects_out_of_range_mask(self):
        with pytest.raises(ValueError):
            SubsetPoly.from_weights(2, {4: 1})

    def test_variable_cap(self):
        with pytest.raises(ValueError):
            SubsetPoly.zero(17)
        with pytest.raises(ValueError):
            SubsetPoly.zero(0)

    def test_floats_rejected_as_weights(self):
        with pytest.raises(TypeError):
            SubsetPoly.from_weights(1, {0: 0.5})

    def test_as_fraction_strings(self):
        assert as_fraction("3/22") == Fraction(3, 22)
        assert as_fraction("0.05") == Fraction(1, 20)
        assert as_fraction(7) == Fraction(7)

    def test_product_measure_is_distribution(self):
        p = SubsetPoly.product_measure(["1/2", "1/3", "1/4"])
        assert p.is_distribution()
        # p({1}) = (1/2)(2/3)(3/4)
        assert p.coeff(0b001) == Fraction(1, 2) * Fraction(2, 3) * Fraction(3, 4)


class TestCounterexampleValues:
    """Frozen values for the built-in counterexample distribution."""

    def test_coefficients(self, counterexample):
        p = counterexample
        assert p.coeff(0) == Fraction(4, 22)
        for mask in (0b001, 0b010, 0b100, 0b011, 0b101, 0b110):
            assert p.coeff(mask) == Fraction(3, 22)
        assert p.coeff(0b111) == 0
        assert p.is_distribution()

    def test_eval_at_ones(self, counterexample):
        assert counterexample.eval((1.0, 1.0, 1.0)) == pytest.approx(1.0, abs=1e-12)

    def test_eval_at_origin_gives_constant_term(self, counterexample):
        assert counterexample.eval((0.0, 0.0, 0.0)) == pytest.approx(4 / 22, abs=1e-15)

    def test_eval_exact(self, counterexample):
        assert counterexample.eval_exact((1, 1, 1)) == 1
        assert counterexample.eval_exact((0, 0, 0)) == Fraction(2, 11)

    def test_first_derivative(self, counterexample):
        d1 = counterexample.derivative(1)
        assert d1.coeff(0) == Fraction(3, 22)
        assert d1.coeff(0b010) == Fraction(3, 22)
        assert d1.coeff(0b100) == Fraction(3, 22)
        assert d1.coeff(0b001) == 0
        assert d1.coeff(0b110) == 0
        assert d1.is_affine()

    def test_second_derivative_is_constant(self, counterexample):
        d12 = counterexample.derivative(1).derivative(2)
        assert d12.is_constant()
        assert d12.coeff(0) == Fraction(3, 22)

    def test_repeated_derivative_vanishes(self, counterexample):
        assert counterexample.derivative(1).derivative(1).is_zero()

    def test_derivative_subset_pairs_and_triple(self, counterexample):
        p = counterexample
        assert p.derivative_subset(0) == p
        d12 = p.derivative_subset(0b011)
        assert d12.is_constant() and d12.coeff(0) == Fraction(3, 22)
        assert p.derivative_subset(0b111).is_zero()

    def test_normalization_of_raw_weights(self, raw_counterexample, counterexample):
        assert raw_counterexample.coeff_sum() == 22
        assert raw_counterexample.normalize() == counterexample


class TestDerivatives:
    def test_matches_finite_differences(self):
        rng = np.random.default_rng(7)
        checks = 0
        while checks < 1000:
            n = int(rng.integers(1, 5))
            p = random_subset_poly(rng, n)
            var = int(rng.integers(1, n + 1))
            d = p.derivative(var)
            x = random_positive_point(rng, n)
            want = fd_partial(p.eval, x, var - 1, 1e-5)
            got = d.eval(x)
            assert abs(got - want) <= 1e-6 * (1.0 + abs(want))
            checks += 1

    def test_derivatives_commute_exactly(self):
        rng = np.random.default_rng(8)
        for _ in range(300):
            n = int(rng.integers(2, 5))
            p = random_subset_poly(rng, n)
            i = int(rng.integers(1, n + 1))
            j = int(rng.integers(1, n + 1))
            assert p.derivative(i).derivative(j) == p.derivative(j).derivative(i)

    def test_derivative_subset_coefficient_identity(self):
        rng = np.random.default_rng(9)
        for _ in range(300):
            n = int(rng.integers(1, 5))
            p = random_subset_poly(rng, n)
            a = int(rng.integers(0, 1 << n))
            q = p.derivative_subset(a)
            for s in range(1 << n):
                if s & a:
                    assert q.coeff(s) == 0
                else:
                    assert q.coeff(s) == p.coeff(s | a)

    def test_derivative_subset_equals_iterated_derivative(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            n = int(rng.integers(1, 5))
            p = random_subset_poly(rng, n)
            a = int(rng.integers(0, 1 << n))
            q = p
            for var in range(1, n + 1):
                if a >> (var - 1) & 1:
                    q = q.derivative(var)
            assert q == p.derivative_subset(a)

    def test_index_out_of_range(self):
        p = SubsetPoly.zero(2)
        with pytest.raises(IndexError):
            p.derivative(0)
        with pytest.raises(IndexError):
            p.derivative(3)


class TestRescaling:
    def test_scale_is_exact_on_rational_points(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            n = int(rng.integers(1, 4))
            p = random_subset_poly(rng, n)
            lam = Fraction(int(rng.integers(1, 30)), int(rng.integers(1, 9)))
            x = [Fraction(int(rng.integers(0, 12)), int(rng.integers(1, 5))) for _ in range(n)]
            assert p.scale(lam).eval_exact(x) == lam * p.eval_exact(x)

    def test_scale_rejects_nonpositive(self):
        p = SubsetPoly.constant(1, 1)
        with pytest.raises(ValueError):
            p.scale(0)
        with pytest.raises(ValueError):
            p.scale("-2/3")

    def test_normalize_rejects_zero_sum(self):
        with pytest.raises(ValueError):
            SubsetPoly.zero(2).normalize()

    def test_normalize_produces_distribution(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            p = random_subset_poly(rng, 3)
            assert p.normalize().is_distribution()


class TestStructurePredicates:
    def test_affine_and_monomial(self):
        p = SubsetPoly.from_weights(3, {0: 1, 0b001: 2, 0b100: 3})
        assert p.is_affine() and not p.is_monomial()
        q = SubsetPoly.from_weights(3, {0b101: "7/2"})
        assert q.is_monomial() and not q.is_affine()
        assert SubsetPoly.point_mass(3, 0).is_constant()

    def test_permute_relabels_evaluation(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            n = int(rng.integers(2, 5))
            p = random_subset_poly(rng, n)
            images = tuple(int(v) + 1 for v in rng.permutation(n))
            q = p.permute(images)
            x = random_positive_point(rng, n)
            # q(x) = p evaluated with coordinate i read from slot images[i]
            relabeled = [0.0] * n
            for i in range(n):
                relabeled[i] = x[images[i] - 1]
            assert q.eval(x) == pytest.approx(p.eval(tuple(relabeled)), rel=1e-12)

    def test_permute_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            SubsetPoly.zero(2).permute((1, 1))


class TestSparsePoly:
    def test_square_of_affine(self):
        # (1 + y + z)^2 over (x, y, z)
        one_yz = SparsePoly.make(3, {(0, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1})
        sq = one_yz * one_yz
        assert sq == SparsePoly.make(
            3,
            {
                (0, 0, 0): 1,
                (0, 1, 0): 2,
                (0, 0, 1): 2,
                (0, 2, 0): 1,
                (0, 0, 2): 1,
                (0, 1, 1): 2,
            },
        )

    def test_mul_identity_and_zero(self):
        rng = np.random.default_rng(14)
        p = sparse_from_subset(random_subset_poly(rng, 3))
        one = SparsePoly.constant(3, 1)
        assert p * one == p
        assert (p - p).is_zero()

    def test_sparse_from_subset_agrees_on_points(self):
        rng = np.random.default_rng(15)
        for _ in range(10):
            n = int(rng.integers(1, 5))
            p = random_subset_poly(rng, n)
            s = sparse_from_subset(p)
            for _ in range(10):
                x = random_positive_point(rng, n)
                assert abs(p.eval(x) - s.eval(x)) <= 1e-12 * (1.0 + abs(p.eval(x)))

    def test_abs_coeffs_bounds_on_positive_orthant(self):
        rng = np.random.default_rng(16)
        terms = {(2, 0, 0): Fraction(-3), (1, 1, 0): Fraction(5), (0, 0, 1): Fraction(-1)}
        q = SparsePoly.make(3, terms)
        bound = q.abs_coeffs()
        for _ in range(50):
            x = random_positive_point(rng, 3)
            assert abs(q.eval(x)) <= bound.eval(x) + 1e-12

    def test_format_is_deterministic(self):
        q = SparsePoly.make(3, {(0, 1, 1): 6, (0, 1, 0): 3, (0, 0, 1): 3, (0, 0, 0): 1})
        assert q.format() == "1 + 3*y + 3*z + 6*y*z"

    def test_canonical_zero_dropping(self):
        q = SparsePoly.make(2, {(1, 0): 1})
        r = q - q
        assert r.terms == {}
        assert r == SparsePoly.zero(2)


class TestHelpers:
    def test_mask_roundtrip(self):
        assert mask_from_indices((1, 3), 3) == 0b101
        with pytest.raises(IndexError):
            mask_from_indices((4,), 3)
        with pytest.raises(ValueError):
            mask_from_indices((2, 2), 3)

    def test_eval_dimension_mismatch(self):
        with pytest.raises(ValueError):
            SubsetPoly.zero(2).eval((1.0,))

    def test_eval_rejects_non_finite(self):
        with pytest.raises(ValueError):
            SubsetPoly.zero(2).eval((float("nan"), 1.0))
