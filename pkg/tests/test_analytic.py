"""Closed-form amplitudes: exact values, invariants, residuals, convergence."""

import cmath
import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from robinwall.analytic import (
    PotentialKind,
    PotentialSpec,
    ReflectionResult,
    ScatterInput,
    boundary_residuals,
    calibrate_delta,
    calibrate_valley,
    calibrated_spec,
    convergence_curve,
    delta_reflection,
    eigenfunction,
    eval_eigenfunction,
    robin_reflection,
    valley_reflection,
)
from robinwall.errors import ConfigError, DomainError

# Frozen shooting-oracle values (RK4, h = 1e-5) for the two cross-check points.
ORACLE_B_DELTA_1_01_M11 = 0.16641666561980711 + 0.98605552247527406j
ORACLE_B_VALLEY_2_02_100 = -0.031908579147672526 + 0.9994907916418122j

ks = st.floats(min_value=0.05, max_value=20.0)
alphas = st.floats(min_value=-20.0, max_value=20.0)
widths = st.floats(min_value=1e-3, max_value=2.0)
lams = st.floats(min_value=-50.0, max_value=50.0)
depths = st.floats(min_value=0.0, max_value=400.0)


class TestRobinReflection:
    def test_trivial_cases(self):
        assert robin_reflection(1.0, 0.0) == 1.0 + 0.0j
        assert abs(robin_reflection(1.0, 1.0) - 1j) < 1e-12
        assert abs(robin_reflection(2.0, -3.0) - complex(-5, -12) / 13) < 1e-12

    @pytest.mark.parametrize("k", [0.0, -1.0, math.nan, math.inf])
    def test_bad_wavenumber(self, k):
        with pytest.raises(DomainError):
            robin_reflection(k, 1.0)

    def test_bad_alpha(self):
        with pytest.raises(DomainError):
            robin_reflection(1.0, math.nan)

    @given(k=ks, alpha=alphas)
    def test_unimodular(self, k, alpha):
        assert abs(abs(robin_reflection(k, alpha)) - 1.0) < 1e-12

    @given(k=ks, alpha=alphas)
    def test_conjugation_symmetry(self, k, alpha):
        assert abs(robin_reflection(k, -alpha) - robin_reflection(k, alpha).conjugate()) < 1e-12


class TestCalibration:
    def test_delta_values(self):
        assert calibrate_delta(0.1, 0.0) == pytest.approx(-10.0, abs=1e-12)
        assert calibrate_delta(0.01, 1.0) == pytest.approx(-101.0, abs=1e-10)
        assert calibrate_delta(1.0, -1.0) == pytest.approx(0.0, abs=1e-15)

    def test_valley_values(self):
        assert calibrate_valley(0.5, 0.0) == pytest.approx(math.pi**2, rel=1e-15)
        assert calibrate_valley(0.1, 0.0) == pytest.approx((5 * math.pi) ** 2, rel=1e-15)
        assert calibrate_valley(0.1, 1.0) == pytest.approx((5 * math.pi + 2 / math.pi) ** 2, rel=1e-15)

    @pytest.mark.parametrize("L", [0.0, -0.5])
    def test_bad_width(self, L):
        with pytest.raises(DomainError):
            calibrate_delta(L, 0.0)
        with pytest.raises(DomainError):
            calibrate_valley(L, 0.0)

    def test_valley_threshold_named_in_error(self):
        # for alpha < 0 the depth is real only below L = -pi^2/(4 alpha)
        with pytest.raises(DomainError, match="0.49348"):
            calibrate_valley(1.0, -5.0)
        # just below the threshold is fine
        assert calibrate_valley(0.49, -5.0) >= 0.0

    def test_calibrated_spec(self):
        spec = calibrated_spec("delta", 0.1, 0.0)
        assert spec.lam == pytest.approx(-10.0)
        spec = calibrated_spec("valley", 0.5, 0.0)
        assert spec.v == pytest.approx(math.pi**2)
        with pytest.raises(ConfigError):
            calibrated_spec("robin", 0.1, 0.0)


class TestLayerReflection:
    def test_dirichlet_reduction(self):
        # no layer at all collapses to the hard wall, b = -1
        assert abs(delta_reflection(1.0, 0.3, 0.0).b + 1.0) < 1e-12
        assert abs(valley_reflection(1.0, 0.3, 0.0).b + 1.0) < 1e-12

    @pytest.mark.parametrize("kind", ["delta", "valley"])
    def test_calibrated_limit_is_robin(self, kind):
        # k = 1, alpha = 1: b(L) -> i with O(L) error
        target = robin_reflection(1.0, 1.0)
        assert abs(target - 1j) < 1e-15
        errors = []
        for L in (0.1, 0.01, 0.001):
            if kind == "delta":
                b = delta_reflection(1.0, L, calibrate_delta(L, 1.0)).b
            else:
                b = valley_reflection(1.0, L, calibrate_valley(L, 1.0)).b
            err = abs(b - target)
            assert 0.05 * L < err < 2.0 * L  # first order, sane constant
            errors.append(err)
        assert errors == sorted(errors, reverse=True)

    def test_delta_matches_frozen_oracle(self):
        b = delta_reflection(1.0, 0.1, -11.0).b
        assert abs(b - ORACLE_B_DELTA_1_01_M11) < 1e-8

    def test_valley_matches_frozen_oracle(self):
        b = valley_reflection(2.0, 0.2, 100.0).b
        assert abs(b - ORACLE_B_VALLEY_2_02_100) < 1e-8

    @given(k=ks, L=widths, lam=lams)
    def test_delta_unimodular(self, k, L, lam):
        assert abs(abs(delta_reflection(k, L, lam).b) - 1.0) < 1e-12

    @given(k=ks, L=widths, v=depths)
    def test_valley_unimodular(self, k, L, v):
        assert abs(abs(valley_reflection(k, L, v).b) - 1.0) < 1e-12

    @given(k=ks, L=widths, lam=lams)
    def test_delta_c_equals_two_factor_form(self, k, L, lam):
        # the 1/(1 - e^{2ikL}) form has removable singularities at kL = n*pi;
        # away from them it must agree with the stable implementation
        s = math.sin(k * L)
        if abs(s) < 1e-6:
            return
        res = delta_reflection(k, L, lam)
        two_factor = (1.0 / (1.0 - cmath.exp(2j * k * L))) * (
            -2j * k * s / (k * cmath.exp(-1j * k * L) + lam * s)
        )
        assert abs(res.c - two_factor) < 1e-10 * max(1.0, abs(res.c))

    @given(k=ks, L=widths, v=depths)
    def test_valley_b_equals_cot_form(self, k, L, v):
        K = math.sqrt(k * k + v)
        if abs(math.sin(K * L)) < 1e-6:
            return
        res = valley_reflection(k, L, v)
        cot = 1.0 / math.tan(K * L)
        cot_form = (k - 1j * K * cot) / (k + 1j * K * cot) * cmath.exp(-2j * k * L)
        assert abs(res.b - cot_form) < 1e-10

    def test_negative_depth_rejected(self):
        with pytest.raises(DomainError):
            valley_reflection(1.0, 0.1, -1.0)


class TestDomainTypes:
    def test_scatter_input_validation(self):
        ScatterInput(k=1.0, alpha=0.0)
        ScatterInput(k=1.0, alpha=-2.0, L=0.5)
        with pytest.raises(DomainError):
            ScatterInput(k=0.0, alpha=0.0)
        with pytest.raises(DomainError):
            ScatterInput(k=1.0, alpha=0.0, L=0.0)

    def test_potential_spec_validation(self):
        PotentialSpec.robin()
        PotentialSpec.delta_layer(-3.0, 0.2)
        PotentialSpec.valley(5.0, 0.2)
        with pytest.raises(DomainError):
            PotentialSpec.valley(-1.0, 0.2)
        with pytest.raises(DomainError):
            PotentialSpec.delta_layer(-3.0, 0.0)
        with pytest.raises(ConfigError):
            PotentialSpec(PotentialKind.ROBIN, L=0.1)
        with pytest.raises(ConfigError):
            PotentialSpec(PotentialKind.DELTA, L=0.1, lam=1.0, v=2.0)


class TestEigenfunction:
    def test_wall_value_is_zero(self):
        eig = eigenfunction(1.0, PotentialSpec.delta_layer(-11.0, 0.1))
        assert eval_eigenfunction(eig, 0.0) == 0.0

    def test_branches_agree_at_layer_edge(self):
        eig = eigenfunction(1.3, PotentialSpec.valley(40.0, 0.25))
        k, b, L = 1.3, eig.coeffs.b, 0.25
        outer = cmath.exp(-1j * k * L) + b * cmath.exp(1j * k * L)
        assert abs(eig(-L) - outer) < 1e-10

    def test_neumann_is_cosine(self):
        eig = eigenfunction(0.8, PotentialSpec.robin(), alpha=0.0)
        for x in (-0.3, -1.7, -4.0):
            assert abs(eig(x) - 2.0 * math.cos(0.8 * x)) < 1e-12

    def test_beyond_wall_rejected(self):
        eig = eigenfunction(1.0, PotentialSpec.robin(), alpha=1.0)
        with pytest.raises(DomainError):
            eig(0.5)

    def test_interior_wavenumber(self):
        eig = eigenfunction(2.0, PotentialSpec.valley(100.0, 0.2))
        assert eig.K == pytest.approx(math.sqrt(104.0), rel=1e-15)
        eig = eigenfunction(2.0, PotentialSpec.delta_layer(-5.0, 0.2))
        assert eig.K == 2.0


class TestBoundaryResiduals:
    def test_solved_layers_satisfy_matching(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            k = rng.uniform(0.2, 5.0)
            L = rng.uniform(0.05, 1.0)
            d = eigenfunction(k, PotentialSpec.delta_layer(rng.uniform(-20, 20), L))
            assert boundary_residuals(d).worst() < 1e-10
            v = eigenfunction(k, PotentialSpec.valley(rng.uniform(0, 300), L))
            assert boundary_residuals(v).worst() < 1e-10

    def test_robin_residual(self):
        eig = eigenfunction(1.0, PotentialSpec.robin(), alpha=1.0)
        report = boundary_residuals(eig)
        assert report.robin < 1e-12
        assert report.wall is None and report.continuity is None

    def test_perturbed_coefficients_are_detected(self):
        eig = eigenfunction(1.0, PotentialSpec.delta_layer(-11.0, 0.1))
        bad = dataclasses.replace(
            eig, coeffs=ReflectionResult(b=eig.coeffs.b * cmath.exp(0.1j), c=eig.coeffs.c)
        )
        report = boundary_residuals(bad)
        assert report.jump_or_smoothness > 1e-3


class TestConvergenceCurve:
    WIDTHS = [0.1 * 2.0**-j for j in range(7)]

    @pytest.mark.parametrize("k,alpha,kind", [(1.0, 0.0, "delta"), (2.0, 1.0, "valley")])
    def test_first_order_convergence(self, k, alpha, kind):
        points = convergence_curve(k, alpha, kind, self.WIDTHS)
        errors = [p.error for p in points]
        assert all(a > b for a, b in zip(errors, errors[1:]))
        assert points[0].order is None
        assert 0.8 <= points[-1].order <= 1.2

    def test_usage_errors(self):
        with pytest.raises(ConfigError):
            convergence_curve(1.0, 0.0, "delta", [])
        with pytest.raises(ConfigError):
            convergence_curve(1.0, 0.0, "delta", [0.1])
        with pytest.raises(ConfigError):
            convergence_curve(1.0, 0.0, "delta", [0.05, 0.1])
        with pytest.raises(ConfigError):
            convergence_curve(1.0, 0.0, "robin", self.WIDTHS)

    def test_valley_respects_calibration_domain(self):
        with pytest.raises(DomainError, match="L <"):
            convergence_curve(1.0, -5.0, "valley", [1.0, 0.5])
