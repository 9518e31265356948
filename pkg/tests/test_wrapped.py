"""Wrapped tangent laws: series values, singular tags, folds, mode scans."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from sphstats.errors import ConvergenceError
from sphstats.geometry import exp_map_sphere, quat_to_rotation, unit_vector
from sphstats.wrapped import (
    WrappedSpec,
    mode_count,
    wrapped_circle_density,
    wrapped_colatitude_density,
    wrapped_so3_density,
    wrapped_sphere_density,
)

from oracles import colatitude_lattice_sum, wrapped_normal_circle


def _gauss1(sigma2):
    return lambda u: math.exp(-u * u / (2.0 * sigma2)) / math.sqrt(2.0 * math.pi * sigma2)


class TestWrappedSphere:
    def test_north_pole_leading_term_limit(self):
        spec = WrappedSpec(q=3, sigma2=1.0)
        tagged = wrapped_sphere_density(spec, [0.0, 0.0, 1.0])
        assert tagged.divergent
        assert tagged.finite_part == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-12)

    def test_near_pole_approaches_g0(self):
        spec = WrappedSpec(q=3, sigma2=1.0)
        g0 = spec.density(np.zeros(2))
        for theta in (1e-3, 1e-4):
            y = [math.sin(theta), 0.0, math.cos(theta)]
            value = wrapped_sphere_density(spec, y)
            assert not value.divergent
            assert value.finite_part == pytest.approx(g0, rel=5e-3)

    def test_south_pole_all_terms_divergent(self):
        tagged = wrapped_sphere_density(WrappedSpec(q=3, sigma2=1.0), [0.0, 0.0, -1.0])
        assert tagged.divergent
        assert tagged.finite_part == 0.0

    def test_circle_case_has_no_singular_prefactor(self):
        # q = 2: the sin^{q-2} factor is 1 and the series is one-sided
        sigma2 = 0.8
        spec = WrappedSpec(q=2, sigma2=sigma2)
        for theta in (0.3, 1.0, 2.5):
            plus = wrapped_sphere_density(spec, [math.sin(theta), math.cos(theta)])
            minus = wrapped_sphere_density(spec, [-math.sin(theta), math.cos(theta)])
            assert not plus.divergent
            # even tangent density: each branch carries half the fold
            fold = wrapped_circle_density(_gauss1(sigma2), theta)
            assert plus.finite_part + minus.finite_part == pytest.approx(fold, rel=1e-12)

    def test_mass_conservation_with_pole_caps(self):
        spec = WrappedSpec(q=3, sigma2=1.0)
        eps = 1e-4

        def slice_mass(theta):
            y = [math.sin(theta), 0.0, math.cos(theta)]
            return 2.0 * math.pi * math.sin(theta) * wrapped_sphere_density(spec, y).finite_part

        total, _ = quad(slice_mass, eps, math.pi - eps, limit=200)
        assert total == pytest.approx(1.0, abs=1e-4)

    def test_tail_failure_signaled(self):
        heavy = WrappedSpec(q=3, tangent_density=lambda x: 0.05 / (1.0 + float(x @ x)), max_k=10)
        with pytest.raises(ConvergenceError):
            wrapped_sphere_density(heavy, [math.sin(1.0), 0.0, math.cos(1.0)])


class TestWrappedColatitude:
    def test_matches_direct_lattice_oracle(self):
        rng = np.random.Generator(np.random.Philox(key=np.array([99, 1], dtype=np.uint64)))
        for _ in range(100):
            sigma2 = float(rng.uniform(0.05, 3.0))
            theta = float(rng.uniform(1e-3, math.pi - 1e-3))
            mine = wrapped_colatitude_density(sigma2, theta)
            oracle = colatitude_lattice_sum(theta, sigma2)
            assert mine == pytest.approx(oracle, rel=1e-10)

    def test_endpoints_rejected(self):
        with pytest.raises(ValueError):
            wrapped_colatitude_density(1.0, 0.0)
        with pytest.raises(ValueError):
            wrapped_colatitude_density(1.0, math.pi)

    def test_truncation_beyond_k5_negligible(self):
        # first omitted pair at k = 6 is below exp(-(2 pi 6)^2/(2 s2))-ish
        for sigma2 in (0.5, 1.0, 2.0):
            full = colatitude_lattice_sum(1.7, sigma2, k_range=60)
            k5 = colatitude_lattice_sum(1.7, sigma2, k_range=5)
            assert abs(full - k5) < 1e-12

    def test_monotone_partial_sums(self):
        # all terms positive: adding terms never decreases the sum
        sigma2, theta = 1.5, 2.1
        partials = [colatitude_lattice_sum(theta, sigma2, k_range=k) for k in range(6)]
        assert all(b >= a for a, b in zip(partials, partials[1:]))


class TestWrappedCircle:
    @pytest.mark.parametrize("sigma2", [0.5, 2.0])
    def test_matches_folded_wrapped_normal_oracle(self, sigma2):
        g = _gauss1(sigma2)
        for theta in np.linspace(0.0, math.pi, 25):
            fold = wrapped_normal_circle(float(theta), sigma2) + wrapped_normal_circle(
                -float(theta), sigma2
            )
            assert wrapped_circle_density(g, float(theta)) == pytest.approx(fold, abs=1e-10)

    @pytest.mark.parametrize("sigma2", [0.5, 2.0])
    def test_unit_mass(self, sigma2):
        total, _ = quad(lambda t: wrapped_circle_density(_gauss1(sigma2), t), 0.0, math.pi)
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_uniform_tangent_density_folds_flat(self):
        g = lambda u: 1.0 / (2.0 * math.pi) if -math.pi < u <= math.pi else 0.0
        for theta in (0.2, 1.0, 2.0, 3.0):
            assert wrapped_circle_density(g, theta) == pytest.approx(1.0 / math.pi, rel=1e-12)


class TestWrappedSo3:
    def test_identity_rotation_is_singular_locus(self):
        spec = WrappedSpec(q=4, sigma2=0.5)
        tagged = wrapped_so3_density(spec, quat_to_rotation([1.0, 0.0, 0.0, 0.0]))
        assert tagged.divergent

    def test_fold_symmetry_under_quaternion_sign(self):
        spec = WrappedSpec(q=4, sigma2=0.5)
        q = unit_vector([0.8, 0.3, -0.4, 0.33166247903554])
        a = wrapped_so3_density(spec, quat_to_rotation(q))
        b = wrapped_so3_density(spec, quat_to_rotation(-np.asarray(q)))
        assert a == b

    def test_concentrated_regime_matches_tangent_gaussian(self):
        # rotation by 0.1 rad sits at quaternion colatitude 0.05; with
        # sigma2 = 0.01 the wrap terms are invisible and the Jacobian
        # correction (t/sin t)^2 is ~0.08 percent
        spec = WrappedSpec(q=4, sigma2=0.01)
        axis = unit_vector([1.0, 2.0, -1.0])
        half = 0.05
        quat = np.concatenate([[math.cos(half)], math.sin(half) * axis])
        value = wrapped_so3_density(spec, quat_to_rotation(quat))
        tangent = spec.density(half * axis)
        assert not value.divergent
        assert value.finite_part == pytest.approx(tangent, rel=0.01)


class TestConcentratedPushforward:
    def test_pushforward_matches_tangent_density(self):
        # relative deviation of the leading term is (r/sin r)^{q-2} - 1,
        # about r^2/6 on S_2: within 1 percent for r <= 2 sigma and 1.6
        # percent out to 3 sigma at sigma2 = 0.01
        spec = WrappedSpec(q=3, sigma2=0.01)
        sigma = 0.1
        rng = np.random.Generator(np.random.Philox(key=np.array([5, 5], dtype=np.uint64)))
        for _ in range(200):
            x = rng.standard_normal(2)
            radius = rng.uniform(0.05 * sigma, 3.0 * sigma)
            x *= radius / np.linalg.norm(x)
            value = wrapped_sphere_density(spec, exp_map_sphere(x)).finite_part
            tangent = spec.density(x)
            bound = 0.01 if radius <= 2.0 * sigma else 0.016
            assert abs(value - tangent) <= bound * tangent


class TestModeCount:
    @pytest.mark.parametrize("sigma2", [1.0, 2.0])
    def test_interior_minimum_present(self, sigma2):
        diag = mode_count(sigma2)
        assert diag.interior_minima >= 1
        assert diag.mode_regions >= 2
        assert diag.right_endpoint_divergent

    def test_left_divergence_visible_only_at_large_variance(self):
        assert mode_count(2.0).left_endpoint_divergent
        assert not mode_count(0.1).left_endpoint_divergent

    @pytest.mark.parametrize("sigma2", [0.01, 0.1])
    def test_concentrated_regime_single_mode_region(self, sigma2):
        diag = mode_count(sigma2)
        assert diag.interior_minima == 0
        assert diag.mode_regions == 1
        assert diag.argmax_theta < 0.5  # dominant mode sits by the pole

    def test_stable_under_grid_refinement(self):
        for sigma2 in (0.1, 1.0, 2.0):
            coarse = mode_count(sigma2, grid_points=10**4)
            fine = mode_count(sigma2, grid_points=10**5)
            assert coarse.interior_minima == fine.interior_minima
            assert coarse.interior_maxima == fine.interior_maxima
            assert coarse.mode_regions == fine.mode_regions
