import numpy as np
import pytest

from sgspec import (QuadratureConfig, disc_rotation_semigroup,
                    hardy_projection_check, point_spectrum,
                    verify_hardy_spectrum, weighted_seminorm)
from sgspec.hardy import DiscFunction, WeightFunction


@pytest.fixture
def cfg():
    return QuadratureConfig()


class TestDiscRotationSemigroup:
    def test_degree_zero_is_trivial(self):
        S = disc_rotation_semigroup(0)
        assert S.dim == 1
        for t in (0.0, 1.0, 9.3):
            assert np.abs(S.matrix_at(t) - np.eye(1)).max() <= 1e-15

    def test_half_turn_alternates_signs(self):
        S = disc_rotation_semigroup(2)
        out = S.evaluate(np.pi, [1.0, 1.0, 1.0])
        assert np.abs(out - np.array([1.0, -1.0, 1.0])).max() <= 1e-12

    @pytest.mark.parametrize("N", [1, 3, 6])
    def test_full_turn_is_identity(self, N):
        S = disc_rotation_semigroup(N)
        assert np.abs(S.matrix_at(2 * np.pi) - np.eye(N + 1)).max() <= 1e-12


class TestHardySpectrum:
    def test_degree_one(self):
        rep = verify_hardy_spectrum(1, 1e-8)
        assert rep.passed
        assert sorted(z.imag for z in rep.computed) == [0.0, 1.0]

    def test_degree_eight_all_simple(self):
        rep = verify_hardy_spectrum(8, 1e-8)
        assert rep.passed
        assert rep.spectrum_defect <= 1e-12
        assert rep.eigenspace_dims == [1] * 9

    def test_corrupted_generator_fails_eigenvector_check(self):
        A = np.diag([0.0, 1j, 2j]).astype(complex)
        A[0, 1] = 1e-2
        rep = verify_hardy_spectrum(2, 1e-8, generator=A)
        assert not rep.passed
        assert rep.coordinate_alignment_defect > 1e-8

    def test_label_marks_truncation(self):
        assert "truncated" in verify_hardy_spectrum(2, 1e-8).label


class TestHardyProjections:
    def test_matching_monomial_is_invariant(self, cfg):
        g = DiscFunction.monomial(4, 2)
        rep = hardy_projection_check(4, 2, g, cfg)
        assert rep.passed and rep.defect <= 1e-14

    def test_mismatched_monomial_is_annihilated(self, cfg):
        g = DiscFunction.monomial(4, 2)
        rep = hardy_projection_check(4, 1, g, cfg)
        assert rep.passed  # expected output is the zero function

    def test_coefficient_extraction(self, cfg):
        g = DiscFunction(2, [1.0, 2.0, 3j])
        rep = hardy_projection_check(2, 1, g, cfg)
        assert rep.passed
        # frozen: P_1 (1 + 2z + 3i z^2) = 2z

    def test_mode_range_validated(self, cfg):
        g = DiscFunction.monomial(2, 0)
        with pytest.raises(ValueError):
            hardy_projection_check(2, 3, g, cfg)

    def test_projection_commutes_with_flow(self, cfg):
        # T(t) P_n = e^{int} P_n on coefficient space
        N = 3
        S = disc_rotation_semigroup(N)
        rng = np.random.default_rng(0)
        g = DiscFunction(N, rng.standard_normal(N + 1) + 1j * rng.standard_normal(N + 1))
        for n in range(N + 1):
            proj = np.zeros(N + 1, dtype=complex)
            proj[n] = g.coeffs[n]
            for t in np.linspace(0.0, 2 * np.pi, 7):
                lhs = S.evaluate(t, proj)
                rhs = np.exp(1j * n * t) * proj
                assert np.abs(lhs - rhs).max() <= 1e-10

    def test_point_mapping_on_the_example(self):
        # sigma_p(T(t)) = {e^{int}} as sets; t = 2 pi collapses to {1}
        N = 3
        S = disc_rotation_semigroup(N)
        for t in (1.0, np.pi, 2 * np.pi):
            values = [p.value for p in point_spectrum(S.matrix_at(t), 1e-8)]
            expected = {np.round(np.exp(1j * n * t), 9) for n in range(N + 1)}
            assert len(values) == len(expected)
        collapsed = point_spectrum(S.matrix_at(2 * np.pi), 1e-8)
        assert len(collapsed) == 1 and abs(collapsed[0].value - 1.0) <= 1e-10


class TestWeightedSeminorm:
    def test_zero_function(self):
        nu = WeightFunction.radial([0.0, 0.5, 0.9], lambda r: 1.0 - r)
        assert weighted_seminorm(DiscFunction(2, [0, 0, 0]), nu) == 0.0

    def test_constant_function_flat_weight(self):
        nu = WeightFunction.radial([0.0, 0.3, 0.6], lambda r: 0.7)
        assert abs(weighted_seminorm(DiscFunction(0, [1.0]), nu) - 0.7) <= 1e-15

    def test_linear_monomial_peak(self):
        # max over the grid of r (1 - r) is 0.25 at r = 0.5
        nu = WeightFunction.radial(np.arange(0.0, 0.91, 0.1), lambda r: 1.0 - r)
        f = DiscFunction.monomial(1, 1)
        assert abs(weighted_seminorm(f, nu) - 0.25) <= 1e-12

    def test_monotone_in_the_weight(self):
        rng = np.random.default_rng(4)
        f = DiscFunction(3, rng.standard_normal(4) + 1j * rng.standard_normal(4))
        radii = np.linspace(0.0, 0.9, 10)
        small = WeightFunction.radial(radii, lambda r: 1.0 - r)
        large = WeightFunction.radial(radii, lambda r: 2.0 * (1.0 - r) + 0.1)
        assert weighted_seminorm(f, large) >= weighted_seminorm(f, small)

    def test_validation(self):
        with pytest.raises(ValueError):
            WeightFunction([(1.2, 0.5)])
        with pytest.raises(ValueError):
            WeightFunction([(0.2, -0.5)])
        with pytest.raises(ValueError):
            weighted_seminorm(DiscFunction(0, [1.0]), WeightFunction([]))


class TestWeightCsv:
    def test_round_trip(self, tmp_path):
        nu = WeightFunction([(0.5 * np.exp(0.3j), 0.25), (0.0, 1.0)])
        path = tmp_path / "grid.csv"
        nu.to_csv(str(path))
        back = WeightFunction.from_csv(str(path))
        for (z1, v1), (z2, v2) in zip(nu.samples, back.samples):
            assert abs(z1 - z2) <= 1e-15 and v1 == v2

    def test_header_enforced(self, tmp_path):
        path = tmp_path / "grid.csv"
        path.write_text("radius,angle,w\n0.5,0,1\n")
        with pytest.raises(ValueError):
            WeightFunction.from_csv(str(path))


class TestDiscFunctionType:
    def test_evaluation(self):
        f = DiscFunction(2, [1.0, 2.0, 3.0])
        assert abs(f(0.5) - (1.0 + 1.0 + 0.75)) <= 1e-15

    def test_json_round_trip(self):
        f = DiscFunction(2, [1.0, 2.0 + 1j, -3j])
        g = DiscFunction.from_json(f.to_json())
        assert g.degree == 2 and np.array_equal(g.coeffs, f.coeffs)

    def test_validation(self):
        with pytest.raises(ValueError):
            DiscFunction(2, [1.0, 2.0])
        with pytest.raises(ValueError):
            DiscFunction(1, [np.inf, 0.0])
