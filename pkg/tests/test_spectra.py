import numpy as np
import pytest

from sgspec import (brute_force_eigen_oracle, decomposition_check,
                    hausdorff_distance, point_spectrum, residual_spectrum,
                    resolvent_map_check, spectrum_report)
from sgspec.spectra import (approximate_spectrum, algebraic_spectrum,
                            characteristic_polynomial, durand_kerner,
                            topological_spectrum)

from support import catalog_entries, random_complex_matrix

TOL = 1e-8


def jordan_block(n, value=0.0):
    return value * np.eye(n, dtype=complex) + np.eye(n, k=1, dtype=complex)


class TestPointSpectrum:
    def test_zero_matrix_single_cluster(self):
        out = point_spectrum(np.zeros((4, 4)), TOL)
        assert len(out) == 1
        assert out[0].value == 0.0
        assert out[0].multiplicity == 4
        assert len(out[0].eigenvectors) == 4

    def test_mode_diagonal_standard_basis(self):
        out = point_spectrum(np.diag([0.0, 1j, 2j]), TOL)
        values = [p.value for p in out]
        assert hausdorff_distance(values, [0.0, 1j, 2j]) <= TOL
        for p in out:
            n = int(round(p.value.imag))
            (v,) = p.eigenvectors
            # coordinate vector up to phase
            phase = v[n] / abs(v[n])
            e = np.zeros(3, dtype=complex)
            e[n] = phase
            assert np.abs(v - e).max() <= 1e-12

    def test_jordan_block_geometric_deficiency(self):
        # oracle: cofactor characteristic polynomial of the 3x3 block is z^3
        coeffs = characteristic_polynomial(jordan_block(3))
        assert np.abs(coeffs - np.array([0, 0, 0, 1], dtype=complex)).max() == 0.0
        out = point_spectrum(jordan_block(3), TOL)
        assert len(out) == 1
        assert abs(out[0].value) <= 1e-10
        assert out[0].multiplicity == 3
        assert len(out[0].eigenvectors) == 1

    @pytest.mark.parametrize("seed", [0, 3, 8])
    def test_eigenpair_residuals(self, seed):
        rng = np.random.default_rng(seed)
        A = random_complex_matrix(rng, 5)
        scale = max(1.0, np.linalg.norm(A, np.inf))
        for p in point_spectrum(A, TOL):
            for v in p.eigenvectors:
                assert np.abs(A @ v - p.value * v).max() <= 10 * TOL * scale


class TestResidualSpectrum:
    def test_zero_matrix(self):
        assert residual_spectrum(np.zeros((2, 2)), TOL) == [0.0]

    def test_diagonal_rank_deficiency(self):
        out = residual_spectrum(np.diag([1.0, 2.0]), TOL)
        assert hausdorff_distance(out, [1.0, 2.0]) <= TOL

    def test_agrees_with_transpose_point_spectrum(self):
        rng = np.random.default_rng(17)
        A = random_complex_matrix(rng, 5)
        res = residual_spectrum(A, TOL)
        dual = [p.value for p in point_spectrum(A.T, TOL)]
        assert hausdorff_distance(res, dual) <= TOL * max(1.0, np.linalg.norm(A, np.inf))


class TestDecomposition:
    def test_scalar(self):
        rep = decomposition_check(np.diag([1.0 + 1.0j]), TOL)
        assert rep.passed and rep.topological_empty

    def test_companion_of_cubic(self):
        # companion matrix of z^3 - 1; roots are the cube roots of unity
        C = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
        roots = [1.0, -0.5 + 0.5j * np.sqrt(3), -0.5 - 0.5j * np.sqrt(3)]
        rep = spectrum_report(C, TOL)
        assert hausdorff_distance(rep.point_values(), roots) <= 1e-10
        assert decomposition_check(C, TOL).passed

    def test_random_matrix(self):
        rng = np.random.default_rng(23)
        A = random_complex_matrix(rng, 6)
        rep = decomposition_check(A, TOL)
        assert rep.passed
        assert rep.algebraic_vs_union <= TOL * max(1.0, np.linalg.norm(A, np.inf))


class TestCollapse:
    @pytest.mark.parametrize("name,spec,S", catalog_entries(),
                             ids=[n for n, _, _ in catalog_entries()])
    def test_all_variants_coincide_and_topological_empty(self, name, spec, S):
        rep = spectrum_report(spec.matrix, TOL)
        scale = max(1.0, np.linalg.norm(spec.matrix, np.inf))
        assert rep.collapse_defect() <= TOL * scale
        assert rep.topological == []

    def test_transpose_symmetry(self):
        rng = np.random.default_rng(31)
        A = random_complex_matrix(rng, 5)
        d = hausdorff_distance([p.value for p in point_spectrum(A, TOL)],
                               [p.value for p in point_spectrum(A.T, TOL)])
        assert d <= TOL * max(1.0, np.linalg.norm(A, np.inf))

    def test_report_json_is_sorted(self):
        rep = spectrum_report(np.diag([2.0, -1.0, 1j]), TOL)
        data = rep.to_json()
        assert data["point"] == sorted(data["point"], key=lambda p: (p["lambda"][0], p["lambda"][1]))
        assert data["topological"] == []


class TestResolventMapping:
    def test_zero_matrix(self):
        rep = resolvent_map_check(np.zeros((2, 2)), 1.0, TOL)
        assert rep.passed
        assert rep.hausdorff <= 1e-14

    def test_two_mode_diagonal(self):
        rep = resolvent_map_check(np.diag([0.0, 1j]), 2.0, TOL)
        assert rep.passed
        # frozen scalar arithmetic: {1/2, 1/(2-i)}
        expected = [0.5, 1.0 / (2.0 - 1j)]
        assert hausdorff_distance(expected, [0.5, 0.4 + 0.2j]) <= 1e-15
        assert rep.hausdorff <= 1e-12

    @pytest.mark.parametrize("seed", [1, 4])
    def test_random_matrix_far_shift(self, seed):
        rng = np.random.default_rng(seed)
        A = random_complex_matrix(rng, 5)
        lam = np.linalg.norm(A, np.inf) + 1.0
        rep = resolvent_map_check(A, lam, TOL)
        assert rep.passed
        assert rep.hausdorff <= 1e-8
        assert max(rep.kernel_angles) <= 1e-8

    def test_shift_too_close_to_spectrum(self):
        with pytest.raises(ValueError):
            resolvent_map_check(np.diag([1.0, 2.0]), 1.0 + 1e-10, TOL)


class TestBruteForceOracle:
    def test_two_by_two_diagonal(self):
        out = brute_force_eigen_oracle(np.diag([3.0, -1.0]))
        assert hausdorff_distance(out, [3.0, -1.0]) <= 1e-12

    def test_rotation_generator_pure_imaginary_pair(self):
        out = brute_force_eigen_oracle(np.array([[0.0, -1.0], [1.0, 0.0]]))
        assert hausdorff_distance(out, [1j, -1j]) <= 1e-12

    def test_cross_agreement_with_main_eigensolver(self):
        rng = np.random.default_rng(7)
        A = random_complex_matrix(rng, 4)
        oracle = brute_force_eigen_oracle(A)
        main = list(np.linalg.eigvals(A))
        assert hausdorff_distance(oracle, main) <= 1e-7

    @pytest.mark.parametrize("name,spec,S", [e for e in catalog_entries()
                                             if e[1].matrix.shape[0] <= 6],
                             ids=[e[0] for e in catalog_entries()
                                  if e[1].matrix.shape[0] <= 6])
    def test_oracle_agreement_on_catalog(self, name, spec, S):
        oracle = brute_force_eigen_oracle(spec.matrix)
        main = list(np.linalg.eigvals(spec.matrix))
        assert hausdorff_distance(oracle, main) <= 1e-7

    def test_multiple_root_polynomial(self):
        roots = durand_kerner(np.array([0, 0, 0, 1], dtype=complex))
        assert np.abs(roots).max() <= 1e-9

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            brute_force_eigen_oracle(np.eye(7))


class TestSetUtilities:
    def test_hausdorff_basics(self):
        assert hausdorff_distance([], []) == 0.0
        assert hausdorff_distance([1.0], []) == float("inf")
        assert hausdorff_distance([0.0, 1.0], [1.0, 0.0]) == 0.0
        assert abs(hausdorff_distance([0.0], [3.0 + 4.0j]) - 5.0) <= 1e-15

    def test_variant_helpers_match(self):
        A = np.diag([1.0, 1j])
        assert approximate_spectrum(A, TOL) == algebraic_spectrum(A, TOL)
        assert topological_spectrum(A, TOL) == []
