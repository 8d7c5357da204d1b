import numpy as np
import pytest

from sgspec import (PeriodError, QuadratureConfig,
                    SemigroupEvaluator, build_projection_family, catalog_build,
                    detect_period, fourier_reconstruct_A, fourier_reconstruct_T,
                    laurent_coefficients, periodic_resolvent,
                    periodicity_criterion_check, projection_family_checks,
                    rescale, spectral_projection)
from sgspec.periodic import ProjectionFamily, lattice_frequency

from support import eigenprojector

TOL = 1e-8


@pytest.fixture
def cfg():
    return QuadratureConfig()


def rotation_pair():
    return catalog_build("rotation2d", {"omega": 1.0})


class TestDetectPeriod:
    def test_trivial_semigroup_returns_zero(self):
        S = SemigroupEvaluator.from_dense(np.zeros((2, 2)))
        assert detect_period(S, 5.0, 4, TOL) == 0.0

    def test_rotation_divisor_scan(self):
        _, S = rotation_pair()
        rho = detect_period(S, 4 * np.pi, 8, TOL)
        assert abs(rho - 2 * np.pi) <= 1e-9

    def test_harmonic_diagonal(self):
        # e^{2 pi i t} and e^{4 pi i t} both return to 1 first at t = 1;
        # t = 1/2 flips the first entry to -1
        _, S = catalog_build("diagonal", {"entries": [2j * np.pi, 4j * np.pi]})
        assert detect_period(S, 1.0, 4, TOL) == 1.0

    def test_precondition_violation(self):
        _, S = rotation_pair()
        with pytest.raises(PeriodError):
            detect_period(S, 1.0, 4, TOL)

    def test_rescale_interplay(self):
        _, S = rotation_pair()
        for c in (2.0, 4.0):
            rho = detect_period(rescale(S, 0.0, c), 4 * np.pi / c, 8, TOL)
            assert abs(rho - 2 * np.pi / c) <= 1e-9


class TestSpectralProjection:
    def test_trivial_average_is_identity(self, cfg):
        S = SemigroupEvaluator.from_dense(np.zeros((3, 3)))
        P0 = spectral_projection(S, 2.0, 0, cfg)
        assert np.abs(P0 - np.eye(3)).max() <= 1e-12

    def test_oscillating_average_vanishes(self, cfg):
        S = SemigroupEvaluator.from_dense(np.zeros((2, 2)))
        P1 = spectral_projection(S, 2.0, 1, cfg)
        assert np.abs(P1).max() <= 1e-12

    @pytest.mark.parametrize("n", [1, -1])
    def test_rotation_projectors_match_eigendecomposition(self, cfg, n):
        spec, S = rotation_pair()
        P = spectral_projection(S, 2 * np.pi, n, cfg)
        oracle = eigenprojector(spec.matrix, 1j * n)
        assert np.linalg.norm(P - oracle, "fro") <= 1e-10
        assert np.abs(P @ P - P).max() <= 1e-12
        assert np.linalg.matrix_rank(P, tol=1e-6) == 1


class TestPeriodicResolvent:
    def test_trivial_generator_identity(self, cfg):
        S = SemigroupEvaluator.from_dense(np.zeros((2, 2)))
        R = periodic_resolvent(S, 1.0, 1.0, cfg)
        assert np.abs(R - np.eye(2)).max() <= 1e-10

    def test_rotation_matches_direct_solve(self, cfg):
        spec, S = rotation_pair()
        R = periodic_resolvent(S, 2 * np.pi, 1.0, cfg)
        direct = np.linalg.solve(np.eye(2) - spec.matrix, np.eye(2))
        assert np.abs(R - direct).max() <= 1e-8
        assert np.abs((np.eye(2) - spec.matrix) @ R - np.eye(2)).max() <= cfg.tol

    def test_diagonal_scalar_resolvents(self, cfg):
        _, S = catalog_build("diagonal", {"entries": [0.0, 2j * np.pi]})
        mu = 1j * np.pi
        R = periodic_resolvent(S, 1.0, mu, cfg)
        expected = np.diag([1.0 / mu, 1.0 / (mu - 2j * np.pi)])
        assert np.abs(R - expected).max() <= 1e-10

    def test_lattice_proximity_rejected(self, cfg):
        _, S = rotation_pair()
        with pytest.raises(ValueError):
            periodic_resolvent(S, 2 * np.pi, 1j + 1e-12, cfg)


class TestLaurentCoefficients:
    def test_pure_pole_of_trivial_generator(self, cfg):
        S = SemigroupEvaluator.from_dense(np.zeros((2, 2)))
        a = laurent_coefficients(S, 1.0, 0, 1, cfg)
        assert np.abs(a[0] - np.eye(2)).max() <= 1e-10  # a_{-1,0} = I
        assert np.abs(a[1]).max() <= 1e-10              # a_{0,0} = 0

    def test_partial_fraction_split(self):
        # R(lam) = diag(1/lam, 1/(lam - 2 pi i)); around 0 the second entry
        # is analytic with value i/(2 pi)
        cfg = QuadratureConfig(contour_radius=1.0)
        _, S = catalog_build("diagonal", {"entries": [0.0, 2j * np.pi]})
        a = laurent_coefficients(S, 1.0, 0, 0, cfg)
        assert np.abs(a[0] - np.diag([1.0, 0.0])).max() <= 1e-10
        assert np.abs(a[1] - np.diag([0.0, 1j / (2 * np.pi)])).max() <= 1e-10

    def test_residue_matches_averaging_projection(self, cfg):
        _, S = rotation_pair()
        a = laurent_coefficients(S, 2 * np.pi, 1, 0, cfg)
        P1 = spectral_projection(S, 2 * np.pi, 1, cfg)
        assert np.abs(a[0] - P1).max() <= 1e-9

    def test_partial_sums_reconstruct_resolvent(self, cfg):
        _, S = rotation_pair()
        rho = 2 * np.pi
        mu_1 = lattice_frequency(rho, 1)
        probe = mu_1 + cfg.contour_radius / 2.0
        R_exact = periodic_resolvent(S, rho, probe, cfg)

        def partial_defect(k_max):
            coeffs = laurent_coefficients(S, rho, 1, k_max, cfg)
            acc = np.zeros((2, 2), dtype=complex)
            for k, a in zip(range(-1, k_max + 1), coeffs):
                acc = acc + a * (probe - mu_1) ** k
            return np.abs(acc - R_exact).max()

        defects = [partial_defect(k) for k in (1, 4, 7)]
        assert defects[0] > defects[1] > defects[2]
        # tail ratio |probe - mu|/radius = 1/2: three extra terms gain ~ 2^3
        assert defects[0] / defects[2] > 16.0

    def test_radius_guard(self):
        cfg = QuadratureConfig(contour_radius=1.1)
        _, S = rotation_pair()  # admissible radii: (0, 1) for rho = 2 pi
        with pytest.raises(ValueError):
            laurent_coefficients(S, 2 * np.pi, 0, 0, cfg)


class TestFourierReconstruction:
    def test_single_projection_family(self):
        fam = ProjectionFamily(period=1.0, entries=[(0, 0.0 + 0.0j, np.eye(3, dtype=complex))])
        assert np.abs(fourier_reconstruct_T(fam, 0.37) - np.eye(3)).max() == 0.0
        assert np.abs(fourier_reconstruct_A(fam)).max() == 0.0

    def test_rotation_half_turn(self, cfg):
        _, S = rotation_pair()
        fam = build_projection_family(S, 2 * np.pi, cfg, tol=TOL)
        assert fam.n_range == (-1, 1)
        assert np.abs(fourier_reconstruct_T(fam, np.pi) + np.eye(2)).max() <= 1e-10

    def test_rotation_generator_reassembly(self, cfg):
        spec, S = rotation_pair()
        fam = build_projection_family(S, 2 * np.pi, cfg, tol=TOL)
        assert np.abs(fourier_reconstruct_A(fam) - spec.matrix).max() <= 1e-10

    def test_diagonal_lattice_family(self, cfg):
        spec, S = catalog_build("diagonal", {"entries": [2j * np.pi, -2j * np.pi]})
        fam = build_projection_family(S, 1.0, cfg, tol=TOL)
        assert np.abs(fourier_reconstruct_A(fam) - spec.matrix).max() <= 1e-8

    def test_disc_rotation_action(self, cfg):
        _, S = catalog_build("disc_rotation", {"degree": 3})
        fam = build_projection_family(S, 2 * np.pi, cfg, tol=TOL)
        expected = np.diag([1.0, np.exp(1j), np.exp(2j), np.exp(3j)])
        assert np.abs(fourier_reconstruct_T(fam, 1.0) - expected).max() <= 1e-10

    @pytest.mark.parametrize("cid,params,rho", [
        ("rotation2d", {"omega": 1.0}, 2 * np.pi),
        ("diagonal", {"entries": [0.0, 2j * np.pi]}, 1.0),
        ("disc_rotation", {"degree": 3}, 2 * np.pi),
    ])
    def test_round_trips(self, cfg, cid, params, rho):
        spec, S = catalog_build(cid, params)
        fam = build_projection_family(S, rho, cfg, tol=TOL)
        for t in np.linspace(0.0, 2 * rho, 10):
            defect = np.abs(fourier_reconstruct_T(fam, t) - S.matrix_at(t)).max()
            assert defect <= 1e-8
        assert np.abs(fourier_reconstruct_A(fam) - spec.matrix).max() <= 1e-8


class TestProjectionFamilyChecks:
    def test_trivial_family_passes(self, cfg):
        S = SemigroupEvaluator.from_dense(np.zeros((2, 2)))
        fam = ProjectionFamily(period=1.0, entries=[(0, 0j, np.eye(2, dtype=complex))])
        rep = projection_family_checks(fam, np.zeros((2, 2)), S, tol=TOL)
        assert rep.passed

    def test_rotation_family_kernel_dims(self, cfg):
        spec, S = rotation_pair()
        fam = build_projection_family(S, 2 * np.pi, cfg, tol=TOL)
        rep = projection_family_checks(fam, spec.matrix, S, tol=TOL)
        assert rep.passed
        assert rep.range_kernel_dims[1] == (1, 1)
        assert rep.range_kernel_dims[-1] == (1, 1)

    def test_corrupted_projection_fails_idempotence(self, cfg):
        spec, S = rotation_pair()
        fam = build_projection_family(S, 2 * np.pi, cfg, tol=TOL)
        entries = [(n, mu, P + 1e-3 if n == 1 else P) for n, mu, P in fam.entries]
        bad = ProjectionFamily(period=fam.period, entries=entries)
        rep = projection_family_checks(bad, spec.matrix, S, tol=TOL)
        assert not rep.passed
        assert "idempotence" in rep.failures

    def test_family_json_schema(self, cfg):
        _, S = rotation_pair()
        fam = build_projection_family(S, 2 * np.pi, cfg, tol=TOL)
        data = fam.to_json()
        assert data["period"] == 2 * np.pi
        assert {e["n"] for e in data["entries"]} == {-1, 0, 1}
        assert data["entries"][0]["mu"] == [0.0, lattice_frequency(2 * np.pi, -1).imag]


class TestPeriodicityCriterion:
    def test_lattice_diagonal_is_periodic(self):
        rep = periodicity_criterion_check(np.diag([2j * np.pi, -4j * np.pi]), 1.0, TOL)
        assert rep.spectrum_on_lattice and rep.eigenvectors_span
        assert rep.periodic
        assert rep.period_bound_defect <= TOL

    def test_jordan_block_fails_span_criterion(self):
        A = 2j * np.pi * (np.eye(3) + np.eye(3, k=1))
        rep = periodicity_criterion_check(A, 1.0, TOL)
        assert rep.spectrum_on_lattice
        assert not rep.eigenvectors_span
        assert rep.eigenvector_rank == 1
        assert not rep.periodic

    def test_fast_rotation(self):
        spec, _ = catalog_build("rotation2d", {"omega": 2 * np.pi})
        rep = periodicity_criterion_check(spec.matrix, 1.0, TOL)
        assert rep.periodic


class TestFamilyOracleAgreement:
    @pytest.mark.parametrize("cid,params,rho", [
        ("rotation2d", {"omega": 1.0}, 2 * np.pi),
        ("diagonal", {"entries": [0.0, 2j * np.pi]}, 1.0),
        ("disc_rotation", {"degree": 4}, 2 * np.pi),
    ])
    def test_quadrature_vs_eigendecomposition(self, cid, params, rho):
        spec, S = catalog_build(cid, params)
        cfg = QuadratureConfig()
        fam = build_projection_family(S, rho, cfg, tol=TOL)
        m = max(abs(n) for n, _, _ in fam.entries)
        assert cfg.contour_nodes >= 4 * (m + 1)
        for n, mu, P in fam.entries:
            eigs = np.linalg.eigvals(spec.matrix)
            if np.min(np.abs(eigs - mu)) <= 1e-9:
                oracle = eigenprojector(spec.matrix, mu)
            else:
                oracle = np.zeros_like(P)
            assert np.linalg.norm(P - oracle, "fro") <= 1e-9
