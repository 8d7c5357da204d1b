"""Periodic semigroups: period detection, spectral projections, the
full-period resolvent formula, Laurent data, and Fourier reconstruction.

For a semigroup with minimal period rho > 0 the resolvent and the spectral
projections are available purely from semigroup evaluations:

    R(mu, A) = (1 - e^{-mu rho})^{-1} int_0^rho e^{-mu s} T(s) ds,
    P_n      = (1/rho) int_0^rho e^{-mu_n s} T(s) ds,   mu_n = 2 pi i n / rho,

and the Laurent coefficients of R around the pole mu_n come from circular
contour integrals.  Everything here consumes the evaluator, never an
eigendecomposition; eigensolver-based projectors act as test oracles only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import ConvergenceError, PeriodError
from .operators import SemigroupEvaluator, generator_of, mat_inf, ent_inf
from .quadrature import (QuadratureConfig, contour_integral_circle,
                         weighted_operator_sum, _gauss_nodes,
                         _SMOOTH_PANEL_WIDTH, _LAPLACE_GAUSS_ORDER)
from .spectra import (kernel_basis, range_basis, max_principal_angle,
                      point_spectrum)


def detect_period(S: SemigroupEvaluator, t0: float, k_max: int, tol: float,
                  trivial_grid: int = 64) -> float:
    """Smallest divisor t0/k (k <= k_max) at which T returns to the identity.

    Requires ||T(t0) - I|| <= tol up front (t0 must be a known period
    multiple); the minimal period can only be 0 or a divisor t0/k, so no
    general minimisation over t is attempted.  Returns the sentinel 0.0 when
    T(t) stays within tol of the identity on a fine grid over (0, t0]
    (trivial semigroup).
    """
    if not t0 > 0:
        raise ValueError("t0 must be > 0")
    if int(k_max) < 1:
        raise ValueError("k_max must be >= 1")
    eye = np.eye(S.dim, dtype=complex)
    defect0 = mat_inf(S.matrix_at(t0) - eye)
    if defect0 > tol:
        raise PeriodError(
            f"||T(t0) - I|| = {defect0:.3g} > tol {tol:.3g}; t0 = {t0} is not a period")

    grid = np.linspace(t0 / trivial_grid, t0, trivial_grid)
    if all(mat_inf(S.matrix_at(t) - eye) <= tol for t in grid):
        return 0.0

    for k in range(int(k_max), 0, -1):
        cand = t0 / k
        if mat_inf(S.matrix_at(cand) - eye) <= tol:
            return cand
    return t0  # k = 1 always satisfies the precondition


def lattice_frequency(rho: float, n: int) -> complex:
    """mu_n = 2 pi i n / rho, the n-th resolvent pole of a rho-periodic semigroup."""
    if not rho > 0:
        raise ValueError("rho must be > 0")
    return 2j * math.pi * n / rho


def spectral_projection(S: SemigroupEvaluator, rho: float, n: int,
                        cfg: QuadratureConfig) -> np.ndarray:
    """P_n = (1/rho) int_0^rho e^{-mu_n s} T(s) ds by the periodic trapezoid rule.

    The integrand is rho-periodic (mu_n sits on the frequency lattice), so the
    trapezoid rule with cfg.contour_nodes equispaced nodes is spectrally
    accurate and mandatory here; the result is idempotent up to that accuracy.
    """
    if not rho > 0:
        raise ValueError("spectral projections need a positive period")
    mu = lattice_frequency(rho, n)
    N = int(cfg.contour_nodes)
    s_nodes = rho * np.arange(N) / N
    weights = np.full(N, 1.0 / N)
    return weighted_operator_sum(S, s_nodes, weights, lambda s: cmath.exp(-mu * s))


def _period_panel_rule(rho: float, cfg: QuadratureConfig):
    """High-order panel rule on [0, rho] for non-periodic integrands.

    Off the frequency lattice the integrand e^{-mu s} T(s) is smooth but not
    periodic, so the trapezoid rule would converge only at second order;
    composite Gauss-Legendre panels reach the configured tolerances instead.
    """
    panels = max(16, int(cfg.orbit_nodes) // _LAPLACE_GAUSS_ORDER,
                 math.ceil(rho / _SMOOTH_PANEL_WIDTH))
    return _gauss_nodes(0.0, rho, panels, _LAPLACE_GAUSS_ORDER)


def periodic_resolvent(S: SemigroupEvaluator, rho: float, mu: complex,
                       cfg: QuadratureConfig) -> np.ndarray:
    """R(mu, A) = (1 - e^{-mu rho})^{-1} int_0^rho e^{-mu s} T(s) ds.

    mu must stay away from the pole lattice (2 pi i / rho) Z, detected through
    |1 - e^{-mu rho}| > 1e-8.
    """
    if not rho > 0:
        raise ValueError("periodic resolvent needs a positive period")
    mu = complex(mu)
    factor = 1.0 - cmath.exp(-mu * rho)
    if abs(factor) <= 1e-8:
        raise ValueError(f"mu = {mu} is too close to the pole lattice 2*pi*i/rho * Z")
    s_nodes, weights = _period_panel_rule(rho, cfg)
    integral = weighted_operator_sum(S, s_nodes, weights, lambda s: cmath.exp(-mu * s))
    return integral / factor


def _cached_periodic_resolvent(S: SemigroupEvaluator, rho: float,
                               cfg: QuadratureConfig):
    """Resolvent evaluator reusing one set of T(s) samples for every mu."""
    s_nodes, weights = _period_panel_rule(rho, cfg)
    samples = [(float(s), float(w), S.matrix_at(float(s)))
               for s, w in zip(s_nodes, weights)]

    def resolve(mu: complex) -> np.ndarray:
        mu = complex(mu)
        factor = 1.0 - cmath.exp(-mu * rho)
        if abs(factor) <= 1e-8:
            raise ValueError(f"contour node {mu} fell on the pole lattice")
        acc = np.zeros((S.dim, S.dim), dtype=complex)
        for s, w, Ts in samples:
            acc = acc + (w * cmath.exp(-mu * s)) * Ts
        return acc / factor

    return resolve


def laurent_coefficients(S: SemigroupEvaluator, rho: float, n: int, k_max: int,
                         cfg: QuadratureConfig) -> List[np.ndarray]:
    """Laurent coefficients a_{k,n} of R(mu, A) around the pole mu_n, k = -1..k_max.

    a_{k,n} = (1/2 pi i) * integral over the circle |lambda - mu_n| = r of
    R(lambda, A) / (lambda - mu_n)^{k+1}; the radius must satisfy
    0 < r < 2 pi / rho so the circle encloses no other pole.  a_{-1,n} equals
    the averaging projection P_n, and the partial sums reconstruct R near mu_n.
    """
    if not rho > 0:
        raise ValueError("Laurent data needs a positive period")
    radius = float(cfg.contour_radius)
    if not (0.0 < radius < 2.0 * math.pi / rho):
        raise ValueError(
            f"contour radius {radius} outside the admissible range (0, {2 * math.pi / rho:.6g})")
    mu_n = lattice_frequency(rho, n)
    resolve = _cached_periodic_resolvent(S, rho, cfg)
    out = []
    for k in range(-1, int(k_max) + 1):
        def f(lam, _k=k):
            return resolve(lam) / (lam - mu_n) ** (_k + 1)
        out.append(contour_integral_circle(f, mu_n, radius, cfg.contour_nodes))
    return out


# ---------------------------------------------------------------------------
# Projection families and Fourier reconstruction
# ---------------------------------------------------------------------------

@dataclass
class ProjectionFamily:
    """Period rho plus the indexed projections (n, mu_n, P_n), n in [-m, m]."""

    period: float
    entries: List[tuple]  # (n, mu_n, P_n)

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError("projection families need period > 0")
        self.entries = sorted(self.entries, key=lambda e: e[0])

    @property
    def n_range(self):
        ns = [n for n, _, _ in self.entries]
        return (min(ns), max(ns))

    @property
    def dim(self) -> int:
        return self.entries[0][2].shape[0]

    def projection(self, n: int) -> np.ndarray:
        for k, _, P in self.entries:
            if k == n:
                return P
        raise KeyError(f"no projection with index {n}")

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "entries": [{"n": n, "mu": [mu.real, mu.imag],
                         "P": [[[z.real, z.imag] for z in row] for row in P]}
                        for n, mu, P in self.entries],
        }


def build_projection_family(S: SemigroupEvaluator, rho: float,
                            cfg: QuadratureConfig, tol: float = 1e-8,
                            m_cap: Optional[int] = None) -> ProjectionFamily:
    """Assemble P_n for |n| <= m with m the smallest index range summing to I.

    m grows until ||sum P_n - I|| <= tol; the growth is capped by the lattice
    index reachable from the generator norm (|mu_n| <= ||A||), beyond which no
    nonzero projection can exist.
    """
    if not rho > 0:
        raise ValueError("projection families need a positive period")
    if m_cap is None:
        m_cap = int(math.ceil(rho * mat_inf(generator_of(S)) / (2 * math.pi))) + 2
    eye = np.eye(S.dim, dtype=complex)
    entries = [(0, lattice_frequency(rho, 0), spectral_projection(S, rho, 0, cfg))]
    acc = entries[0][2].copy()
    m = 0
    while mat_inf(acc - eye) > tol:
        m += 1
        if m > m_cap:
            raise ConvergenceError(
                f"projection family did not resolve the identity within |n| <= {m_cap}")
        for n in (m, -m):
            P = spectral_projection(S, rho, n, cfg)
            entries.append((n, lattice_frequency(rho, n), P))
            acc = acc + P
    return ProjectionFamily(period=rho, entries=entries)


def fourier_reconstruct_T(fam: ProjectionFamily, t: float) -> np.ndarray:
    """T(t) = sum_n e^{mu_n t} P_n over the family's index range."""
    acc = np.zeros((fam.dim, fam.dim), dtype=complex)
    for _, mu, P in fam.entries:
        acc = acc + cmath.exp(mu * t) * P
    return acc


def fourier_reconstruct_A(fam: ProjectionFamily) -> np.ndarray:
    """A = sum_n mu_n P_n over the family's index range."""
    acc = np.zeros((fam.dim, fam.dim), dtype=complex)
    for _, mu, P in fam.entries:
        acc = acc + mu * P
    return acc


@dataclass
class ProjectionFamilyReport:
    idempotence_defect: float
    annihilation_defect: float
    resolution_defect: float
    range_kernel_angles: dict
    range_kernel_dims: dict
    semigroup_action_defect: float
    tol: float
    passed: bool
    failures: List[str]


def projection_family_checks(fam: ProjectionFamily, A, S: SemigroupEvaluator,
                             tol: float = 1e-8,
                             t_grid: Optional[List[float]] = None) -> ProjectionFamilyReport:
    """Verify the defining properties of a projection family.

    Checks idempotence, mutual annihilation, resolution of the identity,
    ran(P_n) = ker(mu_n I - A) by principal angles, and the eigen-action
    T(t) P_n = e^{mu_n t} P_n on a t-grid.  Failures are recorded in the
    report rather than raised.
    """
    A = np.asarray(A, dtype=complex)
    if t_grid is None:
        t_grid = list(np.linspace(0.0, fam.period, 5))
    eye = np.eye(fam.dim, dtype=complex)
    failures = []

    idem = max(ent_inf(P @ P - P) for _, _, P in fam.entries)
    if idem > tol:
        failures.append("idempotence")

    annih = 0.0
    for i, (n, _, Pn) in enumerate(fam.entries):
        for j, (k, _, Pk) in enumerate(fam.entries):
            if i != j:
                annih = max(annih, ent_inf(Pn @ Pk))
    if annih > tol:
        failures.append("mutual_annihilation")

    total = sum((P for _, _, P in fam.entries), np.zeros_like(eye))
    resol = ent_inf(total - eye)
    if resol > tol:
        failures.append("resolution_of_identity")

    angles = {}
    dims = {}
    rank_ok = True
    for n, mu, P in fam.entries:
        ran = range_basis(P, tol)
        ker = kernel_basis(mu * eye - A, tol)
        dims[n] = (ran.shape[1], ker.shape[1])
        angle = max_principal_angle(ran, ker)
        angles[n] = angle
        if ran.shape[1] != ker.shape[1] or angle > tol:
            rank_ok = False
    if not rank_ok:
        failures.append("range_vs_kernel")

    action = 0.0
    for t in t_grid:
        Tt = S.matrix_at(float(t))
        for n, mu, P in fam.entries:
            action = max(action, ent_inf(Tt @ P - cmath.exp(mu * t) * P))
    if action > tol:
        failures.append("semigroup_action")

    return ProjectionFamilyReport(
        idempotence_defect=idem,
        annihilation_defect=annih,
        resolution_defect=resol,
        range_kernel_angles=angles,
        range_kernel_dims=dims,
        semigroup_action_defect=action,
        tol=tol,
        passed=not failures,
        failures=failures,
    )


@dataclass
class PeriodicityCriterionReport:
    spectrum_on_lattice: bool
    eigenvectors_span: bool
    eigenvector_rank: int
    dim: int
    period_bound_defect: Optional[float]
    tol: float
    periodic: bool


def periodicity_criterion_check(A, alpha: float, tol: float = 1e-8) -> PeriodicityCriterionReport:
    """Sufficient criterion for periodicity with period <= 1/alpha.

    Requires (i) every eigenvalue of A to sit on the lattice 2 pi i alpha Z
    and (ii) the eigenvectors to span the full space.  When both hold,
    ||T(1/alpha) - I|| <= tol is asserted and verified; when either fails no
    periodicity claim is made and the report records which criterion failed.
    """
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    scale = max(1.0, mat_inf(A))
    clusters = point_spectrum(A, tol)

    on_lattice = True
    for p in clusters:
        k = round(p.value.imag / (2 * math.pi * alpha))
        if abs(p.value - 2j * math.pi * alpha * k) > tol * scale:
            on_lattice = False
            break

    vecs = [v for p in clusters for v in p.eigenvectors]
    if vecs:
        V = np.column_stack(vecs)
        svals = np.linalg.svd(V, compute_uv=False)
        rank = int(np.sum(svals > tol * max(1.0, svals[0])))
    else:
        rank = 0
    span = rank == n

    defect = None
    periodic = False
    if on_lattice and span:
        from .operators import matrix_exp
        defect = ent_inf(matrix_exp(A, 1.0 / alpha) - np.eye(n, dtype=complex))
        periodic = defect <= tol

    return PeriodicityCriterionReport(
        spectrum_on_lattice=on_lattice,
        eigenvectors_span=span,
        eigenvector_rank=rank,
        dim=n,
        period_bound_defect=defect,
        tol=tol,
        periodic=periodic,
    )
