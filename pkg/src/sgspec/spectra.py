"""Spectrum computation and classification for dense complex matrices.

In finite dimension the point, residual, approximate, and algebraic spectra
coincide as sets and the topological spectrum is empty; each variant is still
computed through its own defining criterion (eigensolver, rank test,
smallest-singular-value test) so the collapse is verified rather than
assumed.  An independent brute-force eigenvalue oracle (characteristic
polynomial by cofactor expansion plus simultaneous root iteration) guards
the main eigensolver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, NumericalError
from .operators import as_complex_matrix, mat_inf


# ---------------------------------------------------------------------------
# Finite point-set utilities
# ---------------------------------------------------------------------------

def hausdorff_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Symmetric Hausdorff distance between two finite point sets."""
    a = list(a)
    b = list(b)
    if not a and not b:
        return 0.0
    if not a or not b:
        return float("inf")
    av = np.asarray(a, dtype=complex)
    bv = np.asarray(b, dtype=complex)
    d = np.abs(av[:, None] - bv[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def directed_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    """max over a of the distance to the nearest point of b (one-sided)."""
    a = list(a)
    b = list(b)
    if not a:
        return 0.0
    if not b:
        return float("inf")
    av = np.asarray(a, dtype=complex)
    bv = np.asarray(b, dtype=complex)
    return float(np.abs(av[:, None] - bv[None, :]).min(axis=1).max())


def cluster_points(values: Sequence[complex], merge_tol: float):
    """Greedy union-find clustering: values within merge_tol are merged.

    Returns a list of (representative, members) with the representative the
    mean of the cluster, sorted lexicographically by (re, im).
    """
    vals = [complex(v) for v in values]
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= merge_tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(vals[i])
    clusters = [(complex(np.mean(members)), members) for members in groups.values()]
    clusters.sort(key=lambda c: (c[0].real, c[0].imag))
    return clusters


def sort_spectrum(values: Sequence[complex]) -> List[complex]:
    return sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag))


def _merge_tol(A: np.ndarray, tol: float) -> float:
    return tol * max(1.0, mat_inf(A))


# ---------------------------------------------------------------------------
# Subspace helpers
# ---------------------------------------------------------------------------

def kernel_basis(M, tol: float) -> np.ndarray:
    """Orthonormal basis of the numerical null space of M (columns).

    Singular values below tol * max(1, sigma_max) count as zero.
    """
    M = np.asarray(M, dtype=complex)
    _, s, vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    thresh = tol * max(1.0, smax)
    rank = int(np.sum(s > thresh))
    return vh[rank:].conj().T


def range_basis(M, tol: float) -> np.ndarray:
    """Orthonormal basis of the numerical column space of M."""
    M = np.asarray(M, dtype=complex)
    u, s, _ = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    thresh = tol * max(1.0, smax)
    rank = int(np.sum(s > thresh))
    return u[:, :rank]


def max_principal_angle(U: np.ndarray, V: np.ndarray) -> float:
    """Largest principal angle between the column spans of U and V.

    Equal trivial spaces compare as angle 0; a dimension mismatch returns
    pi/2 as a sentinel so callers can flag it.
    """
    if U.shape[1] != V.shape[1]:
        return math.pi / 2.0
    if U.shape[1] == 0:
        return 0.0
    angles = scipy.linalg.subspace_angles(U, V)
    return float(np.max(angles)) if angles.size else 0.0


# ---------------------------------------------------------------------------
# Spectrum variants
# ---------------------------------------------------------------------------

@dataclass
class PointEigenvalue:
    value: complex
    multiplicity: int
    eigenvectors: List[np.ndarray]


@dataclass
class SpectrumReport:
    """Classified spectral sets of one matrix, with tolerance metadata.

    ``topological`` is kept as a field for interface completeness but is
    always empty in finite dimension (a bijective matrix has a continuous
    inverse).
    """

    point: List[PointEigenvalue]
    residual: List[complex]
    approximate: List[complex]
    algebraic: List[complex]
    topological: List[complex]
    tol: float

    def point_values(self) -> List[complex]:
        return [p.value for p in self.point]

    def collapse_defect(self) -> float:
        """Largest pairwise Hausdorff distance among the four variants."""
        sets = [self.point_values(), self.residual, self.approximate, self.algebraic]
        worst = 0.0
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                worst = max(worst, hausdorff_distance(sets[i], sets[j]))
        return worst

    def to_json(self) -> dict:
        return {
            "point": [{"lambda": [p.value.real, p.value.imag], "mult": p.multiplicity}
                      for p in sorted(self.point, key=lambda p: (p.value.real, p.value.imag))],
            "residual": [[z.real, z.imag] for z in sort_spectrum(self.residual)],
            "approximate": [[z.real, z.imag] for z in sort_spectrum(self.approximate)],
            "algebraic": [[z.real, z.imag] for z in sort_spectrum(self.algebraic)],
            "topological": [[z.real, z.imag] for z in sort_spectrum(self.topological)],
            "tol": self.tol,
        }


def point_spectrum(A, tol: float) -> List[PointEigenvalue]:
    """Eigenvalues clustered within tol*max(1, ||A||), with geometric eigenvectors.

    Eigenvectors are an orthonormal kernel basis of (lambda I - A) rescaled to
    unit max-modulus, so defective eigenvalues report fewer eigenvectors than
    their algebraic multiplicity.
    """
    A = as_complex_matrix(A)
    try:
        raw = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"eigensolver failed on matrix of dim {A.shape[0]}: {exc}")
    merge = _merge_tol(A, tol)
    out = []
    eye = np.eye(A.shape[0], dtype=complex)
    for value, members in cluster_points(raw, merge):
        basis = kernel_basis(value * eye - A, tol)
        vecs = []
        for k in range(basis.shape[1]):
            v = basis[:, k]
            vecs.append(v / np.abs(v).max())
        out.append(PointEigenvalue(value=value, multiplicity=len(members),
                                   eigenvectors=vecs))
    return out


def _rank_deficient_at(A: np.ndarray, lam: complex, tol: float) -> bool:
    M = lam * np.eye(A.shape[0], dtype=complex) - A
    s = np.linalg.svd(M, compute_uv=False)
    return bool(s[-1] <= tol * max(1.0, mat_inf(A)))


def _candidate_values(A: np.ndarray, tol: float) -> List[complex]:
    raw = list(np.linalg.eigvals(A)) + list(np.linalg.eigvals(A.T))
    return [value for value, _ in cluster_points(raw, _merge_tol(A, tol))]


def residual_spectrum(A, tol: float) -> List[complex]:
    """Values where ran(lambda I - A) is not dense: rank(lambda I - A) < dim.

    Cross-checked against the point spectrum of the transpose (the dual
    pairing is bilinear, so the dual operator is the plain transpose); a
    disagreement raises, since it would mean the two criteria lost numerical
    coherence.
    """
    A = as_complex_matrix(A)
    candidates = _candidate_values(A, tol)
    deficient = [z for z in candidates if _rank_deficient_at(A, z, tol)]
    dual = [p.value for p in point_spectrum(A.T, tol)]
    gap = hausdorff_distance(deficient, dual)
    if gap > _merge_tol(A, tol):
        raise NumericalError(
            f"rank criterion and transpose point spectrum disagree (Hausdorff {gap:.3g})")
    return sort_spectrum(deficient)


def approximate_spectrum(A, tol: float) -> List[complex]:
    """Candidate values where sigma_min(lambda I - A) <= tol * max(1, ||A||).

    Evaluated at candidate eigenvalues only: in finite dimension the
    approximate point spectrum equals the point spectrum, so scanning the
    plane would only pretend extra generality.
    """
    A = as_complex_matrix(A)
    return sort_spectrum(z for z in _candidate_values(A, tol)
                         if _rank_deficient_at(A, z, tol))


def algebraic_spectrum(A, tol: float) -> List[complex]:
    """Values where lambda I - A fails to be bijective (rank deficiency)."""
    A = as_complex_matrix(A)
    return sort_spectrum(z for z in _candidate_values(A, tol)
                         if _rank_deficient_at(A, z, tol))


def topological_spectrum(A, tol: float) -> List[complex]:
    """Always empty: a bijective matrix has a continuous inverse."""
    as_complex_matrix(A)
    return []


def spectrum_report(A, tol: float = 1e-8) -> SpectrumReport:
    A = as_complex_matrix(A)
    return SpectrumReport(
        point=point_spectrum(A, tol),
        residual=residual_spectrum(A, tol),
        approximate=approximate_spectrum(A, tol),
        algebraic=algebraic_spectrum(A, tol),
        topological=topological_spectrum(A, tol),
        tol=tol,
    )


@dataclass
class DecompositionReport:
    algebraic_vs_union: float
    full_vs_algebraic: float
    topological_empty: bool
    tol: float
    passed: bool


def decomposition_check(A, tol: float = 1e-8) -> DecompositionReport:
    """Verify sigma_alg = sigma_a union sigma_r and sigma = sigma_alg u sigma_t.

    All identities are set identities measured by Hausdorff distance; the
    topological part must be empty in finite dimension.
    """
    A = as_complex_matrix(A)
    alg = algebraic_spectrum(A, tol)
    approx = approximate_spectrum(A, tol)
    resid = residual_spectrum(A, tol)
    topo = topological_spectrum(A, tol)
    union = [value for value, _ in cluster_points(approx + resid, _merge_tol(A, tol))]
    d1 = hausdorff_distance(alg, union)
    # sigma = sigma_alg u sigma_t; with sigma_t empty this is sigma vs sigma_alg,
    # and the full spectrum of a matrix is its eigenvalue set.
    full = [value for value, _ in cluster_points(np.linalg.eigvals(A), _merge_tol(A, tol))]
    d2 = hausdorff_distance(full, alg + topo)
    merge = _merge_tol(A, tol)
    return DecompositionReport(
        algebraic_vs_union=d1,
        full_vs_algebraic=d2,
        topological_empty=(len(topo) == 0),
        tol=tol,
        passed=bool(d1 <= merge and d2 <= merge and not topo),
    )


# ---------------------------------------------------------------------------
# Resolvent spectral mapping
# ---------------------------------------------------------------------------

@dataclass
class ResolventMappingReport:
    lam: complex
    hausdorff: float
    kernel_angles: List[float]
    tol: float
    passed: bool


def resolvent_map_check(A, lam: complex, tol: float = 1e-8) -> ResolventMappingReport:
    """Check sigma_p(R(lam,A)) \\ {0} = {1/(lam-mu)} and the kernel identity.

    R is computed by a direct dense solve.  For every eigenvalue mu of A the
    kernel identity ker(eta - R) = ker((lam - 1/eta) - A) with eta = 1/(lam-mu)
    is verified through principal angles.
    """
    A = as_complex_matrix(A)
    lam = complex(lam)
    eigs_A = [p.value for p in point_spectrum(A, tol)]
    dist = min(abs(lam - mu) for mu in eigs_A)
    if dist <= 1e-8:
        raise ValueError(f"lam is within {dist:.3g} of the spectrum; resolvent ill-conditioned")

    eye = np.eye(A.shape[0], dtype=complex)
    R = np.linalg.solve(lam * eye - A, eye)

    lhs = [p.value for p in point_spectrum(R, tol) if abs(p.value) > tol]
    rhs_raw = [1.0 / (lam - mu) for mu in eigs_A]
    rhs = [value for value, _ in cluster_points(rhs_raw, _merge_tol(R, tol))]
    d = hausdorff_distance(lhs, rhs)

    angles = []
    for mu in eigs_A:
        eta = 1.0 / (lam - mu)
        ker_R = kernel_basis(eta * eye - R, tol)
        ker_A = kernel_basis((lam - 1.0 / eta) * eye - A, tol)
        angles.append(max_principal_angle(ker_R, ker_A))

    merge = tol * max(1.0, mat_inf(R))
    passed = bool(d <= merge and all(a <= tol for a in angles))
    return ResolventMappingReport(lam=lam, hausdorff=d, kernel_angles=angles,
                                  tol=tol, passed=passed)


# ---------------------------------------------------------------------------
# Brute-force oracle: cofactor characteristic polynomial + Durand-Kerner
# ---------------------------------------------------------------------------

def characteristic_polynomial(A) -> np.ndarray:
    """Coefficients (ascending, monic) of det(lambda I - A) by cofactor expansion.

    Entries of lambda I - A are degree <= 1 polynomials; the determinant is
    expanded recursively along the first row with convolution products.
    Exponential cost, intended for dim <= 6 only.
    """
    A = as_complex_matrix(A)
    n = A.shape[0]

    # polynomial entries as ascending coefficient arrays
    def entry(i, j):
        if i == j:
            return np.array([-A[i, j], 1.0], dtype=complex)
        return np.array([-A[i, j]], dtype=complex)

    def det(rows, cols):
        if len(rows) == 1:
            return entry(rows[0], cols[0])
        acc = np.zeros(1, dtype=complex)
        r = rows[0]
        for k, c in enumerate(cols):
            minor = det(rows[1:], cols[:k] + cols[k + 1:])
            term = np.convolve(entry(r, c), minor)
            if k % 2:
                term = -term
            if term.size > acc.size:
                term[:acc.size] += acc
                acc = term
            else:
                acc[:term.size] += term
        return acc

    return det(tuple(range(n)), tuple(range(n)))


def durand_kerner(coeffs, max_iter: int = 1000, tol: float = 1e-14) -> np.ndarray:
    """All roots of a monic polynomial by simultaneous (Weierstrass) iteration.

    coeffs are ascending with leading coefficient 1.  Raises
    :class:`ConvergenceError` when the update has not stalled below tol within
    max_iter sweeps.
    """
    c = np.asarray(coeffs, dtype=complex)
    if abs(c[-1] - 1.0) > 1e-12:
        c = c / c[-1]
    n = c.size - 1
    if n == 0:
        return np.array([], dtype=complex)
    bound = 1.0 + float(np.max(np.abs(c[:-1])))
    # start on a circle with an irrational phase offset to avoid symmetric stalls
    z = bound * np.exp(2j * math.pi * (np.arange(n) + 0.257) / n)

    def p(w):
        return np.polynomial.polynomial.polyval(w, c)

    for _ in range(max_iter):
        delta = np.zeros_like(z)
        for i in range(n):
            diff = z[i] - np.delete(z, i)
            diff[np.abs(diff) < 1e-30] = 1e-30
            delta[i] = p(z[i]) / np.prod(diff)
        z = z - delta
        if np.max(np.abs(delta)) <= tol * max(1.0, float(np.max(np.abs(z)))):
            return z
    raise ConvergenceError(f"root iteration did not converge within {max_iter} sweeps")


def brute_force_eigen_oracle(A, max_iter: int = 1000) -> List[complex]:
    """Eigenvalues via the cofactor characteristic polynomial and root iteration.

    Independent of the LAPACK eigensolver; restricted to dim <= 6 because of
    the factorial cofactor cost.
    """
    A = as_complex_matrix(A)
    if A.shape[0] > 6:
        raise ValueError("brute-force oracle is limited to dim <= 6")
    coeffs = characteristic_polynomial(A)
    return sort_spectrum(durand_kerner(coeffs, max_iter=max_iter))
