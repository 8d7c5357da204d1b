"""Executable spectral inclusion and mapping checks.

Each check computes both sides of a set identity linking the spectrum of the
generator A to the spectrum of the evolved operator T(t), compares them by
Hausdorff distance, and reports per-t verdicts.  Comparisons are set-wise,
never multiset-wise: exponentiation can merge distinct generator eigenvalues
(lambda and lambda + 2 pi i k / t land on the same point).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .operators import SemigroupEvaluator, mat_inf
from .spectra import (cluster_points, directed_distance, hausdorff_distance,
                      kernel_basis, max_principal_angle, point_spectrum,
                      residual_spectrum, algebraic_spectrum, sort_spectrum)

#: Default evaluation grid for the eigenspace-intersection check: pairwise
#: rationally independent ratios so no alias class e^{lambda t} = e^{mu t}
#: can survive the whole grid.
DEFAULT_INTERSECTION_GRID = (1.0, math.sqrt(2.0), math.pi / 2.0)


@dataclass
class MappingReport:
    theorem_id: str
    t_values: List[float]
    lhs_sets: List[List[complex]]
    rhs_sets: List[List[complex]]
    hausdorff: List[float]
    tol: float
    threshold: float  # tol scaled by the largest operator in the comparison
    verdict: bool

    def per_t_pass(self) -> List[bool]:
        return [h <= self.threshold for h in self.hausdorff]

    def to_json(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "tol": self.tol,
            "verdict": "pass" if self.verdict else "fail",
            "per_t": [
                {"t": t,
                 "lhs": [[z.real, z.imag] for z in sort_spectrum(lhs)],
                 "rhs": [[z.real, z.imag] for z in sort_spectrum(rhs)],
                 "hausdorff": h,
                 "verdict": "pass" if ok else "fail"}
                for t, lhs, rhs, h, ok in zip(self.t_values, self.lhs_sets,
                                              self.rhs_sets, self.hausdorff,
                                              self.per_t_pass())
            ],
        }

    def to_csv_rows(self) -> List[dict]:
        return [{"theorem_id": self.theorem_id, "t": t, "hausdorff": h,
                 "verdict": "pass" if ok else "fail"}
                for t, h, ok in zip(self.t_values, self.hausdorff, self.per_t_pass())]


def _dedupe(values, tol: float) -> List[complex]:
    return [v for v, _ in cluster_points(values, tol)]


def point_mapping_check(A, S: SemigroupEvaluator, t_values, tol: float = 1e-8) -> MappingReport:
    """sigma_p(T(t)) \\ {0} = e^{t sigma_p(A)} as sets, per t."""
    A = np.asarray(A, dtype=complex)
    gen_eigs = [p.value for p in point_spectrum(A, tol)]
    lhs_sets, rhs_sets, dists = [], [], []
    for t in t_values:
        Tt = S.matrix_at(float(t))
        scale = tol * max(1.0, mat_inf(Tt))
        lhs = [p.value for p in point_spectrum(Tt, tol) if abs(p.value) > tol]
        rhs = _dedupe([cmath.exp(t * mu) for mu in gen_eigs], scale)
        lhs_sets.append(lhs)
        rhs_sets.append(rhs)
        dists.append(hausdorff_distance(lhs, rhs))
    threshold = tol * _mapping_scale(A, S, t_values)
    verdict = all(h <= threshold for h in dists)
    return MappingReport("point-mapping", list(map(float, t_values)),
                         lhs_sets, rhs_sets, dists, tol, threshold, verdict)


def _mapping_scale(A, S, t_values) -> float:
    # scale relative to the largest operator entering the comparison
    worst = max(1.0, mat_inf(A))
    for t in t_values:
        worst = max(worst, mat_inf(S.matrix_at(float(t))))
    return worst


def residual_mapping_check(A, S: SemigroupEvaluator, t_values, tol: float = 1e-8) -> MappingReport:
    """sigma_r(T(t)) \\ {0} = e^{t sigma_r(A)} as sets, per t.

    Residual spectra come from the rank criterion, which internally
    cross-checks against the transpose point spectrum (the dual route).
    """
    A = np.asarray(A, dtype=complex)
    gen_res = residual_spectrum(A, tol)
    lhs_sets, rhs_sets, dists = [], [], []
    for t in t_values:
        Tt = S.matrix_at(float(t))
        scale = tol * max(1.0, mat_inf(Tt))
        lhs = [z for z in residual_spectrum(Tt, tol) if abs(z) > tol]
        rhs = _dedupe([cmath.exp(t * mu) for mu in gen_res], scale)
        lhs_sets.append(lhs)
        rhs_sets.append(rhs)
        dists.append(hausdorff_distance(lhs, rhs))
    threshold = tol * _mapping_scale(A, S, t_values)
    verdict = all(h <= threshold for h in dists)
    return MappingReport("residual-mapping", list(map(float, t_values)),
                         lhs_sets, rhs_sets, dists, tol, threshold, verdict)


def inclusion_checks(A, S: SemigroupEvaluator, t_values, tol: float = 1e-8) -> List[MappingReport]:
    """One-sided inclusions e^{t sigma_v(A)} within sigma_v(T(t)) for
    v in {point, algebraic, residual}; each point of the left side must lie
    within tol of the right side."""
    A = np.asarray(A, dtype=complex)
    variants = {
        "point-inclusion": lambda M: [p.value for p in point_spectrum(M, tol)],
        "algebraic-inclusion": lambda M: algebraic_spectrum(M, tol),
        "residual-inclusion": lambda M: residual_spectrum(M, tol),
    }
    scale = _mapping_scale(A, S, t_values)
    reports = []
    for name, extract in variants.items():
        gen_set = extract(A)
        lhs_sets, rhs_sets, dists = [], [], []
        for t in t_values:
            Tt = S.matrix_at(float(t))
            lhs = _dedupe([cmath.exp(t * mu) for mu in gen_set], tol * scale)
            rhs = extract(Tt)
            lhs_sets.append(lhs)
            rhs_sets.append(rhs)
            dists.append(directed_distance(lhs, rhs))
        verdict = all(h <= tol * scale for h in dists)
        reports.append(MappingReport(name, list(map(float, t_values)),
                                     lhs_sets, rhs_sets, dists, tol, tol * scale,
                                     verdict))
    return reports


@dataclass
class EigenspaceReport:
    check_id: str
    lam: complex
    dim_generator_side: int
    dim_semigroup_side: int
    max_angle: float
    tol: float
    passed: bool
    detail: dict = field(default_factory=dict)


def eigenspace_intersection_check(A, S: SemigroupEvaluator, lam: complex,
                                  t_grid=DEFAULT_INTERSECTION_GRID,
                                  tol: float = 1e-8) -> EigenspaceReport:
    """ker(lam - A) against the intersection over t of ker(e^{lam t} - T(t)).

    The infinite intersection over all t >= 0 is certified through a finite
    grid; grids with at least two rationally independent values break every
    alias class, while a single-t grid typically shows strict dimension
    inflation (reported, and the verdict fails on a dimension mismatch).
    """
    A = np.asarray(A, dtype=complex)
    eigs = [p.value for p in point_spectrum(A, tol)]
    if min(abs(lam - mu) for mu in eigs) > tol * max(1.0, mat_inf(A)):
        raise ValueError(f"lam = {lam} is not an eigenvalue of the generator")
    eye = np.eye(S.dim, dtype=complex)
    ker_A = kernel_basis(lam * eye - A, tol)
    stacked = np.vstack([cmath.exp(lam * t) * eye - S.matrix_at(float(t))
                         for t in t_grid])
    ker_T = kernel_basis(stacked, tol)
    angle = max_principal_angle(ker_A, ker_T)
    passed = ker_A.shape[1] == ker_T.shape[1] and angle <= tol
    return EigenspaceReport(
        check_id="eigenspace-intersection", lam=complex(lam),
        dim_generator_side=ker_A.shape[1], dim_semigroup_side=ker_T.shape[1],
        max_angle=angle, tol=tol, passed=bool(passed),
        detail={"t_grid": [float(t) for t in t_grid]},
    )


def default_union_n_max(A, t: float) -> int:
    """ceil(t * spectral_radius(A) / 2 pi) + 1: captures every lattice hit."""
    radius = float(np.max(np.abs(np.linalg.eigvals(np.asarray(A, dtype=complex)))))
    return int(math.ceil(t * radius / (2 * math.pi))) + 1


def eigenspace_union_check(A, S: SemigroupEvaluator, lam: complex, t: float,
                           n_max: Optional[int] = None,
                           tol: float = 1e-8) -> EigenspaceReport:
    """ker(e^{lam t} - T(t)) against the span of ker(lam + 2 pi i n/t - A), |n| <= n_max."""
    if not t > 0:
        raise ValueError("the union check needs t > 0")
    A = np.asarray(A, dtype=complex)
    if n_max is None:
        n_max = default_union_n_max(A, t)
    eye = np.eye(S.dim, dtype=complex)
    blocks = []
    for n in range(-int(n_max), int(n_max) + 1):
        mu = lam + 2j * math.pi * n / t
        basis = kernel_basis(mu * eye - A, tol)
        if basis.shape[1]:
            blocks.append(basis)
    if blocks:
        stacked = np.column_stack(blocks)
        u, s, _ = np.linalg.svd(stacked, full_matrices=False)
        rank = int(np.sum(s > tol * max(1.0, s[0])))
        span = u[:, :rank]
    else:
        span = np.zeros((S.dim, 0), dtype=complex)
    ker_T = kernel_basis(cmath.exp(lam * t) * eye - S.matrix_at(float(t)), tol)

    if span.shape[1] < ker_T.shape[1]:
        radius = float(np.max(np.abs(np.linalg.eigvals(A))))
        for sign in (1, -1):
            beyond = lam + sign * 2j * math.pi * (n_max + 1) / t
            if abs(beyond) <= radius + tol:
                raise ValueError(
                    f"n_max = {n_max} too small: lattice point {beyond} still "
                    "lies within the spectral disc")

    angle = max_principal_angle(span, ker_T)
    passed = span.shape[1] == ker_T.shape[1] and angle <= tol
    return EigenspaceReport(
        check_id="eigenspace-union", lam=complex(lam),
        dim_generator_side=span.shape[1], dim_semigroup_side=ker_T.shape[1],
        max_angle=angle, tol=tol, passed=bool(passed),
        detail={"t": float(t), "n_max": int(n_max)},
    )
