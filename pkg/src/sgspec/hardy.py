"""Truncated model of the rotation semigroup on bounded holomorphic functions.

Functions on the unit disc are represented by their Taylor coefficients up to
degree N, where the rotation semigroup (T(t)f)(z) = f(e^{it} z) acts
diagonally as e^{int} on coefficient n and its generator is
(Af)(z) = i z f'(z), i.e. diag(0, i, ..., Ni).  The truncation is exact on
the retained modes, and every report labels itself as the truncated model.
Weighted sup-seminorms |f|_nu = sup |f(z) nu(z)| are approximated from below
on finite sample grids.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .operators import (GeneratorSpec, SemigroupEvaluator, as_complex_matrix,
                        disc_rotation_generator, vec_inf)
from .quadrature import QuadratureConfig
from .spectra import point_spectrum


@dataclass
class DiscFunction:
    """Polynomial truncation of a disc function: Taylor coefficients at 0."""

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if self.degree < 0 or self.coeffs.shape[0] != self.degree + 1:
            raise ValueError("DiscFunction needs degree+1 coefficients")
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("coefficients must be finite")

    def __call__(self, z: complex) -> complex:
        return complex(np.polynomial.polynomial.polyval(complex(z), self.coeffs))

    @classmethod
    def monomial(cls, degree: int, n: int) -> "DiscFunction":
        c = np.zeros(degree + 1, dtype=complex)
        c[n] = 1.0
        return cls(degree, c)

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "coeffs": [[c.real, c.imag] for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "DiscFunction":
        coeffs = [complex(re, im) for re, im in data["coeffs"]]
        return cls(int(data["degree"]), np.asarray(coeffs))


@dataclass
class WeightFunction:
    """Nonnegative weight sampled inside the open unit disc."""

    samples: List[Tuple[complex, float]]
    decays_at_boundary: bool = True

    def __post_init__(self):
        cleaned = []
        for z, v in self.samples:
            z, v = complex(z), float(v)
            if abs(z) >= 1.0:
                raise ValueError(f"weight sample {z} lies outside the open unit disc")
            if v < 0:
                raise ValueError("weight values must be nonnegative")
            cleaned.append((z, v))
        self.samples = cleaned

    @classmethod
    def radial(cls, radii: Sequence[float], fn) -> "WeightFunction":
        return cls([(complex(r, 0.0), float(fn(r))) for r in radii])

    @classmethod
    def from_csv(cls, path: str) -> "WeightFunction":
        """Load a weight grid from CSV with columns r, theta, value."""
        samples = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["r", "theta", "value"]:
                raise ValueError("weight CSV must start with header r,theta,value")
            for row in reader:
                if not row:
                    continue
                r, theta, value = (float(cell) for cell in row)
                samples.append((r * cmath.exp(1j * theta), value))
        return cls(samples)

    def to_csv(self, path: str):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["r", "theta", "value"])
            for z, v in self.samples:
                writer.writerow([repr(abs(z)), repr(cmath.phase(z)), repr(v)])


def disc_rotation_semigroup(N: int) -> SemigroupEvaluator:
    """Evaluator of the disc-rotation semigroup on coefficients up to degree N."""
    A, fn = disc_rotation_generator(int(N))
    spec = GeneratorSpec(kind="catalog", matrix=as_complex_matrix(A),
                         catalog_id="disc_rotation", params={"degree": int(N)})
    return SemigroupEvaluator(spec, "closed_form", matrix_fn=fn)


@dataclass
class HardySpectrumReport:
    degree: int
    expected: List[complex]
    computed: List[complex]
    spectrum_defect: float
    eigenspace_dims: List[int]
    coordinate_alignment_defect: float
    tol: float
    passed: bool
    label: str = "truncated model of the disc-rotation example"


def verify_hardy_spectrum(N: int, tol: float = 1e-8,
                          generator: Optional[np.ndarray] = None) -> HardySpectrumReport:
    """Confirm sigma_p = {0, i, ..., Ni} with one-dimensional coordinate eigenspaces.

    ``generator`` overrides the exact diagonal generator, which lets negative
    controls inject a corrupted matrix and watch the eigenvector check fail.
    """
    if N < 1:
        raise ValueError("the spectrum check needs N >= 1")
    A = generator if generator is not None else disc_rotation_generator(N)[0]
    A = np.asarray(A, dtype=complex)
    expected = [1j * n for n in range(N + 1)]
    clusters = point_spectrum(A, tol)
    computed = [p.value for p in clusters]

    defect = 0.0
    for want in expected:
        defect = max(defect, min(abs(want - got) for got in computed))
    for got in computed:
        defect = max(defect, min(abs(want - got) for want in expected))

    dims = [len(p.eigenvectors) for p in clusters]
    align = 0.0
    for p in clusters:
        n = int(round(p.value.imag))
        ok_index = 0 <= n <= N and abs(p.value - 1j * n) <= tol
        if not ok_index or len(p.eigenvectors) != 1:
            align = max(align, 1.0)
            continue
        v = p.eigenvectors[0]
        # distance of v to the n-th coordinate axis, phase removed
        phase = v[n] / abs(v[n]) if abs(v[n]) > 0 else 1.0
        e_n = np.zeros_like(v)
        e_n[n] = 1.0
        align = max(align, vec_inf(v / phase - e_n))

    passed = defect <= tol and align <= tol and all(d == 1 for d in dims) \
        and len(computed) == N + 1
    return HardySpectrumReport(
        degree=N, expected=expected, computed=computed, spectrum_defect=defect,
        eigenspace_dims=dims, coordinate_alignment_defect=align, tol=tol,
        passed=bool(passed),
    )


@dataclass
class HardyProjectionReport:
    degree: int
    mode: int
    defect: float
    tol: float
    passed: bool
    label: str = "truncated model of the disc-rotation example"


def hardy_projection_check(N: int, n: int, g: DiscFunction,
                           cfg: QuadratureConfig, tol: float = 1e-10) -> HardyProjectionReport:
    """Averaging projection onto mode n extracts exactly coefficient n of g.

    P_n g = (1/2 pi) int_0^{2 pi} e^{-ins} T(s) g ds is computed by the
    periodic trapezoid rule on coefficient vectors and compared against
    coeffs[n] * z^n (the n-th Taylor coefficient of g is g^(n)(0)/n!).
    """
    if not 0 <= n <= N:
        raise ValueError("projection mode must satisfy 0 <= n <= N")
    if g.degree != N:
        raise ValueError("function degree must match the truncation degree")
    S = disc_rotation_semigroup(N)
    M = int(cfg.contour_nodes)
    acc = np.zeros(N + 1, dtype=complex)
    for k in range(M):
        s = 2.0 * math.pi * k / M
        acc = acc + cmath.exp(-1j * n * s) * S.evaluate(s, g.coeffs)
    acc /= M
    expected = np.zeros(N + 1, dtype=complex)
    expected[n] = g.coeffs[n]
    defect = vec_inf(acc - expected)
    return HardyProjectionReport(degree=N, mode=n, defect=defect, tol=tol,
                                 passed=bool(defect <= tol))


def weighted_seminorm(f: DiscFunction, nu: WeightFunction) -> float:
    """max over the sample grid of |f(z)| * nu(z).

    A lower bound for the true sup over the open disc; the grid is the
    caller's responsibility and is never refined here.
    """
    if not nu.samples:
        raise ValueError("weight function has no samples")
    return max(abs(f(z)) * v for z, v in nu.samples)
