"""Numerical integration of semigroup orbits.

Three integral families live here: finite orbit integrals of
s -> e^{-lam*s} T(s) x over [0, t], the truncated Laplace-transform resolvent
R(lam, A) = int_0^inf e^{-lam*s} T(s) ds, and circular contour integrals of
matrix- or vector-valued holomorphic functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Callable, Optional, Union

import numpy as np

from .errors import DivergenceError, ConvergenceError
from .operators import (SemigroupEvaluator, as_complex_vector, generator_of,
                        mat_inf, vec_inf)

ORBIT_SCHEMES = ("trapezoid", "simpson", "gauss")

#: Nodes per panel for the composite Gauss-Legendre rule.
_GAUSS_ORDER = 4
#: Target panel width for the smooth Laplace / full-period integrals.
_SMOOTH_PANEL_WIDTH = 0.25
_LAPLACE_GAUSS_ORDER = 8


@dataclass
class QuadratureConfig:
    """Node counts, scheme selectors, horizons, and tolerances.

    ``orbit_nodes`` counts composite-rule panels on [0, t];
    ``laplace_horizon`` is a positive truncation time or ``"auto"``;
    ``contour_radius`` must stay below the pole spacing of the resolvent
    whenever it parameterises Laurent-coefficient circles.
    """

    orbit_nodes: int = 512
    orbit_scheme: str = "simpson"
    laplace_horizon: Union[float, str] = "auto"
    laplace_tail_tol: float = 1e-10
    contour_nodes: int = 64
    contour_radius: float = 0.5
    tol: float = 1e-8

    def __post_init__(self):
        self.validate()

    def validate(self):
        if int(self.orbit_nodes) < 2:
            raise ValueError("orbit_nodes must be >= 2")
        if self.orbit_scheme not in ORBIT_SCHEMES:
            raise ValueError(f"orbit_scheme must be one of {ORBIT_SCHEMES}")
        if self.laplace_horizon != "auto" and not float(self.laplace_horizon) > 0:
            raise ValueError("laplace_horizon must be positive or 'auto'")
        if not float(self.laplace_tail_tol) > 0:
            raise ValueError("laplace_tail_tol must be > 0")
        if int(self.contour_nodes) < 8:
            raise ValueError("contour_nodes must be >= 8")
        if not float(self.contour_radius) > 0:
            raise ValueError("contour_radius must be > 0")
        if not float(self.tol) > 0:
            raise ValueError("tol must be > 0")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "QuadratureConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown quadrature config keys: {sorted(unknown)}")
        return cls(**data)


def composite_nodes(a: float, b: float, panels: int, scheme: str):
    """Nodes and weights of a composite rule with `panels` panels on [a, b]."""
    panels = int(panels)
    if panels < 1:
        raise ValueError("need at least one panel")
    if scheme == "trapezoid":
        s = np.linspace(a, b, panels + 1)
        w = np.full(panels + 1, (b - a) / panels)
        w[0] *= 0.5
        w[-1] *= 0.5
        return s, w
    if scheme == "simpson":
        # per panel of width h: (h/6) (f_left + 4 f_mid + f_right)
        s = np.linspace(a, b, 2 * panels + 1)
        h = (b - a) / panels
        w = np.zeros(2 * panels + 1)
        w[0::2] = h / 3.0
        w[1::2] = 2.0 * h / 3.0
        w[0] = h / 6.0
        w[-1] = h / 6.0
        return s, w
    if scheme == "gauss":
        return _gauss_nodes(a, b, panels, _GAUSS_ORDER)
    raise ValueError(f"unknown scheme {scheme!r}")


def _gauss_nodes(a: float, b: float, panels: int, order: int):
    xg, wg = np.polynomial.legendre.leggauss(order)
    h = (b - a) / panels
    edges = a + h * np.arange(panels)
    s = (edges[:, None] + 0.5 * h * (xg[None, :] + 1.0)).reshape(-1)
    w = np.tile(0.5 * h * wg, panels)
    return s, w


def orbit_integral(S: SemigroupEvaluator, lam: complex, t: float, x,
                   cfg: QuadratureConfig) -> np.ndarray:
    """Composite quadrature of int_0^t e^{-lam*s} T(s) x ds.

    Error is O(n^-2) for the trapezoid rule and O(n^-4) for Simpson on
    smooth orbits; t = 0 returns the zero vector without touching the
    evaluator.
    """
    if t < 0:
        raise ValueError("orbit integrals require t >= 0")
    x = as_complex_vector(x, S.dim)
    if t == 0.0:
        return np.zeros_like(x)
    lam = complex(lam)
    s_nodes, w = composite_nodes(0.0, float(t), int(cfg.orbit_nodes), cfg.orbit_scheme)
    acc = np.zeros_like(x)
    for s, ws in zip(s_nodes, w):
        acc = acc + ws * np.exp(-lam * s) * S.evaluate(s, x)
    return acc


def verify_rescale_identities(S: SemigroupEvaluator, A, lam: complex, t: float,
                              x, cfg: QuadratureConfig):
    """Residuals of the two orbit-integral identities for the pair (A, S).

    residual1 tests  e^{-lam*t} T(t)x - x = (A - lam) int_0^t e^{-lam*s} T(s)x ds,
    residual2 the variant with (A - lam) applied inside the integrand.  Both
    vanish (up to quadrature error) exactly when A is the generator of S, so
    a mismatched pair is exposed by residual1.
    """
    A = np.asarray(A, dtype=complex)
    x = as_complex_vector(x, S.dim)
    lam = complex(lam)
    lhs = np.exp(-lam * t) * S.evaluate(t, x) - x
    shifted = A - lam * np.eye(S.dim, dtype=complex)
    residual1 = vec_inf(lhs - shifted @ orbit_integral(S, lam, t, x, cfg))
    residual2 = vec_inf(lhs - orbit_integral(S, lam, t, shifted @ x, cfg))
    return residual1, residual2


def weighted_operator_sum(S: SemigroupEvaluator, s_nodes, weights,
                          scalar_fn: Callable[[float], complex]) -> np.ndarray:
    """sum_k w_k * scalar_fn(s_k) * T(s_k), summed in node order.

    Equivalent to assembling the integral columnwise on the standard basis;
    the fixed summation order keeps results bit-reproducible.
    """
    acc = np.zeros((S.dim, S.dim), dtype=complex)
    for s, w in zip(s_nodes, weights):
        acc = acc + (w * scalar_fn(float(s))) * S.matrix_at(float(s))
    return acc


def spectral_abscissa(A) -> float:
    """Largest real part of the eigenvalues of A."""
    return float(np.max(np.linalg.eigvals(np.asarray(A, dtype=complex)).real))


def laplace_resolvent(S: SemigroupEvaluator, lam: complex, cfg: QuadratureConfig,
                      abscissa: Optional[float] = None) -> np.ndarray:
    """Resolvent R(lam, A) via the truncated improper integral of e^{-lam*s} T(s).

    Parameters
    ----------
    S : SemigroupEvaluator
    lam : complex
        Must satisfy Re(lam) > spectral abscissa of the generator, otherwise
        the integral diverges and :class:`DivergenceError` is raised.
    cfg : QuadratureConfig
        ``laplace_horizon`` may be "auto", in which case the horizon H is the
        smallest value with  e^{(a - Re lam) H} / (Re lam - a) <= laplace_tail_tol,
        a being the (estimated or supplied) spectral abscissa.
    abscissa : float, optional
        Override for the spectral abscissa estimate; by default it is taken
        from the eigenvalues of the stored generator.

    Returns
    -------
    numpy.ndarray
        Matrix R with ||(lam I - A) R - I||_inf <= cfg.tol (verified; a
        violation raises :class:`ConvergenceError`).
    """
    A = generator_of(S)
    lam = complex(lam)
    eigs = np.linalg.eigvals(A)
    a = float(abscissa) if abscissa is not None else float(np.max(eigs.real))
    gap = lam.real - a
    if gap <= 0:
        raise DivergenceError(
            f"Re(lam) = {lam.real:.6g} <= spectral abscissa estimate {a:.6g}; "
            "the Laplace integral does not converge")
    if float(np.min(np.abs(eigs - lam))) < 1e-8:
        raise DivergenceError("lam is within 1e-8 of an eigenvalue; resolvent rejected")

    if cfg.laplace_horizon == "auto":
        # smallest H with e^{-gap H} / gap <= tail_tol
        horizon = max(-math.log(cfg.laplace_tail_tol * gap) / gap, 1.0)
    else:
        horizon = float(cfg.laplace_horizon)

    panels = max(32, math.ceil(horizon / _SMOOTH_PANEL_WIDTH))
    s_nodes, w = _gauss_nodes(0.0, horizon, panels, _LAPLACE_GAUSS_ORDER)
    R = weighted_operator_sum(S, s_nodes, w, lambda s: np.exp(-lam * s))

    shifted = lam * np.eye(S.dim, dtype=complex) - A
    defect = mat_inf(shifted @ R - np.eye(S.dim))
    if defect > cfg.tol:
        raise ConvergenceError(
            f"Laplace resolvent residual {defect:.3g} exceeds tol {cfg.tol:.3g} "
            f"(horizon {horizon:.3g}, {panels} panels)")
    return R


def contour_integral_circle(f: Callable[[complex], np.ndarray], center: complex,
                            radius: float, n_nodes: int) -> np.ndarray:
    """(1/2*pi*i) * closed contour integral of f over a positively oriented circle.

    The circle lam(theta) = center + radius * e^{i theta} is discretised by the
    n-node trapezoid rule, which converges exponentially for f holomorphic in
    an annulus around the circle.  f may return scalars, vectors, or matrices;
    evaluation failures at a node propagate to the caller.
    """
    if not radius > 0:
        raise ValueError("radius must be > 0")
    n_nodes = int(n_nodes)
    if n_nodes < 8:
        raise ValueError("contour integrals need n_nodes >= 8")
    center = complex(center)
    acc = None
    for k in range(n_nodes):
        theta = 2.0 * math.pi * k / n_nodes
        offset = radius * complex(math.cos(theta), math.sin(theta))
        term = np.asarray(f(center + offset), dtype=complex) * (offset / n_nodes)
        acc = term if acc is None else acc + term
    return acc
