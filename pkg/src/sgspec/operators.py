"""Dense complex matrices, matrix exponentials, and semigroup evaluators.

The central object is :class:`SemigroupEvaluator`: it evaluates t -> T(t)x
for the operator family T(t) = e^{tA} generated by a finite matrix A, either
by exponentiating a stored dense generator or through the exact closed form
attached to a catalog entry.  Closed forms are kept separate from the matrix
exponential on purpose, so that quadrature results computed from catalog
evaluators can be compared against exponential-based computations without
the two routes sharing code.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .errors import CatalogError, DimensionMismatchError, OverflowBoundError

#: Largest ||tA||_inf accepted by :func:`matrix_exp` before the requested
#: horizon is reported as ill-posed.
DEFAULT_NORM_BOUND = 350.0

CATALOG_IDS = ("diagonal", "rotation2d", "nilpotent_shift", "disc_rotation",
               "random_stable")


def as_complex_matrix(entries) -> np.ndarray:
    """Validate and return a square complex matrix with finite entries."""
    A = np.asarray(entries, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def as_complex_vector(x, dim: Optional[int] = None) -> np.ndarray:
    v = np.asarray(x, dtype=complex).reshape(-1)
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatchError(f"expected a vector of length {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def vec_inf(x) -> float:
    """Max-modulus norm of a vector."""
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def mat_inf(A) -> float:
    """Induced infinity norm (max absolute row sum)."""
    A = np.asarray(A)
    return float(np.linalg.norm(A, np.inf)) if A.size else 0.0


def ent_inf(A) -> float:
    """Entrywise max-modulus of a matrix; used for entrywise comparisons."""
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def matrix_exp(A, t: float, norm_bound: float = DEFAULT_NORM_BOUND) -> np.ndarray:
    """Compute e^{tA} for a dense complex square matrix A.

    Uses scaling-and-squaring with a fixed-order rational core (scipy's
    ``expm``).  Rejects horizons with ``||tA||_inf`` beyond ``norm_bound``,
    where entry growth makes the result meaningless in double precision.
    """
    A = as_complex_matrix(A)
    t = float(t)
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    scaled_norm = abs(t) * mat_inf(A)
    if scaled_norm > norm_bound:
        raise OverflowBoundError(
            f"||tA||_inf = {scaled_norm:.3g} exceeds bound {norm_bound:.3g}")
    if t == 0.0:
        return np.eye(A.shape[0], dtype=complex)
    return scipy.linalg.expm(t * A)


@dataclass(frozen=True)
class GeneratorSpec:
    """Description of a generator: either a dense matrix or a catalog entry."""

    kind: str  # "dense" | "catalog"
    matrix: Optional[np.ndarray] = None
    catalog_id: Optional[str] = None
    params: Optional[dict] = None

    def __post_init__(self):
        if self.kind == "dense":
            if self.matrix is None or self.catalog_id is not None:
                raise ValueError("dense GeneratorSpec must carry exactly a matrix")
        elif self.kind == "catalog":
            if self.catalog_id is None or self.matrix is None:
                raise ValueError("catalog GeneratorSpec needs catalog_id and its matrix")
        else:
            raise ValueError(f"unknown GeneratorSpec kind {self.kind!r}")


class SemigroupEvaluator:
    """Evaluates t -> T(t)x for T(t) = e^{tA} with A a finite matrix.

    ``strategy`` is ``"closed_form"`` when an exact formula for T(t) is
    attached (catalog entries, rescalings of them) and
    ``"matrix_exponential"`` otherwise.  Exponential evaluations are memoised
    per evaluator behind a lock, so concurrent use from several threads is
    safe; closed forms are cheap and not cached.
    """

    def __init__(self, spec: GeneratorSpec, strategy: str,
                 matrix_fn: Optional[Callable[[float], np.ndarray]] = None,
                 norm_bound: float = DEFAULT_NORM_BOUND):
        if strategy not in ("matrix_exponential", "closed_form"):
            raise ValueError(f"unknown evaluation strategy {strategy!r}")
        if strategy == "closed_form" and matrix_fn is None:
            raise ValueError("closed_form strategy requires a matrix function")
        self.spec = spec
        self.strategy = strategy
        self.norm_bound = norm_bound
        self._matrix_fn = matrix_fn
        self._memo: dict[float, np.ndarray] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_dense(cls, A, norm_bound: float = DEFAULT_NORM_BOUND) -> "SemigroupEvaluator":
        A = as_complex_matrix(A)
        return cls(GeneratorSpec(kind="dense", matrix=A), "matrix_exponential",
                   norm_bound=norm_bound)

    @property
    def generator(self) -> np.ndarray:
        return self.spec.matrix

    @property
    def dim(self) -> int:
        return self.spec.matrix.shape[0]

    def matrix_at(self, t: float) -> np.ndarray:
        """Return T(t) as a dense matrix; T(0) is the exact identity."""
        t = float(t)
        if t == 0.0:
            return np.eye(self.dim, dtype=complex)
        if self.strategy == "closed_form":
            return self._matrix_fn(t)
        with self._lock:
            cached = self._memo.get(t)
        if cached is not None:
            return cached
        M = matrix_exp(self.generator, t, norm_bound=self.norm_bound)
        with self._lock:
            self._memo[t] = M
        return M

    def evaluate(self, t: float, x) -> np.ndarray:
        x = as_complex_vector(x, self.dim)
        return self.matrix_at(t) @ x


def evaluate_orbit(S: SemigroupEvaluator, t: float, x) -> np.ndarray:
    """Return T(t)x.  Demands t >= 0 and a dimension-matched vector."""
    if t < 0:
        raise ValueError("orbit evaluation requires t >= 0")
    return S.evaluate(t, x)


def generator_of(S: SemigroupEvaluator) -> np.ndarray:
    """Return the generator matrix A with T(t) = e^{tA}."""
    return S.generator.copy()


def rescale(S: SemigroupEvaluator, lam: complex, c: float) -> SemigroupEvaluator:
    """Build the evaluator for t -> e^{-lam*t} T(c*t); its generator is c*A - lam*I."""
    if not c > 0:
        raise ValueError("rescale requires c > 0")
    lam = complex(lam)
    A = S.generator
    B = c * A - lam * np.eye(S.dim, dtype=complex)
    spec = GeneratorSpec(kind="dense", matrix=B)

    def fn(t: float, _S=S, _lam=lam, _c=float(c)) -> np.ndarray:
        return np.exp(-_lam * t) * _S.matrix_at(_c * t)

    return SemigroupEvaluator(spec, "closed_form", matrix_fn=fn,
                              norm_bound=S.norm_bound)


def finite_difference_generator_residual(S: SemigroupEvaluator, h: float, x) -> float:
    """||(T(h)x - x)/h - Ax||_inf, the first-order generator cross-check."""
    x = as_complex_vector(x, S.dim)
    fd = (S.evaluate(h, x) - x) / h
    return vec_inf(fd - S.generator @ x)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

def _build_diagonal(params: dict):
    entries = params.get("entries")
    if entries is None:
        raise CatalogError("diagonal catalog entry needs 'entries'")
    d = np.asarray([_to_complex(e) for e in entries], dtype=complex)
    if d.ndim != 1 or d.size == 0:
        raise CatalogError("diagonal entries must be a non-empty list")
    A = np.diag(d)

    def fn(t: float, _d=d) -> np.ndarray:
        return np.diag(np.exp(_d * t))

    return A, fn


def _build_rotation2d(params: dict):
    omega = params.get("omega")
    if omega is None or not float(omega) > 0:
        raise CatalogError("rotation2d needs omega > 0")
    w = float(omega)
    A = w * np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)

    def fn(t: float, _w=w) -> np.ndarray:
        c, s = math.cos(_w * t), math.sin(_w * t)
        return np.array([[c, -s], [s, c]], dtype=complex)

    return A, fn


def _build_nilpotent_shift(params: dict):
    dim = params.get("dim")
    if dim is None or int(dim) < 2:
        raise CatalogError("nilpotent_shift needs dim >= 2")
    n = int(dim)
    A = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        A[i, i + 1] = 1.0

    def fn(t: float, _n=n) -> np.ndarray:
        # e^{tN} is upper triangular with t^k / k! on the k-th superdiagonal.
        M = np.zeros((_n, _n), dtype=complex)
        for k in range(_n):
            M += (t ** k / math.factorial(k)) * np.eye(_n, k=k)
        return M

    return A, fn


def _build_disc_rotation(params: dict):
    degree = params.get("degree")
    if degree is None or int(degree) < 1:
        raise CatalogError("disc_rotation needs degree >= 1")
    return disc_rotation_generator(int(degree))


def disc_rotation_generator(degree: int):
    """Generator diag(0, i, ..., Ni) and the diagonal action (T(t)f)_n = e^{int} f_n.

    This realises rotation of the unit disc acting on truncated Taylor
    coefficients; degree 0 (constants only) is allowed here even though the
    catalog entry demands degree >= 1.
    """
    if degree < 0:
        raise CatalogError("disc rotation degree must be >= 0")
    modes = 1j * np.arange(degree + 1, dtype=float)
    A = np.diag(modes)

    def fn(t: float, _m=modes) -> np.ndarray:
        return np.diag(np.exp(_m * t))

    return A, fn


def _build_random_stable(params: dict):
    dim = params.get("dim")
    seed = params.get("seed")
    a = params.get("a")
    if dim is None or int(dim) < 1:
        raise CatalogError("random_stable needs dim >= 1")
    if seed is None:
        raise CatalogError("random_stable needs a seed")
    if a is None or not float(a) < 0:
        raise CatalogError("random_stable needs spectral abscissa bound a < 0")
    n, a = int(dim), float(a)
    rng = np.random.default_rng(int(seed))
    M = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2 * n)
    # shift so the largest eigenvalue real part lands exactly on a
    alpha = float(np.max(np.linalg.eigvals(M).real))
    A = M - (alpha - a) * np.eye(n, dtype=complex)
    return A, None


_CATALOG_BUILDERS = {
    "diagonal": _build_diagonal,
    "rotation2d": _build_rotation2d,
    "nilpotent_shift": _build_nilpotent_shift,
    "disc_rotation": _build_disc_rotation,
    "random_stable": _build_random_stable,
}


def _to_complex(value) -> complex:
    """Accept python complex or a [re, im] pair."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise CatalogError(f"complex value must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def catalog_build(catalog_id: str, params: dict):
    """Build a (GeneratorSpec, SemigroupEvaluator) pair from the catalog.

    Known ids: diagonal (list of complex entries), rotation2d (omega > 0),
    nilpotent_shift (dim >= 2), disc_rotation (degree >= 1), random_stable
    (dim, seed, spectral abscissa bound a < 0).  Catalog evaluators use
    closed forms whenever an exact diagonal/rotation action exists.
    """
    builder = _CATALOG_BUILDERS.get(catalog_id)
    if builder is None:
        raise CatalogError(f"unknown catalog id {catalog_id!r}; known: {CATALOG_IDS}")
    A, fn = builder(dict(params or {}))
    spec = GeneratorSpec(kind="catalog", matrix=as_complex_matrix(A),
                         catalog_id=catalog_id, params=dict(params or {}))
    if fn is None:
        evaluator = SemigroupEvaluator(spec, "matrix_exponential")
    else:
        evaluator = SemigroupEvaluator(spec, "closed_form", matrix_fn=fn)
    return spec, evaluator
