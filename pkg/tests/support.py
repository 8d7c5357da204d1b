"""Shared helpers for the test suite: canonical catalog instances and the
independent oracles used to freeze expected values."""

import numpy as np

from sgspec import catalog_build

#: Desk-scale catalog instances exercised by the cross-cutting invariants:
#: the lattice-collision diagonal, the plane rotation, a nilpotent shift,
#: the degree-4 disc rotation, and a seeded stable matrix.
CATALOG_SPECS = [
    ("diagonal_lattice", "diagonal", {"entries": [0.0, 2j * np.pi]}),
    ("rotation2d", "rotation2d", {"omega": 1.0}),
    ("nilpotent_shift3", "nilpotent_shift", {"dim": 3}),
    ("disc_rotation4", "disc_rotation", {"degree": 4}),
    ("random_stable6", "random_stable", {"dim": 6, "seed": 42, "a": -0.5}),
]


def catalog_entries():
    return [(name, *catalog_build(cid, params)) for name, cid, params in CATALOG_SPECS]


def series_exp(A, t, terms=120):
    """Truncated power series sum (tA)^k / k!, the matrix-exponential oracle.

    Plain Horner-free accumulation, independent of any scaling-and-squaring
    code path; adequate for the moderate ||tA|| used in tests.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    term = np.eye(n, dtype=complex)
    acc = np.eye(n, dtype=complex)
    for k in range(1, terms):
        term = term @ (t * A) / k
        acc = acc + term
        if np.abs(term).max() < 1e-30:
            break
    return acc


def eigenprojector(A, which, tol=1e-9):
    """Spectral projector onto the eigenvalue nearest `which`, from a full
    eigendecomposition A = V diag(w) V^{-1}; the oracle for quadrature-based
    projections."""
    A = np.asarray(A, dtype=complex)
    w, V = np.linalg.eig(A)
    mask = np.abs(w - which) <= tol * max(1.0, np.abs(w).max())
    if not mask.any():
        raise AssertionError(f"{which} is not an eigenvalue of the oracle decomposition")
    return V @ np.diag(mask.astype(complex)) @ np.linalg.inv(V)


def random_complex_matrix(rng, n, scale=None):
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return M / (scale or np.sqrt(n))
