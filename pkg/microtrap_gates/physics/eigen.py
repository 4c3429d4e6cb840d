"""
Symmetric eigen-solvers for mode Hessians.

jacobi_eigh is a cyclic Jacobi rotation solver; lapack_eigh defers to
scipy.linalg.eigh. Both return ascending eigenvalues and pass through the
same canonicalization, so the chosen solver never changes which basis a
degenerate subspace is reported in.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import linalg

from ..errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

DEGENERACY_TOLERANCE = 1e-11
_TIE_FRACTION = 1e-6


def jacobi_eigh(
    matrix: np.ndarray,
    tolerance: float = 1e-15,
    max_sweeps: int = 60,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi diagonalization of a real symmetric matrix.

    Args:
        matrix: Real symmetric (n, n) matrix
        tolerance: Stop once the off-diagonal Frobenius norm drops below
            tolerance * ||matrix||_F
        max_sweeps: Maximum number of full (p, q) sweeps

    Returns:
        (eigenvalues, eigenvectors) with eigenvectors as columns
    """
    a = np.array(matrix, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise DomainError("matrix is not symmetric")
    a = 0.5 * (a + a.T)

    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a) or 1.0

    for sweep in range(max_sweeps):
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= tolerance * scale:
            logger.debug("Jacobi converged after %d sweeps (off=%.2e)", sweep, off)
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q

                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off > tolerance * scale * 1e3:
            raise ConvergenceError("Jacobi eigen-solver did not converge", float(off), max_sweeps)

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


def lapack_eigh(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """scipy.linalg.eigh with the same return convention as jacobi_eigh."""
    sym = 0.5 * (np.asarray(matrix, dtype=float) + np.asarray(matrix, dtype=float).T)
    values, vectors = linalg.eigh(sym)
    return values, vectors


SOLVERS = {
    "jacobi": jacobi_eigh,
    "lapack": lapack_eigh,
}


def _first_near_max(values: np.ndarray) -> int:
    top = values.max()
    return int(np.flatnonzero(values >= top * (1.0 - _TIE_FRACTION))[0])


def canonicalize(
    matrix: np.ndarray,
    values: np.ndarray,
    vectors: np.ndarray,
    tolerance: float = DEGENERACY_TOLERANCE,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Fix the basis inside degenerate subspaces and the sign of every vector.

    Within a cluster of eigenvalues closer than `tolerance`, canonical axis
    vectors e_i are projected onto the subspace and Gram-Schmidt
    orthogonalized, always taking the axis with the largest remaining
    projection (lowest index on ties). Each vector is then signed so that
    its largest component is positive.
    """
    n = vectors.shape[0]
    out_vectors = vectors.copy()
    out_values = values.copy()

    start = 0
    while start < len(values):
        stop = start + 1
        while stop < len(values) and values[stop] - values[stop - 1] <= tolerance:
            stop += 1

        if stop - start > 1:
            basis = vectors[:, start:stop]
            chosen = []
            for _ in range(stop - start):
                projections = basis @ basis.T
                candidates = projections.copy()
                for vec in chosen:
                    candidates -= np.outer(vec, vec @ candidates)
                norms = np.linalg.norm(candidates, axis=0)
                axis = _first_near_max(norms)
                chosen.append(candidates[:, axis] / norms[axis])
            block = np.column_stack(chosen)
            out_vectors[:, start:stop] = block
            out_values[start:stop] = np.einsum("im,ij,jm->m", block, matrix, block)
        start = stop

    for m in range(n):
        vec = out_vectors[:, m]
        lead = _first_near_max(np.abs(vec))
        if vec[lead] < 0:
            out_vectors[:, m] = -vec

    return out_values, out_vectors


def symmetric_eigensystem(matrix: np.ndarray, solver: str = "jacobi") -> Tuple[np.ndarray, np.ndarray]:
    """
    Ascending eigenpairs of a symmetric matrix with a deterministic basis.

    Args:
        matrix: Real symmetric matrix
        solver: "jacobi" or "lapack"

    Returns:
        (eigenvalues, eigenvectors as columns)
    """
    if solver not in SOLVERS:
        raise DomainError(f"unknown eigen-solver '{solver}' (choose from {sorted(SOLVERS)})")
    values, vectors = SOLVERS[solver](matrix)
    return canonicalize(np.asarray(matrix, dtype=float), values, vectors)
