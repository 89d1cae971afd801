"""Cyclic Jacobi eigensolver for small real symmetric matrices.

The batched routine diagonalizes a stack of matrices in lock step: the same
pivot sequence is swept over every matrix, each with its own rotation angle.
Matrices that have converged are frozen, so the result for any one matrix does
not depend on which other matrices share its batch.
"""

from __future__ import annotations

import numpy as np

from .validation import check_symmetric

__all__ = ["eigh_jacobi", "eigh_jacobi_batch", "eigenvalues_sym"]

OFF_TOL = 1e-14
MAX_SWEEPS = 100


def _sumsq_upper(A, n, diagonal):
    # Fixed accumulation order keeps the stopping test bitwise reproducible.
    acc = np.zeros(A.shape[0])
    for p in range(n):
        if diagonal:
            acc = acc + A[:, p, p] * A[:, p, p]
        for q in range(p + 1, n):
            acc = acc + 2.0 * A[:, p, q] * A[:, p, q]
    return acc


def eigh_jacobi_batch(S, *, tol=OFF_TOL, max_sweeps=MAX_SWEEPS, vectors=True):
    """Diagonalize a stack of symmetric matrices by cyclic Jacobi rotations.

    Parameters
    ----------
    S : array_like, shape (batch, n, n)
        Symmetric matrices. Only symmetry to rounding is assumed; the upper
        triangle drives the rotations.
    tol : float
        A matrix is converged once its off-diagonal Frobenius norm falls
        below ``tol * ||S||_F``.
    max_sweeps : int
        Hard limit on full sweeps over the pivot pairs.
    vectors : bool
        Accumulate eigenvectors.

    Returns
    -------
    values : ndarray, shape (batch, n)
        Eigenvalues in descending order.
    Q : ndarray, shape (batch, n, n) or None
        Orthogonal matrices whose columns are the matching eigenvectors,
        so that ``S = Q @ diag(values) @ Q.T``.
    """
    A = np.array(S, dtype=float, copy=True)
    if A.ndim != 3 or A.shape[1] != A.shape[2]:
        raise ValueError(f"expected a (batch, n, n) stack, got shape {A.shape}")
    batch, n = A.shape[0], A.shape[1]
    V = np.broadcast_to(np.eye(n), (batch, n, n)).copy() if vectors else None

    threshold = tol * np.sqrt(_sumsq_upper(A, n, diagonal=True))
    active = np.sqrt(_sumsq_upper(A, n, diagonal=False)) > threshold

    sweeps = 0
    while active.any():
        if sweeps >= max_sweeps:
            raise RuntimeError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps")
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[:, p, q]
                rotate = active & (apq != 0.0)
                if not rotate.any():
                    continue
                app, aqq = A[:, p, p], A[:, q, q]
                safe = np.where(rotate, apq, 1.0)
                tau = (aqq - app) / (2.0 * safe)
                t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                cc, ss = c[:, None], s[:, None]
                colp, colq = A[:, :, p], A[:, :, q]
                new_p = cc * colp - ss * colq
                new_q = ss * colp + cc * colq
                A[:, :, p] = np.where(rotate[:, None], new_p, colp)
                A[:, :, q] = np.where(rotate[:, None], new_q, colq)
                rowp, rowq = A[:, p, :], A[:, q, :]
                new_p = cc * rowp - ss * rowq
                new_q = ss * rowp + cc * rowq
                A[:, p, :] = np.where(rotate[:, None], new_p, rowp)
                A[:, q, :] = np.where(rotate[:, None], new_q, rowq)
                A[:, p, q] = np.where(rotate, 0.0, A[:, p, q])
                A[:, q, p] = np.where(rotate, 0.0, A[:, q, p])

                if V is not None:
                    vp, vq = V[:, :, p], V[:, :, q]
                    new_p = cc * vp - ss * vq
                    new_q = ss * vp + cc * vq
                    V[:, :, p] = np.where(rotate[:, None], new_p, vp)
                    V[:, :, q] = np.where(rotate[:, None], new_q, vq)
        sweeps += 1
        off = np.sqrt(_sumsq_upper(A, n, diagonal=False))
        active = active & (off > threshold)

    values = np.diagonal(A, axis1=1, axis2=2).copy()
    order = np.argsort(-values, axis=1, kind="stable")
    values = np.take_along_axis(values, order, axis=1)
    if V is not None:
        V = np.take_along_axis(V, order[:, None, :], axis=2)
    return values, V


def eigh_jacobi(S, **kwargs):
    """Eigenvalues (descending) and eigenvectors of one symmetric matrix."""
    S = check_symmetric(S)
    values, Q = eigh_jacobi_batch(S[None], **kwargs)
    return values[0], Q[0]


def eigenvalues_sym(S):
    """Return the eigenvalues of a symmetric matrix in descending order.

    >>> eigenvalues_sym([[0.0, 1.0], [1.0, 0.0]])
    array([ 1., -1.])
    """
    S = check_symmetric(S)
    values, _ = eigh_jacobi_batch(S[None], vectors=False)
    return values[0]
