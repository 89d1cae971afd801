"""Random rotations and hermitian structures on R^{2p}."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .validation import check_random_state, check_rotation

__all__ = [
    "HermitianStructure",
    "standard_structure",
    "givens",
    "random_rotation_product",
    "haar_rotation",
    "random_rotation",
    "random_hermitian_structure",
    "adapted_structure",
    "sample_rng",
    "SAMPLERS",
]

SAMPLERS = ("paper", "haar")


def sample_rng(seed, index):
    """Generator for sample ``index`` of a run seeded with ``seed``.

    Each sample owns an independent stream keyed on ``(seed, index)``, so a
    run gives the same draws however its samples are split across workers.
    """
    return np.random.default_rng([int(seed), int(index)])


def standard_structure(p):
    """The block matrix ``[[0, -I], [I, 0]]`` of size ``2p``."""
    J0 = np.zeros((2 * p, 2 * p))
    J0[:p, p:] = -np.eye(p)
    J0[p:, :p] = np.eye(p)
    return J0


def givens(n, a, b, t):
    """``exp(t * xi)`` where ``xi`` has ``-1`` at ``(a, b)`` and ``+1`` at ``(b, a)``."""
    G = np.eye(n)
    c, s = np.cos(t), np.sin(t)
    G[a, a] = c
    G[b, b] = c
    G[a, b] = -s
    G[b, a] = s
    return G


def _planes(n):
    return [(a, b) for a in range(n) for b in range(a + 1, n)]


def random_rotation_product(n, rng=None):
    """Random rotation built as a shuffled product of one-parameter subgroups.

    All ``m = n(n-1)/2`` plane rotations of the canonical basis of so(n) are
    used once, each with its own angle uniform in ``[0, 2pi]``, in a random
    order. The resulting distribution is not Haar measure.

    Parameters
    ----------
    n : int
        Matrix size, at least 2.
    rng : Generator, int or None

    Returns
    -------
    ndarray, shape (n, n)
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    rng = check_random_state(rng)
    planes = _planes(n)
    m = len(planes)
    angles = rng.uniform(0.0, 2.0 * np.pi, size=m)
    order = rng.permutation(m)
    R = np.eye(n)
    for t, i in zip(angles, order):
        a, b = planes[i]
        c, s = np.cos(t), np.sin(t)
        # right-multiply by the plane rotation: only columns a and b change
        ca, cb = R[:, a].copy(), R[:, b].copy()
        R[:, a] = c * ca + s * cb
        R[:, b] = -s * ca + c * cb
    return R


def haar_rotation(n, rng=None):
    """Haar-distributed element of SO(n) via QR of a Gaussian matrix."""
    rng = check_random_state(rng)
    Z = rng.standard_normal((n, n))
    Q, Rq = np.linalg.qr(Z)
    Q = Q * np.sign(np.diag(Rq))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_rotation(n, rng=None, sampler="paper"):
    if sampler == "paper":
        return random_rotation_product(n, rng)
    if sampler == "haar":
        return haar_rotation(n, rng)
    raise ValueError(f"unknown sampler {sampler!r}; expected one of {SAMPLERS}")


@dataclass(frozen=True)
class HermitianStructure:
    """Orthogonal complex structure ``J = R^{-1} J0 R`` on R^{2p}."""

    p: int
    R: np.ndarray

    def __post_init__(self):
        if self.R.shape != (2 * self.p, 2 * self.p):
            raise ValueError(
                f"rotation must be {2 * self.p}x{2 * self.p}, got {self.R.shape}")

    @cached_property
    def J(self):
        return self.R.T @ standard_structure(self.p) @ self.R

    def check(self, atol=1e-12):
        J, I = self.J, np.eye(2 * self.p)
        if np.abs(J @ J + I).max() > atol or np.abs(J.T @ J - I).max() > atol:
            raise ValueError("not an orthogonal complex structure")
        return self


def random_hermitian_structure(p, rng=None, sampler="paper"):
    """Push a random rotation of R^{2p} forward to a hermitian structure."""
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    return HermitianStructure(p, random_rotation(2 * p, rng, sampler))


def adapted_structure(p, rho):
    """Hermitian structure with matrix ``[[0, -rho^{-1}], [rho, 0]]``.

    It maps the span of the first ``p`` basis vectors onto the span of the
    last ``p``. The carrying rotation is ``diag(I, rho^T)``.
    """
    rho = check_rotation(rho, name="rho")
    if rho.shape[0] != p:
        raise ValueError(f"rho must be {p}x{p}, got {rho.shape}")
    R = np.eye(2 * p)
    R[p:, p:] = rho.T
    return HermitianStructure(p, R)
