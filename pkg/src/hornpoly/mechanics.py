"""Inertia, angular momentum and the frequency map of a symmetric matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import eigenvalues_sym
from .sampling import HermitianStructure, standard_structure
from .validation import DimensionError, PairingError, check_symmetric

__all__ = [
    "MassConfiguration",
    "inertia_matrix",
    "angular_momentum",
    "relative_equilibrium_momentum",
    "frequency_map",
    "pair_spectrum",
    "doubled",
    "PAIRING_TOL",
]

PAIRING_TOL = 1e-8


@dataclass(frozen=True)
class MassConfiguration:
    """Point masses in R^dim, stored column-wise with the center of mass at 0.

    The same class holds velocities; a velocity configuration shares the
    masses of its position configuration.
    """

    positions: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.positions, dtype=float)
        m = np.asarray(self.masses, dtype=float)
        if X.ndim != 2 or m.ndim != 1 or X.shape[1] != m.shape[0]:
            raise DimensionError(
                f"positions {X.shape} and masses {m.shape} do not match")
        if np.any(m <= 0):
            raise ValueError("masses must be positive")
        scale = max(1.0, float(np.abs(X).max(initial=0.0) * m.sum()))
        if np.abs(X @ m).max(initial=0.0) > 1e-10 * scale:
            raise ValueError("center of mass is not at the origin")
        object.__setattr__(self, "positions", X)
        object.__setattr__(self, "masses", m)

    @property
    def dim(self):
        return self.positions.shape[0]

    @property
    def n_bodies(self):
        return self.positions.shape[1]


def inertia_matrix(cfg):
    """``S = X M X^T``; its trace is the moment of inertia about the center of mass."""
    X, m = cfg.positions, cfg.masses
    S = (X * m) @ X.T
    return 0.5 * (S + S.T)


def angular_momentum(pos, vel):
    """Antisymmetric matrix ``C = -X M Y^T + Y M X^T`` of a position/velocity pair."""
    if pos.positions.shape != vel.positions.shape:
        raise DimensionError(
            f"positions {pos.positions.shape} and velocities "
            f"{vel.positions.shape} differ")
    if not np.array_equal(pos.masses, vel.masses):
        raise ValueError("position and velocity configurations have different masses")
    X, Y, m = pos.positions, vel.positions, pos.masses
    XMY = (X * m) @ Y.T
    C = XMY.T - XMY
    return 0.5 * (C - C.T)


def _check_size(S0, J):
    S0 = check_symmetric(S0, name="S0")
    if S0.shape[0] != 2 * J.p:
        raise DimensionError(
            f"S0 is {S0.shape[0]}x{S0.shape[0]} but the structure acts on "
            f"R^{2 * J.p}")
    return S0


def relative_equilibrium_momentum(S0, J):
    """Angular momentum ``S0 J + J S0`` of the rigid rotation ``exp(tJ) X0``."""
    S0 = _check_size(S0, J)
    Jm = J.J
    return S0 @ Jm + Jm @ S0


def pair_spectrum(gamma, scale, tol=PAIRING_TOL):
    """Collapse a descending spectrum of doubled values to one value per pair.

    Consecutive entries ``gamma[2k], gamma[2k+1]`` must agree to within
    ``tol * scale``; their mean is returned.
    """
    gamma = np.asarray(gamma, dtype=float)
    gaps = gamma[..., 0::2] - gamma[..., 1::2]
    worst = float(np.abs(gaps).max(initial=0.0))
    if worst > tol * scale:
        raise PairingError(
            f"eigenvalues do not pair: gap {worst:.3e} exceeds {tol * scale:.3e}")
    return 0.5 * (gamma[..., 0::2] + gamma[..., 1::2])


def frequency_map(J, S0, form="structure"):
    """Ordered frequencies of ``S0`` seen through the hermitian structure ``J``.

    Parameters
    ----------
    J : HermitianStructure
    S0 : array_like, shape (2p, 2p)
    form : {"structure", "rotated"}
        ``"structure"`` diagonalizes ``J^{-1} S0 J + S0``. ``"rotated"``
        diagonalizes the conjugate matrix ``J0^{-1} S J0 + S`` with
        ``S = R S0 R^{-1}``; both have the same spectrum.

    Returns
    -------
    ndarray, shape (p,)
        Descending ``nu`` with ``sum(nu) == trace(S0)``.

    Raises
    ------
    PairingError
        If the 2p eigenvalues fail to pair up, which means ``J`` is not a
        valid hermitian structure.
    """
    S0 = _check_size(S0, J)
    if form == "structure":
        Jm = J.J
        H = Jm.T @ S0 @ Jm + S0
    elif form == "rotated":
        J0 = standard_structure(J.p)
        S = J.R @ S0 @ J.R.T
        H = J0.T @ S @ J0 + S
    else:
        raise ValueError(f"unknown form {form!r}")
    gamma = eigenvalues_sym(0.5 * (H + H.T))
    return pair_spectrum(gamma, float(np.linalg.norm(S0)))


def doubled(nu):
    """``(nu_1, nu_1, nu_2, nu_2, ...)``."""
    return np.repeat(np.asarray(nu, dtype=float), 2)
