"""Half-space descriptions of Horn polytopes and membership tests.

``P1`` is the Horn polytope in R^p for the interlaced halves of a spectrum
``sigma`` of length ``2p``. ``P`` is the Horn polytope in R^{2p} for two
copies of ``sigma``. Hermitian (doubled) spectra and the pair-averaging
projection onto them are handled here as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import eigh_jacobi_batch
from .horn import generate_T
from .sampling import random_rotation
from .validation import DimensionError, check_random_state, check_spectrum

__all__ = [
    "PartitionPair",
    "PolytopeSpec",
    "build_horn_polytope",
    "build_P1",
    "build_P",
    "membership_slack",
    "membership_slack_batch",
    "inequality_slacks",
    "default_tolerances",
    "project_to_delta",
    "is_hermitian_spectrum",
    "check_P_membership",
    "compare_partitions",
    "PartitionReport",
]


@dataclass(frozen=True)
class PartitionPair:
    """A split of ``sigma`` (length 2p) into two descending halves of length p."""

    sigma: np.ndarray
    minus: np.ndarray
    plus: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        sigma = check_spectrum(self.sigma, name="sigma")
        if sigma.shape[0] % 2:
            raise DimensionError("sigma must have even length")
        p = sigma.shape[0] // 2
        minus = check_spectrum(self.minus, length=p, name="minus")
        plus = check_spectrum(self.plus, length=p, name="plus")
        if not np.array_equal(np.sort(np.concatenate([minus, plus])), np.sort(sigma)):
            raise ValueError("minus and plus do not partition sigma")
        if self.kind == "interlaced" and not (
                np.array_equal(minus, sigma[0::2]) and np.array_equal(plus, sigma[1::2])):
            raise ValueError("partition tagged interlaced is not interlaced")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "minus", minus)
        object.__setattr__(self, "plus", plus)

    @property
    def p(self):
        return self.minus.shape[0]

    @classmethod
    def interlaced(cls, sigma):
        """``minus = (s1, s3, ...)``, ``plus = (s2, s4, ...)``."""
        sigma = check_spectrum(sigma, name="sigma")
        return cls(sigma, sigma[0::2], sigma[1::2], kind="interlaced")

    @classmethod
    def from_indices(cls, sigma, indices):
        """Put the 1-based positions ``indices`` of ``sigma`` into ``minus``."""
        sigma = check_spectrum(sigma, name="sigma")
        chosen = sorted(int(i) - 1 for i in indices)
        if len(set(chosen)) != len(chosen) or len(chosen) * 2 != len(sigma):
            raise ValueError(f"indices {indices} do not pick half of sigma")
        if chosen[0] < 0 or chosen[-1] >= len(sigma):
            raise ValueError(f"indices {indices} out of range")
        rest = [i for i in range(len(sigma)) if i not in set(chosen)]
        return cls(sigma, sigma[chosen], sigma[rest])


@dataclass(frozen=True)
class PolytopeSpec:
    """Trace hyperplane plus the Horn inequalities ``sum_K nu <= bound``.

    ``bounds[q] = alpha_sums[q] + beta_sums[q]`` for the q-th triple. Per
    rank ``r``, ``k_index[r]`` holds the 0-based K sets of that rank as an
    ``(m_r, r)`` integer array and ``rank_rows[r]`` their positions in
    ``triples``.
    """

    p: int
    trace_sum: float
    alpha: np.ndarray
    beta: np.ndarray
    triples: tuple
    alpha_sums: np.ndarray
    beta_sums: np.ndarray
    k_index: dict
    rank_rows: dict

    @property
    def bounds(self):
        return self.alpha_sums + self.beta_sums

    @property
    def n_inequalities(self):
        return len(self.triples)

    def to_json(self):
        return {
            "p": self.p,
            "trace_sum": float(self.trace_sum),
            "alpha": self.alpha.tolist(),
            "beta": self.beta.tolist(),
            "inequalities": [
                {"I": list(t.I), "J": list(t.J), "K": list(t.K),
                 "alpha_sum": float(a), "beta_sum": float(b)}
                for t, a, b in zip(self.triples, self.alpha_sums, self.beta_sums)
            ],
        }


def build_horn_polytope(alpha, beta, trace_sum=None):
    """Horn inequalities for spectra of ``a + b`` with ``spec(a) = alpha``,
    ``spec(b) = beta``; one inequality per admissible triple of rank ``< p``."""
    alpha = check_spectrum(alpha, name="alpha")
    p = alpha.shape[0]
    beta = check_spectrum(beta, length=p, name="beta")
    if trace_sum is None:
        trace_sum = float(alpha.sum() + beta.sum())
    triples = tuple(generate_T(p).inequality_triples())
    a_sums = np.array([alpha[np.array(t.I) - 1].sum() for t in triples])
    b_sums = np.array([beta[np.array(t.J) - 1].sum() for t in triples])
    k_index, rank_rows = {}, {}
    for q, t in enumerate(triples):
        rank_rows.setdefault(t.r, []).append(q)
    for r, rows in rank_rows.items():
        k_index[r] = np.array([triples[q].K for q in rows], dtype=np.intp) - 1
        rank_rows[r] = np.array(rows, dtype=np.intp)
    return PolytopeSpec(p, float(trace_sum), alpha, beta, triples,
                        a_sums, b_sums, k_index, rank_rows)


def build_P1(sigma, partition=None):
    """Polytope ``P1`` for ``sigma``; the interlaced split unless ``partition`` is given."""
    sigma = check_spectrum(sigma, name="sigma")
    if sigma.shape[0] % 2:
        raise DimensionError("sigma must have even length 2p")
    if partition is None:
        partition = PartitionPair.interlaced(sigma)
    elif not np.array_equal(partition.sigma, sigma):
        raise ValueError("partition does not belong to sigma")
    return build_horn_polytope(partition.minus, partition.plus, trace_sum=sigma.sum())


def build_P(sigma):
    """Polytope ``P`` in R^{2p} for sums of two matrices with spectrum ``sigma``."""
    sigma = check_spectrum(sigma, name="sigma")
    return build_horn_polytope(sigma, sigma, trace_sum=2.0 * sigma.sum())


def inequality_slacks(spec, nus):
    """Slack of every inequality for every row of ``nus``; shape ``(n, m)``."""
    nus = np.asarray(nus, dtype=float)
    out = np.empty((nus.shape[0], spec.n_inequalities))
    bounds = spec.bounds
    for r, kidx in spec.k_index.items():
        rows = spec.rank_rows[r]
        out[:, rows] = bounds[rows] - nus[:, kidx].sum(axis=2)
    return out


def membership_slack_batch(spec, nus):
    """Trace residuals and minimum slacks for a stack of spectra."""
    nus = np.asarray(nus, dtype=float)
    if nus.ndim != 2 or nus.shape[1] != spec.p:
        raise DimensionError(f"expected spectra of length {spec.p}, got shape {nus.shape}")
    residual = nus.sum(axis=1) - spec.trace_sum
    if spec.n_inequalities == 0:
        return residual, np.full(nus.shape[0], np.inf)
    return residual, inequality_slacks(spec, nus).min(axis=1)


def membership_slack(spec, nu):
    """Return ``(trace_residual, min_slack)`` of ``nu`` against ``spec``.

    ``nu`` lies in the polytope when ``|trace_residual| <= tol_trace`` and
    ``min_slack >= -tol_ineq``. With no inequalities ``min_slack`` is
    ``+inf``.
    """
    nu = check_spectrum(nu, length=spec.p, name="nu")
    res, slack = membership_slack_batch(spec, nu[None, :])
    return float(res[0]), float(slack[0])


def default_tolerances(spec, rel=1e-9):
    """``(tol_trace, tol_ineq)`` scaled by the trace and the l1 size of the data."""
    l1 = float(np.abs(spec.alpha).sum() + np.abs(spec.beta).sum())
    return rel * max(1.0, abs(spec.trace_sum)), rel * max(1.0, l1)


def project_to_delta(gamma_hat):
    """Average consecutive pairs: ``nu_k = (g_{2k-1} + g_{2k}) / 2``."""
    g = np.asarray(gamma_hat, dtype=float)
    if g.shape[-1] % 2:
        raise DimensionError(f"length {g.shape[-1]} is odd")
    return 0.5 * (g[..., 0::2] + g[..., 1::2])


def is_hermitian_spectrum(gamma_hat, tol):
    """True when ``sum_k (g_{2k-1} - g_{2k})^2 < 2 tol^2``."""
    g = np.asarray(gamma_hat, dtype=float)
    if g.shape[-1] % 2:
        raise DimensionError(f"length {g.shape[-1]} is odd")
    gaps = g[..., 0::2] - g[..., 1::2]
    return (gaps * gaps).sum(axis=-1) < 2.0 * tol * tol


def check_P_membership(sigma, gamma_hat):
    """``(trace_residual, min_slack)`` of ``gamma_hat`` against ``P`` for ``sigma``."""
    sigma = check_spectrum(sigma, name="sigma")
    gamma_hat = check_spectrum(gamma_hat, name="gamma_hat")
    if gamma_hat.shape != sigma.shape:
        raise DimensionError(
            f"gamma_hat has length {gamma_hat.shape[0]}, sigma {sigma.shape[0]}")
    return membership_slack(build_P(sigma), gamma_hat)


@dataclass
class PartitionReport:
    samples: int
    inside: int
    max_violation: float

    @property
    def fraction(self):
        return self.inside / self.samples


def compare_partitions(sigma, custom, samples, rng=None, sampler="paper", rel_tol=1e-9):
    """Sample ``a + rho^{-1} b rho`` for a custom split and test it against
    the interlaced ``P1``.

    ``spec(a) = custom.minus`` and ``spec(b) = custom.plus``; ``rho`` is a
    random rotation of R^p. The violation of a sample is the larger of its
    trace residual and its most negative slack, clipped at 0.
    """
    sigma = check_spectrum(sigma, name="sigma")
    if not np.array_equal(custom.sigma, sigma):
        raise ValueError("custom partition does not belong to sigma")
    rng = check_random_state(rng)
    p = custom.p
    spec = build_P1(sigma)
    tol_t, tol_i = default_tolerances(spec, rel_tol)
    a, b = np.diag(custom.minus), np.diag(custom.plus)
    if p == 1:
        nus = np.full((samples, 1), custom.minus[0] + custom.plus[0])
    else:
        mats = np.empty((samples, p, p))
        for k in range(samples):
            rho = random_rotation(p, rng, sampler)
            mats[k] = a + rho.T @ b @ rho
        mats = 0.5 * (mats + mats.transpose(0, 2, 1))
        nus, _ = eigh_jacobi_batch(mats, vectors=False)
    res, slack = membership_slack_batch(spec, nus)
    inside = (np.abs(res) <= tol_t) & (slack >= -tol_i)
    violation = np.maximum(np.abs(res), np.where(np.isfinite(slack), -slack, 0.0))
    return PartitionReport(samples, int(inside.sum()),
                           float(max(0.0, violation.max(initial=0.0))))
