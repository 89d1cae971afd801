"""scikit-learn style wrappers around the polytope tests.

The estimators take spectra as rows of ``X``. ``fit`` only builds the
inequality system (no data is learned), so the objects can be dropped into
a :class:`~sklearn.pipeline.Pipeline`, e.g. projecting 2p-spectra onto the
diagonal and then testing them against ``P1``::

    make_pipeline(DiagonalProjector(), P1Membership(sigma)).predict(gammas)
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .polytope import (
    PartitionPair,
    build_horn_polytope,
    build_P,
    build_P1,
    default_tolerances,
    is_hermitian_spectrum,
    membership_slack_batch,
    project_to_delta,
)
from .validation import DimensionError, check_spectra, check_spectrum

__all__ = ["HornPolytopeMembership", "P1Membership", "PMembership", "DiagonalProjector"]


class HornPolytopeMembership(BaseEstimator):
    """Membership in the Horn polytope of ``spec(a) = alpha``, ``spec(b) = beta``.

    Parameters
    ----------
    alpha, beta : array_like of shape (p,)
        Descending spectra of the two summands.
    rel_tol : float, default=1e-9
        Relative tolerance; see :func:`hornpoly.polytope.default_tolerances`.

    Attributes
    ----------
    spec_ : PolytopeSpec
    tol_trace_, tol_ineq_ : float
    n_features_in_ : int
    """

    def __init__(self, alpha=None, beta=None, rel_tol=1e-9):
        self.alpha = alpha
        self.beta = beta
        self.rel_tol = rel_tol

    def _build(self):
        return build_horn_polytope(self.alpha, self.beta)

    def fit(self, X=None, y=None):
        self.spec_ = self._build()
        self.tol_trace_, self.tol_ineq_ = default_tolerances(self.spec_, self.rel_tol)
        self.n_features_in_ = self.spec_.p
        if X is not None:
            check_spectra(X, n_features=self.n_features_in_)
        return self

    def _slacks(self, X):
        check_is_fitted(self, "spec_")
        X = check_spectra(X, n_features=self.n_features_in_)
        return membership_slack_batch(self.spec_, X)

    def trace_residual(self, X):
        return self._slacks(X)[0]

    def decision_function(self, X):
        """Minimum inequality slack per row (``inf`` when there are none)."""
        return self._slacks(X)[1]

    def predict(self, X):
        res, slack = self._slacks(X)
        return (np.abs(res) <= self.tol_trace_) & (slack >= -self.tol_ineq_)

    def score(self, X, y=None):
        """Fraction of rows inside the polytope."""
        return float(np.mean(self.predict(X)))


class P1Membership(HornPolytopeMembership):
    """Membership in ``P1`` for a spectrum ``sigma`` of length 2p.

    ``partition`` is ``"interlaced"`` or the 1-based positions of ``sigma``
    that make up the first summand.
    """

    def __init__(self, sigma=None, partition="interlaced", rel_tol=1e-9):
        self.sigma = sigma
        self.partition = partition
        self.rel_tol = rel_tol

    def _build(self):
        sigma = check_spectrum(self.sigma, name="sigma")
        if isinstance(self.partition, str):
            if self.partition != "interlaced":
                raise ValueError(f"unknown partition {self.partition!r}")
            pair = PartitionPair.interlaced(sigma)
        else:
            pair = PartitionPair.from_indices(sigma, self.partition)
        return build_P1(sigma, pair)


class PMembership(HornPolytopeMembership):
    """Membership in the 2p-dimensional polytope ``P`` for two copies of ``sigma``."""

    def __init__(self, sigma=None, rel_tol=1e-9):
        self.sigma = sigma
        self.rel_tol = rel_tol

    def _build(self):
        return build_P(self.sigma)


class DiagonalProjector(TransformerMixin, BaseEstimator):
    """Orthogonal projection of 2p-spectra onto the doubled spectra.

    Maps each row ``(g1, ..., g2p)`` to ``((g1+g2)/2, ..., (g2p-1+g2p)/2)``.
    """

    def fit(self, X, y=None):
        X = check_spectra(X)
        if X.shape[1] % 2:
            raise DimensionError(f"spectra must have even length, got {X.shape[1]}")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        return project_to_delta(check_spectra(X, n_features=self.n_features_in_))

    def hermitian_mask(self, X, tol):
        """Rows that lie within ``tol`` of the doubled spectra."""
        check_is_fitted(self, "n_features_in_")
        return is_hermitian_spectrum(check_spectra(X, n_features=self.n_features_in_), tol)
