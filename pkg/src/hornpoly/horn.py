"""Horn index triples: the candidate sets U^p_r, the recursive sets T^p_r,
and the domino doubling map.

Index sets are 1-based tuples of strictly increasing integers. All of the
combinatorics is exact integer arithmetic.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

__all__ = [
    "HornTriple",
    "TripleTable",
    "generate_U",
    "generate_T",
    "horn_inequality_slack",
    "domino_double",
    "verify_domino_theorem",
    "DominoReport",
    "table_to_json",
    "table_from_json",
]


def _check_index_set(s, p, name):
    s = tuple(int(x) for x in s)
    if any(a >= b for a, b in zip(s, s[1:])):
        raise ValueError(f"{name}={s} is not strictly increasing")
    if s and (s[0] < 1 or s[-1] > p):
        raise ValueError(f"{name}={s} is not contained in 1..{p}")
    return s


def _triangular(r):
    return r * (r + 1) // 2


@dataclass(frozen=True, order=True)
class HornTriple:
    """Index sets ``(I, J, K)`` of equal size ``r`` inside ``{1, ..., p}``."""

    I: tuple
    J: tuple
    K: tuple
    p: int = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "I", _check_index_set(self.I, self.p, "I"))
        object.__setattr__(self, "J", _check_index_set(self.J, self.p, "J"))
        object.__setattr__(self, "K", _check_index_set(self.K, self.p, "K"))
        if not len(self.I) == len(self.J) == len(self.K):
            raise ValueError("I, J and K must have the same cardinality")
        if len(self.I) > self.p:
            raise ValueError(f"cardinality {len(self.I)} exceeds p={self.p}")

    @property
    def r(self):
        return len(self.I)

    def in_U(self):
        """Exact check of ``sum(I) + sum(J) == sum(K) + r(r+1)/2``."""
        return sum(self.I) + sum(self.J) == sum(self.K) + _triangular(self.r)

    def swapped(self):
        return HornTriple(self.J, self.I, self.K, self.p)

    def as_lists(self):
        return [list(self.I), list(self.J), list(self.K)]


def generate_U(p, r):
    """All triples of ``r``-subsets of ``{1..p}`` satisfying the sum identity.

    Returned in lexicographic order of ``(I, J, K)``.
    """
    if not 1 <= r <= p:
        raise ValueError(f"need 1 <= r <= p, got r={r}, p={p}")
    subsets = list(combinations(range(1, p + 1), r))
    by_sum = defaultdict(list)
    for K in subsets:
        by_sum[sum(K)].append(K)
    shift = _triangular(r)
    out = []
    for I in subsets:
        for J in subsets:
            for K in by_sum.get(sum(I) + sum(J) - shift, ()):
                out.append(HornTriple(I, J, K, p))
    return out


@lru_cache(maxsize=None)
def _t_rank(p, r):
    # T^p_r as a tuple of (I, J, K) tuples, lexicographically sorted
    candidates = [(t.I, t.J, t.K) for t in generate_U(p, r)]
    if r == 1 or not candidates:
        return tuple(candidates)
    I = np.array([c[0] for c in candidates], dtype=np.int64)
    J = np.array([c[1] for c in candidates], dtype=np.int64)
    K = np.array([c[2] for c in candidates], dtype=np.int64)
    keep = np.ones(len(candidates), dtype=bool)
    for s in range(1, r):
        inner = _t_rank(r, s)
        if not inner:
            continue
        F = np.array([t[0] for t in inner]) - 1
        G = np.array([t[1] for t in inner]) - 1
        H = np.array([t[2] for t in inner]) - 1
        # lhs[c, q] = sum_f i_f + sum_g j_g for candidate c and inner triple q
        lhs = I[:, F].sum(axis=2) + J[:, G].sum(axis=2)
        rhs = K[:, H].sum(axis=2) + _triangular(s)
        keep &= (lhs <= rhs).all(axis=1)
    return tuple(c for c, k in zip(candidates, keep) if k)


@dataclass(frozen=True)
class TripleTable:
    """The sets ``T^p_r`` for ``1 <= r <= p``, keyed by rank."""

    p: int
    by_rank: dict

    def __getitem__(self, r):
        return self.by_rank[r]

    def inequality_triples(self):
        """All triples of rank ``r < p``; these define the Horn inequalities."""
        return [t for r in range(1, self.p) for t in self.by_rank[r]]

    def counts(self):
        return {r: len(ts) for r, ts in self.by_rank.items()}

    def __contains__(self, t):
        return t.p == self.p and t in set(self.by_rank.get(t.r, ()))


@lru_cache(maxsize=None)
def generate_T(p):
    """Build the table of admissible Horn triples in ambient size ``p``.

    A triple of ``U^p_r`` with ``r >= 2`` is admissible when, for every
    ``s < r`` and every admissible ``(F, G, H)`` of ambient size ``r`` and
    rank ``s``, the sub-sums of its ordered entries satisfy
    ``sum_F i_f + sum_G j_g <= sum_H k_h + s(s+1)/2``. Tables for smaller
    ambient sizes are memoized and shared.
    """
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    by_rank = {
        r: tuple(HornTriple(I, J, K, p) for I, J, K in _t_rank(p, r))
        for r in range(1, p + 1)
    }
    return TripleTable(p, by_rank)


def horn_inequality_slack(t, alpha, beta, gamma):
    """``sum_I alpha + sum_J beta - sum_K gamma``; nonnegative when the
    inequality for ``t`` holds."""
    alpha, beta, gamma = (np.asarray(x, dtype=float) for x in (alpha, beta, gamma))
    for name, x in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if x.shape != (t.p,):
            raise ValueError(f"{name} must have length {t.p}, got {x.shape}")
    idx = lambda s: np.asarray(s, dtype=int) - 1  # noqa: E731
    return float(alpha[idx(t.I)].sum() + beta[idx(t.J)].sum() - gamma[idx(t.K)].sum())


def domino_double(t):
    """Map a triple of ``U^p_r`` to the doubled triple in ``U^{2p}_{2r}``.

    ``I2 = J2 = {2i-1 : i in I} | {2j : j in J}`` and
    ``K2 = {2k-1, 2k : k in K}``.
    """
    if not t.in_U():
        raise ValueError(f"{t} does not satisfy the U sum identity")
    odd = {2 * i - 1 for i in t.I}
    even = {2 * j for j in t.J}
    IJ = tuple(sorted(odd | even))
    K2 = tuple(sorted({2 * k - 1 for k in t.K} | {2 * k for k in t.K}))
    doubled = HornTriple(IJ, IJ, K2, 2 * t.p)
    if doubled.r != 2 * t.r or not doubled.in_U():
        raise AssertionError(f"doubling {t} left U^{2 * t.p}_{2 * t.r}")
    return doubled


@dataclass
class DominoReport:
    p: int
    checked: int
    failures: list

    @property
    def ok(self):
        return not self.failures

    def summary(self):
        return f"{self.checked} checked, {len(self.failures)} failures"


def verify_domino_theorem(p):
    """Check that doubling sends every ``T^p_r`` (``r < p``) into ``T^{2p}_{2r}``.

    Counterexamples are collected in the report rather than raised.
    """
    small = generate_T(p)
    big = generate_T(2 * p)
    members = {r: set(ts) for r, ts in big.by_rank.items()}
    checked, failures = 0, []
    for t in small.inequality_triples():
        d = domino_double(t)
        checked += 1
        if d not in members[d.r]:
            failures.append((t, d))
    return DominoReport(p, checked, failures)


def table_to_json(table):
    """Serialize as ``{"p": p, "ranks": [{"p", "r", "triples": [[I], [J], [K]], ...}]}``."""
    return {
        "p": table.p,
        "ranks": [
            {"p": table.p, "r": r, "triples": [t.as_lists() for t in ts]}
            for r, ts in sorted(table.by_rank.items())
        ],
    }


def table_from_json(data):
    if isinstance(data, str):
        data = json.loads(data)
    p = int(data["p"])
    by_rank = {}
    for block in data["ranks"]:
        r = int(block["r"])
        by_rank[r] = tuple(HornTriple(I, J, K, p) for I, J, K in block["triples"])
    return TripleTable(p, by_rank)
