"""Exit criteria for the package, one test per criterion.

Each test appends a PASS/FAIL line that is printed in the terminal summary.
"""

import csv
import json
import time
from contextlib import contextmanager

import numpy as np
import pytest

from hornpoly import horn
from hornpoly.cli import main
from hornpoly.eigen import eigenvalues_sym
from hornpoly.mechanics import frequency_map, relative_equilibrium_momentum
from hornpoly.polytope import PartitionPair, compare_partitions, is_hermitian_spectrum
from hornpoly.sampling import (
    adapted_structure,
    random_hermitian_structure,
    random_rotation_product,
    standard_structure,
)
from oracles import brute_T

SIGMA = np.array([13.0, 8, 5, 3, 2, 1]) / 32
PAPER_ARGS = ["--spectrum", "13,8,5,3,2,1", "--scale", "0.03125", "--seed", "20251018"]


@contextmanager
def criterion(log, number, title):
    detail = {}
    t0 = time.perf_counter()
    try:
        yield detail
    except BaseException as exc:
        log.append(f"[{number}] FAIL  {title}: {exc!s:.200}")
        raise
    else:
        extra = ", ".join(f"{k}={v}" for k, v in detail.items())
        log.append(f"[{number}] PASS  {title} ({time.perf_counter() - t0:.1f}s; {extra})")


def _clear_caches():
    horn.generate_T.cache_clear()
    horn._t_rank.cache_clear()


def _run_cli(tmp_path_factory, command, n, threads):
    d = tmp_path_factory.mktemp(f"{command}-{threads}")
    out, rep = d / "samples.csv", d / "report.json"
    t0 = time.perf_counter()
    code = main([command, *PAPER_ARGS, "--n", str(n), "--threads", str(threads),
                 "--out", str(out), "--report", str(rep)])
    elapsed = time.perf_counter() - t0
    return code, out, json.loads(rep.read_text()), elapsed


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def imf_run(tmp_path_factory):
    return _run_cli(tmp_path_factory, "sample-imf", 25000, 1)


@pytest.fixture(scope="module")
def proj_run(tmp_path_factory):
    return _run_cli(tmp_path_factory, "sample-proj", 50000, 1)


def _check_containment(rows, n, report):
    assert len(rows) == n
    assert report["count_inside"] == n
    nu = np.array([[float(r[f"nu_{k}"]) for k in (1, 2, 3)] for r in rows])
    residual = np.array([float(r["trace_residual"]) for r in rows])
    slack = np.array([float(r["min_slack"]) for r in rows])
    assert np.abs(residual).max() <= 1e-10
    assert np.abs(nu.sum(axis=1) - 1.0).max() <= 1e-10
    assert slack.min() >= -1e-9
    assert all(r["inside"] == "1" for r in rows)
    return float(np.abs(residual).max()), float(slack.min())


def test_c1_triple_tables_match_brute_force(acceptance_log):
    with criterion(acceptance_log, 1, "generate_T equals brute-force oracle, p <= 4") as d:
        _clear_caches()
        t0 = time.perf_counter()
        for p in range(1, 5):
            table = horn.generate_T(p)
            for r in range(1, p + 1):
                assert [(t.I, t.J, t.K) for t in table[r]] == brute_T(p, r)
        assert len(horn.generate_T(2)[1]) == 3
        T3 = horn.generate_T(3)
        assert len(T3[1]) + len(T3[2]) == 12
        elapsed = time.perf_counter() - t0
        assert elapsed < 10
        d["elapsed"] = f"{elapsed:.2f}s"


def test_c2_domino_theorem(acceptance_log):
    with criterion(acceptance_log, 2, "domino doubling lands in T^2p_2r, p in {1,2,3}") as d:
        _clear_caches()
        t0 = time.perf_counter()
        checked = 0
        for p in (1, 2, 3):
            rep = horn.verify_domino_theorem(p)
            assert rep.failures == []
            checked += rep.checked
        assert checked == 0 + 3 + 12
        elapsed = time.perf_counter() - t0
        assert elapsed < 60
        d["checked"] = checked


def test_c3_figure1_containment(acceptance_log, imf_run):
    with criterion(acceptance_log, 3, "25000 frequency-map samples inside P1") as d:
        code, out, report, elapsed = imf_run
        assert code == 0
        res, slack = _check_containment(_rows(out), 25000, report)
        assert elapsed < 120
        d.update(worst_residual=f"{res:.1e}", worst_slack=f"{slack:.2e}",
                 run=f"{elapsed:.1f}s")


def test_c4_figure2_containment(acceptance_log, proj_run):
    with criterion(acceptance_log, 4, "50000 projected sums inside P1") as d:
        code, out, report, elapsed = proj_run
        assert code == 0
        res, slack = _check_containment(_rows(out), 50000, report)
        assert elapsed < 300
        d.update(worst_residual=f"{res:.1e}", worst_slack=f"{slack:.2e}",
                 run=f"{elapsed:.1f}s")


def test_c5_block_identity(acceptance_log):
    with criterion(acceptance_log, 5, "adapted-structure block identity, 100 rho in SO(3)") as d:
        minus, plus = SIGMA[0::2], SIGMA[1::2]
        D = np.diag(np.concatenate([minus, plus]))
        rng = np.random.default_rng(5)
        worst = 0.0
        for _ in range(100):
            rho = random_rotation_product(3, rng)
            J = adapted_structure(3, rho).J
            big = eigenvalues_sym(D + J.T @ D @ J)
            small = np.linalg.eigvalsh(np.diag(minus) + rho.T @ np.diag(plus) @ rho)[::-1]
            worst = max(worst, np.abs(big - np.repeat(small, 2)).max())
        assert worst <= 1e-9
        d["max_error"] = f"{worst:.1e}"


def test_c6_pairing(acceptance_log, imf_run):
    with criterion(acceptance_log, 6, "frequency-map spectra are hermitian at tol 1e-6") as d:
        _, out, _, _ = imf_run
        gammas = np.array([[float(r[f"gamma_{k}"]) for k in range(1, 7)] for r in _rows(out)])
        assert is_hermitian_spectrum(gammas, 1e-6).all()
        R = random_rotation_product(6, 31)
        S = R @ np.diag(SIGMA) @ R.T
        J0 = standard_structure(3)
        C = S - J0 @ S @ J0
        assert is_hermitian_spectrum(eigenvalues_sym(C), 1e-6)
        E = np.zeros((6, 6))
        E[0, 0] = 0.05  # does not commute with J0
        gamma = eigenvalues_sym(C + E)
        assert not is_hermitian_spectrum(gamma, 1e-6)
        d["perturbed_gap"] = f"{np.abs(gamma[0::2] - gamma[1::2]).max():.1e}"


def test_c7_angular_momentum_link(acceptance_log):
    with criterion(acceptance_log, 7, "spec(-C^2) equals doubled squared frequencies") as d:
        S0 = np.diag(SIGMA)
        worst = 0.0
        for seed in range(100):
            J = random_hermitian_structure(3, seed)
            C = relative_equilibrium_momentum(S0, J)
            lhs = eigenvalues_sym(-C @ C)
            rhs = np.repeat(frequency_map(J, S0) ** 2, 2)
            worst = max(worst, np.abs(lhs - rhs).max())
        assert worst <= 1e-8
        d["max_error"] = f"{worst:.1e}"


def test_c8_partition_extremality(acceptance_log):
    with criterion(acceptance_log, 8, "split {s1,s2,s3}|{s4,s5,s6} stays inside interlaced P1") as d:
        custom = PartitionPair.from_indices(SIGMA, [1, 2, 3])
        rep = compare_partitions(SIGMA, custom, 10000, rng=8)
        assert rep.fraction == 1.0
        assert rep.max_violation <= 1e-9
        d.update(fraction=rep.fraction, max_violation=f"{rep.max_violation:.1e}")


def test_c9_determinism_across_threads(acceptance_log, imf_run, proj_run, tmp_path_factory):
    with criterion(acceptance_log, 9, "same seed gives byte-identical CSV at any thread count") as d:
        for (code, out, _, _), cmd, n in ((imf_run, "sample-imf", 25000),
                                          (proj_run, "sample-proj", 50000)):
            again = _run_cli(tmp_path_factory, cmd, n, 4)
            assert again[0] == 0
            assert again[1].read_bytes() == out.read_bytes()
        d["threads"] = "1 vs 4"
