import io

import numpy as np
import pytest

from hornpoly.eigen import eigenvalues_sym
from hornpoly.experiments import (
    ExperimentConfig,
    SampleRecord,
    iter_samples,
    run_adapted,
    run_experiment,
    run_imF,
    run_projection,
    summarize,
)
from hornpoly.polytope import is_hermitian_spectrum, project_to_delta


def csv_text(kind, cfg, threads=1):
    buf = io.StringIO()
    run_experiment(kind, cfg, buf, threads=threads)
    return buf.getvalue()


def record(inside, slack=0.1, active=()):
    return SampleRecord(0, np.zeros(2), np.zeros(1), 0.0, slack, inside, True, active)


def test_config_validation(sigma):
    with pytest.raises(ValueError):
        ExperimentConfig(sigma, samples=0)
    with pytest.raises(ValueError):
        ExperimentConfig(sigma, epsilon=-1.0)
    with pytest.raises(ValueError):
        ExperimentConfig(sigma, sampler="uniform")
    with pytest.raises(ValueError):
        ExperimentConfig(sigma[:5])
    cfg = ExperimentConfig(sigma)
    assert cfg.p == 3 and cfg.epsilon == pytest.approx(1e-3)


def test_config_from_matrix(sigma):
    rng = np.random.default_rng(0)
    Q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    cfg = ExperimentConfig(None, S0=Q @ np.diag(sigma) @ Q.T)
    np.testing.assert_allclose(cfg.sigma, sigma, atol=1e-14)


@pytest.mark.parametrize("kind", ["imf", "projection", "adapted"])
def test_single_sample_reproducible(sigma, kind):
    cfg = ExperimentConfig(sigma, samples=1, seed=123)
    assert csv_text(kind, cfg) == csv_text(kind, cfg)
    assert csv_text(kind, cfg).count("\n") == 2


def test_scalar_S0_imf():
    c = 0.3
    cfg = ExperimentConfig(np.full(6, c), samples=50, seed=1)
    for rec in iter_samples("imf", cfg):
        np.testing.assert_allclose(rec.nu, [2 * c] * 3, atol=1e-14)
        assert rec.inside


def test_identity_rotation_projection(sigma):
    gamma = eigenvalues_sym(2 * np.diag(sigma))
    np.testing.assert_allclose(gamma, 2 * sigma)
    np.testing.assert_allclose(project_to_delta(gamma),
                               [sigma[0] + sigma[1], sigma[2] + sigma[3], sigma[4] + sigma[5]])


def test_identity_rho_adapted(sigma):
    nu = eigenvalues_sym(np.diag(sigma[0::2]) + np.diag(sigma[1::2]))
    np.testing.assert_allclose(nu, sigma[0::2] + sigma[1::2])


def test_runs_contained(sigma):
    cfg = ExperimentConfig(sigma, samples=3000, seed=5)
    for run in (run_imF, run_projection, run_adapted):
        rep = run(cfg)
        assert rep.count_inside == rep.samples == 3000
        assert rep.worst_trace_residual <= 1e-10
        assert rep.worst_min_slack >= -1e-9


def test_imf_spectra_paired_and_traced(sigma):
    cfg = ExperimentConfig(sigma, samples=2000, seed=17)
    for rec in iter_samples("imf", cfg):
        assert is_hermitian_spectrum(rec.spectrum, 1e-6)
        assert np.all(np.diff(rec.spectrum) <= 0)
        assert abs(rec.spectrum.sum() - 2 * sigma.sum()) <= 1e-10


@pytest.mark.parametrize("kind", ["imf", "projection", "adapted"])
def test_thread_count_does_not_change_output(sigma, kind):
    cfg = ExperimentConfig(sigma, samples=3000, seed=77)
    assert csv_text(kind, cfg, threads=1) == csv_text(kind, cfg, threads=3)


def test_chunking_does_not_change_records(sigma):
    cfg = ExperimentConfig(sigma, samples=50, seed=2)
    a = list(iter_samples("projection", cfg, chunk=7, threads=2))
    b = list(iter_samples("projection", cfg))
    assert [r.index for r in a] == list(range(50))
    for x, y in zip(a, b):
        assert x.spectrum.tobytes() == y.spectrum.tobytes()


def test_haar_sampler_contained(sigma):
    rep = run_projection(ExperimentConfig(sigma, samples=2000, seed=3, sampler="haar"))
    assert rep.all_inside


def test_p1_experiments():
    cfg = ExperimentConfig(np.array([0.8, 0.3]), samples=20, seed=0)
    for run in (run_imF, run_projection, run_adapted):
        rep = run(cfg)
        assert rep.all_inside and rep.worst_min_slack == np.inf


def test_csv_format(sigma):
    text = csv_text("projection", ExperimentConfig(sigma, samples=3, seed=0))
    header, first = text.splitlines()[:2]
    assert header.split(",")[:2] == ["index", "gamma_1"]
    assert header.endswith("trace_residual,min_slack,inside,hermitian_close")
    fields = first.split(",")
    assert len(fields) == 1 + 6 + 3 + 4
    assert float(fields[1]) == float(format(float(fields[1]), ".17g"))


def test_summarize_examples():
    rep = summarize([record(True)])
    assert rep.count_inside == 1 and rep.samples == 1
    rep = summarize([record(True), record(False, slack=-0.5)])
    assert rep.count_inside == 1 and rep.worst_min_slack == -0.5
    rep = summarize([record(True, active=(0, 2)), record(True, active=(2,))], n_inequalities=3)
    assert rep.tight_counts == [1, 0, 2]
    with pytest.raises(ValueError):
        summarize([])


@pytest.mark.slow
def test_adapted_and_imf_cover_same_box(sigma):
    cfg = ExperimentConfig(sigma, samples=25000, seed=7)
    A = np.array([r.nu for r in iter_samples("adapted", cfg)])
    B = np.array([r.nu for r in iter_samples("imf", cfg)])
    span = np.maximum(A.max(0), B.max(0)) - np.minimum(A.min(0), B.min(0))
    assert np.all(np.abs(A.min(0) - B.min(0)) <= 0.02 * span)
    assert np.all(np.abs(A.max(0) - B.max(0)) <= 0.02 * span)
