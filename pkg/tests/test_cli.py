import json

import numpy as np
import pytest

from hornpoly.cli import main, parse_spectrum
from hornpoly.horn import generate_T, table_from_json

PAPER = ["--spectrum", "13,8,5,3,2,1", "--scale", "0.03125"]


def test_parse_spectrum():
    np.testing.assert_array_equal(parse_spectrum("13,8,5,3,2,1"), [13, 8, 5, 3, 2, 1])
    with pytest.raises(ValueError):
        parse_spectrum("")
    with pytest.raises(ValueError):
        parse_spectrum("1,a")


def test_parse_spectrum_sorts_with_warning(caplog):
    with caplog.at_level("WARNING"):
        np.testing.assert_array_equal(parse_spectrum("1,3,2"), [3, 2, 1])
    assert "not descending" in caplog.text


def test_gen_triples_round_trip(tmp_path):
    out = tmp_path / "t3.json"
    assert main(["gen-triples", "--p", "3", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [len(b["triples"]) for b in data["ranks"]] == [6, 6, 1]
    assert table_from_json(data).by_rank == generate_T(3).by_rank


def test_verify_domino(capsys):
    assert main(["verify-domino", "--p", "3"]) == 0
    assert "12 checked, 0 failures" in capsys.readouterr().out


def test_sample_imf(tmp_path):
    out, rep = tmp_path / "imf.csv", tmp_path / "imf.json"
    code = main(["sample-imf", *PAPER, "--n", "500", "--seed", "42",
                 "--out", str(out), "--report", str(rep)])
    assert code == 0
    assert len(out.read_text().splitlines()) == 501
    report = json.loads(rep.read_text())
    assert report["count_inside"] == 500 and report["config"]["seed"] == 42


def test_sample_threads_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path, threads in ((a, "1"), (b, "4")):
        assert main(["sample-proj", *PAPER, "--n", "2500", "--seed", "9",
                     "--threads", threads, "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sample_from_matrix(tmp_path):
    m = tmp_path / "s0.txt"
    np.savetxt(m, np.diag([13, 8, 5, 3, 2, 1]) / 32)
    assert main(["sample-adapted", "--matrix", str(m), "--n", "100"]) == 0


def test_check_exit_codes(capsys):
    assert main(["check", *PAPER, "--point", "0.5,0.3125,0.1875"]) == 0
    assert main(["check", *PAPER, "--point", "1,0,0"]) == 1
    two_sigma = ",".join(str(2 * x / 32) for x in [13, 8, 5, 3, 2, 1])
    assert main(["check", *PAPER, "--point", two_sigma]) == 0
    assert "hermitian=False" in capsys.readouterr().out


def test_compare_partitions(capsys):
    assert main(["compare-partitions", *PAPER, "--split", "1,2,3", "--n", "300"]) == 0
    assert "1.000000" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["sample-imf", "--bogus"],
    ["sample-imf", "--spectrum", ""],
    ["sample-imf", "--spectrum", "1,x"],
    ["sample-imf"],
    ["sample-imf", "--spectrum", "3,2,1"],
    ["sample-imf", "--spectrum", "4,3,2,1", "--p", "3"],
    ["gen-triples"],
    ["check", *PAPER, "--point", "1,0"],
    ["compare-partitions", *PAPER, "--split", "1,1,2"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# paper spectrum\nspectrum = 13,8,5,3,2,1\nscale = 0.03125\nn = 40\n"
                   "seed = 1\n")
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sample-imf", "--config", str(cfg), "--out", str(out1)]) == 0
    assert len(out1.read_text().splitlines()) == 41
    assert main(["sample-imf", "--config", str(cfg), "--n", "10", "--out", str(out2)]) == 0
    assert len(out2.read_text().splitlines()) == 11


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = red\n")
    assert main(["sample-imf", "--config", str(cfg)]) == 2
