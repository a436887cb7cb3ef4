import io
import subprocess
import sys

import pytest

from uffd.bitmatrix import CodeMatrix
from uffd.cli import UsageError, load_matrix, main, parse_args, run, save_matrix

FANO = CodeMatrix.from_columns(
    ["1101000", "0110100", "0011010", "0001101", "1000110", "0100011", "1010001"]
)


def invoke(argv):
    cfg = parse_args(argv)
    out, err = io.StringIO(), io.StringIO()
    code = run(cfg, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def fano_file(tmp_path):
    path = tmp_path / "fano.txt"
    save_matrix(FANO, path)
    return str(path)


def test_parse_examples(fano_file):
    cfg = parse_args(["bound", "--mode", "optimize"])
    assert (cfg.command, cfg.mode) == ("bound", "optimize")
    cfg = parse_args(["decode", "--matrix", fano_file, "--outcome", "1100000", "--d", "2", "--algo", "uffd"])
    assert (cfg.command, cfg.algo, cfg.d) == ("decode", "uffd", 2)


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--matrix", "{m}", "--d", "0"],
        ["decode", "--matrix", "{m}", "--outcome", "10x", "--d", "2"],
        ["simulate", "--matrix", "{m}", "--d", "2", "--threads", "0"],
        ["construct", "--t", "10", "--p", "1.5", "--n", "4", "--out", "x.txt"],
        ["construct", "--t", "10", "--p", "0.3", "--n", "4", "--seed", str(1 << 64), "--out", "x.txt"],
        ["bound", "--mode", "eval"],
        ["bound", "--mode", "eval", "--p", "0.3", "--alpha", "0.7"],
        ["bound", "--mode", "probs", "--t", "4"],
        ["bound", "--mode", "known", "--d", "1"],
        ["verify", "--matrix", "{m}"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv, fano_file):
    with pytest.raises(UsageError) as info:
        parse_args([a.format(m=fano_file) for a in argv])
    assert info.value.code == 64


def test_missing_file_exit_66(tmp_path, capsys):
    assert main(["verify", "--matrix", str(tmp_path / "nope.txt"), "--d", "2"]) == 66
    assert "not found" in capsys.readouterr().err


def test_malformed_matrix_exit_65(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2 3\n010\n0101\n")
    code, _, err = invoke(["verify", "--matrix", str(path), "--d", "1"])
    assert code == 65 and "line 3" in err


def test_round_trip_files(tmp_path):
    path = tmp_path / "i5.txt"
    save_matrix(CodeMatrix.identity(5), path)
    assert load_matrix(path) == CodeMatrix.identity(5)
    text = path.read_bytes()
    save_matrix(load_matrix(path), path)
    assert path.read_bytes() == text


def test_verify_all(fano_file):
    code, out, _ = invoke(["verify", "--matrix", fano_file, "--d", "2", "--property", "all"])
    assert code == 0
    assert out.splitlines() == [
        "union_free(d=2): holds", "disjunctive(d=2): holds", "ssm(d=2): holds", "uffd(d=2): holds",
    ]


def test_verify_failure_prints_witness(tmp_path):
    path = tmp_path / "eq.txt"
    save_matrix(CodeMatrix.from_columns(["1100", "1100", "0011"]), path)
    code, out, _ = invoke(["verify", "--matrix", str(path), "--d", "1", "--property", "union-free"])
    assert code == 1
    assert out.strip() == "union_free(d=1): fails D_1={1} D_2={2}"


def test_verify_ssm_enumerate_budget(tmp_path, fano_file):
    code, out, _ = invoke(["verify", "--matrix", fano_file, "--d", "2", "--property", "ssm", "--ssm-method", "enumerate"])
    assert (code, out) == (0, "ssm(d=2): holds\n")
    path = tmp_path / "ones.txt"
    save_matrix(CodeMatrix.from_columns(["111"] * 6), path)
    code, _, err = invoke(["verify", "--matrix", str(path), "--d", "2", "--property", "ssm",
                           "--ssm-method", "enumerate", "--max-subsets", "16"])
    assert code == 70 and "resource limit" in err


def test_decode_statuses(tmp_path, fano_file):
    code, out, _ = invoke(["decode", "--matrix", fano_file, "--outcome", "1111100", "--d", "2"])
    assert (code, out) == (0, "1 2\n")
    code, out, _ = invoke(["decode", "--matrix", fano_file, "--outcome", "1000000", "--d", "2"])
    assert (code, out) == (3, "inconsistent\n")
    path = tmp_path / "eq.txt"
    save_matrix(CodeMatrix.from_columns(["1100", "1100", "0011"]), path)
    code, out, _ = invoke(["decode", "--matrix", str(path), "--outcome", "1100", "--d", "1", "--algo", "brute"])
    assert (code, out) == (2, "ambiguous\n")
    code, _, err = invoke(["decode", "--matrix", fano_file, "--outcome", "11", "--d", "2"])
    assert code == 64 and "length" in err


def test_simulate_output(fano_file):
    code, out, _ = invoke(["simulate", "--matrix", fano_file, "--d", "2", "--trials", "5", "--seed", "3"])
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 5 + 5
    assert "success_rate=1.000000" in lines


def test_bound_modes(tmp_path):
    trace = tmp_path / "trace.csv"
    code, out, _ = invoke(["bound", "--mode", "optimize", "--trace", str(trace)])
    kv = dict(line.split("=") for line in out.splitlines())
    assert code == 0
    assert abs(float(kv["rate"]) - 0.3017) < 5e-4
    assert abs(float(kv["p_star"]) - 0.3105) < 5e-3
    rows = trace.read_text().splitlines()
    assert len(rows) == 200 and len(rows[0].split(",")) == 3

    code, out, _ = invoke(["bound", "--mode", "probs", "--t", "2", "--w", "1"])
    assert "P0=3/8" in out.splitlines()
    code, out, _ = invoke(["bound", "--mode", "known", "--d", "2"])
    assert "uffd_lower=0.3017" in out.splitlines()
    code, out, _ = invoke(["bound", "--mode", "eval", "--p", "0.3105"])
    kv = dict(line.split("=") for line in out.splitlines())
    assert abs(float(kv["rate"]) - 0.3017) < 5e-4
    code, out, _ = invoke(["bound", "--mode", "eval", "--p", "0.3", "--alpha", "0.45"])
    assert code == 0 and out.startswith("p=0.3\nalpha=0.45\n")


def test_construct_writes_matrix_and_report(tmp_path):
    out_path = tmp_path / "code.txt"
    code, out, _ = invoke(["construct", "--t", "40", "--p", "0.31", "--n", "16", "--seed", "3", "--out", str(out_path)])
    assert code == 0
    C = load_matrix(out_path)
    report = (tmp_path / "code.txt.report").read_text()
    assert report == out
    assert f"n_final={C.n}" in report.splitlines()
    code, out, _ = invoke(["verify", "--matrix", str(out_path), "--d", "2", "--property", "uffd"])
    assert code == 0


def test_construct_retries_exhausted_writes_nothing(tmp_path):
    out_path = tmp_path / "code.txt"
    code, _, err = invoke(
        ["construct", "--t", "8", "--p", "0.5", "--n", "2", "--max-retries", "1", "--out", str(out_path)]
    )
    assert code == 4 and "attempts" in err
    assert not out_path.exists()


def test_validation_failure_writes_nothing(tmp_path):
    out_path = tmp_path / "code.txt"
    assert main(["construct", "--t", "8", "--p", "2", "--n", "4", "--out", str(out_path)]) == 64
    assert list(tmp_path.iterdir()) == []


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "uffd", "bound", "--mode", "known", "--d", "10"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "asymptotic_only=1" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "uffd", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
