import io
import json
import subprocess
import sys

import numpy as np
import pytest

from stripcalc.cli import blob_hash, read_config, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def _body(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


@pytest.fixture
def zero_csv(tmp_path):
    x = np.arange(-256, 257) / 16
    path = tmp_path / "zero.csv"
    path.write_text("x,value\n" + "".join(f"{float(a)!r},0.0\n" for a in x))
    return path


def test_threshold_example():
    code, out, _ = call("threshold", "--variant", "poly", "--n", "3", "--delta", "1", "--p", "1")
    assert code == 0
    assert out.splitlines()[0] == "s_min = 2"


def test_weighted_norm_of_zero(zero_csv):
    code, out, _ = call("norm", "--kind", "weighted", "--sigma", "1", "--tau", "-0.5", "--q", "2",
                        "--r", "inf", "--input", str(zero_csv))
    assert code == 0
    header, row = _body(out)
    assert float(row.split(",")[header.split(",").index("value")]) == 0.0


def test_solvable_integrals_example():
    code, out, _ = call("solvable-integrals", "--Q", "2", "--alpha", "-1", "--r", "4,8,12,16")
    assert code == 0
    rows = _body(out)[1:]
    ratios = [float(r.split(",")[4]) for r in rows]
    assert len(ratios) == 4 and max(ratios) / min(ratios) < 10
    assert all(r.endswith("varpi=1/2") for r in rows)


def test_header_embeds_config_and_hash(zero_csv):
    _, out, _ = call("norm", "--kind", "bessel", "--input", str(zero_csv))
    lines = out.splitlines()
    cfg = json.loads(lines[0].removeprefix("# config: "))
    assert cfg["subcommand"] == "norm" and cfg["kind"] == "bessel"
    assert lines[1] == f"# input_sha1: {blob_hash(zero_csv.read_bytes())}"


def test_blob_hash_matches_git():
    # git hash-object of an empty file and of "hello\n"
    assert blob_hash(b"") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391"
    assert blob_hash(b"hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a"


@pytest.mark.parametrize("argv", [
    ("threshold", "--variant", "solvable", "--Q", "3", "--alpha", "-1", "--p", "4/3"),
    ("bmo", "--function", "sign", "--format", "all"),
    ("atoms", "--count", "10", "--family", "identity", "--format", "json"),
])
def test_repeat_runs_byte_identical(argv):
    a, b = call(*argv), call(*argv)
    assert a == b and a[0] == 0


@pytest.mark.parametrize("argv", [
    (),
    ("frobnicate",),
    ("threshold", "--variant", "poly", "--p", "abc"),
    ("norm", "--input", "/nonexistent/file.csv"),
    ("bmo", "--function", "nope"),
    ("parabola", "--family", "imaginary-power", "--b", "0.2", "--drift", "2", "--p", "3/2"),
])
def test_usage_errors_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1
    assert err.startswith("error:")


def test_verdict_failure_exits_2():
    # the identity is bounded, so expecting growth fails the verdict
    code, _, _ = call("operator-norm", "--family", "identity", "--domains", "4,8",
                      "--trials", "2", "--expect", "growing")
    assert code == 2
    code, _, _ = call("operator-norm", "--family", "identity", "--domains", "4,8",
                      "--trials", "2", "--expect", "stable")
    assert code == 0


def test_solvable_spread_failure_exits_2():
    code, _, _ = call("solvable-integrals", "--Q", "2", "--alpha", "-1", "--max-spread", "1.1")
    assert code == 2


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nsubcommand = threshold\nvariant = poly\nn = 1\np = 1\n")
    code, out, _ = call("--config", str(cfg))
    assert code == 0 and out.splitlines()[0] == "s_min = 1"
    code, out, _ = call("--config", str(cfg), "threshold", "--n", "3")
    assert out.splitlines()[0] == "s_min = 2"


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("subcommand = threshold\ncolour = blue\n")
    code, _, err = call("--config", str(cfg))
    assert code == 1 and "colour" in err


def test_read_config_rejects_garbage(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no equals sign here\n")
    with pytest.raises(Exception):
        read_config(str(cfg))


def test_out_directory_and_report(tmp_path):
    out = tmp_path / "reports"
    code, stdout, _ = call("atoms", "--count", "10", "--family", "identity", "--out", str(out))
    assert code == 0 and stdout == ""
    assert sorted(p.name for p in out.iterdir()) == ["atoms.csv", "atoms.json"]
    data = json.loads((out / "atoms.json").read_text())
    assert data["suite_sup"] <= 1 + 1e-8
    assert data["config"]["subcommand"] == "atoms"

    code, rep, _ = call("report", "--inputs", str(out))
    assert code == 0
    (out / "fake.json").write_text(json.dumps({"config": {"subcommand": "x"},
                                               "verdict": "unstable"}))
    code, rep, _ = call("report", "--inputs", str(out))
    assert code == 2
    assert "fake.json,x,unstable" in rep


def test_format_json_after_subcommand():
    code, out, _ = call("threshold", "--variant", "poly", "--n", "3", "--p", "1", "--format", "json")
    assert code == 0
    assert json.loads(out)["s_min"] == "2"


def test_csv_uses_dot_decimal():
    _, out, _ = call("bmo", "--function", "one")
    value = _body(out)[1].split(",")[0]
    assert float(value) == pytest.approx(1.0) and "." in value


def test_help_documents_columns():
    out = subprocess.run([sys.executable, "-m", "stripcalc", "bmo", "--help"],
                         capture_output=True, text=True, check=True).stdout
    assert "CSV columns" in out


def test_module_entry_point_exit_code():
    proc = subprocess.run([sys.executable, "-m", "stripcalc", "nope"], capture_output=True)
    assert proc.returncode == 1
