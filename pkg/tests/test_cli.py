"""End-to-end command-line behavior: formats, exit codes, cache handling."""

import csv
import io
import json

import pytest

from zetaforge import cli
from zetaforge.cli import EXIT_DEFECT, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main
from zetaforge.exact import PolyQ
from zetaforge.reducer import FamilySpec, FormCache
from zetaforge.series import XY_VARS, IntegrandPiece, NonCancellingDivergence, integrate_piece


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


# ---------------------------------------------------------------------------
# form: output formats and the manifest envelope
# ---------------------------------------------------------------------------


def test_form_text_output(tmp_path):
    code, out = run(["form", "--family", "zeta4", "--n", "1", "--cache-dir", str(tmp_path)])
    assert code == EXIT_OK
    assert out.startswith("zetaforge form  v")
    assert "backend=" in out.splitlines()[0]
    assert "form   -935/8 + 108*zeta(4)" in out
    assert out.rstrip().splitlines()[-1].startswith("# sha256:")


def test_form_json_output(tmp_path):
    code, out = run(
        ["form", "--family", "zeta4", "--n", "1", "--cache-dir", str(tmp_path), "--format", "json"]
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    manifest = doc["manifest"]
    assert manifest["command"] == "form"
    assert set(manifest) == {"command", "parameters", "version", "backend", "timestamp", "result_digest"}
    assert manifest["parameters"]["family"] == "zeta4"
    assert manifest["parameters"]["n"] == 1
    assert "format" not in manifest["parameters"]
    record = doc["result"]["form"]
    assert record["rational"] == "-935/8"
    assert record["zeta"] == {"4": "108"}
    assert doc["result"]["zeta_orders"] == [4]


def test_form_csv_output(tmp_path):
    code, out = run(
        ["form", "--family", "zeta2", "--n", "0", "--cache-dir", str(tmp_path), "--format", "csv"]
    )
    assert code == EXIT_OK
    lines = out.rstrip().splitlines()
    assert lines[-1].startswith("# sha256:")
    rows = list(csv.reader(lines[:-1]))
    assert rows[0] == ["family", "n", "rational", "zeta", "value"]
    assert rows[1][0] == "zeta2" and rows[1][3] == "2:1"


def test_formats_agree_on_digest(tmp_path):
    args = ["form", "--family", "zeta4", "--n", "2", "--cache-dir", str(tmp_path)]
    _, js = run(args + ["--format", "json"])
    _, cs = run(args + ["--format", "csv"])
    digest = json.loads(js)["manifest"]["result_digest"]
    assert cs.rstrip().splitlines()[-1] == f"# {digest}"


# ---------------------------------------------------------------------------
# cache behavior
# ---------------------------------------------------------------------------


def test_cache_file_is_manifest_free_and_stable(tmp_path):
    args = ["form", "--family", "zeta4", "--n", "1", "--cache-dir", str(tmp_path)]
    run(args)
    path = FormCache(tmp_path).path_for(FamilySpec("zeta4", 1))
    first = path.read_bytes()
    run(args)
    assert path.read_bytes() == first
    record = json.loads(first)
    assert set(record) == {"family", "n", "rational", "zeta", "finite"}


def test_cache_env_variable(tmp_path, monkeypatch):
    target = tmp_path / "envcache"
    monkeypatch.setenv(cli.CACHE_ENV, str(target))
    code, _ = run(["form", "--family", "zeta2", "--n", "0"])
    assert code == EXIT_OK
    assert FormCache(target).path_for(FamilySpec("zeta2", 0)).exists()


def test_tampered_cache_fails_verify(tmp_path):
    run(["form", "--family", "zeta4", "--n", "1", "--cache-dir", str(tmp_path)])
    path = FormCache(tmp_path).path_for(FamilySpec("zeta4", 1))
    record = json.loads(path.read_text())
    record["rational"] = "-935/7"
    path.write_text(json.dumps(record))

    code, out = run(["verify", "--digits", "30", "--cache-dir", str(tmp_path)])
    assert code == EXIT_MISMATCH
    assert "FAIL  form zeta4 n=1" in out
    assert "verify: MISMATCH" in out


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_passes(tmp_path):
    code, out = run(["verify", "--digits", "30", "--cache-dir", str(tmp_path)])
    assert code == EXIT_OK
    assert "verify: all checks passed" in out
    assert "(zeta(3) sign adjudicated by oracles)" in out
    assert "FAIL" not in out


def test_verify_verdicts_stable_across_digits(tmp_path):
    verdicts = []
    for digits in ("30", "50"):
        _, out = run(["verify", "--digits", digits, "--cache-dir", str(tmp_path), "--format", "json"])
        doc = json.loads(out)
        verdicts.append([(c["name"], c["ok"]) for c in doc["result"]["checks"]])
    assert verdicts[0] == verdicts[1]


def test_verify_with_monte_carlo(tmp_path):
    code, out = run(
        ["verify", "--digits", "30", "--cache-dir", str(tmp_path),
         "--samples", "200000", "--seed", "7"]
    )
    assert code == EXIT_OK
    assert "monte-carlo zeta4 n=1" in out


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------


def test_usage_errors(capsys):
    assert run(["form", "--family", "zeta9"])[0] == EXIT_USAGE
    assert run(["form", "--digits", "0"])[0] == EXIT_USAGE
    assert run(["form", "--digits", "201"])[0] == EXIT_USAGE
    assert run([])[0] == EXIT_USAGE
    assert "usage error" in capsys.readouterr().err


def test_depth_out_of_range_is_usage(tmp_path):
    code, _ = run(["form", "--n", "13", "--cache-dir", str(tmp_path)])
    assert code == EXIT_USAGE


def test_computation_defect_exit(tmp_path, monkeypatch, capsys):
    x = PolyQ.variable(XY_VARS, "x")
    try:
        integrate_piece(IntegrandPiece(x, t=2, k=0))
    except NonCancellingDivergence as exc:
        caught = exc

    def explode(spec, cache=None):
        raise caught

    monkeypatch.setattr(cli, "compute_form", explode)
    code, _ = run(["form", "--cache-dir", str(tmp_path)])
    assert code == EXIT_DEFECT
    assert "computation defect" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# the report subcommands
# ---------------------------------------------------------------------------


def test_bounds_json():
    code, out = run(["bounds", "--digits", "30", "--format", "json"])
    assert code == EXIT_OK
    certs = json.loads(out)["result"]["certificates"]
    assert [c["family"] for c in certs] == ["zeta2", "zeta3", "zeta4"]
    assert all(c["satisfied"] for c in certs)


def test_lcm_small_run_json():
    code, out = run(["lcm", "--nmax", "1000", "--exact-upto", "1000", "--format", "json"])
    assert code == EXIT_OK
    result = json.loads(out)["result"]
    assert result["exact_ok"] is True
    assert result["max_ratio_at"] == 113


def test_denoms_text(tmp_path):
    code, out = run(["denoms", "--family", "zeta4", "--nmax", "2", "--cache-dir", str(tmp_path)])
    assert code == EXIT_OK
    assert "> 1: wide denominators prove nothing" in out
    assert "narrow fails at n in [1, 2]" in out


def test_decay_text(tmp_path):
    code, out = run(
        ["decay", "--family", "zeta2", "--nmax", "3", "--digits", "30", "--cache-dir", str(tmp_path)]
    )
    assert code == EXIT_OK
    assert "all within bound: True" in out
