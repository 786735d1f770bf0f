import json

import pytest

from bianchi_modl.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_h1_gamma0_lambda(capsys):
    code, out, _ = run(capsys, "h1", "--d", "2", "--ell", "11", "--level", "G0:3+w")
    rep = json.loads(out)
    assert code == 0 and rep["h1_dim"] == 2
    assert rep["spec"]["level"] == "G0:3+w" and rep["spec"]["weight"] == "triv"
    for key in ("field", "ell", "level", "weight", "h1_dim", "operators", "eigensystems", "matches"):
        assert key in rep


def test_usage_errors(capsys):
    assert run(capsys, "h1", "--d", "5", "--ell", "11")[0] == 2
    assert run(capsys, "h1", "--d", "2", "--ell", "5")[0] == 2  # inert
    assert run(capsys, "h1", "--d", "2", "--ell", "11", "--weight", "E:11,0")[0] == 2
    assert run(capsys, "h1", "--d", "2", "--ell", "11", "--level", "X:1")[0] == 2
    assert run(capsys, "h1", "--ell", "11", "--bogus")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_eigensystems_deterministic_and_cached(capsys, caplog, tmp_path):
    args = ["eigensystems", "--d", "2", "--ell", "11", "--weight", "E:10,10,0,0", "--primes-up-to", "20"]
    code, a, _ = run(capsys, *args)
    assert code == 0
    code, b, _ = run(capsys, *args, "--cache-dir", str(tmp_path))
    code, c, _ = run(capsys, *args, "--cache-dir", str(tmp_path))  # cache hit
    code, d, _ = run(capsys, *args, "--cache-dir", str(tmp_path), "--threads", "2")
    assert a == c == d
    rep = json.loads(a)
    assert rep["h1_dim"] == 3 and len(rep["eigensystems"]) == 3
    assert [op["alpha"] for op in rep["operators"]] == ["w", "1+w", "1-w", "3+2w", "3-2w", "1+3w", "1-3w"]
    assert {"values", "ext_degree", "multiplicity"} <= set(rep["eigensystems"][0])
    # corrupt the cache entry: detected and recomputed
    (entry,) = list(tmp_path.glob("space-*.json"))
    entry.write_text(entry.read_text().replace('"h1_dim":3', '"h1_dim":4'))
    code, e, err = run(capsys, *args, "--cache-dir", str(tmp_path))
    assert code == 0 and e == a and "hash verification" in err + caplog.text


def test_compare_reports_matches(capsys):
    code, out, _ = run(
        capsys, "eigensystems", "--d", "2", "--ell", "11", "--weight", "E:10,10,0,0", "--primes-up-to", "20", "--compare", "G0:11"
    )
    rep = json.loads(out)
    assert {m["source"] for m in rep["matches"]} == {0, 1, 2}
    assert all(m["twist"] == [0, 0] for m in rep["matches"])


def test_table_and_csv(capsys):
    code, out, _ = run(capsys, "eigensystems", "--d", "2", "--ell", "11", "--weight", "E:10,10", "--primes-up-to", "3", "--table")
    assert "dim 3" in out and "1+w" in out
    code, out, _ = run(capsys, "eigensystems", "--d", "2", "--ell", "11", "--weight", "E:10,10", "--primes-up-to", "3", "--csv")
    assert out.splitlines()[0] == "index,w,1+w,1-w,ext_degree,multiplicity"


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "exactness", "--d", "2", "--ell", "3")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "verify", "--suite", "paper-example", "--d", "2", "--ell", "11", "--table")
    # the published 3+-4w column does not match the computation (see the decisions ledger)
    assert code == 1
    assert "9   10   10     9     9     0     0     5     5" in out


def test_weight_reduction_cli(capsys, tmp_path):
    out_file = tmp_path / "wr.json"
    code, _, _ = run(capsys, "weight-reduction", "--d", "2", "--ell", "3", "--primes-up-to", "20", "--output", str(out_file))
    rep = json.loads(out_file.read_text())
    assert code == 0 and rep["passed"] and len(rep["weights"]) == 20
    assert all(set(m) == {"source", "target", "twist"} for m in rep["matches"])
    code, _, _ = run(capsys, "weight-reduction", "--d", "2", "--ell", "3", "--weights", "1,2,3")
    assert code == 2


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "bianchi_modl", "h1", "--d", "2", "--ell", "3"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["h1_dim"] == 2  # abelianization Z/6 x Z
