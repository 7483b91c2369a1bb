import io
import json
import subprocess
import sys

import pytest

from abeltau.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_ORACLE, THREADS_ENV, main

SINGULAR = """\
[problem]
alphas = 1/2, 1/2; 1/2, 1/2
[kernel 1 1]
terms = (0, 0, 1)
[kernel 1 2]
terms = (0, 0, 1)
[kernel 2 1]
terms = (0, 0, 1)
[kernel 2 2]
terms = (0, 0, 1)
[forcing 1]
terms = (0, 1)
"""


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_solve_example1_reports_exact_match():
    code, out = run("solve", "--example", "1", "--n", "6")
    assert code == EXIT_OK
    assert "exact match yes" in out
    assert "tau[7,1]" in out and "tau[7,2]" in out


def test_solve_json_and_dump():
    code, out = run("solve", "--example", "1", "--n", "6", "--json")
    data = json.loads(out)
    assert data["N"] == 6 and data["exact_match"] is True
    assert all(abs(v) <= 1e-12 for v in data["taus"].values())
    code, out = run("solve", "--example", "2", "--n", "10", "--dump")
    rows = [l for l in out.splitlines() if l and l[0].isdigit() and l.count(",") == 2]
    assert "1,5,1.000000e+00" in rows and "2,10,-1.000000e+00" in rows


def test_solve_example3_n10_near_table():
    code, out = run("solve", "--example", "3", "--n", "10", "--json")
    e1 = json.loads(out)["errors"][0]
    assert 2.19e-9 <= e1 <= 2.19e-5


def test_bad_alpha_is_config_error(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text("[problem]\nalphas = 5/4\n[forcing 1]\nterms = (0, 1)\n")
    code, _ = run("solve", "--config", str(path), "--n", "4")
    assert code == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "0 < alpha <= 1" in err and "line 2" in err


def test_missing_file(capsys):
    assert run("solve", "--config", "/nonexistent/x.ini", "--n", "4")[0] == EXIT_CONFIG


def test_singular_is_numeric_error(tmp_path, capsys):
    path = tmp_path / "sing.ini"
    path.write_text(SINGULAR)
    code, _ = run("solve", "--config", str(path), "--n", "4")
    assert code == EXIT_NUMERIC
    assert "SingularStepError" in capsys.readouterr().err


def test_sweep_csv_is_stable():
    a = run("sweep", "--example", "4", "--n-list", "2,4,6", "--no-timing")[1]
    b = run("sweep", "--example", "4", "--n-list", "2,4,6", "--no-timing")[1]
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "N,e1,e2,tau1,tau2,residual,seconds"
    assert [l.split(",")[0] for l in lines[1:]] == ["2", "4", "6"]
    assert all(l.endswith(",0.000000e+00") for l in lines[1:])


def test_sweep_threads_same_csv(monkeypatch):
    a = run("sweep", "--example", "3", "--n-list", "4,8,10", "--no-timing")[1]
    monkeypatch.setenv(THREADS_ENV, "3")
    b = run("sweep", "--example", "3", "--n-list", "4,8,10", "--no-timing")[1]
    assert a == b


def test_sweep_single_n_and_out(tmp_path):
    path = tmp_path / "t.csv"
    code, out = run("sweep", "--example", "1", "--n-list", "6", "--out", str(path))
    assert code == EXIT_OK
    assert len(path.read_text().splitlines()) == 2
    assert "||e1||" in out


def test_sweep_rejects_descending():
    with pytest.raises(SystemExit) as exc:
        run("sweep", "--example", "1", "--n-list", "8,6")
    assert exc.value.code == 2


@pytest.mark.parametrize("k,n,m,limit", [(2, 8, 40, 1e-10), (1, 6, 20, 1e-10), (3, 12, 60, 1e-6)])
def test_oracle_examples(k, n, m, limit):
    code, out = run("oracle", "--example", str(k), "--n", str(n), "--m", str(m), "--json")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["passed"]
    assert rep["discrepancy"] <= limit
    assert rep["window"] > 0


def test_oracle_mismatch_exit_code():
    code, out = run("oracle", "--example", "3", "--n", "4", "--m", "40", "--tol", "1e-30")
    assert code == EXIT_ORACLE
    assert "FAIL" in out


def test_oracle_unsupported_expansion(tmp_path, capsys):
    path = tmp_path / "u.ini"
    path.write_text("[problem]\nalphas = 1/3\n[kernel 1 1]\nterms = (0, 0, 1)\n[forcing 1]\nbuiltins = arctan_sqrt: 1\n")
    assert run("oracle", "--config", str(path), "--n", "4")[0] == EXIT_CONFIG
    assert "cannot represent" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "abeltau", "solve", "--example", "2", "--n", "10"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0
    assert "exact match yes" in res.stdout
