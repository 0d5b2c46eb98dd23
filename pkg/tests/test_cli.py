import io
import json
import os
import subprocess
import sys

import pytest

from norlund.cli import EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE, format_scalar, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def lines(text):
    return [json.loads(l) for l in text.splitlines() if l.strip()]


def test_coeffs_g_float():
    code, out = run("coeffs", "--kind", "g", "--a", "0,0.5", "--b", "1,1.5", "--k", "2", "--n", "3",
                    "--method", "young")
    assert code == EXIT_OK
    table = lines(out)[0]
    assert table["values"][0] == "1" and table["mode"] == "float"


def test_coeffs_g_exact():
    code, out = run("coeffs", "--kind", "g", "--mode", "exact", "--a", "0,1/2", "--b", "1,3/2", "--k", "2",
                    "--n", "3")
    assert code == EXIT_OK
    assert lines(out)[0]["values"] == ["1", "3/2", "15/4", "105/8"]


def test_coeffs_usage_errors(capsys):
    assert run("coeffs", "--kind", "g", "--a", "0,1/2", "--b", "1", "--k", "1", "--n", "3")[0] == EXIT_USAGE
    assert run("coeffs", "--kind", "q", "--a", "0", "--b", "1", "--n", "3")[0] == EXIT_USAGE
    assert run("coeffs", "--kind", "g", "--a", "0", "--b", "1", "--k", "4", "--n", "3")[0] == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_coeffs_precondition_exit(capsys):
    code, _ = run("coeffs", "--kind", "h", "--a", "0.1,0.3,0.7", "--b", "1.2,1.5,1.9", "--s", "1", "--n", "2")
    assert code == EXIT_PRECONDITION
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["error"] == "convergence_violation"


def test_coeffs_csv():
    code, out = run("coeffs", "--kind", "f", "--mode", "exact", "--a", "0,1/3", "--b", "1/2,1", "--s", "1",
                    "--n", "2", "--output", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "n,value" and len(out.splitlines()) == 4


def test_eval_examples():
    code, out = run("eval", "--fn", "gp0pp", "--a", "0", "--b", "2", "--z", "0.5")
    rec = lines(out)[0]
    assert code == EXIT_OK and abs(rec["value"][0] - 0.5) < 1e-15
    code, out = run("eval", "--fn", "gp0pp", "--a", "0", "--b", "2", "--z", "1.5")
    assert code == EXIT_OK and lines(out)[0]["value"] == [0.0, 0.0]
    code, out = run("eval", "--fn", "pfq", "--mode", "exact", "--a=-3,1/2", "--b", "3/2", "--z", "1/3")
    rec = lines(out)[0]
    assert code == EXIT_OK and rec["text"] == "688/945" and rec["terms"] == 4


def test_eval_g2ppp_routes():
    base = ["eval", "--fn", "g2ppp", "--a", "0.5,0.8,1.1", "--b", "0.9,0.7,1.3", "--k", "1", "--s", "2",
            "--z", "0.8"]
    x = lines(run(*base)[1])[0]["value"][0]
    y = lines(run(*base, "--method", "v523")[1])[0]["value"][0]
    assert abs(x - y) < 1e-9 * abs(x)


def test_eval_z_restrictions():
    assert run("eval", "--fn", "gp0pp", "--a", "0", "--b", "2", "--z", "1")[0] == EXIT_USAGE
    assert run("eval", "--fn", "gp0pp", "--a", "0", "--b", "2", "--z", "0.5+1i")[0] == EXIT_USAGE


def test_verify_ptolemy_range():
    code, out = run("verify", "--suite", "ptolemy", "--trials", "100", "--p", "2..6")
    recs = lines(out)
    assert code == EXIT_OK
    assert all(2 <= r["params"]["p"] <= 6 for r in recs if "summary" not in r)
    assert recs[-1]["fail"] == 0 and recs[-1]["pass"] == 100


def test_verify_unknown_suite():
    assert run("verify", "--suite", "nonexistent")[0] == EXIT_USAGE


def test_verify_tol_profile(tmp_path):
    prof = tmp_path / "tol.json"
    prof.write_text(json.dumps({"finite": 1e-30}))
    code, out = run("verify", "--suite", "multiseries", "--trials", "2", "--tol-profile", str(prof))
    assert code == EXIT_OK
    assert all(r["tolerance"] == 1e-30 for r in lines(out) if "summary" not in r)
    prof.write_text(json.dumps({"bogus": 1}))
    assert run("verify", "--suite", "ptolemy", "--tol-profile", str(prof))[0] == EXIT_USAGE


def test_verify_all_at_p3():
    code, out = run("verify", "--suite", "all", "--trials", "25", "--p", "3", "--seed", "42")
    assert code == EXIT_OK
    assert sum(r["fail"] for r in lines(out) if r.get("summary")) == 0


def test_format_scalar():
    assert format_scalar(1.0) == "1"
    assert format_scalar(complex(1.5, -2)) == "1.5-2i"
    assert format_scalar(-7) == "-7"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "norlund", "eval", "--fn", "gp0pp", "--a", "0", "--b", "2",
                           "--z", "0.5"], capture_output=True, text=True, env={**os.environ})
    assert proc.returncode == 0 and json.loads(proc.stdout)["text"] == "0.5"
