"""CLI tests: job validation, reports, exit codes, corpus runner, round trips."""

import json
import subprocess
import sys

import pytest

from cartierlab.cli import (
    canonical_report,
    dump_report,
    format_ideal,
    main,
    parse_ideal_string,
    run,
    run_corpus,
)
from cartierlab.groebner import Ideal, ideal_equal
from cartierlab.polyring import Ring, parse_polynomial


def test_tau_job():
    report, code = run({
        "command": "tau", "p": 7, "vars": ["x", "y"], "g": "x^2+y^3", "t": "5/6",
    })
    assert code == 0
    assert report["status"] == "ok"
    assert report["result"]["generators"] == ["x", "y"]
    assert report["result"]["stabilized_at_e"] <= 3
    assert report["result"]["schemes_agree"] is True


def test_cartier_job():
    report, code = run({
        "command": "cartier", "p": 3, "vars": ["x"], "e": 1, "h": "1", "f": "x^5",
    })
    assert code == 0
    assert report["result"]["result"] == "x"


def test_verify_transform_job():
    report, code = run({
        "command": "verify-transform", "p": 5, "vars": ["x"],
        "cover": {"n": 2, "f": "x"}, "g": "x", "t": "1",
    })
    assert code == 0
    result = report["result"]
    assert result["equal"] is True
    assert result["lhs"] == "(x)"
    assert result["rhs"] == "(x)"


def test_nu_and_fpt_jobs():
    report, code = run({"command": "nu", "p": 7, "vars": ["x", "y"],
                        "g": "x^2+y^3", "e": 1})
    assert code == 0 and report["result"]["nu"] == 5
    report, code = run({"command": "fpt", "p": 7, "vars": ["x", "y"],
                        "g": "x^2+y^3", "e_max": 2, "denominator_bound": 50})
    assert code == 0
    assert report["result"]["hi"] == "5/6"
    assert report["result"]["lo"] == "40/49"


def test_multiplier_and_compare_jobs():
    report, code = run({"command": "multiplier", "p": 5, "vars": ["x", "y"],
                        "g": "x^2*y", "t": "1/2"})
    assert code == 0 and report["result"]["generators"] == ["x"]
    report, code = run({"command": "compare", "p": 5, "vars": ["x", "y"],
                        "g": "x*y", "t": "1"})
    assert code == 0
    assert report["result"]["contained"] is True
    assert report["result"]["equal"] is True


def test_trace_image_job():
    report, code = run({"command": "trace-image", "p": 5, "vars": ["x"],
                        "cover": {"n": 2, "f": "x"}})
    assert code == 0
    result = report["result"]
    assert result["numerator"] == "(1)"
    assert result["phi_stable"] is True
    assert result["tau_contained"] is True


def test_tau_quotient_job():
    report, code = run({"command": "tau", "p": 3, "vars": ["x", "z"],
                        "w": "z^2 - x", "g": "z", "t": "1"})
    assert code == 0
    assert report["result"]["generators"] == ["x", "z"]


def test_unknown_field_rejected():
    report, code = run({"command": "tau", "p": 3, "vars": ["x"], "g": "x",
                        "t": "1", "bogus": 1})
    assert code == 2
    assert report["error"]["kind"] == "validation"


def test_parse_error_exit_code():
    report, code = run({"command": "tau", "p": 3, "vars": ["x"], "g": "x + q", "t": "1"})
    assert code == 2
    assert report["error"]["kind"] == "parse"


def test_not_stabilized_exit_code():
    report, code = run({"command": "tau", "p": 3, "vars": ["x"], "g": "x",
                        "t": "1", "e_max": 1, "window": 5})
    assert code == 3
    assert report["error"]["kind"] == "not_stabilized"


_CAP_SENSITIVE_JOB = {
    "command": "tau", "p": 3, "vars": ["x", "y", "z"],
    "w": "z^2 - x^3 - y^5", "g": "z + x*y", "t": "1",
}


def test_resource_cap_exit_code():
    report, code = run({**_CAP_SENSITIVE_JOB, "spair_cap": 1})
    assert code == 3
    assert report["error"]["kind"] == "resource_cap"


def test_determinism_byte_identical():
    job = {"command": "tau", "p": 7, "vars": ["x", "y"], "g": "x^2+y^3", "t": "5/6"}
    a, _ = run(dict(job))
    b, _ = run(dict(job))
    assert dump_report(canonical_report(a)) == dump_report(canonical_report(b))


def test_ideal_string_round_trip():
    ring = Ring(7, ["x", "y"])
    ideal = Ideal(ring, [parse_polynomial("x^2 + y", ring), parse_polynomial("y^3", ring)])
    text = format_ideal(ideal)
    assert ideal_equal(parse_ideal_string(text, ring), ideal)
    assert parse_ideal_string("(0)", ring).is_zero()
    assert parse_ideal_string("(1)", ring).is_unit()


def test_corpus_runner(tmp_path):
    job = {"command": "cartier", "p": 3, "vars": ["x"], "e": 1, "h": "1", "f": "x^5"}
    (tmp_path / "a.job.json").write_text(json.dumps(job))
    # no golden yet: failure
    summary, code = run_corpus(str(tmp_path))
    assert code == 1 and summary["failed"] == 1
    # write goldens, then pass
    summary, code = run_corpus(str(tmp_path), write_goldens=True)
    assert code == 0
    summary, code = run_corpus(str(tmp_path))
    assert code == 0 and summary["passed"] == 1
    # tampered golden: unified diff in the failure report
    golden = tmp_path / "a.golden.json"
    golden.write_text(golden.read_text().replace('"x"', '"y"'))
    summary, code = run_corpus(str(tmp_path))
    assert code == 1
    assert "---" in summary["failures"][0]["diff"]


def test_corpus_empty(tmp_path):
    summary, code = run_corpus(str(tmp_path))
    assert code == 0 and summary["total"] == 0


def test_main_inline_flags(capsys):
    code = main(["cartier", "-p", "3", "--vars", "x", "--e", "1", "--h", "1", "--f", "x^5"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["result"]["result"] == "x"


def test_main_job_file(tmp_path, capsys):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"command": "nu", "p": 5, "vars": ["x"],
                                "g": "x", "e": 1}))
    code = main(["--job", str(path)])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["result"]["nu"] == 4


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cartierlab.cli", "nu", "-p", "5", "--vars", "x",
         "--g", "x", "--e", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["nu"] == 4


def test_env_spair_cap(monkeypatch):
    monkeypatch.setenv("CARTIERLAB_SPAIR_CAP", "1")
    report, code = run(dict(_CAP_SENSITIVE_JOB))
    assert code == 3 and report["error"]["kind"] == "resource_cap"
