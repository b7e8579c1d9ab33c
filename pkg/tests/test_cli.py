"""Command-line front end: exit codes, report schema, determinism, round trips."""

import io
import json
import subprocess
import sys

import pytest

from gammaprod import __version__
from gammaprod.cli import InputError, JobSpec, run


def call(*argv, env_digits=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def report(*argv):
    code, out, err = call(*argv, "--format", "json")
    assert code in (0, 2), err
    return code, json.loads(out)


def test_wallis_report_schema():
    code, r = report("prod-rational", "--num", "4,8,4", "--den", "3,8,4", "--digits", "50")
    assert code == 0
    assert set(r) >= {"command", "params", "value", "closed_form", "checks", "version", "timing"}
    assert r["command"] == "prod-rational" and r["version"] == __version__
    assert r["value"]["re"].startswith("1.57079632679489661923132169163975144209858469968")
    assert r["value"]["digits"] >= 50
    assert r["closed_form"] == {"prefactor": "1", "num_args": ["1/2", "3/2"], "den_args": ["1", "1"]}
    assert all({"name", "pass", "delta"} <= set(c) for c in r["checks"])


def test_json_is_deterministic_except_timing():
    argv = ("prod-rational", "--example", "phi", "--alpha", "1", "--beta", "1", "--digits", "25")
    _, a = report(*argv)
    _, b = report(*argv)
    a.pop("timing"), b.pop("timing")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


@pytest.mark.parametrize("argv", [
    ("prod-rational", "--num", "1,0,1", "--den", "2,0,1", "--start", "1", "--exclude", "3"),
    ("zeta", "--m", "3", "--n", "4"),
    ("thue-morse", "--check", "block-product", "--m", "4"),
    ("gamma-id", "--identity", "psi", "--k", "3", "--n", "20"),
])
def test_report_round_trip(argv):
    _, first = report(*argv)
    job = JobSpec.from_report(first)
    again = io.StringIO()
    assert run(job.to_argv(), again) == 0
    second = json.loads(again.getvalue())
    assert JobSpec.from_report(second) == job
    first.pop("timing"), second.pop("timing")
    assert first == second


def test_jobspec_rejects_unknown_parameters():
    with pytest.raises(InputError):
        JobSpec("zeta", {"alpha": "1"}, 20, "json")
    with pytest.raises(InputError):
        JobSpec("no-such-command", {}, 20)


def test_spec_json_input(tmp_path):
    spec = '{"numerator": ["4", "8", "4"], "denominator": ["3", "8", "4"], "start_index": 0, "excluded": []}'
    code, a = report("prod-rational", "--spec", spec)
    p = tmp_path / "w.json"
    p.write_text(spec)
    code2, b = report("prod-rational", "--spec-file", str(p))
    assert code == code2 == 0 and a["value"] == b["value"]


@pytest.mark.parametrize("argv,flag", [
    (("prod-rational", "--num", "1,x", "--den", "1,1"), "--num"),
    (("zeta", "--n", "zero"), "--n"),
    (("prod-rational", "--example", "wallis", "--alpha", "1"), "--alpha"),
    (("thue-morse", "--check", "q", "--m", "3"), "--m"),
    (("prod-rational", "--num", "1,1", "--den", "1,1", "--digits", "0"), "--digits"),
    (("tables", "--which", "cats"), "--which"),
])
def test_parse_errors_name_the_flag(argv, flag):
    code, out, err = call(*argv)
    assert code == 1 and out == ""
    assert flag in err


def test_numeric_errors_keep_their_names():
    code, _, err = call("prod-rational", "--num", "1,1", "--den", "2,1")
    assert code == 1 and "DivergentProduct" in err
    code, _, err = call("chowla-selberg", "--d", "12")
    assert code == 1 and "NotFundamental" in err
    code, _, err = call("sum-accelerate", "--num", "1", "--den", "0,1")
    assert code == 1 and "SummabilityError" in err


def test_check_failure_exit_code():
    code, r = report("tables", "--which", "kb", "--n", "16", "--N", "1000", "--published")
    assert code == 0 and r["pass"]
    # 50 working digits cannot resolve a cell of about 124 digits
    code, r = report("tables", "--which", "kb", "--n", "16", "--N", "1000", "--published", "--digits", "50")
    assert code == 2 and not r["pass"]


def test_duplication_command():
    code, out, _ = call("thue-morse", "--check", "duplication", "--m", "6")
    assert code == 0 and "[PASS] duplication" in out


def test_table_csv_subgrid():
    code, out, _ = call("tables", "--which", "kb", "--n", "2,4,6", "--N", "3,10,100", "--format", "csv")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()]
    assert rows[0] == ["n", "N=3", "N=10", "N=100"]
    published = {2: (3.19, 6.22, 11.3), 4: (6.87, 12.1, 21.3), 6: (11.2, 18.7, 31.9)}
    for row in rows[1:]:
        n = int(row[0])
        for v, p in zip(row[1:], published[n]):
            assert abs(float(v) - p) <= 0.05


def test_environment_sets_default_digits(monkeypatch):
    monkeypatch.setenv("GAMMAPROD_DIGITS", "12")
    _, r = report("prod-rational", "--example", "wallis")
    assert r["params"]["digits"] == 12
    assert len(r["value"]["re"].replace(".", "")) == 12
    _, r = report("prod-rational", "--example", "wallis", "--digits", "20")
    assert r["params"]["digits"] == 20
    monkeypatch.setenv("GAMMAPROD_DIGITS", "many")
    code, _, err = call("prod-rational", "--example", "wallis")
    assert code == 1 and "GAMMAPROD_DIGITS" in err


def test_text_and_csv_render():
    code, out, _ = call("nijenhuis", "--n", "7")
    assert code == 0 and "closed form: 2^2 * pi^(3/2)" in out
    code, out, _ = call("chowla-selberg", "--d", "3,4", "--format", "csv")
    assert code == 0 and out.startswith("field,value,delta,tolerance")


def test_console_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gammaprod", "zeta", "--limit", "--n", "2", "--format", "json"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["extra"]["ratio"] == "19/7"
