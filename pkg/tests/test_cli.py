import json
import subprocess
import sys

import pytest

from svmod.cli import EXIT_FAIL, EXIT_OK, EXIT_PARSE, EXIT_USAGE, RunConfig, UsageError, main, render, run

SV0_TEXT = """\
algebra custom
family L parity even
family M parity even
family Y parity even
bracket L(n) L(m) -> (m - n) L(m + n)
bracket L(n) Y(m) -> (m - n/2) Y(m + n)
bracket L(n) M(m) -> m M(m + n)
bracket Y(n) Y(m) -> (m - n) M(m + n)
bracket Y(n) M(m) -> 0
bracket M(n) M(m) -> 0
"""


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, _ = call(capsys, *argv, "--format", "json")
    return code, json.loads(out)


@pytest.fixture
def dsl_file(tmp_path):
    def write(text, name="alg.sv"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_verify_algebra_sv_half(capsys):
    code, out, _ = call(capsys, "verify-algebra", "--variant", "sv_half", "--window", "3")
    assert code == EXIT_OK and out.startswith("verify-algebra: PASS")


def test_classify_prints_g2(capsys):
    code, out, _ = call(capsys, "classify", "--window", "4", "--symbolic")
    assert code == EXIT_OK
    assert "L_2.1 = l^2*L0 + 2*l^2*a" in out


def test_classify_concrete(capsys):
    code, js = call_json(capsys, "classify", "--window", "3", "--lambda", "2/3", "--alpha", "-1")
    assert code == EXIT_OK
    assert js["parameters"] == {"lambda": "2/3", "alpha": "-1"}
    assert js["ansatz"]["p"]["Y_1"] == "2/3*Y0"
    assert all(it["pass"] for it in js["items"])


def test_nonexist_certificate(capsys):
    code, js = call_json(capsys, "nonexist", "--degree", "3", "--window", "3")
    assert code == EXIT_OK
    c = js["contradiction"]
    assert set(c) == {"pair", "required", "computed", "residual"}
    assert c["pair"] == ["Y_1/2", "Y_-1/2"]
    assert c["computed"] == "0" and c["required"] == "-M0"
    assert any(f["id"].startswith("t_p_zero") for f in js["facts"])


def test_nonexist_text(capsys):
    code, out, _ = call(capsys, "nonexist", "--degree", "2", "--window", "2", "--pair", "3/2,-1/2")
    assert code == EXIT_OK
    assert "contradiction at [Y_3/2, Y_-1/2].1:" in out


def test_reorder(capsys):
    code, out, _ = call(capsys, "reorder", "L_1 Y0^2")
    assert code == EXIT_OK
    assert "closed form: Y0^2*L_1 + -Y0*Y_1 + 1/2*M_1" in out


def test_reorder_sv_half_y0_is_usage_error(capsys):
    code, _, err = call(capsys, "reorder", "L_1 Y0", "--variant", "sv_half")
    assert code in (EXIT_USAGE, EXIT_PARSE) and err


def test_submodule(capsys):
    code, js = call_json(capsys, "submodule", "--i", "2", "--window", "3")
    assert code == EXIT_OK and js["summary"]["failed"] == 0


def test_verify_module_abstract(capsys):
    code, js = call_json(capsys, "verify-module", "--actor", "abstract", "--window", "2", "--fdeg", "1",
                         "--random", "1", "--lambda", "3", "--alpha", "1/2")
    assert code == EXIT_OK and js["summary"]["total"] > 0


def test_verify_module_abstract_sv_half_refused(capsys):
    code, _, err = call(capsys, "verify-module", "--actor", "abstract", "--variant", "sv_half")
    assert code == EXIT_USAGE and "nonexist" in err


@pytest.mark.parametrize("argv", [
    ["classify", "--lambda", "0"],
    ["classify", "--window", "1"],
    ["classify", "--symbolic", "--lambda", "2"],
    ["nonexist", "--degree", "0"],
    ["nonexist", "--pair", "1/2"],
    ["nonexist", "--pair", "1/2,1/2"],
    ["submodule", "--i", "-1"],
    ["verify-algebra", "--window", "0"],
    ["verify-algebra", "--variant", "/no/such/file"],
    ["frobnicate"],
    ["classify", "--window", "x"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = call(capsys, *argv)
    assert code == EXIT_USAGE


def test_reorder_parse_error(capsys):
    code, _, err = call(capsys, "reorder", "Q_2 L0")
    assert code == EXIT_PARSE
    code, _, err = call(capsys, "reorder", "L_1 L0^^3")
    assert code == EXIT_PARSE and "column" in err


def test_dsl_parse_error_location(capsys, dsl_file):
    path = dsl_file(SV0_TEXT.replace("(m - n) L(m + n)", "(m -) L(m + n)"))
    code, _, err = call(capsys, "verify-algebra", "--variant", path)
    assert code == EXIT_PARSE
    assert "line 5" in err


def test_dsl_variant_passes(capsys, dsl_file):
    code, js = call_json(capsys, "verify-algebra", "--variant", dsl_file(SV0_TEXT), "--window", "2")
    assert code == EXIT_OK and js["variant"] == "custom"


def test_corrupt_dsl_fails_and_pair_reproduces(capsys, dsl_file):
    path = dsl_file(SV0_TEXT.replace("(m - n/2) Y(m + n)", "(m - n) Y(m + n)"))
    base = ["verify-module", "--variant", path, "--window", "1", "--fdeg", "1", "--random", "0"]
    code, js = call_json(capsys, *base)
    assert code == EXIT_FAIL
    failing = [it for it in js["items"] if not it["pass"]]
    assert failing
    for it in failing[:5]:
        x, y = it["pair"]
        code2, js2 = call_json(capsys, *base, "--pair", f"{x},{y}")
        assert code2 == EXIT_FAIL
        again = {(tuple(j["pair"]), j["f"]): j["residual"] for j in js2["items"]}
        assert again[(tuple(it["pair"]), it["f"])] == it["residual"]


@pytest.mark.parametrize("argv", [
    ["verify-algebra", "--window", "2"],
    ["verify-module", "--window", "1", "--fdeg", "1", "--random", "3", "--seed", "9"],
    ["reorder", "Y_2 L0^3 M0 Y0^2"],
    ["classify", "--window", "3"],
    ["nonexist", "--degree", "2", "--window", "2"],
    ["submodule", "--i", "1", "--window", "2", "--fdeg", "2"],
])
def test_json_deterministic(capsys, argv):
    _, a, _ = call(capsys, *argv, "--format", "json")
    _, b, _ = call(capsys, *argv, "--format", "json")
    assert a == b and "runtime" not in a


def test_timing_flag(capsys):
    _, js = call_json(capsys, "reorder", "M_1 L0", "--timing")
    assert js["runtime"] >= 0


def test_run_api():
    cfg = RunConfig("reorder", expression="M_2 L0")
    report, code = run(cfg)
    assert code == EXIT_OK and report.meta["closed_form"] == "(L0 + -2)*M_2"
    assert render(report, cfg).startswith("reorder: PASS")
    with pytest.raises(UsageError):
        run(RunConfig("classify", window=0))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "svmod", "reorder", "Y_1 Y0"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "Y0*Y_1 + -M_1" in proc.stdout
