import json
import os

import pytest

from mahlerfold.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_expand_json(capsys):
    code, out = run(capsys, "--json", "expand", "--name", "I", "--order", "9")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["coeffs"] == ["1", "1", "0", "1", "1", "0", "0", "1", "0", "1"]


def test_expand_deterministic(capsys):
    _, out1 = run(capsys, "--json", "expand", "--name", "H", "--order", "20")
    _, out2 = run(capsys, "--json", "expand", "--name", "H", "--order", "20")
    assert out1 == out2


def test_verify_single(capsys):
    code, out = run(capsys, "verify", "--id", "propFGH", "--order", "64")
    assert code == 0
    assert "pass" in out


def test_verify_all_small(capsys):
    code, out = run(capsys, "verify", "--all", "--order", "48", "--max-level", "6")
    assert code == 0
    assert "FAIL" not in out
    for ident in ("propFGH", "rho-theorem", "ij-system", "e-words"):
        assert ident in out


def test_verify_exit_code_contract(capsys):
    # usage errors exit 2 via argparse
    with pytest.raises(SystemExit) as err:
        main(["expand", "--name", "Z", "--order", "4"])
    assert err.value.code == 2


def test_cf_eval(capsys):
    code, out = run(
        capsys, "--json", "cf", "eval",
        "--word", '{"head": 1, "entries": [2, 3]}',
    )
    assert code == 0
    assert json.loads(out)["value"] == "10/7"


def test_cf_eval_undefined(capsys):
    code, out = run(
        capsys, "--json", "cf", "eval",
        "--word", '{"head": 1, "entries": [1, -1]}',
    )
    assert code == 1
    assert "undefined_at_depth" in out


def test_cf_euclid(capsys):
    code, out = run(
        capsys, "--json", "cf", "euclid",
        "--num", "1+x+x^2+x^4+x^5", "--den", "1+x^2+x^4",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["head"] == "1 + x"
    assert payload["entries"] == ["-x", "-x", "x", "x"]


def test_cf_rho_root(capsys):
    code, out = run(capsys, "cf", "rho", "--point", "root:1/1")
    assert code == 0
    assert "sqrt5" in out


def test_fold_iterate_signs(capsys):
    code, out = run(capsys, "--json", "fold", "iterate", "--spec", "rho", "--n", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["signs"] == "+++--+--++"
    assert payload["length"] == 10


def test_fold_iterate_specialize(capsys):
    code, out = run(
        capsys, "--json", "fold", "iterate", "--spec", "rho", "--n", "4", "--specialize"
    )
    payload = json.loads(out)
    assert payload["entries"][2] == "-1 + x"


def test_fold_check(capsys):
    code, out = run(capsys, "fold", "check", "--id", "rho-theorem", "--n", "8")
    assert code == 0


def test_fold_cohn(capsys):
    code, out = run(
        capsys, "--json", "fold", "cohn", "--poly", "x^2", "--mode", "irregular",
        "--nmax", "4",
    )
    payload = json.loads(out)
    assert payload["congruences"] == [1]
    assert payload["specializable"] is True


def test_curve_check_exit_codes(capsys):
    code, _ = run(capsys, "curve", "check", "--spec", "dragon", "--n", "10")
    assert code == 0
    code, _ = run(capsys, "curve", "check", "--spec", "cubic", "--n", "8")
    assert code == 1


def test_curve_render_golden(tmp_path, capsys):
    out_file = tmp_path / "dragon9.svg"
    code, _ = run(capsys, "curve", "render", "--spec", "dragon", "--n", "9",
                  "--out", str(out_file))
    assert code == 0
    data = out_file.read_bytes()
    golden = os.path.join(os.path.dirname(__file__), "golden", "dragon9.svg")
    with open(golden, "rb") as fh:
        assert data == fh.read()


def test_curve_render_overlay(tmp_path, capsys):
    # the triangle figure: w_15 with negated-reversed w_14 on top (small n here)
    out_file = tmp_path / "tri.svg"
    code, _ = run(capsys, "curve", "render", "--spec", "rho", "--n", "9",
                  "--out", str(out_file), "--overlay", "rho:8:negrev")
    assert code == 0
    assert out_file.read_text().count("<line ") > 0


def test_fold_spec_from_file(tmp_path, capsys):
    spec_file = tmp_path / "dragon.fold"
    spec_file.write_text("bases:[] ; rule: w1, x, -~w1\n")
    code, out = run(capsys, "--json", "fold", "iterate", "--spec", str(spec_file), "--n", "3")
    assert code == 0
    assert json.loads(out)["signs"] == "++-++--"


def test_hadamard_product_cli(capsys):
    code, out = run(
        capsys, "--json", "hadamard", "product",
        "--a", "pow2", "--b", "1/(1-2*q)", "--order", "8",
    )
    payload = json.loads(out)
    assert payload["coeffs"] == ["0", "2", "4", "0", "16", "0", "0", "0", "256"]


def test_hadamard_complete_cli(capsys):
    code, out = run(capsys, "--json", "hadamard", "complete", "--rational", "1/(1-2*q)")
    payload = json.loads(out)
    assert payload["complete"] is False
    code, out = run(capsys, "--json", "hadamard", "complete", "--rational", "q/(1-q)^2")
    payload = json.loads(out)
    assert payload["complete"] is True and payload["m"] == 1


def test_hadamard_kernel_cli(capsys):
    code, out = run(
        capsys, "--json", "hadamard", "kernel", "--seq", "1/(1-q)", "--k", "2",
        "--depth", "3", "--length", "512",
    )
    payload = json.loads(out)
    assert payload["distinct"] == 1


def test_hadamard_probe_cli(capsys):
    code, out = run(
        capsys, "--json", "hadamard", "probe", "--f", "pow2", "--g", "1/(1-2*q)",
        "--dmax", "2", "--degmax", "3", "--order", "128",
    )
    payload = json.loads(out)
    assert payload["result"].startswith("none_up_to")


def test_fib_identity_cli(capsys):
    code, out = run(capsys, "--json", "fib", "identity", "--id", "good", "--terms", "8")
    assert code == 0
    payload = json.loads(out)
    assert float(payload["delta"]) < 1e-30


def test_fib_identity_table_row(capsys):
    code, out = run(capsys, "--json", "fib", "identity", "--id", "table-3", "--terms", "12")
    payload = json.loads(out)
    assert payload["expected"] == "-1"
