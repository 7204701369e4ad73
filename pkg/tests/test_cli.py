import json
import math

from qheun.cli import main

A4_FLAGS = [
    "--family", "A4", "--q", "1.3", "--h", "0.2,-0.1", "--l", "0.05,0.3",
    "--t", "1.0,2.0", "--alpha", "0.4,0.8", "--beta", "0.7", "--E", "1.25",
]
A3_FLAGS = [
    "--family", "A3", "--q", "1.2", "--h", "0.3,-0.2,0.5", "--l", "0.1,0.4,-0.3",
    "--t", "1,2,0.7", "--beta", "0.9", "--E", "2.5",
]


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_exponents_a3_infinity(capsys):
    code, out, err = run_cli(capsys, "exponents", *A3_FLAGS, "--point", "inf")
    assert code == 0 and err == ""
    report = json.loads(out)
    results = report["results"]
    assert abs(results["lambda1"] + 0.5) < 1e-10
    assert abs(results["lambda2"] - 0.5) < 1e-10
    assert results["resonant"] is True
    assert report["version"]
    assert report["tolerances"]["vanish"] == 1e-10


def test_byte_identical_reports(capsys):
    argv = ["exponents", *A4_FLAGS, "--point", "zero"]
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2


def test_qes_report_byte_identical(capsys):
    argv = ["qes", "--family", "A4", "--q", "1.3", "--h", "1,1", "--l", "0,0",
            "--t", "1.1,0.6", "--alpha=-1,5", "--beta", "2", "--E", "0"]
    _, out1, _ = run_cli(capsys, *argv)
    _, out2, _ = run_cli(capsys, *argv)
    assert out1 == out2


def test_report_round_trips_via_json(capsys):
    _, out, _ = run_cli(capsys, "series", *A4_FLAGS, "--point", "zero", "--order", "8")
    report = json.loads(out)
    assert json.loads(json.dumps(report, sort_keys=True)) == report
    echoed = report["inputs"]
    assert echoed["family"] == "A4" and echoed["q"] == 1.3
    assert echoed["alpha"] == [0.4, 0.8]
    # The echoed inputs revalidate into working parameters.
    from qheun import Family, ModelParams, build_equation

    rebuilt = ModelParams(
        family=Family.parse(echoed["family"]), q=echoed["q"], h=echoed["h"],
        l=echoed["l"], t=echoed["t"], alpha1=echoed["alpha"][0],
        alpha2=echoed["alpha"][1], beta=echoed["beta"], E=echoed["E"],
    )
    build_equation(rebuilt)


def test_series_order_zero_single_coefficient(capsys):
    code, out, _ = run_cli(capsys, "series", *A3_FLAGS, "--point", "zero", "--order", "0")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["coefficients"] == [1.0]


def test_series_residual_reported_small(capsys):
    _, out, _ = run_cli(capsys, "series", *A3_FLAGS, "--point", "inf", "--order", "16")
    results = json.loads(out)["results"]
    assert results["status"] == "apparent_resonance"
    assert results["max_relative_residual"] < 1e-10


def test_validation_exit_code_q_equals_one(capsys):
    code, out, err = run_cli(
        capsys, "exponents", "--family", "A4", "--q", "1", "--h", "0,0", "--l", "0,0",
        "--t", "1,1", "--alpha", "0,0", "--beta", "0", "--point", "zero",
    )
    assert code == 2 and out == ""
    payload = json.loads(err)
    assert payload["error"]["type"] == "InvalidParams"
    assert "q" in payload["error"]["message"]


def test_validation_exit_code_zero_t(capsys):
    code, _, err = run_cli(
        capsys, "exponents", "--family", "A4", "--q", "1.2", "--h", "0,0", "--l", "0,0",
        "--t", "1,0", "--alpha", "0,0", "--beta", "0", "--point", "zero",
    )
    assert code == 2
    assert "t2" in json.loads(err)["error"]["message"]


def test_numerical_exit_code_not_reducible(capsys):
    code, _, err = run_cli(capsys, "hypergeom", *A4_FLAGS)
    assert code == 3
    assert json.loads(err)["error"]["type"] == "NotReducible"


def test_numerical_exit_code_exponent_mismatch(capsys):
    code, _, err = run_cli(
        capsys, "series", *A4_FLAGS, "--point", "zero", "--lam", "99.0"
    )
    assert code == 3
    assert json.loads(err)["error"]["type"] == "ExponentMismatch"


def test_param_file_and_stdin(tmp_path, capsys, monkeypatch):
    content = "# comment\nfamily = A2\nq = 0.8\nh = 0.3, -0.2, 0.5, 0.1\n" \
              "l = 0.1, 0.4, -0.3, 0.6\nt = 1, 2, 0.7, -1.3\nE = -0.7\n"
    path = tmp_path / "a2.params"
    path.write_text(content)
    code, out, _ = run_cli(capsys, "exponents", "--params", str(path), "--point", "zero")
    assert code == 0
    results = json.loads(out)["results"]
    lam1 = (0.7 - 0.8 + 3) / 2
    assert abs(results["lambda1"] - lam1) < 1e-10

    import io
    monkeypatch.setattr("sys.stdin", io.StringIO(content))
    code2, out2, _ = run_cli(capsys, "exponents", "--params", "-", "--point", "zero")
    assert code2 == 0 and json.loads(out2)["results"] == results


def test_duplicate_key_rejected(tmp_path, capsys):
    path = tmp_path / "dup.params"
    path.write_text("family = A4\nq = 1.2\nq = 1.3\n")
    code, _, err = run_cli(capsys, "exponents", "--params", str(path), "--point", "zero")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "ParseError"


def test_duplicate_between_file_and_flags(tmp_path, capsys):
    path = tmp_path / "base.params"
    path.write_text("family = A4\nq = 1.2\nh = 0,0\nl = 0,0\nt = 1,1\nalpha = 0,0.5\nbeta = 0.3\n")
    code, _, err = run_cli(
        capsys, "exponents", "--params", str(path), "--q", "1.4", "--point", "zero"
    )
    assert code == 2
    assert "duplicate" in json.loads(err)["error"]["message"]


def test_unknown_key_rejected(tmp_path, capsys):
    path = tmp_path / "bad.params"
    path.write_text("family = A4\nq = 1.2\nh = 0,0\nl = 0,0\nt = 1,1\nzz = 3\n")
    code, _, err = run_cli(capsys, "exponents", "--params", str(path), "--point", "zero")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "ParseError"


def test_expression_values_rejected(tmp_path, capsys):
    path = tmp_path / "expr.params"
    path.write_text("family = A4\nq = 1+0.2\nh = 0,0\nl = 0,0\nt = 1,1\nalpha = 0,0\nbeta = 0\n")
    code, _, err = run_cli(capsys, "exponents", "--params", str(path), "--point", "zero")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "ParseError"


def test_env_tolerance_override(capsys, monkeypatch):
    monkeypatch.setenv("QHEUN_TOLERANCE", "1e-7")
    _, out, _ = run_cli(capsys, "exponents", *A3_FLAGS, "--point", "zero")
    assert json.loads(out)["tolerances"]["vanish"] == 1e-7


def test_tol_flag_overrides(capsys):
    _, out, _ = run_cli(capsys, "exponents", *A3_FLAGS, "--point", "zero",
                        "--tol", "resonance=1e-6")
    assert json.loads(out)["tolerances"]["resonance"] == 1e-6


def test_qes_sweep_matches_hand_enumeration(capsys):
    code, out, _ = run_cli(
        capsys, "qes", "--family", "A4", "--q", "1.3", "--h", "1,1", "--l", "0,0",
        "--t", "1.1,0.6", "--alpha=-1,5", "--beta", "2", "--E", "0",
        "--sweep", "beta=0:4:0.5",
    )
    assert code == 0
    results = json.loads(out)["results"]
    assert results["count"] == 9
    # lambda1 = -beta/2, lambda2 = +beta/2; n = -lambda - alpha for alpha in {-1, 5}.
    expected = {
        0.0: [1], 0.5: [], 1.0: [], 1.5: [], 2.0: [0, 2], 2.5: [], 3.0: [], 3.5: [], 4.0: [3],
    }
    for row in results["grid"]:
        beta = row["values"]["beta"]
        ns = sorted(hit["n"] for hit in row["result"]["hits"])
        assert ns == expected[beta], beta


def test_sweep_subcommand_grid_order(capsys):
    code, out, _ = run_cli(
        capsys, "sweep", "--target", "exponents", "--point", "zero",
        *A3_FLAGS, "--vary", "beta=0.5:1.5:0.5",
    )
    assert code == 0
    results = json.loads(out)["results"]
    assert [row["values"]["beta"] for row in results["grid"]] == [0.5, 1.0, 1.5]
    for row in results["grid"]:
        got = row["result"]["lambda2"] - row["result"]["lambda1"]
        assert abs(got - row["values"]["beta"]) < 1e-10


def test_hypergeom_series_mode_cancellation(capsys):
    q, b, c = 1.22, 0.55, 0.85
    _, out, _ = run_cli(
        capsys, "hypergeom", "--a", str(q), "--b", str(b), "--c", str(c),
        "--q", str(q), "--order", "4",
    )
    coeffs = json.loads(out)["results"]["coefficients"]
    assert math.isclose(coeffs[1], (1 - b) / (1 - c), rel_tol=1e-12)


def test_hypergeom_reduce_mode(capsys):
    q, h2, beta, t1, t2, a1, a2 = 1.17, -0.4, 0.85, 1.4, 0.8, 0.25, 0.65
    h1, l1 = 0.3, 0.2
    l2 = h2 + 1.0
    e_special = -(q**a1 + q**a2) * q ** (h2 + 0.5) * t2 - q ** (
        (h1 - h2 + l1 + l2 + a1 + a2 - 1) / 2
    ) * (q ** (beta / 2) + q ** (-beta / 2)) * t1
    code, out, _ = run_cli(
        capsys, "hypergeom", "--family", "A4", "--q", str(q),
        "--h", f"{h1},{h2}", "--l", f"{l1},{l2}", "--t", f"{t1},{t2}",
        "--alpha", f"{a1},{a2}", "--beta", str(beta), "--E", repr(e_special),
    )
    assert code == 0
    results = json.loads(out)["results"]
    assert results["mode"] == "reduce"
    assert results["phi_residual_through_25"] < 1e-10
    assert math.isclose(results["c"], q ** (1 + beta), rel_tol=1e-10)


def test_limit_command(capsys):
    code, out, _ = run_cli(
        capsys, "limit", "--limit-family", "fromA3", "--h", "0.3,-0.2,0.5",
        "--l", "0.1,0.4,-0.3", "--t", "1,2,4", "--beta", "0.7", "--etilde", "0.9",
        "--eps", "0.0316,0.01,0.00316", "--order", "6",
    )
    assert code == 0
    results = json.loads(out)["results"]
    for slope in results["slopes"].values():
        assert 0.7 <= slope <= 1.3
    assert results["heun_form"]["fuchs_residual"] < 1e-12
    assert results["heun_form"]["accessory_offset_known"] is False


def test_output_file_and_formats(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "exponents", *A3_FLAGS, "--point", "zero",
                           "--output", str(target))
    assert code == 0 and out == ""
    saved = json.loads(target.read_text())
    assert saved["command"] == "exponents"

    code, out, _ = run_cli(capsys, "exponents", *A3_FLAGS, "--point", "zero",
                           "--format", "csv")
    assert code == 0
    assert out.startswith("key,value\n")
    assert any(line.startswith("results.lambda1,") for line in out.splitlines())

    code, out, _ = run_cli(capsys, "exponents", *A3_FLAGS, "--point", "zero",
                           "--format", "human")
    assert code == 0 and "lambda1" in out


def test_bad_sweep_spec(capsys):
    code, _, err = run_cli(capsys, "qes", *A4_FLAGS, "--sweep", "beta=3:1:0.5")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "ParseError"


def test_series_upper_branch(capsys):
    _, out, _ = run_cli(capsys, "series", *A4_FLAGS, "--point", "zero",
                        "--branch", "upper", "--order", "6")
    results = json.loads(out)["results"]
    lam2 = (0.2 - 0.1 - 0.05 - 0.3 - 0.4 - 0.8 + 0.7 + 2) / 2
    assert abs(results["lambda"] - lam2) < 1e-10


def test_negative_order_rejected(capsys):
    code, _, err = run_cli(capsys, "series", *A3_FLAGS, "--point", "zero",
                           "--order", "-3")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "InvalidParams"


def test_missing_required_keys_rejected(capsys):
    code, _, err = run_cli(capsys, "exponents", "--family", "A4", "--q", "1.2",
                           "--point", "zero")
    assert code == 2
    assert "missing required" in json.loads(err)["error"]["message"]


def test_degenerate_beta_exit_code(capsys):
    code, _, err = run_cli(
        capsys, "characterize", "--family", "A3", "--q", "1.2", "--h", "0.3,-0.2,0.5",
        "--l", "0.1,0.4,-0.3", "--t", "1,2,0.7", "--beta", "0",
    )
    assert code == 2
    assert json.loads(err)["error"]["type"] == "DegenerateBeta"


def test_unknown_tolerance_name_rejected(capsys):
    code, _, err = run_cli(capsys, "exponents", *A3_FLAGS, "--point", "zero",
                           "--tol", "bogus=1e-5")
    assert code == 2
    assert json.loads(err)["error"]["type"] == "InvalidParams"


def test_nonpositive_tolerance_rejected(capsys):
    code, _, err = run_cli(capsys, "exponents", *A3_FLAGS, "--point", "zero",
                           "--tol", "vanish=0")
    assert code == 2
