import json

from threewave.cli import run


def _capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, out


def test_obstructions_command(capsys):
    code, out = _capture(capsys, ["obstructions", "--system", "three-wave"])
    assert code == 0
    rep = json.loads(out)
    assert rep["obstructions"] == ["delta*gamma", "gamma^2+gamma"]
    assert rep["solution_branches"] == ["{delta = 0, gamma = -1}", "{gamma = 0}"]


def test_index_command(capsys):
    code, out = _capture(capsys, ["index", "--system", "three-wave", "--point", "P1"])
    assert code == 0
    rep = json.loads(out)
    assert rep["eigenvalues"] == ["0", "2", "-2"]


def test_verify_atlas_exit_codes(capsys):
    code, _ = _capture(
        capsys, ["verify-atlas", "--system", "modified", "--atlas", "resolved"]
    )
    assert code == 0
    code2, out2 = _capture(
        capsys, ["verify-atlas", "--system", "three-wave", "--atlas", "resolved"]
    )
    assert code2 == 1  # generic parameters: the third chart genuinely fails
    rep = json.loads(out2)
    bad = [c for c in rep["charts"] if not c["polynomial"]]
    assert bad and bad[0]["obstruction_conditions"] == ["delta*gamma", "gamma^2+gamma"]
    code3, _ = _capture(
        capsys,
        ["verify-atlas", "--system", "three-wave", "--params", "delta=0,gamma=-1"],
    )
    assert code3 == 0


def test_verify_symmetry_command(capsys):
    code, out = _capture(capsys, ["verify-symmetry", "--system", "modified"])
    assert code == 0
    rep = json.loads(out)
    assert rep["pi"]["invariant"] and rep["s"]["invariant"]
    assert rep["relations"]["all_hold"]


def test_float_parameters_rejected_for_symbolic_commands(capsys):
    code = run(["index", "--system", "three-wave", "--params", "delta=0.5"])
    assert code == 2


def test_unknown_parameter_rejected(capsys):
    code = run(["index", "--system", "three-wave", "--params", "nope=1"])
    assert code == 2


def test_deterministic_output(capsys):
    _, out1 = _capture(capsys, ["singularities", "--system", "three-wave"])
    _, out2 = _capture(capsys, ["singularities", "--system", "three-wave"])
    assert out1 == out2


def test_report_dir_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("THREEWAVE_REPORT_DIR", str(tmp_path))
    code, out = _capture(capsys, ["painleve", "--system", "three-wave"])
    assert code == 0
    written = (tmp_path / "painleve.json").read_text()
    assert written == out


def test_out_flag(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out = _capture(
        capsys, ["index", "--system", "three-wave", "--point", "P2", "--out", str(target)]
    )
    assert code == 0
    assert target.read_text() == out
    rep = json.loads(out)
    assert rep["eigenvalues"] == ["-2", "-4", "-4"]


def test_integrate_csv(capsys):
    code, out = _capture(
        capsys,
        [
            "integrate",
            "--system",
            "modified",
            "--start=0.5;0.1;0.2",
            "--path",
            "0.4",
            "--tol",
            "1e-9",
            "--format",
            "csv",
        ],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("t_re,t_im,chart")
    assert len(lines) > 3


def test_monodromy_command(capsys):
    code, out = _capture(
        capsys,
        [
            "monodromy",
            "--system",
            "modified",
            "--start=-2;0.1;-3",
            "--t0",
            "0",
            "--center",
            "0.55",
            "--tol",
            "1e-11",
        ],
    )
    assert code == 0
    rep = json.loads(out)
    assert rep["deviation"] < 1e-6


def test_model_file_system(tmp_path, capsys):
    model = tmp_path / "toy.model"
    model.write_text(
        """
params mu
chart C0 : x y z
chart C1 : X Y Z @ X
system C0 : x^2 ; -y + mu ; z
map C0 C1 : 1/x ; y ; z | 1/X ; Y ; Z
"""
    )
    code, out = _capture(capsys, ["painleve", "--system", str(model)])
    assert code == 0
    rep = json.loads(out)
    assert any(b["exponents"][0] == 1 for b in rep["balances"])
    code2, out2 = _capture(capsys, ["verify-atlas", "--system", str(model)])
    rep2 = json.loads(out2)
    assert "charts" in rep2


def test_exported_model_reanalyzed_through_cli(tmp_path, capsys):
    # export the built-in system, perturb nothing, and drive the CLI on the
    # file: the analyses must reproduce the built-in results
    from threewave import models

    path = tmp_path / "exported.model"
    path.write_text(models.export_model("three-wave", "resolved"))
    code, out = _capture(capsys, ["obstructions", "--system", str(path)])
    assert code == 0
    rep = json.loads(out)
    assert rep["obstructions"] == ["delta*gamma", "gamma^2+gamma"]
    code2, out2 = _capture(
        capsys, ["verify-atlas", "--system", str(path), "--params", "delta=0,gamma=-1"]
    )
    assert code2 == 0
    rep2 = json.loads(out2)
    assert rep2["all_polynomial"]


def test_usage_error_on_unknown_system(capsys):
    code = run(["index", "--system", "bogus"])
    assert code == 2


def test_text_format(capsys):
    code, out = _capture(
        capsys, ["index", "--system", "three-wave", "--point", "P1", "--format", "text"]
    )
    assert code == 0
    assert "eigenvalues" in out
