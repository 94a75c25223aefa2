import json
import subprocess
import sys

import pytest

from isoparam.cli import RunConfig, UsageError, build_parser, config_from_args, main, run


def _json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_construct(capsys):
    code, d = _json(capsys, ["construct", "--m", "4", "--k", "2", "--q", "0"])
    assert code == 0
    assert d["facts"][0]["family"] == "(4,3)-indefinite" and d["facts"][0]["q"] == 0


def test_verify_and_sample(capsys):
    code, d = _json(capsys, ["verify", "--m", "9", "--k", "1", "--samples", "20"])
    assert code == 0 and d["summary"]["fail"] == 0
    code, d = _json(capsys, ["sample", "--m", "3", "--k", "2", "--samples", "3"])
    assert code == 0 and any(c["name"].startswith("shape_spectrum") for c in d["checks"])


@pytest.mark.parametrize("case,K", [("g6m1-plus", -5), ("g6m2-minus", -2), ("96", -1), ("definite_87", -1)])
def test_witness_cases(capsys, case, K):
    code, d = _json(capsys, ["witness", "--case", case])
    assert code == 0 and d["checks"][0]["observed"] == pytest.approx(K, abs=1e-9)


def test_family_witnesses(capsys):
    code, d = _json(capsys, ["witness", "--case", "block-pair", "--m", "1", "--k", "4"])
    assert code == 0
    code, d = _json(capsys, ["witness", "--case", "minus", "--m", "3", "--k", "2"])
    assert code == 0 and d["checks"][0]["observed"] < 0


def test_curvature_variants(capsys):
    code, d = _json(capsys, ["curvature", "--m", "2", "--k", "2", "--restarts", "16"])
    assert code == 0
    code, d = _json(capsys, ["curvature", "--case", "hyp-g4-1-2", "--theta", "0.3"])
    assert code == 0 and d["facts"][0]["principal_curvatures"][0][1] == 1
    code, d = _json(capsys, ["curvature", "--case", "g4_45-minus", "--restarts", "8"])
    assert code == 0


def test_classify(capsys):
    code, d = _json(capsys, ["classify", "--m", "4", "--k", "24", "--q", "24"])
    assert code == 0
    assert d["facts"][0]["m_minus_product"] == {"homotopy": "Yes", "homeo": "No", "diffeo": "No"}
    code, d = _json(capsys, ["classify", "--case", "g4_45"])
    assert d["facts"][0]["cat_m_minus"] == "[2,3]"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--m", "2", "--k", "1"],
        ["verify"],
        ["witness", "--case", "nope"],
        ["classify", "--m", "4", "--k", "2", "--q", "1"],
        ["curvature", "--case", "hyp-g5-1-1"],
        ["verify", "--m", "1", "--k", "4", "--samples", "0"],
        ["frobnicate"],
        ["verify", "--m", "x"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_unwritable_output_exits_2(tmp_path, capsys):
    assert main(["construct", "--m", "1", "--k", "4", "--out", str(tmp_path / "no" / "r.json")]) == 2


def test_failing_check_exits_1(monkeypatch, capsys):
    from isoparam import cli
    from isoparam.report import Check

    monkeypatch.setitem(cli._DISPATCH, "construct", lambda cfg, rep: rep.add(Check("x", 0, 1, "fail")))
    assert main(["construct"]) == 1


def test_seed_from_environment():
    p = build_parser()
    assert config_from_args(p.parse_args(["verify"]), env={"FKM_SEED": "17"}).seed == 17
    assert config_from_args(p.parse_args(["verify", "--seed", "4"]), env={"FKM_SEED": "17"}).seed == 4
    assert config_from_args(p.parse_args(["verify"]), env={}).seed == 0
    with pytest.raises(UsageError):
        config_from_args(p.parse_args(["verify"]), env={"FKM_SEED": "abc"})


def test_csv_and_text_outputs(tmp_path, capsys):
    out = tmp_path / "w.csv"
    assert main(["witness", "--case", "52", "--format", "csv", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "name,expected,observed,status"
    assert main(["witness", "--case", "52", "--format", "text"]) == 0
    assert capsys.readouterr().out.startswith("witness: PASS")


def test_run_api_is_deterministic():
    a, _ = run(RunConfig("sample", m=5, k=1, samples=2, seed=9))
    b, _ = run(RunConfig("sample", m=5, k=1, samples=2, seed=9))
    assert a.to_dict()["checks"] == b.to_dict()["checks"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "isoparam", "construct", "--m", "1", "--k", "4"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["command"] == "construct"
