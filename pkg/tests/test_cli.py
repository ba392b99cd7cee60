import json
import math

import pytest

from fuchsian_rn.cli import CliConfig, main, parse_complex
from fuchsian_rn.arith import DomainError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.mark.parametrize("text,value", [("0.3+0.2i", 0.3 + 0.2j), ("i", 1j), ("-2i", -2j),
                                        ("1/2", 0.5), ("0.5-i", 0.5 - 1j), ("2", 2), ("1e-3i", 1e-3j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_config_validation():
    with pytest.raises(DomainError):
        CliConfig(precision="extended")
    with pytest.raises(DomainError):
        CliConfig(n_max=0)
    with pytest.raises(DomainError):
        CliConfig(cutoff=5)


def test_group_reduced(capsys):
    data = run_json(capsys, "group", "--p", "5", "--reduced")
    assert data["S"] == [2]
    assert data["generators"] == ["T_5", "w_1", "s_5(2,2)^t"]
    data = run_json(capsys, "group", "--p", "17", "--reduced")
    assert data["S"] == [2, 3, -3]


def test_group_standard(capsys):
    data = run_json(capsys, "group", "--p", "7")
    assert data["generators"][:2] == ["T_7", "w_1"]
    assert len(data["matrices"]) == len(data["generators"])


def test_group_rejects_composite(capsys):
    code, out, err = run(capsys, "group", "--p", "4")
    assert code == 2
    assert "not prime" in err


def test_elliptic(capsys):
    data = run_json(capsys, "elliptic", "--p", "13")
    assert len(data["plus"]) == 2
    assert len(data["minus"]) == 2  # h(-52) = 2
    small = run_json(capsys, "elliptic", "--p", "2")
    assert small["points"][0] == [0.0, 1.0]


def test_classnum(capsys):
    assert run_json(capsys, "classnum", "--disc", "-68")["class_number"] == 4


def test_genus_p13(capsys):
    data = run_json(capsys, "genus", "--p", "13")
    assert data["certified"] is True
    assert data["h_p"] == "19/6"
    assert data["v_p"] == "2*pi*(7/6)"
    assert data["m_p"] == 7


def test_genus_p19(capsys):
    # 5/3 + h(-76)/2 + h(-19)/2 = 5/3 + 3/2 + 1/2 = 11/3, which is >= 9/2 - 1
    data = run_json(capsys, "genus", "--p", "19")
    assert data["h_p"] == "11/3"
    assert data["m_p"] == 9
    assert data["certified"] is True


def test_genus_p29_not_certified(capsys):
    data = run_json(capsys, "genus", "--p", "29")
    assert data == {"p": 29, "m_p": 13, "h_p": "9/2", "certified": False,
                    "area": pytest.approx(data["area"]), "reason": "1/2*m_p-1 > h_p"}


def test_domain_svg(capsys, tmp_path):
    target = tmp_path / "d5.svg"
    data = run_json(capsys, "domain", "--p", "5", "--svg", str(target))
    assert data["m"] == 5
    assert data["area"] == pytest.approx(math.pi)
    assert target.read_text().startswith("<svg")


def test_eis_funeq(capsys):
    data = run_json(capsys, "eis", "funeq", "--p", "5", "--k", "0", "--z", "i", "--s", "0.3+0.2i")
    assert data["residual"] < 1e-6
    assert "tail" in data and data["n_max"] >= 64


def test_eis_taylor_constant(capsys):
    data = run_json(capsys, "eis", "taylor", "--p", "7", "--k", "0", "--m", "0", "--z", "i")
    assert data["value"] == [pytest.approx(7 / 16), 0.0]
    assert data["warnings"] == []


def test_eis_taylor_numeric_warns(capsys):
    data = run_json(capsys, "eis", "taylor", "--p", "5", "--k", "4", "--m", "1", "--z", "i")
    assert data["warnings"]


def test_eis_table_csv(capsys):
    code, out, _ = run(capsys, "eis", "table", "--N", "3", "--k", "2", "--s", "2", "--nmax", "20",
                       "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,re,im,tail_bound"
    assert len(lines) == 42
    assert lines[1].startswith("-20,") and lines[-1].startswith("20,")


def test_eis_table_json(capsys):
    data = run_json(capsys, "eis", "table", "--N", "5", "--k", "0", "--s", "2", "--nmax", "3")
    assert [r["n"] for r in data["rows"]] == [-3, -2, -1, 0, 1, 2, 3]


def test_eis_eval_modes_agree(capsys):
    args = ["eis", "eval", "--N", "5", "--k", "2", "--z", "0.2+1.1i", "--s", "2"]
    f = run_json(capsys, *args)
    d = run_json(capsys, *args, "--mode", "direct")
    assert complex(*f["value"]) == pytest.approx(complex(*d["value"]), rel=1e-6)
    hat = run_json(capsys, *args, "--kind", "hat")
    tilde = run_json(capsys, *args, "--kind", "tilde")
    assert complex(*tilde["value"]) == pytest.approx(6 * complex(*hat["value"]), rel=1e-12)


def test_eis_invariance(capsys):
    data = run_json(capsys, "eis", "invariance", "--p", "5", "--k", "2", "--z", "0.3+0.9i", "--s", "0.4+0.6i")
    assert data["max_residual"] < 1e-6
    one = run_json(capsys, "eis", "invariance", "--N", "5", "--k", "4", "--z", "2i", "--s", "2",
                   "--mode", "direct", "--gamma=-1,1,2,2,1")
    assert one["max_residual"] < 1e-6


def test_eis_needs_level(capsys):
    code, _, err = run(capsys, "eis", "eval", "--k", "0")
    assert code == 2 and "--N or --p" in err


def test_eis_pole_reported(capsys):
    code, _, err = run(capsys, "eis", "eval", "--N", "5", "--k", "0", "--s", "1", "--kind", "hat")
    assert code == 2 and err.startswith("error:")


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("FUCHSIAN_RN_PRECISION", "extended")
    code, _, err = run(capsys, "classnum", "--disc", "-4")
    assert code == 2 and "precision" in err


def test_output_file(capsys, tmp_path):
    target = tmp_path / "cn.json"
    code, out, _ = run(capsys, "-o", str(target), "classnum", "--disc", "-23")
    assert code == 0 and "wrote" in out
    assert json.loads(target.read_text())["class_number"] == 3


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--quick", "--only", "1,4,14")
    assert code == 0
    assert out.count("PASS") == 3


def test_verify_json_reports_failure(capsys):
    code, out, _ = run(capsys, "verify", "--json", "--only", "6")
    data = json.loads(out)
    assert code == 1
    assert data["passed"] is False
    assert data["criteria"][0]["passed"] is False
