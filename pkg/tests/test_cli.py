import json

import pytest

from core.main import run
from tests.conftest import fixture_path


def _run(capsys, *argv):
    code = run([str(a) for a in argv])
    return code, capsys.readouterr().out.strip()


# --- pi1 / validate / bieberbach ---

def test_pi1_prints_the_group_and_case(capsys):
    code, out = _run(capsys, "pi1", fixture_path("case_a_b3"))
    assert code == 0
    assert out.startswith("pi1 = ")
    assert "case: A" in out


def test_pi1_json_output(capsys):
    code, out = _run(capsys, "--format", "json", "pi1", fixture_path("case_b2_d1_e2"))
    assert code == 0
    data = json.loads(out)
    assert data["case"] == "C"
    assert "TwWr" in data["expression"]


def test_pi1_latex_output(capsys):
    code, out = _run(capsys, "--format", "latex", "pi1", fixture_path("case_b2_e1"))
    assert code == 0
    assert "\\" in out


def test_pi1_on_a_surface(capsys):
    code, out = _run(capsys, "pi1", fixture_path("surface_two_pieces"))
    assert code == 0
    assert "case: aggregate" in out


def test_invalid_decomposition_exits_with_2(capsys):
    code, out = _run(capsys, "pi1", fixture_path("parity_even_b"))
    assert code == 2
    assert "invalid decomposition" in out
    assert "parity" in out


@pytest.mark.parametrize("name, expected", [("case_b6_d1_e2", 0), ("parity_even_b", 2)])
def test_validate(capsys, name, expected):
    code, out = _run(capsys, "validate", fixture_path(name))
    assert code == expected
    assert out.splitlines()[0].endswith("PASS" if expected == 0 else "FAIL")


def test_bieberbach(capsys):
    code, out = _run(capsys, "--depth", "2", "--format", "json", "bieberbach", fixture_path("bieberbach_b3"))
    assert code == 0
    data = json.loads(out)
    assert data["passed"]
    assert data["labels"][1][2] == "Z"


def test_bieberbach_without_delta_fails(capsys):
    code, _ = _run(capsys, "bieberbach", fixture_path("case_a_b3"))
    assert code == 2


def test_missing_file_is_an_io_error(capsys, tmp_path):
    code, _ = _run(capsys, "pi1", tmp_path / "missing.json")
    assert code == 1


def test_malformed_json_is_an_io_error(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _ = _run(capsys, "validate", path)
    assert code == 1


@pytest.mark.parametrize("command", ["pi1", "validate", "bieberbach"])
def test_schema_errors_are_input_errors(capsys, tmp_path, command):
    path = tmp_path / "schema.json"
    path.write_text(json.dumps({"cylinder_group": "Z", "a": 0, "c": 1, "disks": [], "sigma": []}))
    code, out = _run(capsys, command, path)
    assert code == 1
    assert out.startswith("error: ")


# --- verify ---

def test_verify_twisted_on_the_order_24_quotient(capsys):
    code, out = _run(capsys, "--format", "json", "--depth", "1", "verify", "twisted", "--g", "Z2", "--h", "Z3", "--m", "1")
    assert code == 0
    data = json.loads(out)
    assert data["passed"]
    assert data["details"]["order"] == 24


def test_verify_twisted_defaults_to_the_first_quotient(capsys):
    code, out = _run(capsys, "--format", "json", "verify", "twisted", "--g", "Z2", "--h", "Z3", "--gamma", "id", "--m", "1")
    assert code == 0
    assert json.loads(out)["details"]["order"] == 24


def test_verify_twisted_with_inversion(capsys):
    code, _ = _run(capsys, "--depth", "1", "verify", "twisted", "--g", "1", "--h", "Z3", "--gamma", "inv", "--m", "1")
    assert code == 0


def test_verify_wreath(capsys):
    code, out = _run(capsys, "--depth", "1", "verify", "wreath", "--g", "Z2", "--m", "2")
    assert code == 0
    assert out.startswith("theta-wreath: PASS")


def test_verify_3x3(capsys):
    code, _ = _run(capsys, "verify", "3x3", "--b", "Z12", "--a", "3Z12", "--l", "2Z12")
    assert code == 0


def test_verify_3x3_rejects_foreign_subgroups(capsys):
    code, _ = _run(capsys, "verify", "3x3", "--b", "Z12", "--a", "5Z7", "--l", "2Z12")
    assert code == 1


def test_verify_mul_oracle(capsys):
    code, _ = _run(capsys, "verify", "mul-oracle", "--samples", "20")
    assert code == 0


def test_verify_cw(capsys):
    code, out = _run(capsys, "--format", "json", "verify", "cw", "--count", "3")
    assert code == 0
    assert json.loads(out)["details"]["models"] == 3


def test_verify_needs_its_options(capsys):
    code, _ = _run(capsys, "verify", "twisted", "--g", "Z2", "--m", "1")
    assert code == 1


def test_verify_rejects_infinite_groups_with_2(capsys):
    code, _ = _run(capsys, "verify", "wreath", "--g", "Z", "--m", "2")
    assert code == 2


# --- poly ---

@pytest.mark.parametrize("poly, mu", [("x*y", "1"), ("x^3 - 3*x*y^2", "4")])
def test_poly_milnor(capsys, poly, mu):
    code, out = _run(capsys, "poly", "milnor", poly)
    assert code == 0
    assert out == mu


def test_poly_squarefree(capsys):
    assert _run(capsys, "poly", "squarefree", "x^2*y") == (0, "false")
    assert _run(capsys, "poly", "squarefree", "x*y") == (0, "true")


def test_poly_certificate(capsys):
    code, out = _run(capsys, "poly", "certificate", "y", "x^3 - 3*x*y^2")
    assert code == 0
    assert "identity verified: True" in out


@pytest.mark.parametrize("variable, form", [("x", "x"), ("y", "x"), ("x", "y")])
def test_poly_certificate_of_a_linear_form(capsys, variable, form):
    code, out = _run(capsys, "poly", "certificate", variable, form)
    assert code == 0
    assert "identity verified: True" in out


def test_poly_equivalences(capsys):
    code, _ = _run(capsys, "poly", "equivalences", "x*y")
    assert code == 0


def test_poly_errors(capsys):
    assert _run(capsys, "poly", "milnor", "x^2*y")[0] == 2
    assert _run(capsys, "poly", "squarefree", "x + 1")[0] == 1
    assert _run(capsys, "poly", "certificate", "z", "x*y")[0] == 1


# --- group ---

def test_group_mul(capsys):
    code, out = _run(capsys, "group", "mul", "Wr(Z, 3)", "[[1,2,3],1]", "[[10,20,30],0]")
    assert code == 0
    assert json.loads(out) == [[21, 32, 13], 1]


def test_group_inv_and_order(capsys):
    code, out = _run(capsys, "group", "inv", "Wr(Z, 2)", "[[1,0],1]")
    assert code == 0
    assert json.loads(out) == [[0, -1], -1]
    code, out = _run(capsys, "group", "order", "WrM(Z2, 3)", "[[1,0,0],1]")
    assert code == 0
    assert json.loads(out) == 6


def test_group_quotient(capsys):
    code, out = _run(capsys, "--depth", "1", "group", "quotient", "TwWr(Z2, Z3, id, 1)")
    assert code == 0
    assert out.startswith("order 24")


def test_group_quotient_of_bare_Z_needs_a_modulus(capsys):
    assert _run(capsys, "group", "quotient", "Z x Z2")[0] == 2
    code, out = _run(capsys, "group", "quotient", "Z x Z2", "--leaf-modulus", "3")
    assert code == 0
    assert out.startswith("order 6")


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["group", "mul", "Z", "1"],
        ["group", "mul", "Wr(Z", "[[1],0]", "[[1],0]"],
        ["--format", "yaml", "pi1", "x.json"],
        ["--depth", "0", "group", "quotient", "Z2"],
        ["poly", "wiggle", "x"],
    ],
)
def test_usage_errors_exit_with_1(capsys, argv):
    assert _run(capsys, *argv)[0] == 1
