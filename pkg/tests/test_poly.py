from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from core import config
from orbits.errors import NotSquarefreeError, PolySyntaxError
from orbits.poly.jacobian import certificate_holds, is_squarefree, jacobian_certificate, parse_poly, partials
from orbits.poly.milnor import milnor_number, milnor_profile, milnor_report, mu_equivalences
from orbits.poly.models import HomogeneousPoly
from orbits.reports import CheckStatus


def _linear_product(roots) -> str:
    return " * ".join(f"(x - ({a})*y)" for a in roots)


# --- parsing ---

def test_parse_keeps_exact_rationals():
    g = parse_poly("1/2*x*y - 3*y^2")
    assert g.degree == 2
    assert g.coefficients[(1, 1)].denominator == 2
    assert g.coefficients[(0, 2)] == -3


@pytest.mark.parametrize("text", ["x + 1", "x*z", "0", "x^2 +", "sqrt(2)*x", "x - x"])
def test_parse_rejects(text):
    with pytest.raises(PolySyntaxError):
        parse_poly(text)


def test_monomials_must_match_the_degree():
    with pytest.raises(ValidationError):
        HomogeneousPoly(degree=2, coefficients={(1, 0): 1})


def test_partials_drop_one_degree():
    A, B = partials(parse_poly("x^3 - 3*x*y^2"))
    assert A == parse_poly("3*x^2 - 3*y^2")
    assert B == parse_poly("-6*x*y")


# --- squarefreeness ---

@pytest.mark.parametrize(
    "text, expected",
    [
        ("x*y", True),
        ("x^3 - 3*x*y^2", True),
        ("x", True),
        ("x^2*y", False),
        ("x*y^2", False),
        ("(x - y)^2*(x + y)", False),
        ("x^2 + y^2", True),
    ],
)
def test_is_squarefree(text, expected):
    assert is_squarefree(parse_poly(text)) is expected


# --- certificates ---

@pytest.mark.parametrize("text", ["x*y", "x^3 - 3*x*y^2", "x", "y", "y^2 + x*y", "x^4 - y^4"])
@pytest.mark.parametrize("variable", ["x", "y"])
def test_certificates_verify(text, variable):
    g = parse_poly(text)
    certificate = jacobian_certificate(g, variable)
    assert certificate.verified
    assert certificate_holds(g, certificate)
    assert certificate.variable == variable


def test_certificate_of_xy():
    certificate = jacobian_certificate(parse_poly("x*y"), "x")
    # y·0 + x·1 = x
    assert certificate.m == 1
    assert certificate.P.is_zero
    assert str(certificate.Q) == "1"


@pytest.mark.parametrize(
    "text, variable, P, Q",
    [("x", "x", "x", "0"), ("x", "y", "y", "0"), ("y", "x", "0", "x"), ("y", "y", "0", "y")],
)
def test_certificate_of_a_coordinate_line(text, variable, P, Q):
    # one partial is the constant 1, the other vanishes
    certificate = jacobian_certificate(parse_poly(text), variable)
    assert certificate.m == 1
    assert (str(certificate.P), str(certificate.Q)) == (P, Q)
    assert certificate.verified


def test_certificate_rejects_multiple_factors():
    with pytest.raises(NotSquarefreeError):
        jacobian_certificate(parse_poly("x^2*y"))
    with pytest.raises(ValueError):
        jacobian_certificate(parse_poly("x*y"), "z")


# --- Milnor numbers ---

@pytest.mark.parametrize("text, mu", [("x*y", 1), ("x^3 - 3*x*y^2", 4), ("x^2 + y^2", 1), ("x^4 - y^4", 9)])
def test_milnor_number(text, mu):
    assert milnor_number(parse_poly(text)) == mu


def test_milnor_profile_of_the_monkey_saddle():
    assert milnor_profile(parse_poly("x^3 - 3*x*y^2"), 5) == [1, 2, 1, 0, 0]


def test_milnor_report_is_stable():
    profile = milnor_report(parse_poly("x^3 - 3*x*y^2"))
    assert profile.mu == 4
    assert profile.stable
    assert sum(profile.codimensions) == 4


def test_milnor_number_is_infinite_for_multiple_factors():
    with pytest.raises(NotSquarefreeError):
        milnor_number(parse_poly("x^2*y"))
    with pytest.raises(ValueError):
        milnor_number(parse_poly("x"))


@settings(max_examples=25, deadline=None)
@given(st.sets(st.integers(-4, 4), min_size=2, max_size=4))
def test_distinct_lines_have_mu_d_minus_one_squared(roots):
    g = parse_poly(_linear_product(sorted(roots)))
    d = g.degree
    assert milnor_number(g) == (d - 1) ** 2
    for variable in ("x", "y"):
        certificate = jacobian_certificate(g, variable)
        assert certificate.verified
        assert certificate.m <= max(2 * d - 3, 1)


# --- equivalent conditions ---

@pytest.mark.parametrize("text", ["x*y", "x^3 - 3*x*y^2", "x^4 - y^4"])
def test_equivalences_all_hold_for_squarefree_forms(text):
    report = mu_equivalences(parse_poly(text))
    assert report.passed, report.to_text()
    assert all(report.details["values"].values())


@pytest.mark.parametrize("text", ["x^2*y", "(x - y)^2*(x + y)"])
def test_equivalences_all_fail_together(text):
    report = mu_equivalences(parse_poly(text))
    assert not any(report.details["values"].values())
    assert report.check("conditions agree").status == CheckStatus.PASS


def _random_squarefree_forms(count: int, max_degree: int, height: int, seed: int):
    rng = Random(seed)
    forms = []
    while len(forms) < count:
        d = rng.randint(1, max_degree)
        g = HomogeneousPoly(degree=d, coefficients={(d - j, j): rng.randint(-height, height) for j in range(d + 1)})
        if not g.is_zero and is_squarefree(g):
            forms.append(g)
    return forms


RANDOM_FORMS = _random_squarefree_forms(100, 8, 10, config.SEED)


@pytest.mark.parametrize("g", RANDOM_FORMS, ids=str)
def test_certificates_of_random_squarefree_forms(g):
    for variable in ("x", "y"):
        certificate = jacobian_certificate(g, variable)
        assert certificate.verified
        assert certificate_holds(g, certificate)


@pytest.mark.parametrize(
    "text",
    [
        "x",
        "y",
        "3*x - 2*y",
        "(x^2 + y^2)*(x - y)",
        "(x^2 + x*y + y^2)*(x^2 + 2*y^2)*y",
        "(x^2 + y^2)*(x^2 - 2*x*y + 5*y^2)",
    ],
)
def test_certificates_with_irreducible_quadratic_and_linear_factors(text):
    g = parse_poly(text)
    assert is_squarefree(g)
    for variable in ("x", "y"):
        assert jacobian_certificate(g, variable).verified


@pytest.mark.parametrize("text", ["x", "y", "2*x + y"])
def test_equivalences_hold_for_linear_forms(text):
    report = mu_equivalences(parse_poly(text))
    assert report.passed, report.to_text()


@pytest.mark.parametrize("g", [g for g in RANDOM_FORMS if 2 <= g.degree <= 6][:20], ids=str)
def test_milnor_number_is_symmetric_in_x_and_y(g):
    mu = milnor_number(g)
    assert mu == milnor_number(g.swapped())
    # an isolated homogeneous singularity of degree d has μ = (d - 1)²
    assert mu == (g.degree - 1) ** 2
