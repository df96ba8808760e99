import pytest

from orbits.errors import HypothesisViolation, InvalidDecompositionError
from orbits.group_core.classifier import is_in_class_G
from orbits.group_core.grammar import parse_expr
from orbits.group_core.models import Cyclic, Direct, TwistedWrZ, Unit, factors_of
from orbits.group_core.rewrite_rules import normalize
from orbits.pi1.bieberbach import bieberbach_diagram, delta_members
from orbits.pi1.engine import pi1_mobius, pi1_nonorientable, pi1_result, validate_surface
from orbits.pi1.models import Pi1Case, SurfaceDecomposition
from orbits.surface_decomp.cw_model import canonical_decomposition, relabel
from orbits.surface_decomp.models import MobiusDecomposition

EXPECTED = {
    "case_a_b3": ("Z x Wr(Z x Wr(Z, 2) x (Z x Z), 3)", Pi1Case.A),
    "case_b1": ("Z x (Z x Z) x Wr(Z, 3) x Z", Pi1Case.A),
    "case_b4_e3": ("Z x TwWr(1, Z x Z x Wr(Z, 2), id, 2)", Pi1Case.B),
    "case_b2_e1": ("Z x TwWr(1, Z, id, 1)", Pi1Case.B),
    "case_b2_d1_e2": ("Z x TwWr(Wr(Z, 2), Z x Z, perm[1,0], 1)", Pi1Case.C),
    "case_b6_d1_e2": ("Z x TwWr(Z, (Z x Z) x Z, id, 3)", Pi1Case.C),
}


def _same(left, right) -> bool:
    return normalize(left) == normalize(right)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_figure_groups(load_fixture, name):
    text, case = EXPECTED[name]
    result = pi1_result(load_fixture(name))
    assert result.case == case
    assert _same(parse_expr(result.expression), parse_expr(text))
    assert result.warnings == []


def test_case_A_with_trivial_cylinder_collapses_the_wreath(load_fixture):
    # b = 1: G wr_1 Z = G x Z
    group = pi1_mobius(load_fixture("case_b1"))
    assert is_in_class_G(group)
    assert len(factors_of(group)) == 5


def test_twisted_answers_keep_their_involution(load_fixture):
    group = pi1_mobius(load_fixture("case_b2_d1_e2"))
    twisted = [f for f in factors_of(group) if isinstance(f, TwistedWrZ)]
    assert len(twisted) == 1
    assert twisted[0].gamma.perm == (1, 0)


def test_result_carries_counts_and_latex(load_fixture):
    result = pi1_result(load_fixture("case_b6_d1_e2"))
    assert result.counts["b"] == 6
    assert result.counts["m"] == 3
    assert result.latex and result.latex != result.expression
    assert not result.in_class_G
    assert "case" in result.to_json()


def test_groups_outside_class_G_are_computed_with_a_warning(load_fixture):
    result = pi1_result(load_fixture("bieberbach_b3"))
    assert _same(parse_expr(result.expression), parse_expr("Z x Wr(Z2, 3)"))
    assert result.warnings


def test_invalid_decomposition_raises(load_fixture):
    with pytest.raises(InvalidDecompositionError) as info:
        pi1_mobius(load_fixture("parity_even_b"))
    assert "parity" in str(info.value)


def test_decomposition_without_disks():
    d = MobiusDecomposition.model_validate(
        {"cylinder_group": "Z", "a": 1, "c": 1, "disks": [], "sigma": []}
    )
    assert _same(pi1_mobius(d), parse_expr("Z x Z"))
    assert pi1_result(d).case == Pi1Case.A
    # 1 wr_3 Z collapses to Z
    d = d.model_copy(update={"c": 3})
    assert _same(pi1_mobius(d), parse_expr("Z x Z"))


def test_relabeling_does_not_change_the_answer():
    d = canonical_decomposition(4, ["Z"], ["Z x Z", "Z"], a=2)
    shuffled = relabel(d, [5, 1, 6, 2, 8, 3, 7, 4], [-1, 1, 1, -1, 1, -1, -1, 1])
    assert _same(pi1_mobius(shuffled), pi1_mobius(d))


# --- surfaces ---

def test_surface_merges_class_G_factors(load_fixture):
    s = load_fixture("surface_two_pieces")
    assert isinstance(s, SurfaceDecomposition)
    result = pi1_result(s)
    assert result.case == Pi1Case.AGGREGATE
    assert len(result.pieces) == 2
    assert _same(parse_expr(result.background), parse_expr("Z x Z x Z x Wr(Z, 3) x Z"))
    expected = parse_expr("Z x Z x Z x Wr(Z, 3) x Z x TwWr(1, Z, id, 1)")
    assert _same(pi1_nonorientable(s), expected)
    assert result.counts == {"genus": 3, "k": 2}


def test_surface_without_pieces_is_its_background():
    s = SurfaceDecomposition(genus=2, background_group="Z x Wr(Z, 2)")
    assert _same(pi1_nonorientable(s), parse_expr("Z x Wr(Z, 2)"))


def test_surface_rejects_too_many_pieces(fixture_json):
    data = fixture_json("surface_two_pieces")
    data["genus"] = 2
    data["mobius_pieces"] = data["mobius_pieces"] * 2
    s = SurfaceDecomposition.model_validate(data)
    assert validate_surface(s).check("pieces fit the genus").status.value == "fail"
    with pytest.raises(InvalidDecompositionError):
        pi1_nonorientable(s)


def test_surface_background_must_be_in_class_G():
    s = SurfaceDecomposition(genus=2, background_group="Z2")
    with pytest.raises(InvalidDecompositionError):
        pi1_nonorientable(s)


def test_surface_rejects_an_invalid_piece(fixture_json):
    data = fixture_json("surface_two_pieces")
    data["mobius_pieces"].append(fixture_json("parity_even_b"))
    data["genus"] = 4
    report = validate_surface(SurfaceDecomposition.model_validate(data))
    assert report.check("piece 3 valid").status.value == "fail"
    assert "parity" in report.check("piece 3 valid").message


# --- Bieberbach diagrams ---

def test_bieberbach_diagram_is_exact_on_the_quotient(load_fixture):
    diagram = bieberbach_diagram(load_fixture("bieberbach_b3"), depth=2)
    assert diagram.report is not None
    assert diagram.report.passed, diagram.report.to_text()
    assert diagram.groups[1][1].order == 2 ** 3 * 6
    assert [[g.order for g in row] for row in diagram.groups] == [[1, 2, 2], [8, 48, 6], [8, 24, 3]]
    assert diagram.labels[1][2] == "Z"


def test_bieberbach_diagram_stays_symbolic_above_the_cap(load_fixture):
    diagram = bieberbach_diagram(load_fixture("bieberbach_b3"), depth=2, cap=10)
    assert diagram.groups is None
    assert diagram.report is None
    assert any("symbolic" in note for note in diagram.notes)


def test_bieberbach_diagram_stays_symbolic_for_infinite_leaves():
    d = MobiusDecomposition.model_validate(
        {
            "cylinder_group": "Z",
            "a": 1,
            "c": 3,
            "disks": [{"group": "Z", "delta": "Z"}] * 3,
            "sigma": [[2, 1], [3, 1], [1, 1]],
        }
    )
    diagram = bieberbach_diagram(d)
    assert diagram.groups is None
    assert "infinite" in diagram.notes[0]


def test_bieberbach_diagram_needs_delta(load_fixture):
    with pytest.raises(HypothesisViolation):
        bieberbach_diagram(load_fixture("case_a_b3"))


def test_delta_members():
    assert delta_members(Cyclic(2), Cyclic(6)) == {0, 3}
    assert delta_members(Unit(), Cyclic(4)) == {0}
    assert len(delta_members(Direct([Cyclic(2), Unit()]), Direct([Cyclic(2), Cyclic(3)]))) == 2
    with pytest.raises(HypothesisViolation):
        delta_members(Cyclic(4), Cyclic(6))
