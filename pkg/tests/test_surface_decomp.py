from random import Random

import pytest

from orbits.errors import ConstructionError, EtaError, InvalidDecompositionError, NonCellularError
from orbits.reports import CheckStatus
from orbits.surface_decomp.cw_model import (
    build_cw_model,
    canonical_decomposition,
    cw_automorphism,
    random_decomposition,
    relabel,
)
from orbits.surface_decomp.lefschetz import (
    ker_s_act_probe,
    lefschetz_check,
    sphere_lift_check,
    tamper,
    tamper_detected,
)
from orbits.surface_decomp.models import MobiusDecomposition, OrbitType
from orbits.surface_decomp.orbits import classify_orbits, enumerate_orbits, eta_value, orbit_counts
from orbits.surface_decomp.validator import validate_decomposition
from tests.conftest import FIGURE_FIXTURES

EXPECTED_MODES = {
    "case_a_b3": "odd",
    "case_b1": "fan",
    "case_b4_e3": "arch",
    "case_b2_e1": "arch",
    "case_b2_d1_e2": "comb",
    "case_b6_d1_e2": "comb",
}

EXPECTED_COUNTS = {
    "case_a_b3": {"b": 3, "d": 3, "e": 0},
    "case_b1": {"b": 1, "d": 3, "e": 0},
    "case_b4_e3": {"b": 4, "d": 0, "e": 3},
    "case_b2_e1": {"b": 2, "d": 0, "e": 1},
    "case_b2_d1_e2": {"b": 2, "d": 1, "e": 2},
    "case_b6_d1_e2": {"b": 6, "d": 1, "e": 2},
}


def _decomposition(**overrides) -> MobiusDecomposition:
    data = {"cylinder_group": "Z", "a": 1, "c": 1, "disks": [{"group": "Z"}], "sigma": [[1, 1]]}
    data.update(overrides)
    return MobiusDecomposition.model_validate(data)


# --- validation ---

@pytest.mark.parametrize("name", FIGURE_FIXTURES)
def test_figure_decompositions_are_valid(load_fixture, name):
    d = load_fixture(name)
    report = validate_decomposition(d)
    assert report.passed, report.to_text()
    counts = report.details["counts"]
    assert {k: counts[k] for k in ("b", "d", "e")} == EXPECTED_COUNTS[name]
    assert 2 * counts["n"] == counts["b"] * (2 * counts["d"] + counts["e"])


def test_even_b_without_T2_orbits_fails_parity_only(load_fixture):
    report = validate_decomposition(load_fixture("parity_even_b"))
    assert not report.passed
    assert [c.check_name for c in report.failures()] == ["parity"]


def test_a_must_divide_c():
    report = validate_decomposition(_decomposition(a=2, c=3))
    assert report.check("a divides c").status == CheckStatus.FAIL
    assert report.check("free action").status == CheckStatus.SKIP


def test_non_free_action_is_reported():
    # b = 3 but disk 1 is fixed by sigma
    d = _decomposition(c=3, disks=[{"group": "Z"}] * 3, sigma=[[1, 1], [3, 1], [2, 1]])
    report = validate_decomposition(d)
    check = report.check("free action")
    assert check.status == CheckStatus.FAIL
    assert check.witness[0] == 1


def test_sigma_must_be_a_bijection():
    d = _decomposition(c=2, disks=[{"group": "Z"}] * 2, sigma=[[2, 1], [2, 1]])
    report = validate_decomposition(d)
    assert report.check("sigma bijective").status == CheckStatus.FAIL
    d = _decomposition(sigma=[[5, 1]])
    assert validate_decomposition(d).check("sigma entries").status == CheckStatus.FAIL


def test_groups_must_be_constant_on_orbits():
    d = _decomposition(c=3, disks=[{"group": "Z"}, {"group": "Z"}, {"group": "Z x Z"}], sigma=[[2, 1], [3, 1], [1, 1]])
    report = validate_decomposition(d)
    check = report.check("groups constant on orbits")
    assert check.status == CheckStatus.FAIL
    assert check.witness == [1, 3]


def test_involution_must_fit_H(load_fixture):
    d = load_fixture("case_b2_d1_e2").model_copy(update={"gamma": "perm[1,0,2]"})
    report = validate_decomposition(d)
    assert report.check("involution").status == CheckStatus.FAIL


def test_groups_outside_class_G_only_warn(load_fixture):
    report = validate_decomposition(load_fixture("bieberbach_b3"))
    assert report.passed
    assert report.check("disk groups in class G").status == CheckStatus.WARNING


def test_sigma_length_must_match_disks():
    with pytest.raises(ValueError):
        _decomposition(sigma=[[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        _decomposition(sigma_negative=[[1, -1], [1, 1]])


def test_star_rule_is_checked_on_a_listed_negative_half():
    assert validate_decomposition(_decomposition()).check("star rule").status == CheckStatus.PASS
    assert validate_decomposition(_decomposition(sigma_negative=[[1, -1]])).passed
    check = validate_decomposition(_decomposition(sigma_negative=[[1, 1]])).check("star rule")
    assert check.status == CheckStatus.FAIL
    assert check.witness == [1]


def test_listed_negative_half_must_be_a_bijection():
    d = _decomposition(c=2, disks=[{"group": "Z"}] * 2, sigma=[[2, 1], [1, 1]], sigma_negative=[[2, -1], [2, -1]])
    assert validate_decomposition(d).check("sigma bijective").status == CheckStatus.FAIL


# --- orbits ---

def test_orbit_records_follow_sigma(load_fixture):
    records = classify_orbits(load_fixture("case_a_b3"))
    assert [r.disks for r in records] == [[1, 4, 7], [2, 5, 8], [3, 6, 9]]
    assert records[0].signs == [1, -1, 1]
    assert all(r.type == OrbitType.T1 and r.length == 3 for r in records)


def test_T2_orbits_have_half_length(load_fixture):
    d = load_fixture("case_b6_d1_e2")
    records = enumerate_orbits(d)
    t2 = [r for r in records if r.type == OrbitType.T2]
    assert [r.disks for r in t2] == [[7, 8, 9], [10, 11, 12]]
    assert t2[0].signs == [1, -1, 1]
    assert orbit_counts(d, records)["m"] == 3


def test_classify_rejects_invalid_decompositions(load_fixture):
    with pytest.raises(InvalidDecompositionError) as info:
        classify_orbits(load_fixture("parity_even_b"))
    assert info.value.report.check("parity").status == CheckStatus.FAIL


def test_eta_value(load_fixture):
    d = load_fixture("case_b4_e3")
    assert eta_value(d, 6) == 2
    assert eta_value(d, -3) == -1
    with pytest.raises(EtaError):
        eta_value(d, 4)


# --- CW models ---

@pytest.mark.parametrize("name", FIGURE_FIXTURES)
def test_cw_model_is_a_projective_plane(load_fixture, name):
    model = build_cw_model(load_fixture(name))
    assert model.mode == EXPECTED_MODES[name]
    assert model.complex.euler_characteristic == 1
    assert len(model.complex.faces) == model.decomposition.n + 1


@pytest.mark.parametrize("name", FIGURE_FIXTURES)
def test_every_shift_satisfies_lefschetz_and_lifts(load_fixture, name):
    model = build_cw_model(load_fixture(name))
    for j in range(model.b):
        w = cw_automorphism(model, j)
        assert lefschetz_check(w).holds
        ker = ker_s_act_probe(w)
        assert ker.agree
        assert ker.eta_consistent
        assert all(ker.conditions.values()) is (j == 0)
        assert sphere_lift_check(w).holds


def test_identity_fixes_every_cell(load_fixture):
    w = cw_automorphism(build_cw_model(load_fixture("case_b2_d1_e2")), 0)
    counts = w.fixed_counts()
    assert counts["c1+"] == counts["c1"]
    assert counts["c2+"] == counts["c2"]


@pytest.mark.parametrize("seed", range(200))
def test_ker_s_act_conditions_agree_on_random_models(seed):
    model = build_cw_model(random_decomposition(Random(seed)))
    for j in range(model.b):
        ker = ker_s_act_probe(cw_automorphism(model, j))
        assert ker.agree, ker.conditions
        assert ker.eta_consistent


@pytest.mark.parametrize("seed", range(40))
def test_sphere_lift_on_random_models(seed):
    model = build_cw_model(random_decomposition(Random(seed)))
    for j in range(model.b):
        report = sphere_lift_check(cw_automorphism(model, j))
        assert report.euler_characteristic == 2
        assert report.doubling_holds and report.identity_holds


@pytest.mark.parametrize("seed", range(50))
def test_identity_on_random_partitions_has_lefschetz_number_one(seed):
    w = cw_automorphism(build_cw_model(random_decomposition(Random(seed))), 0)
    report = lefschetz_check(w)
    assert report.holds
    counts = report.counts
    assert counts["c0+"] == counts["c0"]
    assert counts["c1+"] == counts["c1"] and counts["c1-"] == 0
    assert counts["c2+"] == counts["c2"] and counts["c2-"] == 0
    assert counts["c0"] - counts["c1"] + counts["c2"] == 1


def test_tampering_is_detected():
    rng = Random(11)
    trials = detected = 0
    while trials < 1000:
        model = build_cw_model(random_decomposition(rng))
        for j in range(model.b):
            trials += 1
            detected += tamper_detected(tamper(cw_automorphism(model, j), rng))
    assert detected >= 0.99 * trials


def test_tampered_map_is_not_cellular(load_fixture):
    w = cw_automorphism(build_cw_model(load_fixture("case_a_b3")), 1)
    target, sign = w.face_map[0]
    flipped = w.model_copy(update={"face_map": [(target, -sign)] + list(w.face_map[1:])})
    with pytest.raises(NonCellularError):
        lefschetz_check(flipped)


def test_folded_model_breaks_only_the_ker_s_act_equivalence(load_fixture):
    model = build_cw_model(load_fixture("parity_even_b"), allow_invalid=True)
    assert model.mode == "folded"
    w = cw_automorphism(model, 1)
    assert lefschetz_check(w).holds
    ker = ker_s_act_probe(w)
    assert not ker.agree
    assert ker.conditions["g"] and not ker.conditions["a"]


def test_invalid_decomposition_needs_allow_invalid(load_fixture):
    with pytest.raises(InvalidDecompositionError):
        build_cw_model(load_fixture("parity_even_b"))


@pytest.mark.parametrize(
    "d",
    [
        _decomposition(disks=[], sigma=[]),
        # b = 1 fan needs c >= 2
        _decomposition(),
        # two T2 orbits directly under C₀ need a >= 2
        _decomposition(c=2, disks=[{"group": "Z"}] * 2, sigma=[[1, -1], [2, -1]]),
    ],
)
def test_construction_preconditions(d):
    assert validate_decomposition(d).passed
    with pytest.raises(ConstructionError):
        build_cw_model(d)


def test_even_invalid_models_need_a_free_action():
    d = _decomposition(c=3, disks=[{"group": "Z"}] * 3, sigma=[[1, 1], [3, 1], [2, 1]])
    with pytest.raises(ConstructionError):
        build_cw_model(d, allow_invalid=True)


def test_relabeling_keeps_the_model_valid():
    d = canonical_decomposition(4, ["Z"], ["Z x Z"], a=2)
    shuffled = relabel(d, [3, 1, 4, 6, 2, 5], [1, -1, -1, 1, 1, -1])
    assert validate_decomposition(shuffled).passed
    model = build_cw_model(shuffled)
    assert model.mode == "comb"
    assert all(lefschetz_check(cw_automorphism(model, j)).holds for j in range(4))
