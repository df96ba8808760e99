from itertools import permutations
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core import config
from orbits.errors import HypothesisViolation, InfiniteLeafError, NotNormalError, OrderCapExceeded, ShapeMismatchError
from orbits.group_arith.arith import (
    INFINITE_OR_EXCEEDS,
    element_from_json,
    element_order,
    element_to_json,
    enumerate_elements,
    identity,
    inverse,
    mul,
    power,
)
from orbits.group_arith.concrete import ConcreteGroup
from orbits.group_arith.involution import check_involution, inversion_table
from orbits.group_arith.oracle import compare_with_oracle, oracle_family, twisted_mul_oracle, verify_mul_oracle
from orbits.group_arith.quotient import finite_quotient, quotient_order
from orbits.group_core.grammar import parse_involution
from orbits.group_core.models import (
    Cyclic,
    Direct,
    FactorPermutation,
    IdentityInvolution,
    IntLine,
    TableInvolution,
    TwistedWrZ,
    TwistedWrZm,
    Unit,
    WrZ,
    WrZm,
)
from orbits.reports import CheckStatus
from tests.strategies import CONSTRUCTIONS, construction_groups, group_with_elements, twisted_groups


# --- worked products ---

def test_wreath_product_shifts_left():
    G = WrZ(IntLine(), 3)
    assert mul(G, ((1, 2, 3), 1), ((10, 20, 30), 0)) == ((21, 32, 13), 1)


def test_finite_twisted_product_applies_gamma_on_wrap():
    G = TwistedWrZm(Unit(), Cyclic(2), IdentityInvolution(), 1)
    u = (((), ()), (1,), 1)
    assert mul(G, u, u) == (((), ()), (0,), 0)


def test_twisted_inversion_flips_the_wrapped_coordinate():
    G = TwistedWrZ(Unit(), Cyclic(3), inversion_table(Cyclic(3)), 1)
    g = (((), ()), (0,), 1)
    x = (((), ()), (1,), 0)
    # g x g⁻¹ carries x one column over, which for m = 1 wraps through γ
    conj = mul(G, mul(G, g, x), inverse(G, g))
    assert conj == (((), ()), (2,), 0)


def test_power_and_element_order():
    G = WrZm(Cyclic(2), 3)
    u = ((1, 0, 0), 1)
    assert power(G, u, element_order(G, u, 100)) == identity(G)
    assert element_order(G, u, 100) == 6
    assert power(G, u, -1) == inverse(G, u)


def test_free_elements_have_no_finite_order():
    G = WrZ(Cyclic(2), 2)
    assert element_order(G, ((0, 0), 1), 50) == INFINITE_OR_EXCEEDS


@pytest.mark.parametrize(
    "G, bad",
    [
        (WrZ(IntLine(), 3), ((1, 2), 0)),
        (Cyclic(4), 7),
        (TwistedWrZ(Unit(), Unit(), IdentityInvolution(), 1), ((), (), 0)),
    ],
)
def test_shape_mismatch_is_rejected(G, bad):
    with pytest.raises(ShapeMismatchError):
        mul(G, bad, bad)


# --- group axioms ---

@pytest.mark.parametrize("construction", CONSTRUCTIONS, ids=lambda cls: cls.__name__)
@settings(max_examples=1000, deadline=None, derandomize=True)
@given(data=st.data())
def test_group_axioms(construction, data):
    G, u, v, w = data.draw(group_with_elements(3, construction_groups(construction)))
    e = identity(G)
    assert mul(G, mul(G, u, v), w) == mul(G, u, mul(G, v, w))
    assert mul(G, u, e) == u
    assert mul(G, e, u) == u
    assert mul(G, u, inverse(G, u)) == e
    assert mul(G, inverse(G, u), u) == e


@settings(max_examples=1000, deadline=None)
@given(group_with_elements(2, twisted_groups()))
def test_closed_form_matches_step_oracle(sample):
    G, u, v = sample
    assert mul(G, u, v) == twisted_mul_oracle(G, u, v)


def test_oracle_agrees_on_every_pair_of_the_order_24_quotient():
    G = TwistedWrZm(Cyclic(2), Cyclic(3), IdentityInvolution(), 1)
    elements = enumerate_elements(G)
    assert len(elements) == 24
    assert all(mul(G, u, v) == twisted_mul_oracle(G, u, v) for u in elements for v in elements)


def test_verify_mul_oracle_report_passes():
    report = verify_mul_oracle(samples=50, seed=config.SEED)
    assert report.passed
    assert report.details["groups"] == len(oracle_family())


def test_compare_with_oracle_on_a_swap_involution():
    G = TwistedWrZ(IntLine(), Direct([IntLine(), IntLine()]), FactorPermutation((1, 0)), 2)
    assert compare_with_oracle(G, 200, Random(3)) == []


# --- serialization ---

def test_element_json_round_trip():
    G = TwistedWrZ(Cyclic(2), Direct([IntLine(), Cyclic(3)]), IdentityInvolution(), 1)
    u = ((1, 0), ((5, 2),), -3)
    data = element_to_json(u)
    assert data == [[1, 0], [[5, 2]], -3]
    assert element_from_json(G, data) == u


def test_element_from_json_reports_the_bad_path():
    with pytest.raises(ShapeMismatchError) as info:
        element_from_json(WrZ(Cyclic(2), 2), [[0, 5], 1])
    assert "element" in str(info.value)


# --- quotients ---

@pytest.mark.parametrize(
    "e, expected",
    [
        (WrZm(Cyclic(2), 3), 2 ** 3 * 3),
        (TwistedWrZm(Cyclic(2), Cyclic(3), IdentityInvolution(), 1), 2 ** 2 * 3 * 2),
        (TwistedWrZm(Cyclic(3), Unit(), IdentityInvolution(), 2), 3 ** 4 * 4),
    ],
)
def test_finite_constructions_match_their_cartesian_order(e, expected):
    assert finite_quotient(e).order == expected
    assert len(enumerate_elements(e)) == expected


def test_quotient_of_wreath_over_Z_uses_the_period():
    Q = finite_quotient(WrZ(Cyclic(2), 2), N=2)
    assert Q.order == quotient_order(WrZ(Cyclic(2), 2), 2) == 2 ** 2 * 4


def test_quotient_rejects_unwrapped_integer_leaves():
    with pytest.raises(InfiniteLeafError):
        finite_quotient(Direct([IntLine(), Cyclic(2)]))
    assert finite_quotient(Direct([IntLine(), Cyclic(2)]), leaf_modulus=3).order == 6


def test_quotient_respects_the_cap():
    with pytest.raises(OrderCapExceeded) as info:
        finite_quotient(WrZm(Cyclic(3), 4), cap=100)
    assert info.value.order == 3 ** 4 * 4


# --- concrete groups ---

def _symmetric_group() -> ConcreteGroup:
    elements = list(permutations(range(3)))
    return ConcreteGroup.from_operation(elements, lambda p, q: tuple(p[q[i]] for i in range(3)), name="S3")


def test_concrete_toolkit_on_S3():
    S3 = _symmetric_group()
    assert S3.order == 6
    swap = S3.index[(1, 0, 2)]
    H = S3.generated_subgroup([swap])
    assert len(H) == 2
    assert S3.normality_witness(H) is not None
    assert not S3.is_normal(H)
    A3 = S3.commutator_subgroup()
    assert len(A3) == 3 and S3.is_normal(A3)
    assert S3.abelian_invariants() == [2]
    assert S3.element_order(swap) == 2
    with pytest.raises(NotNormalError):
        S3.quotient(H)
    quotient, labels = S3.quotient(A3)
    assert quotient.order == 2
    assert len(set(labels.tolist())) == 2


@pytest.mark.parametrize(
    "e, invariants",
    [
        (Cyclic(12), [12]),
        (Direct([Cyclic(2), Cyclic(2)]), [2, 2]),
        (Direct([Cyclic(4), Cyclic(6)]), [2, 12]),
        (WrZm(Cyclic(2), 2), [2, 2]),
    ],
)
def test_abelian_invariants(e, invariants):
    assert finite_quotient(e).abelian_invariants() == invariants


def test_non_associative_table_is_rejected():
    # a Latin square with identity 0 that is not associative
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(HypothesisViolation):
        ConcreteGroup(list(range(5)), table)


# --- involutions ---

def test_inversion_is_an_automorphism_of_abelian_groups():
    report = check_involution(inversion_table(Cyclic(5)), Cyclic(5))
    assert report.passed
    assert all(c.status == CheckStatus.PASS for c in report.checks)


def test_table_that_is_not_multiplicative_fails():
    # swaps 1 and 2 in Z4 = {0, 1, 2, 3}: an involution of the set, not of the group
    gamma = TableInvolution([0, 2, 1, 3])
    report = check_involution(gamma, Cyclic(4))
    assert not report.passed
    assert report.check("involutive").status == CheckStatus.PASS
    assert report.check("homomorphism").status == CheckStatus.FAIL


def test_factor_swap_is_sampled_on_infinite_H():
    H = Direct([IntLine(), IntLine()])
    gamma = parse_involution("perm[1,0]", H)
    report = check_involution(gamma, H, samples=100, seed=1)
    assert report.passed
    assert "sampled" in report.checks[0].message
