from itertools import permutations

import pytest

from orbits.errors import EtaError, NotNormalError
from orbits.exact_seq.diagram import build_3x3
from orbits.exact_seq.epimorphism import check_shift_compat, projection_epimorphism, split_by_eta
from orbits.exact_seq.models import EpiToZ
from orbits.exact_seq.theta import ADOPTED_CONVENTION, verify_theta_twisted, verify_theta_wreath
from orbits.group_arith.arith import identity
from orbits.group_arith.concrete import ConcreteGroup
from orbits.group_arith.involution import inversion_table
from orbits.group_core.models import (
    Cyclic,
    Direct,
    FactorPermutation,
    IdentityInvolution,
    IntLine,
    TwistedWrZ,
    TwistedWrZm,
    Unit,
    WrZ,
    WrZm,
)


def _multiples(n: int, k: int):
    return [r for r in range(n) if r % k == 0]


# --- 3x3 diagrams ---

def test_three_by_three_on_Z12():
    B = ConcreteGroup.cyclic(12)
    diagram = build_3x3(B, _multiples(12, 3), _multiples(12, 2))
    assert diagram.report.passed
    orders = [[g.order for g in row] for row in diagram.groups]
    # K = 6Z12, A = 3Z12, L = 2Z12
    assert orders == [[2, 4, 2], [6, 12, 2], [3, 3, 1]]
    assert all(seq.name.startswith("row") for seq in diagram.rows())
    assert len(diagram.columns()) == 3


def test_three_by_three_with_trivial_subgroups():
    B = ConcreteGroup.cyclic(6)
    diagram = build_3x3(B, [0], list(range(6)))
    assert diagram.report.passed


def test_three_by_three_rejects_a_non_normal_subgroup():
    elements = list(permutations(range(3)))
    S3 = ConcreteGroup.from_operation(elements, lambda p, q: tuple(p[q[i]] for i in range(3)))
    swap = S3.generated_subgroup([S3.index[(1, 0, 2)]])
    with pytest.raises(NotNormalError) as info:
        build_3x3(S3, swap, list(range(6)))
    assert info.value.witness is not None


# --- splitting along eta ---

@pytest.mark.parametrize(
    "G",
    [
        WrZm(Cyclic(2), 3),
        TwistedWrZm(Cyclic(2), Cyclic(3), IdentityInvolution(), 1),
        WrZ(IntLine(), 2),
        TwistedWrZ(IntLine(), Cyclic(3), inversion_table(Cyclic(3)), 2),
    ],
)
def test_split_by_eta_on_constructed_groups(G):
    witness = split_by_eta(projection_epimorphism(G), samples=200, seed=5)
    assert witness.report.passed, witness.report.to_text()


def test_split_by_eta_is_exhaustive_on_finite_groups():
    witness = split_by_eta(projection_epimorphism(WrZm(Cyclic(2), 2)))
    assert witness.report.details["mode"] == "exhaustive"


def test_split_by_eta_needs_eta_of_g_to_be_one():
    G = WrZ(Cyclic(2), 2)
    bad = EpiToZ(group=G, eta=lambda u: u[1], g=((0, 0), 2))
    with pytest.raises(EtaError):
        split_by_eta(bad)


def test_shift_compatibility_conditions_agree():
    L = Direct([Cyclic(2), Cyclic(2)])
    L_prime = Cyclic(2)

    def swap(x):
        return (x[1], x[0])

    def first(x):
        return x[0]

    def add(x):
        return (x[0] + x[1]) % 2

    # q = sum commutes with the swap; q = first does not
    good = check_shift_compat(add, swap, lambda y: y, L, L_prime)
    assert good.holds and good.agree
    bad = check_shift_compat(first, swap, lambda y: y, L, L_prime)
    assert not bad.holds
    assert bad.agree
    assert bad.witness is not None


def test_negative_shifts_apply_the_inverse_automorphisms():
    L = Cyclic(5)

    def double(x):
        return 2 * x % 5

    def halve(x):
        return 3 * x % 5

    good = check_shift_compat(
        lambda x: x, double, double, L, L, shifts=(-2, -1, 1), phi_inverse=halve, phi_prime_inverse=halve
    )
    assert good.holds and good.agree
    assert good.pairs_checked == 3 * 25
    # φ′ = id: the pair sweep fails on the first shift, k = -1
    bad = check_shift_compat(
        lambda x: x, double, lambda y: y, L, L, shifts=(-1,), phi_inverse=halve, phi_prime_inverse=lambda y: y
    )
    assert not bad.holds and bad.agree
    assert bad.witness[1] == -1


def test_negative_shifts_need_the_inverses():
    with pytest.raises(ValueError):
        check_shift_compat(lambda x: x, lambda x: x, lambda y: y, Cyclic(5), Cyclic(5), shifts=(-1,))


# --- characterization of the wreath products ---

def test_theta_wreath_passes_and_records_both_conventions():
    report = verify_theta_wreath(Cyclic(2), 2, depth=1)
    assert report.passed, report.to_text()
    assert report.details["order"] == 2 ** 2 * 2
    conventions = report.details["conventions"]
    assert len(conventions) == 2
    adopted = next(c for c in conventions if c["convention"] == ADOPTED_CONVENTION.value)
    assert adopted["homomorphism"]


def test_theta_wreath_with_a_normal_P():
    report = verify_theta_wreath(Cyclic(3), 2, depth=1, p_generators=[1])
    assert report.passed, report.to_text()
    assert report.check("P normal in G").status.value == "pass"


def test_theta_twisted_on_the_order_24_example():
    report = verify_theta_twisted(Cyclic(2), Cyclic(3), IdentityInvolution(), 1, depth=1)
    assert report.passed, report.to_text()
    assert report.details["order"] == 24


def test_theta_twisted_with_inversion():
    H = Cyclic(3)
    report = verify_theta_twisted(Unit(), H, inversion_table(H), 1, depth=1, q_generators=[1])
    assert report.passed, report.to_text()


def test_theta_twisted_with_a_factor_swap():
    H = Direct([Cyclic(2), Cyclic(2)])
    report = verify_theta_twisted(Unit(), H, FactorPermutation((1, 0)), 1, depth=1)
    assert report.passed, report.to_text()


def test_untwisted_product_has_the_plain_wreath_order():
    report = verify_theta_twisted(Cyclic(2), Unit(), IdentityInvolution(), 1, depth=1)
    assert report.details["untwisted_order"] == report.details["order"]


def test_identity_of_the_embedded_group():
    assert identity(TwistedWrZm(Cyclic(2), Cyclic(3), IdentityInvolution(), 1)) == ((0, 0), (0,), 0)


@pytest.mark.parametrize("G, m", [(Cyclic(2), 2), (Cyclic(3), 3), (Cyclic(2), 4)], ids=["Z2-2", "Z3-3", "Z2-4"])
def test_theta_wreath_on_small_quotients(G, m):
    report = verify_theta_wreath(G, m, depth=1)
    assert report.passed, report.to_text()
    assert report.details["order"] == G.m ** m * m


@pytest.mark.parametrize(
    "G, H, gamma",
    [
        (Cyclic(2), Cyclic(2), IdentityInvolution()),
        (Cyclic(2), Cyclic(3), IdentityInvolution()),
        (Cyclic(2), Cyclic(3), inversion_table(Cyclic(3))),
    ],
    ids=["Z2-Z2-id", "Z2-Z3-id", "Z2-Z3-inv"],
)
def test_theta_twisted_on_small_quotients(G, H, gamma):
    report = verify_theta_twisted(G, H, gamma, 1, depth=1)
    assert report.passed, report.to_text()
    assert report.details["order"] == G.m ** 2 * H.m * 2
