"""
Splitting a group along an epimorphism onto ℤ, and the shift-compatibility test.
"""
import logging
from random import Random
from typing import Any, Callable, List, Optional, Sequence, Tuple

from core import config
from orbits.errors import EtaError
from orbits.exact_seq.models import EpiToZ, ShiftCompatReport, SplitWitness
from orbits.group_arith.arith import (
    _inverse,
    _mul,
    element_to_json,
    enumerate_elements,
    identity,
    power,
    random_element,
)
from orbits.group_core.models import (
    IntLine,
    TwistedWrZ,
    TwistedWrZm,
    WrZ,
    WrZm,
    finite_order,
)
from orbits.reports import VerificationReport

logger = logging.getLogger(__name__)


def projection_epimorphism(G) -> EpiToZ:
    """The shift coordinate of a wreath-type G (or id on ℤ) with its canonical generator."""
    if isinstance(G, IntLine):
        return EpiToZ(group=G, eta=lambda u: u, g=1)
    if isinstance(G, (WrZ, WrZm)):
        tup = tuple(identity(G.base) for _ in range(G.m))
        modulus = G.m if isinstance(G, WrZm) else None
        return EpiToZ(group=G, eta=lambda u: u[1], g=(tup, 1 % G.m if modulus else 1), modulus=modulus)
    if isinstance(G, (TwistedWrZ, TwistedWrZm)):
        c = tuple(identity(G.g) for _ in range(2 * G.m))
        d = tuple(identity(G.h) for _ in range(G.m))
        modulus = 2 * G.m if isinstance(G, TwistedWrZm) else None
        return EpiToZ(group=G, eta=lambda u: u[2], g=(c, d, 1), modulus=modulus)
    raise TypeError(f"No canonical epimorphism onto Z for {G!r}")


def _sample(G, samples: int, rng: Random) -> Tuple[List[Any], str]:
    order = finite_order(G)
    if order is not None and order <= config.ORDER_CAP:
        return list(enumerate_elements(G)), "exhaustive"
    return [random_element(G, rng, config.MAX_SHIFT) for _ in range(samples)], "sampled"


def split_by_eta(
    b: EpiToZ,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> SplitWitness:
    """
    θ(v, k) = v gᵏ from L ⋊_φ ℤ to B, where L = ker η and φ(v) = g v g⁻¹.

    Raises:
        EtaError: η(g) ≠ 1
    """
    B = b.group
    reduce = (lambda k: k % b.modulus) if b.modulus else (lambda k: k)
    if reduce(b.eta(b.g)) != reduce(1):
        raise EtaError(f"eta(g) = {b.eta(b.g)}, expected 1")
    g = b.g
    g_inv = _inverse(B, g)

    def phi(v):
        return _mul(B, _mul(B, g, v), g_inv)

    def theta(v, k: int):
        return _mul(B, v, power(B, g, k))

    def theta_inverse(u) -> tuple:
        k = b.eta(u)
        return _mul(B, u, power(B, g, -k)), k

    def semidirect(x, y):
        # (v, k)(w, l) = (v φᵏ(w), k + l) with φᵏ(w) = gᵏ w g⁻ᵏ
        (v, k), (w, l) = x, y
        gk = power(B, g, k)
        return _mul(B, v, _mul(B, _mul(B, gk, w), _inverse(B, gk))), k + l

    samples = samples or config.SAMPLES
    rng = Random(config.SEED if seed is None else seed)
    points, mode = _sample(B, samples, rng)
    report = VerificationReport(target="split-by-eta")
    report.details["mode"] = mode

    bad_kernel = next((u for u in points if reduce(b.eta(theta_inverse(u)[0])) != 0), None)
    report.add("kernel projection", bad_kernel is None, "u g^-η(u) lies in L",
               None if bad_kernel is None else [element_to_json(bad_kernel)])

    bad_inverse = next((u for u in points if theta(*theta_inverse(u)) != u), None)
    report.add("theta surjective", bad_inverse is None, f"θ∘θ⁻¹ = id on {len(points)} elements",
               None if bad_inverse is None else [element_to_json(bad_inverse)])

    domain = [theta_inverse(u) for u in points]

    def round_trips(x) -> bool:
        v, k = theta_inverse(theta(*x))
        return v == x[0] and reduce(k) == reduce(x[1])

    bad_injective = next((x for x in domain if not round_trips(x)), None)
    report.add("theta injective", bad_injective is None, "θ⁻¹∘θ = id on the sampled domain",
               None if bad_injective is None else [element_to_json(bad_injective)])

    if mode == "exhaustive" and len(domain) ** 2 <= config.PAIR_SWEEP_CAP:
        pairs = [(x, y) for x in domain for y in domain]
    else:
        pairs = [(rng.choice(domain), rng.choice(domain)) for _ in range(samples)]
    bad_pair = next(
        (
            (x, y) for x, y in pairs
            if theta(*semidirect(x, y)) != _mul(B, theta(*x), theta(*y))
        ),
        None,
    )
    report.add("theta homomorphism", bad_pair is None, f"θ multiplicative on {len(pairs)} pairs",
               None if bad_pair is None else [element_to_json(bad_pair[0]), element_to_json(bad_pair[1])])

    bad_square = next(
        (x for x in domain if theta(x[0], 0) != x[0] or reduce(b.eta(theta(*x))) != reduce(x[1])),
        None,
    )
    report.add("sequences commute", bad_square is None,
               "θ restricts to the inclusion of L and lies over the identity of ℤ",
               None if bad_square is None else [element_to_json(bad_square)])
    logger.info("split_by_eta over %d elements (%s): %s", len(points), mode, "pass" if report.passed else "FAIL")
    return SplitWitness(theta=theta, theta_inverse=theta_inverse, phi=phi, report=report)


def check_shift_compat(
    q: Callable[[Any], Any],
    phi: Callable[[Any], Any],
    phi_prime: Callable[[Any], Any],
    L,
    L_prime,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    shifts: Sequence[int] = (1,),
    phi_inverse: Optional[Callable[[Any], Any]] = None,
    phi_prime_inverse: Optional[Callable[[Any], Any]] = None,
) -> ShiftCompatReport:
    """
    Evaluate q∘φ = φ′∘q and "ζ(a, k) = (q(a), k) is a homomorphism" independently.

    q is assumed to be a homomorphism L → L′; φ and φ′ are automorphisms.
    The two conditions are equivalent, so `agree` is False only on a bug.
    Negative entries of shifts apply φ⁻¹ and φ′⁻¹ |k| times.

    Raises:
        ValueError: a negative shift without phi_inverse and phi_prime_inverse
    """
    if any(k < 0 for k in shifts) and (phi_inverse is None or phi_prime_inverse is None):
        raise ValueError("negative shifts need phi_inverse and phi_prime_inverse")
    samples = samples or config.SAMPLES
    rng = Random(config.SEED if seed is None else seed)
    points, _ = _sample(L, samples, rng)

    def phi_power(f, f_inverse, x, k):
        step = f if k >= 0 else f_inverse
        for _ in range(abs(k)):
            x = step(x)
        return x

    bad_element = next((a for a in points if q(phi(a)) != phi_prime(q(a))), None)
    commutes = bad_element is None

    pairs = [(a, b) for a in points for b in points] if len(points) ** 2 <= config.PAIR_SWEEP_CAP else [
        (rng.choice(points), rng.choice(points)) for _ in range(samples)
    ]
    bad_pair = None
    checked = 0
    for k in shifts:
        for a, b in pairs:
            checked += 1
            left = q(_mul(L, a, phi_power(phi, phi_inverse, b, k)))
            right = _mul(L_prime, q(a), phi_power(phi_prime, phi_prime_inverse, q(b), k))
            if left != right:
                bad_pair = [element_to_json(a), k, element_to_json(b)]
                break
        if bad_pair:
            break
    zeta_ok = bad_pair is None
    if commutes != zeta_ok:
        logger.error("Shift-compatibility conditions disagree (commutes=%s, zeta=%s)", commutes, zeta_ok)
    return ShiftCompatReport(
        holds=commutes and zeta_ok,
        commutes=commutes,
        zeta_homomorphism=zeta_ok,
        agree=commutes == zeta_ok,
        elements_checked=len(points),
        pairs_checked=checked,
        witness=bad_pair or (None if commutes else [element_to_json(bad_element)]),
    )
