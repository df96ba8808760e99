"""
Independent multiplication for the twisted products.

Only the single-step shift β and the generic semidirect law
(x, k)(y, l) = (x·βᵏ(y), k + l) are used here, never the cased closed form
in arith.shift_twisted, so the two paths can be compared.
"""
import logging
from random import Random
from typing import List, Optional

from core import config
from orbits.group_arith.arith import _mul, apply_involution, check_shape, element_to_json, mul, random_element
from orbits.group_arith.involution import inversion_table
from orbits.group_core.formatter import format_expr
from orbits.group_core.models import Cyclic, IdentityInvolution, IntLine, TwistedWrZ, TwistedWrZm, Unit
from orbits.reports import VerificationReport

logger = logging.getLogger(__name__)


def beta(G, c: tuple, d: tuple):
    """β(c; d) = (c₁, …, c₂ₘ₋₁, c₀; d₁, …, dₘ₋₁, γ(d₀))."""
    return c[1:] + c[:1], d[1:] + (apply_involution(G.gamma, G.h, d[0]),)


def beta_inverse(G, c: tuple, d: tuple):
    """β⁻¹(c; d) = (c₂ₘ₋₁, c₀, …; γ(dₘ₋₁), d₀, …, dₘ₋₂)."""
    return c[-1:] + c[:-1], (apply_involution(G.gamma, G.h, d[-1]),) + d[:-1]


def beta_power(G, c: tuple, d: tuple, k: int):
    step = beta if k >= 0 else beta_inverse
    for _ in range(abs(k)):
        c, d = step(G, c, d)
    return c, d


def twisted_mul_oracle(G, u, v):
    """u·v in a twisted product, applying β one step at a time."""
    if not isinstance(G, (TwistedWrZ, TwistedWrZm)):
        raise TypeError(f"twisted_mul_oracle needs a twisted product, got {G!r}")
    check_shape(G, u)
    check_shape(G, v)
    (a, b, k), (c, d, l) = u, v
    sc, sd = beta_power(G, c, d, k)
    new_c = tuple(_mul(G.g, x, y) for x, y in zip(a, sc))
    new_d = tuple(_mul(G.h, x, y) for x, y in zip(b, sd))
    shift = k + l if isinstance(G, TwistedWrZ) else (k + l) % (2 * G.m)
    return (new_c, new_d, shift)


def compare_with_oracle(G, samples: int, rng: Random, max_shift: int = 8) -> List:
    """Random pairs (u, v) on which mul and twisted_mul_oracle disagree."""
    mismatches = []
    for _ in range(samples):
        u = random_element(G, rng, max_shift)
        v = random_element(G, rng, max_shift)
        if mul(G, u, v) != twisted_mul_oracle(G, u, v):
            mismatches.append([element_to_json(u), element_to_json(v)])
    return mismatches


def oracle_family(max_m: int = 4) -> List:
    """Twisted products with leaves in {1, ℤ, ℤ₂, ℤ₃} and m up to max_m, γ ∈ {id, inv} where inv applies."""
    leaves = [Unit(), IntLine(), Cyclic(2), Cyclic(3)]
    family = []
    for g in leaves:
        for h in leaves:
            gammas = [IdentityInvolution()]
            if isinstance(h, Cyclic):
                gammas.append(inversion_table(h))
            for gamma in gammas:
                for m in range(1, max_m + 1):
                    family.append(TwistedWrZ(g, h, gamma, m))
                    family.append(TwistedWrZm(g, h, gamma, m))
    return family


def verify_mul_oracle(samples: Optional[int] = None, seed: Optional[int] = None) -> VerificationReport:
    """
    Compare the closed-form twisted law with the step-by-step oracle.

    `samples` random pairs are drawn for every member of oracle_family(),
    shifts in [-MAX_SHIFT, MAX_SHIFT].
    """
    samples = samples or config.SAMPLES
    rng = Random(config.SEED if seed is None else seed)
    report = VerificationReport(target="mul-oracle")
    family = oracle_family()
    for G in family:
        mismatches = compare_with_oracle(G, samples, rng, config.MAX_SHIFT)
        report.add(
            f"mul = oracle on {format_expr(G)}",
            not mismatches,
            f"{len(mismatches)} of {samples} pairs differ" if mismatches else f"{samples} pairs agree",
            mismatches[:1],
        )
    report.details["groups"] = len(family)
    report.details["pairs"] = samples * len(family)
    logger.info("mul-oracle: %d groups, %d pairs, %s", len(family), samples * len(family), "pass" if report.passed else "FAIL")
    return report
