import logging
from random import Random
from typing import Optional

from core import config
from orbits.group_arith.arith import (
    _inverse,
    _mul,
    apply_involution,
    element_index,
    enumerate_elements,
    random_element,
)
from orbits.group_core.models import TableInvolution, finite_order
from orbits.reports import CheckResult, CheckStatus, VerificationReport

logger = logging.getLogger(__name__)


def inversion_table(H) -> TableInvolution:
    """x ↦ x⁻¹ as a table involution; an automorphism only when H is abelian."""
    if H is None or finite_order(H) is None:
        raise ValueError("the inversion table needs a finite H")
    elements = enumerate_elements(H)
    index = element_index(H)
    return TableInvolution([index[_inverse(H, x)] for x in elements], name="inv")


def check_involution(gamma, H, samples: Optional[int] = None, seed: Optional[int] = None) -> VerificationReport:
    """
    Check γ∘γ = id and γ(xy) = γ(x)γ(y) on H.

    Exhaustive when H is finite with order up to the configured cap,
    sampled otherwise.
    """
    samples = samples or config.SAMPLES
    rng = Random(config.SEED if seed is None else seed)
    order = finite_order(H)
    if order is not None and order <= config.ORDER_CAP:
        points = list(enumerate_elements(H))
        if order * order <= config.PAIR_SWEEP_CAP:
            pairs = [(x, y) for x in points for y in points]
            mode = "exhaustive"
        else:
            pairs = [(rng.choice(points), rng.choice(points)) for _ in range(samples)]
            mode = "elements exhaustive, pairs sampled"
    else:
        points = [random_element(H, rng, config.MAX_SHIFT) for _ in range(samples)]
        pairs = [(x, random_element(H, rng, config.MAX_SHIFT)) for x in points]
        mode = "sampled"

    checks = []
    bad = next((x for x in points if apply_involution(gamma, H, apply_involution(gamma, H, x)) != x), None)
    checks.append(CheckResult(
        check_name="involutive",
        status=CheckStatus.PASS if bad is None else CheckStatus.FAIL,
        message=f"γ∘γ = id on {len(points)} elements ({mode})" if bad is None else "γ∘γ moves an element",
        witness=None if bad is None else [bad],
    ))
    bad_pair = next(
        (
            (x, y) for x, y in pairs
            if apply_involution(gamma, H, _mul(H, x, y))
            != _mul(H, apply_involution(gamma, H, x), apply_involution(gamma, H, y))
        ),
        None,
    )
    checks.append(CheckResult(
        check_name="homomorphism",
        status=CheckStatus.PASS if bad_pair is None else CheckStatus.FAIL,
        message=f"γ(xy) = γ(x)γ(y) on {len(pairs)} pairs ({mode})" if bad_pair is None else "γ is not multiplicative",
        witness=None if bad_pair is None else list(bad_pair),
    ))
    logger.debug("Involution check on %s: %s", H, [c.status.value for c in checks])
    return VerificationReport(target="involution", checks=checks)
