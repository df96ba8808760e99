import logging
from math import gcd
from typing import List, Optional

from core import config
from orbits.group_arith.quotient import finite_quotient
from orbits.group_core.formatter import format_expr
from orbits.group_core.models import FingerprintRecord

logger = logging.getLogger(__name__)


def _reduce_mod(invariants: List[int], N: int) -> List[int]:
    """Invariant factors of A ⊗ ℤ_N, given those of A."""
    reduced = [gcd(c, N) for c in invariants]
    return [c for c in reduced if c > 1]


def invariant_fingerprint(e, depth: Optional[int] = None, cap: Optional[int] = None) -> FingerprintRecord:
    """
    Orders and abelian invariants of the quotients of e for N = 1..depth.

    The quotient at level N reduces bare ℤ leaves mod N and shifts mod
    period·N. Every element it kills is an N-th power, so the abelianization
    of the quotient tensored with ℤ_N is the abelianization of e itself
    tensored with ℤ_N. Those `reduced_invariants` depend only on the
    isomorphism class of e; the raw orders depend on the periods as written.

    Raises:
        OrderCapExceeded: some quotient would exceed cap
    """
    depth = depth or config.DEPTH
    record = FingerprintRecord(expression=format_expr(e), depth=depth)
    for N in range(1, depth + 1):
        quotient = finite_quotient(e, N, leaf_modulus=N, cap=cap)
        invariants = quotient.abelian_invariants()
        record.orders.append(quotient.order)
        record.abelian_invariants.append(invariants)
        record.reduced_invariants.append(_reduce_mod(invariants, N))
    logger.debug("Fingerprint of %s: %s", record.expression, record.reduced_invariants)
    return record


def fingerprints_differ(a: FingerprintRecord, b: FingerprintRecord) -> bool:
    """
    True when the records prove the two groups non-isomorphic.

    Only the reduced invariants are compared: 1 wr_2 Z and Z are isomorphic
    but have quotients of different orders.
    """
    depth = min(a.depth, b.depth)
    return a.reduced_invariants[:depth] != b.reduced_invariants[:depth]

