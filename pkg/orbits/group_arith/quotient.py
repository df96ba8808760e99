"""
Finite quotients of GroupExprs.

Every ℤ-coordinate is replaced by ℤ_{period·N}, where the period is the one
the construction forces (m for WrZ, 2m for the twisted product, (m, n) for
WrZZ). The subgroup that is killed acts trivially on the tuple part, so the
reduction is a homomorphism and the arithmetic of arith.py can be reused
followed by reducing the result.
"""
import logging
from itertools import product
from math import prod
from typing import Optional

from core import config
from orbits.errors import InfiniteLeafError, OrderCapExceeded
from orbits.group_arith.arith import _mul
from orbits.group_arith.concrete import ConcreteGroup
from orbits.group_core.models import (
    Cyclic,
    Direct,
    IntLine,
    TwistedWrZ,
    TwistedWrZm,
    Unit,
    WrZ,
    WrZm,
    WrZZ,
    WrZZmn,
)

logger = logging.getLogger(__name__)


def quotient_order(e, N: int, leaf_modulus: Optional[int] = None) -> int:
    """Order of finite_quotient(e, N) computed from the shape alone."""
    if isinstance(e, Unit):
        return 1
    if isinstance(e, IntLine):
        if leaf_modulus is None:
            raise InfiniteLeafError("IntLine leaf is not wrapped by a quotienting construction")
        return leaf_modulus
    if isinstance(e, Cyclic):
        return e.m
    if isinstance(e, Direct):
        return prod(quotient_order(f, N, leaf_modulus) for f in e.factors)
    if isinstance(e, WrZ):
        return quotient_order(e.base, N, leaf_modulus) ** e.m * e.m * N
    if isinstance(e, WrZm):
        return quotient_order(e.base, N, leaf_modulus) ** e.m * e.m
    if isinstance(e, WrZZ):
        return quotient_order(e.base, N, leaf_modulus) ** (e.m * e.n) * (e.m * N) * (e.n * N)
    if isinstance(e, WrZZmn):
        return quotient_order(e.base, N, leaf_modulus) ** (e.m * e.n) * e.m * e.n
    if isinstance(e, TwistedWrZ):
        g, h = quotient_order(e.g, N, leaf_modulus), quotient_order(e.h, N, leaf_modulus)
        return g ** (2 * e.m) * h ** e.m * 2 * e.m * N
    if isinstance(e, TwistedWrZm):
        g, h = quotient_order(e.g, N, leaf_modulus), quotient_order(e.h, N, leaf_modulus)
        return g ** (2 * e.m) * h ** e.m * 2 * e.m
    raise TypeError(f"Not a group expression: {e!r}")


def reduce_element(e, u, N: int, leaf_modulus: Optional[int] = None):
    """Image of u under the quotient map (every ℤ-coordinate reduced)."""
    if isinstance(e, (Unit, Cyclic)):
        return u
    if isinstance(e, IntLine):
        return u % leaf_modulus
    if isinstance(e, Direct):
        return tuple(reduce_element(f, x, N, leaf_modulus) for f, x in zip(e.factors, u))
    if isinstance(e, (WrZ, WrZm)):
        tup = tuple(reduce_element(e.base, x, N, leaf_modulus) for x in u[0])
        return (tup, u[1] % (e.m * N) if isinstance(e, WrZ) else u[1])
    if isinstance(e, (WrZZ, WrZZmn)):
        matrix = tuple(tuple(reduce_element(e.base, x, N, leaf_modulus) for x in row) for row in u[0])
        if isinstance(e, WrZZ):
            return (matrix, (u[1][0] % (e.m * N), u[1][1] % (e.n * N)))
        return (matrix, u[1])
    if isinstance(e, (TwistedWrZ, TwistedWrZm)):
        c = tuple(reduce_element(e.g, x, N, leaf_modulus) for x in u[0])
        d = tuple(reduce_element(e.h, x, N, leaf_modulus) for x in u[1])
        return (c, d, u[2] % (2 * e.m * N) if isinstance(e, TwistedWrZ) else u[2])
    raise TypeError(f"Not a group expression: {e!r}")


def quotient_elements(e, N: int, leaf_modulus: Optional[int] = None) -> list:
    """Canonical representatives of the quotient, in itertools.product order."""
    if isinstance(e, Unit):
        return [()]
    if isinstance(e, IntLine):
        return list(range(leaf_modulus))
    if isinstance(e, Cyclic):
        return list(range(e.m))
    if isinstance(e, Direct):
        return list(product(*(quotient_elements(f, N, leaf_modulus) for f in e.factors)))
    if isinstance(e, (WrZ, WrZm)):
        base = quotient_elements(e.base, N, leaf_modulus)
        period = e.m * N if isinstance(e, WrZ) else e.m
        return list(product(product(base, repeat=e.m), range(period)))
    if isinstance(e, (WrZZ, WrZZmn)):
        base = quotient_elements(e.base, N, leaf_modulus)
        scale = N if isinstance(e, WrZZ) else 1
        shifts = list(product(range(e.m * scale), range(e.n * scale)))
        out = []
        for flat in product(base, repeat=e.m * e.n):
            matrix = tuple(tuple(flat[i * e.n:(i + 1) * e.n]) for i in range(e.m))
            out.extend((matrix, s) for s in shifts)
        return out
    if isinstance(e, (TwistedWrZ, TwistedWrZm)):
        gs = quotient_elements(e.g, N, leaf_modulus)
        hs = quotient_elements(e.h, N, leaf_modulus)
        period = 2 * e.m * N if isinstance(e, TwistedWrZ) else 2 * e.m
        return [
            (c, d, k)
            for c in product(gs, repeat=2 * e.m)
            for d in product(hs, repeat=e.m)
            for k in range(period)
        ]
    raise TypeError(f"Not a group expression: {e!r}")


def finite_quotient(
    e,
    N: int = 1,
    leaf_modulus: Optional[int] = None,
    cap: Optional[int] = None,
) -> ConcreteGroup:
    """
    Realize the finite quotient of e as a ConcreteGroup.

    Args:
        e: Group expression; IntLine leaves need leaf_modulus
        N: Multiplier applied to every construction-forced period
        leaf_modulus: Modulus for bare ℤ leaves (None rejects them)
        cap: Maximal order, ORBITS_ORDER_CAP by default

    Returns:
        ConcreteGroup whose elements are reduced elements of e.

    Raises:
        InfiniteLeafError: an IntLine leaf without leaf_modulus
        OrderCapExceeded: the quotient would be larger than cap
    """
    cap = config.ORDER_CAP if cap is None else cap
    order = quotient_order(e, N, leaf_modulus)
    if order > cap:
        raise OrderCapExceeded(order, cap)
    elements = quotient_elements(e, N, leaf_modulus)
    logger.debug("Building quotient of order %d (N=%d)", order, N)
    return ConcreteGroup.from_operation(
        elements,
        lambda x, y: reduce_element(e, _mul(e, x, y), N, leaf_modulus),
        name=f"quotient(N={N})",
    )
