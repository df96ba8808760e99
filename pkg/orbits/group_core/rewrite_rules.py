"""
Normal forms of group expressions.

normalize() rewrites children first and then applies the first matching rule
of REWRITE_RULES, repeating until nothing fires. Each rule is one of the
standard isomorphisms between wreath-type constructions; Direct products are
flattened, stripped of unit factors and sorted by structural_key.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Tuple

from orbits.group_core.constants import FACTOR_RANK
from orbits.group_core.formatter import format_expr
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
    WrZZ,
    WrZZmn,
    direct,
    factors_of,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RewriteRule:
    """A single isomorphism L ≅ R applied left to right."""
    name: str
    applies: Callable[[object], bool]
    rewrite: Callable[[object], object]
    description: str


def structural_key(e) -> Tuple:
    """Deterministic sort key for Direct factors."""
    params: Tuple[int, ...] = ()
    if isinstance(e, Cyclic):
        params = (e.m,)
    elif isinstance(e, Direct):
        params = (len(e.factors),)
    elif isinstance(e, (WrZ, WrZm, TwistedWrZ, TwistedWrZm)):
        params = (e.m,)
    elif isinstance(e, (WrZZ, WrZZmn)):
        params = (e.m, e.n)
    return FACTOR_RANK[e.kind], params, format_expr(e)


def _flat_factors(e) -> List:
    out = []
    for f in e.factors:
        if isinstance(f, Direct):
            out.extend(_flat_factors(f))
        elif not isinstance(f, Unit):
            out.append(f)
    return out


def _is_canonical_direct(e) -> bool:
    if not isinstance(e, Direct):
        return False
    if any(isinstance(f, (Direct, Unit)) for f in e.factors):
        return False
    keys = [structural_key(f) for f in e.factors]
    return keys == sorted(keys)


def _canonical_direct(e):
    return direct(*sorted(_flat_factors(e), key=structural_key))


def _untwisted(e):
    if isinstance(e, TwistedWrZ):
        return WrZ(e.g, 2 * e.m)
    return WrZm(e.g, 2 * e.m)


REWRITE_RULES: List[RewriteRule] = [
    RewriteRule(
        "cyclic-one",
        lambda e: isinstance(e, Cyclic) and e.m == 1,
        lambda e: Unit(),
        "Z1 = 1",
    ),
    RewriteRule(
        "direct-canonical",
        lambda e: isinstance(e, Direct) and not _is_canonical_direct(e),
        _canonical_direct,
        "flatten nested products, drop 1 factors, sort factors",
    ),
    RewriteRule(
        "unit-wreath",
        lambda e: isinstance(e, WrZ) and isinstance(e.base, Unit),
        lambda e: IntLine(),
        "1 wr_m Z = Z",
    ),
    RewriteRule(
        "wreath-one",
        lambda e: isinstance(e, WrZ) and e.m == 1,
        lambda e: Direct([e.base, IntLine()]),
        "G wr_1 Z = G x Z",
    ),
    RewriteRule(
        "finite-wreath-one",
        lambda e: isinstance(e, WrZm) and e.m == 1,
        lambda e: e.base,
        "G wr_1 Z_1 = G",
    ),
    RewriteRule(
        "finite-unit-wreath",
        lambda e: isinstance(e, WrZm) and isinstance(e.base, Unit),
        lambda e: Cyclic(e.m),
        "1 wr_m Z_m = Z_m",
    ),
    RewriteRule(
        "torus-one-one",
        lambda e: isinstance(e, WrZZ) and e.m == 1 and e.n == 1,
        lambda e: Direct([e.base, IntLine(), IntLine()]),
        "G wr_{1,1} Z^2 = G x Z x Z",
    ),
    RewriteRule(
        "torus-m-one",
        lambda e: isinstance(e, WrZZ) and e.n == 1,
        lambda e: Direct([WrZ(e.base, e.m), IntLine()]),
        "G wr_{m,1} Z^2 = (G wr_m Z) x Z",
    ),
    RewriteRule(
        "torus-one-n",
        lambda e: isinstance(e, WrZZ) and e.m == 1,
        lambda e: Direct([IntLine(), WrZ(e.base, e.n)]),
        "G wr_{1,n} Z^2 = Z x (G wr_n Z)",
    ),
    RewriteRule(
        "unit-torus",
        lambda e: isinstance(e, WrZZ) and isinstance(e.base, Unit),
        lambda e: Direct([IntLine(), IntLine()]),
        "1 wr_{m,n} Z^2 = Z x Z",
    ),
    RewriteRule(
        "finite-torus-m-one",
        lambda e: isinstance(e, WrZZmn) and e.n == 1,
        lambda e: WrZm(e.base, e.m),
        "G wr_{m,1} (Z_m x Z_1) = G wr_m Z_m",
    ),
    RewriteRule(
        "finite-torus-one-n",
        lambda e: isinstance(e, WrZZmn) and e.m == 1,
        lambda e: WrZm(e.base, e.n),
        "G wr_{1,n} (Z_1 x Z_n) = G wr_n Z_n",
    ),
    RewriteRule(
        "finite-unit-torus",
        lambda e: isinstance(e, WrZZmn) and isinstance(e.base, Unit),
        lambda e: Direct([Cyclic(e.m), Cyclic(e.n)]),
        "1 wr_{m,n} (Z_m x Z_n) = Z_m x Z_n",
    ),
    RewriteRule(
        "untwist",
        lambda e: isinstance(e, (TwistedWrZ, TwistedWrZm))
        and isinstance(e.h, Unit)
        and isinstance(e.gamma, IdentityInvolution),
        _untwisted,
        "(G,1) wr_{id,m} Z = G wr_2m Z",
    ),
]


def _normalize_h(h, gamma):
    """Normalize H as far as γ allows and carry γ along."""
    if isinstance(gamma, IdentityInvolution):
        return normalize(h), gamma
    if isinstance(gamma, TableInvolution):
        # a table is indexed by the enumeration of H as written
        return h, gamma
    parts = list(factors_of(h))
    inner = list(gamma.inner)
    parts = [normalize(p) if isinstance(inner[i], IdentityInvolution) else p for i, p in enumerate(parts)]
    keep = [i for i, p in enumerate(parts) if not isinstance(p, Unit)]
    order = sorted(keep, key=lambda i: structural_key(parts[i]))
    position = {old: new for new, old in enumerate(order)}
    perm = [position[gamma.perm[old]] for old in order]
    inner = [inner[old] for old in order]
    parts = [parts[old] for old in order]
    if not parts:
        return Unit(), IdentityInvolution()
    if len(parts) == 1:
        return _normalize_h(parts[0], inner[0])
    if all(perm[i] == i for i in range(len(perm))) and all(isinstance(g, IdentityInvolution) for g in inner):
        return normalize(Direct(parts)), IdentityInvolution()
    return Direct(parts), FactorPermutation(perm, inner)


def _normalize_children(e):
    if isinstance(e, Direct):
        return Direct([normalize(f) for f in e.factors])
    if isinstance(e, (WrZ, WrZm)):
        return type(e)(normalize(e.base), e.m)
    if isinstance(e, (WrZZ, WrZZmn)):
        return type(e)(normalize(e.base), e.m, e.n)
    if isinstance(e, (TwistedWrZ, TwistedWrZm)):
        h, gamma = _normalize_h(e.h, e.gamma)
        return type(e)(normalize(e.g), h, gamma, e.m)
    return e


def normalize(e):
    """
    Canonical representative of e under the rewrite rules.

    The result is a fixed point of normalize and is isomorphic to e. It is
    one choice of representative, not a complete isomorphism invariant.
    """
    e = _normalize_children(e)
    for rule in REWRITE_RULES:
        if rule.applies(e):
            logger.debug("Rewrite %s on %s", rule.name, format_expr(e))
            return normalize(rule.rewrite(e))
    return e
