"""
The 3×3 diagram of stabilizer groups built from Bieberbach data.

Each disk carries Δᵢ ⊆ Sᵢ. With L = ker η, A the Δ-part together with
bℤ, and K = A ∩ L, the diagram reads

    ∏Δ   ↪  A    ↠  bℤ
    ∏S   ↪  B    ↠  ℤ
    ∏S/Δ ↪  B/A  ↠  ℤ_b

When every leaf is finite, B is replaced by its quotient with the shift taken
mod bN and the diagram is verified by exhaustive enumeration.
"""
import logging
from typing import List, Optional, Set

from core import config
from orbits.errors import HypothesisViolation, InfiniteLeafError, OrderCapExceeded
from orbits.exact_seq.diagram import build_3x3
from orbits.exact_seq.models import ThreeByThree
from orbits.group_arith.arith import enumerate_elements, identity
from orbits.group_arith.quotient import finite_quotient
from orbits.group_core.formatter import format_expr, format_involution
from orbits.group_core.grammar import parse_involution
from orbits.group_core.models import (
    Cyclic,
    Direct,
    IdentityInvolution,
    TwistedWrZ,
    Unit,
    WrZ,
    direct,
    finite_order,
)
from orbits.surface_decomp.models import MobiusDecomposition, OrbitType
from orbits.surface_decomp.orbits import classify_orbits

logger = logging.getLogger(__name__)


def delta_members(delta, S) -> Set:
    """
    Elements of the finite group S lying in its declared subgroup Δ.

    Supported inclusions: Δ = S, Δ = 1, Cyclic(k) ⊆ Cyclic(m) with k | m,
    and factorwise inclusions of direct products.

    Raises:
        HypothesisViolation: the inclusion is not one of the above
    """
    if delta == S:
        return set(enumerate_elements(S))
    if isinstance(delta, Unit):
        return {identity(S)}
    if isinstance(delta, Cyclic) and isinstance(S, Cyclic) and S.m % delta.m == 0:
        step = S.m // delta.m
        return {r for r in range(S.m) if r % step == 0}
    if isinstance(delta, Direct) and isinstance(S, Direct) and len(delta.factors) == len(S.factors):
        parts = [delta_members(d, s) for d, s in zip(delta.factors, S.factors)]
        return {x for x in enumerate_elements(S) if all(xi in part for xi, part in zip(x, parts))}
    raise HypothesisViolation(f"{format_expr(delta)} is a declared subgroup of {format_expr(S)}")


def _orbit_data(d: MobiusDecomposition):
    records = classify_orbits(d)
    pairs = {OrbitType.T1: [], OrbitType.T2: []}
    for record in records:
        disk = d.disks[record.disks[0] - 1]
        if disk.delta is None:
            raise HypothesisViolation("Bieberbach data", f"disk {record.disks[0]} has no Δ")
        pairs[record.type].append((disk.delta, disk.group))
    G = direct(*(s for _, s in pairs[OrbitType.T1]))
    dG = direct(*(delta for delta, _ in pairs[OrbitType.T1]))
    H = direct(*(s for _, s in pairs[OrbitType.T2]))
    dH = direct(*(delta for delta, _ in pairs[OrbitType.T2]))
    return G, dG, H, dH, bool(pairs[OrbitType.T2])


def _paren(e) -> str:
    text = format_expr(e)
    return text if text.isalnum() else f"({text})"


def _labels(b: int, G, dG, H, dH, twisted: bool, gamma) -> List[List[str]]:
    if not twisted:
        return [
            [f"{_paren(dG)}^{b}", f"{_paren(dG)}^{b} x {b}Z", f"{b}Z"],
            [f"{_paren(G)}^{b}", format_expr(WrZ(G, b)), "Z"],
            [f"({format_expr(G)}/{format_expr(dG)})^{b}", f"({format_expr(G)}/{format_expr(dG)}) wr_{b} Z{b}", f"Z{b}"],
        ]
    m = b // 2
    bottom = f"({format_expr(G)}/{format_expr(dG)}, {format_expr(H)}/{format_expr(dH)})"
    return [
        [f"{_paren(dG)}^{b} x {_paren(dH)}^{m}", f"{_paren(dG)}^{b} x {_paren(dH)}^{m} x {b}Z", f"{b}Z"],
        [f"{_paren(G)}^{b} x {_paren(H)}^{m}", format_expr(TwistedWrZ(G, H, gamma, m)), "Z"],
        [f"{bottom}^({b},{m})", f"{bottom} wr_({format_involution(gamma)},{m}) Z{b}", f"Z{b}"],
    ]


def bieberbach_diagram(d: MobiusDecomposition, depth: int = 2, cap: Optional[int] = None) -> ThreeByThree:
    """
    Symbolic 3×3 diagram for d, verified concretely when the leaves allow it.

    Args:
        d: A valid decomposition whose disks all carry `delta`
        depth: N for the finite quotient; the shift is reduced mod bN
        cap: Order cap for the concrete instantiation

    Returns:
        ThreeByThree whose labels are always set; groups and report are
        present only for the concrete instantiation. `notes` says which.

    Raises:
        InvalidDecompositionError: d fails validation
        HypothesisViolation: a disk lacks Δ, or an inclusion is not supported
    """
    G, dG, H, dH, twisted = _orbit_data(d)
    b = d.b
    gamma = parse_involution(d.gamma, H) if (twisted and d.gamma) else IdentityInvolution()
    labels = _labels(b, G, dG, H, dH, twisted, gamma)
    symbolic = ThreeByThree(labels=labels)

    if finite_order(G) is None or finite_order(H) is None:
        symbolic.notes.append("symbolic only: some leaf group is infinite")
        return symbolic
    B_expr = TwistedWrZ(G, H, gamma, b // 2) if twisted else WrZ(G, b)
    try:
        B = finite_quotient(B_expr, N=depth, cap=cap if cap is not None else config.ORDER_CAP)
    except (InfiniteLeafError, OrderCapExceeded) as exc:
        symbolic.notes.append(f"symbolic only: {exc}")
        return symbolic

    in_dG = delta_members(dG, G)
    in_dH = delta_members(dH, H) if twisted else set()
    L, A = [], []
    for i, x in enumerate(B.elements):
        shift = x[-1]
        if shift == 0:
            L.append(i)
        if shift % b:
            continue
        base_ok = all(a in in_dG for a in x[0])
        if twisted:
            base_ok = base_ok and all(h in in_dH for h in x[1])
        if base_ok:
            A.append(i)

    diagram = build_3x3(B, A, L, labels=labels)
    diagram.notes.append(f"verified on the quotient with shifts mod {b * depth}")
    logger.info(
        "Bieberbach diagram for %s: %s", d.name or "decomposition", "exact" if diagram.report.passed else "NOT exact"
    )
    return diagram
