"""
π₁O(f) from decomposition data.

On the Möbius band the answer is A × G≀_bℤ when every disk orbit is of
type T1 (b is then odd), and A × (G, H)≀_{γ,m}ℤ with m = b/2 otherwise,
where G and H multiply the T1 and T2 orbit representatives. A
non-orientable surface multiplies its Möbius pieces and folds every factor
of class G into the background.
"""
import logging
from typing import List, Tuple

from orbits.errors import InvalidDecompositionError
from orbits.group_core.classifier import is_in_class_G
from orbits.group_core.formatter import format_expr
from orbits.group_core.grammar import parse_involution
from orbits.group_core.models import IdentityInvolution, TwistedWrZ, Unit, WrZ, direct, factors_of
from orbits.group_core.rewrite_rules import normalize
from orbits.pi1.models import Pi1Case, Pi1Result, SurfaceDecomposition
from orbits.reports import CheckStatus, VerificationReport
from orbits.surface_decomp.models import MobiusDecomposition, OrbitType
from orbits.surface_decomp.orbits import classify_orbits, orbit_counts
from orbits.surface_decomp.validator import validate_decomposition

logger = logging.getLogger(__name__)


def _mobius(d: MobiusDecomposition) -> Tuple[object, Pi1Case, dict]:
    records = classify_orbits(d)
    counts = orbit_counts(d, records)
    G = direct(*(r.representative_group for r in records if r.type == OrbitType.T1))
    H = direct(*(r.representative_group for r in records if r.type == OrbitType.T2))
    b, m = counts["b"], counts["m"]
    if counts["e"] == 0:
        case, wreath = Pi1Case.A, WrZ(G, b)
    else:
        gamma = parse_involution(d.gamma, H) if d.gamma else IdentityInvolution()
        case = Pi1Case.B if counts["d"] == 0 else Pi1Case.C
        wreath = TwistedWrZ(Unit() if case == Pi1Case.B else G, H, gamma, m)
    return normalize(direct(d.cylinder_group, wreath)), case, counts


def pi1_mobius(d: MobiusDecomposition):
    """
    π₁O(f) for a special decomposition of the Möbius band, normalized.

    Raises:
        InvalidDecompositionError: d fails validation
    """
    return _mobius(d)[0]


def _class_G_warnings(report: VerificationReport) -> List[str]:
    return [c.message for c in report.checks if c.status == CheckStatus.WARNING]


def mobius_result(d: MobiusDecomposition) -> Pi1Result:
    """pi1_mobius with its case, orbit counts and class-G warnings."""
    expr, case, counts = _mobius(d)
    result = Pi1Result(
        expression=format_expr(expr),
        latex=format_expr(expr, "latex"),
        case=case,
        in_class_G=is_in_class_G(expr),
        counts=counts,
        warnings=_class_G_warnings(validate_decomposition(d)),
    )
    logger.info("π₁ of %s (case %s): %s", d.name or "decomposition", case.value, result.expression)
    return result


def validate_surface(s: SurfaceDecomposition) -> VerificationReport:
    report = VerificationReport(target=s.name or "surface")
    k = len(s.mobius_pieces)
    report.add("pieces fit the genus", k <= s.genus, f"k = {k}, genus = {s.genus}", [k, s.genus])
    report.add(
        "background in class G",
        is_in_class_G(s.background_group),
        f"A = {format_expr(s.background_group)}",
    )
    for i, piece in enumerate(s.mobius_pieces, start=1):
        sub = validate_decomposition(piece)
        report.add(f"piece {i} valid", sub.passed, ", ".join(c.check_name for c in sub.failures()) or "valid")
    return report


def _aggregate(s: SurfaceDecomposition) -> Tuple[object, object, List[Pi1Result]]:
    report = validate_surface(s)
    if not report.passed:
        raise InvalidDecompositionError(report)
    pieces = [mobius_result(piece) for piece in s.mobius_pieces]
    background, twisted = [s.background_group], []
    for piece in s.mobius_pieces:
        for factor in factors_of(pi1_mobius(piece)):
            (background if is_in_class_G(factor) else twisted).append(factor)
    A = normalize(direct(*background))
    return normalize(direct(A, *twisted)), A, pieces


def pi1_nonorientable(s: SurfaceDecomposition):
    """
    A × ∏ (G_j, H_j)≀_{γ_j,m_j}ℤ over the Möbius pieces; k = 0 gives A.

    Raises:
        InvalidDecompositionError: k > genus, A outside class G, or an invalid piece
    """
    return _aggregate(s)[0]


def surface_result(s: SurfaceDecomposition) -> Pi1Result:
    expr, A, pieces = _aggregate(s)
    warnings = [w for piece in pieces for w in piece.warnings]
    result = Pi1Result(
        expression=format_expr(expr),
        latex=format_expr(expr, "latex"),
        case=Pi1Case.AGGREGATE,
        in_class_G=is_in_class_G(expr),
        counts={"genus": s.genus, "k": len(s.mobius_pieces)},
        pieces=pieces,
        warnings=warnings,
        background=format_expr(A),
    )
    logger.info("π₁ of %s: %s", s.name or "surface", result.expression)
    return result


def pi1_result(data) -> Pi1Result:
    """Dispatch on the decomposition kind."""
    if isinstance(data, SurfaceDecomposition):
        return surface_result(data)
    return mobius_result(data)

