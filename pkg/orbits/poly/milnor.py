"""
Milnor numbers of squarefree binary forms by exact linear algebra.

J = (∂g/∂x, ∂g/∂y) is homogeneous, so ℚ[x,y]/J splits by degree and
dim = Σ_s (s + 1 − rank J_s), where J_s is spanned by the monomial
multiples of the partials landing in degree s.
"""
import logging
from typing import List, Optional

import sympy

from orbits.errors import NotSquarefreeError
from orbits.poly.jacobian import is_squarefree, jacobian_certificate, partials
from orbits.poly.models import HomogeneousPoly, MilnorProfile
from orbits.reports import VerificationReport

logger = logging.getLogger(__name__)


def _degree_rank(A: HomogeneousPoly, B: HomogeneousPoly, s: int) -> int:
    """rank of J_s inside the (s + 1)-dimensional space of degree-s forms."""
    shift = s - A.degree
    if shift < 0:
        return 0
    rows = []
    for generator in (A, B):
        for a in range(shift + 1):
            row = [0] * (s + 1)
            # monomial x^a y^(shift-a) times the generator; column index = x-exponent
            for (i, j), c in generator.coefficients.items():
                row[i + a] += sympy.Rational(c.numerator, c.denominator)
            rows.append(row)
    return sympy.Matrix(rows).rank()


def milnor_profile(g: HomogeneousPoly, cutoff: int) -> List[int]:
    """dim(ℚ[x,y]/J)_s for s = 0..cutoff-1."""
    A, B = partials(g)
    return [s + 1 - _degree_rank(A, B, s) for s in range(cutoff)]


def milnor_number(g: HomogeneousPoly, cutoff: Optional[int] = None) -> int:
    """
    μ(g) = dim ℚ[x,y]/J for a squarefree form of degree >= 2.

    The default cutoff is p = 2m with m the larger exponent of the x- and
    y-certificates; every monomial of degree >= 2m - 1 already lies in J.

    Raises:
        NotSquarefreeError: g has a multiple factor (μ is infinite)
    """
    if g.degree < 2:
        raise ValueError("the Milnor number needs degree >= 2")
    if not is_squarefree(g):
        raise NotSquarefreeError(f"{g} has a multiple factor, so μ is infinite")
    if cutoff is None:
        m = max(jacobian_certificate(g, "x").m, jacobian_certificate(g, "y").m)
        cutoff = 2 * m
    mu = sum(milnor_profile(g, cutoff))
    logger.debug("μ(%s) = %d at cutoff %d", g, mu, cutoff)
    return mu


def milnor_report(g: HomogeneousPoly) -> MilnorProfile:
    """μ with its per-degree profile, re-checked at the cutoff p + 2."""
    m = max(jacobian_certificate(g, "x").m, jacobian_certificate(g, "y").m)
    cutoff = 2 * m
    profile = milnor_profile(g, cutoff + 2)
    mu = sum(profile[:cutoff])
    return MilnorProfile(cutoff=cutoff, codimensions=profile[:cutoff], mu=mu, stable=sum(profile) == mu)


def mu_equivalences(g: HomogeneousPoly) -> VerificationReport:
    """
    Evaluate the five equivalent finiteness conditions independently.

    A failing check means the condition is false for g; the final check
    says whether all five agree, which they must.
    """
    if g.degree < 1:
        raise ValueError("the equivalences need degree >= 1")
    report = VerificationReport(target="mu-equivalences")
    d = g.degree
    _, factors = sympy.sqf_list(g.to_poly())
    no_multiple = all(k == 1 for _, k in factors)
    coprime = is_squarefree(g)
    try:
        jacobian_certificate(g, "x")
        jacobian_certificate(g, "y")
        certified = True
    except NotSquarefreeError:
        certified = False
    p = max(2 * d - 3, 0)
    profile = milnor_profile(g, p + 2)
    full_rank = profile[p:p + 2] == [0, 0]
    wide = milnor_profile(g, 2 * d + 2)
    finite = wide[2 * d:] == [0, 0] and sum(wide[:2 * d]) == sum(wide)

    values = {
        "no multiple factors": no_multiple,
        "partials coprime": coprime,
        "certificates for x and y": certified,
        f"J contains every monomial of degree >= {p}": full_rank,
        "mu finite and stable": finite,
    }
    for name, value in values.items():
        report.add(name, value, f"{name}: {value}")
    agree = len(set(values.values())) == 1
    report.add("conditions agree", agree, "all five conditions agree" if agree else f"disagreement: {values}")
    report.details["values"] = values
    return report
