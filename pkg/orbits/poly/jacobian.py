"""
Partials, squarefreeness and the Bézout certificate xᵐ ∈ (∂g/∂x, ∂g/∂y).

All arithmetic is over ℚ with sympy polynomials. The (1, t) chart is used for
gcd and Bézout; a common factor x, invisible in that chart, is checked first.
"""
import logging
from fractions import Fraction

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from orbits.errors import NotSquarefreeError, PolySyntaxError
from orbits.poly.models import HomogeneousPoly, JacobianCertificate, X, Y

logger = logging.getLogger(__name__)

T = sympy.Symbol("t")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


def parse_poly(text: str) -> HomogeneousPoly:
    """
    Parse strings like "x^3 - 3*x*y^2" or "1/2*x*y" into a nonzero form.

    Raises:
        PolySyntaxError: unparsable text, other symbols, non-rational
            coefficients, a non-homogeneous or zero polynomial
    """
    try:
        expr = parse_expr(text, local_dict={"x": X, "y": Y}, transformations=_TRANSFORMATIONS, evaluate=True)
    except Exception as exc:
        raise PolySyntaxError(f"cannot parse {text!r}: {exc}") from exc
    if not isinstance(expr, sympy.Expr) or not expr.free_symbols <= {X, Y}:
        raise PolySyntaxError(f"{text!r} must be a polynomial in x and y")
    try:
        poly = sympy.Poly(sympy.expand(expr), X, Y)
    except sympy.PolynomialError as exc:
        raise PolySyntaxError(f"{text!r} is not a polynomial: {exc}") from exc
    if any(not c.is_Rational for c in poly.coeffs()):
        raise PolySyntaxError(f"{text!r} has non-rational coefficients")
    if poly.is_zero:
        raise PolySyntaxError("the zero polynomial has no degree")
    if not poly.is_homogeneous:
        raise PolySyntaxError(f"{text!r} is not homogeneous")
    return HomogeneousPoly.from_poly(poly.set_domain("QQ"), poly.total_degree())


def _form(expr, degree: int) -> HomogeneousPoly:
    return HomogeneousPoly.from_poly(sympy.Poly(sympy.expand(expr), X, Y, domain="QQ"), max(degree, 0))


def partials(g: HomogeneousPoly):
    """(∂g/∂x, ∂g/∂y), both of degree deg g − 1."""
    if g.degree == 0:
        raise ValueError("partials need degree >= 1")
    expr = g.to_expr()
    return _form(sympy.diff(expr, X), g.degree - 1), _form(sympy.diff(expr, Y), g.degree - 1)


def _divisible_by_x(form: HomogeneousPoly) -> bool:
    return all(i >= 1 for i, _ in form.coefficients)


def _chart(form: HomogeneousPoly) -> sympy.Poly:
    """form(1, t)."""
    return sympy.Poly(form.to_expr().subs({X: 1, Y: T}), T, domain="QQ")


def is_squarefree(g: HomogeneousPoly) -> bool:
    """
    True when ∂g/∂x and ∂g/∂y have no common factor, i.e. g has no multiple factor.

    Raises:
        ValueError: g is the zero polynomial
    """
    if g.is_zero:
        raise ValueError("the zero polynomial is not squarefree")
    if g.degree == 0:
        return True
    A, B = partials(g)
    if _divisible_by_x(A) and _divisible_by_x(B):
        return False
    common = sympy.gcd(_chart(A), _chart(B))
    return common.degree() <= 0


def _homogenize(p: sympy.Poly, degree: int) -> HomogeneousPoly:
    """x^degree · p(y/x) for a polynomial p(t) of degree <= degree."""
    coefficients = {}
    for (k,), c in p.terms():
        rational = sympy.Rational(c)
        coefficients[(degree - k, k)] = Fraction(int(rational.p), int(rational.q))
    return HomogeneousPoly(degree=degree, coefficients=coefficients)


def certificate_holds(g: HomogeneousPoly, certificate: JacobianCertificate) -> bool:
    """Expand A·P + B·Q − variableᵐ and test for the zero polynomial."""
    A, B = partials(g)
    target = X if certificate.variable == "x" else Y
    remainder = sympy.expand(
        A.to_expr() * certificate.P.to_expr() + B.to_expr() * certificate.Q.to_expr() - target**certificate.m
    )
    return remainder == 0


def _chart_bezout(alpha: sympy.Poly, beta: sympy.Poly):
    """(p, q) with αp + βq = 1; a zero chart leaves the other one to be a unit."""
    if not (alpha.is_zero or beta.is_zero):
        p, q, h = sympy.gcdex(alpha, beta)
        if h.degree() > 0:
            raise NotSquarefreeError(f"gcd of the partials in the chart is {h.as_expr()}")
        return p, q
    other = beta if alpha.is_zero else alpha
    if other.is_zero or other.degree() > 0:
        raise NotSquarefreeError(f"gcd of the partials in the chart is {other.as_expr()}")
    unit = sympy.Poly(sympy.Integer(1) / other.LC(), T, domain="QQ")
    zero = sympy.Poly(0, T, domain="QQ")
    return (zero, unit) if alpha.is_zero else (unit, zero)


def _x_certificate(g: HomogeneousPoly) -> JacobianCertificate:
    A, B = partials(g)
    p, q = _chart_bezout(_chart(A), _chart(B))
    # αp + βq = 1; homogenize with a common power of x
    k = max(0 if p.is_zero else p.degree(), 0 if q.is_zero else q.degree())
    m = g.degree - 1 + k
    P, Q = _homogenize(p, k), _homogenize(q, k)
    if m == 0:
        # degree-1 g: A, B are constants; lift the identity one degree
        P, Q, m = _form(P.to_expr() * X, 1), _form(Q.to_expr() * X, 1), 1
    return JacobianCertificate(variable="x", m=m, P=P, Q=Q)


def jacobian_certificate(g: HomogeneousPoly, variable: str = "x") -> JacobianCertificate:
    """
    Find homogeneous P, Q and m with (∂g/∂x)·P + (∂g/∂y)·Q = variableᵐ over ℚ.

    The y-certificate is the x-certificate of g(y, x) with variables swapped
    back. The returned certificate has been re-expanded and `verified` says
    whether the identity came out exact.

    Raises:
        NotSquarefreeError: the partials share a factor
    """
    if variable not in ("x", "y"):
        raise ValueError(f"variable must be 'x' or 'y', got {variable!r}")
    if g.is_zero or g.degree == 0:
        raise NotSquarefreeError("a constant has no isolated critical point to certify")
    if not is_squarefree(g):
        raise NotSquarefreeError(f"{g} has a multiple factor")
    if variable == "x":
        certificate = _x_certificate(g)
    else:
        swapped = _x_certificate(g.swapped())
        certificate = JacobianCertificate(variable="y", m=swapped.m, P=swapped.Q.swapped(), Q=swapped.P.swapped())
    certificate = certificate.model_copy(update={"verified": certificate_holds(g, certificate)})
    logger.debug("Certificate for %s in %s: m = %d", g, variable, certificate.m)
    return certificate
