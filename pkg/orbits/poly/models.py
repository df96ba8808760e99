from fractions import Fraction
from typing import Dict, Literal, Optional, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

X, Y = sympy.symbols("x y")


class HomogeneousPoly(BaseModel):
    """
    A homogeneous polynomial in x, y with exact rational coefficients.

    Only nonzero coefficients are stored, keyed by exponent pairs (i, j)
    for xⁱyʲ. The zero form of a given degree is allowed here; parse_poly
    rejects it where a nonzero form is required.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    degree: int = Field(..., ge=0)
    coefficients: Dict[Tuple[int, int], Fraction] = Field(default_factory=dict)

    @field_validator("coefficients", mode="before")
    def drop_zeros(cls, v):
        return {tuple(k): Fraction(c) for k, c in dict(v).items() if Fraction(c) != 0}

    @model_validator(mode="after")
    def exponents_match_degree(self):
        for i, j in self.coefficients:
            if i < 0 or j < 0 or i + j != self.degree:
                raise ValueError(f"monomial x^{i}*y^{j} does not have degree {self.degree}")
        return self

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.coefficients.items()))))

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def to_expr(self) -> sympy.Expr:
        return sum(
            (sympy.Rational(c.numerator, c.denominator) * X**i * Y**j for (i, j), c in self.coefficients.items()),
            sympy.Integer(0),
        )

    def to_poly(self) -> sympy.Poly:
        return sympy.Poly(self.to_expr(), X, Y, domain="QQ")

    @classmethod
    def from_poly(cls, poly: sympy.Poly, degree: int) -> "HomogeneousPoly":
        coefficients = {}
        for (i, j), c in poly.terms():
            rational = sympy.Rational(c)
            coefficients[(int(i), int(j))] = Fraction(int(rational.p), int(rational.q))
        return cls(degree=degree, coefficients=coefficients)

    def swapped(self) -> "HomogeneousPoly":
        """g(y, x)."""
        return HomogeneousPoly(degree=self.degree, coefficients={(j, i): c for (i, j), c in self.coefficients.items()})

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": {f"{i},{j}": str(c) for (i, j), c in sorted(self.coefficients.items())},
        }

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return sympy.sstr(self.to_expr()).replace("**", "^")


class JacobianCertificate(BaseModel):
    """A·P + B·Q = variableᵐ with A = ∂g/∂x, B = ∂g/∂y."""
    variable: Literal["x", "y"]
    m: int = Field(..., ge=1)
    P: HomogeneousPoly
    Q: HomogeneousPoly
    verified: bool = Field(False, description="Identity re-expanded and found exact")

    def to_json(self) -> dict:
        return {
            "variable": self.variable,
            "m": self.m,
            "P": str(self.P),
            "Q": str(self.Q),
            "verified": self.verified,
        }


class MilnorProfile(BaseModel):
    """dim of (ℚ[x,y]/J) in each degree below the cutoff."""
    cutoff: int
    codimensions: list[int]
    mu: int
    stable: Optional[bool] = Field(None, description="Same μ at cutoff + 2")
