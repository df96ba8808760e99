"""
Symbolic group expressions and involution descriptors.

Every value here is an immutable pydantic model, so expressions can be
hashed, compared structurally and shared freely between threads.
"""
from math import prod
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


# --- Involutive automorphisms ---

class IdentityInvolution(_Frozen):
    """γ = id."""
    kind: Literal["id"] = "id"


class FactorPermutation(_Frozen):
    """γ(x)_i = inner_i(x_{perm[i]}) on a Direct of structurally identical factors."""
    kind: Literal["perm"] = "perm"
    perm: tuple[int, ...] = Field(..., description="Involutive permutation of the H factors")
    inner: tuple["Involution", ...] = Field(default=(), description="Per-factor involutions")

    def __init__(self, perm=None, inner=None, **data):
        if perm is not None:
            data["perm"] = tuple(perm)
        if inner is not None:
            data["inner"] = tuple(inner)
        super().__init__(**data)

    @model_validator(mode="before")
    @classmethod
    def default_inner(cls, data):
        if isinstance(data, dict) and not data.get("inner") and "perm" in data:
            data = dict(data)
            data["inner"] = tuple(IdentityInvolution() for _ in data["perm"])
        return data

    @model_validator(mode="after")
    def check_involutive(self):
        size = len(self.perm)
        if sorted(self.perm) != list(range(size)):
            raise ValueError(f"perm {list(self.perm)} is not a permutation of 0..{size - 1}")
        if any(self.perm[self.perm[i]] != i for i in range(size)):
            raise ValueError(f"perm {list(self.perm)} is not an involution")
        if len(self.inner) != size:
            raise ValueError("inner must list one involution per factor")
        for i in range(size):
            if self.inner[i] != self.inner[self.perm[i]]:
                raise ValueError("inner involutions must agree on swapped factors")
        return self


class TableInvolution(_Frozen):
    """γ given pointwise on the canonical enumeration of a finite H."""
    kind: Literal["table"] = "table"
    name: str = Field(default="table", description="'inv' marks the inversion map")
    mapping: tuple[int, ...]

    def __init__(self, mapping=None, **data):
        if mapping is not None:
            data["mapping"] = tuple(mapping)
        super().__init__(**data)

    @field_validator("mapping")
    def check_bijection(cls, v):
        if sorted(v) != list(range(len(v))):
            raise ValueError("table involution must be a bijection of 0..|H|-1")
        if any(v[v[i]] != i for i in range(len(v))):
            raise ValueError("table map is not an involution")
        return v


Involution = Annotated[
    Union[IdentityInvolution, FactorPermutation, TableInvolution],
    Field(discriminator="kind"),
]


# --- Group expressions ---

class Unit(_Frozen):
    kind: Literal["unit"] = "unit"


class IntLine(_Frozen):
    kind: Literal["int"] = "int"


class Cyclic(_Frozen):
    kind: Literal["cyclic"] = "cyclic"
    m: int = Field(..., ge=1)

    def __init__(self, m=None, **data):
        if m is not None:
            data["m"] = m
        super().__init__(**data)


class Direct(_Frozen):
    kind: Literal["direct"] = "direct"
    factors: tuple["GroupExpr", ...]

    def __init__(self, factors=None, **data):
        if factors is not None:
            data["factors"] = tuple(factors)
        super().__init__(**data)

    @field_validator("factors")
    def at_least_two(cls, v):
        if len(v) < 2:
            raise ValueError("Direct needs at least two factors; use direct() to collapse")
        return v


class WrZ(_Frozen):
    """G≀ₘℤ."""
    kind: Literal["wrz"] = "wrz"
    base: "GroupExpr"
    m: int = Field(..., ge=1)

    def __init__(self, base=None, m=None, **data):
        if base is not None:
            data["base"] = base
        if m is not None:
            data["m"] = m
        super().__init__(**data)


class WrZm(_Frozen):
    """G≀ₘℤₘ."""
    kind: Literal["wrzm"] = "wrzm"
    base: "GroupExpr"
    m: int = Field(..., ge=1)

    def __init__(self, base=None, m=None, **data):
        if base is not None:
            data["base"] = base
        if m is not None:
            data["m"] = m
        super().__init__(**data)


class WrZZ(_Frozen):
    """G≀ₘ,ₙℤ²."""
    kind: Literal["wrzz"] = "wrzz"
    base: "GroupExpr"
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)

    def __init__(self, base=None, m=None, n=None, **data):
        for key, value in (("base", base), ("m", m), ("n", n)):
            if value is not None:
                data[key] = value
        super().__init__(**data)


class WrZZmn(_Frozen):
    """G≀ₘ,ₙ(ℤₘ×ℤₙ)."""
    kind: Literal["wrzzmn"] = "wrzzmn"
    base: "GroupExpr"
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)

    def __init__(self, base=None, m=None, n=None, **data):
        for key, value in (("base", base), ("m", m), ("n", n)):
            if value is not None:
                data[key] = value
        super().__init__(**data)


class _Twisted(_Frozen):
    g: "GroupExpr"
    h: "GroupExpr"
    gamma: Involution = Field(default_factory=IdentityInvolution)
    m: int = Field(..., ge=1)

    def __init__(self, g=None, h=None, gamma=None, m=None, **data):
        for key, value in (("g", g), ("h", h), ("gamma", gamma), ("m", m)):
            if value is not None:
                data[key] = value
        super().__init__(**data)

    @model_validator(mode="after")
    def gamma_fits_h(self):
        gamma = self.gamma
        if isinstance(gamma, FactorPermutation):
            parts = factors_of(self.h)
            if len(parts) != len(gamma.perm):
                raise ValueError(
                    f"perm has {len(gamma.perm)} entries but H has {len(parts)} factors"
                )
            for i, j in enumerate(gamma.perm):
                if parts[i] != parts[j]:
                    raise ValueError(f"perm swaps non-identical factors {i} and {j}")
        elif isinstance(gamma, TableInvolution):
            order = finite_order(self.h)
            if order is None:
                raise ValueError("a table involution needs a finite H")
            if order != len(gamma.mapping):
                raise ValueError(f"table has {len(gamma.mapping)} entries but |H| = {order}")
        return self


class TwistedWrZ(_Twisted):
    """(G,H)≀_{γ,m}ℤ."""
    kind: Literal["twz"] = "twz"


class TwistedWrZm(_Twisted):
    """(G,H)≀_{γ,m}ℤ₂ₘ."""
    kind: Literal["twzm"] = "twzm"


GroupExpr = Annotated[
    Union[Unit, IntLine, Cyclic, Direct, WrZ, WrZm, WrZZ, WrZZmn, TwistedWrZ, TwistedWrZm],
    Field(discriminator="kind"),
]

WREATH_KINDS = (WrZ, WrZm, WrZZ, WrZZmn)
TWISTED_KINDS = (TwistedWrZ, TwistedWrZm)


def direct(*factors) -> "GroupExpr":
    """Direct product collapsing the 0- and 1-factor cases."""
    if not factors:
        return Unit()
    if len(factors) == 1:
        return factors[0]
    return Direct(factors)


def factors_of(e) -> tuple:
    """Top-level factors of e (a non-Direct counts as a single factor, Unit as none)."""
    if isinstance(e, Direct):
        return e.factors
    if isinstance(e, Unit):
        return ()
    return (e,)


def finite_order(e) -> Optional[int]:
    """Order of e when it is a finite group, None otherwise."""
    if isinstance(e, Unit):
        return 1
    if isinstance(e, IntLine):
        return None
    if isinstance(e, Cyclic):
        return e.m
    if isinstance(e, Direct):
        orders = [finite_order(f) for f in e.factors]
        return None if None in orders else prod(orders)
    if isinstance(e, WrZm):
        base = finite_order(e.base)
        return None if base is None else base ** e.m * e.m
    if isinstance(e, WrZZmn):
        base = finite_order(e.base)
        return None if base is None else base ** (e.m * e.n) * e.m * e.n
    if isinstance(e, TwistedWrZm):
        g, h = finite_order(e.g), finite_order(e.h)
        if g is None or h is None:
            return None
        return g ** (2 * e.m) * h ** e.m * 2 * e.m
    return None


# --- Fingerprints ---

class FingerprintRecord(BaseModel):
    """Finite-quotient invariants of an expression, one entry per N = 1..depth."""
    expression: str
    depth: int = Field(..., ge=1)
    orders: list[int] = Field(default_factory=list, description="|quotient| for N = 1..depth")
    abelian_invariants: list[list[int]] = Field(
        default_factory=list, description="Invariant factors of each quotient's abelianization"
    )
    reduced_invariants: list[list[int]] = Field(
        default_factory=list, description="Invariant factors of the abelianization tensored with Z_N"
    )


for _model in (FactorPermutation, Direct, WrZ, WrZm, WrZZ, WrZZmn, TwistedWrZ, TwistedWrZm):
    _model.model_rebuild()
