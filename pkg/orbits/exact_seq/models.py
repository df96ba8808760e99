from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from orbits.group_arith.concrete import ConcreteGroup
from orbits.reports import VerificationReport


class ConjugationConvention(str, Enum):
    """How the i-th conjugate of a subgroup is formed from the generator g."""
    INVERSE_FIRST = "g^-i x g^i"
    FORWARD = "g^i x g^-i"


@dataclass
class EpiToZ:
    """
    An epimorphism η: B → ℤ (or onto ℤ_modulus) with a distinguished g, η(g) = 1.

    `group` is a GroupExpr and elements follow group_arith shapes.
    """
    group: Any
    eta: Callable[[Any], int]
    g: Any
    modulus: Optional[int] = None


@dataclass
class SplitWitness:
    """θ: L ⋊_φ ℤ → B, θ(v, k) = v gᵏ, with its inverse and the report that checked it."""
    theta: Callable[[Any, int], Any]
    theta_inverse: Callable[[Any], tuple]
    phi: Callable[[Any], Any]
    report: VerificationReport


@dataclass
class ShortExact:
    """X ↪ Y ↠ Z with maps given as index arrays."""
    name: str
    groups: List[ConcreteGroup]
    maps: List[np.ndarray]


@dataclass
class ThreeByThree:
    """
    Nine nodes with their twelve arrows.

        K   ↪ A   ↠ A/K
        ↓      ↓     ↓
        L   ↪ B   ↠ B/L
        ↓      ↓     ↓
        L/K ↪ B/A ↠ B/AL

    `labels` is always filled; `groups`, `row_maps` and `col_maps` only when
    the diagram was instantiated concretely.
    """
    labels: List[List[str]]
    groups: Optional[List[List[ConcreteGroup]]] = None
    row_maps: Optional[List[List[np.ndarray]]] = None
    col_maps: Optional[List[List[np.ndarray]]] = None
    report: Optional[VerificationReport] = None
    notes: List[str] = field(default_factory=list)

    def rows(self) -> List[ShortExact]:
        return [
            ShortExact(f"row {i}", self.groups[i], self.row_maps[i])
            for i in range(3)
        ]

    def columns(self) -> List[ShortExact]:
        return [
            ShortExact(f"column {j}", [self.groups[i][j] for i in range(3)], self.col_maps[j])
            for j in range(3)
        ]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"labels": self.labels, "notes": self.notes}
        if self.groups is not None:
            data["orders"] = [[node.order for node in row] for row in self.groups]
        if self.report is not None:
            data["report"] = self.report.model_dump(mode="json")
        return data


class ConventionOutcome(BaseModel):
    """What θ does under one conjugation convention."""
    convention: ConjugationConvention
    homomorphism: bool
    image_matches_A: Optional[bool] = Field(None, description="None when no A was supplied")


class ShiftCompatReport(BaseModel):
    """Both sides of q∘φ = φ′∘q ⟺ ζ(a, k) = (q(a), k) is a homomorphism."""
    holds: bool
    commutes: bool = Field(..., description="q∘φ = φ′∘q on every tested element")
    zeta_homomorphism: bool = Field(..., description="ζ multiplicative on every tested pair")
    agree: bool
    elements_checked: int
    pairs_checked: int
    witness: Optional[List[Any]] = None
