import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from orbits.group_core.formatter import format_expr
from orbits.group_core.grammar import parse_expr
from orbits.group_core.models import GroupExpr

Signed = Tuple[int, int]


def _parse_group(v):
    return parse_expr(v) if isinstance(v, str) else v


class OrbitType(str, Enum):
    T1 = "T1"   # b distinct disks, orientation never reversed inside the orbit
    T2 = "T2"   # b/2 disks, each mapped onto itself reversed by sigma^(b/2)


class DiskRecord(BaseModel):
    """A disk component Yᵢ with its stabilizer group and optional Bieberbach subgroup."""
    group: GroupExpr
    delta: Optional[GroupExpr] = Field(None, description="Δᵢ ⊆ Sᵢ for the Bieberbach diagram")

    @field_validator("group", "delta", mode="before")
    def parse_strings(cls, v):
        return _parse_group(v)

    def to_json(self) -> Dict[str, Any]:
        data = {"group": format_expr(self.group)}
        if self.delta is not None:
            data["delta"] = format_expr(self.delta)
        return data


class MobiusDecomposition(BaseModel):
    """
    Special decomposition of a function on the Möbius band.

    Disks are numbered 1..n. sigma[i-1] = [target, sign] is the image of
    (disk i, +1) under the generator with η = 1. The image of (disk i, -1)
    is read from sigma_negative when the input lists it, and is otherwise
    (target, -sign) by the star rule.
    """
    cylinder_group: GroupExpr
    a: int = Field(..., ge=1, description="Minimal realized shift of the boundary edges")
    c: int = Field(..., ge=1, description="Number of boundary edges of the cylinder cell")
    disks: List[DiskRecord] = Field(default_factory=list)
    sigma: List[Signed] = Field(default_factory=list)
    sigma_negative: Optional[List[Signed]] = Field(None, description="Images of (disk i, -1); star rule when absent")
    gamma: Optional[str] = Field(None, description="Involution of H in grammar syntax; identity when absent")
    name: Optional[str] = None

    @field_validator("cylinder_group", mode="before")
    def parse_cylinder(cls, v):
        return _parse_group(v)

    @field_validator("sigma", "sigma_negative", mode="before")
    def sigma_pairs(cls, v):
        return v if v is None else [tuple(pair) for pair in v]

    @model_validator(mode="after")
    def sigma_covers_disks(self):
        if len(self.sigma) != len(self.disks):
            raise ValueError(f"sigma has {len(self.sigma)} entries for {len(self.disks)} disks")
        if self.sigma_negative is not None and len(self.sigma_negative) != len(self.disks):
            raise ValueError(f"sigma_negative has {len(self.sigma_negative)} entries for {len(self.disks)} disks")
        return self

    @property
    def n(self) -> int:
        return len(self.disks)

    @property
    def b(self) -> Optional[int]:
        """c / a, or None when a does not divide c."""
        return self.c // self.a if self.c % self.a == 0 else None

    def act(self, disk: int, sign: int) -> Signed:
        """sigma(disk, sign), from the listed table when the input gives one."""
        if sign < 0 and self.sigma_negative is not None:
            return self.sigma_negative[disk - 1]
        target, delta = self.sigma[disk - 1]
        return target, delta * sign

    def act_power(self, disk: int, sign: int, k: int) -> Signed:
        for _ in range(k):
            disk, sign = self.act(disk, sign)
        return disk, sign

    def to_json(self) -> Dict[str, Any]:
        data = {
            "cylinder_group": format_expr(self.cylinder_group),
            "a": self.a,
            "c": self.c,
            "disks": [disk.to_json() for disk in self.disks],
            "sigma": [list(pair) for pair in self.sigma],
        }
        if self.sigma_negative is not None:
            data["sigma_negative"] = [list(pair) for pair in self.sigma_negative]
        if self.gamma is not None:
            data["gamma"] = self.gamma
        if self.name is not None:
            data["name"] = self.name
        return data

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "MobiusDecomposition":
        return cls.model_validate(json.loads(Path(path).read_text()))


class OrbitRecord(BaseModel):
    type: OrbitType
    representative_group: GroupExpr
    length: int = Field(..., ge=1, description="Number of distinct disks in the orbit")
    disks: List[int] = Field(..., description="Disks in right-shift order starting at the representative")
    signs: List[int] = Field(..., description="Orientation of each disk relative to the representative")


class CwComplex(BaseModel):
    """
    A 2-dimensional CW partition given by face words.

    Face 0 is the cylinder cell C₀, face i ≥ 1 is disk i. Each face word is a
    cyclic list of signed 1-based edge indices. Edge endpoints are 0-based
    vertex indices.
    """
    edges: List[Tuple[int, int]] = Field(default_factory=list, description="(tail, head) per edge")
    faces: List[List[int]] = Field(default_factory=list)
    vertex_count: int = 0
    mode: str = ""
    edge_labels: List[str] = Field(default_factory=list)

    @property
    def counts(self) -> Tuple[int, int, int]:
        return self.vertex_count, len(self.edges), len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        v, e, f = self.counts
        return v - e + f


class CwAutomorphism(BaseModel):
    """
    A cellular self-map of a CwComplex given cell by cell.

    edge_map[e] = (target edge, sign) and face_map[f] = (target face, sign),
    all 0-based; vertices carry no sign.
    """
    complex: CwComplex
    vertex_map: List[int]
    edge_map: List[Tuple[int, int]]
    face_map: List[Tuple[int, int]]
    eta: Optional[int] = Field(None, description="η of the realized element when known")
    b: Optional[int] = None

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "CwAutomorphism":
        return cls.model_validate(json.loads(Path(path).read_text()))

    def fixed_counts(self) -> Dict[str, int]:
        """c₀⁺, c₁⁺, c₁⁻, c₂⁺, c₂⁻ together with the cell counts."""
        c0, c1, c2 = self.complex.counts
        counts = {"c0": c0, "c1": c1, "c2": c2, "c0+": 0, "c1+": 0, "c1-": 0, "c2+": 0, "c2-": 0}
        counts["c0+"] = sum(1 for v, w in enumerate(self.vertex_map) if v == w)
        for dim, cell_map in (("1", self.edge_map), ("2", self.face_map)):
            for cell, (target, sign) in enumerate(cell_map):
                if cell == target:
                    counts[f"c{dim}{'+' if sign > 0 else '-'}"] += 1
        return counts


class LefschetzReport(BaseModel):
    counts: Dict[str, int]
    euler_characteristic: int
    lefschetz_number: int
    holds: bool


class KerSActReport(BaseModel):
    """The seven equivalent conditions evaluated independently."""
    conditions: Dict[str, bool]
    agree: bool
    eta_consistent: Optional[bool] = Field(None, description="Condition (f) matches η ≡ 0 mod b")


class SphereLiftReport(BaseModel):
    counts: Dict[str, int]
    base_counts: Dict[str, int]
    euler_characteristic: int
    doubling_holds: bool
    identity_holds: bool

    @property
    def holds(self) -> bool:
        return self.euler_characteristic == 2 and self.doubling_holds and self.identity_holds
