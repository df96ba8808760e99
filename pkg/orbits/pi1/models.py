import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_validator

from orbits.group_core.grammar import parse_expr
from orbits.group_core.models import GroupExpr, Unit
from orbits.surface_decomp.models import MobiusDecomposition


class Pi1Case(str, Enum):
    A = "A"             # T1 orbits only
    B = "B"             # T2 orbits only
    C = "C"             # both
    AGGREGATE = "aggregate"


class SurfaceDecomposition(BaseModel):
    """A non-orientable surface cut into Möbius pieces and a background of class G."""
    genus: int = Field(..., ge=2, description="Non-orientable genus")
    background_group: GroupExpr = Field(default_factory=Unit)
    mobius_pieces: List[MobiusDecomposition] = Field(default_factory=list)
    name: Optional[str] = None

    @field_validator("background_group", mode="before")
    def parse_background(cls, v):
        return parse_expr(v) if isinstance(v, str) else v

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "SurfaceDecomposition":
        return cls.model_validate(json.loads(Path(path).read_text()))


class Pi1Result(BaseModel):
    """CLI-facing record of a π₁O(f) computation."""
    expression: str
    latex: str
    case: Pi1Case
    in_class_G: bool
    counts: Dict[str, int] = Field(default_factory=dict)
    pieces: List["Pi1Result"] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)
    background: Optional[str] = Field(None, description="Merged class-G factor of a surface")

    def to_json(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json", exclude_defaults=True)
        data.setdefault("counts", self.counts)
        return data


Pi1Result.model_rebuild()


def load_decomposition(path: Union[str, Path]) -> Union[MobiusDecomposition, SurfaceDecomposition]:
    """A Möbius decomposition, or a surface one when the file carries a genus."""
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict) and "genus" in data:
        return SurfaceDecomposition.model_validate(data)
    return MobiusDecomposition.model_validate(data)
