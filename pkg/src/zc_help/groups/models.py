"""
Group File Schema

Pydantic models for the JSON group file. They check shape only; the
mathematical invariants live in `zc_help.groups.validation`.
"""

from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field


class _FileModel(BaseModel):
    model_config = ConfigDict(extra="forbid", strict=True)


class ClassModel(_FileModel):
    """One conjugacy class column."""

    id: str = Field(..., min_length=1, description="Class label, e.g. '8a'")
    order: int = Field(..., ge=1, description="Element order")
    size: int = Field(..., ge=1, description="Number of elements in the class")


class CentralClassModel(_FileModel):
    id: str = Field(..., description="Singleton central class")
    inverse: str = Field(..., description="Class of the inverse element")


class CentralModel(_FileModel):
    classes: List[CentralClassModel] = Field(..., min_length=1)
    mult: Dict[str, Dict[str, str]] = Field(
        ..., description="mult[z][c] is the class of z·g for g in c"
    )


class CharacterModel(_FileModel):
    id: str = Field(..., min_length=1)
    degree: int = Field(..., ge=1)
    values: List[Any] = Field(..., description="Cyclotomic literals in class order")


class BrauerDifferenceModel(_FileModel):
    id: str = Field(..., min_length=1)
    plus: str
    minus: str


class BrauerModel(_FileModel):
    p: int = Field(..., ge=2)
    differences: List[BrauerDifferenceModel]


class QuotientModel(_FileModel):
    name: str = Field(..., description="Name of the quotient group file")
    kernel: List[str] = Field(..., min_length=1, description="Central classes forming N")
    fusion: Dict[str, str] = Field(..., description="Class of G -> class of G/N")


class PublishedRowModel(_FileModel):
    character: str
    values: Dict[str, Any]


class GroupFileModel(_FileModel):
    """Top-level group file."""

    name: str = Field(..., min_length=1)
    order: int = Field(..., ge=1)
    classes: List[ClassModel] = Field(..., min_length=1)
    power_maps: Dict[str, Dict[str, str]]
    central: CentralModel
    characters: List[CharacterModel] = Field(..., min_length=1)
    brauer: List[BrauerModel] = Field(default_factory=list)
    quotients: List[QuotientModel] = Field(default_factory=list)
    published: List[PublishedRowModel] = Field(default_factory=list)
