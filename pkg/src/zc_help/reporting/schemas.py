"""
Report Schemas

Pydantic models for the machine-readable solve/verify reports. The layout is
versioned by SCHEMA_VERSION and documented in README_REPORT_SCHEMA.md.
"""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field
from sympy import divisors

from .. import __version__
from ..constraints import ConstraintOptions
from ..groups import GroupData
from ..solver import OrderVerdict, VerificationResult
from ..units import SolvedUnit

SCHEMA_VERSION = "1.0"

OrderStatus = Literal[
    "verified-trivial",
    "reduced-via-central-translation",
    "open",
    "excluded-by-order-spectrum",
]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SolutionReport(_Model):
    """One surviving unit: its partial augmentations and those of its powers."""

    pa: Dict[str, int] = Field(..., description="Nonzero partial augmentations in class order")
    trivial: bool = Field(
        ..., description="Every power of u has a trivial partial augmentation vector"
    )
    class_id: Optional[str] = Field(None, description="The class u is conjugate to, when trivial")
    powers: Dict[str, Dict[str, int]] = Field(
        default_factory=dict, description="Partial augmentations of u^d, keyed 'u^d'"
    )


class Elimination(_Model):
    constraint: str = Field(..., description="Provenance label of the first violated constraint")
    points: int = Field(..., description="Box points or enumerated units it excluded")


class OrderReport(_Model):
    order: int
    status: OrderStatus
    solutions: List[SolutionReport] = Field(default_factory=list)
    assignments: int = 0
    translated_assignments: int = 0
    box_points: int = 0
    eliminations: List[Elimination] = Field(default_factory=list)
    cross_check: Optional[bool] = Field(
        None, description="Direct solving agreed with central translation"
    )
    notes: List[str] = Field(default_factory=list)
    seconds: Optional[float] = None


class QuotientReport(_Model):
    name: str
    verified: bool
    open_orders: List[int] = Field(default_factory=list)


class Report(_Model):
    """A complete solve or verify run."""

    schema_version: Literal["1.0"] = SCHEMA_VERSION
    tool_version: str = __version__
    command: Literal["solve", "verify"]
    group: str
    group_order: int
    classes: List[str]
    toggles: List[str]
    modular_primes: Optional[List[int]] = None
    quotients: List[QuotientReport] = Field(default_factory=list)
    orders: List[OrderReport]
    excluded_orders: List[int] = Field(default_factory=list)
    verdict: Literal["verified", "open"]
    exit_code: int

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.model_validate_json(text)


# Assembly


def solution_report(unit: SolvedUnit) -> SolutionReport:
    powers = {
        f"u^{d}": unit.power(int(d)).pa.entries for d in divisors(unit.order) if 1 < d < unit.order
    }
    return SolutionReport(
        pa=unit.pa.entries,
        trivial=unit.tree_trivial,
        class_id=unit.pa.trivial_class if unit.tree_trivial else None,
        powers=powers,
    )


def order_report(verdict: OrderVerdict) -> OrderReport:
    status = "excluded-by-order-spectrum" if verdict.excluded else verdict.status.value
    return OrderReport(
        order=verdict.order,
        status=status,  # type: ignore[arg-type]
        solutions=[solution_report(u) for u in verdict.solutions],
        assignments=verdict.assignments,
        translated_assignments=verdict.translated_assignments,
        box_points=verdict.box_points,
        eliminations=[Elimination(constraint=k, points=v) for k, v in verdict.eliminations.items()],
        cross_check=verdict.cross_check,
        notes=list(verdict.notes),
        seconds=None if verdict.seconds is None else round(verdict.seconds, 6),
    )


def quotient_report(result: VerificationResult) -> QuotientReport:
    return QuotientReport(
        name=result.group.name, verified=result.verified, open_orders=result.open_orders
    )


def build_report(
    command: Literal["solve", "verify"],
    g: GroupData,
    options: ConstraintOptions,
    verdicts: List[OrderVerdict],
    quotients: List[VerificationResult],
) -> Report:
    """Assemble the report; exit code 0 when no order is open, 2 otherwise."""
    orders = [order_report(v) for v in verdicts if not v.excluded]
    excluded = [v.order for v in verdicts if v.excluded]
    is_open = any(o.status == "open" for o in orders)
    return Report(
        command=command,
        group=g.name,
        group_order=g.order,
        classes=list(g.class_ids),
        toggles=options.enabled_toggles(),
        modular_primes=list(options.modular_primes) if options.modular_primes is not None else None,
        quotients=[quotient_report(q) for q in quotients],
        orders=orders,
        excluded_orders=excluded,
        verdict="open" if is_open else "verified",
        exit_code=2 if is_open else 0,
    )
