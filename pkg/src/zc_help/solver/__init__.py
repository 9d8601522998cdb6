"""
Unit Solver

Box search over partial augmentations and the order-by-order induction.
"""

from .driver import (
    OrderVerdict,
    QuotientSolutions,
    VerificationResult,
    ZC1Status,
    central_translate,
    enumerate_power_assignments,
    order_spectrum,
    solve_order,
    trivial_solutions,
    verify_zc1,
)
from .search import (
    BoxSearch,
    SolutionBox,
    compile_system,
    enumerate_integer_solutions,
    propagate,
    solve_box,
)

__all__ = [
    "BoxSearch",
    "OrderVerdict",
    "QuotientSolutions",
    "SolutionBox",
    "VerificationResult",
    "ZC1Status",
    "central_translate",
    "compile_system",
    "enumerate_integer_solutions",
    "enumerate_power_assignments",
    "order_spectrum",
    "propagate",
    "solve_box",
    "solve_order",
    "trivial_solutions",
    "verify_zc1",
]
