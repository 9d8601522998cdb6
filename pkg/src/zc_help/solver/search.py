"""
Integer Box Search

Scales a ConstraintSystem to integer rows, bounds every partial augmentation
by orthogonality inversion and interval propagation, then enumerates the
integer points of the box depth-first with propagation at every node.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd, lcm, prod
from typing import Optional

import structlog

from ..constraints import ConstraintSystem, LinearForm
from ..errors import UnboundedVariableError
from ..units import PAVector

logger = structlog.get_logger()

# Upper limit on propagation sweeps while some bound is still infinite.
_MAX_PASSES = 1000

Bound = Optional[int]


@dataclass(frozen=True)
class SolutionBox:
    """Per-variable integer bounds; `infeasible_by` names the row that emptied the box."""

    variables: tuple[str, ...]
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    infeasible_by: Optional[str] = None

    @property
    def feasible(self) -> bool:
        return self.infeasible_by is None

    def bounds(self, class_id: str) -> tuple[int, int]:
        i = self.variables.index(class_id)
        return self.lower[i], self.upper[i]

    @property
    def size(self) -> int:
        if not self.feasible:
            return 0
        return prod(hi - lo + 1 for lo, hi in zip(self.lower, self.upper))

    def __str__(self) -> str:
        if not self.feasible:
            return f"empty ({self.infeasible_by})"
        return ", ".join(
            f"e({v}) in [{lo}, {hi}]" for v, lo, hi in zip(self.variables, self.lower, self.upper)
        )


@dataclass(frozen=True)
class Row:
    """offset + Σ coeffs·x must lie in [lo, hi] and be divisible by modulus."""

    label: str
    coeffs: tuple[int, ...]
    offset: int
    lo: int
    hi: int
    modulus: int = 1


def _scale(form: LinearForm, variables: tuple[str, ...]) -> tuple[int, tuple[int, ...], int]:
    denominator = lcm(form.constant.denominator, *(a.denominator for _, a in form.coefficients))
    index = {v: i for i, v in enumerate(variables)}
    coeffs = [0] * len(variables)
    for c, a in form.coefficients:
        coeffs[index[c]] = int(a * denominator)
    return denominator, tuple(coeffs), int(form.constant * denominator)


def compile_system(system: ConstraintSystem) -> list[Row]:
    """Integer rows for every equality and μ-form; identical rows are kept once."""
    rows: list[Row] = []
    seen: set[tuple] = set()

    def add(row: Row) -> None:
        key = (row.coeffs, row.offset, row.lo, row.hi, row.modulus)
        if key not in seen:
            seen.add(key)
            rows.append(row)

    for eq in system.equalities:
        shifted = LinearForm(eq.form.constant - eq.target, eq.form.coefficients)
        _, coeffs, offset = _scale(shifted, system.variables)
        add(Row(eq.label, coeffs, offset, 0, 0))
    for mu in system.mu_forms:
        denominator, coeffs, offset = _scale(mu.form, system.variables)
        add(Row(mu.label, coeffs, offset, 0, mu.degree * denominator, denominator))
    return rows


def _size(lo: list[Bound], hi: list[Bound]) -> int:
    return prod(b - a + 1 for a, b in zip(lo, hi))  # type: ignore[operator]


def _term_range(a: int, lo: Bound, hi: Bound) -> tuple[Bound, Bound]:
    if a > 0:
        return (None if lo is None else a * lo), (None if hi is None else a * hi)
    return (None if hi is None else a * hi), (None if lo is None else a * lo)


class _Infeasible(Exception):
    pass


def _tighten(row: Row, lo: list[Bound], hi: list[Bound], tally: Optional[Counter]) -> bool:
    """Narrow one variable's domain using `row`; True if anything changed."""
    fixed = row.offset
    free = []
    for i, a in enumerate(row.coeffs):
        if not a:
            continue
        if lo[i] is not None and lo[i] == hi[i]:
            fixed += a * lo[i]  # type: ignore[operator]
        else:
            free.append(i)

    if not free:
        if row.lo <= fixed <= row.hi and fixed % row.modulus == 0:
            return False
        raise _Infeasible

    ranges = {i: _term_range(row.coeffs[i], lo[i], hi[i]) for i in free}
    for i in free:
        a = row.coeffs[i]
        rest_min: Bound = fixed
        rest_max: Bound = fixed
        for j in free:
            if j == i:
                continue
            tmin, tmax = ranges[j]
            rest_min = None if rest_min is None or tmin is None else rest_min + tmin
            rest_max = None if rest_max is None or tmax is None else rest_max + tmax

        # a·x lies in [row.lo - rest_max, row.hi - rest_min]
        low_t = None if rest_max is None else row.lo - rest_max
        high_t = None if rest_min is None else row.hi - rest_min
        if a < 0:
            low_t, high_t = high_t, low_t
        x_lo = None if low_t is None else ceil(Fraction(low_t, a))
        x_hi = None if high_t is None else floor(Fraction(high_t, a))
        if lo[i] is not None:
            x_lo = lo[i] if x_lo is None else max(lo[i], x_lo)  # type: ignore[type-var]
        if hi[i] is not None:
            x_hi = hi[i] if x_hi is None else min(hi[i], x_hi)  # type: ignore[type-var]

        if len(free) == 1 and row.modulus > 1:
            g = gcd(a, row.modulus)
            residue = (-fixed) % row.modulus
            if residue % g:
                raise _Infeasible
            step = row.modulus // g
            x0 = (residue // g) * pow(a // g, -1, step) % step
            if x_lo is not None:
                x_lo += (x0 - x_lo) % step
            if x_hi is not None:
                x_hi -= (x_hi - x0) % step

        new_lo, new_hi = x_lo, x_hi
        if new_lo is not None and new_hi is not None and new_lo > new_hi:
            raise _Infeasible
        if new_lo != lo[i] or new_hi != hi[i]:
            if tally is not None:
                before = _size(lo, hi)
                lo[i], hi[i] = new_lo, new_hi
                tally[row.label] += before - _size(lo, hi)
            else:
                lo[i], hi[i] = new_lo, new_hi
            return True
    return False


def propagate(
    rows: list[Row], lo: list[Bound], hi: list[Bound], tally: Optional[Counter] = None
) -> Optional[str]:
    """
    Bounds-consistency to a fixpoint, in place.

    Returns the label of the row that proved the domain empty, or None. With
    `tally` (finite domains only) every removed point is counted against the
    row that removed it.
    """
    for _ in range(_MAX_PASSES):
        changed = False
        for row in rows:
            try:
                changed = _tighten(row, lo, hi, tally) or changed
            except _Infeasible:
                if tally is not None:
                    tally[row.label] += _size(lo, hi)
                return row.label
        if not changed:
            return None
    logger.warning("Propagation pass limit reached", passes=_MAX_PASSES, rows=len(rows))
    return None


def solve_box(system: ConstraintSystem) -> SolutionBox:
    """
    Finite bounds for every variable of `system`.

    Orthogonality inversions seed the bounds, propagation over the
    equalities and μ-box conditions tightens them.

    Raises:
        UnboundedVariableError: some ε_c is still unbounded after propagation
    """
    variables = system.variables
    lo: list[Bound] = [None] * len(variables)
    hi: list[Bound] = [None] * len(variables)
    index = {v: i for i, v in enumerate(variables)}

    for inversion in system.inversions:
        low = -inversion.constant
        high = -inversion.constant
        for degree, weights in inversion.groups:
            values = [w for _, w in weights]
            low += degree * min(values)
            high += degree * max(values)
        i = index[inversion.class_id]
        lo[i], hi[i] = ceil(low), floor(high)

    failed = propagate(compile_system(system), lo, hi)
    if failed:
        return SolutionBox(variables, (), (), infeasible_by=failed)
    if any(a is not None and b is not None and a > b for a, b in zip(lo, hi)):
        return SolutionBox(variables, (), (), infeasible_by="orthogonality")

    unbounded = [v for v, a, b in zip(variables, lo, hi) if a is None or b is None]
    if unbounded:
        raise UnboundedVariableError(unbounded)
    return SolutionBox(variables, tuple(lo), tuple(hi))  # type: ignore[arg-type]


class BoxSearch:
    """
    Depth-first enumeration of the integer points of a box.

    Every eliminated point is attributed to exactly one constraint label in
    `eliminations`; `leaves` counts the fully-assigned points that were checked
    against the post-filters.
    """

    def __init__(self, system: ConstraintSystem, box: SolutionBox):
        self.system = system
        self.box = box
        self.rows = compile_system(system)
        self.eliminations: Counter[str] = Counter()
        self.leaves = 0

    def run(self) -> list[PAVector]:
        if not self.box.feasible:
            return []
        solutions: list[PAVector] = []
        self._search(list(self.box.lower), list(self.box.upper), solutions)
        solutions.sort(key=lambda pa: pa.values)
        logger.debug(
            "Box searched",
            order=self.system.n,
            box_points=self.box.size,
            solutions=len(solutions),
            eliminated=sum(self.eliminations.values()),
        )
        return solutions

    def _search(self, lo: list[Bound], hi: list[Bound], out: list[PAVector]) -> None:
        if propagate(self.rows, lo, hi, self.eliminations):
            return

        open_vars = [i for i in range(len(lo)) if lo[i] != hi[i]]
        if not open_vars:
            self.leaves += 1
            point = dict(zip(self.system.variables, lo))
            pa = self.system.pa_vector(point)  # type: ignore[arg-type]
            for condition in self.system.nonvanishing:
                if not condition.holds(pa):
                    self.eliminations[condition.label] += 1
                    return
            out.append(pa)
            return

        i = min(open_vars, key=lambda k: (hi[k] - lo[k], k))  # type: ignore[operator]
        for value in range(lo[i], hi[i] + 1):  # type: ignore[arg-type,operator]
            child_lo, child_hi = list(lo), list(hi)
            child_lo[i] = child_hi[i] = value
            self._search(child_lo, child_hi, out)


def enumerate_integer_solutions(system: ConstraintSystem, box: SolutionBox) -> list[PAVector]:
    """Every integer point of `box` satisfying the system, in lexicographic class order."""
    return BoxSearch(system, box).run()
