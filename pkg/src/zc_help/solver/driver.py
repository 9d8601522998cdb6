"""
Unit Solver Driver

Induction over the divisor lattice of candidate unit orders. For every order
it enumerates the coherent choices for the prime powers of u, reduces by
central translation where u^m is central, solves the remaining systems
exactly and classifies the order.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from collections.abc import Mapping as MappingABC
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from math import gcd, lcm
from typing import Iterator, Mapping, Optional, Sequence

import structlog
from sympy import divisors, factorint, primefactors

from ..constraints import ConstraintOptions, PowerAssignment, build_system
from ..errors import DependencyError, InvalidArgumentError
from ..groups.table import GroupData, QuotientLink
from ..observability import add_span_attributes, traced
from ..units import PAVector, SolvedUnit, check_coherence, identity_unit
from .search import BoxSearch, solve_box

logger = structlog.get_logger()


class ZC1Status(str, Enum):
    VERIFIED_TRIVIAL = "verified-trivial"
    REDUCED = "reduced-via-central-translation"
    OPEN = "open"


@dataclass(frozen=True)
class OrderVerdict:
    """Everything the solver learned about units of one order."""

    order: int
    solutions: tuple[SolvedUnit, ...]
    status: ZC1Status
    assignments: int = 0
    translated_assignments: int = 0
    box_points: int = 0
    eliminations: Mapping[str, int] = field(default_factory=dict)
    cross_check: Optional[bool] = None
    excluded: bool = False
    notes: tuple[str, ...] = ()
    seconds: Optional[float] = None

    @property
    def zc1_status(self) -> ZC1Status:
        return self.status

    @property
    def settled(self) -> bool:
        return self.status is not ZC1Status.OPEN

    @property
    def nontrivial(self) -> tuple[SolvedUnit, ...]:
        return tuple(u for u in self.solutions if not u.tree_trivial)


@dataclass(frozen=True)
class QuotientSolutions:
    """A solved quotient group, the input of the fusion equalities."""

    group: GroupData
    verdicts: Mapping[int, OrderVerdict]

    def solutions(self, order: int) -> tuple[SolvedUnit, ...]:
        if order == 1:
            return (identity_unit(self.group.class_ids, self.group.identity_id),)
        verdict = self.verdicts.get(order)
        return verdict.solutions if verdict is not None else ()


class VerificationResult(MappingABC):
    """verify_zc1's map order → OrderVerdict, with the orders the spectrum excluded."""

    def __init__(
        self,
        group: GroupData,
        verdicts: Mapping[int, OrderVerdict],
        options: ConstraintOptions,
    ):
        self.group = group
        self.options = options
        self._verdicts = dict(sorted(verdicts.items()))

    def __getitem__(self, order: int) -> OrderVerdict:
        return self._verdicts[order]

    def __iter__(self) -> Iterator[int]:
        return iter(self._verdicts)

    def __len__(self) -> int:
        return len(self._verdicts)

    @property
    def solved_orders(self) -> list[int]:
        return [n for n, v in self._verdicts.items() if not v.excluded]

    @property
    def excluded_orders(self) -> list[int]:
        return [n for n, v in self._verdicts.items() if v.excluded]

    @property
    def open_orders(self) -> list[int]:
        return [n for n, v in self._verdicts.items() if not v.settled]

    @property
    def verified(self) -> bool:
        return not self.open_orders


# Trivial units and power trees


def trivial_solutions(g: GroupData, n: int) -> list[SolvedUnit]:
    """The group elements of order n, one SolvedUnit per class, children by power maps."""
    memo: dict[str, SolvedUnit] = {}

    def node(class_id: str) -> SolvedUnit:
        if class_id not in memo:
            order = g.element_order(class_id)
            children = tuple(
                (int(p), node(g.power_class(class_id, int(p)))) for p in primefactors(order)
            )
            memo[class_id] = SolvedUnit(
                order, PAVector.trivial(g.class_ids, order, class_id), children
            )
        return memo[class_id]

    return [node(c.id) for c in g.classes if c.element_order == n]


def _coprime_power(g: GroupData, unit: SolvedUnit, k: int) -> SolvedUnit:
    """u^k for k prime to o(u): partial augmentations move along the k-th power map."""
    entries: Counter[str] = Counter()
    for c, v in unit.pa.entries.items():
        entries[g.power_class(c, k)] += v
    pa = PAVector.from_mapping(g.class_ids, unit.order, entries)
    children = tuple((p, _coprime_power(g, child, k)) for p, child in unit.children)
    return SolvedUnit(unit.order, pa, children)


def central_translate(g: GroupData, pa: PAVector, z: str) -> PAVector:
    """
    The PAVector of z·u: ε at z·c equals ε_c(u).

    Raises:
        InvalidArgumentError: z is not central
        DataError: central multiplication data is missing
    """
    if z not in g.central_ids:
        raise InvalidArgumentError(f"{z} is not a central class of {g.name}")
    entries = {g.central_multiply(z, c): v for c, v in pa.entries.items()}
    return PAVector.from_mapping(g.class_ids, lcm(g.element_order(z), pa.unit_order), entries)


def _translate_tree(g: GroupData, z: str, unit: SolvedUnit) -> SolvedUnit:
    """z·u over the whole power tree; o(z) and o(u) are coprime."""
    order = g.element_order(z) * unit.order
    pa = central_translate(g, unit.pa, z)
    children = []
    for p in primefactors(order):
        p = int(p)
        zp = g.power_class(z, p)
        wp = unit.child(p) if unit.order % p == 0 else _coprime_power(g, unit, p)
        children.append((p, _translate_tree(g, zp, wp)))
    return SolvedUnit(order, pa, tuple(children))


# Power assignments


def enumerate_power_assignments(
    solved: Mapping[int, OrderVerdict], n: int
) -> list[PowerAssignment]:
    """
    All diamond-coherent choices of u^p, one solution of order n/p per prime p | n.

    Raises:
        DependencyError: some n/p has no verdict yet
    """
    primes = [int(p) for p in primefactors(n)]
    choices = []
    for p in primes:
        verdict = solved.get(n // p)
        if verdict is None:
            raise DependencyError(f"order {n} needs the verdict for order {n // p}")
        choices.append(verdict.solutions)

    assignments = []
    for combo in itertools.product(*choices):
        assignment = PowerAssignment.from_units(n, dict(zip(primes, combo)))
        if assignment.is_coherent():
            assignments.append(assignment)
    return assignments


def _central_split(g: GroupData, n: int, assignment: PowerAssignment) -> Optional[tuple[int, str]]:
    """Smallest m with u^m a central element and gcd(m, n/m) = 1, with z' = (u^m)^a, a·m ≡ 1."""
    for m in divisors(n):
        m = int(m)
        if m in (1, n) or gcd(m, n // m) != 1:
            continue
        z = assignment.power(m).pa.trivial_class
        if z is None or z not in g.central_ids:
            continue
        a = pow(m, -1, n // m)
        return m, g.power_class(z, a)
    return None


# Quotient images


def _fuse(link: QuotientLink, quotient: GroupData, pa: PAVector) -> PAVector:
    entries: Counter[str] = Counter()
    for c, v in pa.entries.items():
        entries[link.fusion[c]] += v
    return PAVector.from_mapping(quotient.class_ids, pa.unit_order, entries)


def _image_candidates(
    g: GroupData,
    n: int,
    assignment: PowerAssignment,
    link: QuotientLink,
    quotient: QuotientSolutions,
) -> list[PAVector]:
    """Quotient solutions that can be π(u), given the images of the powers of u."""
    q = quotient.group
    identity = PAVector.trivial(q.class_ids, 1, q.identity_id).values
    fused = {d: _fuse(link, q, assignment.power(d).pa) for d in divisors(n) if d > 1}
    trivial_at = {d for d, pa in fused.items() if pa.values == identity}

    candidates: list[PAVector] = []
    for image_order in divisors(n):
        image_order = int(image_order)
        # π(u^d) = 1 exactly when the image order divides d.
        if any((d % image_order == 0) != (d in trivial_at) for d in fused):
            continue
        for unit in quotient.solutions(image_order):
            if all(
                unit.child(int(p)).pa.values == fused[int(p)].values
                for p in primefactors(image_order)
            ):
                candidates.append(unit.pa)
    return candidates


def _image_sets(
    g: GroupData,
    n: int,
    assignment: PowerAssignment,
    quotients: Optional[Mapping[str, QuotientSolutions]],
) -> list[dict[str, PAVector]]:
    per_quotient = []
    for link in g.quotients:
        solved = (quotients or {}).get(link.quotient_name)
        if solved is None:
            raise DependencyError(
                f"fusion from {g.name} needs the solved quotient {link.quotient_name}"
            )
        per_quotient.append(
            [(link.quotient_name, pa) for pa in _image_candidates(g, n, assignment, link, solved)]
        )
    return [dict(combo) for combo in itertools.product(*per_quotient)]


# Direct solving of one assignment


@dataclass
class _Outcome:
    solutions: list[SolvedUnit] = field(default_factory=list)
    eliminations: Counter = field(default_factory=Counter)
    box_points: int = 0
    notes: list[str] = field(default_factory=list)


_Task = tuple[
    GroupData, int, PowerAssignment, ConstraintOptions, Optional[Mapping[str, QuotientSolutions]]
]


def _solve_assignment(task: _Task) -> _Outcome:
    g, n, assignment, options, quotients = task
    outcome = _Outcome()
    if options.fusion and g.quotients:
        image_sets: list[Optional[dict[str, PAVector]]] = list(
            _image_sets(g, n, assignment, quotients)
        )
        if not image_sets:
            outcome.notes.append("fusion: no quotient unit can be the image of u")
    else:
        image_sets = [None]

    for images in image_sets:
        system = build_system(g, n, assignment, options, images)
        box = solve_box(system)
        if not box.feasible:
            outcome.notes.append(f"box empty: {box.infeasible_by}")
        search = BoxSearch(system, box)
        for pa in search.run():
            outcome.solutions.append(SolvedUnit(n, pa, assignment.by_prime))
        outcome.eliminations.update(search.eliminations)
        outcome.box_points += box.size
        outcome.notes.extend(system.notes)
    return outcome


def _trivial_tree_mismatch(g: GroupData, unit: SolvedUnit) -> Optional[str]:
    """
    A unit whose every power is trivial is rationally conjugate to a group
    element, so its tree must be that element's tree.
    """
    if not unit.tree_trivial:
        return None
    if any(
        g.element_order(node.pa.trivial_class) != node.order  # type: ignore[arg-type]
        for node in unit.descendants()
    ):
        return "order-mismatch"
    if check_coherence(unit, g.power_maps):
        return "power-map-mismatch"
    return None


def _canonical(units: Sequence[SolvedUnit]) -> tuple[SolvedUnit, ...]:
    unique = {u.key: u for u in units}
    return tuple(sorted(unique.values(), key=lambda u: u.key))


def _dedupe_notes(notes: Sequence[str]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(notes))


@traced("solve_order")
def solve_order(
    g: GroupData,
    n: int,
    solved: Mapping[int, OrderVerdict],
    options: ConstraintOptions,
    quotients: Optional[Mapping[str, QuotientSolutions]] = None,
    workers: int = 1,
    report_timings: bool = False,
) -> OrderVerdict:
    """
    Solve for the torsion units of order n.

    Args:
        g: group table
        n: unit order
        solved: verdicts for every proper divisor of n
        options: enabled constraint families
        quotients: solved quotient groups, required when fusion is enabled
        workers: process pool size for the per-assignment systems
        report_timings: record wall time in the verdict
    """
    started = time.perf_counter()
    if n < 1:
        raise InvalidArgumentError(f"unit order must be positive, got {n}")
    if n == 1:
        return OrderVerdict(
            1,
            (identity_unit(g.class_ids, g.identity_id),),
            ZC1Status.VERIFIED_TRIVIAL,
            seconds=(time.perf_counter() - started) if report_timings else None,
        )

    assignments = enumerate_power_assignments(solved, n)
    eliminations: Counter[str] = Counter()
    notes: list[str] = []
    via_translation: list[SolvedUnit] = []
    direct: list[SolvedUnit] = []
    direct_tasks = []
    cross_pairs: list[tuple[int, list[SolvedUnit]]] = []
    translated_count = 0

    for assignment in assignments:
        split = _central_split(g, n, assignment) if options.central_translation else None
        if split is None:
            direct_tasks.append((g, n, assignment, options, quotients))
            continue
        m, z = split
        translated_count += 1
        matching = [
            unit
            for unit in (_translate_tree(g, z, w) for w in solved[m].solutions)
            if all(unit.child(p).key == u.key for p, u in assignment.by_prime)
        ]
        via_translation.extend(matching)
        if options.cross_check:
            cross_pairs.append((len(direct_tasks), matching))
            direct_tasks.append((g, n, assignment, options, quotients))

    if workers > 1 and len(direct_tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_solve_assignment, direct_tasks))
    else:
        outcomes = [_solve_assignment(task) for task in direct_tasks]

    cross_indices = {i for i, _ in cross_pairs}
    box_points = 0
    for i, outcome in enumerate(outcomes):
        kept = []
        for unit in outcome.solutions:
            mismatch = _trivial_tree_mismatch(g, unit)
            if mismatch:
                eliminations[mismatch] += 1
            else:
                kept.append(unit)
        outcome.solutions = kept
        eliminations.update(outcome.eliminations)
        box_points += outcome.box_points
        notes.extend(outcome.notes)
        if i not in cross_indices:
            direct.extend(kept)

    cross_check: Optional[bool] = None
    if cross_pairs:
        cross_check = all(
            {u.key for u in outcomes[i].solutions} == {u.key for u in matching}
            for i, matching in cross_pairs
        )
        if not cross_check:
            notes.append("cross-check: direct solving disagrees with central translation")
            logger.warning("Central translation cross-check failed", group=g.name, order=n)

    central = [u for u in trivial_solutions(g, n) if u.pa.trivial_class in g.central_ids]
    solutions = _canonical(direct + via_translation + central)

    if any(not u.tree_trivial for u in solutions):
        status = ZC1Status.OPEN
    elif via_translation and not direct:
        status = ZC1Status.REDUCED
    else:
        status = ZC1Status.VERIFIED_TRIVIAL

    verdict = OrderVerdict(
        order=n,
        solutions=solutions,
        status=status,
        assignments=len(assignments),
        translated_assignments=translated_count,
        box_points=box_points,
        eliminations=dict(sorted(eliminations.items())),
        cross_check=cross_check,
        notes=_dedupe_notes(notes),
        seconds=(time.perf_counter() - started) if report_timings else None,
    )
    add_span_attributes(
        {"group": g.name, "order": n, "status": status.value, "solutions": len(solutions)}
    )
    logger.info(
        "Order solved",
        group=g.name,
        order=n,
        status=status.value,
        assignments=len(assignments),
        translated=translated_count,
        solutions=len(solutions),
    )
    return verdict


# Order spectrum


def _kernel_exponent(g: GroupData, link: QuotientLink) -> int:
    return lcm(*(g.element_order(c) for c in link.kernel))


def order_spectrum(
    g: GroupData, quotients: Optional[Mapping[str, QuotientSolutions]] = None
) -> tuple[list[int], list[int]]:
    """
    Candidate unit orders and the orders excluded by the spectrum rule.

    d | exp(G) is a candidate when each prime-power part of d is an element
    order and, for every quotient, some image order n̄ | d has solutions
    there with d/n̄ dividing the exponent of the kernel.
    """
    candidates, excluded = [], []
    for d in divisors(g.exponent):
        d = int(d)
        if any(int(p) ** e not in g.element_orders for p, e in factorint(d).items()):
            continue
        ok = True
        for link in g.quotients:
            solved = (quotients or {}).get(link.quotient_name)
            if solved is None:
                continue
            kernel_exponent = _kernel_exponent(g, link)
            ok = ok and any(
                kernel_exponent % (d // int(image)) == 0 and solved.solutions(int(image))
                for image in divisors(d)
            )
        (candidates if ok else excluded).append(d)
    return candidates, excluded


@traced("verify_zc1")
def verify_zc1(
    g: GroupData,
    options: ConstraintOptions,
    quotients: Optional[Mapping[str, QuotientSolutions]] = None,
    workers: int = 1,
    report_timings: bool = False,
) -> VerificationResult:
    """
    Solve every candidate order in divisor order.

    Raises:
        DependencyError: fusion is enabled and a quotient of g has not been solved
    """
    for link in g.quotients if options.fusion else ():
        if link.quotient_name not in (quotients or {}):
            raise DependencyError(f"{g.name} needs the solved quotient {link.quotient_name}")

    candidates, excluded = order_spectrum(g, quotients)
    verdicts: dict[int, OrderVerdict] = {
        d: OrderVerdict(d, (), ZC1Status.VERIFIED_TRIVIAL, excluded=True) for d in excluded
    }
    for n in candidates:
        verdicts[n] = solve_order(
            g, n, verdicts, options, quotients, workers=workers, report_timings=report_timings
        )

    result = VerificationResult(g, verdicts, options)
    logger.info(
        "Verification finished",
        group=g.name,
        verified=result.verified,
        orders=result.solved_orders,
        excluded=result.excluded_orders,
        open=result.open_orders,
    )
    return result
