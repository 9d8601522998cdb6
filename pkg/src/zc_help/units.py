"""
Torsion Unit Shapes

PAVector holds the partial augmentations of a hypothetical torsion unit;
SolvedUnit ties a PAVector to the SolvedUnits of its prime powers, so a
solution carries its whole power tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Optional, Sequence

from sympy import factorint

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class PAVector:
    """Integer partial augmentations indexed by the group's class list."""

    unit_order: int
    class_ids: tuple[str, ...]
    values: tuple[int, ...]

    @classmethod
    def from_mapping(
        cls, class_ids: Sequence[str], unit_order: int, entries: Mapping[str, int]
    ) -> "PAVector":
        unknown = set(entries) - set(class_ids)
        if unknown:
            raise InvalidArgumentError(
                f"unknown classes in partial augmentations: {sorted(unknown)}"
            )
        return cls(unit_order, tuple(class_ids), tuple(int(entries.get(c, 0)) for c in class_ids))

    @classmethod
    def trivial(cls, class_ids: Sequence[str], unit_order: int, class_id: str) -> "PAVector":
        return cls.from_mapping(class_ids, unit_order, {class_id: 1})

    def __getitem__(self, class_id: str) -> int:
        try:
            return self.values[self.class_ids.index(class_id)]
        except ValueError:
            raise InvalidArgumentError(f"unknown class {class_id!r}") from None

    @property
    def entries(self) -> dict[str, int]:
        """Nonzero entries in class order."""
        return {c: v for c, v in zip(self.class_ids, self.values) if v}

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(c for c, v in zip(self.class_ids, self.values) if v)

    @property
    def augmentation(self) -> int:
        return sum(self.values)

    @property
    def trivial_class(self) -> Optional[str]:
        """The class c if this is the vector of a group element of c."""
        support = self.support
        if len(support) == 1 and self[support[0]] == 1:
            return support[0]
        return None

    @property
    def is_trivial(self) -> bool:
        return self.trivial_class is not None

    def __str__(self) -> str:
        entries = self.entries
        if not entries:
            return "{}"
        return "{" + ", ".join(f"{c}: {v}" for c, v in entries.items()) + "}"


@dataclass(frozen=True, eq=False)
class SolvedUnit:
    """A PAVector with the SolvedUnits of u^p for each prime p dividing the order."""

    order: int
    pa: PAVector
    children: tuple[tuple[int, "SolvedUnit"], ...] = ()

    @cached_property
    def key(self) -> tuple:
        """Structural identity: the pa values and the children's keys."""
        return (self.order, self.pa.values, tuple((p, c.key) for p, c in self.children))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SolvedUnit):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def child(self, p: int) -> "SolvedUnit":
        for prime, unit in self.children:
            if prime == p:
                return unit
        raise InvalidArgumentError(f"unit of order {self.order} has no {p}-th power child")

    def power(self, d: int) -> "SolvedUnit":
        """The SolvedUnit of u^d for d dividing the order."""
        if d < 1 or self.order % d:
            raise InvalidArgumentError(f"{d} does not divide the unit order {self.order}")
        unit = self
        for p, e in sorted(factorint(d).items()):
            for _ in range(e):
                unit = unit.child(int(p))
        return unit

    @property
    def is_trivial(self) -> bool:
        return self.pa.is_trivial

    @cached_property
    def tree_trivial(self) -> bool:
        """Every power of u has a trivial PAVector."""
        return self.pa.is_trivial and all(c.tree_trivial for _, c in self.children)

    def descendants(self) -> Iterator["SolvedUnit"]:
        """Self and every node of the power tree (with repetition along diamonds)."""
        yield self
        for _, child in self.children:
            yield from child.descendants()

    def describe(self) -> str:
        return f"order {self.order} {self.pa}"


def identity_unit(class_ids: Sequence[str], identity_id: str) -> SolvedUnit:
    return SolvedUnit(1, PAVector.trivial(class_ids, 1, identity_id))


def check_coherence(
    unit: SolvedUnit, power_maps: Optional[Mapping[int, Mapping[str, str]]] = None
) -> list[str]:
    """
    Diamond-coherence violations of a power tree (empty list when coherent).

    With `power_maps`, trivial nodes must also have the power-map images as children.
    """
    problems: list[str] = []
    seen: set[tuple] = set()

    def visit(node: SolvedUnit) -> None:
        if node.key in seen:
            return
        seen.add(node.key)
        primes = sorted(int(p) for p in factorint(node.order))
        if [p for p, _ in node.children] != primes:
            found = [p for p, _ in node.children]
            problems.append(f"{node.describe()}: children at {found}, expected {primes}")
            return
        for p, child in node.children:
            if child.order != node.order // p:
                problems.append(f"{node.describe()}: {p}-th power has order {child.order}")
        for p, cp in node.children:
            for q, cq in node.children:
                if p < q and cp.child(q).key != cq.child(p).key:
                    problems.append(f"{node.describe()}: (u^{p})^{q} != (u^{q})^{p}")
        trivial = node.pa.trivial_class
        if power_maps is not None and trivial is not None:
            for p, child in node.children:
                pmap = power_maps.get(p)
                if pmap is not None and child.pa.trivial_class != pmap[trivial]:
                    problems.append(
                        f"{node.describe()}: trivial unit's {p}-th power is {child.pa}, "
                        f"power map gives {pmap[trivial]}"
                    )
        for _, child in node.children:
            visit(child)

    visit(unit)
    return problems
