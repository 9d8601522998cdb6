"""
Group Tables

Immutable in-memory form of a validated group file: classes, power maps,
central structure, ordinary characters, Brauer characters and quotient links.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import lcm
from typing import Mapping, Optional

from sympy import factorint, isprime

from ..cyclotomic import Cyclotomic, galois_apply
from ..errors import DataError, InvalidArgumentError


@dataclass(frozen=True)
class ConjClass:
    id: str
    element_order: int
    size: int


@dataclass(frozen=True)
class Character:
    """An ordinary irreducible character; one value per class in table order."""

    id: str
    degree: int
    values: tuple[Cyclotomic, ...]


@dataclass(frozen=True)
class BrauerCharacter:
    """A Brauer character; values follow the p-regular classes of its table."""

    id: str
    degree: int
    values: tuple[Cyclotomic, ...]
    plus: Optional[str] = None
    minus: Optional[str] = None


@dataclass(frozen=True)
class BrauerTable:
    p: int
    regular_classes: tuple[str, ...]
    characters: tuple[BrauerCharacter, ...]


@dataclass(frozen=True, eq=False)
class QuotientLink:
    """G → G/N for a central N; fusion pairs are kept in G's class order."""

    quotient_name: str
    kernel: tuple[str, ...]
    fusion_pairs: tuple[tuple[str, str], ...]

    @cached_property
    def fusion(self) -> dict[str, str]:
        return dict(self.fusion_pairs)

    @property
    def kernel_size(self) -> int:
        return len(self.kernel)


@dataclass(frozen=True)
class PublishedCell:
    character: str
    class_id: str
    value: Cyclotomic


@dataclass(frozen=True, eq=False)
class GroupData:
    name: str
    order: int
    classes: tuple[ConjClass, ...]
    power_maps: Mapping[int, Mapping[str, str]]
    central: tuple[tuple[str, str], ...]
    central_mult: Mapping[str, Mapping[str, str]]
    characters: tuple[Character, ...]
    brauer_tables: tuple[BrauerTable, ...] = ()
    quotients: tuple[QuotientLink, ...] = ()
    published: tuple[PublishedCell, ...] = field(default=())

    # Lookups

    @cached_property
    def class_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.classes)

    @cached_property
    def class_index(self) -> dict[str, int]:
        return {c.id: i for i, c in enumerate(self.classes)}

    @cached_property
    def class_by_id(self) -> dict[str, ConjClass]:
        return {c.id: c for c in self.classes}

    @cached_property
    def identity_id(self) -> str:
        for c in self.classes:
            if c.element_order == 1:
                return c.id
        raise DataError(f"{self.name} has no identity class")

    @cached_property
    def central_ids(self) -> frozenset[str]:
        return frozenset(z for z, _ in self.central)

    @cached_property
    def central_inverse(self) -> dict[str, str]:
        return dict(self.central)

    @cached_property
    def exponent(self) -> int:
        return lcm(*(c.element_order for c in self.classes))

    @cached_property
    def element_orders(self) -> frozenset[int]:
        return frozenset(c.element_order for c in self.classes)

    @cached_property
    def character_by_id(self) -> dict[str, Character]:
        return {chi.id: chi for chi in self.characters}

    def element_order(self, class_id: str) -> int:
        return self.class_by_id[class_id].element_order

    def character(self, character_id: str) -> Character:
        try:
            return self.character_by_id[character_id]
        except KeyError:
            raise InvalidArgumentError(
                f"{self.name} has no character {character_id!r}"
            ) from None

    def value(self, character: Character, class_id: str) -> Cyclotomic:
        return character.values[self.class_index[class_id]]

    def brauer_table(self, p: int) -> Optional[BrauerTable]:
        for table in self.brauer_tables:
            if table.p == p:
                return table
        return None

    @property
    def brauer_primes(self) -> tuple[int, ...]:
        return tuple(sorted(t.p for t in self.brauer_tables))

    def quotient_link(self, quotient_name: str) -> QuotientLink:
        for link in self.quotients:
            if link.quotient_name == quotient_name:
                return link
        raise InvalidArgumentError(f"{self.name} has no quotient {quotient_name!r}")

    # Power maps

    def power_class(self, class_id: str, d: int) -> str:
        """Class of g^d for g in `class_id`, composing the prime power maps."""
        order = self.element_order(class_id)
        d %= order
        if d == 0:
            return self.identity_id
        current = class_id
        for p, e in sorted(factorint(d).items()):
            for _ in range(e):
                pmap = self.power_maps.get(int(p))
                if pmap is not None:
                    current = pmap[current]
                else:
                    current = self._galois_class(current, int(p))
        return current

    def _galois_class(self, class_id: str, k: int) -> str:
        """Class of g^k for k coprime to |G|: the column that σ_k maps g's column to."""
        index = self.class_index
        column = tuple(galois_apply(chi.values[index[class_id]], k) for chi in self.characters)
        for c in self.classes:
            if tuple(chi.values[index[c.id]] for chi in self.characters) == column:
                return c.id
        raise DataError(f"{self.name}: no class matches {class_id}^{k}")

    def central_multiply(self, z: str, class_id: str) -> str:
        """Class of z·g for z central and g in `class_id`."""
        try:
            return self.central_mult[z][class_id]
        except KeyError:
            raise DataError(
                f"{self.name}: no central multiplication entry for {z}·{class_id}"
            ) from None


def p_regular_classes(g: GroupData, p: int) -> list[str]:
    """Classes whose element order is coprime to p, in table order."""
    if not isprime(p):
        raise InvalidArgumentError(f"{p} is not prime")
    return [c.id for c in g.classes if c.element_order % p]


def brauer_from_ordinary_difference(
    g: GroupData, p: int, plus: str, minus: str, brauer_id: Optional[str] = None
) -> BrauerCharacter:
    """(χ_plus − χ_minus) restricted to the p-regular classes."""
    chi_plus, chi_minus = g.character(plus), g.character(minus)
    degree = chi_plus.degree - chi_minus.degree
    if degree < 0:
        raise InvalidArgumentError(
            f"{plus} - {minus} has negative degree {degree} on {g.name}"
        )
    regular = p_regular_classes(g, p)
    values = tuple(g.value(chi_plus, c) - g.value(chi_minus, c) for c in regular)
    return BrauerCharacter(
        id=brauer_id or f"{plus}-{minus}",
        degree=degree,
        values=values,
        plus=plus,
        minus=minus,
    )


def fused_partition(
    link: QuotientLink, quotient_class: str, quotient: Optional[GroupData] = None
) -> list[str]:
    """Classes of G fusing to `quotient_class`, in G's table order."""
    known = set(quotient.class_ids) if quotient is not None else set(link.fusion.values())
    if quotient_class not in known:
        raise InvalidArgumentError(
            f"{quotient_class!r} is not a class of {link.quotient_name}"
        )
    return [c for c, image in link.fusion_pairs if image == quotient_class]
