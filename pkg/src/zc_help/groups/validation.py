"""
Group Validation

Checks every invariant a loaded table must satisfy before the solver may use
it. Checks run in a fixed order and the first violation raises a
GroupValidationError naming the invariant.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Callable

import structlog
from sympy import divisors, isprime, primefactors

from ..cyclotomic import Cyclotomic, conjugate, rational, trace_times_root
from ..errors import GroupValidationError
from .table import GroupData, QuotientLink, p_regular_classes

logger = structlog.get_logger()


def _fail(invariant: str, message: str) -> None:
    raise GroupValidationError(invariant, message)


def validate_group(g: GroupData) -> None:
    """Run all single-group checks; raises on the first violation."""
    _check_classes(g)
    _check_power_maps(g)
    _check_central(g)
    _check_characters(g)
    _check_first_orthogonality(g)
    _check_second_orthogonality(g)
    _check_central_characters(g)
    _check_value_fields(g)
    _check_brauer(g)
    _check_eigenvalue_multiplicities(g)
    _check_quotient_shapes(g)
    _check_published(g)
    logger.debug("Group validated", group=g.name, classes=len(g.classes))


def _check_classes(g: GroupData) -> None:
    ids = [c.id for c in g.classes]
    if len(set(ids)) != len(ids):
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        _fail("class-ids", f"duplicate class ids {duplicates}")
    identities = [c for c in g.classes if c.element_order == 1]
    if len(identities) != 1 or identities[0].size != 1:
        _fail("identity-class", "exactly one class of element order 1 and size 1 is required")
    for c in g.classes:
        if g.order % c.element_order:
            _fail("element-order", f"order of {c.id} ({c.element_order}) does not divide |G|")
        if g.order % c.size:
            _fail("class-sizes", f"size of {c.id} ({c.size}) does not divide |G|")
    total = sum(c.size for c in g.classes)
    if total != g.order:
        _fail("class-sizes", f"class sizes sum to {total}, expected {g.order}")


def _check_power_maps(g: GroupData) -> None:
    ids = set(g.class_ids)
    for p in g.power_maps:
        if not isprime(p):
            _fail("power-map-coverage", f"power map key {p} is not prime")
    for p in primefactors(g.exponent):
        if int(p) not in g.power_maps:
            _fail("power-map-coverage", f"missing power map for prime {p}")
    for p, pmap in sorted(g.power_maps.items()):
        if set(pmap) != ids or not set(pmap.values()) <= ids:
            _fail("power-map-coverage", f"power map {p} does not map classes to classes")
    for p, pmap in sorted(g.power_maps.items()):
        for c in g.classes:
            image = pmap[c.id]
            order = c.element_order
            expected = order // p if order % p == 0 else order
            if g.element_order(image) != expected:
                _fail(
                    "power-map-consistency",
                    f"{c.id}^{p} = {image} has order {g.element_order(image)}, expected {expected}",
                )


def _check_central(g: GroupData) -> None:
    ids = set(g.class_ids)
    singletons = {c.id for c in g.classes if c.size == 1}
    listed = {z for z, _ in g.central}
    if listed != singletons:
        _fail(
            "central-classes",
            f"central classes {sorted(listed)} differ from size-1 classes {sorted(singletons)}",
        )
    for z, inverse in g.central:
        if inverse not in listed:
            _fail("central-classes", f"inverse {inverse!r} of {z} is not central")
        if g.power_class(z, g.element_order(z) - 1) != inverse:
            _fail("central-classes", f"{inverse} is not the inverse of {z}")

    for z, _ in g.central:
        row = g.central_mult.get(z)
        if row is None or set(row) != ids or not set(row.values()) <= ids:
            _fail("central-mult-bijection", f"multiplication by {z} is not defined on all classes")
            return
        if len(set(row.values())) != len(ids):
            _fail("central-mult-bijection", f"multiplication by {z} is not a bijection")
        if row[g.identity_id] != z:
            _fail("central-mult-bijection", f"{z}·1 must be {z}")
        z_order = g.element_order(z)
        for c in g.classes:
            image = row[c.id]
            if g.class_by_id[image].size != c.size:
                _fail("central-mult-bijection", f"{z}·{c.id} = {image} changes the class size")
            image_order = g.element_order(image)
            if lcm(z_order, c.element_order) % image_order or lcm(
                z_order, image_order
            ) % c.element_order:
                _fail(
                    "central-mult-bijection",
                    f"order of {z}·{c.id} = {image} is inconsistent with orders "
                    f"{z_order} and {c.element_order}",
                )
    if set(g.central_mult) - listed:
        _fail("central-mult-bijection", "multiplication rows given for non-central classes")


def _check_characters(g: GroupData) -> None:
    ids = [chi.id for chi in g.characters]
    if len(set(ids)) != len(ids):
        _fail("character-ids", "duplicate character ids")
    one = g.class_index[g.identity_id]
    for chi in g.characters:
        if len(chi.values) != len(g.classes):
            _fail(
                "character-length",
                f"{chi.id} has {len(chi.values)} values for {len(g.classes)} classes",
            )
        if chi.values[one] != rational(chi.degree):
            _fail("character-degree", f"{chi.id}(1) = {chi.values[one]}, degree {chi.degree}")


def _check_first_orthogonality(g: GroupData) -> None:
    conjugates = [tuple(conjugate(v) for v in chi.values) for chi in g.characters]
    for i, chi in enumerate(g.characters):
        for j in range(i, len(g.characters)):
            total = rational(0)
            for c, x, y in zip(g.classes, chi.values, conjugates[j]):
                if x and y:
                    total = total + x * y * c.size
            expected = g.order if i == j else 0
            if total != rational(expected):
                _fail(
                    "first-orthogonality",
                    f"<{chi.id}, {g.characters[j].id}> = {total}/{g.order}, "
                    f"expected {expected}/{g.order}",
                )


def _check_second_orthogonality(g: GroupData) -> None:
    if len(g.characters) != len(g.classes):
        return
    columns = list(zip(*(chi.values for chi in g.characters)))
    for a, ca in enumerate(g.classes):
        for b in range(a, len(g.classes)):
            total = rational(0)
            for x, y in zip(columns[a], columns[b]):
                if x and y:
                    total = total + x * conjugate(y)
            expected = Fraction(g.order, ca.size) if a == b else Fraction(0)
            if total != rational(expected):
                _fail(
                    "second-orthogonality",
                    f"columns {ca.id}, {g.classes[b].id} give {total}, expected {expected}",
                )


def _check_central_characters(g: GroupData) -> None:
    for chi in g.characters:
        for z, _ in g.central:
            chi_z = g.value(chi, z)
            for c in g.classes:
                lhs = g.value(chi, g.central_multiply(z, c.id)) * chi.degree
                if lhs != chi_z * g.value(chi, c.id):
                    _fail(
                        "central-character",
                        f"{chi.id}({z}·{c.id}) is not "
                        f"{chi.id}({z})/{chi.degree}·{chi.id}({c.id})",
                    )


def _check_value_fields(g: GroupData) -> None:
    for chi in g.characters:
        for c, value in zip(g.classes, chi.values):
            if c.element_order % value.conductor:
                _fail(
                    "value-conductor",
                    f"{chi.id}({c.id}) has conductor {value.conductor}, "
                    f"not dividing the element order {c.element_order}",
                )


def _check_brauer(g: GroupData) -> None:
    primes = [t.p for t in g.brauer_tables]
    if len(set(primes)) != len(primes):
        _fail("brauer-recipe", "more than one Brauer table for the same prime")
    for table in g.brauer_tables:
        if not isprime(table.p) or g.order % table.p:
            _fail("brauer-recipe", f"{table.p} is not a prime divisor of |G|")
        if list(table.regular_classes) != p_regular_classes(g, table.p):
            _fail("brauer-recipe", f"p-regular classes for p={table.p} are inconsistent")
        for phi in table.characters:
            if phi.degree < 1:
                _fail(
                    "brauer-degree",
                    f"{phi.id} = {phi.plus} - {phi.minus} has degree {phi.degree}",
                )


def element_mu_values(
    g: GroupData, class_id: str, value_at: Callable[[str], Cyclotomic]
) -> list[Fraction]:
    """Eigenvalue multiplicities of ζ_m^j (0 ≤ j < m) for a group element of order m."""
    m = g.element_order(class_id)
    powers = {d: value_at(g.power_class(class_id, d)) for d in divisors(m)}
    result = []
    for j in range(m):
        total = Fraction(0)
        for d, value in powers.items():
            total += trace_times_root(value, m // d, -j)
        result.append(total / m)
    return result


def _check_eigenvalue_multiplicities(g: GroupData) -> None:
    for chi in g.characters:
        for c in g.classes:
            for j, mu in enumerate(element_mu_values(g, c.id, lambda k: g.value(chi, k))):
                if mu.denominator != 1 or not 0 <= mu <= chi.degree:
                    _fail(
                        "eigenvalue-multiplicity",
                        f"{chi.id} at {c.id}: multiplicity of ζ^{j} is {mu}",
                    )
    for table in g.brauer_tables:
        index = {cid: i for i, cid in enumerate(table.regular_classes)}
        for phi in table.characters:
            for cid in table.regular_classes:
                values = element_mu_values(g, cid, lambda k: phi.values[index[k]])
                for j, mu in enumerate(values):
                    if mu.denominator != 1 or not 0 <= mu <= phi.degree:
                        _fail(
                            "eigenvalue-multiplicity",
                            f"Brauer {phi.id} (p={table.p}) at {cid}: "
                            f"multiplicity of ζ^{j} is {mu}",
                        )


def _check_quotient_shapes(g: GroupData) -> None:
    ids = set(g.class_ids)
    for link in g.quotients:
        if not set(link.kernel) <= g.central_ids:
            _fail("quotient-link", f"kernel of {link.quotient_name} is not central")
        if g.identity_id not in link.kernel:
            _fail("quotient-link", f"kernel of {link.quotient_name} lacks the identity")
        if set(link.fusion) != ids:
            _fail("quotient-link", f"fusion to {link.quotient_name} does not cover all classes")
        if g.order % link.kernel_size:
            _fail("quotient-link", f"|N| = {link.kernel_size} does not divide |G|")
        kernel_images = {link.fusion[k] for k in link.kernel}
        if len(kernel_images) != 1:
            _fail("quotient-link", f"kernel of {link.quotient_name} fuses to several classes")


def validate_quotient_link(g: GroupData, link: QuotientLink, quotient: GroupData) -> None:
    """Checks that need the quotient table loaded next to G."""
    name = link.quotient_name
    if quotient.name != name:
        _fail("quotient-link", f"expected quotient {name!r}, got {quotient.name!r}")
    if g.order != link.kernel_size * quotient.order:
        _fail("quotient-link", f"|G| != |N|·|{name}|")
    images = set(link.fusion.values())
    if images != set(quotient.class_ids):
        _fail("quotient-link", f"fusion is not onto the classes of {name}")
    if link.fusion[g.identity_id] != quotient.identity_id:
        _fail("quotient-link", "identity does not fuse to the identity")
    kernel_exponent = lcm(*(g.element_order(k) for k in link.kernel))
    for qc in quotient.classes:
        preimages = [c for c, image in link.fusion_pairs if image == qc.id]
        total = sum(g.class_by_id[c].size for c in preimages)
        if total != link.kernel_size * qc.size:
            _fail(
                "quotient-link",
                f"classes fusing to {qc.id} have total size {total}, "
                f"expected {link.kernel_size}·{qc.size}",
            )
    for c in g.classes:
        image_order = quotient.element_order(link.fusion[c.id])
        if c.element_order % image_order or (image_order * kernel_exponent) % c.element_order:
            _fail(
                "quotient-link",
                f"{c.id} (order {c.element_order}) fuses to a class of order {image_order}",
            )
        for p in g.power_maps:
            if p in quotient.power_maps:
                if link.fusion[g.power_maps[p][c.id]] != quotient.power_maps[p][link.fusion[c.id]]:
                    _fail("quotient-link", f"fusion does not commute with the {p}-power map")

    inflated_tables = {chi.values for chi in g.characters}
    for chi in quotient.characters:
        inflated = tuple(quotient.value(chi, link.fusion[c]) for c in g.class_ids)
        if inflated not in inflated_tables:
            _fail("quotient-inflation", f"{name} character {chi.id} does not inflate to G")


def _check_published(g: GroupData) -> None:
    for cell in g.published:
        if cell.character not in g.character_by_id:
            _fail("published-value", f"published row {cell.character} is not a character")
        if cell.class_id not in g.class_index:
            _fail("published-value", f"published column {cell.class_id} is not a class")
        table_value = g.value(g.character(cell.character), cell.class_id)
        if table_value != cell.value:
            _fail(
                "published-value",
                f"{cell.character}({cell.class_id}) is {table_value} in the table "
                f"but {cell.value} in the published anchor",
            )
