"""
HeLP Constraint Systems

Builds the exact linear system in the partial augmentations of a hypothetical
torsion unit u of order n: the eigenvalue multiplicity forms μ(ξ, u, χ) for
ordinary and Brauer characters, together with augmentation, Berman-Higman,
order divisibility, quotient fusion and field-membership conditions.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Optional, Sequence, Union

import structlog
from pydantic import BaseModel, ConfigDict, Field
from sympy import divisors, factorint, primefactors

from .cyclotomic import (
    ZERO,
    Cyclotomic,
    conjugate,
    coordinates,
    galois_apply,
    phi,
    trace_times_root,
)
from .errors import (
    ConfigurationError,
    DependencyError,
    IncompleteAssignmentError,
    InvalidArgumentError,
    NotPRegularError,
)
from .groups.table import BrauerCharacter, BrauerTable, Character, GroupData
from .units import PAVector, SolvedUnit

logger = structlog.get_logger()

TOGGLES = (
    "ordinary",
    "modular",
    "fusion",
    "berman-higman",
    "remark2",
    "p-parts",
    "cohn-livingstone",
    "central-translation",
    "cross-check",
)


class ConstraintOptions(BaseModel):
    """Which constraint families are applied; every family is on by default."""

    model_config = ConfigDict(frozen=True)

    ordinary: bool = Field(True, description="μ-forms of the ordinary characters")
    modular: bool = Field(True, description="μ-forms of Brauer characters for p not dividing n")
    modular_primes: Optional[tuple[int, ...]] = Field(
        None, description="Restrict Brauer primes; None uses every prime with data"
    )
    fusion: bool = Field(True, description="Partial augmentations sum along quotient fibres")
    berman_higman: bool = Field(True, description="ε vanishes at central classes")
    remark2: bool = Field(True, description="Prime divisors of o(c) divide n")
    p_parts: bool = Field(True, description="p-parts of o(c) do not exceed those of n")
    cohn_livingstone: bool = Field(True, description="Nonvanishing mod p for n = p^k")
    central_translation: bool = Field(True, description="Reduce u with u^m central")
    cross_check: bool = Field(True, description="Also solve translated orders directly")

    @classmethod
    def from_toggles(
        cls, toggles: Optional[str] = None, modular_primes: Optional[str] = None
    ) -> "ConstraintOptions":
        """
        Parse CLI toggles.

        Plain names give the exact enabled set; `no-<name>` entries remove
        a family from that set (or from the defaults when no plain name is given).
        """
        names = [t.strip() for t in (toggles or "").split(",") if t.strip()]
        plain = [t for t in names if not t.startswith("no-")]
        removed = [t[3:] for t in names if t.startswith("no-")]
        for name in plain + removed:
            if name not in TOGGLES:
                raise ConfigurationError(
                    f"unknown toggle {name!r}; known toggles: {', '.join(TOGGLES)}"
                )
        enabled = set(plain) if plain else set(TOGGLES)
        enabled -= set(removed)

        primes: Optional[tuple[int, ...]] = None
        if modular_primes:
            try:
                primes = tuple(sorted({int(p) for p in modular_primes.split(",") if p.strip()}))
            except ValueError:
                raise ConfigurationError(
                    f"--modular expects primes, got {modular_primes!r}"
                ) from None
            if plain and "modular" not in enabled and "no-modular" not in names:
                enabled.add("modular")

        return cls(
            modular_primes=primes,
            **{name.replace("-", "_"): name in enabled for name in TOGGLES},
        )

    def enabled_toggles(self) -> list[str]:
        return [name for name in TOGGLES if getattr(self, name.replace("-", "_"))]

    def selected_primes(self, available: Sequence[int]) -> tuple[int, ...]:
        if not self.modular:
            return ()
        if self.modular_primes is None:
            return tuple(available)
        return self.modular_primes


# Class functions


@dataclass(frozen=True)
class ClassFunction:
    """Character values keyed by class id; Brauer characters carry their prime."""

    id: str
    degree: int
    values: Mapping[str, Cyclotomic]
    p: Optional[int] = None

    @classmethod
    def ordinary(cls, g: GroupData, chi: Character) -> "ClassFunction":
        return cls(chi.id, chi.degree, dict(zip(g.class_ids, chi.values)))

    @classmethod
    def brauer(cls, table: BrauerTable, phi_: BrauerCharacter) -> "ClassFunction":
        return cls(phi_.id, phi_.degree, dict(zip(table.regular_classes, phi_.values)), table.p)


def value_of_character_at_unit(
    pa: PAVector, chi: Union[Character, ClassFunction]
) -> Cyclotomic:
    """χ(u) = Σ_c ε_c(u)·χ(c)."""
    if isinstance(chi, Character):
        if len(chi.values) != len(pa.class_ids):
            raise InvalidArgumentError(
                f"{chi.id} has {len(chi.values)} values, PAVector has {len(pa.class_ids)} classes"
            )
        pairs = zip(pa.values, chi.values)
    else:
        missing = [c for c in pa.support if c not in chi.values]
        if missing:
            raise InvalidArgumentError(f"{chi.id} is not defined on classes {missing}")
        pairs = ((v, chi.values[c]) for c, v in pa.entries.items())
    total = ZERO
    for eps, value in pairs:
        if eps and value:
            total = total + value * eps
    return total


def value_of_brauer_at_unit(pa: PAVector, phi_: ClassFunction, p: int) -> Cyclotomic:
    """φ(u) for a p-regular unit, summed over the p-regular classes."""
    if pa.unit_order % p == 0:
        raise NotPRegularError(f"unit of order {pa.unit_order} is not {p}-regular")
    singular = [c for c in pa.support if c not in phi_.values]
    if singular:
        raise InvalidArgumentError(f"partial augmentations at {p}-singular classes {singular}")
    return value_of_character_at_unit(pa, phi_)


# Linear forms


@dataclass(frozen=True)
class LinearForm:
    """constant + Σ coefficient·ε_c over the listed classes."""

    constant: Fraction
    coefficients: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def build(
        cls, constant: Fraction, coefficients: Mapping[str, Fraction], order: Sequence[str]
    ) -> "LinearForm":
        return cls(
            Fraction(constant),
            tuple((c, Fraction(coefficients[c])) for c in order if coefficients.get(c)),
        )

    def coefficient(self, class_id: str) -> Fraction:
        for c, a in self.coefficients:
            if c == class_id:
                return a
        return Fraction(0)

    def evaluate(self, pa: Union[PAVector, Mapping[str, int]]) -> Fraction:
        lookup = pa.entries if isinstance(pa, PAVector) else pa
        return self.constant + sum(
            (a * lookup.get(c, 0) for c, a in self.coefficients), Fraction(0)
        )

    def __str__(self) -> str:
        parts = [f"{a}*e({c})" for c, a in self.coefficients]
        if self.constant or not parts:
            parts.append(str(self.constant))
        return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class MuForm:
    """μ(ζ_n^exponent, u, χ) as a linear form, required in {0, ..., degree}."""

    character: str
    exponent: int
    form: LinearForm
    degree: int
    p: Optional[int] = None

    @property
    def label(self) -> str:
        kind = "mu" if self.p is None else f"mu{self.p}"
        return f"{kind}({self.character}, j={self.exponent})"


@dataclass(frozen=True)
class Equality:
    form: LinearForm
    target: Fraction
    label: str


@dataclass(frozen=True)
class NonvanishingCondition:
    """Σ_{c in classes} ε_c ≢ 0 (mod p); applied after enumeration."""

    classes: tuple[str, ...]
    p: int
    label: str

    def holds(self, pa: PAVector) -> bool:
        return sum(pa[c] for c in self.classes) % self.p != 0


@dataclass(frozen=True)
class Inversion:
    """
    ε_c = Σ w·μ − constant, verified exactly against the system's forms.

    groups holds, per ordinary character, its degree and the weights of its
    μ-forms (by index into ConstraintSystem.mu_forms).
    """

    class_id: str
    groups: tuple[tuple[int, tuple[tuple[int, Fraction], ...]], ...]
    constant: Fraction


@dataclass(frozen=True)
class ConstraintSystem:
    group_name: str
    n: int
    class_ids: tuple[str, ...]
    variables: tuple[str, ...]
    equalities: tuple[Equality, ...]
    mu_forms: tuple[MuForm, ...]
    nonvanishing: tuple[NonvanishingCondition, ...] = ()
    inversions: tuple[Inversion, ...] = ()
    notes: tuple[str, ...] = field(default=())

    def pa_vector(self, assignment: Mapping[str, int]) -> PAVector:
        return PAVector.from_mapping(self.class_ids, self.n, assignment)


# Power assignments


@dataclass(frozen=True, eq=False)
class PowerAssignment:
    """The chosen SolvedUnit of u^p for every prime p dividing n."""

    n: int
    by_prime: tuple[tuple[int, SolvedUnit], ...]

    @classmethod
    def from_units(cls, n: int, units: Mapping[int, SolvedUnit]) -> "PowerAssignment":
        return cls(n, tuple(sorted(units.items())))

    @property
    def key(self) -> tuple:
        return (self.n, tuple((p, u.key) for p, u in self.by_prime))

    def unit(self, p: int) -> SolvedUnit:
        for prime, unit in self.by_prime:
            if prime == p:
                return unit
        raise IncompleteAssignmentError(f"no unit assigned to u^{p} (n = {self.n})")

    def power(self, d: int) -> SolvedUnit:
        """The SolvedUnit assigned to u^d for 1 < d dividing n."""
        if d <= 1 or self.n % d:
            raise InvalidArgumentError(f"u^{d} is not a proper power for n = {self.n}")
        p = min(int(q) for q in factorint(d))
        return self.unit(p).power(d // p)

    def divisor_units(self) -> dict[int, SolvedUnit]:
        return {d: self.power(d) for d in divisors(self.n) if d > 1}

    def is_coherent(self) -> bool:
        for p, up in self.by_prime:
            if up.order != self.n // p:
                return False
            for q, uq in self.by_prime:
                if p < q and up.child(q).key != uq.child(p).key:
                    return False
        return True


# μ-forms


def _projected_trace(x: Cyclotomic, m: int, shift: int) -> Fraction:
    """Tr_{Q(ζ_m)/Q} of x·ζ_m^shift after averaging x down into Q(ζ_m)."""
    big = lcm(m, x.conductor)
    if big == m:
        return trace_times_root(x, m, shift)
    return trace_times_root(x, big, shift * (big // m)) * phi(m) / phi(big)


def _power_values(chi: ClassFunction, n: int, powers: PowerAssignment) -> dict[int, Cyclotomic]:
    values = {}
    for d in divisors(n):
        if d == 1:
            continue
        pa = powers.power(d).pa
        if chi.p is None:
            values[d] = value_of_character_at_unit(pa, chi)
        else:
            values[d] = value_of_brauer_at_unit(pa, chi, chi.p)
    return values


def _forms_for_character(
    chi: ClassFunction,
    n: int,
    powers: PowerAssignment,
    variables: Sequence[str],
    exponents: Sequence[int],
) -> list[LinearForm]:
    power_values = _power_values(chi, n, powers)
    forms = []
    for j in exponents:
        constant = Fraction(0)
        for d, value in power_values.items():
            if value:
                constant += _projected_trace(value, n // d, -j)
        coefficients = {
            c: _projected_trace(chi.values[c], n, -j) / n for c in variables if chi.values[c]
        }
        forms.append(LinearForm.build(constant / n, coefficients, variables))
    return forms


def mu_form(
    xi_exponent: int,
    n: int,
    chi: ClassFunction,
    powers: Optional[PowerAssignment],
    variables: Optional[Sequence[str]] = None,
) -> LinearForm:
    """
    μ(ζ_n^xi_exponent, u, χ) as a linear form in the ε_c.

    The constant collects the d ≠ 1 terms from the assigned powers of u;
    the coefficient of ε_c is Tr(χ(c)·ξ^{-1})/n.
    """
    if n == 1:
        return LinearForm(Fraction(chi.degree))
    if powers is None or powers.n != n:
        raise IncompleteAssignmentError(f"μ-form for n = {n} needs the powers of u assigned")
    variables = list(variables) if variables is not None else list(chi.values)
    return _forms_for_character(chi, n, powers, variables, [xi_exponent % n])[0]


# System construction


def _forced_zero_reason(
    g: GroupData, class_id: str, n: int, options: ConstraintOptions
) -> Optional[str]:
    order = g.element_order(class_id)
    if options.berman_higman and class_id in g.central_ids:
        return f"berman-higman: e({class_id})=0, central"
    if options.remark2 and any(n % p for p in primefactors(order)):
        return f"remark2: e({class_id})=0, a prime divisor of {order} does not divide {n}"
    if options.p_parts and n % order:
        return f"p-parts: e({class_id})=0, a p-part of {order} exceeds that of {n}"
    return None


def _field_equalities(
    g: GroupData, n: int, variables: Sequence[str]
) -> tuple[list[Equality], list[str]]:
    """χ(u) is a sum of n-th roots of unity, so it lies in Q(ζ_n)."""
    equalities: list[Equality] = []
    seen: set[tuple] = set()
    for chi in g.characters:
        values = {c: g.value(chi, c) for c in variables}
        big = lcm(n, *(v.conductor for v in values.values())) if values else n
        if big == n:
            continue
        for k in range(1 + n, big, n):
            if gcd(k, big) != 1:
                continue
            moved = {c: coordinates(v - galois_apply(v, k), big) for c, v in values.items()}
            exponents = sorted(set().union(*(m.keys() for m in moved.values())))
            for e in exponents:
                coefficients = {c: moved[c].get(e, Fraction(0)) for c in variables}
                form = LinearForm.build(Fraction(0), coefficients, variables)
                if not form.coefficients:
                    continue
                # Normalise the sign so duplicates collapse.
                if form.coefficients[0][1] < 0:
                    form = LinearForm(Fraction(0), tuple((c, -a) for c, a in form.coefficients))
                if form.coefficients in seen:
                    continue
                seen.add(form.coefficients)
                equalities.append(Equality(form, Fraction(0), f"field({chi.id}, s{k})"))
    return equalities, []


def _inversions(
    g: GroupData, n: int, variables: Sequence[str], mu_forms: Sequence[MuForm]
) -> tuple[list[Inversion], list[str]]:
    """Column orthogonality writes each ε_c as a combination of the ordinary μ-forms."""
    index = {(m.character, m.exponent): i for i, m in enumerate(mu_forms) if m.p is None}
    inversions: list[Inversion] = []
    notes: list[str] = []
    for c in variables:
        centralizer = g.order // g.class_by_id[c].size
        combined: dict[str, Fraction] = defaultdict(Fraction)
        constant = Fraction(0)
        groups = []
        for chi in g.characters:
            x = conjugate(g.value(chi, c))
            big = lcm(n, x.conductor)
            weights = []
            for j in range(n):
                w = trace_times_root(x, big, j * (big // n)) / (phi(big) * centralizer)
                i = index[(chi.id, j)]
                weights.append((i, w))
                if w:
                    form = mu_forms[i].form
                    constant += w * form.constant
                    for v, a in form.coefficients:
                        combined[v] += w * a
            groups.append((chi.degree, tuple(weights)))
        expected = {v: Fraction(1 if v == c else 0) for v in variables}
        if all(combined.get(v, Fraction(0)) == expected[v] for v in variables):
            inversions.append(Inversion(c, tuple(groups), constant))
        else:
            notes.append(f"inversion: identity for e({c}) does not hold, using propagation only")
    return inversions, notes


def build_system(
    g: GroupData,
    n: int,
    powers: PowerAssignment,
    options: ConstraintOptions,
    images: Optional[Mapping[str, PAVector]] = None,
) -> ConstraintSystem:
    """
    Build the constraint system for units of order n with the given powers.

    Args:
        g: group table
        n: unit order (n >= 2)
        powers: coherent assignment of u^p for every prime p | n
        options: enabled constraint families
        images: PAVector of π(u) per quotient name, required when fusion is on
    """
    if n < 2:
        raise InvalidArgumentError("constraint systems are built for n >= 2")
    if powers.n != n:
        raise IncompleteAssignmentError(f"power assignment is for n = {powers.n}, not {n}")
    for p in primefactors(n):
        powers.unit(int(p))
    if not powers.is_coherent():
        raise InvalidArgumentError(f"power assignment for n = {n} is not coherent")

    notes: list[str] = []
    variables: list[str] = []
    for c in g.class_ids:
        reason = _forced_zero_reason(g, c, n, options)
        if reason:
            notes.append(reason)
        else:
            variables.append(c)

    equalities = [
        Equality(
            LinearForm.build(Fraction(0), {c: Fraction(1) for c in variables}, variables),
            Fraction(1),
            "augmentation",
        )
    ]

    if options.fusion:
        for link in g.quotients:
            image = (images or {}).get(link.quotient_name)
            if image is None:
                raise DependencyError(
                    f"fusion to {link.quotient_name} needs the image of u in the quotient"
                )
            for qc, target in zip(image.class_ids, image.values):
                fibre = [c for c, img in link.fusion_pairs if img == qc and c in variables]
                if not fibre and target == 0:
                    continue
                equalities.append(
                    Equality(
                        LinearForm.build(Fraction(0), {c: Fraction(1) for c in fibre}, variables),
                        Fraction(target),
                        f"fusion({link.quotient_name}:{qc})",
                    )
                )

    mu_forms: list[MuForm] = []
    if options.ordinary:
        field_equalities, _ = _field_equalities(g, n, variables)
        equalities.extend(field_equalities)
        for chi in g.characters:
            cf = ClassFunction.ordinary(g, chi)
            forms = _forms_for_character(cf, n, powers, variables, range(n))
            mu_forms.extend(MuForm(chi.id, j, f, chi.degree) for j, f in enumerate(forms))

    for p in options.selected_primes(g.brauer_primes):
        table = g.brauer_table(p)
        if table is None:
            notes.append(f"modular: no Brauer data for p={p}")
            continue
        if n % p == 0:
            notes.append(f"modular: p={p} skipped, u is not {p}-regular")
            continue
        regular = set(table.regular_classes)
        support = set(variables)
        for d in divisors(n):
            if d > 1:
                support |= set(powers.power(d).pa.support)
        if not support <= regular:
            notes.append(f"modular: p={p} skipped, {p}-singular classes are not excluded")
            continue
        for phi_ in table.characters:
            cf = ClassFunction.brauer(table, phi_)
            forms = _forms_for_character(cf, n, powers, variables, range(n))
            mu_forms.extend(MuForm(phi_.id, j, f, phi_.degree, p) for j, f in enumerate(forms))

    nonvanishing: list[NonvanishingCondition] = []
    primes = primefactors(n)
    if options.cohn_livingstone and len(primes) == 1:
        p = int(primes[0])
        exact = tuple(c for c in variables if g.element_order(c) == n)
        nonvanishing.append(NonvanishingCondition(exact, p, f"cohn-livingstone(p={p})"))

    inversions: list[Inversion] = []
    if options.ordinary and variables and len(g.characters) == len(g.classes):
        inversions, inversion_notes = _inversions(g, n, variables, mu_forms)
        notes.extend(inversion_notes)

    system = ConstraintSystem(
        group_name=g.name,
        n=n,
        class_ids=g.class_ids,
        variables=tuple(variables),
        equalities=tuple(equalities),
        mu_forms=tuple(mu_forms),
        nonvanishing=tuple(nonvanishing),
        inversions=tuple(inversions),
        notes=tuple(notes),
    )
    logger.debug(
        "Constraint system built",
        group=g.name,
        order=n,
        variables=len(variables),
        equalities=len(equalities),
        mu_forms=len(mu_forms),
        inversions=len(inversions),
    )
    return system
