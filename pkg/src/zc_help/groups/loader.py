"""
Group File Loader

Reads the JSON group format into a validated GroupData and writes it back in
canonical form.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Any, Union

import structlog
from pydantic import ValidationError

from ..cyclotomic import parse_literal, to_literal
from ..errors import DataIOError, GroupValidationError, HelpError, ParseError
from ..observability import traced
from .models import GroupFileModel
from .table import (
    BrauerTable,
    Character,
    ConjClass,
    GroupData,
    PublishedCell,
    QuotientLink,
    brauer_from_ordinary_difference,
    p_regular_classes,
)
from .validation import validate_group

logger = structlog.get_logger()


def _reject_float(token: str) -> Any:
    raise ParseError(f"floating point value {token} in group file; use integers or 'a/b'")


def _reject_constant(token: str) -> Any:
    raise ParseError(f"non-finite constant {token} in group file")


def _parse_json(source: Union[IO[bytes], bytes, str]) -> Any:
    if isinstance(source, str):
        text = source
    else:
        raw = source if isinstance(source, bytes) else source.read()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"group file is not UTF-8: {e}") from e
    try:
        return json.loads(text, parse_float=_reject_float, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from e


def _build(model: GroupFileModel) -> GroupData:
    class_ids = [c.id for c in model.classes]
    known = set(class_ids)

    try:
        power_maps = {int(p): dict(pmap) for p, pmap in model.power_maps.items()}
    except ValueError:
        raise GroupValidationError("power-map-coverage", "power map keys must be primes") from None

    characters = tuple(
        Character(id=c.id, degree=c.degree, values=tuple(parse_literal(v) for v in c.values))
        for c in model.characters
    )

    group = GroupData(
        name=model.name,
        order=model.order,
        classes=tuple(ConjClass(c.id, c.order, c.size) for c in model.classes),
        power_maps=power_maps,
        central=tuple((z.id, z.inverse) for z in model.central.classes),
        central_mult={z: dict(row) for z, row in model.central.mult.items()},
        characters=characters,
    )

    quotients = []
    for q in model.quotients:
        unknown = set(q.fusion) - known
        if unknown:
            raise GroupValidationError(
                "quotient-link", f"fusion to {q.name} names unknown classes {sorted(unknown)}"
            )
        quotients.append(
            QuotientLink(
                quotient_name=q.name,
                kernel=tuple(q.kernel),
                fusion_pairs=tuple((c, q.fusion[c]) for c in class_ids if c in q.fusion),
            )
        )

    published = []
    for row in model.published:
        for class_id, literal in row.values.items():
            published.append(PublishedCell(row.character, class_id, parse_literal(literal)))

    brauer_tables = []
    for b in model.brauer:
        try:
            regular = tuple(p_regular_classes(group, b.p))
            phis = tuple(
                brauer_from_ordinary_difference(group, b.p, d.plus, d.minus, brauer_id=d.id)
                for d in b.differences
            )
        except (HelpError, IndexError) as e:
            raise GroupValidationError("brauer-recipe", str(e)) from e
        brauer_tables.append(BrauerTable(p=b.p, regular_classes=regular, characters=phis))

    return GroupData(
        name=group.name,
        order=group.order,
        classes=group.classes,
        power_maps=group.power_maps,
        central=group.central,
        central_mult=group.central_mult,
        characters=group.characters,
        brauer_tables=tuple(brauer_tables),
        quotients=tuple(quotients),
        published=tuple(published),
    )


@traced("load_group")
def load_group(source: Union[IO[bytes], bytes, str]) -> GroupData:
    """
    Parse and validate a group file.

    Args:
        source: binary stream, raw bytes, or already-decoded text

    Raises:
        ParseError: malformed JSON or cyclotomic literal
        GroupValidationError: a named invariant is violated
    """
    data = _parse_json(source)
    try:
        model = GroupFileModel.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise GroupValidationError("schema", f"{location}: {first['msg']}") from e

    group = _build(model)
    validate_group(group)
    logger.info(
        "Group loaded",
        group=group.name,
        order=group.order,
        classes=len(group.classes),
        characters=len(group.characters),
    )
    return group


def load_group_file(path: Union[str, Path]) -> GroupData:
    """Load a group file from disk; I/O failures are DataIOError."""
    path = Path(path)
    try:
        with path.open("rb") as stream:
            raw = stream.read()
    except OSError as e:
        raise DataIOError(f"cannot read {path}: {e.strerror or e}") from e
    return load_group(raw)


def dump_group(g: GroupData) -> dict[str, Any]:
    """The JSON document for g, in canonical literal form."""
    document: dict[str, Any] = {
        "name": g.name,
        "order": g.order,
        "classes": [{"id": c.id, "order": c.element_order, "size": c.size} for c in g.classes],
        "power_maps": {
            str(p): {c: pmap[c] for c in g.class_ids} for p, pmap in sorted(g.power_maps.items())
        },
        "central": {
            "classes": [{"id": z, "inverse": inv} for z, inv in g.central],
            "mult": {z: {c: g.central_mult[z][c] for c in g.class_ids} for z, _ in g.central},
        },
        "characters": [
            {"id": chi.id, "degree": chi.degree, "values": [to_literal(v) for v in chi.values]}
            for chi in g.characters
        ],
        "brauer": [
            {
                "p": t.p,
                "differences": [
                    {"id": phi.id, "plus": phi.plus, "minus": phi.minus} for phi in t.characters
                ],
            }
            for t in g.brauer_tables
        ],
        "quotients": [
            {"name": q.quotient_name, "kernel": list(q.kernel), "fusion": dict(q.fusion_pairs)}
            for q in g.quotients
        ],
    }
    if g.published:
        rows: dict[str, dict[str, Any]] = {}
        for cell in g.published:
            rows.setdefault(cell.character, {})[cell.class_id] = to_literal(cell.value)
        document["published"] = [{"character": k, "values": v} for k, v in rows.items()]
    return document


def dumps_group(g: GroupData) -> str:
    return json.dumps(dump_group(g), indent=2, ensure_ascii=False) + "\n"
