"""
Group Repository Adapter

Resolves group references (file paths, file stems such as "2s5", or group
names such as "2.S5") to validated GroupData. The configured data directory
is searched before the tables bundled with the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
try:
    from importlib.resources.abc import Traversable
except ImportError:  # Python < 3.11
    from importlib.abc import Traversable
from pathlib import Path
from typing import Optional, Union

import structlog
from opentelemetry import trace

from ..errors import ConfigurationError, HelpError
from ..groups import GroupData, load_group, load_group_file, validate_quotient_link

logger = structlog.get_logger()
tracer = trace.get_tracer(__name__)


@dataclass(frozen=True)
class GroupEntry:
    """One group file visible to the repository."""

    name: str
    stem: str
    order: int
    source: str
    origin: str  # "data-dir", "bundled" or "explicit"


class GroupRepository:
    """
    Loads and caches group tables.

    Explicitly registered files win over the data directory, which wins over
    the bundled tables.
    """

    def __init__(self, data_dir: Optional[Path] = None, include_bundled: bool = True):
        self.data_dir = Path(data_dir) if data_dir else None
        self.include_bundled = include_bundled
        self._by_source: dict[str, GroupData] = {}
        self._explicit: dict[str, GroupData] = {}
        self._entries: Optional[list[GroupEntry]] = None

        logger.debug(
            "GroupRepository initialized",
            data_dir=str(self.data_dir) if self.data_dir else None,
            bundled=include_bundled,
        )

    # Sources

    def _candidates(self) -> list[tuple[str, Union[Path, Traversable], str]]:
        """(stem, file, origin) for every group file, in search order."""
        found: list[tuple[str, Union[Path, Traversable], str]] = []
        if self.data_dir is not None:
            if not self.data_dir.is_dir():
                raise ConfigurationError(f"data directory {self.data_dir} does not exist")
            for path in sorted(self.data_dir.glob("*.json")):
                found.append((path.stem, path, "data-dir"))
        if self.include_bundled:
            bundled = resources.files("zc_help") / "data"
            for item in sorted(bundled.iterdir(), key=lambda t: t.name):
                if item.name.endswith(".json"):
                    found.append((item.name[: -len(".json")], item, "bundled"))
        return found

    def _load(self, source: Union[Path, Traversable], origin: str) -> GroupData:
        key = f"{origin}:{source}"
        with tracer.start_as_current_span("group_repository.load") as span:
            span.set_attribute("group.source", str(source))
            span.set_attribute("group.cache_hit", key in self._by_source)
            if key not in self._by_source:
                if isinstance(source, Path):
                    group = load_group_file(source)
                else:
                    group = load_group(source.read_bytes())
                self._by_source[key] = group
                logger.debug(
                    "Group file loaded", source=str(source), origin=origin, group=group.name
                )
            return self._by_source[key]

    def register_file(self, path: Union[str, Path]) -> GroupData:
        """Load a file given on the command line; its name then resolves to it."""
        group = self._load(Path(path), "explicit")
        self._explicit[group.name] = group
        return group

    # Lookup

    def entries(self) -> list[GroupEntry]:
        """Every loadable group file, shadowed names removed; unreadable files are skipped."""
        if self._entries is None:
            entries: list[GroupEntry] = []
            seen: set[str] = set()
            for stem, source, origin in self._candidates():
                try:
                    group = self._load(source, origin)
                except HelpError as e:
                    logger.warning(
                        "Skipping unloadable group file", source=str(source), error=e.message
                    )
                    continue
                if group.name in seen:
                    continue
                seen.add(group.name)
                entries.append(GroupEntry(group.name, stem, group.order, str(source), origin))
            self._entries = entries
        return self._entries

    def resolve(self, ref: str) -> GroupData:
        """
        Group for a path, file stem or group name.

        Raises:
            DataIOError: `ref` looks like a path and cannot be read
            ConfigurationError: no visible group matches `ref`
        """
        if ref in self._explicit:
            return self._explicit[ref]
        if ref.endswith(".json") or "/" in ref or Path(ref).is_file():
            return self._load(Path(ref), "explicit")

        for stem, source, origin in self._candidates():
            if stem == ref:
                return self._load(source, origin)
        for entry in self.entries():
            if entry.name == ref:
                return self.resolve(entry.stem)
        raise ConfigurationError(
            f"unknown group {ref!r}; run `zc-help list` to see available groups"
        )

    def quotient(self, g: GroupData, quotient_name: str) -> GroupData:
        """The quotient table for one of g's links, checked against the link."""
        link = g.quotient_link(quotient_name)
        try:
            quotient = self.resolve(quotient_name)
        except ConfigurationError as e:
            raise ConfigurationError(
                f"{g.name} declares quotient {quotient_name!r} but no such group is available"
            ) from e
        validate_quotient_link(g, link, quotient)
        return quotient

    def dependency_order(self, g: GroupData) -> list[GroupData]:
        """
        g's quotient dependencies (transitively) followed by g, dependencies first.

        Raises:
            ConfigurationError: the quotient declarations form a cycle
        """
        ordered: list[GroupData] = []
        done: set[str] = set()

        def visit(group: GroupData, path: tuple[str, ...]) -> None:
            if group.name in path:
                cycle = " -> ".join(path + (group.name,))
                raise ConfigurationError(f"quotient dependency cycle: {cycle}")
            if group.name in done:
                return
            for link in group.quotients:
                visit(self.quotient(group, link.quotient_name), path + (group.name,))
            done.add(group.name)
            ordered.append(group)

        visit(g, ())
        return ordered

