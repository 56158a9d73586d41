"""Data-driven sink catalog.

A sink spec pairs a sink type with a dotted callee pattern and the argument
positions that must not receive tainted data. Patterns match end-aligned
against the callee's dotted name path: ``exec`` matches ``cp.exec`` and bare
``exec``; ``fs.readFile`` matches ``fs.readFile`` and ``require("fs").readFile``
(segments that cannot be named statically match anything). The catalog is
configuration, not code, so deployments can mirror whatever sink sets their
security policies use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from flowlens.flows import INTEGRITY_SINKS, QueryFamily, SinkType

#: Marker segment for callee path parts that cannot be resolved to a name.
UNKNOWN_SEGMENT = "*"

#: JSON value selecting every argument position.
ALL_POSITIONS = "*"


class CatalogError(Exception):
    pass


@dataclass(frozen=True)
class SinkSpec:
    sink_type: SinkType
    callee_pattern: str
    tainted_arg_positions: frozenset[int] | None  # None means every position

    def __post_init__(self) -> None:
        if self.sink_type is SinkType.NONE:
            raise CatalogError("sink specs must map to a non-None sink type")
        if not self.callee_pattern:
            raise CatalogError("empty callee pattern")

    @property
    def segments(self) -> tuple[str, ...]:
        return tuple(self.callee_pattern.split("."))

    def matches(self, callee_path: tuple[str, ...]) -> bool:
        if not callee_path:
            return False
        pattern = self.segments
        n = min(len(pattern), len(callee_path))
        for pat_seg, path_seg in zip(pattern[-n:], callee_path[-n:]):
            if pat_seg == UNKNOWN_SEGMENT or path_seg == UNKNOWN_SEGMENT:
                continue
            if pat_seg != path_seg:
                return False
        return True

    def position_tainted(self, index: int) -> bool:
        return self.tainted_arg_positions is None or \
            index in self.tainted_arg_positions


@dataclass(frozen=True)
class SinkCatalog:
    specs: tuple[SinkSpec, ...]
    sanitizers: frozenset[str] = frozenset()

    def for_family(self, family: QueryFamily) -> tuple[SinkSpec, ...]:
        if family is QueryFamily.LOGGING:
            return tuple(s for s in self.specs
                         if s.sink_type is SinkType.LOGGING)
        return tuple(s for s in self.specs if s.sink_type in INTEGRITY_SINKS)

    def match(self, callee_path: tuple[str, ...],
              family: QueryFamily) -> list[SinkSpec]:
        return [s for s in self.for_family(family) if s.matches(callee_path)]


def _positions_from_json(value: object, where: str) -> frozenset[int] | None:
    if value == ALL_POSITIONS:
        return None
    if isinstance(value, list) and all(
            isinstance(v, int) and v >= 0 for v in value):
        return frozenset(value)
    raise CatalogError(
        f"{where}: tainted_arg_positions must be a list of non-negative "
        f'integers or "{ALL_POSITIONS}"')


def catalog_from_obj(obj: object) -> SinkCatalog:
    """Build a catalog from parsed JSON: either a bare list of sink specs or
    {"sinks": [...], "sanitizers": [...]}."""
    sanitizers: frozenset[str] = frozenset()
    if isinstance(obj, dict):
        entries = obj.get("sinks")
        raw_san = obj.get("sanitizers", [])
        if not isinstance(entries, list):
            raise CatalogError('catalog object requires a "sinks" list')
        if not isinstance(raw_san, list) or \
                not all(isinstance(s, str) for s in raw_san):
            raise CatalogError('"sanitizers" must be a list of names')
        sanitizers = frozenset(raw_san)
    elif isinstance(obj, list):
        entries = obj
    else:
        raise CatalogError("catalog must be a list or an object")
    specs = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise CatalogError(f"entry {i}: must be an object")
        try:
            sink_type = SinkType.from_value(entry["sink_type"])
            pattern = str(entry["callee_pattern"])
            positions = _positions_from_json(
                entry["tainted_arg_positions"], f"entry {i}")
        except KeyError as exc:
            raise CatalogError(f"entry {i}: missing key {exc}") from exc
        except ValueError as exc:
            raise CatalogError(f"entry {i}: {exc}") from exc
        specs.append(SinkSpec(sink_type, pattern, positions))
    return SinkCatalog(specs=tuple(specs), sanitizers=sanitizers)


def load_catalog(path: str) -> SinkCatalog:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            obj = json.load(fp)
    except OSError as exc:
        raise CatalogError(f"cannot read sink catalog: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CatalogError(f"invalid catalog JSON: {exc}") from exc
    return catalog_from_obj(obj)


def default_catalog() -> SinkCatalog:
    """The catalog bundled with the package."""
    data = resources.files("flowlens.data").joinpath("sink_catalog.json")
    return catalog_from_obj(json.loads(data.read_text(encoding="utf-8")))
