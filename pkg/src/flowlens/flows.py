"""Canonical data model for taint flows, labels, and classifier verdicts.

A flow is a source/sink pair: data enters at an API parameter, a parameter
property, or a logged variable, and reaches a security-relevant call (or no
known sink at all, the ``None`` class used as negative training signal).
Everything downstream of the scanner (feature extraction, classifiers, the
evaluation harness) exchanges these records, so the JSONL wire format here is
the one interchange format of the whole toolkit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from typing import IO, Iterable


class SinkType(Enum):
    CMD_INJ = "CmdInj"
    CODE_INJ = "CodeInj"
    XSS = "XSS"
    PATH_TRAV = "PathTrav"
    LOGGING = "Logging"
    NONE = "None"

    @classmethod
    def from_value(cls, value: str) -> "SinkType":
        for member in cls:
            if member.value == value:
                return member
        raise ValueError(f"unknown sink type {value!r}")


INTEGRITY_SINKS = (
    SinkType.CMD_INJ,
    SinkType.CODE_INJ,
    SinkType.XSS,
    SinkType.PATH_TRAV,
)

#: Fixed class order for the integrity sink-prediction model.
INTEGRITY_CLASSES = (*INTEGRITY_SINKS, SinkType.NONE)

#: Fixed class order for the logging sink-prediction model.
LOGGING_CLASSES = (SinkType.LOGGING, SinkType.NONE)


class SourceKind(Enum):
    API_PARAM = "ApiParam"
    PARAM_PROPERTY = "ParamProperty"
    LOGGED_VAR = "LoggedVar"

    @classmethod
    def from_value(cls, value: str) -> "SourceKind":
        for member in cls:
            if member.value == value:
                return member
        raise ValueError(f"unknown source kind {value!r}")


class QueryFamily(Enum):
    INTEGRITY = "integrity"
    LOGGING = "logging"


class Label(Enum):
    EXPECTED = "expected"
    UNEXPECTED = "unexpected"


class ModelKind(Enum):
    BINARY = "binary"
    SINK_PREDICTION = "sink_prediction"
    NOVELTY = "novelty"
    LLM = "llm"
    FREQUENCY = "frequency"
    REGEX = "regex"


class FlowError(Exception):
    """Base class for flow data errors."""


class FlowParseError(FlowError):
    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message)


class FlowValidationError(FlowError):
    pass


def flow_id(
    project: str,
    file: str,
    line: int,
    source_name: str,
    sink_type: SinkType,
    sink_line: int | None,
) -> str:
    """Stable identity hash for a flow.

    The tuple (project, file, line, source_name, sink_type, sink_line) pins
    down one reported flow; hashing it gives dedup and label joins a key that
    survives re-scans.
    """
    key = "\x1f".join(
        [project, file, str(line), source_name, sink_type.value,
         "" if sink_line is None else str(sink_line)]
    )
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class FlowRecord:
    id: str
    project: str
    file: str
    line: int
    source_kind: SourceKind
    source_name: str
    sink_type: SinkType
    function_name: str | None = None
    doc_comment: str | None = None
    sink_line: int | None = None

    def validate(self, min_name_length: int | None = None) -> None:
        """Check structural invariants; raises FlowValidationError.

        ``min_name_length`` additionally enforces the corpus name filter
        (applied to parsed datasets, not to raw engine output).
        """
        if self.line < 1:
            raise FlowValidationError(f"flow {self.id}: line must be >= 1")
        if self.sink_type is SinkType.NONE:
            if self.sink_line is not None:
                raise FlowValidationError(
                    f"flow {self.id}: sink_line must be absent for sink_type None"
                )
        else:
            if self.sink_line is None:
                raise FlowValidationError(
                    f"flow {self.id}: sink_line required for sink_type "
                    f"{self.sink_type.value}"
                )
            if self.sink_line < 1:
                raise FlowValidationError(f"flow {self.id}: sink_line must be >= 1")
        if self.source_kind is SourceKind.LOGGED_VAR:
            if self.sink_type not in (SinkType.LOGGING, SinkType.NONE):
                raise FlowValidationError(
                    f"flow {self.id}: LoggedVar records allow sink_type "
                    f"Logging or None, got {self.sink_type.value}"
                )
        else:
            if self.sink_type is SinkType.LOGGING:
                raise FlowValidationError(
                    f"flow {self.id}: Logging sink requires source_kind LoggedVar"
                )
            if not self.function_name:
                raise FlowValidationError(
                    f"flow {self.id}: function_name required for integrity records"
                )
        if min_name_length is not None and len(self.source_name) < min_name_length:
            raise FlowValidationError(
                f"flow {self.id}: source_name {self.source_name!r} shorter than "
                f"{min_name_length} characters (corpus name filter)"
            )

    def with_id(self) -> "FlowRecord":
        """Return a copy whose id is recomputed from the identity fields."""
        new_id = flow_id(
            self.project, self.file, self.line, self.source_name,
            self.sink_type, self.sink_line,
        )
        return FlowRecord(
            id=new_id, project=self.project, file=self.file, line=self.line,
            source_kind=self.source_kind, source_name=self.source_name,
            sink_type=self.sink_type, function_name=self.function_name,
            doc_comment=self.doc_comment, sink_line=self.sink_line,
        )


@dataclass(frozen=True)
class LabeledFlow:
    flow: FlowRecord
    label: Label


@dataclass(frozen=True)
class Verdict:
    decision: Label
    score: float
    model_kind: ModelKind
    #: Raw model statistic backing the score (e.g. the exact corpus count for
    #: the frequency baseline); None when score is the only statistic.
    raw: float | None = None


_REQUIRED_KEYS = {"id", "project", "file", "line", "source_kind", "source_name",
                  "sink_type"}
_OPTIONAL_KEYS = {"function_name", "doc_comment", "sink_line"}

#: Source names shorter than this carry too little meaning to classify.
MIN_SOURCE_NAME_LENGTH = 2


def _record_from_obj(obj: dict, line_number: int | None = None) -> FlowRecord:
    if not isinstance(obj, dict):
        raise FlowParseError("record must be a JSON object", line_number)
    keys = set(obj)
    missing = _REQUIRED_KEYS - keys
    if missing:
        raise FlowParseError(f"missing keys: {sorted(missing)}", line_number)
    unknown = keys - _REQUIRED_KEYS - _OPTIONAL_KEYS
    if unknown:
        raise FlowParseError(f"unknown keys: {sorted(unknown)}", line_number)
    try:
        record = FlowRecord(
            id=str(obj["id"]),
            project=str(obj["project"]),
            file=str(obj["file"]),
            line=int(obj["line"]),
            source_kind=SourceKind.from_value(obj["source_kind"]),
            source_name=str(obj["source_name"]),
            sink_type=SinkType.from_value(obj["sink_type"]),
            function_name=obj.get("function_name"),
            doc_comment=obj.get("doc_comment"),
            sink_line=None if obj.get("sink_line") is None else int(obj["sink_line"]),
        )
    except (ValueError, TypeError) as exc:
        raise FlowParseError(str(exc), line_number) from exc
    try:
        record.validate(min_name_length=MIN_SOURCE_NAME_LENGTH)
    except FlowValidationError as exc:
        raise FlowParseError(str(exc), line_number) from exc
    return record


def parse_flows(stream: Iterable[str] | IO[str]) -> list[FlowRecord]:
    """Parse a JSONL flow dataset, validating every record.

    Raises FlowParseError with the offending 1-based line number on malformed
    lines, schema violations, or duplicate ids.
    """
    records: list[FlowRecord] = []
    seen: set[str] = set()
    for line_number, raw in enumerate(stream, start=1):
        text = raw.strip()
        if not text:
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FlowParseError(f"invalid JSON ({exc.msg})", line_number) from exc
        record = _record_from_obj(obj, line_number)
        if record.id in seen:
            raise FlowParseError(f"duplicate flow id {record.id!r}", line_number)
        seen.add(record.id)
        records.append(record)
    return records


def serialize_flow(record: FlowRecord) -> str:
    """Canonical single-line JSON form; field order and whitespace are fixed."""
    obj: dict = {
        "id": record.id,
        "project": record.project,
        "file": record.file,
        "line": record.line,
        "source_kind": record.source_kind.value,
        "source_name": record.source_name,
    }
    if record.function_name is not None:
        obj["function_name"] = record.function_name
    if record.doc_comment is not None:
        obj["doc_comment"] = record.doc_comment
    obj["sink_type"] = record.sink_type.value
    if record.sink_line is not None:
        obj["sink_line"] = record.sink_line
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_flows(records: Iterable[FlowRecord], fp: IO[str]) -> None:
    for record in records:
        fp.write(serialize_flow(record))
        fp.write("\n")


def parse_labels(stream: Iterable[str] | IO[str]) -> dict[str, Label]:
    """Parse labels.jsonl: one {"flow_id","label"} object per line."""
    labels: dict[str, Label] = {}
    for line_number, raw in enumerate(stream, start=1):
        text = raw.strip()
        if not text:
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FlowParseError(f"invalid JSON ({exc.msg})", line_number) from exc
        if not isinstance(obj, dict) or set(obj) != {"flow_id", "label"}:
            raise FlowParseError(
                 'label records must be {"flow_id","label"}', line_number)
        try:
            label = Label(obj["label"])
        except ValueError as exc:
            raise FlowParseError(str(exc), line_number) from exc
        fid = str(obj["flow_id"])
        if fid in labels:
            raise FlowParseError(f"duplicate label for flow id {fid!r}", line_number)
        labels[fid] = label
    return labels


def write_labels(labels: dict[str, Label], fp: IO[str]) -> None:
    for fid, label in labels.items():
        fp.write(json.dumps({"flow_id": fid, "label": label.value},
                            separators=(",", ":")))
        fp.write("\n")


def join_labels(
    flows: Iterable[FlowRecord],
    labels: dict[str, Label],
    require_all: bool = False,
) -> list[LabeledFlow]:
    """Join flows with labels by flow id.

    Labels referencing no flow are an error; flows without a label are
    dropped unless ``require_all``.
    """
    by_id = {f.id: f for f in flows}
    dangling = set(labels) - set(by_id)
    if dangling:
        raise FlowValidationError(
            f"labels reference unknown flow ids: {sorted(dangling)[:5]}")
    if require_all:
        unlabeled = set(by_id) - set(labels)
        if unlabeled:
            raise FlowValidationError(
                f"flows missing labels: {sorted(unlabeled)[:5]}")
    return [LabeledFlow(flow=f, label=labels[f.id])
            for f in flows if f.id in labels]


def filter_short_names(flows: Iterable[FlowRecord]) -> list[FlowRecord]:
    """Drop flows whose source name is shorter than two characters.

    Order-preserving and idempotent; length counts Unicode scalar values of
    the source name only.
    """
    return [f for f in flows if len(f.source_name) >= MIN_SOURCE_NAME_LENGTH]


def query_family_of(sink_type: SinkType, source_kind: SourceKind) -> QueryFamily:
    if source_kind is SourceKind.LOGGED_VAR or sink_type is SinkType.LOGGING:
        return QueryFamily.LOGGING
    return QueryFamily.INTEGRITY
