"""Identifier-name and doc-comment embeddings.

Names are embedded through a pre-trained word-vector table (loaded from the
common text format), averaging the vectors of an identifier's subtokens.
Doc comments use a separate, jointly trained token embedding that lives with
the neural model; this module owns its vocabulary and pooling.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

logger = logging.getLogger(__name__)

_CAMEL_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+")
_DOC_TOKEN_RE = re.compile(r"[a-z0-9]+")


class EmbeddingFormatError(Exception):
    def __init__(self, message: str, line_number: int | None = None):
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message)
        self.line_number = line_number


def subtokenize(name: str) -> list[str]:
    """Split an identifier into lowercase subtokens.

    Boundaries: camelCase transitions, underscores, hyphens, digits, and any
    other non-letter character. Empty parts are dropped, so the result may be
    empty for names with no letters.
    """
    tokens: list[str] = []
    for chunk in re.split(r"[^A-Za-z]+", name):
        if not chunk:
            continue
        tokens.extend(part.lower() for part in _CAMEL_RE.findall(chunk))
    return tokens


@dataclass(frozen=True)
class EmbeddingTable:
    """Pre-trained token -> vector map; all vectors share one dimension."""

    dimension: int
    vectors: dict[str, np.ndarray]

    def __post_init__(self) -> None:
        if self.dimension <= 0:
            raise ValueError("embedding dimension must be positive")

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


def load_embeddings(path: str) -> EmbeddingTable:
    """Load a word-vector text file: header "<count> <dim>", then one token
    per line followed by its components.

    Duplicate tokens keep the last occurrence (with a warning). A row whose
    arity disagrees with the header is a format error citing the line.
    """
    vectors: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as fp:
        header = fp.readline()
        parts = header.split()
        if len(parts) != 2:
            raise EmbeddingFormatError(
                f"header must be '<count> <dim>', got {header.strip()!r}", 1)
        try:
            count, dim = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise EmbeddingFormatError(str(exc), 1) from exc
        if count < 0 or dim <= 0:
            raise EmbeddingFormatError("count must be >= 0 and dim > 0", 1)
        rows = 0
        for line_number, raw in enumerate(fp, start=2):
            text = raw.strip()
            if not text:
                continue
            pieces = text.split()
            if len(pieces) != dim + 1:
                raise EmbeddingFormatError(
                    f"expected {dim} components, got {len(pieces) - 1}",
                    line_number)
            token = pieces[0].lower()
            try:
                vec = np.array([float(x) for x in pieces[1:]], dtype=np.float64)
            except ValueError as exc:
                raise EmbeddingFormatError(str(exc), line_number) from exc
            if token in vectors:
                logger.warning("duplicate embedding token %r at line %d; "
                               "keeping the later entry", token, line_number)
            vectors[token] = vec
            rows += 1
        if rows != count:
            raise EmbeddingFormatError(
                f"header declares {count} vectors but file has {rows}")
    return EmbeddingTable(dimension=dim, vectors=vectors)


def embed_name(table: EmbeddingTable, name: str) -> tuple[np.ndarray, bool]:
    """Embed an identifier as the mean of its in-table subtoken vectors.

    Returns (vector, oov). When no subtoken is in the table the vector is all
    zeros and oov is True.
    """
    hits = [table.vectors[tok] for tok in subtokenize(name) if tok in table.vectors]
    if not hits:
        return np.zeros(table.dimension, dtype=np.float64), True
    return np.mean(hits, axis=0), False


def doc_tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric runs; whitespace and punctuation separate."""
    return _DOC_TOKEN_RE.findall(text.lower())


#: Row index reserved for tokens outside the doc vocabulary.
UNKNOWN_TOKEN_INDEX = 0


@dataclass
class DocVocabulary:
    """Doc-comment vocabulary plus its trainable embedding rows.

    Row 0 is the unknown-token slot; token t maps to row ``index[t]``. The
    matrix is owned (and updated) by the neural model during training.
    """

    index: dict[str, int]
    matrix: np.ndarray  # (len(index) + 1, dimension)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[1]

    def token_ids(self, text: str | None) -> tuple[int, ...]:
        if not text:
            return ()
        return tuple(self.index.get(tok, UNKNOWN_TOKEN_INDEX)
                     for tok in doc_tokenize(text))


def build_doc_vocabulary(
    texts: Iterable[str | None],
    dimension: int,
    rng: np.random.Generator,
) -> DocVocabulary:
    """Build the vocabulary from a training corpus, one slot per distinct
    token plus the unknown slot, with seeded uniform initial rows."""
    seen: set[str] = set()
    for text in texts:
        if text:
            seen.update(doc_tokenize(text))
    ordered = sorted(seen)
    index = {tok: i + 1 for i, tok in enumerate(ordered)}
    bound = np.sqrt(6.0 / (len(index) + 1 + dimension))
    matrix = rng.uniform(-bound, bound, size=(len(index) + 1, dimension))
    return DocVocabulary(index=index, matrix=matrix)


def embed_doc(vocabulary: DocVocabulary, text: str | None) -> np.ndarray:
    """Mean of the trainable token embeddings; zero vector for empty input."""
    ids = vocabulary.token_ids(text)
    if not ids:
        return np.zeros(vocabulary.dimension, dtype=np.float64)
    return vocabulary.matrix[list(ids)].mean(axis=0)
