"""Dense embedding tables and the text vector file format.

Vector file layout (UTF-8)::

    <row_count> <dim>
    <token> <v1> ... <vdim>
    ...
    </OOV> <v1> ... <vdim>      (optional, not counted in row_count)

Values are written with Python float repr, so a save/load round trip
reproduces every float64 bit-exactly.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import MissingOovError, ParseError, UnknownConceptError, ValidationError

OOV_TOKEN = "</OOV>"


class EmbeddingTable:
    """One float64 vector per token, plus an optional shared OOV vector."""

    def __init__(self, tokens: Sequence[str], matrix: np.ndarray,
                 oov_vector: np.ndarray | None = None):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != len(tokens):
            raise ValidationError(
                f"matrix shape {matrix.shape} does not match {len(tokens)} tokens")
        if not np.all(np.isfinite(matrix)):
            raise ValidationError("embedding matrix contains non-finite values")
        self.tokens = tuple(tokens)
        self.matrix = matrix
        self.index = {t: i for i, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValidationError("duplicate tokens in embedding table")
        if oov_vector is not None:
            oov_vector = np.asarray(oov_vector, dtype=np.float64)
            if oov_vector.shape != (matrix.shape[1],):
                raise ValidationError(
                    f"oov vector has shape {oov_vector.shape}, expected ({matrix.shape[1]},)")
            if not np.all(np.isfinite(oov_vector)):
                raise ValidationError("oov vector contains non-finite values")
        self.oov_vector = oov_vector

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def vector(self, token: str) -> np.ndarray:
        """Strict lookup; raises for tokens outside the vocabulary."""
        try:
            return self.matrix[self.index[token]]
        except KeyError:
            raise UnknownConceptError(f"unknown token: {token!r}") from None

    def lookup(self, token: str) -> np.ndarray:
        """Lookup under the whole-token OOV policy: unknown tokens map to
        the shared OOV vector."""
        row = self.index.get(token)
        if row is not None:
            return self.matrix[row]
        if self.oov_vector is None:
            raise MissingOovError(
                f"token {token!r} is out of vocabulary and no OOV vector is configured")
        return self.oov_vector

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmbeddingTable):
            return NotImplemented
        if self.tokens != other.tokens:
            return False
        if not np.array_equal(self.matrix, other.matrix):
            return False
        if (self.oov_vector is None) != (other.oov_vector is None):
            return False
        return self.oov_vector is None or np.array_equal(self.oov_vector, other.oov_vector)


def _format_row(token: str, values: np.ndarray) -> str:
    return token + " " + " ".join(repr(float(v)) for v in values)


def save_vectors(table: EmbeddingTable, path) -> None:
    for token in table.tokens:
        if not token or token.split() != [token]:
            raise ValidationError(f"token {token!r} cannot be stored in a vector file")
        if token == OOV_TOKEN:
            raise ValidationError(f"{OOV_TOKEN} is reserved for the OOV row")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table)} {table.dim}\n")
        for token, row in zip(table.tokens, table.matrix):
            fh.write(_format_row(token, row) + "\n")
        if table.oov_vector is not None:
            fh.write(_format_row(OOV_TOKEN, table.oov_vector) + "\n")


def _parse_row(fields: list[str], dim: int, path, lineno: int) -> np.ndarray:
    if len(fields) != dim + 1:
        raise ParseError(
            f"expected token plus {dim} values, got {len(fields)} fields",
            path=path, line=lineno)
    try:
        vec = np.array([float(v) for v in fields[1:]], dtype=np.float64)
    except ValueError as err:
        raise ParseError(f"bad float: {err}", path=path, line=lineno) from None
    if not np.all(np.isfinite(vec)):
        raise ParseError("non-finite value", path=path, line=lineno)
    return vec


def load_vectors(path) -> EmbeddingTable:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise ParseError("header must be '<row_count> <dim>'", path=path, line=1)
        try:
            rows, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("header must contain two integers", path=path, line=1) from None
        if rows < 0 or dim < 1:
            raise ParseError(f"bad header counts: rows={rows} dim={dim}", path=path, line=1)

        tokens: list[str] = []
        matrix = np.empty((rows, dim), dtype=np.float64)
        oov = None
        lineno = 1
        for raw in fh:
            lineno += 1
            line = raw.rstrip("\r\n")
            if not line:
                continue
            fields = line.split(" ")
            if len(tokens) < rows:
                vec = _parse_row(fields, dim, path, lineno)
                tokens.append(fields[0])
                matrix[len(tokens) - 1] = vec
            elif fields[0] == OOV_TOKEN and oov is None:
                oov = _parse_row(fields, dim, path, lineno)
            else:
                raise ParseError(
                    f"unexpected extra row (header said {rows})", path=path, line=lineno)
        if len(tokens) != rows:
            raise ParseError(
                f"header said {rows} rows, file has {len(tokens)}",
                path=path, line=lineno)
    return EmbeddingTable(tokens, matrix, oov_vector=oov)
