"""Binary vectors and test matrices packed into Python integers.

A column of a ``t x n`` test matrix is stored as a single ``int`` whose bit
``j`` (least significant first) is the entry in row ``j + 1``.  Python ints are
arbitrary precision, so OR / AND / popcount run word-parallel for any ``t``.

Column and row indices are 1-based everywhere in the public API.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence


class DimensionError(ValueError):
    """Vectors or matrices of incompatible length were combined."""


class MatrixFormatError(ValueError):
    """A matrix text file does not follow the ``t n`` + rows format."""

    def __init__(self, message: str, line: int, column: int | None = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class BitVector:
    """A length-``t`` binary vector; ``bits`` holds row ``j`` in bit ``j - 1``."""

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 1:
            raise DimensionError(f"length must be >= 1, got {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits do not fit in length {self.length}")

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        """Parse ``"1010"``; the first character is row 1."""
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a nonempty 0/1 string: {s!r}")
        return cls(len(s), int(s[::-1], 2))

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> "BitVector":
        return cls(length, (1 << length) - 1)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return [j + 1 for j in range(self.length) if self.bits >> j & 1]

    def __str__(self) -> str:
        return format(self.bits, f"0{self.length}b")[::-1]

    def __or__(self, other: "BitVector") -> "BitVector":
        _check_lengths(self, other)
        return BitVector(self.length, self.bits | other.bits)


def _check_lengths(x: BitVector, y: BitVector) -> None:
    if x.length != y.length:
        raise DimensionError(f"length mismatch: {x.length} vs {y.length}")


def weight(v: BitVector) -> int:
    return v.weight


def boolean_sum(vectors: Iterable[BitVector], length: int | None = None) -> BitVector:
    """Coordinatewise OR of ``vectors``.

    An empty input needs an explicit ``length`` and yields the all-zero vector.
    """
    vectors = list(vectors)
    if not vectors:
        if length is None:
            raise DimensionError("empty Boolean sum needs an explicit length")
        return BitVector.zeros(length)
    t = vectors[0].length if length is None else length
    acc = 0
    for v in vectors:
        if v.length != t:
            raise DimensionError(f"length mismatch: {v.length} vs {t}")
        acc |= v.bits
    return BitVector(t, acc)


def covers(x: BitVector, y: BitVector) -> bool:
    """True iff ``x | y == x``, i.e. support(y) is contained in support(x)."""
    _check_lengths(x, y)
    return y.bits & ~x.bits == 0


@dataclass(frozen=True)
class CodeMatrix:
    """Immutable ``t x n`` binary test matrix stored column-wise."""

    t: int
    columns: tuple[int, ...]

    def __post_init__(self):
        if self.t < 1:
            raise DimensionError(f"t must be >= 1, got {self.t}")
        if len(self.columns) < 1:
            raise DimensionError("a code matrix needs at least one column")
        limit = 1 << self.t
        for i, c in enumerate(self.columns, 1):
            if c < 0 or c >= limit:
                raise ValueError(f"column {i} does not fit in {self.t} rows")

    @property
    def n(self) -> int:
        return len(self.columns)

    @classmethod
    def from_columns(cls, columns: Sequence[BitVector | str]) -> "CodeMatrix":
        vecs = [BitVector.from_string(c) if isinstance(c, str) else c for c in columns]
        if not vecs:
            raise DimensionError("a code matrix needs at least one column")
        t = vecs[0].length
        for v in vecs:
            if v.length != t:
                raise DimensionError(f"column length mismatch: {v.length} vs {t}")
        return cls(t, tuple(v.bits for v in vecs))

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "CodeMatrix":
        if not rows:
            raise DimensionError("a code matrix needs at least one row")
        n = len(rows[0])
        cols = [0] * n
        for j, row in enumerate(rows):
            if len(row) != n:
                raise DimensionError(f"row {j + 1} has {len(row)} entries, expected {n}")
            for i, ch in enumerate(row):
                if ch == "1":
                    cols[i] |= 1 << j
                elif ch != "0":
                    raise ValueError(f"illegal character {ch!r} in row {j + 1}")
        return cls(len(rows), tuple(cols))

    @classmethod
    def identity(cls, n: int) -> "CodeMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    def column(self, i: int) -> BitVector:
        self._check_index(i)
        return BitVector(self.t, self.columns[i - 1])

    def rows(self) -> list[str]:
        return [
            "".join("1" if c >> j & 1 else "0" for c in self.columns)
            for j in range(self.t)
        ]

    def column_weights(self) -> list[int]:
        return [c.bit_count() for c in self.columns]

    def delete_columns(self, indices: Iterable[int]) -> "CodeMatrix":
        drop = set(indices)
        for i in drop:
            self._check_index(i)
        return CodeMatrix(
            self.t, tuple(c for i, c in enumerate(self.columns, 1) if i not in drop)
        )

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise IndexError(f"column index {i} outside [1, {self.n}]")

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        return f"{self.t} {self.n}\n" + "".join(row + "\n" for row in self.rows())

    @classmethod
    def from_text(cls, text: str) -> "CodeMatrix":
        """Parse the ``t n`` header followed by ``t`` rows of ``n`` bits."""
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        else:
            raise MatrixFormatError("file must end with a newline", len(lines))
        if not lines:
            raise MatrixFormatError("missing header", 1)
        header = lines[0].split(" ")
        if len(header) != 2 or not all(h.isdigit() for h in header):
            raise MatrixFormatError(f"malformed header {lines[0]!r}, expected 't n'", 1)
        t, n = int(header[0]), int(header[1])
        if t < 1 or n < 1:
            raise MatrixFormatError("t and n must be positive", 1)
        if len(lines) - 1 != t:
            raise MatrixFormatError(f"expected {t} rows, found {len(lines) - 1}", len(lines))
        for j, row in enumerate(lines[1:], 2):
            for col, ch in enumerate(row, 1):
                if ch not in "01":
                    raise MatrixFormatError(f"illegal character {ch!r}", j, col)
            if len(row) != n:
                raise MatrixFormatError(f"row has {len(row)} entries, expected {n}", j)
        return cls.from_rows(lines[1:])


def outcome(C: CodeMatrix, D: Iterable[int]) -> BitVector:
    """Boolean sum of the columns indexed by ``D`` (all-zero for empty ``D``)."""
    acc = 0
    for i in D:
        C._check_index(i)
        acc |= C.columns[i - 1]
    return BitVector(C.t, acc)


def covered_columns(C: CodeMatrix, r: BitVector) -> list[int]:
    """Ascending indices ``i`` with ``covers(r, c_i)``."""
    if r.length != C.t:
        raise DimensionError(f"outcome length {r.length} != t = {C.t}")
    mask = ~r.bits
    return [i for i, c in enumerate(C.columns, 1) if c & mask == 0]


def subsets_up_to(indices: Sequence[int], d: int) -> Iterator[tuple[int, ...]]:
    """All subsets of size ``0..d`` by increasing size, then lexicographically."""
    for k in range(min(d, len(indices)) + 1):
        yield from combinations(indices, k)


def format_set(D: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in D) + "}"
