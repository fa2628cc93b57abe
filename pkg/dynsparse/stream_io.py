"""
Stream file format

    # comment
    n <N> [w <W>]
    + u v [w]
    - u v [w]

The reader is forward-only: updates are yielded once, in file order, and the
underlying handle is never rewound.
"""

from __future__ import annotations

import sys
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import TextIO

from .errors import StreamFormatError
from .sparsifier.bank import EdgeUpdate


@dataclass(frozen=True)
class StreamHeader:
    n: int
    max_weight: int | None = None

    @property
    def weighted(self) -> bool:
        return self.max_weight is not None


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise StreamFormatError(line_no, f"{what} must be an integer, got {token!r}") from None


class StreamReader:
    """Single-pass reader of a stream file."""

    def __init__(self, handle: TextIO, source: str = "<stream>") -> None:
        self.source = source
        self._handle = handle
        self._line_no = 0
        self._header: StreamHeader | None = None
        self._consumed = False

    @classmethod
    def open(cls, path: str) -> StreamReader:
        """Reader over a file path, or standard input for '-'."""
        if path == "-":
            return cls(sys.stdin, "<stdin>")
        return cls(open(path, encoding="utf-8"), path)

    def close(self) -> None:
        if self._handle is not sys.stdin:
            self._handle.close()

    def __enter__(self) -> StreamReader:
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()

    def _next_content(self) -> tuple[int, list[str]] | None:
        for raw in self._handle:
            self._line_no += 1
            text = raw.split("#", 1)[0].strip()
            if text:
                return self._line_no, text.split()
        return None

    @property
    def header(self) -> StreamHeader:
        if self._header is None:
            first = self._next_content()
            if first is None:
                raise StreamFormatError(self._line_no, "missing header line 'n <N>'")
            line_no, tokens = first
            if tokens[0] != "n" or len(tokens) not in (2, 4):
                raise StreamFormatError(line_no, f"expected 'n <N> [w <W>]', got {' '.join(tokens)!r}")
            n = _parse_int(tokens[1], line_no, "vertex count")
            if n < 1:
                raise StreamFormatError(line_no, f"vertex count must be positive, got {n}")
            max_weight = None
            if len(tokens) == 4:
                if tokens[2] != "w":
                    raise StreamFormatError(line_no, f"expected 'w <W>', got {tokens[2]!r}")
                max_weight = _parse_int(tokens[3], line_no, "max weight")
                if max_weight < 1:
                    raise StreamFormatError(line_no, f"max weight must be positive, got {max_weight}")
            self._header = StreamHeader(n, max_weight)
        return self._header

    def __iter__(self) -> Iterator[EdgeUpdate]:
        if self._consumed:
            raise RuntimeError(f"{self.source} was already read; streams are single-pass")
        self._consumed = True
        header = self.header
        while (content := self._next_content()) is not None:
            yield self._parse_update(header, *content)

    def _parse_update(self, header: StreamHeader, line_no: int, tokens: list[str]) -> EdgeUpdate:
        if tokens[0] not in ("+", "-") or len(tokens) not in (3, 4):
            raise StreamFormatError(line_no, f"expected '+|- u v [w]', got {' '.join(tokens)!r}")
        u = _parse_int(tokens[1], line_no, "endpoint")
        v = _parse_int(tokens[2], line_no, "endpoint")
        if not (0 <= u < header.n and 0 <= v < header.n):
            raise StreamFormatError(line_no, f"endpoint outside [0, {header.n})")
        if u == v:
            raise StreamFormatError(line_no, f"self-loop ({u}, {v})")
        weight = 1
        if len(tokens) == 4:
            weight = _parse_int(tokens[3], line_no, "weight")
            limit = header.max_weight if header.max_weight is not None else 1
            if not 1 <= weight <= limit:
                raise StreamFormatError(line_no, f"weight {weight} outside [1, {limit}]")
        sign = 1 if tokens[0] == "+" else -1
        return EdgeUpdate(u, v, sign, weight)


def write_stream(
    handle: TextIO, n: int, updates: Iterable[EdgeUpdate], max_weight: int | None = None
) -> int:
    """Write a stream file; returns the number of update lines."""
    handle.write(f"n {n}" + (f" w {max_weight}" if max_weight is not None else "") + "\n")
    count = 0
    for upd in updates:
        symbol = "+" if upd.sign > 0 else "-"
        suffix = f" {upd.weight}" if max_weight is not None else ""
        handle.write(f"{symbol} {upd.u} {upd.v}{suffix}\n")
        count += 1
    return count
