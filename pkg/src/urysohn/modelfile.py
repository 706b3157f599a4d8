"""Plain-text model files.

Single operator::

    URYSOHN v1
    mode=PLK m=2 n=3 xmin=0.0 xmax=1.0
    0.1 0.2 0.3
    0.4 0.5 0.6

A cascade is ``CASCADE v1`` followed by two operator blocks (first, second).
Composite reference objects use ``OBJECT v1 kind=<tag>`` followed by their
operator blocks.  Numbers are written with ``repr`` so every value parses back
to the identical double.
"""
from __future__ import annotations

import math
import os
import re

from .errors import FormatError
from .kernel import MODES, CascadeModel, UrysohnOperator

OPERATOR_HEADER = "URYSOHN v1"
CASCADE_HEADER = "CASCADE v1"
OBJECT_HEADER = "OBJECT v1"

_PARAMS = re.compile(r"^mode=(\S+) m=(\S+) n=(\S+) xmin=(\S+) xmax=(\S+)$")


def _fmt(v: float) -> str:
    return repr(float(v))


def dump_operator(op: UrysohnOperator) -> str:
    lines = [
        OPERATOR_HEADER,
        f"mode={op.mode} m={op.m} n={op.n} xmin={_fmt(op.x_min)} xmax={_fmt(op.x_max)}",
    ]
    lines += [" ".join(_fmt(v) for v in row) for row in op.U]
    return "\n".join(lines) + "\n"


def dumps(model) -> str:
    if isinstance(model, UrysohnOperator):
        return dump_operator(model)
    if isinstance(model, CascadeModel):
        return CASCADE_HEADER + "\n" + dump_operator(model.first) + dump_operator(model.second)
    raise TypeError(f"cannot serialize {type(model).__name__}")


def dump_tagged(kind: str, operators) -> str:
    return f"{OBJECT_HEADER} kind={kind}\n" + "".join(dump_operator(op) for op in operators)


def serialize(model) -> bytes:
    return dumps(model).encode("ascii")


class _Lines:
    """Line cursor over a byte stream that remembers byte offsets."""

    def __init__(self, data: bytes):
        self.items = []
        pos = 0
        for raw in data.splitlines(keepends=True):
            text = raw.decode("ascii", errors="replace").rstrip("\r\n")
            if text.strip():
                self.items.append((pos, text.strip()))
            pos += len(raw)
        self.end = pos
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else (self.end, None)

    def next(self, what):
        off, text = self.peek()
        if text is None:
            raise FormatError(f"truncated stream: expected {what}", off)
        self.i += 1
        return off, text


def _number(tok, off, what):
    try:
        v = float(tok)
    except ValueError:
        raise FormatError(f"cannot parse {what} {tok!r}", off) from None
    if not math.isfinite(v):
        raise FormatError(f"non-finite {what} {tok!r}", off)
    return v


def _read_operator(lines: _Lines) -> UrysohnOperator:
    off, text = lines.next(f"'{OPERATOR_HEADER}' header")
    if text != OPERATOR_HEADER:
        raise FormatError(f"expected '{OPERATOR_HEADER}' header, got {text[:40]!r}", off)
    off, text = lines.next("parameter line")
    match = _PARAMS.match(text)
    if not match:
        raise FormatError(f"malformed parameter line {text[:60]!r}", off)
    mode, m_s, n_s, lo_s, hi_s = match.groups()
    if mode not in MODES:
        raise FormatError(f"unknown mode {mode!r}", off)
    try:
        m, n = int(m_s), int(n_s)
    except ValueError:
        raise FormatError(f"non-integer dimensions m={m_s} n={n_s}", off) from None
    if m < 1 or n < 2:
        raise FormatError(f"invalid dimensions m={m} n={n}", off)
    x_min = _number(lo_s, off, "xmin")
    x_max = _number(hi_s, off, "xmax")
    if not x_min < x_max:
        raise FormatError(f"empty input range [{x_min}, {x_max}]", off)

    rows = []
    row_offsets = []
    total = 0
    while len(rows) < m:
        off, text = lines.peek()
        if text is None or not _is_numeric_line(text):
            break
        lines.next("matrix row")
        toks = text.split()
        rows.append([_number(t, off, "matrix entry") for t in toks])
        row_offsets.append(off)
        total += len(toks)
    if total != m * n:
        off = lines.peek()[0]
        raise FormatError(
            f"expected {m * n} matrix values (m={m} x n={n}), found {total}", off
        )
    for r, (row, roff) in enumerate(zip(rows, row_offsets)):
        if len(row) != n:
            raise FormatError(f"row {r + 1} has {len(row)} values, expected {n}", roff)
    return UrysohnOperator(rows, x_min, x_max, mode)


def _is_numeric_line(text: str) -> bool:
    first = text.split()[0]
    try:
        float(first)
    except ValueError:
        return False
    return True


def _expect_end(lines: _Lines):
    off, text = lines.peek()
    if text is not None:
        raise FormatError(f"unexpected trailing content {text[:40]!r}", off)


def deserialize(data: bytes):
    """Parse an operator or cascade; raises :class:`FormatError` on bad input."""
    lines = _Lines(data)
    off, text = lines.peek()
    if text == CASCADE_HEADER:
        lines.next("header")
        model = CascadeModel(_read_operator(lines), _read_operator(lines))
    elif text is None:
        raise FormatError("empty stream", off)
    else:
        model = _read_operator(lines)
    _expect_end(lines)
    return model


def loads(text: str):
    return deserialize(text.encode("ascii"))


def load_tagged(data: bytes) -> tuple[str, list[UrysohnOperator]]:
    """Parse an ``OBJECT v1`` file into its kind tag and operator blocks."""
    lines = _Lines(data)
    off, text = lines.next("header")
    if not text.startswith(OBJECT_HEADER + " kind="):
        raise FormatError(f"expected '{OBJECT_HEADER} kind=...' header", off)
    kind = text[len(OBJECT_HEADER + " kind="):].strip()
    ops = []
    while lines.peek()[1] is not None:
        ops.append(_read_operator(lines))
    if not ops:
        raise FormatError("object file holds no operator block", lines.end)
    return kind, ops


def save(model, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize(model))


def load(path):
    with open(os.fspath(path), "rb") as fh:
        return deserialize(fh.read())
