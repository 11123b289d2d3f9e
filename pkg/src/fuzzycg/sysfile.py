"""Plain-text linear system files.

Format::

    # comments start with '#', anywhere on a line
    m n
    a11 a12 ... a1n     (m rows of A)
    ...
    b1 b2 ... bm        (one line)

Blank lines are ignored.
"""

from __future__ import annotations

import numpy as np

from .errors import SystemFileError
from .linalg import LinearSystem


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _numbers(tokens, lineno):
    out = []
    for tok in tokens:
        try:
            val = float(tok)
        except ValueError:
            raise SystemFileError(f"non-numeric token {tok!r}", lineno) from None
        if not np.isfinite(val):
            raise SystemFileError(f"non-finite value {tok!r}", lineno)
        out.append(val)
    return out


def parse_system(text):
    lines = list(_content_lines(text))
    if not lines:
        raise SystemFileError("empty input: expected a dimension line 'm n'")

    lineno, tokens = lines[0]
    if len(tokens) != 2:
        raise SystemFileError(f"dimension line must be 'm n', got {' '.join(tokens)!r}", lineno)
    try:
        m, n = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise SystemFileError(f"dimension line must hold two integers, got {' '.join(tokens)!r}", lineno) from None
    if m < 1 or n < 1:
        raise SystemFileError(f"dimensions must be positive, got {m} {n}", lineno)

    body = lines[1:]
    rows = []
    for i in range(m):
        if i >= len(body):
            raise SystemFileError(f"expected {m} matrix rows, found {i}")
        lineno, tokens = body[i]
        if len(tokens) != n:
            raise SystemFileError(f"matrix row {i + 1} has {len(tokens)} entries, expected {n}", lineno)
        rows.append(_numbers(tokens, lineno))

    if len(body) <= m:
        raise SystemFileError(f"missing right-hand side line with {m} entries")
    lineno, tokens = body[m]
    if len(tokens) != m:
        raise SystemFileError(f"right-hand side has {len(tokens)} entries, expected {m}", lineno)
    b = _numbers(tokens, lineno)
    if len(body) > m + 1:
        raise SystemFileError("unexpected content after the right-hand side", body[m + 1][0])
    return LinearSystem(np.array(rows), np.array(b))


def serialize_system(system, comment=None):
    # repr(float) is the shortest string that round-trips exactly
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"{system.m} {system.n}")
    for row in system.A:
        out.append(" ".join(repr(float(v)) for v in row))
    out.append(" ".join(repr(float(v)) for v in system.b))
    return "\n".join(out) + "\n"


def load_system(path):
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


def save_system(path, system, comment=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_system(system, comment))
