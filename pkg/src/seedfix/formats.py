"""Text formats for instances and brackets.

Instance::

    tfp v1
    n 4
    s 2
    seeds 0 1
    target 0
    0111
    0010
    0001
    0100

The ``seeds`` line is absent when ``s 0``.  Row i, column j is ``1`` iff i
beats j.  A bracket is one line: ``bracket`` followed by the leaf order.
"""

from __future__ import annotations

import numpy as np

from .core import Bracket, SeedAssignment, TfpError, TfpInstance, TournamentGraph


class FormatError(TfpError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _keyed(lines, idx, key):
    lineno = idx + 1
    if idx >= len(lines):
        raise FormatError(lineno, f"expected '{key} ...', got end of file")
    parts = lines[idx].split(" ")
    if parts[0] != key:
        raise FormatError(lineno, f"expected '{key} ...', got {lines[idx]!r}")
    try:
        return [int(v) for v in parts[1:]]
    except ValueError:
        raise FormatError(lineno, f"non-integer value in {lines[idx]!r}") from None


def _single(lines, idx, key):
    values = _keyed(lines, idx, key)
    if len(values) != 1:
        raise FormatError(idx + 1, f"'{key}' takes exactly one value")
    return values[0]


def parse_instance(text: str) -> TfpInstance:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != "tfp v1":
        raise FormatError(1, "missing 'tfp v1' header")
    n = _single(lines, 1, "n")
    s = _single(lines, 2, "s")
    idx = 3
    seeded: list[int] = []
    if s:
        seeded = _keyed(lines, idx, "seeds")
        if len(seeded) != s:
            raise FormatError(idx + 1, f"expected {s} seeds, got {len(seeded)}")
        idx += 1
    target = _single(lines, idx, "target")
    idx += 1
    rows = lines[idx:]
    if len(rows) != n:
        raise FormatError(idx + 1, f"expected {n} matrix rows, got {len(rows)}")
    adj = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(rows):
        if len(row) != n or set(row) - {"0", "1"}:
            raise FormatError(idx + i + 1, f"row must be {n} characters of 0/1")
        adj[i] = [c == "1" for c in row]
    try:
        graph = TournamentGraph(adj)
        return TfpInstance(graph, SeedAssignment(tuple(seeded)), target)
    except TfpError as err:
        raise FormatError(idx + 1, str(err)) from None


def format_instance(instance: TfpInstance) -> str:
    n = instance.n
    out = ["tfp v1", f"n {n}", f"s {instance.seeds.s}"]
    if instance.seeds.s:
        out.append("seeds " + " ".join(map(str, instance.seeds.seeded)))
    out.append(f"target {instance.target}")
    for row in instance.graph.table:
        out.append("".join("1" if w else "0" for w in row))
    return "\n".join(out) + "\n"


def parse_bracket(text: str) -> Bracket:
    lines = [ln for ln in text.split("\n") if ln]
    if len(lines) != 1:
        raise FormatError(1, "a bracket file holds exactly one line")
    leaves = _keyed(lines, 0, "bracket")
    try:
        return Bracket(tuple(leaves))
    except TfpError as err:
        raise FormatError(1, str(err)) from None


def format_bracket(bracket: Bracket) -> str:
    return "bracket " + " ".join(map(str, bracket.leaves)) + "\n"
