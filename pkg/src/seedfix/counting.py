"""Exact counting of valid winning brackets by dynamic programming over subsets.

``f[i][j](S)`` is the number of valid unordered brackets on the player set S
(|S| = 2**i) that j wins.  Level i is built from level i - 1 by one subset
convolution per player j, against the aggregate of the tables of the players j
beats.  A size-2**i subtree is one of n / 2**i equal sections, so for every
power of two ell with n / 2**i <= ell <= s it must hold exactly
ell * 2**i / n of the top-ell seeds; entries violating that are zeroed.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import Bracket, SizeCapError, TfpError, TfpInstance, is_valid_bracket, log2, replay_bracket
from .oracle import WinnerCounts

NAIVE = "naive"
FAST = "fast"
DEFAULT_MAX_N = 16
HARD_MAX_N = 32

# products below this fit a signed int64 with room to spare
_INT64_SAFE = 2.0 ** 62


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int8)
    for b in range(n):
        pc[1 << b: 1 << (b + 1)] = pc[: 1 << b] + 1
    pc.flags.writeable = False
    return pc


def _as_values(values, n):
    arr = np.asarray(values)
    if arr.shape != (1 << n,):
        raise TfpError(f"set function table must have 2**{n} entries")
    if arr.dtype != object:
        arr = arr.astype(np.int64)
    return arr


@dataclass(frozen=True, eq=False)
class SetFunction:
    """Integer table over subsets of {0..n-1}, nonzero only on subsets of size ``rank``."""

    n: int
    rank: int
    values: np.ndarray

    def __post_init__(self):
        values = _as_values(self.values, self.n)
        object.__setattr__(self, "values", values)
        bad = (values != 0) & (popcounts(self.n) != self.rank)
        if bad.any():
            raise TfpError(f"nonzero entry off rank {self.rank} at mask {int(np.flatnonzero(bad)[0])}")

    @classmethod
    def zeros(cls, n: int, rank: int) -> "SetFunction":
        return cls(n, rank, np.zeros(1 << n, dtype=np.int64))

    @classmethod
    def from_dict(cls, n: int, rank: int, entries: dict[int, int]) -> "SetFunction":
        values = np.zeros(1 << n, dtype=object)
        for mask, v in entries.items():
            values[mask] = v
        return cls(n, rank, values)

    def __getitem__(self, mask: int) -> int:
        return int(self.values[mask])

    def support(self) -> list[int]:
        return [int(m) for m in np.flatnonzero(self.values != 0)]

    def to_dict(self) -> dict[int, int]:
        return {m: int(self.values[m]) for m in self.support()}

    def __eq__(self, other):
        return (
            isinstance(other, SetFunction)
            and self.n == other.n
            and self.to_dict() == other.to_dict()
        )


def _transform(a: np.ndarray, n: int, inverse: bool) -> None:
    """In-place zeta (sum over subsets) or its Moebius inverse."""
    for b in range(n):
        v = a.reshape(-1, 2, 1 << b)
        if inverse:
            v[:, 1, :] -= v[:, 0, :]
        else:
            v[:, 1, :] += v[:, 0, :]


def _abs_sum(values: np.ndarray) -> float:
    if values.dtype == object:
        return float(sum(abs(int(v)) for v in values[values != 0]))
    return float(np.abs(values.astype(np.float64)).sum())


def _naive(f: SetFunction, g: SetFunction, out_rank: int) -> np.ndarray:
    n = f.n
    h = np.zeros(1 << n, dtype=object)
    fv, gv = f.values, g.values
    for S in np.flatnonzero(popcounts(n) == out_rank):
        S = int(S)
        bits = [b for b in range(n) if S >> b & 1]
        total = 0
        for combo in itertools.combinations(bits, f.rank):
            T = sum(1 << b for b in combo)
            total += int(fv[T]) * int(gv[S ^ T])
        h[S] = total
    return h


def _fast(f: SetFunction, g: SetFunction, out_rank: int) -> np.ndarray:
    n = f.n
    bound = _abs_sum(f.values) * _abs_sum(g.values)
    if bound == 0:
        return np.zeros(1 << n, dtype=np.int64)
    # int64 arithmetic wraps mod 2**64; every step is a ring operation, so the
    # result is exact whenever the true |h| is below 2**63.
    dtype = np.int64 if bound < _INT64_SAFE else object
    fz = f.values.astype(dtype)
    gz = g.values.astype(dtype)
    _transform(fz, n, inverse=False)
    _transform(gz, n, inverse=False)
    with np.errstate(over="ignore"):
        prod = fz * gz
    _transform(prod, n, inverse=True)
    prod[popcounts(n) != out_rank] = 0
    return prod


def subset_convolution(f: SetFunction, g: SetFunction, mode: str = FAST) -> SetFunction:
    """h(S) = sum over T subset of S with |T| = f.rank of f(T) * g(S \\ T)."""
    if f.n != g.n:
        raise TfpError("set functions live on different ground sets")
    out_rank = f.rank + g.rank
    if out_rank > f.n:
        return SetFunction.zeros(f.n, min(out_rank, f.n))
    if mode == NAIVE:
        values = _naive(f, g, out_rank)
    elif mode == FAST:
        values = _fast(f, g, out_rank)
    else:
        raise TfpError(f"unknown convolution mode {mode!r}")
    return SetFunction(f.n, out_rank, values)


@dataclass(frozen=True)
class DpTable:
    """``levels[i][j]`` is the table of brackets on 2**i players won by j."""

    n: int
    levels: tuple[tuple[SetFunction, ...], ...]

    def counts(self) -> WinnerCounts:
        full = (1 << self.n) - 1
        return WinnerCounts(tuple(f[full] for f in self.levels[-1]))


def seed_filter(n: int, seeded: tuple[int, ...], level: int) -> np.ndarray:
    """Boolean mask over subsets of size 2**level that respect the seed counts."""
    pc = popcounts(n)
    ok = pc == (1 << level)
    masks = np.arange(1 << n, dtype=np.int64)
    ell = max(1, n >> level)
    while ell <= len(seeded):
        top = sum(1 << p for p in seeded[:ell])
        want = ell * (1 << level) // n
        ok &= pc[masks & top] == want
        ell *= 2
    return ok


def _check_cap(n, max_n):
    if n > min(max_n, HARD_MAX_N):
        raise SizeCapError(f"counting DP capped at n={max_n}, got n={n}")
    if n > DEFAULT_MAX_N:
        table_gib = (1 << n) * n * (log2(n) + 1) * 8 / 2**30
        warnings.warn(f"counting DP at n={n} needs about {table_gib:.0f} GiB of tables", ResourceWarning)


def build_dp_table(instance: TfpInstance, mode: str = FAST, max_n: int = DEFAULT_MAX_N) -> DpTable:
    n = instance.n
    _check_cap(n, max_n)
    rounds = log2(n)
    graph = instance.graph
    seeded = instance.seeds.seeded
    beats = graph.adj.astype(np.int64)

    prev = []
    for j in range(n):
        values = np.zeros(1 << n, dtype=np.int64)
        values[1 << j] = 1
        prev.append(SetFunction(n, 1, values))
    levels = [tuple(prev)]

    for i in range(1, rounds + 1):
        allowed = seed_filter(n, seeded, i)
        stack = np.stack([f.values for f in prev])
        if stack.dtype == object:
            lost_to = [sum((stack[k] for k in range(n) if beats[j, k]), np.zeros(1 << n, dtype=object)) for j in range(n)]
        else:
            # counts at n <= 32 stay far below 2**63, so the sum cannot wrap
            agg = beats @ stack
            lost_to = list(agg)
        cur = []
        half = 1 << (i - 1)
        for j in range(n):
            if not prev[j].values.any():
                cur.append(SetFunction.zeros(n, 2 * half))
                continue
            g = SetFunction(n, half, lost_to[j])
            h = subset_convolution(prev[j], g, mode)
            values = h.values
            values[~allowed] = 0
            cur.append(SetFunction(n, 2 * half, values))
        prev = cur
        levels.append(tuple(cur))
    return DpTable(n, tuple(levels))


def count_valid_winning_brackets(
    instance: TfpInstance, mode: str = FAST, max_n: int = DEFAULT_MAX_N
) -> WinnerCounts:
    return build_dp_table(instance, mode, max_n).counts()


def extract_winning_bracket(
    instance: TfpInstance, mode: str = FAST, max_n: int = DEFAULT_MAX_N, table: DpTable | None = None
) -> Bracket | None:
    """Trace one valid winning bracket for the target back through the DP."""
    table = table or build_dp_table(instance, mode, max_n)
    n, x = instance.n, instance.target
    full = (1 << n) - 1
    if table.levels[-1][x][full] == 0:
        return None
    graph = instance.graph

    def descend(i, j, S):
        if i == 0:
            return (j,)
        below = table.levels[i - 1]
        others = [b for b in range(n) if S >> b & 1 and b != j]
        for combo in itertools.combinations(others, (1 << (i - 1)) - 1):
            T = (1 << j) | sum(1 << b for b in combo)
            if below[j].values[T] == 0:
                continue
            R = S ^ T
            for k in others:
                if R >> k & 1 and graph.beats(j, k) and below[k].values[R] != 0:
                    return descend(i - 1, j, T) + descend(i - 1, k, R)
        raise AssertionError(f"DP entry ({i}, {j}, {S:#x}) is nonzero but has no witness")

    bracket = Bracket(descend(log2(n), x, full))
    winner, _ = replay_bracket(bracket, graph)
    if winner != x or not is_valid_bracket(bracket, instance.seeds):
        raise AssertionError("extracted bracket failed verification")
    return bracket


def total_unordered_brackets(n: int) -> int:
    """n! / 2**(n-1), the number of unordered brackets without seeds."""
    return math.factorial(n) // 2 ** (n - 1)
