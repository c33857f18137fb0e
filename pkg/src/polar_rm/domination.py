"""Binary domination on Z_{2^n}.

``i`` is dominated by ``j`` (``i <= j`` in the domination order) when every
binary digit of ``i`` is at most the matching digit of ``j``, i.e.
``i & ~j == 0``. Index sets are plain ``frozenset[int]``; the code order ``n``
is passed alongside wherever it matters.

A *posequence* is a linear extension of this order: a permutation of
Z_{2^n} in which no element is preceded by something that strictly
dominates it.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exceptions import UnsupportedSizeError

IndexSet = frozenset

MAX_ENUM_ORDER = 4


def _check_index(i: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"code order n must be >= 1, got {n}")
    if not 0 <= i < (1 << n):
        raise ValueError(f"index {i} outside Z_{1 << n}")


def hamming_weight(i: int) -> int:
    return bin(i).count("1")


def dominates(i: int, j: int, n: int) -> bool:
    """Return True when ``j`` dominates ``i`` (``i`` is below ``j``)."""
    _check_index(i, n)
    _check_index(j, n)
    return i & ~j == 0


def strictly_dominates(i: int, j: int, n: int) -> bool:
    """Return True when ``j`` strictly dominates ``i``."""
    return i != j and dominates(i, j, n)


def dominated_set(j: int, n: int, strict: bool = False) -> frozenset[int]:
    """All ``k`` with ``k`` dominated by ``j``; ``2**popcount(j)`` members.

    Enumerates the submasks of ``j`` directly instead of scanning Z_{2^n}.
    """
    _check_index(j, n)
    out = []
    k = j
    while True:
        out.append(k)
        if k == 0:
            break
        k = (k - 1) & j
    res = frozenset(out)
    return res - {j} if strict else res


def dominating_set(j: int, n: int, strict: bool = False) -> frozenset[int]:
    """All ``k`` dominating ``j``; ``2**(n - popcount(j))`` members."""
    _check_index(j, n)
    return frozenset(complement(k, n) for k in dominated_set(complement(j, n), n, strict))


def complement(j: int, n: int) -> int:
    """Bitwise complement within ``n`` bits."""
    _check_index(j, n)
    return ((1 << n) - 1) - j


def complement_set(s: Iterable[int], n: int) -> frozenset[int]:
    return frozenset(complement(j, n) for j in s)


def check_index_set(s: Iterable[int], n: int) -> frozenset[int]:
    """Validate and freeze an index collection."""
    items = list(s)
    res = frozenset(items)
    if len(res) != len(items):
        raise ValueError("index set has duplicate members")
    for i in res:
        _check_index(i, n)
    return res


def complies_with_domination(s: Iterable[int], n: int, direction: str = "downward") -> bool:
    """Check downward closure (``D_j`` inside ``s``) or upward closure (``G_j`` inside ``s``)."""
    s = check_index_set(s, n)
    if direction == "downward":
        # closure under clearing one bit is enough
        return all(j & ~(1 << t) in s for j in s for t in range(n) if j >> t & 1)
    if direction == "upward":
        return all(j | (1 << t) in s for j in s for t in range(n) if not j >> t & 1)
    raise ValueError(f"direction must be 'downward' or 'upward', got {direction!r}")


def most_dominant(s: Iterable[int], n: int) -> frozenset[int]:
    """Maximal elements of ``s``: members not strictly dominated by another member."""
    s = check_index_set(s, n)
    return frozenset(j for j in s if not any(j != k and j & ~k == 0 for k in s))


# --------------------------------------------------------------------------
# posequences


@dataclass(frozen=True)
class Violation:
    """First pair of positions ``a < b`` with ``order[a]`` strictly dominating ``order[b]``."""

    position_a: int
    position_b: int
    value_a: int
    value_b: int
    reason: str = "domination"

    def __str__(self) -> str:
        if self.reason != "domination":
            return self.reason
        return (
            f"order[{self.position_a}]={self.value_a} strictly dominates "
            f"order[{self.position_b}]={self.value_b}"
        )


def first_violation(order: Sequence[int], n: int) -> Violation | None:
    """Diagnose why ``order`` is not a posequence; ``None`` when it is one."""
    N = 1 << n
    order = [int(v) for v in order]
    if len(order) != N:
        return Violation(-1, -1, -1, -1, f"length {len(order)} != {N}")
    seen: dict[int, int] = {}
    for pos, v in enumerate(order):
        if not 0 <= v < N:
            return Violation(pos, pos, v, v, f"order[{pos}]={v} outside Z_{N}")
        if v in seen:
            return Violation(seen[v], pos, v, v, f"value {v} repeated at positions {seen[v]} and {pos}")
        seen[v] = pos
    # an inverted strict pair implies an inverted covering pair (one bit apart)
    for b, v in enumerate(order):
        for t in range(n):
            w = v | (1 << t)
            if w != v and seen[w] < b:
                return Violation(seen[w], b, w, v)
    return None


def is_posequence(order: Sequence[int], n: int) -> bool:
    return first_violation(order, n) is None


@dataclass(frozen=True)
class Posequence:
    """A domination-respecting permutation of Z_{2^n}."""

    n: int
    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))
        bad = first_violation(self.order, self.n)
        if bad is not None:
            raise ValueError(f"not a {1 << self.n}-posequence: {bad}")

    @property
    def N(self) -> int:
        return 1 << self.n

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self) -> Iterator[int]:
        return iter(self.order)

    def __getitem__(self, i):
        return self.order[i]

    def head(self, J: int) -> frozenset[int]:
        """First ``J`` entries as a set."""
        _check_count(J, self.N)
        return frozenset(self.order[:J])

    def tail(self, J: int) -> frozenset[int]:
        """Last ``J`` entries as a set."""
        _check_count(J, self.N)
        return frozenset(self.order[self.N - J :])

    def to_json(self) -> dict:
        return {"n": self.n, "order": list(self.order)}

    @classmethod
    def from_json(cls, obj: dict) -> "Posequence":
        return cls(int(obj["n"]), tuple(obj["order"]))

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Posequence":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def dump(self, path: str | os.PathLike) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)


def _check_count(J: int, N: int) -> None:
    if not 0 <= J <= N:
        raise ValueError(f"J must lie in [0, {N}], got {J}")


def _check_enum_order(n: int) -> None:
    if n < 1:
        raise ValueError(f"code order n must be >= 1, got {n}")
    if n > MAX_ENUM_ORDER:
        raise UnsupportedSizeError(
            f"posequence enumeration supports n <= {MAX_ENUM_ORDER}, got n={n}"
        )


@lru_cache(maxsize=None)
def _strict_below_masks(n: int) -> tuple[int, ...]:
    """Bitmask over Z_{2^n} of the strict dominated set of each index."""
    masks = []
    for j in range(1 << n):
        m = 0
        for k in dominated_set(j, n, strict=True):
            m |= 1 << k
        masks.append(m)
    return tuple(masks)


@lru_cache(maxsize=None)
def _count_from(n: int, placed: int) -> int:
    N = 1 << n
    full = (1 << N) - 1
    if placed == full:
        return 1
    below = _strict_below_masks(n)
    total = 0
    for j in range(N):
        bit = 1 << j
        if not placed & bit and below[j] & placed == below[j]:
            total += _count_from(n, placed | bit)
    return total


def count_posequences(n: int) -> int:
    """Number of linear extensions of the domination order on Z_{2^n}.

    Memoised over the placed prefix (always a down-set), so n=4 takes
    168 states rather than 1.68M sequences.
    """
    _check_enum_order(n)
    return _count_from(n, 0)


def iter_posequences(n: int) -> Iterator[tuple[int, ...]]:
    """Yield every posequence of order ``n`` in lexicographic order.

    Depth-first: at each step, append any unplaced index whose strict
    dominated set is already placed.
    """
    _check_enum_order(n)
    N = 1 << n
    below = _strict_below_masks(n)
    order = [0] * N

    def rec(depth: int, placed: int):
        if depth == N:
            yield tuple(order)
            return
        for j in range(N):
            bit = 1 << j
            if not placed & bit and below[j] & placed == below[j]:
                order[depth] = j
                yield from rec(depth + 1, placed | bit)

    yield from rec(0, 0)


def enumerate_posequences(n: int, mode: str = "count"):
    """Count (``mode='count'``) or stream (``mode='list'``) all posequences."""
    if mode == "count":
        return count_posequences(n)
    if mode == "list":
        return iter_posequences(n)
    raise ValueError(f"mode must be 'count' or 'list', got {mode!r}")


def random_posequence(n: int, rng: np.random.Generator) -> Posequence:
    """Draw a posequence uniformly at random.

    Each step picks an available index with probability proportional to
    the number of completions it admits.
    """
    _check_enum_order(n)
    N = 1 << n
    below = _strict_below_masks(n)
    placed = 0
    order = []
    for _ in range(N):
        cands, weights = [], []
        for j in range(N):
            bit = 1 << j
            if not placed & bit and below[j] & placed == below[j]:
                cands.append(j)
                weights.append(_count_from(n, placed | bit))
        r = int(rng.integers(sum(weights)))
        for j, w in zip(cands, weights):
            if r < w:
                break
            r -= w
        order.append(j)
        placed |= 1 << j
    return Posequence(n, tuple(order))


def natural_posequence(n: int) -> Posequence:
    """``(0, 1, ..., 2^n - 1)``; ascending integers never violate domination."""
    return Posequence(n, tuple(range(1 << n)))
