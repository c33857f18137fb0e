"""Shortening patterns and the encoder outputs they fix to zero.

Output ``x_j`` is the XOR of the inputs ``u_i`` with ``i`` dominating
``j``, so it is fixed to zero exactly when all of those inputs are
shortened. Fixed sets are therefore up-sets of the domination order.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .codec import generator_matrix
from .domination import (
    Posequence,
    check_index_set,
    complies_with_domination,
    dominating_set,
)
from .exceptions import InvalidPatternError


def fixed_set(shortened: Iterable[int], n: int) -> frozenset[int]:
    s = check_index_set(shortened, n)
    return frozenset(j for j in range(1 << n) if dominating_set(j, n) <= s)


def can_fix(j: int, current_fixed: Iterable[int], n: int) -> bool:
    """Whether shortening one more input can fix ``x_j`` to zero."""
    current = check_index_set(current_fixed, n)
    if j in current:
        raise ValueError(f"{j} is already fixed")
    if not complies_with_domination(current, n, "upward"):
        raise InvalidPatternError("current fixed set is not upward-closed")
    return dominating_set(j, n, strict=True) <= current


def greedy_shortening(J: int, p: Posequence) -> frozenset[int]:
    """Shorten the inputs named by the last ``J`` posequence entries."""
    return p.tail(J)


def weight_one_column_shortening(J: int, n: int) -> list[int]:
    """Greedy weight-one-column shortening on ``F^{(x)n}``.

    Repeatedly finds a column of the remaining generator with a single
    nonzero entry and removes that entry's row and column. Among several
    candidates the highest column index wins. Returns the shortened row
    indices in removal order.
    """
    N = 1 << n
    if not 0 <= J <= N:
        raise ValueError(f"J must lie in [0, {N}], got {J}")
    G = generator_matrix(n).astype(np.int64)
    rows = np.ones(N, dtype=bool)
    cols = np.ones(N, dtype=bool)
    removed = []
    for _ in range(J):
        weights = G[rows].sum(axis=0)
        cand = np.flatnonzero((weights == 1) & cols)
        if cand.size == 0:  # pragma: no cover - triangular structure forbids it
            raise RuntimeError("no weight-one column left")
        c = int(cand[-1])
        r = int(np.flatnonzero(rows & (G[:, c] == 1))[0])
        rows[r] = False
        cols[c] = False
        removed.append(r)
    return removed


def generator_column_oracle(shortened: Iterable[int], n: int) -> frozenset[int]:
    """Columns of ``F^{(x)n}`` that vanish on every row left unshortened."""
    s = check_index_set(shortened, n)
    keep = np.array([i not in s for i in range(1 << n)])
    G = generator_matrix(n)
    return frozenset(np.flatnonzero(~G[keep].any(axis=0)).tolist())
