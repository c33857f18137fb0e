"""Puncturing patterns and the incapable inputs they induce.

An input ``u_j`` is *incapable* when its SC-decoding LLR is structurally
zero because of punctured outputs. The incapable set is always a
down-set of the domination order and has as many members as there are
punctured bits.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable

from .codec import zero_llr_propagate
from .domination import (
    Posequence,
    check_index_set,
    complies_with_domination,
    dominated_set,
    most_dominant,
)
from .exceptions import InvalidPatternError, UnsupportedSizeError

MAX_PSI_ORDER = 5


def incapable_set(punctured: Iterable[int], n: int) -> frozenset[int]:
    return zero_llr_propagate(punctured, n).incapable


def can_make_incapable(j: int, current: Iterable[int], n: int) -> bool:
    """Whether puncturing one more output bit can make ``u_j`` incapable.

    ``current`` is the present incapable set (a down-set not containing
    ``j``); the answer is yes exactly when every index strictly below
    ``j`` is already incapable.
    """
    current = check_index_set(current, n)
    if j in current:
        raise ValueError(f"{j} is already incapable")
    if not complies_with_domination(current, n, "downward"):
        raise InvalidPatternError("current incapable set is not downward-closed")
    return dominated_set(j, n, strict=True) <= current


def psi_family(j: int, n: int) -> frozenset[frozenset[int]]:
    """All minimal puncturing patterns that make ``u_j`` incapable.

    Built stage by stage from ``{(j,)}``: where bit ``t`` of ``j`` is 0 each
    element may independently move up by ``2**t`` (every offset tuple in
    ``{0, 2**t}^m``); where it is 1 the pattern is joined with its copy
    shifted down by ``2**t``. Patterns are kept as ordered tuples until the
    end so that offsets attach per position.
    """
    if n > MAX_PSI_ORDER:
        raise UnsupportedSizeError(f"psi families supported for n <= {MAX_PSI_ORDER}, got {n}")
    dominated_set(j, n)  # validates j
    fam: set[tuple[int, ...]] = {(j,)}
    for t in range(n):
        s = 1 << t
        if j >> t & 1:
            fam = {q + tuple(v - s for v in q) for q in fam}
        else:
            fam = {
                tuple(v + o for v, o in zip(q, offs))
                for q in fam
                for offs in product((0, s), repeat=len(q))
            }
    return frozenset(frozenset(q) for q in fam)


def psi_family_size(j: int, n: int) -> tuple[int, int]:
    """Closed-form ``(member size, family size)`` for :func:`psi_family`."""
    member = 1
    exponent = 0
    for t in range(n):
        if j >> t & 1:
            member *= 2
        else:
            exponent += member
    return member, 2**exponent


def canonical_patterns(j: int, n: int) -> tuple[frozenset[int], frozenset[int]]:
    """The two domination-compliant members of ``psi_family(j)``.

    These are the dominated set of ``j`` and its elementwise complement.
    """
    d = dominated_set(j, n)
    full = (1 << n) - 1
    return d, frozenset(full - k for k in d)


def widely_equivalent_patterns(target: Iterable[int], n: int) -> frozenset[frozenset[int]]:
    """Every puncturing pattern whose incapable set equals ``target``.

    Cross-unions the psi families of the maximal elements of ``target`` and
    keeps the unions of size ``|target|``.
    """
    target = check_index_set(target, n)
    if not complies_with_domination(target, n, "downward"):
        raise InvalidPatternError(
            f"incapable target {sorted(target)} is not downward-closed"
        )
    size = len(target)
    acc: set[frozenset[int]] = {frozenset()}
    for j in sorted(most_dominant(target, n)):
        acc = {a | q for a in acc for q in psi_family(j, n) if len(a | q) <= size}
    return frozenset(a for a in acc if len(a) == size)


def identical_pattern(J: int, p: Posequence) -> frozenset[int]:
    """Puncture the first ``J`` posequence entries; they become incapable themselves."""
    return p.head(J)


def reverse_pattern(J: int, p: Posequence) -> frozenset[int]:
    """Puncture the last ``J`` posequence entries; their complements become incapable."""
    return p.tail(J)
