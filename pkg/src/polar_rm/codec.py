"""Polar encoding with ``F^{(x)n}`` and successive-cancellation decoding.

Conventions
-----------
* Stage ``n`` holds the encoder output / channel LLRs, stage ``0`` the
  encoder input. Going from stage ``t+1`` to ``t`` pairs index ``i`` (bit
  ``t`` clear) with ``i + 2**t``.
* Positive LLR means bit value 0. ``0.0`` marks a punctured position and
  ``+inf`` a position fixed to zero by shortening.
* No bit-reversal permutation: ``x = u @ F^{(x)n}`` over GF(2).

All decoding routines accept a leading batch axis so the simulator can
decode many blocks per call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .domination import check_index_set

LLR_INF = np.inf


def _order_of(N: int) -> int:
    n = N.bit_length() - 1
    if N < 2 or 1 << n != N:
        raise ValueError(f"length must be a power of two >= 2, got {N}")
    return n


def generator_entry(i: int, j: int, n: int) -> int:
    """Entry ``(i, j)`` of ``F^{(x)n}``: 1 iff ``i`` dominates ``j``."""
    N = 1 << n
    if not (0 <= i < N and 0 <= j < N):
        raise ValueError(f"indices ({i}, {j}) outside Z_{N}")
    return int(j & ~i == 0)


def generator_matrix(n: int) -> np.ndarray:
    """Dense ``F^{(x)n}`` as a uint8 array (Kronecker power of [[1,0],[1,1]])."""
    G = np.array([[1]], dtype=np.uint8)
    F = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    for _ in range(n):
        G = np.kron(G, F)
    return G


def encode(u) -> np.ndarray:
    """Butterfly evaluation of ``u @ F^{(x)n}`` mod 2, O(N log N).

    Works on a single vector or on a batch ``(..., N)``.
    """
    x = np.array(u, dtype=np.uint8, copy=True)
    N = x.shape[-1]
    n = _order_of(N)
    lead = x.shape[:-1]
    for t in range(n):
        s = 1 << t
        v = x.reshape(*lead, N // (2 * s), 2, s)
        v[..., 0, :] ^= v[..., 1, :]
    return x


# --------------------------------------------------------------------------
# LLR updates


def f_update(a, b):
    """Check-node update ``2 atanh(tanh(a/2) tanh(b/2))``.

    Evaluated through the exact identity
    ``sgn(a)sgn(b)min(|a|,|b|) + log1p(e^-|a+b|) - log1p(e^-|a-b|)``,
    which never overflows, keeps ``f(a, 0) == 0`` exact and gives
    ``f(+inf, b) == b``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    mag = np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    with np.errstate(invalid="ignore"):
        corr = np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))
    corr = np.where(np.isinf(a) | np.isinf(b), 0.0, corr)
    return mag + corr


def g_update(a, b, beta):
    """Variable-node update ``(1 - 2 beta) a + b``; infinities saturate."""
    a = np.asarray(a, dtype=float)
    return np.where(np.asarray(beta) != 0, -a, a) + b


# --------------------------------------------------------------------------
# SC decoding


@dataclass
class LlrGrid:
    """Soft values and hard decisions recorded during one SC pass.

    ``alpha[t, i]`` is the LLR of variable node ``i`` at stage ``t``
    (``alpha[n]`` are the intrinsic values); ``beta[t, i]`` the hard
    decision fed back to the same node.
    """

    n: int
    alpha: np.ndarray
    beta: np.ndarray


def _frozen_mask(frozen: Iterable[int] | np.ndarray, N: int) -> np.ndarray:
    if isinstance(frozen, np.ndarray) and frozen.dtype == bool:
        if frozen.shape != (N,):
            raise ValueError("frozen mask has wrong length")
        return frozen
    mask = np.zeros(N, dtype=bool)
    idx = list(frozen)
    if idx:
        mask[list(check_index_set(idx, _order_of(N)))] = True
    return mask


def sc_decode(intrinsic, frozen, *, return_grid: bool = False):
    """Successive-cancellation decoding with frozen bits set to zero.

    Parameters
    ----------
    intrinsic : array_like, shape (N,) or (B, N)
        Channel LLRs; exact ``0`` for punctured and ``+inf`` for fixed positions.
    frozen : iterable of int or bool mask
        Frozen input indices (values are zero).
    return_grid : bool
        Also return the :class:`LlrGrid` (one per batch row).

    Returns
    -------
    u_hat, x_hat : ndarray of uint8
        Estimated input and its re-encoding, same leading shape as ``intrinsic``.
    """
    L = np.asarray(intrinsic, dtype=float)
    single = L.ndim == 1
    if single:
        L = L[None, :]
    B, N = L.shape
    n = _order_of(N)
    if np.isnan(L).any():
        raise ValueError("intrinsic LLRs contain NaN")
    mask = _frozen_mask(frozen, N)
    u_hat = np.zeros((B, N), dtype=np.uint8)
    alpha = beta = None
    if return_grid:
        alpha = np.zeros((B, n + 1, N))
        beta = np.zeros((B, n + 1, N), dtype=np.uint8)

    def rec(llr: np.ndarray, off: int, t: int) -> np.ndarray:
        # llr holds stage-t values for indices off .. off + 2**t - 1
        if alpha is not None:
            alpha[:, t, off : off + llr.shape[1]] = llr
        if t == 0:
            if mask[off]:
                bits = np.zeros(B, dtype=np.uint8)
            else:
                bits = (llr[:, 0] < 0).astype(np.uint8)
            u_hat[:, off] = bits
            out = bits[:, None]
        else:
            h = 1 << (t - 1)
            top, bot = llr[:, :h], llr[:, h:]
            b_left = rec(f_update(top, bot), off, t - 1)
            b_right = rec(g_update(top, bot, b_left), off + h, t - 1)
            out = np.concatenate([b_left ^ b_right, b_right], axis=1)
        if beta is not None:
            beta[:, t, off : off + out.shape[1]] = out
        return out

    x_hat = rec(L, 0, n)
    if single:
        u_hat, x_hat = u_hat[0], x_hat[0]
    if not return_grid:
        return u_hat, x_hat
    grids = [LlrGrid(n, alpha[b], beta[b]) for b in range(B)]
    return u_hat, x_hat, grids[0] if single else grids


# --------------------------------------------------------------------------
# symbolic zero propagation


@dataclass(frozen=True)
class ZeroProfile:
    """Indices whose LLR is structurally zero, per decoding stage."""

    n: int
    per_stage: tuple[frozenset[int], ...]

    @property
    def incapable(self) -> frozenset[int]:
        return self.per_stage[0]

    @property
    def punctured(self) -> frozenset[int]:
        return self.per_stage[self.n]


def zero_stage_masks(punctured_mask: np.ndarray) -> np.ndarray:
    """Boolean zero pattern per stage, shape ``(..., n+1, N)``.

    An f-output (bit ``t`` clear) is zero when either parent is; a g-output
    when both parents are. Accepts a batch of masks on leading axes.
    """
    z = np.asarray(punctured_mask, dtype=bool)
    N = z.shape[-1]
    n = _order_of(N)
    lead = z.shape[:-1]
    out = np.zeros((*lead, n + 1, N), dtype=bool)
    out[..., n, :] = z
    cur = z
    for t in range(n - 1, -1, -1):
        s = 1 << t
        v = cur.reshape(*lead, N // (2 * s), 2, s)
        top, bot = v[..., 0, :], v[..., 1, :]
        cur = np.stack([top | bot, top & bot], axis=-2).reshape(*lead, N)
        out[..., t, :] = cur
    return out


def zero_llr_propagate(punctured: Iterable[int], n: int) -> ZeroProfile:
    """Trace exact-zero LLRs from punctured outputs back to the inputs.

    Purely symbolic: no numeric f/g evaluation is involved.
    """
    N = 1 << n
    mask = np.zeros(N, dtype=bool)
    p = check_index_set(punctured, n)
    mask[list(p)] = True
    stages = zero_stage_masks(mask)
    return ZeroProfile(
        n, tuple(frozenset(np.flatnonzero(stages[t]).tolist()) for t in range(n + 1))
    )
