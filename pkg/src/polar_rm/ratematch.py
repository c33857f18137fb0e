"""Unified circular-buffer rate matching.

The encoder output is permuted once by a posequence and written to a
circular buffer; the codeword is always read from position 0. Puncturing
and shortening both drop the buffer tail, repetition wraps around. The
only mode-dependent step is which inputs lose their capacity:

* puncture: complements of the dropped outputs become incapable,
* shorten: the dropped outputs' own indices are shortened inputs,
* repeat: nothing.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .codec import LLR_INF
from .domination import Posequence, complement_set, hamming_weight
from .exceptions import CapacityError

MODES = ("puncture", "shorten", "repeat")
DEFAULT_RATE_THRESHOLD = Fraction(7, 16)
DEFAULT_DESIGN_ERASURE = 0.5
MAX_DEFAULT_ORDER = 10

# 16-entry buffer order with both puncture and shorten tails domination-compliant
UNIFIED_16 = (0, 1, 2, 4, 8, 3, 5, 6, 9, 10, 12, 7, 11, 13, 14, 15)


def select_mother_code(M: int, K: int) -> int:
    """Mother code length for an ``(M, K)`` code.

    Drops to the smaller power of two when ``M`` barely exceeds it and the
    rate is below 9/16; otherwise rounds ``M`` up.
    """
    if K < 0 or M < 1:
        raise ValueError(f"need M >= 1 and K >= 0, got M={M}, K={K}")
    if M < K:
        raise ValueError(f"codeword length M={M} is smaller than K={K}")
    m = (M - 1).bit_length()  # ceil(log2 M)
    lower = 1 << max(m - 1, 0)
    if m >= 1 and Fraction(M) <= Fraction(9, 8) * lower and Fraction(K, M) < Fraction(9, 16):
        N = lower
    else:
        N = 1 << m
    return max(N, 2)


def select_mode(M: int, N: int, K: int, rate_threshold: Fraction = DEFAULT_RATE_THRESHOLD) -> str:
    if M > N:
        return "repeat"
    if Fraction(K, M) <= Fraction(rate_threshold):
        return "puncture"
    return "shorten"


def bhattacharyya(n: int, design_erasure: float = DEFAULT_DESIGN_ERASURE) -> np.ndarray:
    """BEC Bhattacharyya parameter of every split channel.

    Index bits are consumed from the most significant one down: a 0 bit
    maps ``z -> 2z - z**2``, a 1 bit maps ``z -> z**2``.
    """
    if not 0.0 <= design_erasure <= 1.0:
        raise ValueError(f"design erasure must lie in [0, 1], got {design_erasure}")
    z = np.array([design_erasure])
    # after processing bit t (MSB first) index = prefix bits; doubling keeps order
    for _ in range(n):
        z = np.stack([2 * z - z * z, z * z], axis=-1).reshape(-1)
    return z


def reliability_sequence(n: int, design_erasure: float = DEFAULT_DESIGN_ERASURE) -> tuple[int, ...]:
    """Indices ordered least to most reliable (descending z, ties by index)."""
    z = bhattacharyya(n, design_erasure)
    return tuple(sorted(range(1 << n), key=lambda i: (-z[i], i)))


@lru_cache(maxsize=None)
def default_posequence(n: int) -> Posequence:
    """Deterministic buffer order: weight, then decreasing z, then index."""
    if n > MAX_DEFAULT_ORDER:
        raise ValueError(f"default posequences are shipped for n <= {MAX_DEFAULT_ORDER}")
    z = bhattacharyya(n)
    order = sorted(range(1 << n), key=lambda i: (hamming_weight(i), -z[i], i))
    return Posequence(n, tuple(order))


PRESETS = {"unified16": Posequence(4, UNIFIED_16)}


def load_reliability(path: str | os.PathLike) -> tuple[int, tuple[int, ...]]:
    with open(path) as fh:
        obj = json.load(fh)
    n, order = int(obj["n"]), tuple(int(v) for v in obj["order"])
    if sorted(order) != list(range(1 << n)):
        raise ValueError("reliability order is not a permutation")
    return n, order


@dataclass(frozen=True)
class RmConfig:
    """Complete rate-matching configuration.

    ``reliability`` lists all ``N`` indices from least to most reliable.
    Build through :meth:`build` unless every field is already known.
    """

    M: int
    K: int
    N: int
    mode: str
    posequence: Posequence
    reliability: tuple[int, ...]
    rate_threshold: Fraction = DEFAULT_RATE_THRESHOLD
    design_erasure: float = DEFAULT_DESIGN_ERASURE

    def __post_init__(self):
        object.__setattr__(self, "reliability", tuple(int(v) for v in self.reliability))
        object.__setattr__(self, "rate_threshold", Fraction(self.rate_threshold))
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.posequence.N != self.N:
            raise ValueError(f"posequence length {self.posequence.N} != N={self.N}")
        if sorted(self.reliability) != list(range(self.N)):
            raise ValueError("reliability order must be a permutation of Z_N")
        if not 0 <= self.K <= self.M:
            raise ValueError(f"need 0 <= K <= M, got K={self.K}, M={self.M}")
        if (self.mode == "repeat") != (self.M > self.N):
            raise ValueError(f"mode {self.mode!r} inconsistent with M={self.M}, N={self.N}")
        if self.K > self.N - self.J:
            raise CapacityError(f"K={self.K} exceeds the {self.N - self.J} usable split channels")

    @property
    def n(self) -> int:
        return self.N.bit_length() - 1

    @property
    def J(self) -> int:
        return max(self.N - self.M, 0)

    @classmethod
    def build(
        cls,
        M: int,
        K: int,
        mode: str = "auto",
        *,
        N: int | None = None,
        posequence: Posequence | None = None,
        reliability: Sequence[int] | None = None,
        rate_threshold: Fraction | str = DEFAULT_RATE_THRESHOLD,
        design_erasure: float = DEFAULT_DESIGN_ERASURE,
    ) -> "RmConfig":
        rate_threshold = Fraction(rate_threshold)
        if N is None:
            N = posequence.N if posequence is not None else select_mother_code(M, K)
        n = N.bit_length() - 1
        if mode == "auto":
            mode = select_mode(M, N, K, rate_threshold)
        if posequence is None:
            posequence = default_posequence(n)
        if reliability is None:
            reliability = reliability_sequence(n, design_erasure)
        return cls(M, K, N, mode, posequence, tuple(reliability), rate_threshold, design_erasure)

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "K": self.K,
            "N": self.N,
            "mode": self.mode,
            "posequence": self.posequence.to_json(),
            "reliability": {"n": self.n, "order": list(self.reliability)},
            "rate_threshold": str(self.rate_threshold),
            "design_erasure": self.design_erasure,
        }

    @classmethod
    def from_json(cls, obj: dict, base_dir: str | os.PathLike = ".") -> "RmConfig":
        """Read a config; ``posequence``/``reliability`` may be inline objects or file paths."""
        base = Path(base_dir)

        def resolve(ref):
            if ref is None or isinstance(ref, dict):
                return ref
            if isinstance(ref, str) and ref in PRESETS:
                return PRESETS[ref].to_json()
            with open(base / ref) as fh:
                return json.load(fh)

        p = resolve(obj.get("posequence"))
        r = resolve(obj.get("reliability"))
        return cls.build(
            int(obj["M"]),
            int(obj["K"]),
            obj.get("mode", "auto"),
            N=obj.get("N"),
            posequence=Posequence.from_json(p) if p else None,
            reliability=r["order"] if r else None,
            rate_threshold=obj.get("rate_threshold", DEFAULT_RATE_THRESHOLD),
            design_erasure=float(obj.get("design_erasure", DEFAULT_DESIGN_ERASURE)),
        )


@dataclass(frozen=True)
class ChannelAllocation:
    """Partition of the inputs into information, frozen and zero-capacity indices.

    ``tight`` is set when ``K`` uses every split channel left after removing
    the zero-capacity set.
    """

    info: frozenset[int]
    frozen: frozenset[int]
    zero_cap: frozenset[int]
    tight: bool = field(default=False)

    def to_json(self) -> dict:
        return {
            "info": sorted(self.info),
            "frozen": sorted(self.frozen),
            "zero_capacity": sorted(self.zero_cap),
            "tight": self.tight,
        }


def interleave(x, p: Posequence) -> np.ndarray:
    """``x'[i] = x[p[i]]`` along the last axis."""
    x = np.asarray(x)
    return x[..., list(p.order)]


def deinterleave(xp, p: Posequence) -> np.ndarray:
    xp = np.asarray(xp)
    out = np.empty_like(xp)
    out[..., list(p.order)] = xp
    return out


def buffer_positions(cfg: RmConfig) -> np.ndarray:
    """Encoder-output index sent as each codeword bit (start point always 0)."""
    order = np.asarray(cfg.posequence.order)
    return order[np.arange(cfg.M) % cfg.N]


def rate_match(x, cfg: RmConfig) -> np.ndarray:
    """Read ``M`` bits from the circular buffer holding the interleaved ``x``."""
    x = np.asarray(x)
    return x[..., buffer_positions(cfg)]


def untransmitted(cfg: RmConfig) -> frozenset[int]:
    """Encoder outputs left in the buffer tail (empty for repetition)."""
    return cfg.posequence.tail(cfg.J)


def zero_capacity_set(cfg: RmConfig) -> frozenset[int]:
    tail = untransmitted(cfg)
    if cfg.mode == "puncture":
        return complement_set(tail, cfg.n)
    if cfg.mode == "shorten":
        return tail
    return frozenset()


def allocate_channels(cfg: RmConfig) -> ChannelAllocation:
    """Give the ``K`` most reliable non-zero-capacity inputs to information."""
    zero = zero_capacity_set(cfg)
    usable = [i for i in cfg.reliability if i not in zero]
    if cfg.K > len(usable):
        raise CapacityError(f"K={cfg.K} exceeds the {len(usable)} usable split channels")
    info = frozenset(usable[len(usable) - cfg.K :]) if cfg.K else frozenset()
    frozen = frozenset(range(cfg.N)) - info - zero
    return ChannelAllocation(info, frozen, zero, tight=cfg.K == len(usable))


def dematch(received, cfg: RmConfig) -> np.ndarray:
    """Map ``M`` received LLRs back to the ``N`` encoder outputs.

    Repeated copies are summed, punctured outputs get exact zero and
    shortened (fixed) outputs get ``+inf``. Leading batch axes pass through.
    """
    r = np.asarray(received, dtype=float)
    if r.shape[-1] != cfg.M:
        raise ValueError(f"expected {cfg.M} LLRs, got {r.shape[-1]}")
    order = np.asarray(cfg.posequence.order)
    out = np.zeros(r.shape[:-1] + (cfg.N,))
    for start in range(0, cfg.M, cfg.N):
        chunk = r[..., start : start + cfg.N]
        out[..., order[: chunk.shape[-1]]] += chunk
    if cfg.mode == "shorten" and cfg.J:
        out[..., sorted(untransmitted(cfg))] = LLR_INF
    return out
