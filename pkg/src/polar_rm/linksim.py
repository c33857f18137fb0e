"""Monte-Carlo BLER estimation over BPSK/AWGN with SC decoding.

Trials are processed in fixed-size blocks. Block ``b`` at grid point ``k``
draws messages and noise from independent streams keyed by
``(seed, k, b)``, so results depend only on the spec, and two specs with
the same seed see identical noise (common random numbers) whenever their
codeword lengths agree.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import binomtest

from .codec import encode, sc_decode
from .ratematch import RmConfig, allocate_channels, dematch, rate_match

BLOCK = 500


@dataclass(frozen=True)
class SimSpec:
    cfg: RmConfig
    esn0_grid_db: tuple[float, ...]
    max_trials: int
    target_errors: int | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "esn0_grid_db", tuple(float(v) for v in self.esn0_grid_db))
        if self.max_trials < 1:
            raise ValueError("max_trials must be >= 1")
        if not self.esn0_grid_db:
            raise ValueError("Es/N0 grid must not be empty")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_json(self) -> dict:
        return {
            "config": self.cfg.to_json(),
            "esn0_db": list(self.esn0_grid_db),
            "max_trials": self.max_trials,
            "target_errors": self.target_errors,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, obj: dict, base_dir: str | os.PathLike = ".") -> "SimSpec":
        te = obj.get("target_errors")
        return cls(
            RmConfig.from_json(obj["config"], base_dir),
            tuple(obj["esn0_db"]),
            int(obj["max_trials"]),
            None if te is None else int(te),
            int(obj.get("seed", 0)),
        )

    @classmethod
    def load(cls, path: str | os.PathLike) -> "SimSpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh), Path(path).parent)


@dataclass(frozen=True)
class SimPoint:
    esn0_db: float
    trials: int
    errors: int
    bler: float
    ci_lo: float
    ci_hi: float


@dataclass(frozen=True)
class SimResult:
    points: tuple[SimPoint, ...]

    def to_json(self) -> dict:
        return {"points": [asdict(p) for p in self.points]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["esn0_db", "trials", "errors", "bler", "ci_lo", "ci_hi"])
        for p in self.points:
            w.writerow([p.esn0_db, p.trials, p.errors, p.bler, p.ci_lo, p.ci_hi])
        return buf.getvalue()


def wilson_interval(errors: int, trials: int) -> tuple[float, float]:
    ci = binomtest(errors, trials).proportion_ci(0.95, method="wilson")
    return float(ci.low), float(ci.high)


def noise_sigma(esn0_db: float) -> float:
    """Per-dimension noise std for unit-energy BPSK."""
    return math.sqrt(1.0 / (2.0 * 10.0 ** (esn0_db / 10.0)))


class _Link:
    """Precomputed per-config state for block simulation."""

    def __init__(self, cfg: RmConfig):
        self.cfg = cfg
        alloc = allocate_channels(cfg)
        self.info = np.array(sorted(alloc.info), dtype=np.intp)
        self.frozen = np.ones(cfg.N, dtype=bool)
        self.frozen[self.info] = False

    def run(self, size: int, sigma: float, ss: np.random.SeedSequence) -> np.ndarray:
        """Simulate ``size`` blocks; returns a boolean error flag per block."""
        cfg = self.cfg
        msg_ss, noise_ss = ss.spawn(2)
        msg = np.random.default_rng(msg_ss).integers(0, 2, size=(size, cfg.K), dtype=np.uint8)
        noise = np.random.default_rng(noise_ss).standard_normal((size, cfg.M))
        u = np.zeros((size, cfg.N), dtype=np.uint8)
        u[:, self.info] = msg
        c = rate_match(encode(u), cfg)
        y = (1.0 - 2.0 * c) + sigma * noise
        llr = dematch(2.0 * y / sigma**2, cfg)
        u_hat, _ = sc_decode(llr, self.frozen)
        return (u_hat[:, self.info] != msg).any(axis=1)


def _block_seed(seed: int, point: int, block: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(point, block))


def _point(errors: int, trials: int, esn0: float) -> SimPoint:
    lo, hi = wilson_interval(errors, trials)
    return SimPoint(esn0, trials, errors, errors / trials, lo, hi)


def simulate(spec: SimSpec, block_size: int = BLOCK) -> SimResult:
    """BLER per Es/N0 point.

    A point stops after the first block that brings the error count to
    ``target_errors`` (if set) or when ``max_trials`` is reached.
    """
    link = _Link(spec.cfg)
    points = []
    for k, esn0 in enumerate(spec.esn0_grid_db):
        sigma = noise_sigma(esn0)
        trials = errors = 0
        b = 0
        while trials < spec.max_trials:
            size = min(block_size, spec.max_trials - trials)
            errors += int(link.run(size, sigma, _block_seed(spec.seed, k, b)).sum())
            trials += size
            b += 1
            if spec.target_errors is not None and errors >= spec.target_errors:
                break
        points.append(_point(errors, trials, esn0))
    return SimResult(tuple(points))


@dataclass(frozen=True)
class PairedPoint:
    esn0_db: float
    trials: int
    a: SimPoint
    b: SimPoint
    only_a: int
    only_b: int
    diff: float
    diff_ci_lo: float
    diff_ci_hi: float


@dataclass(frozen=True)
class PairedResult:
    points: tuple[PairedPoint, ...]

    def to_json(self) -> dict:
        return {"points": [asdict(p) for p in self.points]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(
            ["esn0_db", "trials", "errors_a", "bler_a", "errors_b", "bler_b", "diff", "diff_ci_lo", "diff_ci_hi"]
        )
        for p in self.points:
            w.writerow(
                [p.esn0_db, p.trials, p.a.errors, p.a.bler, p.b.errors, p.b.bler, p.diff, p.diff_ci_lo, p.diff_ci_hi]
            )
        return buf.getvalue()


def compare_patterns(spec_a: SimSpec, spec_b: SimSpec, block_size: int = BLOCK) -> PairedResult:
    """Run two configurations on common random numbers.

    Both share spec A's grid, seed and stopping rule. The difference
    ``bler_a - bler_b`` gets a 95% normal interval from the paired
    per-block outcomes.
    """
    if spec_a.esn0_grid_db != spec_b.esn0_grid_db:
        raise ValueError("paired comparison needs identical Es/N0 grids")
    link_a, link_b = _Link(spec_a.cfg), _Link(spec_b.cfg)
    points = []
    for k, esn0 in enumerate(spec_a.esn0_grid_db):
        sigma = noise_sigma(esn0)
        trials = err_a = err_b = only_a = only_b = 0
        b = 0
        while trials < spec_a.max_trials:
            size = min(block_size, spec_a.max_trials - trials)
            ea = link_a.run(size, sigma, _block_seed(spec_a.seed, k, b))
            eb = link_b.run(size, sigma, _block_seed(spec_a.seed, k, b))
            err_a += int(ea.sum())
            err_b += int(eb.sum())
            only_a += int((ea & ~eb).sum())
            only_b += int((eb & ~ea).sum())
            trials += size
            b += 1
            if spec_a.target_errors is not None and max(err_a, err_b) >= spec_a.target_errors:
                break
        diff = (only_a - only_b) / trials
        var = max((only_a + only_b) / trials - diff**2, 0.0)
        half = 1.96 * math.sqrt(var / trials)
        points.append(
            PairedPoint(
                esn0,
                trials,
                _point(err_a, trials, esn0),
                _point(err_b, trials, esn0),
                only_a,
                only_b,
                diff,
                diff - half,
                diff + half,
            )
        )
    return PairedResult(tuple(points))


def bler_monotone(points: Sequence[SimPoint]) -> bool:
    """Non-increasing BLER across the grid, allowing the CI width as slack."""
    return all(
        q.bler <= p.bler + (p.ci_hi - p.ci_lo) for p, q in zip(points, points[1:])
    )
