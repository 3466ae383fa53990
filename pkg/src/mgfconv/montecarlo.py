"""Seeded inverse-CDF sampling used as an independent oracle.

Uniforms come from numpy's PCG64 seeded through ``SeedSequence``; each draw
takes 53 random bits and maps them to the open interval (0, 1) as
``(k + 0.5) / 2**53``, so quantile functions never see 0 or 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import CltExponential, DistributionModel, NoQuantileError
from .quadrature import Status
from .values import MgfValue, Route

__all__ = [
    "SampleBatch",
    "uniform_stream",
    "spawn_seeds",
    "sample",
    "empirical_mgf",
    "empirical_cdf_distance",
]

_CHUNK = 1 << 20
_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class SampleBatch:
    model_id: str
    seed: int
    draws: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return int(self.draws.size)


def uniform_stream(seed: int, count: int) -> np.ndarray:
    """``count`` uniforms in (0, 1) from the PCG64 stream for ``seed``."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    k = rng.integers(0, 1 << 53, size=count, dtype=np.int64)
    return (k + 0.5) / float(1 << 53)


def spawn_seeds(seed: int, k: int) -> list[int]:
    """Derive ``k`` independent child seeds for concurrent batches."""
    children = np.random.SeedSequence(seed).spawn(k)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def sample(model: DistributionModel, count: int, seed: int) -> SampleBatch:
    """Draw ``count`` variates from ``model`` by inverse transform.

    The CLT family is sampled as standardized sums of unit-exponential draws,
    ``n`` consecutive uniforms per variate.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if count == 0:
        return SampleBatch(model.model_id, seed, np.empty(0))
    if isinstance(model, CltExponential):
        n = model.n
        base = model.base
        per_chunk = max(1, _CHUNK // n)
        u = uniform_stream(seed, count * n)
        out = np.empty(count)
        for start in range(0, count, per_chunk):
            stop = min(count, start + per_chunk)
            block = base.quantile(u[start * n:stop * n]).reshape(stop - start, n)
            out[start:stop] = (block.sum(axis=1) - n) / math.sqrt(n)
        draws = out
    else:
        if not model.has_quantile:
            raise NoQuantileError(f"cannot sample {model.model_id}: no quantile function")
        draws = np.asarray(model.quantile(uniform_stream(seed, count)), dtype=float)
    draws.setflags(write=False)
    return SampleBatch(model.model_id, seed, draws)


def empirical_mgf(batch: SampleBatch, t: float) -> MgfValue:
    """Sample mean and standard error of exp(t X).

    If any exp(t x) would overflow the estimate is INCONCLUSIVE rather than
    infinite.
    """
    if batch.count == 0:
        raise ValueError("empirical_mgf needs a nonempty batch")
    t = float(t)
    if t == 0:
        return MgfValue(Status.FINITE, 1.0, 0.0, Route.MONTE_CARLO, "t = 0")
    arg = t * batch.draws
    top = float(arg.max())
    # leave headroom so the sum of squares cannot overflow either
    if top > 0.5 * _LOG_MAX - math.log(batch.count):
        return MgfValue(Status.INCONCLUSIVE, math.inf, math.inf, Route.MONTE_CARLO,
                        f"exp(t x) overflows (max t x = {top:.4g})")
    vals = np.exp(arg)
    mean = float(vals.mean())
    if batch.count > 1:
        se = float(vals.std(ddof=1) / math.sqrt(batch.count))
    else:
        se = math.inf
    return MgfValue(Status.FINITE, mean, se, Route.MONTE_CARLO, f"{batch.count} draws")


def empirical_cdf_distance(batch: SampleBatch, model: DistributionModel) -> float:
    """Kolmogorov-Smirnov distance between the batch ECDF and ``model``."""
    if batch.count == 0:
        raise ValueError("empirical_cdf_distance needs a nonempty batch")
    xs = np.sort(batch.draws)
    uniq, counts = np.unique(xs, return_counts=True)
    upper = np.cumsum(counts) / xs.size
    lower = upper - counts / xs.size
    f = np.asarray(model.cdf(uniq), dtype=float)
    f_left = np.asarray(model.cdf_left(uniq), dtype=float)
    return float(max(np.max(np.abs(upper - f)), np.max(np.abs(lower - f_left))))
