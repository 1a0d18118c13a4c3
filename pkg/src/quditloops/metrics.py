"""Aggregation of per-sample loop records into estimates with uncertainty.

Sums use :func:`math.fsum`, which is correctly rounded, so an aggregate is
bitwise identical under any ordering of the records.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ParameterError
from .graph import SampleRecord


@dataclass(frozen=True)
class Estimate:
    mean: float
    std: float
    stderr: float

    @property
    def defined(self) -> bool:
        return not math.isnan(self.mean)


UNDEFINED = Estimate(math.nan, math.nan, math.nan)


def estimate(values) -> Estimate:
    """Mean with population standard deviation and standard error."""
    values = list(values)
    n = len(values)
    if n == 0:
        return UNDEFINED
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / n
    std = math.sqrt(var)
    return Estimate(mean, std, std / math.sqrt(n))


def pooled_ratio(num, den) -> Estimate:
    """Ratio of sums with a delta-method standard error."""
    num, den = list(num), list(den)
    n = len(den)
    total = math.fsum(den)
    if n == 0 or total == 0:
        return UNDEFINED
    r = math.fsum(num) / total
    xbar = total / n
    resid = [y - r * x for y, x in zip(num, den)]
    var = math.fsum(e * e for e in resid) / max(n - 1, 1)
    se = math.sqrt(var / n) / xbar
    return Estimate(r, se * math.sqrt(n), se)


@dataclass(frozen=True)
class ExperimentRecord:
    n_h: Optional[int]
    n_v: Optional[int]
    p: Optional[float]
    n_samples: int
    seed: Optional[int]
    p_loop_edge: Estimate
    p_loop_edge_pooled: Estimate
    p_ntw: Estimate
    L_max: Estimate
    N_max: Estimate
    zero_error_skipped: int


def aggregate(
    records: Iterable[SampleRecord],
    n_h: Optional[int] = None,
    n_v: Optional[int] = None,
    p: Optional[float] = None,
    seed: Optional[int] = None,
) -> ExperimentRecord:
    """Fold per-sample records into one experiment row.

    ``p_loop_edge`` is the mean over non-empty samples of the per-sample
    loop-qudit fraction; empty samples are skipped and counted. ``p_ntw`` is
    the fraction of samples with any loop.
    """
    records = list(records)
    if not records:
        raise ParameterError("aggregate needs at least one record")
    nonempty = [r for r in records if r.n_err > 0]
    ratios = [r.n_loop_qudits / r.n_err for r in nonempty]
    return ExperimentRecord(
        n_h=n_h,
        n_v=n_v,
        p=p,
        n_samples=len(records),
        seed=seed,
        p_loop_edge=estimate(ratios),
        p_loop_edge_pooled=pooled_ratio(
            [r.n_loop_qudits for r in nonempty], [r.n_err for r in nonempty]
        ),
        p_ntw=estimate([1.0 if r.has_loop else 0.0 for r in records]),
        L_max=estimate([float(r.L_max) for r in records]),
        N_max=estimate([float(r.N_max) for r in records]),
        zero_error_skipped=len(records) - len(nonempty),
    )
