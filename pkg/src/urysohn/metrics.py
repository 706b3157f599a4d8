"""Relative RMS error and multi-trial statistics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, MetricError

Z_95 = 1.96  # two-sided 95% normal quantile, rounded as usually quoted


def error_E(actual, predicted) -> float:
    """RMS of ``actual - predicted`` divided by the range of ``actual``.

    The range is taken from the scored sequence itself, so validation errors
    never borrow scale information from the training data.
    """
    z = np.asarray(actual, dtype=float)
    zh = np.asarray(predicted, dtype=float)
    if z.shape != zh.shape or z.ndim != 1:
        raise InputError(f"shape mismatch: actual {z.shape}, predicted {zh.shape}")
    if len(z) == 0:
        raise InputError("cannot score an empty sequence")
    span = z.max() - z.min()
    if not span > 0:
        raise MetricError("actual output is constant; relative error is undefined")
    return float(np.sqrt(np.mean((z - zh) ** 2)) / span)


@dataclass(frozen=True)
class TrialStats:
    values: tuple
    mean: float
    half_width: float

    @property
    def count(self) -> int:
        return len(self.values)

    def __str__(self):
        return f"{100 * self.mean:.3f}% +/- {100 * self.half_width:.3f}% (n={self.count})"


def aggregate_trials(values) -> TrialStats:
    """Mean and 95% normal-approximation confidence half-width."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or len(v) < 2:
        raise InputError("need at least two trials to aggregate")
    # sorting makes the float sums independent of trial order
    s = np.sort(v)
    half = Z_95 * s.std(ddof=1) / np.sqrt(len(s))
    mean = min(max(float(s.mean()), float(s[0])), float(s[-1]))
    return TrialStats(tuple(float(x) for x in v), mean, float(half))
