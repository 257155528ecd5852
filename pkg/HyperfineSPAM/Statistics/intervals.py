#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
SPAM infidelity estimates with Wilson score intervals and the
parenthetical-uncertainty display format.

Code documentation
------------------
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.stats import norm

try:
    from HyperfineSPAM.utils import constants as ct
except ModuleNotFoundError:
    from utils import constants as ct


SUPERSCRIPTS = str.maketrans('-0123456789', '⁻⁰¹²³⁴⁵⁶⁷⁸⁹')


def wilson_interval(errors, n, z=1.0):
    """
    Wilson score interval of a binomial proportion.

    Parameters
    ----------
    errors : int
        Number of errors.
    n : int
        Number of trials.
    z : float
        Standard-normal quantile; 1 gives one Wilson interval.

    Returns
    -------
    low, high : float
        Interval bounds, clipped to [0, 1].

    Raises
    ------
    ValueError
        If n is not positive or errors is outside [0, n].
    """
    if n <= 0:
        raise ValueError("n must be positive.")
    if not 0 <= errors <= n:
        raise ValueError(f"errors must be between 0 and n, got {errors} of {n}.")
    if z <= 0:
        raise ValueError("z must be positive.")

    p = errors / n
    z_sq = z * z
    denominator = 1 + z_sq / n
    center = (p + z_sq / (2 * n)) / denominator
    half_width = z / denominator * math.sqrt(p * (1 - p) / n + z_sq / (4 * n * n))

    low = 0.0 if errors == 0 else max(0.0, center - half_width)
    high = 1.0 if errors == n else min(1.0, center + half_width)

    return low, high


def z_for_confidence(confidence):
    """Two-sided standard-normal quantile for a confidence level."""

    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1).")

    return float(norm.ppf(0.5 + confidence / 2))


@dataclass(frozen=True)
class TrialTally:
    """Error counts for n_trials trials of each prepared state."""

    n_trials: int
    errors_zero: int
    errors_one: int

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1.")
        for key in ('errors_zero', 'errors_one'):
            value = getattr(self, key)
            if not 0 <= value <= self.n_trials:
                raise ValueError(f"{key} must be between 0 and n_trials.")


@dataclass(frozen=True)
class SpamSummary:
    infid_zero: float
    interval_zero: Tuple[float, float]
    infid_one: float
    interval_one: Tuple[float, float]
    total: float
    interval_total: Tuple[float, float]

    def as_row(self):
        return {'infid_zero': self.infid_zero,
                'infid_zero_low': self.interval_zero[0],
                'infid_zero_high': self.interval_zero[1],
                'infid_one': self.infid_one,
                'infid_one_low': self.interval_one[0],
                'infid_one_high': self.interval_one[1],
                'total': self.total,
                'total_low': self.interval_total[0],
                'total_high': self.interval_total[1]}


def spam_summary(tally, z=1.0):
    """
    Per-state infidelities and their mean, each with a Wilson interval.

    The total interval uses the pooled counts of both states, whose
    proportion equals the mean for equal trial numbers.
    """
    n = tally.n_trials
    pooled = tally.errors_zero + tally.errors_one

    return SpamSummary(infid_zero=tally.errors_zero / n,
                       interval_zero=wilson_interval(tally.errors_zero, n, z),
                       infid_one=tally.errors_one / n,
                       interval_one=wilson_interval(tally.errors_one, n, z),
                       total=pooled / (2 * n),
                       interval_total=wilson_interval(pooled, 2 * n, z))


def tally_from_labels(truth, labels):
    """
    Count |0> trials measured Bright and |1> trials measured Dark.

    Raises
    ------
    ValueError
        If the two prepared states have different numbers of trials.
    """
    truth = np.asarray(truth)
    labels = np.asarray(labels)
    zero = truth == ct.PREPARED_ZERO
    one = truth == ct.PREPARED_ONE
    if zero.sum() != one.sum():
        raise ValueError(f"Unequal trial numbers: {zero.sum()} |0> and {one.sum()} |1>.")

    return TrialTally(n_trials=int(zero.sum()),
                      errors_zero=int(np.sum(zero & (labels == ct.BRIGHT))),
                      errors_one=int(np.sum(one & (labels == ct.DARK))))


def format_parenthetical(value, uncertainty, exponent=None):
    """
    Format a value with its uncertainty as e.g. 9.6(1.4)×10⁻⁵.

    The uncertainty keeps two significant figures and the value is rounded
    to the same decimal place. exponent defaults to that of the value.
    """
    if value < 0 or uncertainty < 0:
        raise ValueError("value and uncertainty must be non-negative.")
    if value == 0 and uncertainty == 0:
        return '0(0)'

    if exponent is None:
        exponent = math.floor(math.log10(value if value > 0 else uncertainty))
    scale = 10.0 ** exponent
    mantissa = value / scale
    spread = uncertainty / scale

    decimals = 1
    if spread > 0:
        decimals = max(0, 1 - math.floor(math.log10(spread)))
    text = f"{mantissa:.{decimals}f}({spread:.{decimals}f})"
    if exponent == 0:
        return text

    return f"{text}×10{str(exponent).translate(SUPERSCRIPTS)}"


def summary_line(summary):
    """One-line report of a SpamSummary with symmetric half-width errors."""

    parts = []
    for name, value, (low, high) in [('|0>', summary.infid_zero, summary.interval_zero),
                                     ('|1>', summary.infid_one, summary.interval_one),
                                     ('total', summary.total, summary.interval_total)]:
        parts.append(f"{name} {format_parenthetical(value, (high - low) / 2)}")

    return '  '.join(parts)
