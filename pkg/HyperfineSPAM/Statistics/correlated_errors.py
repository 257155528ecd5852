#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
Phenomenological model of correlated bright errors: bursts that start with
a fixed probability per |0> trial, last a uniform number of |0> trials and
replace the counts of every shot they cover, |1> trials included, with
counts at an intermediate rate.

Code documentation
------------------
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

try:
    from HyperfineSPAM.utils import constants as ct
    from HyperfineSPAM.Detection import shot_archive as sa
except ModuleNotFoundError:
    from utils import constants as ct
    from Detection import shot_archive as sa


BURST_COLUMNS = ['burst', 'first_shot', 'last_shot', 'zero_trials']


@dataclass(frozen=True)
class BurstModel:
    """Burst onset probability per |0> trial, burst length range in |0>
    trials and the count rate during a burst (counts/us)."""

    burst_rate_per_trial: float = ct.BURST_RATE_PER_TRIAL
    burst_length_range: Tuple[int, int] = ct.BURST_LENGTH_RANGE
    burst_count_rate: float = ct.BURST_COUNTS_PER_SEGMENT / ct.SEGMENT_US

    def __post_init__(self):
        low, high = self.burst_length_range
        object.__setattr__(self, 'burst_length_range', (int(low), int(high)))
        if not 0.0 <= self.burst_rate_per_trial <= 1.0:
            raise ValueError("burst_rate_per_trial must be a probability.")
        if not 1 <= low <= high:
            raise ValueError("burst_length_range must satisfy 1 <= min <= max.")
        if self.burst_count_rate < 0:
            raise ValueError("burst_count_rate must be non-negative.")

    @property
    def mean_length(self):
        return sum(self.burst_length_range) / 2


def expected_burst_errors(model, n_trials):
    """Expected number of |0> trials inside bursts, ignoring overlaps."""

    return model.burst_rate_per_trial * n_trials * model.mean_length


def inject_correlated_errors(archive, model, seed, segment_us=ct.SEGMENT_US):
    """
    Overwrite runs of consecutive trials with burst counts.

    Parameters
    ----------
    archive : pandas.DataFrame
        Shot archive with interleaved |0>/|1> shots in shot order.
    model : BurstModel
        Burst statistics.
    seed : int
        Global seed; bursts draw from their own stream of it.
    segment_us : float
        Segment duration used to turn the burst rate into a mean count.

    Returns
    -------
    archive : pandas.DataFrame
        Copy of the input with burst counts written in.
    bursts : pandas.DataFrame
        One row per burst: first and last shot covered and the number of
        |0> trials it spans.
    """
    archive = archive.copy()
    bursts = pd.DataFrame(columns=BURST_COLUMNS, dtype=np.int64)
    if model.burst_rate_per_trial == 0 or len(archive) == 0:
        return archive, bursts

    rng = np.random.default_rng([seed, ct.BURST_STREAM])
    zero_rows = np.flatnonzero(archive['truth'].to_numpy() == ct.PREPARED_ZERO)
    onsets = np.flatnonzero(rng.random(len(zero_rows)) < model.burst_rate_per_trial)
    low, high = model.burst_length_range
    lengths = rng.integers(low, high + 1, size=len(onsets))

    columns = sa.count_columns(archive)
    counts = archive[columns].to_numpy(dtype=np.int64)
    mean = model.burst_count_rate * segment_us

    rows = []
    covered_until = -1
    for onset, length in zip(onsets, lengths):
        if onset <= covered_until:
            continue
        last = min(onset + length, len(zero_rows)) - 1
        first_row = zero_rows[onset]
        # a burst covers the |1> trial interleaved after its last |0> trial
        last_row = min(zero_rows[last] + 1, len(archive) - 1)
        counts[first_row:last_row + 1] = rng.poisson(mean, size=(last_row - first_row + 1,
                                                                 len(columns)))
        rows.append([len(rows), int(archive['shot'].iloc[first_row]),
                     int(archive['shot'].iloc[last_row]), int(last - onset + 1)])
        covered_until = last

    archive[columns] = counts
    if rows:
        bursts = pd.DataFrame(rows, columns=BURST_COLUMNS)

    return archive, bursts


def burst_contribution(bursts, n_trials):
    """|0> infidelity contributed by the trials inside bursts."""

    if n_trials < 1:
        raise ValueError("n_trials must be >= 1.")

    return int(bursts['zero_trials'].sum()) / n_trials if len(bursts) else 0.0
