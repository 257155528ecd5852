#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
Cabinet shelving and segmented fluorescence detection of a single ion.

A shot prepared in |0> is shelved to D5/2 unless all three cabinet pulses
fail; a shelved ion may decay back during the shelved interval and turn
bright part-way through detection. Counts in each detection segment are
Poisson distributed, with the mean pro-rated inside the segment where the
decay happens.

Shots are simulated in fixed-size blocks, block b drawing from a generator
seeded with (seed, b), so archives do not depend on the number of workers.

Code documentation
------------------
"""

import math
import concurrent.futures
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm
from scipy.stats import poisson

try:
    from HyperfineSPAM.utils import (constants as ct,
                                     iterable_functions as itf)
except ModuleNotFoundError:
    from utils import (constants as ct,
                       iterable_functions as itf)


@dataclass(frozen=True)
class ShelvingConfig:
    """Cabinet shelving pulses; each pulse retries the population left behind."""

    pulse_fidelities: Tuple[float, ...] = ct.SHELVING_FIDELITIES
    pulse_durations_us: Tuple[float, ...] = ct.SHELVING_DURATIONS_US
    include_first_pulse: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'pulse_fidelities', tuple(self.pulse_fidelities))
        object.__setattr__(self, 'pulse_durations_us', tuple(self.pulse_durations_us))
        if len(self.pulse_fidelities) != len(self.pulse_durations_us):
            raise ValueError("pulse_fidelities and pulse_durations_us must have "
                             "the same length.")
        if len(self.pulse_fidelities) == 0:
            raise ValueError("At least one shelving pulse is required.")
        if any(not 0.0 <= f <= 1.0 for f in self.pulse_fidelities):
            raise ValueError("pulse_fidelities must be probabilities.")
        if any(d <= 0 for d in self.pulse_durations_us):
            raise ValueError("pulse_durations_us must be positive.")

    @property
    def pre_detection_us(self):
        """Shelved time before detection starts."""
        if self.include_first_pulse:
            return sum(self.pulse_durations_us)
        return sum(self.pulse_durations_us[1:])


@dataclass(frozen=True)
class DetectionConfig:
    """Segmented detection window, count rates and classifier settings."""

    n_segments: int = ct.N_SEGMENTS
    segment_us: float = ct.SEGMENT_US
    bright_rate_per_us: float = ct.BRIGHT_COUNTS_PER_SEGMENT / ct.SEGMENT_US
    dark_rate_per_us: float = ct.DARK_COUNTS_PER_SEGMENT / ct.SEGMENT_US
    d52_lifetime_s: float = ct.D52_LIFETIME_S
    bayes_confidence: float = ct.BAYES_CONFIDENCE
    threshold_counts: Optional[int] = None
    real_time: bool = False

    def __post_init__(self):
        if self.n_segments < 1:
            raise ValueError("n_segments must be >= 1.")
        if not self.segment_us > 0:
            raise ValueError("segment_us must be positive.")
        if self.dark_rate_per_us < 0 or self.bright_rate_per_us < 0:
            raise ValueError("Count rates must be non-negative.")
        if not self.bright_rate_per_us > self.dark_rate_per_us:
            raise ValueError("bright_rate_per_us must exceed dark_rate_per_us.")
        if not self.d52_lifetime_s > 0:
            raise ValueError("d52_lifetime_s must be positive.")
        if not 0.0 < self.bayes_confidence < 1.0:
            raise ValueError("bayes_confidence must be in (0, 1).")
        if self.threshold_counts is not None and self.threshold_counts < 0:
            raise ValueError("threshold_counts must be >= 0.")

    @property
    def window_us(self):
        return self.n_segments * self.segment_us

    @property
    def bright_mean(self):
        """Mean bright counts per segment."""
        return self.bright_rate_per_us * self.segment_us

    @property
    def dark_mean(self):
        return self.dark_rate_per_us * self.segment_us

    def threshold(self):
        if self.threshold_counts is not None:
            return self.threshold_counts
        return optimal_threshold(self.bright_mean * self.n_segments,
                                 self.dark_mean * self.n_segments)


@dataclass(frozen=True)
class ShotRecord:
    """Segment counts of one shot plus its ground truth.

    truth_decay_time_us is measured from the start of detection and is
    negative when the ion decayed during the cabinet pulses.
    """

    segment_counts: Tuple[int, ...]
    truth_state: str
    truth_decay_time_us: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'segment_counts', tuple(int(c) for c in self.segment_counts))
        if any(c < 0 for c in self.segment_counts):
            raise ValueError("segment_counts must be non-negative.")
        if self.truth_state not in [ct.PREPARED_ZERO, ct.PREPARED_ONE]:
            raise ValueError(f"truth_state must be {ct.PREPARED_ZERO} or {ct.PREPARED_ONE}.")

    @property
    def total_counts(self):
        return sum(self.segment_counts)


@dataclass(frozen=True)
class PreparedShot:
    """Outcome of state preparation for one trial.

    in_qubit_zero is True when the ion sits in |0> at measurement and can
    be shelved. shelved forces the shelving outcome; None samples it.
    """

    truth_state: str
    in_qubit_zero: bool
    shelved: Optional[bool] = None


def residual_unshelved_probability(shelving):
    """Probability that every cabinet pulse fails: prod(1 - f_i)."""

    return math.prod(1.0 - f for f in shelving.pulse_fidelities)


def shelved_interval_us(shelving, cfg):
    """Time an ion spends shelved: cabinet pulses after the first plus detection."""

    return shelving.pre_detection_us + cfg.window_us


def decay_probability(window_us, lifetime_s):
    """Probability of a D5/2 decay within window_us: 1 - exp(-t / tau)."""

    if math.isinf(lifetime_s):
        return 0.0

    return -math.expm1(-window_us * 1e-6 / lifetime_s)


def optimal_threshold(bright_mean, dark_mean, p_bright=0.5):
    """
    Threshold count between two Poisson histograms.

    The likelihood ratio of the two Poisson distributions crosses the prior
    odds at (ln(p / (1 - p)) + mb - md) / ln(mb / md); counts above the
    rounded value are classified bright.
    """
    if bright_mean <= dark_mean:
        raise ValueError("bright_mean must exceed dark_mean.")
    if dark_mean == 0:
        return 0

    thresh = np.log(p_bright / (1 - p_bright)) + bright_mean - dark_mean
    thresh /= np.log(bright_mean / dark_mean)

    return int(np.round(thresh))


def dark_error_probability(cfg, threshold=None):
    """P(Poisson(dark mean over the window) > threshold)."""

    if threshold is None:
        threshold = cfg.threshold()

    return float(poisson.sf(threshold, cfg.dark_mean * cfg.n_segments))


def bright_error_probability(cfg, threshold=None):
    """P(Poisson(bright mean over the window) <= threshold)."""

    if threshold is None:
        threshold = cfg.threshold()

    return float(poisson.cdf(threshold, cfg.bright_mean * cfg.n_segments))


def segment_means(cfg, bright, decay_time_us):
    """
    Mean counts per segment for many shots.

    Parameters
    ----------
    cfg : DetectionConfig
        Detection settings.
    bright : numpy.ndarray of bool
        True for ions that are bright from the start.
    decay_time_us : numpy.ndarray of float
        Decay time from the start of detection, NaN when no decay.

    Returns
    -------
    means : numpy.ndarray
        Array of shape (shots, n_segments).
    """
    starts = np.arange(cfg.n_segments) * cfg.segment_us
    decay = np.where(np.isnan(decay_time_us), np.inf, decay_time_us)
    dark_time = np.clip(decay[:, None] - starts[None, :], 0.0, cfg.segment_us)
    dark_time[np.asarray(bright)] = 0.0
    means = (cfg.dark_rate_per_us * dark_time
             + cfg.bright_rate_per_us * (cfg.segment_us - dark_time))

    return means


def sample_decay_times(rng, n, lifetime_s):
    """Exponential decay times in us; inf for an infinite lifetime."""

    if math.isinf(lifetime_s):
        return np.full(n, np.inf)

    return rng.exponential(lifetime_s * 1e6, n)


def simulate_shot(prepared, cfg, shelving, seed, shot_index=0):
    """
    Simulate one shot.

    Parameters
    ----------
    prepared : PreparedShot
        Truth label and whether the ion is in |0>.
    cfg : DetectionConfig
        Detection settings.
    shelving : ShelvingConfig
        Cabinet shelving pulses.
    seed : int
        Global seed.
    shot_index : int
        Index of the shot; the generator is seeded with (seed, shot_index).

    Returns
    -------
    record : ShotRecord
    """
    rng = np.random.default_rng([seed, shot_index])

    shelved = False
    if prepared.in_qubit_zero:
        if prepared.shelved is not None:
            shelved = prepared.shelved
        else:
            shelved = rng.random() >= residual_unshelved_probability(shelving)

    decay_time = np.nan
    if shelved:
        t = sample_decay_times(rng, 1, cfg.d52_lifetime_s)[0]
        if t < shelved_interval_us(shelving, cfg):
            decay_time = t - shelving.pre_detection_us

    means = segment_means(cfg, np.array([not shelved]), np.array([decay_time]))
    counts = rng.poisson(means[0])

    return ShotRecord(tuple(counts),
                      prepared.truth_state,
                      None if np.isnan(decay_time) else float(decay_time))


def count_columns(n_segments):
    return [f"c{i}" for i in range(n_segments)]


def simulate_block(block_index, first_shot, n_shots, p_zero_given_zero,
                   p_zero_given_one, cfg, shelving, seed):
    """
    Simulate a contiguous block of interleaved |0>/|1> trials.

    Even shot indices prepare |0>, odd ones |1>. p_zero_given_* is the
    probability that the ion sits in |0> at measurement for each prepared
    state.

    Returns
    -------
    block : pandas.DataFrame
        Columns shot, truth, decay_time_us and one count column per segment.
    """
    rng = np.random.default_rng([seed, block_index])
    shots = np.arange(first_shot, first_shot + n_shots)
    prepared_zero = shots % 2 == 0

    p_zero = np.where(prepared_zero, p_zero_given_zero, p_zero_given_one)
    in_zero = rng.random(n_shots) < p_zero
    shelved = in_zero & (rng.random(n_shots) >= residual_unshelved_probability(shelving))
    t = sample_decay_times(rng, n_shots, cfg.d52_lifetime_s)
    decays = shelved & (t < shelved_interval_us(shelving, cfg))
    decay_time = np.where(decays, t - shelving.pre_detection_us, np.nan)

    counts = rng.poisson(segment_means(cfg, ~shelved, decay_time))

    block = pd.DataFrame(counts, columns=count_columns(cfg.n_segments))
    block.insert(0, 'shot', shots)
    block.insert(1, 'truth', np.where(prepared_zero, ct.PREPARED_ZERO, ct.PREPARED_ONE))
    block.insert(2, 'decay_time_us', decay_time)

    return block


def _simulate_block(args):
    return simulate_block(*args)


def simulate_spam_shots(n_trials, p_zero_given_zero, p_zero_given_one, cfg,
                        shelving, seed, threads=1, progress=False):
    """
    Simulate n_trials trials per prepared state, interleaved.

    Parameters
    ----------
    n_trials : int
        Trials per prepared state; 2 * n_trials shots in total.
    p_zero_given_zero, p_zero_given_one : float
        Probability the ion is in |0> at measurement for each prepared state.
    cfg : DetectionConfig
    shelving : ShelvingConfig
    seed : int
        Global seed.
    threads : int
        Worker processes; does not change the result.
    progress : bool
        Show a tqdm progress bar.

    Returns
    -------
    archive : pandas.DataFrame
        One row per shot in shot order.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1.")

    total = 2 * n_trials
    tasks = [(b, first, n, p_zero_given_zero, p_zero_given_one, cfg, shelving, seed)
             for b, first, n in itf.divide_into_blocks(total, ct.BLOCK_SIZE)]

    if threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as executor:
            blocks = list(tqdm(executor.map(_simulate_block, tasks),
                               total=len(tasks), disable=not progress))
    else:
        blocks = [_simulate_block(task) for task in tqdm(tasks, disable=not progress)]

    return pd.concat(blocks, ignore_index=True)
