#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
Bright/dark discrimination of segmented fluorescence records.

The threshold discriminator compares the total count with a fixed
threshold. The adaptive classifier starts from a uniform prior over the two
hypotheses, multiplies in the Poisson likelihood of each segment and stops
as soon as the losing hypothesis falls below the configured confidence.
Shots that the threshold calls bright but the adaptive classifier calls
dark are flagged as decays from the shelved state.

Code documentation
------------------
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import expit, gammaln, xlogy

try:
    from HyperfineSPAM.utils import constants as ct
    from HyperfineSPAM.Detection import shot_simulation as ss
except ModuleNotFoundError:
    from utils import constants as ct
    from Detection import shot_simulation as ss


LOG_FLOOR = math.log(ct.LIKELIHOOD_FLOOR)


@dataclass(frozen=True)
class BayesResult:
    """Outcome of the adaptive classifier for one shot.

    posterior is (P(Bright), P(Dark)) at the stop; history holds the
    posterior after every update. record is truncated at the stop segment
    in real-time mode.
    """

    label: str
    segments_used: int
    posterior: Tuple[float, float]
    history: Tuple[Tuple[float, float], ...]
    record: ss.ShotRecord


def classify_threshold(record, threshold_counts):
    """Bright iff the total count exceeds threshold_counts."""

    if record.total_counts > threshold_counts:
        return ct.BRIGHT

    return ct.DARK


def classify_threshold_counts(counts, threshold_counts):
    """Vectorised threshold; returns a boolean array, True for bright."""

    return np.asarray(counts).sum(axis=1) > threshold_counts


def _check_counts(counts, cfg):
    counts = np.asarray(counts)
    if counts.ndim != 2 or counts.shape[1] != cfg.n_segments:
        raise ValueError(f"Expected {cfg.n_segments} segment counts per shot, "
                         f"got shape {counts.shape}.")
    return counts


def poisson_log_likelihood(counts, mean):
    """
    Poisson log-probability of counts, floored at log(1e-300).

    xlogy gives 0 for zero counts at zero mean and -inf for non-zero
    counts at zero mean; the floor keeps either hypothesis recoverable
    when the configured rates are wrong.
    """
    counts = np.asarray(counts, dtype=float)
    log_pmf = xlogy(counts, mean) - mean - gammaln(counts + 1)

    return np.maximum(log_pmf, LOG_FLOOR)


def segment_log_ratio(counts, cfg):
    """log L(Bright) - log L(Dark) per segment."""

    return (poisson_log_likelihood(counts, cfg.bright_mean)
            - poisson_log_likelihood(counts, cfg.dark_mean))


def batch_posterior(record, cfg, n_segments=None):
    """
    Posterior (P(Bright), P(Dark)) from the summed log-likelihood of the
    first n_segments segments in one step.
    """
    if n_segments is None:
        n_segments = len(record.segment_counts)
    counts = np.asarray(record.segment_counts[:n_segments])
    log_bright = math.log(0.5) + float(np.sum(poisson_log_likelihood(counts, cfg.bright_mean)))
    log_dark = math.log(0.5) + float(np.sum(poisson_log_likelihood(counts, cfg.dark_mean)))
    norm = np.logaddexp(log_bright, log_dark)

    return (math.exp(log_bright - norm), math.exp(log_dark - norm))


def classify_bayes(record, cfg, real_time=False):
    """
    Sequential Bayesian classification of one shot.

    Parameters
    ----------
    record : ShotRecord
        Shot with cfg.n_segments segment counts.
    cfg : DetectionConfig
        Count rates and confidence level.
    real_time : bool
        Truncate the returned record at the stop segment, as a measurement
        ended early would.

    Returns
    -------
    result : BayesResult
        Label, segments consumed and posterior. Ties go to Dark.
    """
    if len(record.segment_counts) != cfg.n_segments:
        raise ValueError(f"Expected {cfg.n_segments} segment counts, "
                         f"got {len(record.segment_counts)}.")

    log_bright = log_dark = math.log(0.5)
    history = []
    used = 0
    for used, count in enumerate(record.segment_counts, start=1):
        log_bright += float(poisson_log_likelihood(count, cfg.bright_mean))
        log_dark += float(poisson_log_likelihood(count, cfg.dark_mean))
        norm = np.logaddexp(log_bright, log_dark)
        log_bright, log_dark = log_bright - norm, log_dark - norm
        posterior = (math.exp(log_bright), math.exp(log_dark))
        history.append(posterior)
        if min(posterior) < cfg.bayes_confidence:
            break

    label = ct.BRIGHT if posterior[0] > posterior[1] else ct.DARK
    if real_time:
        record = ss.ShotRecord(record.segment_counts[:used], record.truth_state,
                               record.truth_decay_time_us)

    return BayesResult(label, used, posterior, tuple(history), record)


def classify_bayes_counts(counts, cfg):
    """
    Vectorised adaptive classifier over an array of shots.

    Returns
    -------
    bright : numpy.ndarray of bool
        True where the shot is classified bright.
    segments_used : numpy.ndarray of int
        Segments consumed before the stop.
    """
    counts = _check_counts(counts, cfg)
    cumulative = np.cumsum(segment_log_ratio(counts, cfg), axis=1)
    p_bright = expit(cumulative)
    p_dark = expit(-cumulative)
    confident = np.minimum(p_bright, p_dark) < cfg.bayes_confidence

    stopped = confident.any(axis=1)
    stop = np.where(stopped, confident.argmax(axis=1), cfg.n_segments - 1)
    rows = np.arange(counts.shape[0])
    bright = p_bright[rows, stop] > p_dark[rows, stop]

    return bright, stop + 1


def flag_decays(records, cfg, threshold_counts=None):
    """
    Indices of shots that are bright by threshold but dark by the adaptive
    classifier.
    """
    if threshold_counts is None:
        threshold_counts = cfg.threshold()

    return [i for i, record in enumerate(records)
            if classify_threshold(record, threshold_counts) == ct.BRIGHT
            and classify_bayes(record, cfg).label == ct.DARK]


def flag_decays_counts(counts, cfg, threshold_counts=None):
    """Vectorised flag_decays; returns a boolean mask."""

    if threshold_counts is None:
        threshold_counts = cfg.threshold()
    counts = _check_counts(counts, cfg)
    bayes_bright, _ = classify_bayes_counts(counts, cfg)

    return classify_threshold_counts(counts, threshold_counts) & ~bayes_bright


def labels(bright):
    """Map a boolean bright mask to Bright/Dark labels."""

    return np.where(bright, ct.BRIGHT, ct.DARK)
