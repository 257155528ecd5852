#!/usr/bin/env python

"""Tests for shelving, detection, classification and shot archives."""

import math
from types import SimpleNamespace

import numpy as np
import pandas as pd
import pytest

from HyperfineSPAM.Detection import (classifiers as cl,
                                     shot_archive as sa,
                                     shot_simulation as ss)
from HyperfineSPAM.Statistics import intervals as iv
from HyperfineSPAM.utils import constants as ct


@pytest.fixture
def detection():
    return ss.DetectionConfig()


@pytest.fixture
def shelving():
    return ss.ShelvingConfig()


@pytest.fixture
def perfect_shelving():
    return ss.ShelvingConfig(pulse_fidelities=(1.0, 1.0, 1.0))


def make_record(counts, truth=ct.PREPARED_ZERO, decay=None):
    return ss.ShotRecord(tuple(counts), truth, decay)


def test_residual_unshelved_probability(shelving):
    assert ss.residual_unshelved_probability(shelving) == pytest.approx(1e-6)


def test_shelved_interval(shelving, detection):
    assert shelving.pre_detection_us == pytest.approx(100.0)
    assert ss.shelved_interval_us(shelving, detection) == pytest.approx(450.0)

    with_first = ss.ShelvingConfig(include_first_pulse=True)
    assert ss.shelved_interval_us(with_first, detection) == pytest.approx(615.0)


def test_decay_probability():
    assert ss.decay_probability(350.0, 30.1) == pytest.approx(1.163e-5, rel=1e-3)
    assert ss.decay_probability(615.0, 30.1) == pytest.approx(2.043e-5, rel=1e-3)
    assert ss.decay_probability(350.0, math.inf) == 0.0


def test_default_threshold(detection):
    assert detection.bright_mean == pytest.approx(10.0)
    assert detection.dark_mean == pytest.approx(0.04)
    assert detection.threshold() == 18


def test_threshold_override_and_zero_dark_rate():
    assert ss.DetectionConfig(threshold_counts=5).threshold() == 5
    assert ss.DetectionConfig(dark_rate_per_us=0.0).threshold() == 0


def test_discrimination_errors_are_negligible(detection):
    assert ss.dark_error_probability(detection) < 1e-15
    assert ss.bright_error_probability(detection) < 1e-15


def test_invalid_detection_config():
    with pytest.raises(ValueError):
        ss.DetectionConfig(bright_rate_per_us=1e-3, dark_rate_per_us=1e-2)
    with pytest.raises(ValueError):
        ss.DetectionConfig(n_segments=0)
    with pytest.raises(ValueError):
        ss.DetectionConfig(bayes_confidence=1.0)


def test_invalid_shelving_config():
    with pytest.raises(ValueError):
        ss.ShelvingConfig(pulse_fidelities=(0.99, 0.99))
    with pytest.raises(ValueError):
        ss.ShelvingConfig(pulse_fidelities=(1.2, 0.99, 0.99))


def test_segment_means_with_late_decay(detection):
    means = ss.segment_means(detection, np.array([False]), np.array([300.0]))[0]

    assert means[0] == pytest.approx(0.04)
    assert means[8] == pytest.approx(0.04 / 35 * 20 + 10 / 35 * 15)
    assert means[9] == pytest.approx(10.0)
    # a decay this late stays below the threshold on average
    assert means.sum() < detection.threshold()


def test_segment_means_bright_and_early_decay(detection):
    means = ss.segment_means(detection, np.array([True, False]),
                             np.array([np.nan, -20.0]))

    assert np.allclose(means, 10.0)


def test_simulate_shot_is_reproducible(detection, shelving):
    prepared = ss.PreparedShot(ct.PREPARED_ONE, in_qubit_zero=False)
    first = ss.simulate_shot(prepared, detection, shelving, seed=3, shot_index=7)
    second = ss.simulate_shot(prepared, detection, shelving, seed=3, shot_index=7)

    assert first == second
    assert len(first.segment_counts) == 10
    assert first.truth_decay_time_us is None


def test_simulate_shot_forced_shelving(shelving):
    cfg = ss.DetectionConfig(d52_lifetime_s=math.inf)
    prepared = ss.PreparedShot(ct.PREPARED_ZERO, in_qubit_zero=True, shelved=True)
    record = ss.simulate_shot(prepared, cfg, shelving, seed=11)

    assert record.truth_decay_time_us is None
    assert cl.classify_threshold(record, cfg.threshold()) == ct.DARK


def test_shot_record_validation():
    with pytest.raises(ValueError):
        make_record([1, -1])
    with pytest.raises(ValueError):
        make_record([1, 2], truth='Prepared')


def test_simulated_block_layout(detection, shelving):
    block = ss.simulate_block(2, 100, 6, 1.0, 0.0, detection, shelving, seed=1)

    assert list(block.columns) == ['shot', 'truth', 'decay_time_us'] + ss.count_columns(10)
    assert list(block['shot']) == list(range(100, 106))
    assert list(block['truth']) == [ct.PREPARED_ZERO, ct.PREPARED_ONE] * 3


def test_separated_histograms(perfect_shelving):
    cfg = ss.DetectionConfig(d52_lifetime_s=math.inf)
    archive = ss.simulate_spam_shots(500, 1.0, 0.0, cfg, perfect_shelving, seed=4)
    totals = sa.counts_matrix(archive).sum(axis=1)
    zero = (archive['truth'] == ct.PREPARED_ZERO).to_numpy()

    assert len(archive) == 1000
    assert np.all(totals[zero] <= cfg.threshold())
    assert np.all(totals[~zero] > cfg.threshold())
    assert archive['decay_time_us'].isna().all()


def test_archive_does_not_depend_on_workers(monkeypatch, detection, shelving):
    monkeypatch.setattr(ct, 'BLOCK_SIZE', 16)
    serial = ss.simulate_spam_shots(40, 0.99, 0.01, detection, shelving, seed=9)
    parallel = ss.simulate_spam_shots(40, 0.99, 0.01, detection, shelving, seed=9,
                                      threads=3)

    pd.testing.assert_frame_equal(serial, parallel)


def test_seed_changes_archive(detection, shelving):
    first = ss.simulate_spam_shots(20, 1.0, 0.0, detection, shelving, seed=1)
    second = ss.simulate_spam_shots(20, 1.0, 0.0, detection, shelving, seed=2)

    assert not first.equals(second)


def test_threshold_classifier():
    assert cl.classify_threshold(make_record([2] * 9 + [0]), 18) == ct.DARK
    assert cl.classify_threshold(make_record([2] * 9 + [1]), 18) == ct.BRIGHT


def test_log_likelihood_floor():
    values = cl.poisson_log_likelihood(np.array([0, 3]), 0.0)

    assert values[0] == 0.0
    assert values[1] == pytest.approx(cl.LOG_FLOOR)


def test_bayes_stops_early_on_dark(detection):
    result = cl.classify_bayes(make_record([0] * 10), detection)

    assert result.label == ct.DARK
    assert result.segments_used == 2
    assert result.posterior[0] < detection.bayes_confidence


def test_bayes_stops_after_one_bright_segment(detection):
    result = cl.classify_bayes(make_record([10] + [0] * 9, ct.PREPARED_ONE), detection)

    assert result.label == ct.BRIGHT
    assert result.segments_used == 1


def test_bayes_history_is_normalized(detection):
    result = cl.classify_bayes(make_record([1] * 10), detection)

    assert result.segments_used == 4
    for p_bright, p_dark in result.history:
        assert p_bright + p_dark == pytest.approx(1.0, abs=1e-12)


def test_sequential_matches_batch_update(detection):
    record = make_record([1] * 10)
    result = cl.classify_bayes(record, detection)
    batch = cl.batch_posterior(record, detection, result.segments_used)

    assert result.posterior == pytest.approx(batch, rel=1e-9)


def test_real_time_truncation(detection):
    record = make_record([0, 0] + [10] * 8, decay=50.0)
    kept = cl.classify_bayes(record, detection)
    truncated = cl.classify_bayes(record, detection, real_time=True)

    assert kept.record == record
    assert truncated.record.segment_counts == (0, 0)
    assert truncated.record.truth_decay_time_us == 50.0
    assert truncated.label == kept.label == ct.DARK


def test_bayes_rejects_wrong_length(detection):
    with pytest.raises(ValueError):
        cl.classify_bayes(make_record([0] * 4), detection)
    with pytest.raises(ValueError):
        cl.classify_bayes_counts(np.zeros((3, 4), dtype=int), detection)


def test_vectorised_bayes_matches_sequential(shelving):
    cfg = ss.DetectionConfig(d52_lifetime_s=1e-3)
    block = ss.simulate_block(0, 0, 300, 1.0, 0.0, cfg, shelving, seed=5)
    records = sa.records_from_archive(block)
    bright, used = cl.classify_bayes_counts(sa.counts_matrix(block), cfg)

    for record, b, u in zip(records, bright, used):
        result = cl.classify_bayes(record, cfg)
        assert result.label == (ct.BRIGHT if b else ct.DARK)
        assert result.segments_used == u


def test_flag_decays(detection):
    records = [make_record([0] * 5 + [10] * 5, decay=170.0),
               make_record([10] * 10, ct.PREPARED_ONE),
               make_record([0] * 10)]
    counts = np.array([r.segment_counts for r in records])

    assert cl.flag_decays(records, detection) == [0]
    assert list(cl.flag_decays_counts(counts, detection)) == [True, False, False]


def test_flagged_shots_are_bright_by_threshold(shelving):
    cfg = ss.DetectionConfig(d52_lifetime_s=1e-3)
    block = ss.simulate_block(0, 0, 400, 1.0, 0.0, cfg, shelving, seed=8)
    counts = sa.counts_matrix(block)
    flags = cl.flag_decays_counts(counts, cfg)
    bayes_bright, _ = cl.classify_bayes_counts(counts, cfg)

    assert np.all(counts[flags].sum(axis=1) > cfg.threshold())
    assert not np.any(bayes_bright[flags])
    assert block['decay_time_us'].notna().to_numpy()[flags].all()


def test_archive_file_round_trip(tmp_path, detection, shelving):
    cfg = ss.DetectionConfig(d52_lifetime_s=1e-3)
    archive = ss.simulate_block(0, 0, 50, 0.9, 0.1, cfg, shelving, seed=2)
    path = tmp_path / 'shots.jsonl'
    sa.write_archive(archive, str(path))

    first_line = path.read_text(encoding='utf-8').splitlines()[0]
    assert '"counts":[' in first_line

    loaded = sa.read_archive(str(path))
    pd.testing.assert_frame_equal(loaded, archive, check_dtype=False)


def test_archive_rejects_mixed_segments(tmp_path):
    path = tmp_path / 'bad.jsonl'
    path.write_text('{"shot":0,"truth":"PreparedZero","counts":[0,1],"decay_time_us":null}\n'
                    '{"shot":1,"truth":"PreparedOne","counts":[9],"decay_time_us":null}\n',
                    encoding='utf-8')

    with pytest.raises(ValueError, match='segments'):
        sa.read_archive(str(path))


def test_archive_rejects_unknown_truth(tmp_path):
    path = tmp_path / 'bad.jsonl'
    path.write_text('{"shot":0,"truth":"Zero","counts":[0,1],"decay_time_us":null}\n',
                    encoding='utf-8')

    with pytest.raises(ValueError, match='truth'):
        sa.read_archive(str(path))


def test_records_and_archive_frames():
    records = [make_record([0, 1, 0]), make_record([4, 3, 5], ct.PREPARED_ONE),
               make_record([0, 4, 3], decay=40.0)]
    archive = sa.archive_from_records(records)

    assert sa.records_from_archive(archive) == records


def test_histogram_frame():
    records = [make_record([0, 1, 0]), make_record([0, 0, 1]),
               make_record([2, 1, 1], ct.PREPARED_ONE)]
    histogram = sa.histogram_frame(sa.archive_from_records(records))

    assert list(histogram.columns) == ['counts', ct.PREPARED_ZERO, ct.PREPARED_ONE]
    assert list(histogram['counts']) == [0, 1, 2, 3, 4]
    assert list(histogram[ct.PREPARED_ZERO]) == [0, 2, 0, 0, 0]
    assert list(histogram[ct.PREPARED_ONE]) == [0, 0, 0, 0, 1]


def test_no_false_flags_without_decays(perfect_shelving):
    cfg = ss.DetectionConfig(d52_lifetime_s=math.inf)
    archive = ss.simulate_spam_shots(2000, 1.0, 0.0, cfg, perfect_shelving, seed=12)

    assert not cl.flag_decays_counts(sa.counts_matrix(archive), cfg).any()


def test_no_false_flags_in_a_million_shots(detection):
    rng = np.random.default_rng(13)
    flagged = 0
    for _ in range(5):
        for mean in [detection.dark_mean, detection.bright_mean]:
            counts = rng.poisson(mean, (100000, detection.n_segments))
            flagged += int(cl.flag_decays_counts(counts, detection).sum())

    assert flagged == 0


def flag_recall(cfg, low, high, n, seed):
    rng = np.random.default_rng(seed)
    decay = rng.uniform(low, high, n)
    means = ss.segment_means(cfg, np.zeros(n, dtype=bool), decay)

    return cl.flag_decays_counts(rng.poisson(means), cfg).mean()


def test_decays_after_the_stop_time_are_flagged(detection):
    assert flag_recall(detection, 140.0, 210.0, 500, 21) >= 0.9
    assert flag_recall(detection, 140.0, 250.0, 2000, 22) >= 0.95


def test_late_decays_stay_below_the_default_threshold(detection):
    # fewer than 19 bright counts fit after 300 us at 10 counts per segment
    assert flag_recall(detection, 300.0, 350.0, 2000, 23) < 0.15
    assert flag_recall(detection, 140.0, 350.0, 4000, 24) < 0.8


def test_bright_detection_flags_the_whole_window():
    cfg = ss.DetectionConfig(bright_rate_per_us=30 / 35, threshold_counts=8)

    assert flag_recall(cfg, 140.0, 350.0, 4000, 25) >= 0.9
    assert ss.dark_error_probability(cfg) < 1e-8

    rng = np.random.default_rng(26)
    dark = rng.poisson(cfg.dark_mean, (100000, cfg.n_segments))
    bright = rng.poisson(cfg.bright_mean, (100000, cfg.n_segments))
    assert not cl.flag_decays_counts(np.vstack([dark, bright]), cfg).any()


def test_decay_fraction_matches_lifetime(perfect_shelving):
    cfg = ss.DetectionConfig(d52_lifetime_s=0.01)
    archive = ss.simulate_spam_shots(100000, 1.0, 0.0, cfg, perfect_shelving, seed=31)
    zero = archive.loc[archive['truth'] == ct.PREPARED_ZERO, 'decay_time_us']
    expected = ss.decay_probability(ss.shelved_interval_us(perfect_shelving, cfg), 0.01)
    low, high = iv.wilson_interval(int(zero.notna().sum()), len(zero), z=4)

    assert expected == pytest.approx(0.044003, rel=1e-4)
    assert low <= expected <= high
    assert zero.min() >= -perfect_shelving.pre_detection_us
    assert zero.max() < cfg.window_us
    assert (zero < 0).any()
    assert archive.loc[archive['truth'] == ct.PREPARED_ONE, 'decay_time_us'].isna().all()


def test_sequential_matches_batch_over_simulated_shots(shelving):
    cfg = ss.DetectionConfig(d52_lifetime_s=1e-3)
    block = ss.simulate_block(0, 0, 10000, 0.99, 0.01, cfg, shelving, seed=17)
    records = sa.records_from_archive(block)

    assert (block['truth'] == ct.PREPARED_ONE).sum() == 5000
    assert block['decay_time_us'].notna().sum() > 1000
    for record in records:
        result = cl.classify_bayes(record, cfg)
        batch = cl.batch_posterior(record, cfg, result.segments_used)
        assert result.posterior == pytest.approx(batch, rel=1e-9)
        assert result.label == (ct.BRIGHT if batch[0] > batch[1] else ct.DARK)


@pytest.mark.parametrize('dark_rate', [0.04 / 35, 0.0])
def test_swapping_rates_negates_the_log_ratio(dark_rate):
    cfg = ss.DetectionConfig(dark_rate_per_us=dark_rate)
    swapped = SimpleNamespace(bright_mean=cfg.dark_mean, dark_mean=cfg.bright_mean)
    counts = np.arange(40)

    assert np.array_equal(cl.segment_log_ratio(counts, swapped),
                          -cl.segment_log_ratio(counts, cfg))

    record = make_record([0, 1, 12, 3, 0, 9, 0, 0, 2, 10])
    p_bright, p_dark = cl.batch_posterior(record, cfg)
    assert cl.batch_posterior(record, swapped) == pytest.approx((p_dark, p_bright), rel=1e-12)
