#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module reads a shot archive, classifies it and reports the SPAM
infidelity of each prepared state and their mean with Wilson intervals.

Code documentation
------------------
"""

try:
    from HyperfineSPAM.Detection import shot_archive as sa
    from HyperfineSPAM.Detection import classifiers as cl
    from HyperfineSPAM.Statistics import intervals as iv
    from HyperfineSPAM.utils import (file_functions as ff,
                                     pandas_functions as pf)
except ModuleNotFoundError:
    from Detection import shot_archive as sa
    from Detection import classifiers as cl
    from Statistics import intervals as iv
    from utils import (file_functions as ff,
                       pandas_functions as pf)


def archive_labels(archive, detection, method):
    counts = sa.counts_matrix(archive)
    if method == 'bayes':
        bright, _ = cl.classify_bayes_counts(counts, detection)
    else:
        bright = cl.classify_threshold_counts(counts, detection.threshold())

    return cl.labels(bright)


def main(args):

    cfg = args.run_config
    archive = sa.read_archive(args.archive)
    method = args.method or ('bayes' if cfg.detection.real_time else 'threshold')
    z = 1.0 if args.confidence is None else iv.z_for_confidence(args.confidence)

    tally = iv.tally_from_labels(archive['truth'],
                                 archive_labels(archive, cfg.detection, method))
    summary = iv.spam_summary(tally, z)
    ff.status(f"\n{tally.n_trials} trials per state, {method} classification, z = {z:.4g}")

    if args.out is not None:
        pf.write_csv(pf.rows_to_df([{'method': method,
                                     'n_trials': tally.n_trials,
                                     'errors_zero': tally.errors_zero,
                                     'errors_one': tally.errors_one,
                                     'z': z,
                                     **summary.as_row()}]), args.out)

    ff.write_text(iv.summary_line(summary) + '\n')
