#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module reads a shot archive and classifies every shot with the
threshold discriminator and with the adaptive Bayesian classifier. Shots
bright by threshold and dark by the adaptive classifier are flagged as
decays from the shelved state.

Outputs written to the output directory:
    - labels.csv: per-shot labels, segments used and decay flag.
    - summary.csv: one row per classifier with infidelities and the decay
      flag statistics.

Code documentation
------------------
"""

import os

import numpy as np
import pandas as pd

try:
    from HyperfineSPAM.Detection import (shot_archive as sa,
                                         classifiers as cl)
    from HyperfineSPAM.Statistics import intervals as iv
    from HyperfineSPAM.utils import (constants as ct,
                                     file_functions as ff,
                                     pandas_functions as pf)
except ModuleNotFoundError:
    from Detection import (shot_archive as sa,
                           classifiers as cl)
    from Statistics import intervals as iv
    from utils import (constants as ct,
                       file_functions as ff,
                       pandas_functions as pf)


def classify_frame(archive, detection):
    """
    Per-shot labels from both classifiers.

    Returns
    -------
    labels : pandas.DataFrame
        Columns shot, truth, threshold_label, bayes_label, segments_used,
        decay_flag.
    """
    counts = sa.counts_matrix(archive)
    if counts.shape[1] != detection.n_segments:
        raise ValueError(f"Archive has {counts.shape[1]} segments per shot but "
                         f"detection.n_segments is {detection.n_segments}.")

    threshold_bright = cl.classify_threshold_counts(counts, detection.threshold())
    bayes_bright, used = cl.classify_bayes_counts(counts, detection)

    return pd.DataFrame({'shot': archive['shot'].to_numpy(),
                         'truth': archive['truth'].to_numpy(),
                         'threshold_label': cl.labels(threshold_bright),
                         'bayes_label': cl.labels(bayes_bright),
                         'segments_used': used,
                         'decay_flag': threshold_bright & ~bayes_bright})


def summary_rows(archive, labels, detection):
    """One summary row per classifier."""

    decayed = archive['decay_time_us'].notna().to_numpy()
    flags = labels['decay_flag'].to_numpy()
    shared = {'threshold_counts': detection.threshold(),
              'n_flagged': int(flags.sum()),
              'n_flagged_true_decays': int(np.sum(flags & decayed)),
              'n_true_decays': int(decayed.sum()),
              'mean_stop_us': float(labels['segments_used'].mean()) * detection.segment_us}

    rows = []
    for method in ['threshold', 'bayes']:
        tally = iv.tally_from_labels(labels['truth'], labels[f'{method}_label'])
        summary = iv.spam_summary(tally)
        rows.append({'method': method,
                     'n_trials': tally.n_trials,
                     'errors_zero': tally.errors_zero,
                     'errors_one': tally.errors_one,
                     **summary.as_row(),
                     **shared})

    return rows


def main(args):

    cfg = args.run_config
    archive = sa.read_archive(args.archive)
    ff.status(f"\nClassifying {len(archive)} shots from {args.archive}...")

    labels = classify_frame(archive, cfg.detection)
    rows = summary_rows(archive, labels, cfg.detection)

    ff.create_directory(args.out)
    pf.write_csv(labels, os.path.join(args.out, 'labels.csv'))
    pf.write_csv(pf.rows_to_df(rows), os.path.join(args.out, 'summary.csv'))

    lines = []
    for row in rows:
        summary = iv.spam_summary(iv.TrialTally(row['n_trials'], row['errors_zero'],
                                                row['errors_one']))
        lines.append(f"{row['method']}: {iv.summary_line(summary)}")
    lines.append(f"flagged decays: {rows[0]['n_flagged']} "
                 f"(mean stop time {rows[0]['mean_stop_us']:.1f} us)")
    ff.write_text('\n'.join(lines) + '\n')
    ff.status(f"Results written to {args.out} ({ct.BRIGHT}/{ct.DARK} labels)")
