#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module runs the end-to-end SPAM simulation: state preparation with the
configured protocol, the |0> -> |1> transfer for odd trials, cabinet
shelving, segmented detection, correlated error bursts and classification.

Outputs written to the output directory:
    - shots.jsonl: shot archive.
    - histogram.csv: total-count histogram per prepared state.
    - prep_series.csv: preparation error per pumping cycle.
    - bursts.csv: injected bursts.
    - components.tsv: expected error components and the measured counts,
      readable by the budget subcommand.
    - summary.csv: infidelities with Wilson intervals.
The summary line is printed to stdout.

Code documentation
------------------
"""

import os

try:
    from HyperfineSPAM.AtomicData import species as sp
    from HyperfineSPAM.PumpSimulation import (protocols as pr,
                                              pulse_steps as ps)
    from HyperfineSPAM.Detection import (shot_simulation as ss,
                                         shot_archive as sa,
                                         classifiers as cl)
    from HyperfineSPAM.Statistics import (intervals as iv,
                                          correlated_errors as ce)
    from HyperfineSPAM.utils import (file_functions as ff,
                                     pandas_functions as pf)
except ModuleNotFoundError:
    from AtomicData import species as sp
    from PumpSimulation import (protocols as pr,
                                pulse_steps as ps)
    from Detection import (shot_simulation as ss,
                           shot_archive as sa,
                           classifiers as cl)
    from Statistics import (intervals as iv,
                            correlated_errors as ce)
    from utils import (file_functions as ff,
                       pandas_functions as pf)


def prepared_probabilities(species, prep):
    """
    Probability that the ion sits in |0> at measurement for each prepared
    state.

    Parameters
    ----------
    species : SpeciesParams
        Species constants.
    prep : PrepSettings
        Protocol and imperfections.

    Returns
    -------
    p_zero_given_zero, p_zero_given_one : float
    series : list of tuple
        Preparation error per cycle.
    """
    protocol = prep.protocol_object(species)
    final, series = pr.evolve_protocol(protocol, species)
    transfer = ps.TransferPi(infidelity=prep.pulse_params().transfer_infidelity)
    transferred = ps.apply_step(final, transfer, species)

    return (final.probability(species.qubit_zero),
            transferred.probability(species.qubit_zero),
            series)


def classify_archive(archive, detection):
    """
    Labels of every shot: adaptive classifier in real-time mode, threshold
    otherwise.

    Returns
    -------
    labels : numpy.ndarray
    segments_used : numpy.ndarray or None
    """
    counts = sa.counts_matrix(archive)
    if detection.real_time:
        bright, used = cl.classify_bayes_counts(counts, detection)
        return cl.labels(bright), used

    bright = cl.classify_threshold_counts(counts, detection.threshold())

    return cl.labels(bright), None


def expected_components(p_zero_given_zero, p_zero_given_one, cfg, bursts, tally):
    """
    Error components implied by the configured model plus the measured
    subtotals, as rows of a budget components table.
    """
    residual = ss.residual_unshelved_probability(cfg.shelving)
    decay = ss.decay_probability(ss.shelved_interval_us(cfg.shelving, cfg.detection),
                                 cfg.detection.d52_lifetime_s)
    shelved_and_stays = (1 - residual) * (1 - decay)

    rows = [('|0> state preparation', 'Zero', 1 - p_zero_given_zero, 'Predicted', True),
            ('|0> -> |1> transfer', 'One', p_zero_given_one * shelved_and_stays,
             'Predicted', False),
            ('Shelving infidelity', 'Zero', p_zero_given_zero * residual, 'Predicted', False),
            ('D5/2 decay', 'Zero', p_zero_given_zero * (1 - residual) * decay,
             'Predicted', False),
            ('Correlated errors', 'Zero', ce.burst_contribution(bursts, cfg.trials),
             'Predicted', False)]
    table = [{'source': source, 'state': state, 'value': value, 'uncertainty': 0.0,
              'kind': kind, 'bound': bound, 'errors': '', 'trials': ''}
             for source, state, value, kind, bound in rows]
    for state, errors in [('Zero', tally.errors_zero), ('One', tally.errors_one)]:
        table.append({'source': 'Subtotal (measured)', 'state': state,
                      'value': errors / tally.n_trials, 'uncertainty': 0.0,
                      'kind': 'Measured', 'bound': False,
                      'errors': errors, 'trials': tally.n_trials})

    return pf.rows_to_df(table)


def main(args):

    cfg = args.run_config
    species = sp.get_species(cfg.species, args.species_list)
    ff.create_directory(args.out)

    p_zero_given_zero, p_zero_given_one, series = prepared_probabilities(species, cfg.prep)
    ff.status(f"\n{species.name}: {cfg.prep.protocol} preparation error "
              f"{1 - p_zero_given_zero:.4g}")

    ff.status(f"Simulating {2 * cfg.trials} shots with {args.threads} worker(s)...")
    archive = ss.simulate_spam_shots(cfg.trials, p_zero_given_zero, p_zero_given_one,
                                     cfg.detection, cfg.shelving, cfg.seed,
                                     threads=args.threads, progress=True)

    archive, bursts = ce.inject_correlated_errors(archive, cfg.bursts, cfg.seed,
                                                  cfg.detection.segment_us)
    if len(bursts) > 0:
        ff.status(f"Injected {len(bursts)} burst(s) covering "
                  f"{int(bursts['zero_trials'].sum())} |0> trials")

    labels, used = classify_archive(archive, cfg.detection)
    tally = iv.tally_from_labels(archive['truth'], labels)
    summary = iv.spam_summary(tally)

    row = {'n_trials': tally.n_trials,
           'errors_zero': tally.errors_zero,
           'errors_one': tally.errors_one,
           'threshold_counts': cfg.detection.threshold(),
           **summary.as_row()}
    if used is not None:
        row['mean_stop_us'] = float(used.mean()) * cfg.detection.segment_us

    sa.write_archive(archive, os.path.join(args.out, 'shots.jsonl'))
    pf.write_csv(sa.histogram_frame(archive), os.path.join(args.out, 'histogram.csv'))
    pf.write_csv(pr.series_frame(series), os.path.join(args.out, 'prep_series.csv'))
    pf.write_csv(bursts, os.path.join(args.out, 'bursts.csv'))
    components = expected_components(p_zero_given_zero, p_zero_given_one, cfg, bursts, tally)
    pf.write_csv(components, os.path.join(args.out, 'components.tsv'), sep='\t')
    pf.write_csv(pf.rows_to_df([row]), os.path.join(args.out, 'summary.csv'))

    ff.write_text(iv.summary_line(summary) + '\n')
    ff.status(f"Results written to {args.out}")
