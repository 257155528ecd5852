#!/usr/bin/env python

"""Command line tests: every module run through the dispatcher."""

import io
import os

import numpy as np
import pandas as pd
import pytest

from HyperfineSPAM import hyperfine_spam as hs
from HyperfineSPAM.Statistics import intervals as iv
from HyperfineSPAM.utils import (constants as ct,
                                 run_config as rc)


def run(argv, capsys):
    code = hs.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_stdout_csv(text):
    return pd.read_csv(io.StringIO(text))


@pytest.fixture
def spam_run(tmp_path, capsys):
    out_dir = tmp_path / 'run'
    code, out, err = run(['simulate-spam', '--trials', '300', '--seed', '3',
                          '--out', str(out_dir)], capsys)
    assert code == ct.EXIT_SUCCESS, err
    return out_dir, out


def test_usage_without_module(capsys):
    code, out, err = run([], capsys)

    assert code == ct.EXIT_SUCCESS
    assert out == ''
    assert 'simulate-spam' in err


def test_unknown_module(capsys):
    code, _, err = run(['fit'], capsys)

    assert code == ct.EXIT_CONFIG_ERROR
    assert 'USAGE' in err


def test_unknown_flag(capsys):
    assert run(['predict', '--bogus'], capsys)[0] == ct.EXIT_CONFIG_ERROR


def test_invalid_threads(capsys):
    assert run(['predict', '--threads', '0'], capsys)[0] == ct.EXIT_CONFIG_ERROR


def test_unknown_species(capsys):
    code, _, err = run(['simulate-prep', '-s', '40Ca+'], capsys)

    assert code == ct.EXIT_CONFIG_ERROR
    assert '40Ca+' in err


def test_invalid_config_value(tmp_path, capsys):
    config = tmp_path / 'bad.ini'
    config.write_text('[run]\ntrials = -5\n\n[prep]\nprotocol = sideband\n', encoding='utf-8')
    code, _, err = run(['simulate-prep', '-c', str(config)], capsys)

    assert code == ct.EXIT_CONFIG_ERROR
    assert 'run.trials' in err
    assert 'prep.protocol' in err


def test_unexpected_config_section(tmp_path, capsys):
    config = tmp_path / 'bad.ini'
    config.write_text('[laser]\npower = 1\n', encoding='utf-8')

    assert run(['predict', '-c', str(config)], capsys)[0] == ct.EXIT_CONFIG_ERROR


def test_inconsistent_config(tmp_path, capsys):
    config = tmp_path / 'bad.ini'
    config.write_text('[detection]\nbright_rate_per_us = 0.0001\n', encoding='utf-8')

    assert run(['predict', '-c', str(config)], capsys)[0] == ct.EXIT_CONFIG_ERROR


def test_missing_archive_is_runtime_error(tmp_path, capsys):
    code, _, err = run(['classify', '-a', str(tmp_path / 'missing.jsonl'),
                        '-o', str(tmp_path / 'out')], capsys)

    assert code == ct.EXIT_RUNTIME_ERROR
    assert 'Error' in err


def test_species_table(capsys):
    code, out, _ = run(['species'], capsys)
    frame = read_stdout_csv(out)

    assert code == ct.EXIT_SUCCESS
    assert len(frame) == 7
    assert frame['species'].iloc[-1] == '173Yb+'


def test_species_sublevels(capsys):
    code, out, _ = run(['species', '--sublevels', '-s', '9Be+'], capsys)
    frame = read_stdout_csv(out)

    assert code == ct.EXIT_SUCCESS
    assert set(frame['manifold']) == {'S12', 'P12', 'P32'}
    assert (frame['manifold'] == 'S12').sum() == 8


def test_user_species_file(tmp_path, capsys):
    path = tmp_path / 'species.tsv'
    assert run(['species', '--write-species-file', str(path)], capsys)[0] == ct.EXIT_SUCCESS

    code, out, _ = run(['predict', '-sf', str(path)], capsys)
    assert code == ct.EXIT_SUCCESS
    assert len(read_stdout_csv(out)) == 7


def test_predict(capsys):
    code, out, _ = run(['predict', '--dipole-branching'], capsys)
    frame = read_stdout_csv(out)

    assert code == ct.EXIT_SUCCESS
    assert list(frame['species'])[:2] == ['9Be+', '25Mg+']
    barium = frame.loc[frame['species'] == '137Ba+'].iloc[0]
    assert barium['eps_prep'] == pytest.approx(1.11e-5, rel=1e-2)
    assert barium['eps_prep_dipole'] == pytest.approx(barium['eps_prep'])


def test_predict_integrated(tmp_path, capsys):
    out_file = tmp_path / 'table.csv'
    code, out, _ = run(['predict', '--integrate', '-o', str(out_file)], capsys)
    frame = pd.read_csv(out_file)

    assert code == ct.EXIT_SUCCESS
    assert out == ''
    for eps, ratio in zip(frame['eps_prep'], frame['ode_ratio']):
        assert ratio == pytest.approx(eps, rel=1e-2)


def test_simulate_prep_ideal(capsys):
    code, out, err = run(['simulate-prep', '-p', 'maop', '--cycles', '6', '--ideal'], capsys)
    frame = read_stdout_csv(out)

    assert code == ct.EXIT_SUCCESS
    assert 'maop' in err
    assert list(frame['cycle']) == list(range(7))
    ratios = frame['prep_error'].iloc[1:].to_numpy() / frame['prep_error'].iloc[:-1].to_numpy()
    assert np.allclose(ratios, 2 / 3, rtol=1e-9, atol=0)


def test_simulate_prep_steady_state(capsys):
    code, _, err = run(['simulate-prep', '--steady-state'], capsys)

    assert code == ct.EXIT_SUCCESS
    assert 'Fixed point' in err


def test_dump_config_round_trip(tmp_path, capsys):
    path = tmp_path / 'effective.ini'
    first = run(['simulate-prep', '--seed', '42', '--cycles', '7', '-p', 'maop',
                 '--dump-config', str(path)], capsys)
    second = run(['simulate-prep', '-c', str(path)], capsys)

    assert first[0] == second[0] == ct.EXIT_SUCCESS
    assert first[1] == second[1]

    expected = rc.load_run_config(None, {'run.seed': 42, 'prep.cycles': 7,
                                         'prep.protocol': 'maop'})
    assert rc.load_run_config(str(path)) == expected


def test_example_configs_are_valid():
    data = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'data')
    example = rc.load_run_config(os.path.join(data, 'example_config.ini'))
    published = rc.load_run_config(os.path.join(data, 'published_run.ini'))

    defaults = rc.RunConfig()
    assert (example.species, example.seed, example.trials) == ('137Ba+', 1, 10**6)
    assert example.prep == defaults.prep
    assert example.shelving == defaults.shelving
    assert example.bursts == defaults.bursts
    assert example.detection.dark_rate_per_us == pytest.approx(defaults.detection.dark_rate_per_us)
    assert example.detection.threshold() == defaults.detection.threshold()
    assert published.seed == 2023
    assert published.bursts.burst_rate_per_trial == pytest.approx(1.6e-6)


def test_simulate_spam_outputs(spam_run):
    out_dir, out = spam_run

    for name in ['shots.jsonl', 'histogram.csv', 'prep_series.csv', 'bursts.csv',
                 'components.tsv', 'summary.csv']:
        assert (out_dir / name).is_file()
    assert out.startswith('|0> ')

    summary = pd.read_csv(out_dir / 'summary.csv')
    assert summary['n_trials'].item() == 300
    assert summary['threshold_counts'].item() == 18

    histogram = pd.read_csv(out_dir / 'histogram.csv')
    assert histogram[[ct.PREPARED_ZERO, ct.PREPARED_ONE]].sum().tolist() == [300, 300]


def test_simulate_spam_is_reproducible(tmp_path, capsys):
    outputs = []
    for threads in ['1', '2']:
        out_dir = tmp_path / f'threads{threads}'
        code, _, _ = run(['simulate-spam', '-n', '100', '--seed', '8', '-t', threads,
                          '-o', str(out_dir)], capsys)
        assert code == ct.EXIT_SUCCESS
        outputs.append((out_dir / 'shots.jsonl').read_text(encoding='utf-8'))

    assert outputs[0] == outputs[1]


def test_classify(spam_run, tmp_path, capsys):
    out_dir, _ = spam_run
    code, out, _ = run(['classify', '-a', str(out_dir / 'shots.jsonl'),
                        '-o', str(tmp_path / 'classified')], capsys)
    labels = pd.read_csv(tmp_path / 'classified' / 'labels.csv')
    summary = pd.read_csv(tmp_path / 'classified' / 'summary.csv')

    assert code == ct.EXIT_SUCCESS
    assert len(labels) == 600
    assert set(labels['threshold_label']) <= {ct.BRIGHT, ct.DARK}
    assert labels['segments_used'].between(1, 10).all()
    assert list(summary['method']) == ['threshold', 'bayes']
    assert 'flagged decays' in out


def test_classify_segment_mismatch(spam_run, tmp_path, capsys):
    out_dir, _ = spam_run
    config = tmp_path / 'short.ini'
    config.write_text('[detection]\nn_segments = 5\n', encoding='utf-8')
    code, _, _ = run(['classify', '-c', str(config), '-a', str(out_dir / 'shots.jsonl'),
                      '-o', str(tmp_path / 'classified')], capsys)

    assert code == ct.EXIT_RUNTIME_ERROR


def test_summarize(spam_run, tmp_path, capsys):
    out_dir, printed = spam_run
    out_file = tmp_path / 'summary.csv'
    code, out, _ = run(['summarize', '-a', str(out_dir / 'shots.jsonl'),
                        '--method', 'threshold', '-o', str(out_file)], capsys)
    row = pd.read_csv(out_file).iloc[0]

    assert code == ct.EXIT_SUCCESS
    assert out == printed
    assert row['z'] == pytest.approx(1.0)
    assert row['n_trials'] == 300


def test_summarize_confidence(spam_run, capsys):
    out_dir, _ = spam_run
    code, out, _ = run(['summarize', '-a', str(out_dir / 'shots.jsonl'),
                        '--method', 'bayes', '--confidence', '0.95'], capsys)

    assert code == ct.EXIT_SUCCESS
    assert 'total' in out


def test_budget_from_simulation(spam_run, tmp_path, capsys):
    out_dir, _ = spam_run
    out_file = tmp_path / 'budget.csv'
    code, out, _ = run(['budget', '-bc', str(out_dir / 'components.tsv'),
                        '-o', str(out_file)], capsys)

    assert code == ct.EXIT_SUCCESS
    assert 'Subtotal (measured)' in out
    assert 'Correlated errors' in set(pd.read_csv(out_file)['source'])


def test_budget_published_components(capsys):
    data = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'data')
    code, out, err = run(['budget', '-bc', os.path.join(data, 'published_budget.tsv')],
                         capsys)

    assert code == ct.EXIT_SUCCESS
    assert '9.45 ± 1.36' in out
    assert 'Warning' not in err


def test_simulate_prep_ideal_spin_five_halves(capsys):
    code, out, err = run(['simulate-prep', '-s', '173Yb+', '-p', 'maop', '--cycles', '6',
                          '--ideal'], capsys)
    frame = read_stdout_csv(out)

    assert code == ct.EXIT_SUCCESS, err
    ratios = frame['prep_error'].iloc[1:].to_numpy() / frame['prep_error'].iloc[:-1].to_numpy()
    assert np.allclose(ratios, 4 / 5, rtol=1e-9, atol=0)


def test_dump_config_to_stderr_keeps_stdout_clean(capsys):
    argv = ['simulate-prep', '--seed', '42', '--cycles', '7', '-p', 'maop']
    plain = run(argv, capsys)
    dumped = run(argv + ['--dump-config', '-'], capsys)

    assert plain[0] == dumped[0] == ct.EXIT_SUCCESS
    assert dumped[1] == plain[1]
    assert '[prep]' not in dumped[1]
    assert '[prep]' in dumped[2]
    assert 'cycles = 7' in dumped[2]


def test_measured_infidelity_matches_component_sum(tmp_path, capsys):
    config = tmp_path / 'raised.ini'
    config.write_text('[prep]\nprotocol = nbop\nshelve_qubit_leak = 3e-4\n'
                      'transfer_infidelity = 5e-4\n\n'
                      '[shelving]\npulse_fidelities = 0.9,0.9,0.9\n\n'
                      '[bursts]\nburst_rate_per_trial = 2e-5\n', encoding='utf-8')
    out_dir = tmp_path / 'run'
    code, _, err = run(['simulate-spam', '-c', str(config), '-n', '100000', '--seed', '11',
                        '-t', '2', '-o', str(out_dir)], capsys)
    components = pd.read_csv(out_dir / 'components.tsv', sep='\t')

    assert code == ct.EXIT_SUCCESS, err
    predicted = components.loc[components['kind'] == 'Predicted']
    measured = components.loc[components['kind'] == 'Measured'].set_index('state')
    for state in ['Zero', 'One']:
        expected = predicted.loc[predicted['state'] == state, 'value'].sum()
        errors = int(measured.loc[state, 'errors'])
        trials = int(measured.loc[state, 'trials'])
        low, high = iv.wilson_interval(errors, trials, z=4)
        assert trials == 100000
        assert errors > 20
        assert low <= expected <= high
