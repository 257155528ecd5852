#!/usr/bin/env python

"""Tests for the atomic data model."""

from fractions import Fraction

import pytest

from HyperfineSPAM.AtomicData import species as sp


TABLE_ORDER = ['9Be+', '25Mg+', '43Ca+', '87Sr+', '135Ba+', '137Ba+', '173Yb+']


@pytest.fixture
def barium():
    return sp.get_species('137Ba+')


@pytest.fixture
def ytterbium():
    return sp.get_species('173Yb+')


def test_builtin_species_in_table_order():
    assert [s.name for s in sp.builtin_species()] == TABLE_ORDER


def test_barium_constants(barium):
    assert barium.nuclear_spin == Fraction(3, 2)
    assert barium.linewidth_hz == pytest.approx(20.1e6)
    assert barium.hf_s_hz == pytest.approx(8.03e9)
    assert barium.hf_p_hz == pytest.approx(1.49e9)
    assert barium.eta_up == pytest.approx(0.5)
    assert barium.eta_cross == pytest.approx(5 / 6)
    assert barium.d52_lifetime_s == pytest.approx(30.1)
    assert 'D52' in barium.manifolds


def test_qubit_states(barium, ytterbium):
    assert (barium.lower_f, barium.upper_f) == (1, 2)
    assert barium.qubit_zero == sp.ZeemanState('S12', 1, 0)
    assert barium.qubit_one == sp.ZeemanState('S12', 2, 0)
    assert (ytterbium.lower_f, ytterbium.upper_f) == (2, 3)


def test_ground_sublevels(barium, ytterbium):
    states = sp.enumerate_sublevels(barium, ['S12'])
    assert len(states) == 8
    assert states[0] == sp.ZeemanState('S12', 1, -1)
    assert states[-1] == sp.ZeemanState('S12', 2, 2)
    assert len(sp.enumerate_sublevels(ytterbium, ['S12'])) == 12


def test_d52_sublevels(barium):
    states = sp.enumerate_sublevels(barium, ['D52'])
    # F = 1..4
    assert len(states) == 3 + 5 + 7 + 9
    assert states == sorted(states, key=sp.ZeemanState.sort_key)


def test_sublevel_order_is_manifold_first(barium):
    states = sp.enumerate_sublevels(barium, ['D52', 'S12'])
    assert [s.manifold for s in states[:8]] == ['S12'] * 8
    assert states[8].manifold == 'D52'


def test_enumerate_errors(barium):
    with pytest.raises(ValueError):
        sp.enumerate_sublevels(barium, [])
    with pytest.raises(ValueError):
        sp.enumerate_sublevels(barium, ['F72'])
    with pytest.raises(ValueError, match='9Be'):
        sp.enumerate_sublevels(sp.get_species('9Be+'), ['D52'])


def test_invalid_zeeman_state():
    with pytest.raises(ValueError):
        sp.ZeemanState('S12', 1, 2)
    with pytest.raises(ValueError):
        sp.ZeemanState('X', 1, 0)


def test_invalid_species_values(barium):
    with pytest.raises(ValueError):
        sp.SpeciesParams('bad', Fraction(1), 1e6, 1e9, 1e8, 0.5, 0.5, 0.5)
    with pytest.raises(ValueError, match='hf_s_hz'):
        sp.SpeciesParams('bad', Fraction(3, 2), 1e6, 1e8, 1e9, 0.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        sp.SpeciesParams('bad', Fraction(3, 2), -1.0, 1e9, 1e8, 0.5, 0.5, 0.5)


def test_unknown_species():
    with pytest.raises(ValueError, match='Known species'):
        sp.get_species('40Ca+')


def test_species_file_round_trip(tmp_path):
    path = tmp_path / 'species.tsv'
    sp.write_species_file(sp.builtin_species(), str(path))

    assert sp.read_species_file(str(path)) == sp.builtin_species()


def test_merge_user_species(tmp_path):
    path = tmp_path / 'user.tsv'
    path.write_text('# species-file-version\t1\n'
                    '\n'
                    'name\t137Ba+\n'
                    'nuclear_spin\t3/2\n'
                    'linewidth_hz\t15.1e6\n'
                    'hf_s_hz\t8.037e9\n'
                    'hf_p_hz\t1.49e9\n'
                    'eta_up\t1/2\n'
                    'eta_cross\t5/6\n'
                    '\n'
                    'name\t171Yb+\n'
                    'nuclear_spin\t1/2\n'
                    'linewidth_hz\t19.6e6\n'
                    'hf_s_hz\t12.6e9\n'
                    'hf_p_hz\t2.1e9\n'
                    'eta_up\t1/3\n'
                    'eta_cross\t2/3\n', encoding='utf-8')

    merged = sp.load_species(str(path))
    names = [s.name for s in merged]

    assert names == TABLE_ORDER + ['171Yb+']
    barium = sp.get_species('137Ba+', merged)
    assert barium.linewidth_hz == pytest.approx(15.1e6)
    assert barium.eta_flush == pytest.approx(0.5)


def test_newer_file_version_rejected(tmp_path):
    path = tmp_path / 'future.tsv'
    path.write_text('# species-file-version\t99\n', encoding='utf-8')

    with pytest.raises(ValueError, match='version'):
        sp.read_species_file(str(path))


def test_duplicated_species_rejected(tmp_path):
    block = ('name\t9Be+\nnuclear_spin\t3/2\nlinewidth_hz\t22.4e6\n'
             'hf_s_hz\t1.25e9\nhf_p_hz\t0.194e9\neta_up\t1/2\neta_cross\t5/6\n')
    path = tmp_path / 'dup.tsv'
    path.write_text(block + '\n' + block, encoding='utf-8')

    with pytest.raises(ValueError, match='duplicated'):
        sp.read_species_file(str(path))
