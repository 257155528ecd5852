#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module holds the atomic data model used by every other module:
per-species constants (linewidth, hyperfine splittings, branching
fractions, metastable lifetime) and the enumeration of the
|manifold, F, mF> Zeeman sublevels allowed by the nuclear spin.

Species constants ship as a tab-separated key/value file
(species_table.tsv). User files with the same layout can be merged over
the built-in rows by name.

Code documentation
------------------
"""

import os
import csv
import math
import functools
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Optional, Tuple

try:
    from HyperfineSPAM.utils import constants as ct
except ModuleNotFoundError:
    from utils import constants as ct


BUILTIN_SPECIES_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                                    'species_table.tsv')

MANIFOLD_ORDER = list(ct.MANIFOLD_TWO_J)


@dataclass(frozen=True)
class ZeemanState:
    """A single |manifold, F, mF> sublevel."""

    manifold: str
    F: int
    mF: int

    def __post_init__(self):
        if self.manifold not in ct.MANIFOLD_TWO_J:
            raise ValueError(f"Unknown manifold '{self.manifold}'.")
        if self.F < 0 or abs(self.mF) > self.F:
            raise ValueError(f"Invalid sublevel F={self.F}, mF={self.mF}: "
                             "|mF| must not exceed F.")

    def sort_key(self):
        return (MANIFOLD_ORDER.index(self.manifold), self.F, self.mF)

    def label(self):
        return f"{self.manifold},{self.F},{self.mF:+d}"


@dataclass(frozen=True)
class SpeciesParams:
    """Per-isotope constants of a hyperfine qubit ion.

    All frequencies are plain Hz. The prep-error model only uses ratios of
    like quantities, so the 2*pi convention cancels.
    """

    name: str
    nuclear_spin: Fraction
    linewidth_hz: float
    hf_s_hz: float
    hf_p_hz: float
    eta_up: float
    eta_cross: float
    eta_flush: float
    d52_lifetime_s: Optional[float] = None
    deshelve_branch_f1: Optional[float] = None
    manifolds: Tuple[str, ...] = field(default=('S12', 'P12', 'P32'))

    def __post_init__(self):
        spin = Fraction(self.nuclear_spin)
        object.__setattr__(self, 'nuclear_spin', spin)
        object.__setattr__(self, 'manifolds', tuple(self.manifolds))

        if spin.denominator != 2 or spin <= 0:
            raise ValueError(f"{self.name}: nuclear_spin must be a positive "
                             f"half-odd-integer, got {spin}.")
        for key in ('linewidth_hz', 'hf_s_hz', 'hf_p_hz'):
            value = getattr(self, key)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{self.name}: {key} must be strictly positive.")
        if self.d52_lifetime_s is not None and not self.d52_lifetime_s > 0:
            raise ValueError(f"{self.name}: d52_lifetime_s must be strictly positive.")
        for key in ('eta_up', 'eta_cross', 'eta_flush', 'deshelve_branch_f1'):
            value = getattr(self, key)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{self.name}: {key} must be between 0 and 1.")
        if self.hf_s_hz <= self.hf_p_hz:
            raise ValueError(f"{self.name}: hf_s_hz must exceed hf_p_hz "
                             "(delta_minus must be positive).")
        unknown = [m for m in self.manifolds if m not in ct.MANIFOLD_TWO_J]
        if unknown:
            raise ValueError(f"{self.name}: unknown manifolds {unknown}.")
        if 'S12' not in self.manifolds:
            raise ValueError(f"{self.name}: manifolds must include S12.")

    @property
    def delta_minus_hz(self):
        return self.hf_s_hz - self.hf_p_hz

    @property
    def lower_f(self):
        """F of the lower ground hyperfine manifold (holds |0>)."""
        return int(self.nuclear_spin - Fraction(1, 2))

    @property
    def upper_f(self):
        return int(self.nuclear_spin + Fraction(1, 2))

    @property
    def qubit_zero(self):
        return ZeemanState('S12', self.lower_f, 0)

    @property
    def qubit_one(self):
        return ZeemanState('S12', self.upper_f, 0)


def hyperfine_levels(two_j, nuclear_spin):
    """
    Allowed total angular momenta F for a manifold.

    Parameters
    ----------
    two_j : int
        Twice the electronic angular momentum J.
    nuclear_spin : Fraction
        Nuclear spin I.

    Returns
    -------
    levels : list
        F values from |J-I| to J+I.
    """
    two_i = int(2 * nuclear_spin)
    low = abs(two_j - two_i) // 2
    high = (two_j + two_i) // 2

    return list(range(low, high + 1))


def enumerate_sublevels(species, manifolds):
    """
    Enumerate every Zeeman sublevel of the requested manifolds.

    Parameters
    ----------
    species : SpeciesParams
        Species whose nuclear spin fixes the F values.
    manifolds : iterable of str
        Manifold names (S12, P12, P32, D32, D52).

    Returns
    -------
    states : list of ZeemanState
        Sorted by manifold, F and mF.

    Raises
    ------
    ValueError
        If no manifold is requested, or a manifold is unknown or not
        tabulated for the species.
    """
    manifolds = set(manifolds)
    if len(manifolds) == 0:
        raise ValueError("At least one manifold must be requested.")

    unknown = sorted(m for m in manifolds if m not in ct.MANIFOLD_TWO_J)
    if unknown:
        raise ValueError(f"Unknown manifolds: {', '.join(unknown)}.")

    missing = sorted(m for m in manifolds if m not in species.manifolds)
    if missing:
        raise ValueError(f"{species.name} has no level data for manifolds: "
                         f"{', '.join(missing)}.")

    states = [ZeemanState(manifold, F, mF)
              for manifold in manifolds
              for F in hyperfine_levels(ct.MANIFOLD_TWO_J[manifold], species.nuclear_spin)
              for mF in range(-F, F + 1)]

    return sorted(states, key=ZeemanState.sort_key)


def parse_value(text):
    """Convert a species-file value to None or float (fractions allowed)."""

    text = text.strip()
    if text in ['None', '']:
        return None
    if '/' in text:
        return float(Fraction(text))

    return float(text)


def species_from_block(block):
    """
    Build a SpeciesParams from a key/value dictionary read from a file.

    Parameters
    ----------
    block : dict
        Keys from ct.SPECIES_FIELDS with string values.

    Returns
    -------
    species : SpeciesParams
    """
    unexpected = [k for k in block if k not in ct.SPECIES_FIELDS]
    if unexpected:
        raise ValueError(f"Unexpected species fields: {', '.join(unexpected)}.")

    required = ['name', 'nuclear_spin', 'linewidth_hz', 'hf_s_hz',
                'hf_p_hz', 'eta_up', 'eta_cross']
    missing = [k for k in required if k not in block]
    if missing:
        name = block.get('name', '<unnamed>')
        raise ValueError(f"Species {name} is missing fields: {', '.join(missing)}.")

    values = {k: parse_value(v) for k, v in block.items()
              if k not in ['name', 'nuclear_spin', 'manifolds']}
    if values.get('eta_flush') is None:
        values['eta_flush'] = 1.0 - values['eta_up']
    if 'manifolds' in block and block['manifolds'].strip() not in ['', 'None']:
        values['manifolds'] = tuple(m.strip() for m in block['manifolds'].split(','))

    try:
        return SpeciesParams(name=block['name'].strip(),
                             nuclear_spin=Fraction(block['nuclear_spin'].strip()),
                             **values)
    except TypeError as error:
        raise ValueError(f"Species {block['name']}: {error}") from error


def read_species_file(file_path):
    """
    Read a species key/value file.

    Parameters
    ----------
    file_path : str
        Path to a tab-separated species file.

    Returns
    -------
    species_list : list of SpeciesParams
        Species in file order.
    """
    blocks = []
    current = {}
    with open(file_path, 'r', encoding='utf-8') as infile:
        for row in csv.reader(infile, delimiter='\t'):
            if len(row) == 0 or all(v.strip() == '' for v in row):
                if current:
                    blocks.append(current)
                    current = {}
                continue
            if row[0].startswith('#'):
                if row[0].strip('# ') == 'species-file-version' and len(row) > 1:
                    version = int(row[1])
                    if version > ct.SPECIES_FILE_VERSION:
                        raise ValueError(f"{file_path}: species file version {version} "
                                         f"is newer than supported version "
                                         f"{ct.SPECIES_FILE_VERSION}.")
                continue
            if len(row) != 2:
                raise ValueError(f"{file_path}: malformed line {row}.")
            key, value = row[0].strip(), row[1]
            if key == 'name' and current:
                blocks.append(current)
                current = {}
            current[key] = value
    if current:
        blocks.append(current)

    species_list = [species_from_block(b) for b in blocks]
    names = [s.name for s in species_list]
    duplicated = sorted({n for n in names if names.count(n) > 1})
    if duplicated:
        raise ValueError(f"{file_path}: duplicated species {', '.join(duplicated)}.")

    return species_list


def format_value(value):
    if value is None:
        return 'None'

    return repr(float(value))


def write_species_file(species_list, file_path):
    """
    Write species to a key/value file readable by read_species_file.

    Parameters
    ----------
    species_list : iterable of SpeciesParams
        Species to write.
    file_path : str
        Output path.

    Returns
    -------
    None
    """
    lines = [f"# species-file-version\t{ct.SPECIES_FILE_VERSION}",
             "# Frequencies are plain Hz (not angular); lifetimes are seconds."]
    for species in species_list:
        lines.append('')
        lines.append(f"name\t{species.name}")
        lines.append(f"nuclear_spin\t{species.nuclear_spin}")
        for key in ct.SPECIES_FIELDS[2:-1]:
            lines.append(f"{key}\t{format_value(getattr(species, key))}")
        lines.append(f"manifolds\t{','.join(species.manifolds)}")

    with open(file_path, 'w', encoding='utf-8') as outfile:
        outfile.write('\n'.join(lines) + '\n')


@functools.lru_cache(maxsize=None)
def _builtin_species():
    return tuple(read_species_file(BUILTIN_SPECIES_FILE))


def builtin_species():
    """Return the seven built-in species in table order."""

    return list(_builtin_species())


def merge_species(base, overrides):
    """
    Merge species lists by name; overrides replace rows with the same name
    and new names are appended.
    """
    merged = {s.name: s for s in base}
    for species in overrides:
        merged[species.name] = species

    return list(merged.values())


def load_species(species_file=None):
    """Built-in species, merged with a user file when one is given."""

    species_list = builtin_species()
    if species_file is not None:
        species_list = merge_species(species_list, read_species_file(species_file))

    return species_list


def get_species(name, species_list=None):
    """
    Find a species by name.

    Raises
    ------
    ValueError
        If the name is unknown.
    """
    if species_list is None:
        species_list = builtin_species()
    for species in species_list:
        if species.name == name:
            return species

    known = ', '.join(s.name for s in species_list)
    raise ValueError(f"Unknown species '{name}'. Known species: {known}.")
