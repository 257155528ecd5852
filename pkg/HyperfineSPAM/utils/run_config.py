#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
Effective run configuration: built-in defaults, overridden by a validated
INI file, overridden by command line flags. The effective configuration
can be written back as INI; running from that file reproduces the run.

Code documentation
------------------
"""

import sys
import configparser
from dataclasses import dataclass, field, fields, replace

try:
    from HyperfineSPAM.utils import (constants as ct,
                                     parameter_validation as pv)
    from HyperfineSPAM.PumpSimulation import protocols as pr
    from HyperfineSPAM.Detection import shot_simulation as ss
    from HyperfineSPAM.Statistics import correlated_errors as ce
except ModuleNotFoundError:
    from utils import (constants as ct,
                       parameter_validation as pv)
    from PumpSimulation import protocols as pr
    from Detection import shot_simulation as ss
    from Statistics import correlated_errors as ce


@dataclass(frozen=True)
class PrepSettings:
    """Protocol choice and imperfections of the preparation stage."""

    protocol: str = ct.DEFAULT_PROTOCOL
    cycles: int = ct.DEFAULT_CYCLES
    flush_cycles: int = ct.DEFAULT_FLUSH_CYCLES
    polarization_residual: float = ct.POLARIZATION_RESIDUAL
    flush_leak: float = ct.FLUSH_LEAK
    microwave_infidelity: float = ct.MICROWAVE_INFIDELITY
    shelve_infidelity: float = ct.SHELVE_INFIDELITY
    shelve_qubit_leak: float = ct.SHELVE_QUBIT_LEAK
    transfer_infidelity: float = ct.TRANSFER_INFIDELITY
    deshelve_marching: bool = True
    ideal: bool = False

    def __post_init__(self):
        if self.protocol not in ct.PROTOCOLS:
            raise ValueError(f"protocol must be one of {ct.PROTOCOLS}.")
        if self.cycles < 0 or self.flush_cycles < 0:
            raise ValueError("cycles and flush_cycles must be >= 0.")

    def pulse_params(self):
        params = pr.PulseParams(polarization_residual=self.polarization_residual,
                                flush_leak=self.flush_leak,
                                microwave_infidelity=self.microwave_infidelity,
                                shelve_infidelity=self.shelve_infidelity,
                                shelve_qubit_leak=self.shelve_qubit_leak,
                                deshelve_marching=self.deshelve_marching,
                                transfer_infidelity=self.transfer_infidelity)
        if self.ideal:
            return params.ideal()
        return params

    def protocol_object(self, species):
        """Protocol with one cycle pulse per S(F_low, mF != 0) sublevel of species."""
        return pr.build_protocol(self.protocol, self.cycles,
                                 min(self.flush_cycles, self.cycles),
                                 self.pulse_params(), species.lower_f)


@dataclass(frozen=True)
class RunConfig:
    species: str = ct.DEFAULT_SPECIES
    seed: int = ct.DEFAULT_SEED
    trials: int = ct.DEFAULT_TRIALS
    prep: PrepSettings = field(default_factory=PrepSettings)
    detection: ss.DetectionConfig = field(default_factory=ss.DetectionConfig)
    shelving: ss.ShelvingConfig = field(default_factory=ss.ShelvingConfig)
    bursts: ce.BurstModel = field(default_factory=ce.BurstModel)

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be >= 0.")
        if self.trials < 1:
            raise ValueError("trials must be >= 1.")


def _bursts_from_values(values, base):
    low, high = base.burst_length_range
    return ce.BurstModel(burst_rate_per_trial=values.get('burst_rate_per_trial',
                                                         base.burst_rate_per_trial),
                         burst_length_range=(values.get('burst_length_min', low),
                                             values.get('burst_length_max', high)),
                         burst_count_rate=values.get('burst_count_rate',
                                                     base.burst_count_rate))


def _section(values, name):
    prefix = f"{name}."
    return {k[len(prefix):]: v for k, v in values.items() if k.startswith(prefix)}


def build_run_config(values, base=None):
    """
    Apply validated 'section.key' values over a base configuration.

    Raises
    ------
    ValueError
        If the combined values are inconsistent (e.g. bright rate below
        dark rate).
    """
    base = base or RunConfig()
    run = _section(values, 'run')
    detection = _section(values, 'detection')

    return RunConfig(species=run.get('species', base.species),
                     seed=run.get('seed', base.seed),
                     trials=run.get('trials', base.trials),
                     prep=replace(base.prep, **_section(values, 'prep')),
                     detection=replace(base.detection, **detection),
                     shelving=replace(base.shelving, **_section(values, 'shelving')),
                     bursts=_bursts_from_values(_section(values, 'bursts'), base.bursts))


def load_run_config(config_file=None, overrides=None):
    """
    Effective configuration for a subcommand.

    Parameters
    ----------
    config_file : str, optional
        INI file validated against constants.CONFIG_ERRORS.
    overrides : dict, optional
        'section.key' values from command line flags; None values are
        ignored.

    Exits with the configuration error code when the file is invalid.
    """
    values = {}
    if config_file is not None:
        values = pv.validate_config_file(config_file)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value

    try:
        return build_run_config(values)
    except ValueError as error:
        pv.report_and_exit("Inconsistent configuration:", [str(error)])


def _format(value):
    if isinstance(value, tuple):
        return ','.join(_format(v) for v in value)
    if isinstance(value, float):
        return repr(value)

    return str(value)


def config_values(cfg):
    """Flat 'section.key' -> value mapping of a RunConfig."""

    values = {'run.species': cfg.species,
              'run.seed': cfg.seed,
              'run.trials': cfg.trials}
    for section, obj in [('prep', cfg.prep), ('detection', cfg.detection),
                         ('shelving', cfg.shelving)]:
        for f in fields(obj):
            values[f"{section}.{f.name}"] = getattr(obj, f.name)
    values['bursts.burst_rate_per_trial'] = cfg.bursts.burst_rate_per_trial
    values['bursts.burst_length_min'] = cfg.bursts.burst_length_range[0]
    values['bursts.burst_length_max'] = cfg.bursts.burst_length_range[1]
    values['bursts.burst_count_rate'] = cfg.bursts.burst_count_rate

    return values


def dump_config(cfg, file_path):
    """Write the effective configuration as an INI file; '-' writes it to stderr."""

    parser = configparser.ConfigParser(interpolation=None)
    values = config_values(cfg)
    for section, keys in ct.CONFIG_SECTIONS.items():
        parser[section] = {key: _format(values[f"{section}.{key}"]) for key in keys}

    # stdout carries the data tables
    if file_path == '-':
        parser.write(sys.stderr)
        return
    with open(file_path, 'w', encoding='utf-8') as outfile:
        parser.write(outfile)
