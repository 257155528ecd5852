#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
Declarative pulse sequences for polarization preparation, microwave-assisted
optical pumping (MAOP) and 1762 nm narrow-band optical pumping (NBOP), and
the deterministic matrix evolution that turns them into a prep-error vs
cycle series.

Code documentation
------------------
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
import pandas as pd

try:
    from HyperfineSPAM.utils import constants as ct
    from HyperfineSPAM.PumpSimulation import pulse_steps as ps
except ModuleNotFoundError:
    from utils import constants as ct
    from PumpSimulation import pulse_steps as ps


@dataclass(frozen=True)
class PulseParams:
    """Imperfection parameters shared by the protocol builders."""

    polarization_residual: float = ct.POLARIZATION_RESIDUAL
    residual_spread: str = 'uniform'
    flush_leak: float = ct.FLUSH_LEAK
    microwave_infidelity: float = ct.MICROWAVE_INFIDELITY
    shelve_infidelity: float = ct.SHELVE_INFIDELITY
    shelve_qubit_leak: float = ct.SHELVE_QUBIT_LEAK
    deshelve_branch_f1: Optional[float] = None
    deshelve_marching: bool = True
    transfer_infidelity: float = ct.TRANSFER_INFIDELITY

    def ideal(self):
        """Same residual on the addressed S(F_low) sublevels, every other error zero."""
        return replace(self, residual_spread='addressed', flush_leak=0.0,
                       microwave_infidelity=0.0, shelve_infidelity=0.0,
                       shelve_qubit_leak=0.0, transfer_infidelity=0.0)


@dataclass(frozen=True)
class Protocol:
    """Preamble steps followed by `cycles` repetitions of `cycle_steps`.

    flush_mask[i] is False when the FlushPulse steps are skipped in cycle i.
    f_low is the lower ground F whose sublevels the cycle pulses address,
    None for protocols that do not depend on it.
    """

    name: str
    preamble: Tuple[ps.ProtocolStep, ...]
    cycle_steps: Tuple[ps.ProtocolStep, ...] = ()
    cycles: int = 0
    flush_mask: Tuple[bool, ...] = field(default=())
    f_low: Optional[int] = None

    def __post_init__(self):
        if self.cycles < 0:
            raise ValueError("cycles must be >= 0.")
        mask = tuple(self.flush_mask) if self.flush_mask else (True,) * self.cycles
        if len(mask) != self.cycles:
            raise ValueError("flush_mask must have one entry per cycle.")
        object.__setattr__(self, 'flush_mask', mask)

    def check_species(self, species):
        """Raise ValueError if the cycle pulses leave sublevels of species unaddressed."""

        if self.f_low is not None and self.f_low != species.lower_f:
            raise ValueError(f"{self.name} was built for F_low = {self.f_low} but "
                             f"{species.name} has F_low = {species.lower_f}; build "
                             "the protocol for this species.")

    @property
    def steps(self):
        return self.preamble + self.cycle_steps

    def steps_for_cycle(self, cycle):
        if self.flush_mask[cycle]:
            return self.cycle_steps
        return tuple(s for s in self.cycle_steps if not isinstance(s, ps.FlushPulse))

    @property
    def total_duration_us(self):
        total = sum(s.duration_us for s in self.preamble)
        for cycle in range(self.cycles):
            total += sum(s.duration_us for s in self.steps_for_cycle(cycle))
        return total


def build_polarization_prep(residual=ct.POLARIZATION_RESIDUAL, pulse_params=None):
    """Polarization-limited preparation alone."""

    params = pulse_params or PulseParams()
    pump = ps.PolarizationPump(residual_error=residual,
                               residual_spread=params.residual_spread)

    return Protocol('polarization', (pump,))


def addressed_mf(f_low=1):
    """mF of the S(F_low) sublevels outside the qubit, in pulse order +1, -1, +2, -2, ..."""

    return tuple(m for k in range(1, f_low + 1) for m in (k, -k))


def ideal_cycle_contraction(species):
    """
    Factor by which one ideal MAOP or NBOP cycle multiplies the prep error.

    Every addressed sublevel is emptied and the population comes back
    uniformly over the 2 F_low + 1 sublevels of S(F_low), one of which is
    |0>.
    """
    sublevels = 2 * species.lower_f + 1

    return (sublevels - 1) / sublevels


def build_maop(cycles, pulse_params=None, f_low=1):
    """
    Polarization prep followed by MAOP cycles.

    Each cycle moves every S(F_low, mF != 0) sublevel to S(F_up, mF) with one
    microwave pi pulse per sublevel and the flush returns that population
    uniformly to S(F_low), so every reported cycle ends with the errors
    back in F_low.
    """
    params = pulse_params or PulseParams()
    preamble = build_polarization_prep(params.polarization_residual, params).preamble
    cycle = tuple(ps.MicrowavePi(mF=m, infidelity=params.microwave_infidelity)
                  for m in addressed_mf(f_low))
    cycle += (ps.FlushPulse(leak_prob_qubit=params.flush_leak),)

    return Protocol('maop', preamble, cycle, cycles, f_low=f_low)


def build_nbop(cycles, flush_mask=None, pulse_params=None, f_low=1):
    """
    Polarization prep followed by NBOP cycles.

    Parameters
    ----------
    cycles : int
        Number of cycles.
    flush_mask : int or sequence of bool, optional
        An int keeps the flush pulse in that many leading cycles only;
        a sequence gives the mask per cycle. Default: flush every cycle.
    pulse_params : PulseParams, optional
        Imperfections.
    f_low : int
        Lower ground F; one 1762 nm pulse shelves each S(F_low, mF != 0).

    Returns
    -------
    protocol : Protocol
    """
    params = pulse_params or PulseParams()
    if flush_mask is None:
        mask = (True,) * cycles
    elif isinstance(flush_mask, int):
        mask = tuple(i < flush_mask for i in range(cycles))
    else:
        mask = tuple(bool(m) for m in flush_mask)

    preamble = build_polarization_prep(params.polarization_residual, params).preamble
    shelve = tuple(ps.ShelvePi1762(mF=m, infidelity=params.shelve_infidelity,
                                   off_resonant_qubit_leak=params.shelve_qubit_leak,
                                   duration_us=ct.SHELVE_PI_DURATIONS_US[0 if m > 0 else 1])
                   for m in addressed_mf(f_low))
    cycle = ((ps.FlushPulse(leak_prob_qubit=params.flush_leak),)
             + shelve
             + (ps.Deshelve614(branch_f1=params.deshelve_branch_f1,
                               marching=params.deshelve_marching),))

    return Protocol('nbop', preamble, cycle, cycles, mask, f_low)


def build_protocol(name, cycles, flush_cycles=None, pulse_params=None, f_low=1):
    """Dispatch on protocol name: maop, nbop or polarization."""

    if name == 'maop':
        return build_maop(cycles, pulse_params, f_low)
    if name == 'nbop':
        return build_nbop(cycles, flush_cycles, pulse_params, f_low)
    if name == 'polarization':
        params = pulse_params or PulseParams()
        return build_polarization_prep(params.polarization_residual, params)

    raise ValueError(f"Unknown protocol '{name}'; expected one of {ct.PROTOCOLS}.")


class MatrixCache:
    """Transition matrices for one state space, built once per step."""

    def __init__(self, states, species):
        self.states = tuple(states)
        self.species = species
        self.matrices = {}

    def __call__(self, step):
        if step not in self.matrices:
            self.matrices[step] = step.transition_matrix(self.states, self.species)
        return self.matrices[step]

    def product(self, steps):
        matrix = np.eye(len(self.states))
        for step in steps:
            matrix = matrix @ self(step)
        return matrix


def evolve_protocol(protocol, species, init=None):
    """
    Run a protocol and keep the population after each cycle.

    Returns
    -------
    final : PopulationVector
        Populations after the last cycle.
    series : list of tuple
        (cycle index, prep error); index 0 is after the preamble.
    """
    protocol.check_species(species)
    pop = init if init is not None else ps.PopulationVector.uniform(species)
    cache = MatrixCache(pop.states, species)

    pop = pop.evolve(cache.product(protocol.preamble))
    series = [(0, pop.error(species))]
    for cycle in range(protocol.cycles):
        for step in protocol.steps_for_cycle(cycle):
            pop = pop.evolve(cache(step))
        series.append((cycle + 1, pop.error(species)))

    return pop, series


def run_prep(protocol, species, init=None):
    """
    Deterministic prep-error series of a protocol.

    Parameters
    ----------
    protocol : Protocol
        Pulse sequence.
    species : SpeciesParams
        Species constants.
    init : PopulationVector, optional
        Initial populations; defaults to uniform over S12.

    Returns
    -------
    series : list of tuple
        (cycle index, 1 - population of |0>) after the preamble and after
        each cycle.
    """
    return evolve_protocol(protocol, species, init)[1]


def series_frame(series):
    return pd.DataFrame(series, columns=['cycle', 'prep_error'])


def cycle_matrix(protocol, species, cycle=0, states=None):
    """Transition matrix of one full cycle of the protocol."""

    protocol.check_species(species)
    if states is None:
        states = ps.PopulationVector.uniform(species).states
    cache = MatrixCache(states, species)
    if protocol.cycles == 0:
        return cache.product(protocol.cycle_steps)

    return cache.product(protocol.steps_for_cycle(cycle))


def steady_state_error(protocol, species, cycle=0):
    """
    Prep error at the fixed point of repeating one cycle forever.

    Solves pi M = pi with sum(pi) = 1 directly (least squares on the
    stacked system).
    """
    states = ps.PopulationVector.uniform(species).states
    matrix = cycle_matrix(protocol, species, cycle, states)
    n = len(states)
    system = np.vstack([matrix.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    stationary, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    zero = states.index(species.qubit_zero)

    return float(np.sum(np.delete(stationary, zero)))
