#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
Population vectors over the Zeeman sublevels and the pulse steps that act
on them. Every step is a row-stochastic transition matrix T with
T[i, j] = P(i -> j); a population vector p evolves as p @ T.

Pulses are stochastic maps, not unitaries: coherences are destroyed by the
flush and deshelve steps every cycle, so the cycle analysis only needs
populations.

Code documentation
------------------
"""

import math
from dataclasses import dataclass
from typing import ClassVar, Optional

import numpy as np

try:
    from HyperfineSPAM.utils import constants as ct
    from HyperfineSPAM.AtomicData import species as sp
except ModuleNotFoundError:
    from utils import constants as ct
    from AtomicData import species as sp


NORMALIZATION_TOLERANCE = 1e-12


def default_manifolds(species):
    """S12 plus D52 when the species tabulates it."""

    if 'D52' in species.manifolds:
        return ('S12', 'D52')
    return ('S12',)


class PopulationVector:
    """Probability distribution over an enumerated set of sublevels."""

    def __init__(self, states, probs):
        self.states = tuple(states)
        self.probs = np.asarray(probs, dtype=float)
        self.index = {state: i for i, state in enumerate(self.states)}

        if self.probs.shape != (len(self.states),):
            raise ValueError("probs must have one entry per state.")
        if np.any(self.probs < -NORMALIZATION_TOLERANCE):
            raise ValueError("Populations must be non-negative.")
        if abs(self.probs.sum() - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValueError(f"Populations must sum to 1, got {self.probs.sum()!r}.")

    @classmethod
    def uniform(cls, species, manifolds=None, over=('S12',)):
        """Equal population in every sublevel of the manifolds in `over`."""

        if manifolds is None:
            manifolds = default_manifolds(species)
        states = sp.enumerate_sublevels(species, manifolds)
        weights = np.array([1.0 if s.manifold in over else 0.0 for s in states])

        return cls(states, weights / weights.sum())

    @classmethod
    def concentrated(cls, species, distribution, manifolds=None):
        """
        Population vector from a {ZeemanState: probability} mapping;
        states not mentioned are empty.
        """
        if manifolds is None:
            manifolds = default_manifolds(species)
        states = sp.enumerate_sublevels(species, manifolds)
        index = {state: i for i, state in enumerate(states)}
        probs = np.zeros(len(states))
        for state, value in distribution.items():
            if state not in index:
                raise ValueError(f"Sublevel {state.label()} is not in the state space.")
            probs[index[state]] += value

        return cls(states, probs)

    def probability(self, state):
        return float(self.probs[self.index[state]])

    def error(self, species):
        """Population outside the qubit state |0>, summed directly."""
        zero = self.index[species.qubit_zero]
        return math.fsum(float(p) for i, p in enumerate(self.probs) if i != zero)

    def evolve(self, matrix):
        return PopulationVector(self.states, self.probs @ matrix)


def _position(index, state, step_name):
    try:
        return index[state]
    except KeyError:
        raise ValueError(f"{step_name} references sublevel {state.label()}, "
                         "which is absent from the state space.") from None


def _swap(matrix, i, j, infidelity):
    """Exchange population of i and j with probability 1 - infidelity."""

    for a, b in ((i, j), (j, i)):
        matrix[a, :] = 0.0
        matrix[a, b] = 1.0 - infidelity
        matrix[a, a] = infidelity


def _check_probability(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be a probability in [0, 1], got {value}.")


class ProtocolStep:
    """Base class: a pulse with a duration and a transition matrix."""

    kind: ClassVar[str] = 'step'

    def transition_matrix(self, states, species):
        raise NotImplementedError

    def matrix_for(self, pop, species):
        return self.transition_matrix(pop.states, species)


@dataclass(frozen=True)
class FlushPulse(ProtocolStep):
    """493 nm flush: empties S(F_up) uniformly into the S(F_low) sublevels
    and leaks |0> into S(F_low, +-1) with probability leak_prob_qubit."""

    leak_prob_qubit: float = ct.FLUSH_LEAK
    duration_us: float = ct.FLUSH_DURATION_US
    kind: ClassVar[str] = 'flush'

    def __post_init__(self):
        _check_probability('leak_prob_qubit', self.leak_prob_qubit)

    def transition_matrix(self, states, species):
        index = {state: i for i, state in enumerate(states)}
        matrix = np.eye(len(states))
        f_low, f_up = species.lower_f, species.upper_f
        lower = [_position(index, sp.ZeemanState('S12', f_low, m), 'FlushPulse')
                 for m in range(-f_low, f_low + 1)]
        for m in range(-f_up, f_up + 1):
            i = _position(index, sp.ZeemanState('S12', f_up, m), 'FlushPulse')
            matrix[i, :] = 0.0
            matrix[i, lower] = 1.0 / len(lower)

        zero = _position(index, species.qubit_zero, 'FlushPulse')
        for m in (-1, 1):
            j = _position(index, sp.ZeemanState('S12', f_low, m), 'FlushPulse')
            matrix[zero, j] = self.leak_prob_qubit / 2
        matrix[zero, zero] = 1.0 - self.leak_prob_qubit

        return matrix


@dataclass(frozen=True)
class MicrowavePi(ProtocolStep):
    """Microwave pi pulse S(F_low, mF) <-> S(F_up, mF)."""

    mF: int = 1
    infidelity: float = ct.MICROWAVE_INFIDELITY
    duration_us: float = ct.MICROWAVE_PI_DURATION_US
    kind: ClassVar[str] = 'microwave'

    def __post_init__(self):
        _check_probability('infidelity', self.infidelity)

    def transition_matrix(self, states, species):
        index = {state: i for i, state in enumerate(states)}
        matrix = np.eye(len(states))
        i = _position(index, sp.ZeemanState('S12', species.lower_f, self.mF), 'MicrowavePi')
        j = _position(index, sp.ZeemanState('S12', species.upper_f, self.mF), 'MicrowavePi')
        _swap(matrix, i, j, self.infidelity)

        return matrix


@dataclass(frozen=True)
class ShelvePi1762(ProtocolStep):
    """1762 nm pi pulse S(F_low, mF) <-> D52(F_low, -mF); off-resonant
    shelving moves |0> into the same D52 sublevel."""

    mF: int = 1
    infidelity: float = ct.SHELVE_INFIDELITY
    off_resonant_qubit_leak: float = ct.SHELVE_QUBIT_LEAK
    duration_us: float = ct.SHELVE_PI_DURATIONS_US[0]
    kind: ClassVar[str] = 'shelve'

    def __post_init__(self):
        _check_probability('infidelity', self.infidelity)
        _check_probability('off_resonant_qubit_leak', self.off_resonant_qubit_leak)

    def transition_matrix(self, states, species):
        index = {state: i for i, state in enumerate(states)}
        matrix = np.eye(len(states))
        f_low = species.lower_f
        i = _position(index, sp.ZeemanState('S12', f_low, self.mF), 'ShelvePi1762')
        j = _position(index, sp.ZeemanState('D52', f_low, -self.mF), 'ShelvePi1762')
        _swap(matrix, i, j, self.infidelity)

        zero = _position(index, species.qubit_zero, 'ShelvePi1762')
        matrix[zero, zero] = 1.0 - self.off_resonant_qubit_leak
        matrix[zero, j] += self.off_resonant_qubit_leak

        return matrix


@dataclass(frozen=True)
class Deshelve614(ProtocolStep):
    """614 nm deshelve of every D52 sublevel into S(F_low), uniformly over mF.

    branch_f1 of the population decays straight to S(F_low). With marching
    on, the remainder is walked back through the sidebands and repump until
    it also lands in S(F_low); with marching off it stays where it was.
    """

    branch_f1: Optional[float] = None
    marching: bool = True
    duration_us: float = ct.DESHELVE_DURATION_US
    kind: ClassVar[str] = 'deshelve'

    def __post_init__(self):
        if self.branch_f1 is not None:
            _check_probability('branch_f1', self.branch_f1)

    def branch(self, species):
        if self.branch_f1 is not None:
            return self.branch_f1
        if species.deshelve_branch_f1 is not None:
            return species.deshelve_branch_f1
        return ct.DESHELVE_BRANCH_F1

    def transition_matrix(self, states, species):
        index = {state: i for i, state in enumerate(states)}
        matrix = np.eye(len(states))
        f_low = species.lower_f
        for m in (-1, 1):
            _position(index, sp.ZeemanState('D52', f_low, m), 'Deshelve614')
        lower = [index[sp.ZeemanState('S12', f_low, m)] for m in range(-f_low, f_low + 1)]
        direct = self.branch(species)
        returned = 1.0 if self.marching else direct

        for state, i in index.items():
            if state.manifold != 'D52':
                continue
            matrix[i, :] = 0.0
            matrix[i, lower] = returned / len(lower)
            matrix[i, i] = 1.0 - returned

        return matrix


@dataclass(frozen=True)
class PolarizationPump(ProtocolStep):
    """Polarization-limited pumping of every S12 sublevel into |0>.

    The residual is spread uniformly over the non-qubit S12 sublevels
    ('uniform') or over the S(F_low, mF != 0) sublevels that the pumping
    cycles address ('addressed').
    """

    residual_error: float = ct.POLARIZATION_RESIDUAL
    residual_spread: str = 'uniform'
    duration_us: float = ct.POLARIZATION_DURATION_US
    kind: ClassVar[str] = 'polarization'

    def __post_init__(self):
        _check_probability('residual_error', self.residual_error)
        if self.residual_spread not in ['uniform', 'addressed']:
            raise ValueError("residual_spread must be 'uniform' or 'addressed'.")

    def transition_matrix(self, states, species):
        index = {state: i for i, state in enumerate(states)}
        matrix = np.eye(len(states))
        zero = _position(index, species.qubit_zero, 'PolarizationPump')
        if self.residual_spread == 'addressed':
            f_low = species.lower_f
            targets = [_position(index, sp.ZeemanState('S12', f_low, m), 'PolarizationPump')
                       for m in range(-f_low, f_low + 1) if m != 0]
        else:
            targets = [i for state, i in index.items()
                       if state.manifold == 'S12' and i != zero]

        for state, i in index.items():
            if state.manifold != 'S12':
                continue
            matrix[i, :] = 0.0
            matrix[i, zero] = 1.0 - self.residual_error
            matrix[i, targets] += self.residual_error / len(targets)

        return matrix


@dataclass(frozen=True)
class TransferPi(ProtocolStep):
    """Composite microwave pi pulse |0> <-> |1>."""

    infidelity: float = ct.TRANSFER_INFIDELITY
    duration_us: float = ct.TRANSFER_PI_DURATION_US
    kind: ClassVar[str] = 'transfer'

    def __post_init__(self):
        _check_probability('infidelity', self.infidelity)

    def transition_matrix(self, states, species):
        index = {state: i for i, state in enumerate(states)}
        matrix = np.eye(len(states))
        i = _position(index, species.qubit_zero, 'TransferPi')
        j = _position(index, species.qubit_one, 'TransferPi')
        _swap(matrix, i, j, self.infidelity)

        return matrix


def apply_step(pop, step, species):
    """
    Apply one pulse to a population vector.

    Parameters
    ----------
    pop : PopulationVector
        Normalized input populations.
    step : ProtocolStep
        Pulse to apply.
    species : SpeciesParams
        Species fixing the hyperfine structure.

    Returns
    -------
    pop : PopulationVector
        pop left-multiplied by the step's transition matrix.

    Raises
    ------
    ValueError
        If the step references a sublevel absent from the state space.
    """
    return pop.evolve(step.matrix_for(pop, species))
