#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
Two-population rate model of microwave-assisted optical pumping.

The population outside the qubit state is flushed at
eta_flush * gamma / 2 and the qubit state is lost to off-resonant
scattering at [eta_up (Gamma/2 dHF_S)^2 + eta_cross (Gamma/2 d_minus)^2] gamma.
The two equations are closed by conservation: whatever leaves one
population enters the other. The steady-state ratio of the two
populations is the state preparation error.

Code documentation
------------------
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

try:
    from HyperfineSPAM.utils import constants as ct
    from HyperfineSPAM.AtomicData import species as sp
except ModuleNotFoundError:
    from utils import constants as ct
    from AtomicData import species as sp


@dataclass(frozen=True)
class RatePumpConfig:
    """Flush-beam settings for the rate equations.

    flush_branching defaults to the species' eta_up, the value for which
    the conservation-closed equations reproduce the closed-form error.
    Pass species.eta_flush to use the dipole branching P(F'+1) -> S(F).
    """

    species: sp.SpeciesParams
    scatter_rate_hz: float
    flush_branching: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.scatter_rate_hz) or self.scatter_rate_hz < 0:
            raise ValueError("scatter_rate_hz must be finite and non-negative.")
        if self.scatter_rate_hz > ct.MAX_SCATTER_FRACTION * self.species.linewidth_hz:
            warnings.warn(f"scatter_rate_hz={self.scatter_rate_hz:g} exceeds "
                          f"{ct.MAX_SCATTER_FRACTION} x linewidth; the low-saturation "
                          "model is not valid there.", RuntimeWarning)
        if self.flush_branching is not None and not 0.0 < self.flush_branching <= 1.0:
            raise ValueError("flush_branching must be in (0, 1].")

    @property
    def branching(self):
        if self.flush_branching is None:
            return self.species.eta_up
        return self.flush_branching


@dataclass(frozen=True)
class PopulationPair:
    """Qubit-state and non-qubit populations."""

    rho_qubit: float
    rho_other: float

    def __post_init__(self):
        for key in ('rho_qubit', 'rho_other'):
            value = getattr(self, key)
            if not -1e-12 <= value <= 1.0 + 1e-12:
                raise ValueError(f"{key} must be a probability, got {value}.")

    @property
    def ratio(self):
        return self.rho_other / self.rho_qubit


@dataclass
class RateIntegration:
    """Time series returned by integrate_rate_equations."""

    times_s: np.ndarray
    rho_qubit: np.ndarray
    rho_other: np.ndarray
    time_step_s: float
    halving_change: float

    @property
    def final(self):
        return PopulationPair(float(self.rho_qubit[-1]), float(self.rho_other[-1]))

    @property
    def final_ratio(self):
        return self.final.ratio

    def to_frame(self):
        return pd.DataFrame({'time_s': self.times_s,
                             'rho_qubit': self.rho_qubit,
                             'rho_other': self.rho_other})


def default_rate_config(species, scatter_fraction=ct.DEFAULT_SCATTER_FRACTION):
    """Rate configuration with gamma = scatter_fraction * Gamma."""

    return RatePumpConfig(species, scatter_fraction * species.linewidth_hz)


def prep_error_steady_state(species):
    """
    Closed-form steady-state preparation error.

    eps = (Gamma^2 / 2) [1 / dHF_S^2 + (eta_cross / eta_up) / d_minus^2]

    Parameters
    ----------
    species : SpeciesParams
        Species constants.

    Returns
    -------
    eps_prep : float
        Dimensionless preparation error.

    Raises
    ------
    ValueError
        If d_minus = dHF_S - dHF_P is not positive or eta_up is zero.
    """
    delta_minus = species.hf_s_hz - species.hf_p_hz
    if delta_minus <= 0:
        raise ValueError(f"{species.name}: hf_s_hz - hf_p_hz must be positive.")
    if species.eta_up <= 0:
        raise ValueError(f"{species.name}: eta_up must be positive.")

    gamma_sq = species.linewidth_hz ** 2

    return gamma_sq / 2 * (1 / species.hf_s_hz ** 2
                           + species.eta_cross / species.eta_up / delta_minus ** 2)


def prep_error_branching_corrected(species):
    """Steady-state ratio when the flush term uses eta_flush instead of eta_up."""

    return prep_error_steady_state(species) * species.eta_up / species.eta_flush


def table1_report(species_list=None):
    """
    Preparation error for every species, in table order.

    Returns
    -------
    report : list of tuple
        (name, eps_prep) pairs.
    """
    if species_list is None:
        species_list = sp.builtin_species()

    return [(s.name, prep_error_steady_state(s)) for s in species_list]


def table1_frame(species_list=None):
    """Predicted preparation errors with the species constants as a DataFrame."""

    if species_list is None:
        species_list = sp.builtin_species()

    return pd.DataFrame({'species': [s.name for s in species_list],
                         'I': [str(s.nuclear_spin) for s in species_list],
                         'linewidth_hz': [s.linewidth_hz for s in species_list],
                         'hf_s_hz': [s.hf_s_hz for s in species_list],
                         'hf_p_hz': [s.hf_p_hz for s in species_list],
                         'eps_prep': [prep_error_steady_state(s) for s in species_list]})


def rates(cfg):
    """
    Flush rate of the non-qubit population and loss rate of the qubit state.

    Returns
    -------
    flush_rate, qubit_loss_rate : float
        Rates in 1/s.
    """
    species = cfg.species
    gamma = cfg.scatter_rate_hz
    flush_rate = cfg.branching * gamma / 2
    half_width = species.linewidth_hz / 2
    qubit_loss_rate = (species.eta_up * (half_width / species.hf_s_hz) ** 2
                       + species.eta_cross * (half_width / species.delta_minus_hz) ** 2) * gamma

    return flush_rate, qubit_loss_rate


def relaxation_time(cfg):
    """Time constant 1 / (flush rate + qubit loss rate); inf when gamma is 0."""

    total = sum(rates(cfg))
    if total == 0:
        return math.inf

    return 1 / total


def default_time_step(cfg):
    return ct.TIME_STEP_FRACTION * relaxation_time(cfg)


def step_propagator(cfg, dt_s):
    """
    One classical RK4 step of the linear system, written as a matrix.

    For y' = A y the RK4 update is y <- (I + hA + (hA)^2/2 + (hA)^3/6 +
    (hA)^4/24) y. The columns of A sum to zero so the propagator conserves
    total population and leaves the exact steady state fixed.
    """
    flush_rate, loss_rate = rates(cfg)
    # state vector is (rho_qubit, rho_other)
    generator = np.array([[-loss_rate, flush_rate],
                          [loss_rate, -flush_rate]]) * dt_s
    propagator = np.eye(2)
    term = np.eye(2)
    for order in range(1, 5):
        term = term @ generator / order
        propagator = propagator + term

    return propagator


def _integrate(cfg, init, duration_s, dt_s):
    n_steps = max(1, int(round(duration_s / dt_s)))
    h = duration_s / n_steps
    propagator = step_propagator(cfg, h)

    series = np.empty((n_steps + 1, 2))
    series[0] = (init.rho_qubit, init.rho_other)
    for i in range(n_steps):
        series[i + 1] = propagator @ series[i]
        if not np.all(np.isfinite(series[i + 1])):
            raise ValueError(f"Non-finite population at step {i + 1} "
                             f"(dt={h:g} s); reduce dt_s.")

    times = np.linspace(0.0, duration_s, n_steps + 1)

    return times, series, h


def integrate_rate_equations(cfg, init, duration_s, dt_s):
    """
    Integrate the conservation-closed rate equations with fixed-step RK4.

    The run is repeated with half the step and the relative change of the
    final population ratio is stored in the result; a warning is issued
    when it exceeds ct.STEADY_STATE_RTOL.

    Parameters
    ----------
    cfg : RatePumpConfig
        Species and scattering rate.
    init : PopulationPair
        Initial populations.
    duration_s : float
        Integration time in seconds.
    dt_s : float
        Requested step; rounded so an integer number of steps fits.

    Returns
    -------
    result : RateIntegration
        Sampled time series and the step-halving change.

    Raises
    ------
    ValueError
        For non-positive duration or step, or non-finite intermediate values.
    """
    if not duration_s > 0:
        raise ValueError("duration_s must be positive.")
    if not 0 < dt_s <= duration_s:
        raise ValueError("dt_s must satisfy 0 < dt_s <= duration_s.")

    times, series, h = _integrate(cfg, init, duration_s, dt_s)
    _, half_series, _ = _integrate(cfg, init, duration_s, h / 2)

    final = series[-1]
    half_final = half_series[-1]
    if final[0] > 0 and half_final[0] > 0 and final[1] != 0:
        ratio = final[1] / final[0]
        half_ratio = half_final[1] / half_final[0]
        halving_change = abs(half_ratio - ratio) / abs(ratio)
    else:
        halving_change = float(np.max(np.abs(half_final - final)))

    if halving_change > ct.STEADY_STATE_RTOL:
        warnings.warn(f"Halving the time step changed the final ratio by "
                      f"{halving_change:.2e} (relative); reduce dt_s.", RuntimeWarning)

    return RateIntegration(times_s=times,
                           rho_qubit=series[:, 0],
                           rho_other=series[:, 1],
                           time_step_s=h,
                           halving_change=halving_change)
