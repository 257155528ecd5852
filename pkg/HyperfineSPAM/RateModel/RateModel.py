#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module computes the closed-form steady-state preparation error of
every species and, optionally, checks it against the long-time population
ratio of the integrated rate equations.

Code documentation
------------------
"""

try:
    from HyperfineSPAM.RateModel import rate_equations as rq
    from HyperfineSPAM.utils import (file_functions as ff,
                                     pandas_functions as pf)
except ModuleNotFoundError:
    from RateModel import rate_equations as rq
    from utils import (file_functions as ff,
                       pandas_functions as pf)


def integrate_species(species, scatter_fraction, duration_tau):
    """
    Long-time population ratio of the rate equations for one species.

    Returns
    -------
    ratio, halving_change : float
    """
    cfg = rq.default_rate_config(species, scatter_fraction)
    duration = duration_tau * rq.relaxation_time(cfg)
    result = rq.integrate_rate_equations(cfg, rq.PopulationPair(0.0, 1.0),
                                         duration, rq.default_time_step(cfg))

    return result.final_ratio, result.halving_change


def main(args):

    frame = rq.table1_frame(args.species_list)

    if args.dipole_branching:
        frame['eps_prep_dipole'] = [rq.prep_error_branching_corrected(s)
                                    for s in args.species_list]

    if args.integrate:
        ff.status(f"\nIntegrating rate equations for {len(args.species_list)} "
                  f"species (gamma = {args.scatter_fraction:g} x linewidth)...")
        results = [integrate_species(s, args.scatter_fraction, args.duration_tau)
                   for s in args.species_list]
        frame['ode_ratio'] = [r[0] for r in results]
        frame['halving_change'] = [r[1] for r in results]

    pf.write_csv(frame, args.out)
