#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module lists the species known to HyperfineSPAM (built-in rows merged
with an optional user file), the Zeeman sublevels of one species, and
writes species files in the key/value format read by the package.

Code documentation
------------------
"""

import pandas as pd

try:
    from HyperfineSPAM.AtomicData import species as sp
    from HyperfineSPAM.utils import (file_functions as ff,
                                     pandas_functions as pf)
except ModuleNotFoundError:
    from AtomicData import species as sp
    from utils import (file_functions as ff,
                       pandas_functions as pf)


def species_frame(species_list):
    """One row per species with every tabulated constant."""

    rows = []
    for species in species_list:
        rows.append({'species': species.name,
                     'I': str(species.nuclear_spin),
                     'linewidth_hz': species.linewidth_hz,
                     'hf_s_hz': species.hf_s_hz,
                     'hf_p_hz': species.hf_p_hz,
                     'eta_up': species.eta_up,
                     'eta_cross': species.eta_cross,
                     'eta_flush': species.eta_flush,
                     'd52_lifetime_s': species.d52_lifetime_s,
                     'deshelve_branch_f1': species.deshelve_branch_f1,
                     'manifolds': ','.join(species.manifolds)})

    return pf.rows_to_df(rows)


def sublevel_frame(species):
    """Every Zeeman sublevel of the manifolds tabulated for a species."""

    states = sp.enumerate_sublevels(species, species.manifolds)

    return pd.DataFrame({'manifold': [s.manifold for s in states],
                         'F': [s.F for s in states],
                         'mF': [s.mF for s in states],
                         'label': [s.label() for s in states]})


def main(args):

    if args.write_species_file:
        sp.write_species_file(args.species_list, args.write_species_file)
        ff.status(f"Wrote {len(args.species_list)} species to {args.write_species_file}")

    if args.sublevels:
        species = sp.get_species(args.run_config.species, args.species_list)
        frame = sublevel_frame(species)
        ff.status(f"{species.name}: {len(frame)} sublevels in "
                  f"{', '.join(species.manifolds)}")
    else:
        frame = species_frame(args.species_list)

    pf.write_csv(frame, args.out)
