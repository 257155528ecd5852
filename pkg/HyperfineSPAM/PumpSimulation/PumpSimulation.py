#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module runs a state preparation protocol on the population vector of
the selected species and writes the preparation error after the preamble
and after every pumping cycle.

Code documentation
------------------
"""

try:
    from HyperfineSPAM.AtomicData import species as sp
    from HyperfineSPAM.PumpSimulation import protocols as pr
    from HyperfineSPAM.utils import (file_functions as ff,
                                     pandas_functions as pf)
except ModuleNotFoundError:
    from AtomicData import species as sp
    from PumpSimulation import protocols as pr
    from utils import (file_functions as ff,
                       pandas_functions as pf)


def main(args):

    cfg = args.run_config
    species = sp.get_species(cfg.species, args.species_list)
    protocol = cfg.prep.protocol_object(species)

    ff.status(f"\n{species.name}: {protocol.name}, {protocol.cycles} cycles, "
              f"{protocol.total_duration_us / 1000:g} ms")

    series = pr.run_prep(protocol, species)
    if args.steady_state and protocol.cycles > 0:
        error = pr.steady_state_error(protocol, species)
        ff.status(f"Fixed point of one cycle: {error:.6g}")

    pf.write_csv(pr.series_frame(series), args.out)
