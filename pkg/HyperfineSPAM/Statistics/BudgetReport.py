#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module assembles a SPAM error budget from a components file and
prints it as an aligned table; the table is also written as CSV when an
output path is given.

Code documentation
------------------
"""

try:
    from HyperfineSPAM.Statistics import (intervals as iv,
                                          error_budget as eb)
    from HyperfineSPAM.utils import (file_functions as ff,
                                     pandas_functions as pf)
except ModuleNotFoundError:
    from Statistics import (intervals as iv,
                            error_budget as eb)
    from utils import (file_functions as ff,
                       pandas_functions as pf)


def main(args):

    z = 1.0 if args.confidence is None else iv.z_for_confidence(args.confidence)
    budget = eb.build_budget(eb.read_components(args.components), z)

    for state in budget.inconsistent_states():
        ff.status(f"Warning: measured {state} subtotal is below the sum of "
                  "its predicted components.")

    if args.out is not None:
        pf.write_csv(eb.budget_frame(budget), args.out)

    ff.write_text(eb.render_text(budget))
