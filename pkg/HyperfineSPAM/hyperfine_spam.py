#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Purpose
-------
This file calls all other modules of the package, containing several
arguments as input depending on the desired module.

Every module accepts the common arguments --config, --seed, --trials,
--species, --species-file, --threads, --out and --dump-config. Values
given on the command line override the configuration file, which
overrides the built-in defaults.

Exit codes: 0 on success, 2 for configuration errors (unknown module,
flag or species, invalid configuration file), 3 for runtime errors.

Code documentation
------------------
"""

import sys
import argparse

try:
    from HyperfineSPAM.AtomicData import (species as sp,
                                          AtomicData)
    from HyperfineSPAM.RateModel import RateModel
    from HyperfineSPAM.PumpSimulation import PumpSimulation
    from HyperfineSPAM.Detection import (SimulateSpam,
                                         ClassifyShots)
    from HyperfineSPAM.Statistics import (SummarizeShots,
                                          BudgetReport)
    from HyperfineSPAM.utils import (constants as ct,
                                     parameter_validation as pv,
                                     run_config as rc,
                                     validation as val)
except ModuleNotFoundError:
    from AtomicData import (species as sp,
                            AtomicData)
    from RateModel import RateModel
    from PumpSimulation import PumpSimulation
    from Detection import (SimulateSpam,
                           ClassifyShots)
    from Statistics import (SummarizeShots,
                            BudgetReport)
    from utils import (constants as ct,
                       parameter_validation as pv,
                       run_config as rc,
                       validation as val)


def common_arguments(parser, out_help='Output file. Data is written to '
                                      'stdout when not provided.',
                     out_required=False):
    """Arguments shared by every module."""

    parser.add_argument('-c', '--config', type=str,
                        required=False, dest='config',
                        help='INI configuration file with [run], [prep], '
                             '[detection], [shelving] and [bursts] sections.')

    parser.add_argument('--seed', type=int,
                        required=False, dest='seed',
                        help='Seed of every random draw.')

    parser.add_argument('-n', '--trials', type=int,
                        required=False, dest='trials',
                        help='Trials per prepared state.')

    parser.add_argument('-s', '--species', type=str,
                        required=False, dest='species',
                        help='Species name, e.g. 137Ba+.')

    parser.add_argument('-sf', '--species-file', type=str,
                        required=False, dest='species_file',
                        help='Species key/value file merged over the '
                             'built-in species by name.')

    parser.add_argument('-t', '--threads', type=pv.validate_threads,
                        required=False, default=1, dest='threads',
                        help='Number of worker processes. Does not change '
                             'the results.')

    parser.add_argument('-o', '--out', type=str,
                        required=out_required, dest='out',
                        help=out_help)

    parser.add_argument('--dump-config', type=str,
                        required=False, dest='dump_config',
                        help='Write the effective configuration to this '
                             'INI file ("-" for stderr) and continue.')


def species_module(argv):

    parser = argparse.ArgumentParser(prog='HyperfineSPAM species',
                                     description=AtomicData.__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)

    common_arguments(parser)

    parser.add_argument('--sublevels', action='store_true',
                        required=False, dest='sublevels',
                        help='List the Zeeman sublevels of the selected '
                             'species instead of the species table.')

    parser.add_argument('--write-species-file', type=str,
                        required=False, dest='write_species_file',
                        help='Write the known species as a key/value file.')

    return parser.parse_args(argv), AtomicData.main


def predict_module(argv):

    parser = argparse.ArgumentParser(prog='HyperfineSPAM predict',
                                     description=RateModel.__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)

    common_arguments(parser)

    parser.add_argument('--dipole-branching', action='store_true',
                        required=False, dest='dipole_branching',
                        help='Add the steady-state error obtained when the '
                             'flush term uses the dipole branching 1 - eta_up.')

    parser.add_argument('--integrate', action='store_true',
                        required=False, dest='integrate',
                        help='Integrate the rate equations and add the '
                             'long-time population ratio.')

    parser.add_argument('--scatter-fraction', type=float,
                        required=False, default=ct.DEFAULT_SCATTER_FRACTION,
                        dest='scatter_fraction',
                        help='Scattering rate of the flush beam as a '
                             'fraction of the linewidth.')

    parser.add_argument('--duration-tau', type=float,
                        required=False, default=40.0, dest='duration_tau',
                        help='Integration time in relaxation times.')

    return parser.parse_args(argv), RateModel.main


def prep_arguments(parser):

    parser.add_argument('-p', '--protocol', type=str,
                        required=False, dest='protocol',
                        choices=ct.PROTOCOLS,
                        help='State preparation protocol.')

    parser.add_argument('--cycles', type=int,
                        required=False, dest='cycles',
                        help='Number of pumping cycles.')

    parser.add_argument('--flush-cycles', type=int,
                        required=False, dest='flush_cycles',
                        help='Leading NBOP cycles that keep the flush pulse.')

    parser.add_argument('--ideal', action='store_const', const=True,
                        required=False, dest='ideal',
                        help='Remove every imperfection except the '
                             'polarization residual, placed on the '
                             'S(F_low, mF != 0) sublevels.')


def simulate_prep_module(argv):

    parser = argparse.ArgumentParser(prog='HyperfineSPAM simulate-prep',
                                     description=PumpSimulation.__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)

    common_arguments(parser)
    prep_arguments(parser)

    parser.add_argument('--steady-state', action='store_true',
                        required=False, dest='steady_state',
                        help='Report the fixed point of repeating one cycle.')

    return parser.parse_args(argv), PumpSimulation.main


def simulate_spam_module(argv):

    parser = argparse.ArgumentParser(prog='HyperfineSPAM simulate-spam',
                                     description=SimulateSpam.__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)

    common_arguments(parser, out_help='Output directory.', out_required=True)
    prep_arguments(parser)

    return parser.parse_args(argv), SimulateSpam.main


def classify_module(argv):

    parser = argparse.ArgumentParser(prog='HyperfineSPAM classify',
                                     description=ClassifyShots.__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)

    common_arguments(parser, out_help='Output directory.', out_required=True)

    parser.add_argument('-a', '--archive', type=str,
                        required=True, dest='archive',
                        help='Shot archive written by simulate-spam.')

    return parser.parse_args(argv), ClassifyShots.main


def summarize_module(argv):

    parser = argparse.ArgumentParser(prog='HyperfineSPAM summarize',
                                     description=SummarizeShots.__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)

    common_arguments(parser, out_help='Output CSV with the summary row.')

    parser.add_argument('-a', '--archive', type=str,
                        required=True, dest='archive',
                        help='Shot archive written by simulate-spam.')

    parser.add_argument('-m', '--method', type=str,
                        required=False, dest='method',
                        choices=['threshold', 'bayes'],
                        help='Classifier. Default: bayes in real-time mode, '
                             'threshold otherwise.')

    parser.add_argument('--confidence', type=float,
                        required=False, dest='confidence',
                        help='Two-sided confidence of the intervals. '
                             'Default: one Wilson interval (z = 1).')

    return parser.parse_args(argv), SummarizeShots.main


def budget_module(argv):

    parser = argparse.ArgumentParser(prog='HyperfineSPAM budget',
                                     description=BudgetReport.__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)

    common_arguments(parser, out_help='Output CSV with the budget table.')

    parser.add_argument('-bc', '--components', type=str,
                        required=True, dest='components',
                        help='TSV file with the columns source, state, value, '
                             'uncertainty, kind, bound and optionally errors '
                             'and trials.')

    parser.add_argument('--confidence', type=float,
                        required=False, dest='confidence',
                        help='Confidence of the intervals recomputed from '
                             'counts. Default: z = 1.')

    return parser.parse_args(argv), BudgetReport.main


def resolve_configuration(args):
    """
    Load species and the effective configuration into args.

    Exits with the configuration error code on invalid input.
    """
    try:
        args.species_list = sp.load_species(args.species_file)
    except (ValueError, OSError) as error:
        pv.report_and_exit("Invalid species file:", [str(error)])

    overrides = {'run.seed': args.seed,
                 'run.trials': args.trials,
                 'run.species': args.species}
    for key in ['protocol', 'cycles', 'flush_cycles', 'ideal']:
        overrides[f'prep.{key}'] = getattr(args, key, None)

    args.run_config = rc.load_run_config(args.config, overrides)
    pv.validate_species_name(args.run_config.species, args.species_list)

    if args.dump_config:
        rc.dump_config(args.run_config, args.dump_config)


def main(argv=None):

    module_info = {'species': ["Lists species constants and Zeeman sublevels.",
                               species_module],
                   'predict': ["Closed-form steady-state preparation error "
                               "of every species.", predict_module],
                   'simulate-prep': ["Preparation error per pumping cycle of "
                                     "a protocol.", simulate_prep_module],
                   'simulate-spam': ["End-to-end SPAM simulation with shot "
                                     "archive, histogram and summary.",
                                     simulate_spam_module],
                   'classify': ["Threshold and adaptive classification of a "
                                "shot archive with decay flagging.",
                                classify_module],
                   'summarize': ["SPAM infidelities with Wilson intervals "
                                 "from a shot archive.", summarize_module],
                   'budget': ["SPAM error budget from a components file.",
                              budget_module]}

    argv = sys.argv[1:] if argv is None else list(argv)

    if len(argv) == 0 or argv[0] not in module_info:
        print('USAGE: HyperfineSPAM [module] -h \n', file=sys.stderr)
        print('Select one of the following modules:\n', file=sys.stderr)
        for f in module_info:
            print('{0}: {1}'.format(f, module_info[f][0]), file=sys.stderr)
        return ct.EXIT_SUCCESS if len(argv) == 0 else ct.EXIT_CONFIG_ERROR

    val.validate_python_version()

    module = argv[0]
    try:
        args, function = module_info[module][1](argv[1:])
        resolve_configuration(args)
    except SystemExit as error:
        return error.code if isinstance(error.code, int) else ct.EXIT_CONFIG_ERROR

    try:
        function(args)
    except (ValueError, RuntimeError, OSError) as error:
        print(f"\nError: {error}", file=sys.stderr)
        return ct.EXIT_RUNTIME_ERROR

    return ct.EXIT_SUCCESS


if __name__ == "__main__":

    sys.exit(main())
