#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------

This module contains default values for HyperfineSPAM's
parameters and the validation table used for configuration files.

Code documentation
------------------
"""

# GitHub repository and contacts
repository = 'https://github.com/hyperfine-spam/HyperfineSPAM'
contacts = 'hyperfine-spam@users.noreply.github.com'

# minimum Python version
MIN_PYTHON = [(3, 8, 0), '3.8.0']

# exit codes
EXIT_SUCCESS = 0
EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_ERROR = 3

# species data file
SPECIES_FILE_VERSION = 1
SPECIES_FIELDS = ['name', 'nuclear_spin', 'linewidth_hz', 'hf_s_hz', 'hf_p_hz',
                  'eta_up', 'eta_cross', 'eta_flush', 'd52_lifetime_s',
                  'deshelve_branch_f1', 'manifolds']
DEFAULT_SPECIES = '137Ba+'

# angular momentum of each fine-structure manifold, in units of 1/2
MANIFOLD_TWO_J = {'S12': 1, 'P12': 1, 'P32': 3, 'D32': 3, 'D52': 5}

# rate model
DEFAULT_SCATTER_FRACTION = 1e-3
MAX_SCATTER_FRACTION = 0.1
STEADY_STATE_RTOL = 1e-6
TIME_STEP_FRACTION = 1e-2

# pulse durations (us), carried as metadata only
POLARIZATION_DURATION_US = 40.0
FLUSH_DURATION_US = 1.0
MICROWAVE_PI_DURATION_US = 25.0
SHELVE_PI_DURATIONS_US = (45.0, 55.0)
DESHELVE_DURATION_US = 4.0
TRANSFER_PI_DURATION_US = 50.0

# state preparation defaults
PROTOCOLS = ['maop', 'nbop', 'polarization']
DEFAULT_PROTOCOL = 'nbop'
DEFAULT_CYCLES = 35
DEFAULT_FLUSH_CYCLES = 30
POLARIZATION_RESIDUAL = 7e-3
FLUSH_LEAK = 1e-6
MICROWAVE_INFIDELITY = 0.0
SHELVE_INFIDELITY = 0.0
SHELVE_QUBIT_LEAK = 0.0
TRANSFER_INFIDELITY = 5.4e-5
DESHELVE_BRANCH_F1 = 0.738

# detection defaults
N_SEGMENTS = 10
SEGMENT_US = 35.0
BRIGHT_COUNTS_PER_SEGMENT = 10.0
DARK_COUNTS_PER_SEGMENT = 0.04
D52_LIFETIME_S = 30.1
BAYES_CONFIDENCE = 1e-6
LIKELIHOOD_FLOOR = 1e-300

# cabinet shelving defaults
SHELVING_FIDELITIES = (0.99, 0.99, 0.99)
SHELVING_DURATIONS_US = (165.0, 45.0, 55.0)

# correlated error bursts
BURST_RATE_PER_TRIAL = 0.0
BURST_LENGTH_RANGE = (20, 30)
BURST_COUNTS_PER_SEGMENT = 5.0

# simulation
DEFAULT_SEED = 1
DEFAULT_TRIALS = 1000000
BLOCK_SIZE = 50000
BURST_STREAM = 7919

# output labels
PREPARED_ZERO = 'PreparedZero'
PREPARED_ONE = 'PreparedOne'
BRIGHT = 'Bright'
DARK = 'Dark'

# configuration file layout: section -> keys
CONFIG_SECTIONS = {'run': ['species', 'seed', 'trials'],
                   'prep': ['protocol', 'cycles', 'flush_cycles',
                            'polarization_residual', 'flush_leak',
                            'microwave_infidelity', 'shelve_infidelity',
                            'shelve_qubit_leak', 'transfer_infidelity',
                            'deshelve_marching', 'ideal'],
                   'detection': ['n_segments', 'segment_us',
                                 'bright_rate_per_us', 'dark_rate_per_us',
                                 'd52_lifetime_s', 'bayes_confidence',
                                 'threshold_counts', 'real_time'],
                   'shelving': ['pulse_fidelities', 'pulse_durations_us',
                                'include_first_pulse'],
                   'bursts': ['burst_rate_per_trial', 'burst_length_min',
                              'burst_length_max', 'burst_count_rate']}

# validation table: [message, [type, minimum, maximum, path, allowed values]]
PROBABILITY = [float, 0.0, 1.0, None, None]
CONFIG_ERRORS = {'run.species':
                     ['run.species: must be the name of a known species.',
                      [str, None, None, None, None]],
                 'run.seed':
                     ['run.seed: must be int greater than or equal to 0.',
                      [int, 0, None, None, None]],
                 'run.trials':
                     ['run.trials: must be int greater than 0.',
                      [int, 1, None, None, None]],
                 'prep.protocol':
                     ['prep.protocol: one of the following: maop,nbop,polarization',
                      [str, None, None, None, PROTOCOLS]],
                 'prep.cycles':
                     ['prep.cycles: must be int greater than or equal to 0.',
                      [int, 0, None, None, None]],
                 'prep.flush_cycles':
                     ['prep.flush_cycles: must be int greater than or equal to 0.',
                      [int, 0, None, None, None]],
                 'prep.polarization_residual':
                     ['prep.polarization_residual: must be float between 0.0 and 1.0.',
                      PROBABILITY],
                 'prep.flush_leak':
                     ['prep.flush_leak: must be float between 0.0 and 1.0.',
                      PROBABILITY],
                 'prep.microwave_infidelity':
                     ['prep.microwave_infidelity: must be float between 0.0 and 1.0.',
                      PROBABILITY],
                 'prep.shelve_infidelity':
                     ['prep.shelve_infidelity: must be float between 0.0 and 1.0.',
                      PROBABILITY],
                 'prep.shelve_qubit_leak':
                     ['prep.shelve_qubit_leak: must be float between 0.0 and 1.0.',
                      PROBABILITY],
                 'prep.transfer_infidelity':
                     ['prep.transfer_infidelity: must be float between 0.0 and 1.0.',
                      PROBABILITY],
                 'prep.deshelve_marching':
                     ['prep.deshelve_marching: must be True or False.',
                      [bool, None, None, None, None]],
                 'prep.ideal':
                     ['prep.ideal: must be True or False.',
                      [bool, None, None, None, None]],
                 'detection.n_segments':
                     ['detection.n_segments: must be int greater than 0.',
                      [int, 1, None, None, None]],
                 'detection.segment_us':
                     ['detection.segment_us: must be float greater than 0.',
                      [float, 0.0, None, None, None]],
                 'detection.bright_rate_per_us':
                     ['detection.bright_rate_per_us: must be float greater than or equal to 0.',
                      [float, 0.0, None, None, None]],
                 'detection.dark_rate_per_us':
                     ['detection.dark_rate_per_us: must be float greater than or equal to 0.',
                      [float, 0.0, None, None, None]],
                 'detection.d52_lifetime_s':
                     ['detection.d52_lifetime_s: must be float greater than 0 (inf allowed).',
                      [float, 0.0, None, None, None]],
                 'detection.bayes_confidence':
                     ['detection.bayes_confidence: must be float between 0.0 and 1.0.',
                      PROBABILITY],
                 'detection.threshold_counts':
                     ['detection.threshold_counts: must be int >= 0, or None.',
                      [int, 0, None, None, None]],
                 'detection.real_time':
                     ['detection.real_time: must be True or False.',
                      [bool, None, None, None, None]],
                 'shelving.pulse_fidelities':
                     ['shelving.pulse_fidelities: comma-separated floats between 0.0 and 1.0.',
                      [float, 0.0, 1.0, None, None]],
                 'shelving.pulse_durations_us':
                     ['shelving.pulse_durations_us: comma-separated floats greater than 0.',
                      [float, 0.0, None, None, None]],
                 'shelving.include_first_pulse':
                     ['shelving.include_first_pulse: must be True or False.',
                      [bool, None, None, None, None]],
                 'bursts.burst_rate_per_trial':
                     ['bursts.burst_rate_per_trial: must be float between 0.0 and 1.0.',
                      PROBABILITY],
                 'bursts.burst_length_min':
                     ['bursts.burst_length_min: must be int greater than 0.',
                      [int, 1, None, None, None]],
                 'bursts.burst_length_max':
                     ['bursts.burst_length_max: must be int greater than 0.',
                      [int, 1, None, None, None]],
                 'bursts.burst_count_rate':
                     ['bursts.burst_count_rate: must be float greater than or equal to 0.',
                      [float, 0.0, None, None, None]]}

# keys holding comma separated lists
LIST_KEYS = ['shelving.pulse_fidelities', 'shelving.pulse_durations_us']

# keys that accept None
NULLABLE_KEYS = ['detection.threshold_counts']
