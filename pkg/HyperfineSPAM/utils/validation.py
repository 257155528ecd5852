#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module checks the Python version used to run HyperfineSPAM.

Code documentation
------------------
"""

import sys
import platform

try:
    from HyperfineSPAM.utils import constants as ct
except ModuleNotFoundError:
    from utils import constants as ct


def validate_python_version(minimum_version=ct.MIN_PYTHON):
    """
    Validate Python version used to run HyperfineSPAM.

    Parameters
    ----------
    minimum_version : list
        (MAJOR, MINOR, PATCH) tuple and its string form.

    Returns
    -------
    python_version : str
        Python version in format "MAJOR.MINOR.PATCH".

    Raises
    ------
    SystemExit
        If the Python version does not meet minimum requirements.
    """
    python_version = platform.python_version()
    numbers = tuple(int(''.join(c for c in part if c.isdigit()) or 0)
                    for part in python_version.split('.'))

    if numbers < minimum_version[0]:
        print(f'Python version found: {python_version}', file=sys.stderr)
        print(f'Please use version Python >= {minimum_version[1]}', file=sys.stderr)
        sys.exit(ct.EXIT_RUNTIME_ERROR)

    return python_version
