#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module contains functions to create output directories and write
text outputs, either to a file or to the standard output.

Code documentation
------------------
"""

import os
import sys


def create_directory(dir_path):
    """
    Creates directory based on input dir path.

    Parameters
    ----------
    dir_path : str
        Directory path; parents are created when missing.

    Returns
    -------
    created : bool
        True if the directory did not exist before.
    """
    if os.path.isdir(dir_path):
        return False

    os.makedirs(dir_path)

    return True


def write_text(text, file_path=None):
    """Write text to file_path, or to stdout when file_path is None."""

    if file_path is None:
        sys.stdout.write(text)
        return

    with open(file_path, 'w', encoding='utf-8') as outfile:
        outfile.write(text)


def status(message):
    """Print a status message to stderr, keeping stdout for data."""

    print(message, file=sys.stderr)
