#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module contains helpers to build and write pandas DataFrames.

Code documentation
------------------
"""

import sys

import pandas as pd


def rows_to_df(rows):
    """DataFrame from a list of row dictionaries, columns in first-seen order."""

    return pd.DataFrame.from_records(rows)


def write_csv(frame, file_path=None, sep=','):
    """
    Write a DataFrame as CSV with full float precision.

    Parameters
    ----------
    frame : pandas.DataFrame
        Table to write.
    file_path : str, optional
        Output path; stdout when None.
    sep : str
        Field delimiter.
    """
    target = sys.stdout if file_path is None else file_path
    frame.to_csv(target, sep=sep, index=False, float_format='%.17g', lineterminator='\n')
