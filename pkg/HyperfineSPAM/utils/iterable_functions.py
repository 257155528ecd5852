#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
This module contains functions to split work into fixed-size pieces.

Code documentation
------------------
"""


def divide_into_blocks(total, block_size):
    """
    Divides a range of items into consecutive blocks of fixed size.

    Parameters
    ----------
    total : int
        Number of items.
    block_size : int
        Items per block; the last block may be shorter.

    Returns
    -------
    blocks : list of tuple
        (block index, first item, number of items) for every block.
    """
    if block_size < 1:
        raise ValueError("block_size must be >= 1.")

    return [(index, first, min(block_size, total - first))
            for index, first in enumerate(range(0, total, block_size))]

