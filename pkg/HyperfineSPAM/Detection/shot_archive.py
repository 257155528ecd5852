#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
Shot archives: one JSON object per line with the shot index, truth label,
the list of segment counts and the decay time (null when the ion did not
decay). In memory an archive is a DataFrame with one c<i> column per
segment.

Code documentation
------------------
"""

import numpy as np
import pandas as pd

try:
    from HyperfineSPAM.utils import constants as ct
    from HyperfineSPAM.Detection import shot_simulation as ss
except ModuleNotFoundError:
    from utils import constants as ct
    from Detection import shot_simulation as ss


ARCHIVE_COLUMNS = ['shot', 'truth', 'counts', 'decay_time_us']


def count_columns(archive):
    """Segment count columns of an archive frame, in segment order."""

    columns = [c for c in archive.columns if c.startswith('c') and c[1:].isdigit()]

    return sorted(columns, key=lambda c: int(c[1:]))


def counts_matrix(archive):
    return archive[count_columns(archive)].to_numpy(dtype=np.int64)


def write_archive(archive, file_path):
    """
    Write an archive frame as JSON lines.

    Parameters
    ----------
    archive : pandas.DataFrame
        Frame with shot, truth, decay_time_us and count columns.
    file_path : str
        Output path.
    """
    out = archive[['shot', 'truth']].copy()
    out['counts'] = counts_matrix(archive).tolist()
    out['decay_time_us'] = archive['decay_time_us']
    out.to_json(file_path, orient='records', lines=True, double_precision=15)


def read_archive(file_path):
    """
    Read a JSON-lines archive back into a frame.

    Raises
    ------
    ValueError
        If a field is missing or the records have different segment counts.
    """
    records = pd.read_json(file_path, orient='records', lines=True,
                           dtype={'shot': 'int64', 'truth': str},
                           convert_dates=False, keep_default_dates=False)
    missing = [c for c in ARCHIVE_COLUMNS if c not in records.columns]
    if missing:
        raise ValueError(f"{file_path}: archive records miss fields {missing}.")

    lengths = records['counts'].map(len)
    if lengths.nunique() > 1:
        raise ValueError(f"{file_path}: records have different numbers of segments.")

    unknown = set(records['truth']) - {ct.PREPARED_ZERO, ct.PREPARED_ONE}
    if unknown:
        raise ValueError(f"{file_path}: unknown truth labels {sorted(unknown)}.")

    n_segments = int(lengths.iloc[0]) if len(records) else 0
    counts = pd.DataFrame(records['counts'].tolist(),
                          columns=ss.count_columns(n_segments),
                          index=records.index)
    archive = pd.concat([records[['shot', 'truth']],
                         records['decay_time_us'].astype(float), counts], axis=1)

    return archive


def records_from_archive(archive):
    """List of ShotRecord objects, one per row."""

    counts = counts_matrix(archive)
    decays = archive['decay_time_us'].to_numpy(dtype=float)

    return [ss.ShotRecord(tuple(row), truth, None if np.isnan(decay) else float(decay))
            for row, truth, decay in zip(counts, archive['truth'], decays)]


def archive_from_records(records):
    """Archive frame from ShotRecord objects, numbered from 0."""

    n_segments = len(records[0].segment_counts) if records else 0
    archive = pd.DataFrame([r.segment_counts for r in records],
                           columns=ss.count_columns(n_segments))
    archive.insert(0, 'shot', np.arange(len(records)))
    archive.insert(1, 'truth', [r.truth_state for r in records])
    archive.insert(2, 'decay_time_us',
                   [np.nan if r.truth_decay_time_us is None else r.truth_decay_time_us
                    for r in records])

    return archive


def histogram_frame(archive):
    """
    Total-count histogram per prepared state.

    Returns
    -------
    histogram : pandas.DataFrame
        Columns counts, PreparedZero, PreparedOne; one row per count value
        from 0 to the largest observed total.
    """
    totals = counts_matrix(archive).sum(axis=1)
    if len(totals) == 0:
        return pd.DataFrame({'counts': [0], ct.PREPARED_ZERO: [0], ct.PREPARED_ONE: [0]})
    table = pd.crosstab(totals, archive['truth'].to_numpy())
    top = int(totals.max())
    table = table.reindex(index=range(top + 1),
                          columns=[ct.PREPARED_ZERO, ct.PREPARED_ONE],
                          fill_value=0)
    table.index.name = 'counts'

    return table.reset_index().rename_axis(None, axis=1)
