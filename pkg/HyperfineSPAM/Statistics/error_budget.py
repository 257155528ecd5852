#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Purpose
-------
SPAM error budget: predicted error sources per prepared state, the
measured subtotals and the leftover that bounds state preparation.

Components are read from a tab-separated file with the columns
source, state, value, uncertainty, kind, bound and, optionally, errors and
trials. Measured rows with errors and trials get their value and
uncertainty recomputed from the counts with a Wilson interval.

Code documentation
------------------
"""

import math
from dataclasses import dataclass
from typing import Optional

import pandas as pd

try:
    from HyperfineSPAM.Statistics import intervals as iv
except ModuleNotFoundError:
    from Statistics import intervals as iv


STATES = ['Zero', 'One']
KINDS = ['Predicted', 'Measured']
REQUIRED_COLUMNS = ['source', 'state', 'value', 'uncertainty', 'kind', 'bound']
SCALE = 1e-5


@dataclass(frozen=True)
class BudgetEntry:
    """One budget row. bound marks an upper bound rather than an estimate."""

    source: str
    state: str
    value: float
    uncertainty: float = 0.0
    kind: str = 'Predicted'
    bound: bool = False
    errors: Optional[int] = None
    trials: Optional[int] = None

    def __post_init__(self):
        if self.state not in STATES:
            raise ValueError(f"{self.source}: state must be one of {STATES}.")
        if self.kind not in KINDS:
            raise ValueError(f"{self.source}: kind must be one of {KINDS}.")
        if self.value < 0 or self.uncertainty < 0:
            raise ValueError(f"{self.source}: value and uncertainty must be >= 0.")


@dataclass
class ErrorBudget:
    entries: list

    def predicted(self, state):
        return [e for e in self.entries if e.kind == 'Predicted' and e.state == state]

    def predicted_subtotal(self, state):
        return math.fsum(e.value for e in self.predicted(state))

    def measured(self, state):
        """Measured subtotal entry of a state, None when absent."""
        rows = [e for e in self.entries if e.kind == 'Measured' and e.state == state]
        return rows[-1] if rows else None

    def leftover(self, state):
        """
        Measured subtotal minus the predicted estimates that are not bounds.

        None when the state has no measured subtotal or no bound entry.
        """
        measured = self.measured(state)
        if measured is None or not any(e.bound for e in self.predicted(state)):
            return None

        return measured.value - math.fsum(e.value for e in self.predicted(state)
                                          if not e.bound)

    def inconsistent_states(self):
        """States whose leftover is negative."""
        return [s for s in STATES
                if self.leftover(s) is not None and self.leftover(s) < 0]

    def total(self):
        """Mean of the measured subtotals and its propagated uncertainty."""
        measured = [self.measured(s) for s in STATES]
        if any(m is None for m in measured):
            return None
        value = math.fsum(m.value for m in measured) / len(measured)
        uncertainty = math.sqrt(math.fsum(m.uncertainty ** 2 for m in measured)) / len(measured)

        return value, uncertainty


def recompute_measured(entry, z=1.0):
    """Replace value and uncertainty of a measured row that carries counts."""

    if entry.kind != 'Measured' or entry.errors is None or entry.trials is None:
        return entry
    low, high = iv.wilson_interval(entry.errors, entry.trials, z)

    return BudgetEntry(entry.source, entry.state, entry.errors / entry.trials,
                       (high - low) / 2, entry.kind, entry.bound,
                       entry.errors, entry.trials)


def build_budget(components, z=1.0):
    """
    Assemble an error budget.

    Parameters
    ----------
    components : iterable of BudgetEntry
        Predicted and measured rows.
    z : float
        Wilson quantile used for measured rows with raw counts.

    Returns
    -------
    budget : ErrorBudget
    """
    return ErrorBudget([recompute_measured(e, z) for e in components])


def _parse_bool(value):
    text = str(value).strip()
    if text in ['True', 'true', '1']:
        return True
    if text in ['False', 'false', '0', '', 'nan', 'None']:
        return False
    raise ValueError(f"bound must be True or False, got '{value}'.")


def _optional_int(value):
    if pd.isna(value) or str(value).strip() in ['', 'None']:
        return None
    return int(value)


def read_components(file_path):
    """Read budget components from a TSV file."""

    table = pd.read_csv(file_path, sep='\t', comment='#', dtype=str,
                        keep_default_na=False)
    missing = [c for c in REQUIRED_COLUMNS if c not in table.columns]
    if missing:
        raise ValueError(f"{file_path}: missing columns {missing}.")

    entries = []
    for row in table.to_dict('records'):
        entries.append(BudgetEntry(source=row['source'],
                                   state=row['state'],
                                   value=float(row['value']),
                                   uncertainty=float(row['uncertainty'] or 0.0),
                                   kind=row['kind'],
                                   bound=_parse_bool(row['bound']),
                                   errors=_optional_int(row.get('errors', '')),
                                   trials=_optional_int(row.get('trials', ''))))

    return entries


def _cell(entries):
    if not entries:
        return '---'
    entry = entries[0]
    text = f"{entry.value / SCALE:.1f}"
    if entry.bound:
        text = '<' + text
    if entry.uncertainty > 0:
        text += f" ± {entry.uncertainty / SCALE:.1f}"

    return text


def budget_frame(budget):
    """
    Budget in table layout, one row per source plus the summary rows.

    Values are in units of 1e-5; missing cells are NaN.
    """
    sources = []
    for entry in budget.entries:
        if entry.kind == 'Predicted' and entry.source not in sources:
            sources.append(entry.source)

    rows = []
    for source in sources:
        row = {'source': source, 'kind': 'Predicted'}
        for state in STATES:
            match = [e for e in budget.predicted(state) if e.source == source]
            key = state.lower()
            row[key] = match[0].value / SCALE if match else float('nan')
            row[f'{key}_uncertainty'] = match[0].uncertainty / SCALE if match else float('nan')
            row[f'{key}_bound'] = match[0].bound if match else False
        rows.append(row)

    predicted = {'source': 'Subtotal (predicted)', 'kind': 'Predicted'}
    measured = {'source': 'Subtotal (measured)', 'kind': 'Measured'}
    leftover = {'source': 'Leftover (preparation bound)', 'kind': 'Derived'}
    for state in STATES:
        key = state.lower()
        predicted[key] = budget.predicted_subtotal(state) / SCALE
        entry = budget.measured(state)
        measured[key] = entry.value / SCALE if entry else float('nan')
        measured[f'{key}_uncertainty'] = entry.uncertainty / SCALE if entry else float('nan')
        value = budget.leftover(state)
        leftover[key] = value / SCALE if value is not None else float('nan')
    rows.extend([predicted, measured, leftover])

    total = budget.total()
    if total is not None:
        rows.append({'source': 'Total (measured)', 'kind': 'Measured',
                     'zero': total[0] / SCALE, 'zero_uncertainty': total[1] / SCALE,
                     'one': total[0] / SCALE, 'one_uncertainty': total[1] / SCALE})

    columns = ['source', 'kind', 'zero', 'zero_uncertainty', 'zero_bound',
               'one', 'one_uncertainty', 'one_bound']
    frame = pd.DataFrame(rows).reindex(columns=columns)
    for column in ['zero_bound', 'one_bound']:
        frame[column] = frame[column].eq(True)

    return frame


def render_text(budget):
    """Aligned text table in units of 1e-5."""

    lines = [('Error source', '|0> state', '|1> state')]
    sources = []
    for entry in budget.entries:
        if entry.kind == 'Predicted' and entry.source not in sources:
            sources.append(entry.source)
    for source in sources:
        lines.append((source,
                      _cell([e for e in budget.predicted('Zero') if e.source == source]),
                      _cell([e for e in budget.predicted('One') if e.source == source])))

    lines.append(('Subtotal (predicted)',
                  f"{budget.predicted_subtotal('Zero') / SCALE:.1f}",
                  f"{budget.predicted_subtotal('One') / SCALE:.1f}"))
    lines.append(('Subtotal (measured)',
                  _cell([budget.measured('Zero')] if budget.measured('Zero') else []),
                  _cell([budget.measured('One')] if budget.measured('One') else [])))
    leftover = [budget.leftover(s) for s in STATES]
    lines.append(('Leftover (preparation bound)',
                  *['---' if v is None else f"{v / SCALE:.1f}" for v in leftover]))

    total = budget.total()
    if total is not None:
        lines.append(('Total (measured)', f"{total[0] / SCALE:.2f} ± {total[1] / SCALE:.2f}", ''))

    widths = [max(len(line[i]) for line in lines) for i in range(3)]
    text = [f"{a:<{widths[0]}}  {b:>{widths[1]}}  {c:>{widths[2]}}".rstrip()
            for a, b, c in lines]
    text.insert(1, '-' * (sum(widths) + 4))
    text.append('(values x 1e-5)')
    for state in budget.inconsistent_states():
        text.append(f"WARNING: negative leftover for |{STATES.index(state)}>; "
                    "the components are inconsistent.")

    return '\n'.join(text) + '\n'
