"""Sorting evaluation metrics"""

from .metrics import (
    ContingencyTable, SortingResult, accurate_neuron_count, assigned_fraction, contingency_table,
    per_neuron_recall, purity, sorting_accuracy, windowed_accuracy,
    write_assignment_csv, write_table_csv
)

__all__ = [
    'ContingencyTable', 'SortingResult', 'accurate_neuron_count', 'assigned_fraction', 'contingency_table',
    'per_neuron_recall', 'purity', 'sorting_accuracy', 'windowed_accuracy',
    'write_assignment_csv', 'write_table_csv',
]
