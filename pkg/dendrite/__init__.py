"""Neuromorphic dendrite online clustering"""

from .core import Dendrite, DendriteConfig, FeatureArray, InferenceResult, init_templates
from .counters import AccountingMode, OpCounters, OpCounts, count_ops, formula_counts
from .snapshot import load_snapshot, save_snapshot
from .streaming import StreamingSorter

__all__ = [
    'Dendrite', 'DendriteConfig', 'FeatureArray', 'InferenceResult', 'init_templates',
    'AccountingMode', 'OpCounters', 'OpCounts', 'count_ops', 'formula_counts',
    'load_snapshot', 'save_snapshot', 'StreamingSorter',
]
