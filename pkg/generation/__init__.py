"""Synthetic spike-shape generation modules"""

from .discretize import discretize, normalize
from .generator import (
    BaseNeuron, CanonicalShape, GeneratorConfig, LabeledStream, SpikeGenerator,
    gen_base_neurons, gen_initial_centroids, gen_stream, rate_probabilities, seed_streams
)
from .stream_io import read_stream_csv, write_stream_csv

__all__ = [
    'discretize', 'normalize',
    'BaseNeuron', 'CanonicalShape', 'GeneratorConfig', 'LabeledStream', 'SpikeGenerator',
    'gen_base_neurons', 'gen_initial_centroids', 'gen_stream', 'rate_probabilities', 'seed_streams',
    'read_stream_csv', 'write_stream_csv',
]
