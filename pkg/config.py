"""Configuration and constants for the dendrite spike sorter"""

# Feature space
FEATURE_COUNT = 6  # Six shape features per spike
FEATURE_VALUES = 32  # Discretized values 1..32

# Canonical spike shape: mean feature values
# (peak amplitude uV, trough amplitude uV, rise time ms, fall time ms,
#  repolarization time ms, after-hyperpolarization amplitude uV)
CANONICAL_MEANS = (80.0, 120.0, 0.25, 0.45, 0.8, 20.0)

# Synthetic benchmark
BASE_DEV = 0.375
DEV_DENOMINATOR = 16
DEV_GRID = tuple(k / DEV_DENOMINATOR for k in range(1, 9))  # 1/16 .. 8/16
SMALL_DEV_LIMIT = 4 / DEV_DENOMINATOR  # Small-deviation hyperparameter column up to here
NEURON_COUNTS = tuple(range(4, 13))
STREAM_LENGTH = 10000
WARMUP = 5000  # First half trains k-means / warms up the dendrite
SEEDS = 16
MASTER_SEED = 2024
ZIPF_EXPONENT = 1.0
NORMALIZE_SIGMAS = 3.0  # Discretization window is +/- 3 base sigmas

# Dendrite hyperparameters: small- and large-deviation columns
W_MAX = 32
W_BASE = 28
RADIUS = 3
SEARCH = 1 / 16
SEARCH_PROBABILITY = 1 / 16
CAPTURE_SMALL_DEV = 3
BACKOFF_SMALL_DEV = 2
CAPTURE_LARGE_DEV = 4
BACKOFF_LARGE_DEV = 1
MAX_SCALE = 1 << 10  # Largest fixed-point denominator accepted for search

# k-means baseline
MIN_CONVERGENCE = 0.99
MAX_ITERS = 100

# Adaptability
SWITCH_AT = 5000
ADAPT_NEURONS = 6
ADAPT_DEV = 2 / DEV_DENOMINATOR
WINDOW = 100

# Practical metrics
MAA_LEVELS = (0.8, 0.9)
MISMATCH_NEURONS = 8
MISMATCH_CIDS = tuple(range(6, 13))

# Snapshot format
SNAPSHOT_VERSION = 1
