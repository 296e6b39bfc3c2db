"""Run configuration tables: scenarios, CSV schemas, config-file keys, errors"""

# Scenario registry: id -> descriptor (runner kind, plotted quantity, description)
SCENARIOS = {
    "kmeans-ideal": {
        "kind": "kmeans",
        "plot": "accuracy vs dev, one curve per neuron count",
        "description": "Float k-means, centroids initialized at the true base neurons",
    },
    "kmeans-realistic": {
        "kind": "kmeans",
        "plot": "accuracy and iterations vs dev, one curve per neuron count",
        "description": "Float k-means, neuron-like random initial centroids; iterations to convergence",
    },
    "kmeans-discretized": {
        "kind": "kmeans",
        "plot": "accuracy vs dev, one curve per neuron count",
        "description": "k-means on normalized features discretized to 1..32",
    },
    "nd-baseline": {
        "kind": "nd",
        "plot": "accuracy vs dev, one curve per neuron count",
        "description": "Dendrite with the default hyperparameter table and search 1/16",
    },
    "nd-no-search": {
        "kind": "nd",
        "plot": "accuracy vs dev, one curve per neuron count",
        "description": "Dendrite with search turned off",
    },
    "nd-prob-search": {
        "kind": "nd",
        "plot": "accuracy vs dev, one curve per neuron count",
        "description": "Dendrite with search increment 1 applied with probability 1/16",
    },
    "nd-adapt": {
        "kind": "adapt",
        "plot": "windowed accuracy vs step",
        "description": "6 neurons, base neurons switched at step 5000, accuracy every 100 steps",
    },
    "zipf-nd": {
        "kind": "nd",
        "plot": "accuracy vs dev, one curve per neuron count",
        "description": "Dendrite with zipf spike rates",
    },
    "zipf-kmeans": {
        "kind": "kmeans",
        "plot": "accuracy vs dev, one curve per neuron count",
        "description": "Realistic k-means with zipf spike rates",
    },
    "maa-count": {
        "kind": "maa",
        "plot": "accurate neurons vs dev, one curve per neuron count",
        "description": "Accurate-neuron counts at maa 0.8 and 0.9 with zipf rates",
    },
    "cid-mismatch": {
        "kind": "mismatch",
        "plot": "accuracy vs dev, one curve per CId count",
        "description": "8 zipf neurons, CId count 6..12, sorting accuracy",
    },
    "cid-merge-purity": {
        "kind": "mismatch",
        "plot": "merged purity vs dev, one curve per CId count",
        "description": "8 zipf neurons, CId count 6..12, optimally merged purity",
    },
    "op-count": {
        "kind": "ops",
        "plot": "additions per spike by accounting mode",
        "description": "Additions per feature vector: formula, bypass, bypass + probabilistic search",
    },
}

# CSV schemas: header row is mandatory and column order is stable
PER_SEED_COLUMNS = {
    "nd": ["scenario", "neurons", "cids", "dev", "seed", "accuracy", "purity"],
    "kmeans": ["scenario", "neurons", "cids", "dev", "seed", "accuracy", "purity", "iterations", "convergence"],
    "maa": ["scenario", "neurons", "cids", "dev", "seed", "accuracy", "accurate_0.8", "accurate_0.9"],
    "mismatch": ["scenario", "neurons", "cids", "dev", "seed", "accuracy", "purity"],
    "adapt": ["scenario", "neurons", "cids", "dev", "window", "step", "seed", "accuracy"],
    "ops": ["scenario", "neurons", "cids", "dev", "mode", "seed", "inference", "capture", "backoff", "search", "total"],
}

# Plot data: (series, x, y) columns of each plot; series None for a single curve
PLOT_COLUMNS = {
    "kmeans-ideal": ("neurons", "dev", "accuracy"),
    "kmeans-realistic": ("neurons", "dev", "accuracy"),
    "kmeans-discretized": ("neurons", "dev", "accuracy"),
    "nd-baseline": ("neurons", "dev", "accuracy"),
    "nd-no-search": ("neurons", "dev", "accuracy"),
    "nd-prob-search": ("neurons", "dev", "accuracy"),
    "nd-adapt": (None, "step", "accuracy"),
    "zipf-nd": ("neurons", "dev", "accuracy"),
    "zipf-kmeans": ("neurons", "dev", "accuracy"),
    "maa-count": ("neurons", "dev", "accurate_0.8"),
    "cid-mismatch": ("cids", "dev", "accuracy"),
    "cid-merge-purity": ("cids", "dev", "purity"),
    "op-count": (None, "mode", "total"),
}

STREAM_COLUMNS = ["step", "true_neuron", "f1", "f2", "f3", "f4", "f5", "f6",
                  "d1", "d2", "d3", "d4", "d5", "d6"]

# Flat key = value config file schema: key -> type name
CONFIG_KEYS = {
    "scenario": "str",
    "neurons": "int-list",
    "dev": "fraction-list",
    "seeds": "int",
    "seed": "int",
    "stream_length": "int",
    "warmup": "int",
    "base_dev": "float",
    "zipf": "float",
    "rate": "str",
    "p": "int-list",
    "capture": "int",
    "backoff": "int",
    "capture_small": "int",
    "backoff_small": "int",
    "capture_large": "int",
    "backoff_large": "int",
    "search": "fraction",
    "wmax": "int",
    "wbase": "int",
    "radius": "int",
    "prob_search": "bool",
    "switch_at": "int",
    "window": "int",
    "workers": "int",
    "out": "str",
}

# Output file names
RESULTS_FILE = "results.csv"
PER_SEED_FILE = "per_seed.csv"
PLOT_FILE = "plot.csv"
CONFIG_ECHO_FILE = "config.txt"
CELLS_DIR = "cells"  # per-cell artifacts, one stem per (neurons, cids, dev, seed)
TABLE_SUFFIX = "table.csv"
ASSIGNMENT_SUFFIX = "assignment.csv"
MODEL_SUFFIX = "kmeans.csv"

# Error messages
ERROR_MESSAGES = {
    "FEATURE_RANGE": "Feature value outside [1, n]",
    "FEATURE_LENGTH": "Feature vector length does not match m",
    "CID_RANGE": "CId outside [1, p]",
    "CENTROID_COUNT": "Centroid count does not match template count p",
    "NEGATIVE_DEV": "Deviation must not be negative",
    "ZERO_BASE_DEV": "Discretization needs a positive base deviation",
    "EMPTY_TRAINING": "k-means needs a nonempty training set",
    "NOT_FITTED": "k-means model has no centroids",
    "LENGTH_MISMATCH": "Label and CId sequences differ in length",
    "BAD_WINDOW": "Window must be at least one step",
    "BAD_MAA": "maa must lie in (0, 1]",
    "EMPTY_TABLE": "Contingency table has no spikes",
    "UNKNOWN_SCENARIO": "Unknown scenario",
    "UNKNOWN_MODE": "Unknown accounting mode",
    "NO_SCENARIO": "No scenario given",
    "NEEDS_FEATURES": "Bypass accounting needs a feature stream",
    "BAD_CONFIG_LINE": "Malformed config line",
    "UNKNOWN_CONFIG_KEY": "Unknown config key",
    "SNAPSHOT_VERSION": "Unsupported snapshot version",
}
