"""Benchmark scenarios reproducing the sorting experiments"""

from .cells import CellKey, CellResult, cell_keys, cell_seed, run_cell
from .oracles import WORKED_ACCURACY_TABLE, WORKED_PURITY_TABLE, OracleCheck, run_oracle_checks
from .output import write_results
from .runner import (
    ExperimentRunner, ResultTable, run_adapt_scenario, run_kmeans_scenario, run_maa_scenario,
    run_mismatch_scenario, run_nd_scenario, run_op_count_scenario, run_scenario
)
from .scenarios import DendriteParams, ExperimentSpec, HyperparameterTable, build_spec

__all__ = [
    'CellKey', 'CellResult', 'cell_keys', 'cell_seed', 'run_cell',
    'WORKED_ACCURACY_TABLE', 'WORKED_PURITY_TABLE', 'OracleCheck', 'run_oracle_checks',
    'write_results',
    'ExperimentRunner', 'ResultTable', 'run_adapt_scenario', 'run_kmeans_scenario', 'run_maa_scenario',
    'run_mismatch_scenario', 'run_nd_scenario', 'run_op_count_scenario', 'run_scenario',
    'DendriteParams', 'ExperimentSpec', 'HyperparameterTable', 'build_spec',
]
