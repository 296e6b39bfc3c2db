"""Built-in oracle checks with exactly known answers"""

from dataclasses import dataclass
from typing import List

import numpy as np

from dendrite import DendriteConfig, formula_counts
from evaluation import ContingencyTable, accurate_neuron_count, purity, sorting_accuracy

# Neuron x CId spike counts of the worked sorting-accuracy example (5000 spikes).
# The printed table assigns CId 3 to neurons 4 and 6 at once; neuron 6's 314
# spikes are placed under CId 4, the only column its 4120 total leaves free.
WORKED_ACCURACY_TABLE = np.array([
    [1180, 0, 1, 855, 0, 0],
    [0, 1012, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 696],
    [0, 4, 539, 0, 0, 0],
    [0, 0, 0, 0, 379, 0],
    [5, 0, 0, 314, 0, 14],
], dtype=np.int64)

# Worked purity example, as printed; column maxima are unaffected by the move above
WORKED_PURITY_TABLE = np.array([
    [1180, 0, 1, 855, 0, 0],
    [0, 1012, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 696],
    [0, 4, 539, 0, 0, 0],
    [0, 0, 0, 0, 379, 0],
    [5, 0, 314, 0, 0, 14],
], dtype=np.int64)


@dataclass(frozen=True)
class OracleCheck:
    name: str
    expected: object
    actual: object

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


def run_oracle_checks() -> List[OracleCheck]:
    table = ContingencyTable(WORKED_ACCURACY_TABLE)
    sorting = sorting_accuracy(table)
    ops = formula_counts(DendriteConfig(p=8, m=6, n=32, r=3))
    return [
        OracleCheck("worked table matched sum", 4120, sorting.matched),
        OracleCheck("worked table sorting accuracy", 0.824, sorting.accuracy),
        OracleCheck("worked table accurate neurons (maa 0.8)", 5, accurate_neuron_count(table, 0.8, sorting)),
        OracleCheck("worked table purity", 0.9322, purity(ContingencyTable(WORKED_PURITY_TABLE))),
        OracleCheck("op-count inference (p=8)", 328, ops.inference),
        OracleCheck("op-count capture", 42, ops.capture),
        OracleCheck("op-count backoff", 150, ops.backoff),
        OracleCheck("op-count search", 294, ops.search),
        OracleCheck("op-count total", 814, ops.total),
    ]
