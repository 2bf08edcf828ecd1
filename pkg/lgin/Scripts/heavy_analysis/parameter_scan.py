"""
Parameter Scans - randomized and grid sweeps over the six parameters

Each draw is analyzed independently: equilibria and their labels, the two
uniqueness conditions and the corner-envelope certificate. Draws are fixed
up front in the parent process, so results depend only on the seed and the
grid, never on the number of worker processes.

Strategy:
1. Build the list of ModelParams (log-uniform draws or a grid product)
2. Analyze each one (optionally in a process pool, order preserved)
3. Collect ScanRecords into a DataFrame with a fixed column order
"""

from typing import Dict, Any, List, Iterable, Sequence, Tuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import itertools
import logging
import math

import numpy as np
import pandas as pd

from lgin.Scripts.common import LGINError, ValidationError
from lgin.Scripts.dynamics import gas_certificate
from lgin.Scripts.equilibria import find_equilibria, uniqueness_sufficient
from lgin.Scripts.model import PARAM_NAMES, ModelParams

logger = logging.getLogger(__name__)

SCAN_COLUMNS = list(PARAM_NAMES) + ["count", "labels", "condA", "condB", "gas"]
DEFAULT_RANGE = (1e-2, 1e2)


@dataclass(frozen=True)
class ScanRecord:
    params: ModelParams
    count: int
    labels: Tuple[str, ...]
    condA: bool
    condB: bool
    gas: bool

    def to_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = self.params.to_dict()
        row.update({
            "count": self.count,
            "labels": ";".join(self.labels),
            "condA": self.condA,
            "condB": self.condB,
            "gas": self.gas,
        })
        return row


# =============================================================================
# PARAMETER SOURCES
# =============================================================================

def draw_params(n: int, seed: int, lo: float = DEFAULT_RANGE[0], hi: float = DEFAULT_RANGE[1]) -> List[ModelParams]:
    # log-uniform on [lo, hi]^6, one row of the generator per draw
    if n < 1:
        raise ValidationError("draws", "draws must be >= 1")
    if not 0 < lo < hi:
        raise ValidationError("range", f"need 0 < lo < hi, got [{lo}, {hi}]")
    rng = np.random.default_rng(seed)
    samples = np.exp(rng.uniform(math.log(lo), math.log(hi), size=(n, len(PARAM_NAMES))))
    return [ModelParams(*map(float, row)) for row in samples]


def grid_params(base: ModelParams, axes: Sequence[Tuple[str, Sequence[float]]]) -> List[ModelParams]:
    # cartesian product of the named axes, other parameters from base
    names = [name for name, _ in axes]
    for name in names:
        if name not in PARAM_NAMES:
            raise ValidationError(name, f"unknown parameter '{name}' in grid")
    return [base.replace(**dict(zip(names, combo))) for combo in itertools.product(*(vals for _, vals in axes))]


# =============================================================================
# ANALYSIS
# =============================================================================

def analyze_one(p: ModelParams) -> ScanRecord:
    uniq = uniqueness_sufficient(p)
    try:
        eqs = find_equilibria(p)
        count, labels = eqs.count, tuple(eqs.labels)
    except LGINError as e:
        # recorded with count 0 so the row stays visible in the output
        logger.warning("analysis failed for %s: %s", p, e)
        count, labels = 0, ()
    return ScanRecord(params=p, count=count, labels=labels, condA=uniq.condA, condB=uniq.condB,
                      gas=gas_certificate(p))


def run_scan(params: Iterable[ModelParams], jobs: int = 1) -> List[ScanRecord]:
    params = list(params)
    if jobs <= 1 or len(params) <= 1:
        return [analyze_one(p) for p in params]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, len(params) // (jobs * 8))
        return list(pool.map(analyze_one, params, chunksize=chunk))


def records_to_frame(records: Sequence[ScanRecord]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in records], columns=SCAN_COLUMNS)


def scan_violations(records: Sequence[ScanRecord]) -> List[str]:
    """
    Rows that contradict the structural results:
    count outside 1..3, a uniqueness condition with more than one
    equilibrium, or a label pattern other than the allowed ones.
    """
    out = []
    for i, r in enumerate(records):
        if r.count not in (1, 2, 3):
            out.append(f"row {i}: count {r.count}")
        elif (r.condA or r.condB) and r.count != 1:
            out.append(f"row {i}: condA={r.condA} condB={r.condB} but count {r.count}")
        elif r.count == 1 and r.labels != ("LAS",):
            out.append(f"row {i}: single equilibrium labelled {list(r.labels)}")
        elif r.count == 3 and r.labels != ("LAS", "Saddle", "LAS"):
            out.append(f"row {i}: three equilibria labelled {list(r.labels)}")
    return out


def count_histogram(records: Sequence[ScanRecord]) -> Dict[int, int]:
    hist: Dict[int, int] = {}
    for r in records:
        hist[r.count] = hist.get(r.count, 0) + 1
    return hist
