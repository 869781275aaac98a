import csv
import os
from pathlib import Path

import numpy as np
import pytest

from diabrisk.dataset import CANONICAL_COLUMNS, load_csv

REPO_ROOT = Path(__file__).resolve().parents[1]

# The real 253,680-row extract is large and public; it is looked up rather
# than bundled. Dataset-backed tests skip when it is absent.
DATA_ENV = "BRFSS2015_CSV"
DEFAULT_DATA = REPO_ROOT / "data" / "diabetes_012_health_indicators_BRFSS2015.csv"


def brfss_path():
    path = os.environ.get(DATA_ENV, str(DEFAULT_DATA))
    return path if os.path.exists(path) else None


@pytest.fixture(scope="session")
def brfss_table():
    path = brfss_path()
    if path is None:
        pytest.skip(
            f"BRFSS-2015 indicators CSV not found (set ${DATA_ENV} or place it "
            f"at {DEFAULT_DATA})"
        )
    return load_csv(path)


def write_rows(path, rows, header=None):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header or CANONICAL_COLUMNS)
        writer.writerows(rows)
    return str(path)


def synthetic_rows(n, seed=0, diabetes_rate=0.25):
    """Plausible 22-column survey rows where the target actually depends on
    a few features, so models have signal to find."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        highbp = rng.integers(0, 2)
        highchol = rng.integers(0, 2)
        bmi = int(rng.integers(16, 50))
        income = int(rng.integers(1, 9))
        genhlth = int(rng.integers(1, 6))
        risk = (
            0.9 * highbp + 0.7 * highchol + 0.05 * (bmi - 25)
            - 0.25 * income + 0.3 * genhlth + rng.normal(0, 1.2)
        )
        target = 0
        if rng.random() < diabetes_rate * 4 * _sig(risk - 1.2):
            target = 2 if rng.random() < 0.85 else 1
        row = [
            target, highbp, highchol, rng.integers(0, 2), bmi,
            rng.integers(0, 2), rng.integers(0, 2), rng.integers(0, 2),
            rng.integers(0, 2), rng.integers(0, 2), rng.integers(0, 2),
            rng.integers(0, 2), rng.integers(0, 2), rng.integers(0, 2),
            genhlth, int(rng.integers(0, 31)), int(rng.integers(0, 31)),
            rng.integers(0, 2), rng.integers(0, 2), int(rng.integers(1, 14)),
            int(rng.integers(1, 7)), income,
        ]
        rows.append([int(v) for v in row])
    return rows


def _sig(t):
    return 1.0 / (1.0 + np.exp(-t))


@pytest.fixture
def synthetic_csv(tmp_path):
    return write_rows(tmp_path / "synthetic.csv", synthetic_rows(600, seed=7))
