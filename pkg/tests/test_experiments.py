from __future__ import annotations

import csv
import io

import pytest

from spast import experiments
from spast.experiments import BenchRow, ExperimentRow, to_csv


def test_zero_trials_gives_header_only():
    rows = experiments.experiment_1([20], 0, seed=0, pref_len=5)
    assert to_csv(rows, ExperimentRow) == "n1,pref_len,t_ds,t_dl,trials,admitted,proportion,mean_solve_s,seed\n"


def test_rows_are_deterministic():
    a = experiments.experiment_1([20, 30], 8, seed=5, pref_len=5)
    b = experiments.experiment_1([20, 30], 8, seed=5, pref_len=5)
    assert [(r.admitted, r.proportion) for r in a] == [(r.admitted, r.proportion) for r in b]


def test_subset_of_cells_reproduces_the_grid():
    grid = experiments.experiment_3([10], 6, seed=2, densities=[0.0, 0.3], pref_len=3)
    part = experiments.experiment_3([10], 6, seed=2, cells=[(0.3, 0.0)], pref_len=3)
    assert part[0].admitted == next(r for r in grid if (r.t_ds, r.t_dl) == (0.3, 0.0)).admitted
    assert len(grid) == 4


def test_experiment_2_grid():
    rows = experiments.experiment_2([20], [2, 4], 3, seed=0)
    assert [(r.n1, r.pref_len) for r in rows] == [(20, 2), (20, 4)]
    assert all(r.t_ds == r.t_dl == experiments.EXPERIMENT_TIE_DENSITY for r in rows)


def test_trial_seeds_depend_on_parameters():
    a = experiments.trial_seeds(0, 100, 50, 0.005, 0.005, 4)
    assert a == experiments.trial_seeds(0, 100, 50, 0.005, 0.005, 4)
    assert a != experiments.trial_seeds(0, 100, 50, 0.005, 0.0, 4)
    assert experiments.trial_seeds(0, 100, 50, 0.005, 0.005, 6)[:4] == a


def test_crosscheck_runs_on_small_instances():
    row = experiments.run_cell(6, 2, 0.3, 0.3, 20, seed=1, crosscheck=True)
    assert row.trials == 20 and 0 <= row.admitted <= 20


def test_invalid_experiment_config():
    with pytest.raises(ValueError):
        experiments.experiment_1([20], 2, seed=0)


def test_bench_and_csv():
    rows = experiments.bench([100], 2, seed=0)
    assert len(rows) == 1 and rows[0].mean_length == 100 * 50
    parsed = list(csv.DictReader(io.StringIO(to_csv(rows, BenchRow))))
    assert parsed[0]["n1"] == "100" and parsed[0]["trials"] == "2"


def test_worker_count_respects_env(monkeypatch):
    monkeypatch.setenv("SPAST_THREADS", "1")
    assert experiments.worker_count() == 1


def test_pool_gives_the_same_rows():
    serial = experiments.run_cell(8, 3, 0.3, 0.3, 10, seed=4, workers=1)
    pooled = experiments.run_cell(8, 3, 0.3, 0.3, 10, seed=4, workers=2)
    assert serial.admitted == pooled.admitted


def test_sweep_configs_are_small_and_valid():
    configs = experiments.sweep_configs(200, seed=0)
    for c in configs:
        c.validate()
        assert 3 <= c.n_students <= 8
        assert c.t_ds in experiments.SWEEP_DENSITIES and c.t_dl in experiments.SWEEP_DENSITIES
    assert configs == experiments.sweep_configs(200, seed=0)
