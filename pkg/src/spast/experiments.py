"""Random-instance experiments, runtime benchmarks and the desk-scale sweep.

Every trial's generator seed is derived from the experiment seed and the
row's parameters, never from its position in a grid, so any subset of rows
reproduces exactly the numbers the full grid would give.
"""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from . import oracle
from .generator import GeneratorConfig, generate
from .solver import solve

EXPERIMENT_PREF_LEN = 50
EXPERIMENT_TIE_DENSITY = 0.005
DENSITY_GRID = tuple(round(0.005 * i, 3) for i in range(11))
SWEEP_DENSITIES = (0.0, 0.3, 0.7, 1.0)


class CrosscheckFailure(AssertionError):
    """The solver disagreed with the exhaustive oracle on a generated instance."""


@dataclass(frozen=True)
class ExperimentRow:
    n1: int
    pref_len: int
    t_ds: float
    t_dl: float
    trials: int
    admitted: int
    proportion: float
    mean_solve_s: float
    seed: int


@dataclass(frozen=True)
class BenchRow:
    n1: int
    trials: int
    mean_solve_s: float
    mean_length: float
    seed: int


def trial_seeds(seed: int, n1: int, pref_len: int, t_ds: float, t_dl: float, trials: int) -> list[int]:
    """Per-trial 64-bit generator seeds for one parameter cell."""
    key = [seed, n1, pref_len, round(t_ds * 10_000), round(t_dl * 10_000)]
    return np.random.SeedSequence(key).generate_state(trials, np.uint64).tolist()


def worker_count() -> int:
    """Worker processes for trials: ``SPAST_THREADS`` if set, else the CPU count."""
    available = len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1
    cap = os.environ.get("SPAST_THREADS")
    if cap:
        return max(1, min(int(cap), available))
    return available


def _crosscheck(inst, config: GeneratorConfig, outcome) -> None:
    stable = oracle.all_super_stable(inst)
    if outcome.exists != bool(stable) or (outcome.exists and outcome.matching not in stable):
        raise CrosscheckFailure(f"solver and oracle disagree on seed {config.seed} ({config})")


def _run_trial(config: GeneratorConfig, crosscheck: bool = False) -> tuple[bool, float, int]:
    inst = generate(config)
    start = time.perf_counter()
    outcome = solve(inst)
    elapsed = time.perf_counter() - start
    if crosscheck and config.n_students <= 8:
        _crosscheck(inst, config, outcome)
    return outcome.exists, elapsed, inst.total_length


def _run_all(configs: Sequence[GeneratorConfig], crosscheck: bool, workers: int | None) -> list[tuple[bool, float, int]]:
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(configs) < 2:
        return [_run_trial(c, crosscheck) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps trial order, so the reduction is deterministic
        return list(pool.map(_run_trial, configs, [crosscheck] * len(configs), chunksize=8))


def run_cell(
    n1: int,
    pref_len: int,
    t_ds: float,
    t_dl: float,
    trials: int,
    seed: int,
    crosscheck: bool = False,
    workers: int | None = None,
) -> ExperimentRow:
    """Proportion of ``trials`` random instances that admit a super-stable matching."""
    seeds = trial_seeds(seed, n1, pref_len, t_ds, t_dl, trials)
    configs = [GeneratorConfig(n1, pref_len, t_ds, t_dl, s) for s in seeds]
    if configs:
        configs[0].validate()
    results = _run_all(configs, crosscheck, workers)
    admitted = sum(ok for ok, _, _ in results)
    mean = sum(t for _, t, _ in results) / trials if trials else 0.0
    proportion = admitted / trials if trials else 0.0
    return ExperimentRow(n1, pref_len, t_ds, t_dl, trials, admitted, proportion, mean, seed)


def experiment_1(
    n1_grid: Iterable[int], trials: int, seed: int, pref_len: int = EXPERIMENT_PREF_LEN, **kw
) -> list[ExperimentRow]:
    """Growing instances, fixed list length and tie density."""
    t = EXPERIMENT_TIE_DENSITY
    return [run_cell(n1, pref_len, t, t, trials, seed, **kw) for n1 in n1_grid]


def experiment_2(n1_grid: Iterable[int], pref_lens: Iterable[int], trials: int, seed: int, **kw) -> list[ExperimentRow]:
    """Growing instances crossed with student list lengths."""
    t = EXPERIMENT_TIE_DENSITY
    pref_lens = list(pref_lens)
    return [run_cell(n1, x, t, t, trials, seed, **kw) for n1 in n1_grid for x in pref_lens]


def experiment_3(
    n1_grid: Iterable[int],
    trials: int,
    seed: int,
    densities: Sequence[float] = DENSITY_GRID,
    cells: Iterable[tuple[float, float]] | None = None,
    pref_len: int = EXPERIMENT_PREF_LEN,
    **kw,
) -> list[ExperimentRow]:
    """Student tie density crossed with lecturer tie density.

    ``cells`` restricts the run to the given ``(t_ds, t_dl)`` pairs.
    """
    grid = list(cells) if cells is not None else [(a, b) for a in densities for b in densities]
    return [
        run_cell(n1, pref_len, t_ds, t_dl, trials, seed, **kw)
        for n1 in n1_grid
        for t_ds, t_dl in grid
    ]


def bench(n1_grid: Iterable[int], trials: int, seed: int) -> list[BenchRow]:
    """Mean wall-clock solve time per instance size (experiment 1 parameters)."""
    t = EXPERIMENT_TIE_DENSITY
    rows = []
    for n1 in n1_grid:
        seeds = trial_seeds(seed, n1, EXPERIMENT_PREF_LEN, t, t, trials)
        results = [_run_trial(GeneratorConfig(n1, EXPERIMENT_PREF_LEN, t, t, s)) for s in seeds]
        if not results:
            continue
        mean = sum(r[1] for r in results) / trials
        length = sum(r[2] for r in results) / trials
        rows.append(BenchRow(n1, trials, mean, length, seed))
    return rows


def to_csv(rows: Sequence, row_type: type) -> str:
    """CSV text with a header row; rows from zero-trial cells are omitted."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f.name for f in fields(row_type)])
    for row in rows:
        if row.trials == 0:
            continue
        writer.writerow(_fmt(v) for v in astuple(row))
    return out.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


# -- desk-scale sweep for the exhaustive checks ------------------------------------


def sweep_configs(count: int, seed: int, n1_range: tuple[int, int] = (3, 8)) -> list[GeneratorConfig]:
    """Small random configurations for oracle comparisons.

    Student counts are uniform in ``n1_range``; there are one or two
    lecturers, two to four projects, total capacity between the project count
    and ``1.5 * n1``, any list length, and tie densities drawn from
    ``SWEEP_DENSITIES``.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n1 = int(rng.integers(n1_range[0], n1_range[1] + 1))
        n3 = int(rng.integers(1, 3))
        n2 = int(rng.integers(max(2, n3), 5))
        cap = int(rng.integers(n2, max(n2, int(1.5 * n1)) + 1))
        pref_len = int(rng.integers(1, n2 + 1))
        t_ds = float(rng.choice(SWEEP_DENSITIES))
        t_dl = float(rng.choice(SWEEP_DENSITIES))
        out.append(GeneratorConfig(n1, pref_len, t_ds, t_dl, int(rng.integers(2**63)), n2, n3, cap))
    return out
