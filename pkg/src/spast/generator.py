"""Seeded random SPA-ST instances.

Randomness comes from numpy's ``default_rng`` (PCG64, 64-bit state), so a
given configuration and seed always produce the same instance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of a random instance.

    ``n_projects``, ``n_lecturers`` and ``total_capacity`` default to
    ``0.5*n1``, ``0.2*n1`` and ``1.5*n1`` (rounded down).
    """

    n_students: int
    pref_len: int
    t_ds: float = 0.0
    t_dl: float = 0.0
    seed: int = 0
    n_projects: int | None = None
    n_lecturers: int | None = None
    total_capacity: int | None = None

    @property
    def n2(self) -> int:
        return self.n_projects if self.n_projects is not None else int(0.5 * self.n_students)

    @property
    def n3(self) -> int:
        return self.n_lecturers if self.n_lecturers is not None else int(0.2 * self.n_students)

    @property
    def capacity(self) -> int:
        return self.total_capacity if self.total_capacity is not None else int(1.5 * self.n_students)

    def validate(self) -> None:
        if self.n_students < 1:
            raise ValueError("n_students must be positive")
        if not self.n2 >= self.n3 >= 1:
            raise ValueError(f"need n_projects >= n_lecturers >= 1, got {self.n2} and {self.n3}")
        if not 1 <= self.pref_len <= self.n2:
            raise ValueError(f"pref_len must lie in [1, {self.n2}], got {self.pref_len}")
        if self.capacity < self.n2:
            raise ValueError(f"total_capacity {self.capacity} is below the project count {self.n2}")
        for name in ("t_ds", "t_dl"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


def _tie_up(order: list[int], ties: list[int]) -> tuple[tuple[int, ...], ...]:
    """Group ``order`` into ties; each ``i`` in ``ties`` joins entry ``i`` to ``i + 1``."""
    groups = list(zip(order))
    for i in reversed(ties):
        groups[i : i + 2] = [groups[i] + groups[i + 1]]
    return tuple(groups)


def _tie_positions(tied: np.ndarray, n_rows: int) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(n_rows)]
    for r, c in zip(*(a.tolist() for a in np.nonzero(tied))):
        out[r].append(c)
    return out


def generate(config: GeneratorConfig) -> Instance:
    """Draw a random instance; deterministic in ``config.seed``."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    n1, n2, n3 = config.n_students, config.n2, config.n3

    caps = np.ones(n2, dtype=np.int64)
    extra = config.capacity - n2
    if extra:
        caps += np.bincount(rng.integers(0, n2, size=extra), minlength=n2)

    owner = rng.integers(0, n3, size=n2)
    counts = np.bincount(owner, minlength=n3)
    for k in range(n3):
        if counts[k] == 0:
            donors = np.flatnonzero(counts >= 2)
            victim = rng.choice(np.flatnonzero(np.isin(owner, donors)))
            counts[owner[victim]] -= 1
            owner[victim] = k
            counts[k] = 1

    lcaps = []
    for k in range(n3):
        mine = caps[owner == k]
        lcaps.append(int(rng.integers(mine.max(), mine.sum() + 1)))

    # each row: pref_len distinct projects (0-based) in uniform random order
    chosen = rng.permuted(np.tile(np.arange(n2), (n1, 1)), axis=1)[:, : config.pref_len]
    s_tied = rng.random((n1, config.pref_len - 1)) < config.t_ds
    rows = (chosen + 1).tolist()
    student_prefs = tuple(map(_tie_up, rows, _tie_positions(s_tied, n1)))

    # (lecturer, student) pairs with an acceptable project, shuffled per lecturer
    keys = np.unique(owner[chosen] * (n1 + 1) + np.arange(1, n1 + 1)[:, None])
    lect, stud = keys // (n1 + 1), keys % (n1 + 1)
    shuffled = np.lexsort((rng.random(len(keys)), lect))
    lect, stud = lect[shuffled], stud[shuffled]
    l_tied = rng.random(len(keys)) < config.t_dl
    bounds = np.searchsorted(lect, np.arange(n3 + 1)).tolist()
    members = stud.tolist()
    lecturer_prefs = tuple(
        _tie_up(members[a:b], (np.flatnonzero(l_tied[a : max(a, b - 1)])).tolist())
        for a, b in zip(bounds, bounds[1:])
    )

    return Instance(
        tuple(int(c) for c in caps),
        tuple(lcaps),
        tuple(int(k) + 1 for k in owner),
        student_prefs,
        lecturer_prefs,
    )
