"""Exhaustive ground truth for desk-sized instances.

Matchings are enumerated level by level (one student per level, options in
project-index order with "unassigned" last) with capacity pruning, as numpy
arrays of shape ``(n_matchings, n_students)`` holding the assigned project or
0.  Stability filters are evaluated on whole arrays at once.  They are a
second, independent implementation of the blocking-pair definitions; the
scalar checker in :mod:`spast.stability` is tested against them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .instance import Instance
from .stability import Matching, SUPER, WEAK, is_super_stable, is_weakly_stable

_UNRANKED = 1 << 20


class BudgetExceeded(RuntimeError):
    """An enumeration needed more work than its budget allows."""


@dataclass(frozen=True)
class EnumerationBudget:
    max_nodes: int = 10**7

    def __post_init__(self) -> None:
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")


DEFAULT_BUDGET = EnumerationBudget()


def enumerate_matchings(inst: Instance, budget: EnumerationBudget = DEFAULT_BUDGET) -> np.ndarray:
    """All matchings of ``inst`` as rows of project indices (0 = unassigned).

    Rows are in canonical order: lexicographic by student, with each
    student's options ordered by project index and "unassigned" last.
    Every search-tree node counts against the budget.
    """
    n1, n2, n3 = inst.n_students, inst.n_projects, inst.n_lecturers
    cap = np.array((0,) + inst.project_capacities)
    lcap = np.array((0,) + inst.lecturer_capacities)
    rows = np.zeros((1, n1), dtype=np.int16)
    pload = np.zeros((1, n2 + 1), dtype=np.int16)
    lload = np.zeros((1, n3 + 1), dtype=np.int16)
    nodes = 1
    for s in inst.students:
        parts_rows, parts_p, parts_l = [], [], []
        for p in sorted(inst.student_rank[s - 1]):
            k = inst.lecturer_of(p)
            ok = (pload[:, p] < cap[p]) & (lload[:, k] < lcap[k])
            if not ok.any():
                continue
            r, pl, ll = rows[ok], pload[ok], lload[ok]
            r[:, s - 1] = p
            pl[:, p] += 1
            ll[:, k] += 1
            parts_rows.append(r)
            parts_p.append(pl)
            parts_l.append(ll)
        parts_rows.append(rows)
        parts_p.append(pload)
        parts_l.append(lload)
        rows = np.concatenate(parts_rows)
        pload = np.concatenate(parts_p)
        lload = np.concatenate(parts_l)
        nodes += len(rows)
        if nodes > budget.max_nodes:
            raise BudgetExceeded(f"matching enumeration exceeded {budget.max_nodes} nodes")
    key = np.where(rows == 0, n2 + 1, rows)
    order = np.lexsort(key.T[::-1])
    return rows[order]


def row_to_matching(row: Sequence[int]) -> Matching:
    return frozenset((s, int(p)) for s, p in enumerate(row, start=1) if p)


def _tables(inst: Instance):
    n1, n2, n3 = inst.n_students, inst.n_projects, inst.n_lecturers
    srank = np.zeros((n1 + 1, n2 + 1), dtype=np.int32)
    for s in inst.students:
        for p, r in inst.student_rank[s - 1].items():
            srank[s, p] = r
    srank[:, 0] = _UNRANKED
    lrank = np.zeros((n3 + 1, n1 + 1), dtype=np.int32)
    for k in inst.lecturers:
        for s, r in inst.lecturer_rank[k - 1].items():
            lrank[k, s] = r
    owner = np.array((0,) + inst.project_lecturer)
    return srank, lrank, owner


def blocked_rows(inst: Instance, rows: np.ndarray, notion: str = SUPER) -> np.ndarray:
    """Boolean mask: which matchings (rows) admit a blocking pair under ``notion``."""
    if notion not in (SUPER, WEAK):
        raise ValueError(f"unknown notion {notion!r}")
    lenient = notion == SUPER
    rows = np.asarray(rows)
    m = len(rows)
    n2, n3 = inst.n_projects, inst.n_lecturers
    srank, lrank, owner = _tables(inst)
    idx = np.arange(m)
    pload = np.zeros((m, n2 + 1), dtype=np.int32)
    lload = np.zeros((m, n3 + 1), dtype=np.int32)
    worst_p = np.zeros((m, n2 + 1), dtype=np.int32)
    worst_l = np.zeros((m, n3 + 1), dtype=np.int32)
    cur_rank = {}
    cur_lect = {}
    for s in inst.students:
        p = rows[:, s - 1].astype(np.intp)
        k = owner[p]
        r = lrank[k, s]
        pload[idx, p] += 1
        lload[idx, k] += 1
        worst_p[idx, p] = np.maximum(worst_p[idx, p], r)
        worst_l[idx, k] = np.maximum(worst_l[idx, k], r)
        cur_rank[s] = srank[s, p]
        cur_lect[s] = k
    blocked = np.zeros(m, dtype=bool)
    for s, p in inst.acceptable_pairs:
        k = inst.lecturer_of(p)
        r = inst.student_rank[s - 1][p]
        lr = inst.lecturer_rank[k - 1][s]
        outside = rows[:, s - 1] != p
        if lenient:
            want = r <= cur_rank[s]
            beats_l = lr <= worst_l[:, k]
            beats_p = lr <= worst_p[:, p]
        else:
            want = r < cur_rank[s]
            beats_l = lr < worst_l[:, k]
            beats_p = lr < worst_p[:, p]
        p_under = pload[:, p] < inst.capacity(p)
        l_under = lload[:, k] < inst.lecturer_capacity(k)
        cond_i = p_under & l_under
        cond_ii = p_under & ~l_under & ((cur_lect[s] == k) | beats_l)
        cond_iii = ~p_under & beats_p
        blocked |= outside & want & (cond_i | cond_ii | cond_iii)
    return blocked


def stable_rows(inst: Instance, notion: str = SUPER, budget: EnumerationBudget = DEFAULT_BUDGET) -> np.ndarray:
    rows = enumerate_matchings(inst, budget)
    return rows[~blocked_rows(inst, rows, notion)]


def all_super_stable(inst: Instance, budget: EnumerationBudget = DEFAULT_BUDGET) -> list[Matching]:
    """Every super-stable matching of ``inst``, in canonical order."""
    return [row_to_matching(r) for r in stable_rows(inst, SUPER, budget)]


def all_weakly_stable(inst: Instance, budget: EnumerationBudget = DEFAULT_BUDGET) -> list[Matching]:
    """Every weakly stable matching of ``inst``, in canonical order."""
    return [row_to_matching(r) for r in stable_rows(inst, WEAK, budget)]


# --------------------------------------------------------------------------
# tie-breaking


def tie_breaking_count(inst: Instance) -> int:
    """Number of strict instances obtainable by breaking the ties of ``inst``."""
    total = 1
    for prefs in (*inst.student_prefs, *inst.lecturer_prefs):
        for g in prefs:
            total *= math.factorial(len(g))
    return total


def _check_tie_budget(inst: Instance, budget: EnumerationBudget) -> int:
    count = tie_breaking_count(inst)
    if count > budget.max_nodes:
        raise BudgetExceeded(f"{count} tie-breakings exceed the budget of {budget.max_nodes}")
    return count


def enumerate_tie_breakings(inst: Instance, budget: EnumerationBudget = DEFAULT_BUDGET) -> Iterator[Instance]:
    """Yield every strict instance obtained by ordering each tie, on both sides."""
    _check_tie_budget(inst, budget)
    lists = [*inst.student_prefs, *inst.lecturer_prefs]
    choices = [[list(itertools.permutations(g)) for g in prefs] for prefs in lists]
    flat = [opts for per_list in choices for opts in per_list]
    n1 = inst.n_students
    for combo in itertools.product(*flat):
        it = iter(combo)
        strict = []
        for prefs in lists:
            order = [x for _ in prefs for x in next(it)]
            strict.append(tuple((x,) for x in order))
        yield Instance(
            inst.project_capacities,
            inst.lecturer_capacities,
            inst.project_lecturer,
            tuple(strict[:n1]),
            tuple(strict[n1:]),
        )


def tie_breaking_ranks(inst: Instance, budget: EnumerationBudget = DEFAULT_BUDGET):
    """Strict rank tables for every tie-breaking, stacked along axis 0.

    Returns ``(srank, lrank)`` of shapes ``(T, n1+1, n2+1)`` and
    ``(T, n3+1, n1+1)``.  Tie-breaking ``t`` uses, for the ``i``-th tie in
    list order, permutation number ``(t // stride_i) % len_i!``; this is the
    same order in which :func:`enumerate_tie_breakings` yields instances.
    """
    total = _check_tie_budget(inst, budget)
    n1, n2, n3 = inst.n_students, inst.n_projects, inst.n_lecturers
    srank = np.zeros((total, n1 + 1, n2 + 1), dtype=np.int32)
    lrank = np.zeros((total, n3 + 1, n1 + 1), dtype=np.int32)
    t = np.arange(total)
    ties = []
    for s, prefs in enumerate(inst.student_prefs, start=1):
        pos = 1
        for g in prefs:
            ties.append((srank, s, g, pos))
            pos += len(g)
    for k, prefs in enumerate(inst.lecturer_prefs, start=1):
        pos = 1
        for g in prefs:
            ties.append((lrank, k, g, pos))
            pos += len(g)
    # itertools.product varies the last factor fastest
    stride = 1
    for table, owner, g, base in reversed(ties):
        perms = list(itertools.permutations(g))
        digit = (t // stride) % len(perms)
        stride *= len(perms)
        for offset in range(len(g)):
            # member placed at position ``offset`` of the permutation
            members = np.array([perm[offset] for perm in perms])[digit]
            table[t, owner, members] = base + offset
    return srank, lrank


def stable_under_tie_breakings(inst: Instance, m: Matching, budget: EnumerationBudget = DEFAULT_BUDGET) -> np.ndarray:
    """Boolean per tie-breaking: is ``m`` stable in that strict instance."""
    srank, lrank = tie_breaking_ranks(inst, budget)
    total = len(srank)
    assigned = dict(m)
    pload: dict[int, list[int]] = {}
    lmembers: dict[int, list[int]] = {}
    for s, p in m:
        pload.setdefault(p, []).append(s)
        lmembers.setdefault(inst.lecturer_of(p), []).append(s)
    stable = np.ones(total, dtype=bool)
    for s, p in inst.acceptable_pairs:
        if assigned.get(s) == p:
            continue
        k = inst.lecturer_of(p)
        cur = assigned.get(s)
        if cur is None:
            want = np.ones(total, dtype=bool)
        else:
            want = srank[:, s, p] < srank[:, s, cur]
        in_p = pload.get(p, [])
        in_l = lmembers.get(k, [])
        p_under = len(in_p) < inst.capacity(p)
        l_under = len(in_l) < inst.lecturer_capacity(k)
        if p_under and l_under:
            block = want
        elif p_under:
            if cur is not None and inst.lecturer_of(cur) == k:
                block = want
            else:
                worst = lrank[:, k, in_l].max(axis=1)
                block = want & (lrank[:, k, s] < worst)
        else:
            worst = lrank[:, k, in_p].max(axis=1)
            block = want & (lrank[:, k, s] < worst)
        stable &= ~block
    return stable


@dataclass(frozen=True)
class TieBreakingVerdict:
    """Compares a stability test with the matching's stability under tie-breakings."""

    stability_claim: bool  # super-stable, or weakly stable
    tie_breaking_claim: bool  # stable in every, or in some, tie-breaking
    count: int  # number of tie-breakings examined

    @property
    def holds(self) -> bool:
        return self.stability_claim == self.tie_breaking_claim


def check_super_vs_every_tie_breaking(inst: Instance, m: Matching, budget: EnumerationBudget = DEFAULT_BUDGET) -> TieBreakingVerdict:
    """Super-stable iff stable in every tie-breaking."""
    stable = stable_under_tie_breakings(inst, m, budget)
    return TieBreakingVerdict(is_super_stable(inst, m), bool(stable.all()), len(stable))


def check_weak_vs_some_tie_breaking(inst: Instance, m: Matching, budget: EnumerationBudget = DEFAULT_BUDGET) -> TieBreakingVerdict:
    """Weakly stable iff stable in some tie-breaking.

    Only the backward direction is guaranteed.  If a lecturer is indifferent
    between two of her assignees on different projects and each prefers the
    other's project, every tie-breaking lets one of them block, although the
    matching is weakly stable; ``holds`` is then False.
    """
    stable = stable_under_tie_breakings(inst, m, budget)
    return TieBreakingVerdict(is_weakly_stable(inst, m), bool(stable.any()), len(stable))


# --------------------------------------------------------------------------
# unpopular projects


@dataclass(frozen=True)
class UnpopularProjectsVerdict:
    lecturer_loads_equal: bool
    unassigned_equal: bool
    undersubscribed_project_loads_equal: bool
    n_matchings: int

    @property
    def holds(self) -> bool:
        return self.lecturer_loads_equal and self.unassigned_equal and self.undersubscribed_project_loads_equal


def unpopular_projects_verdict(inst: Instance, matchings: Sequence[Matching]) -> UnpopularProjectsVerdict:
    """Check the three invariance properties across ``matchings`` (vacuous if empty)."""
    if not matchings:
        return UnpopularProjectsVerdict(True, True, True, 0)

    def lecturer_loads(m):
        return tuple(sum(1 for _, p in m if inst.lecturer_of(p) == k) for k in inst.lecturers)

    def project_loads(m):
        return tuple(sum(1 for _, q in m if q == p) for p in inst.projects)

    def unassigned(m):
        return frozenset(inst.students) - {s for s, _ in m}

    lloads = {lecturer_loads(m) for m in matchings}
    unassigned_sets = {unassigned(m) for m in matchings}
    under = {
        k for m in matchings for k, n in zip(inst.lecturers, lecturer_loads(m)) if n < inst.lecturer_capacity(k)
    }
    watched = [p for p in inst.projects if inst.lecturer_of(p) in under]
    ploads = {tuple(project_loads(m)[p - 1] for p in watched) for m in matchings}
    return UnpopularProjectsVerdict(len(lloads) == 1, len(unassigned_sets) == 1, len(ploads) == 1, len(matchings))


def check_unpopular_projects(inst: Instance, budget: EnumerationBudget = DEFAULT_BUDGET) -> UnpopularProjectsVerdict:
    """Lecturer loads, unassigned students and loads of projects of undersubscribed
    lecturers coincide across all super-stable matchings."""
    return unpopular_projects_verdict(inst, all_super_stable(inst, budget))
