"""Matchings and blocking pairs under weak stability and super-stability."""

from __future__ import annotations

from collections import Counter
from typing import Iterable, NamedTuple

import numpy as np

from .instance import Instance, InstanceError, ParseError

Pair = tuple[int, int]
Matching = frozenset  # frozenset[Pair]

WEAK = "weak"
SUPER = "super"


class MatchingError(ValueError):
    """A pair set is not a matching of the instance."""


class BlockingPair(NamedTuple):
    student: int
    project: int
    kind: str  # "i", "ii" or "iii"
    notion: str  # WEAK or SUPER


def as_matching(pairs: Iterable[Pair]) -> Matching:
    return frozenset((int(s), int(p)) for s, p in pairs)


def matching_violations(inst: Instance, pairs: Iterable[Pair]) -> list[str]:
    """Human-readable reasons why ``pairs`` is not a matching (empty if it is).

    Raises :class:`InstanceError` if some pair is not acceptable.
    """
    pairs = list(pairs)
    for s, p in pairs:
        if not (1 <= s <= inst.n_students and 1 <= p <= inst.n_projects) or not inst.is_acceptable(s, p):
            raise InstanceError(f"(s_{s}, p_{p}) is not an acceptable pair")
    problems = []
    per_student = Counter(s for s, _ in pairs)
    for s, n in sorted(per_student.items()):
        if n > 1:
            problems.append(f"s_{s} is assigned {n} projects")
    per_project = Counter(p for _, p in pairs)
    for p, n in sorted(per_project.items()):
        if n > inst.capacity(p):
            problems.append(f"|M(p_{p})| = {n} > c_{p} = {inst.capacity(p)}")
    per_lecturer: dict[int, set[int]] = {}
    for s, p in pairs:
        per_lecturer.setdefault(inst.lecturer_of(p), set()).add(s)
    for k, ss in sorted(per_lecturer.items()):
        if len(ss) > inst.lecturer_capacity(k):
            problems.append(f"|M(l_{k})| = {len(ss)} > d_{k} = {inst.lecturer_capacity(k)}")
    return problems


def is_matching(inst: Instance, pairs: Iterable[Pair]) -> bool:
    return not matching_violations(inst, pairs)


def check_matching(inst: Instance, pairs: Iterable[Pair]) -> Matching:
    m = as_matching(pairs)
    problems = matching_violations(inst, m)
    if problems:
        raise MatchingError("; ".join(problems))
    return m


def find_blocking_pairs(inst: Instance, m: Iterable[Pair], notion: str = SUPER) -> list[BlockingPair]:
    """Every acceptable pair outside ``m`` that blocks it, sorted by (student, project).

    Under ``SUPER`` the comparisons in conditions (a), (b)(ii) and (b)(iii)
    admit indifference; under ``WEAK`` they are strict.
    """
    if notion not in (WEAK, SUPER):
        raise ValueError(f"notion must be {WEAK!r} or {SUPER!r}")
    m = check_matching(inst, m)
    lenient = notion == SUPER
    srank = inst.student_rank
    lrank = inst.lecturer_rank
    owner = inst.project_lecturer

    assigned: dict[int, int] = {}
    pload = [0] * (inst.n_projects + 1)
    lload = [0] * (inst.n_lecturers + 1)
    worst_p = [0] * (inst.n_projects + 1)
    worst_l = [0] * (inst.n_lecturers + 1)
    for s, p in m:
        k = owner[p - 1]
        r = lrank[k - 1][s]
        assigned[s] = p
        pload[p] += 1
        lload[k] += 1
        worst_p[p] = max(worst_p[p], r)
        worst_l[k] = max(worst_l[k], r)

    out = []
    for s in inst.students:
        prefs = srank[s - 1]
        cur = assigned.get(s)
        cur_rank = prefs[cur] if cur is not None else None
        cur_lect = owner[cur - 1] if cur is not None else None
        for p in sorted(prefs):
            if p == cur:
                continue
            r = prefs[p]
            if cur_rank is not None and not (r <= cur_rank if lenient else r < cur_rank):
                continue
            k = owner[p - 1]
            lr = lrank[k - 1][s]
            p_under = pload[p] < inst.project_capacities[p - 1]
            l_under = lload[k] < inst.lecturer_capacities[k - 1]
            kind = None
            if p_under and l_under:
                kind = "i"
            elif p_under:
                if cur_lect == k or (lr <= worst_l[k] if lenient else lr < worst_l[k]):
                    kind = "ii"
            elif lr <= worst_p[p] if lenient else lr < worst_p[p]:
                kind = "iii"
            if kind is not None:
                out.append(BlockingPair(s, p, kind, notion))
    return out


def has_blocking_pair(inst: Instance, m: Iterable[Pair], notion: str = SUPER) -> bool:
    """Vectorised test for a blocking pair; agrees with :func:`find_blocking_pairs`.

    ``m`` must already be a matching of acceptable pairs.
    """
    if notion not in (WEAK, SUPER):
        raise ValueError(f"notion must be {WEAK!r} or {SUPER!r}")
    a = inst.pair_arrays
    n1, n2, n3 = inst.n_students, inst.n_projects, inst.n_lecturers
    owner = np.asarray((0,) + inst.project_lecturer)
    cur = np.zeros(n1 + 1, dtype=np.int64)
    for s, p in m:
        cur[s] = p
    held = cur[a.student] == a.project
    ms, mp, mk, m_lrank = a.student[held], a.project[held], a.lecturer[held], a.lecturer_rank[held]

    cur_rank = np.full(n1 + 1, np.iinfo(np.int64).max)
    cur_rank[ms] = a.student_rank[held]
    pload = np.bincount(mp, minlength=n2 + 1)
    lload = np.bincount(mk, minlength=n3 + 1)
    worst_p = np.zeros(n2 + 1, dtype=np.int64)
    worst_l = np.zeros(n3 + 1, dtype=np.int64)
    np.maximum.at(worst_p, mp, m_lrank)
    np.maximum.at(worst_l, mk, m_lrank)

    s, p, k, r, lr = a.student, a.project, a.lecturer, a.student_rank, a.lecturer_rank
    caps = np.asarray((0,) + inst.project_capacities)
    lcaps = np.asarray((0,) + inst.lecturer_capacities)
    if notion == SUPER:
        want = r <= cur_rank[s]
        beats_l = lr <= worst_l[k]
        beats_p = lr <= worst_p[p]
    else:
        want = r < cur_rank[s]
        beats_l = lr < worst_l[k]
        beats_p = lr < worst_p[p]
    want &= cur[s] != p
    p_under = pload[p] < caps[p]
    l_under = lload[k] < lcaps[k]
    blocks = (p_under & l_under) | (p_under & ~l_under & ((owner[cur[s]] == k) | beats_l))
    blocks |= ~p_under & beats_p
    return bool((want & blocks).any())


def is_super_stable(inst: Instance, m: Iterable[Pair]) -> bool:
    return not find_blocking_pairs(inst, m, SUPER)


def is_weakly_stable(inst: Instance, m: Iterable[Pair]) -> bool:
    return not find_blocking_pairs(inst, m, WEAK)


def canonical(m: Iterable[Pair]) -> tuple[Pair, ...]:
    return tuple(sorted(m))


def format_matching(m: Iterable[Pair]) -> str:
    """Matching file format: one ``student project`` line per pair."""
    return "".join(f"{s} {p}\n" for s, p in canonical(m))


def parse_matching(text: str) -> Matching:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or not all(x.isdigit() for x in parts):
            raise ParseError("expected 'student project'", lineno)
        pairs.append((int(parts[0]), int(parts[1])))
    return as_matching(pairs)
