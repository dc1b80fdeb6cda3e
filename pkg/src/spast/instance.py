"""SPA-ST instances: data model, text format and derived preference views.

Students, projects and lecturers are identified by 1-based integers, the same
numbering used in the instance file format.  A preference list is a tuple of
rank groups; every rank group is a tuple of identifiers the owner is
indifferent between (a strict entry is a group of size one).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import chain
from typing import Iterable, NamedTuple, Sequence

import numpy as np

RankGroups = tuple[tuple[int, ...], ...]

STUDENT = "student"
LECTURER = "lecturer"


class PairArrays(NamedTuple):
    """Acceptable pairs as parallel arrays, in student-list order."""

    student: np.ndarray
    project: np.ndarray
    lecturer: np.ndarray
    student_rank: np.ndarray  # rank of project on the student's list
    lecturer_rank: np.ndarray  # rank of student on the lecturer's full list


class InstanceError(ValueError):
    """An instance violates one of the model's structural invariants."""


class ParseError(ValueError):
    """Instance or matching text is syntactically malformed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Instance:
    """An immutable, validated SPA-ST instance.

    ``project_lecturer[j - 1]`` is the lecturer offering project ``j``.
    Construction validates every invariant and raises :class:`InstanceError`
    on the first violation found.
    """

    project_capacities: tuple[int, ...]
    lecturer_capacities: tuple[int, ...]
    project_lecturer: tuple[int, ...]
    student_prefs: tuple[RankGroups, ...]
    lecturer_prefs: tuple[RankGroups, ...]

    def __post_init__(self) -> None:
        _validate(self)

    @classmethod
    def build(
        cls,
        project_capacities: Sequence[int],
        lecturer_capacities: Sequence[int],
        project_lecturer: Sequence[int],
        student_prefs: Sequence[Sequence[Iterable[int] | int]],
        lecturer_prefs: Sequence[Sequence[Iterable[int] | int]],
    ) -> Instance:
        """Convenience constructor accepting lists; bare ints are strict entries."""
        return cls(
            tuple(int(c) for c in project_capacities),
            tuple(int(d) for d in lecturer_capacities),
            tuple(int(k) for k in project_lecturer),
            tuple(_freeze_groups(p) for p in student_prefs),
            tuple(_freeze_groups(p) for p in lecturer_prefs),
        )

    @property
    def n_students(self) -> int:
        return len(self.student_prefs)

    @property
    def n_projects(self) -> int:
        return len(self.project_capacities)

    @property
    def n_lecturers(self) -> int:
        return len(self.lecturer_capacities)

    @property
    def students(self) -> range:
        return range(1, self.n_students + 1)

    @property
    def projects(self) -> range:
        return range(1, self.n_projects + 1)

    @property
    def lecturers(self) -> range:
        return range(1, self.n_lecturers + 1)

    def capacity(self, project: int) -> int:
        return self.project_capacities[project - 1]

    def lecturer_capacity(self, lecturer: int) -> int:
        return self.lecturer_capacities[lecturer - 1]

    def lecturer_of(self, project: int) -> int:
        return self.project_lecturer[project - 1]

    @cached_property
    def offered(self) -> tuple[tuple[int, ...], ...]:
        """``offered[k - 1]`` is the ordered project set P_k of lecturer ``k``."""
        out: list[list[int]] = [[] for _ in self.lecturers]
        for j, k in enumerate(self.project_lecturer, start=1):
            out[k - 1].append(j)
        return tuple(tuple(ps) for ps in out)

    @cached_property
    def student_rank(self) -> tuple[dict[int, int], ...]:
        """Per student, project -> rank (1 + number of strictly better projects)."""
        return tuple(_ranks(groups) for groups in self.student_prefs)

    @cached_property
    def lecturer_rank(self) -> tuple[dict[int, int], ...]:
        """Per lecturer, student -> rank on the full list L_k."""
        return tuple(_ranks(groups) for groups in self.lecturer_prefs)

    @cached_property
    def acceptable_pairs(self) -> tuple[tuple[int, int], ...]:
        """All acceptable (student, project) pairs, sorted."""
        return tuple(
            sorted((s, p) for s in self.students for p in self.student_rank[s - 1])
        )

    @cached_property
    def pair_arrays(self) -> PairArrays:
        """Numpy view of every acceptable pair with both ranks attached."""
        student, project, srank = flat_ranks(self.student_prefs)
        lecturer = np.asarray((0,) + self.project_lecturer)[project]
        owner_of, member, lrank = flat_ranks(self.lecturer_prefs)
        table = np.zeros((self.n_lecturers + 1, self.n_students + 1), dtype=np.int64)
        table[owner_of, member] = lrank
        return PairArrays(student, project, lecturer, srank, table[lecturer, student])

    @property
    def total_length(self) -> int:
        """Total length L of the students' preference lists."""
        return len(self.acceptable_pairs)

    def is_acceptable(self, student: int, project: int) -> bool:
        return project in self.student_rank[student - 1]

    def has_ties(self) -> bool:
        return any(
            len(g) > 1 for prefs in (*self.student_prefs, *self.lecturer_prefs) for g in prefs
        )


def _freeze_groups(prefs: Sequence[Iterable[int] | int]) -> RankGroups:
    groups = []
    for g in prefs:
        if isinstance(g, int):
            groups.append((g,))
        else:
            groups.append(tuple(int(x) for x in g))
    return tuple(groups)


def flat_ranks(lists: Sequence[RankGroups]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(owner, entry, rank) arrays over all entries of ``lists``; owners are 1-based."""
    groups = [g for prefs in lists for g in prefs]
    g_len = np.fromiter(map(len, groups), dtype=np.int64, count=len(groups))
    n = int(g_len.sum())
    entry = np.fromiter(chain.from_iterable(groups), dtype=np.int64, count=n)
    per_owner = np.fromiter((sum(map(len, p)) for p in lists), dtype=np.int64, count=len(lists))
    owner = np.repeat(np.arange(1, len(lists) + 1), per_owner)
    g_start = np.repeat(np.cumsum(g_len) - g_len, g_len)
    o_start = np.repeat(np.cumsum(per_owner) - per_owner, per_owner)
    return owner, entry, g_start - o_start + 1


def _ranks(groups: RankGroups) -> dict[int, int]:
    ranks: dict[int, int] = {}
    seen = 0
    for group in groups:
        r = seen + 1
        for x in group:
            ranks[x] = r
        seen += len(group)
    return ranks


def _validate(inst: Instance) -> None:
    n1, n2, n3 = inst.n_students, inst.n_projects, inst.n_lecturers
    if n1 < 1 or n2 < 1 or n3 < 1:
        raise InstanceError("an instance needs at least one student, project and lecturer")
    if len(inst.project_lecturer) != n2:
        raise InstanceError(f"expected {n2} project owners, got {len(inst.project_lecturer)}")
    if len(inst.lecturer_prefs) != n3:
        raise InstanceError(f"expected {n3} lecturer lists, got {len(inst.lecturer_prefs)}")
    for j, c in enumerate(inst.project_capacities, start=1):
        if c < 1:
            raise InstanceError(f"c_{j} must be a positive integer, got {c}")
    for k, d in enumerate(inst.lecturer_capacities, start=1):
        if d < 1:
            raise InstanceError(f"d_{k} must be a positive integer, got {d}")

    offered: list[list[int]] = [[] for _ in range(n3)]
    for j, k in enumerate(inst.project_lecturer, start=1):
        if not 1 <= k <= n3:
            raise InstanceError(f"p_{j} is offered by unknown lecturer {k}")
        offered[k - 1].append(j)
    for k, ps in enumerate(offered, start=1):
        if not ps:
            raise InstanceError(f"l_{k} offers no project")
        caps = [inst.project_capacities[j - 1] for j in ps]
        d = inst.lecturer_capacities[k - 1]
        if d < max(caps):
            raise InstanceError(f"d_{k} is below the largest capacity of P_{k}")
        if d > sum(caps):
            raise InstanceError(f"d_{k} exceeds sum of capacities of P_{k}")

    # students finding some project of l_k acceptable
    owner = (0,) + inst.project_lecturer
    expected: list[set[int]] = [set() for _ in range(n3 + 1)]
    for i, groups in enumerate(inst.student_prefs, start=1):
        if not groups:
            raise InstanceError(f"s_{i} has an empty preference list")
        flat = _check_list(groups, n2, f"s_{i}", "project", "p")
        for k in {owner[j] for j in flat}:
            expected[k].add(i)

    for k, groups in enumerate(inst.lecturer_prefs, start=1):
        seen = set(_check_list(groups, n1, f"l_{k}", "student", "s"))
        missing = expected[k] - seen
        if missing:
            raise InstanceError(
                f"l_{k} does not rank s_{min(missing)}, who finds a project of P_{k} acceptable"
            )
        extra = seen - expected[k]
        if extra:
            raise InstanceError(
                f"l_{k} ranks s_{min(extra)}, who finds no project of P_{k} acceptable"
            )


def _check_list(groups: RankGroups, n: int, who: str, kind: str, prefix: str) -> list[int]:
    flat = [x for group in groups for x in group]
    if all(groups) and (not flat or (min(flat) >= 1 and max(flat) <= n and len(set(flat)) == len(flat))):
        return flat
    # slow path: name the first offending entry
    seen: set[int] = set()
    for group in groups:
        if not group:
            raise InstanceError(f"{who} has an empty tie")
        for x in group:
            if not 1 <= x <= n:
                raise InstanceError(f"{who} ranks unknown {kind} {x}")
            if x in seen:
                raise InstanceError(f"{who} ranks {prefix}_{x} more than once")
            seen.add(x)
    raise AssertionError("unreachable")


def projected_preference_list(inst: Instance, lecturer: int, project: int) -> RankGroups:
    """Lecturer ``lecturer``'s list restricted to students who find ``project`` acceptable.

    Order and tie membership are inherited from the full list; rank groups that
    become empty are dropped.
    """
    if not 1 <= project <= inst.n_projects or inst.lecturer_of(project) != lecturer:
        raise InstanceError(f"p_{project} is not offered by l_{lecturer}")
    out = []
    for group in inst.lecturer_prefs[lecturer - 1]:
        kept = tuple(s for s in group if project in inst.student_rank[s - 1])
        if kept:
            out.append(kept)
    return tuple(out)


def rank_of(inst: Instance, side: str, owner: int, target: int) -> int:
    """Rank of ``target`` on ``owner``'s list: 1 + number of strictly better entries."""
    if side == STUDENT:
        table = inst.student_rank[owner - 1]
    elif side == LECTURER:
        table = inst.lecturer_rank[owner - 1]
    else:
        raise ValueError(f"side must be {STUDENT!r} or {LECTURER!r}, got {side!r}")
    try:
        return table[target]
    except KeyError:
        raise InstanceError(f"{target} is not acceptable to {side} {owner}") from None


# --------------------------------------------------------------------------
# text format

EMPTY_LIST = "-"  # a lecturer whose projects nobody ranks
_TOKEN = re.compile(r"\(|\)|\d+|\S")


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append((lineno, line))
    return out


def _ints(line: str, lineno: int, count: int, what: str) -> list[int]:
    parts = line.split()
    try:
        values = [int(x) for x in parts]
    except ValueError:
        raise ParseError(f"expected integers for {what}", lineno) from None
    if len(values) != count:
        raise ParseError(f"expected {count} values for {what}, got {len(values)}", lineno)
    return values


def parse_groups(line: str, lineno: int | None = None) -> RankGroups:
    """Parse tie syntax such as ``2 (5 3) 7`` into rank groups; ``-`` is the empty list."""
    if line.strip() == EMPTY_LIST:
        return ()
    groups: list[tuple[int, ...]] = []
    current: list[int] | None = None
    for tok in _TOKEN.findall(line):
        if tok == "(":
            if current is not None:
                raise ParseError("nested '('", lineno)
            current = []
        elif tok == ")":
            if current is None:
                raise ParseError("unbalanced ')'", lineno)
            if not current:
                raise ParseError("empty tie '()'", lineno)
            groups.append(tuple(current))
            current = None
        elif tok.isdigit():
            if current is None:
                groups.append((int(tok),))
            else:
                current.append(int(tok))
        else:
            raise ParseError(f"unexpected character {tok!r}", lineno)
    if current is not None:
        raise ParseError("unclosed '('", lineno)
    return tuple(groups)


def format_groups(groups: RankGroups) -> str:
    if not groups:
        return EMPTY_LIST
    return " ".join(
        str(g[0]) if len(g) == 1 else "(" + " ".join(map(str, g)) + ")" for g in groups
    )


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented instance format (see README) into a validated Instance."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty instance file")
    lineno, first = lines[0]
    n1, n2, n3 = _ints(first, lineno, 3, "counts n1 n2 n3")
    if min(n1, n2, n3) < 1:
        raise ParseError("counts must be positive", lineno)
    expected_lines = 4 + n1 + n3
    if len(lines) < expected_lines:
        last = lines[-1][0]
        raise ParseError(f"expected {expected_lines} content lines, found {len(lines)}", last)
    if len(lines) > expected_lines:
        raise ParseError("unexpected trailing content", lines[expected_lines][0])
    caps = _ints(lines[1][1], lines[1][0], n2, "project capacities")
    lcaps = _ints(lines[2][1], lines[2][0], n3, "lecturer capacities")
    owners = _ints(lines[3][1], lines[3][0], n2, "project owners")
    sprefs = [parse_groups(line, no) for no, line in lines[4 : 4 + n1]]
    lprefs = [parse_groups(line, no) for no, line in lines[4 + n1 :]]
    return Instance(tuple(caps), tuple(lcaps), tuple(owners), tuple(sprefs), tuple(lprefs))


def format_instance(inst: Instance, comment: str | None = None) -> str:
    """Serialize to the text format; ``parse_instance`` inverts this exactly."""
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"{inst.n_students} {inst.n_projects} {inst.n_lecturers}")
    out.append(" ".join(map(str, inst.project_capacities)))
    out.append(" ".join(map(str, inst.lecturer_capacities)))
    out.append(" ".join(map(str, inst.project_lecturer)))
    out.extend(format_groups(g) for g in inst.student_prefs)
    out.extend(format_groups(g) for g in inst.lecturer_prefs)
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(inst: Instance, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_instance(inst, comment))
