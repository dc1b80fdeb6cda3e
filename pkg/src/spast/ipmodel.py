"""Integer-programming model of super-stability, LP export and exhaustive checks.

The model has a binary ``x_i_j`` per acceptable pair and indicator variables
for the subscription states that blocking pairs depend on:

* ``alpha_j`` / ``gamma_j``: project ``j`` is undersubscribed / full,
* ``beta_k`` / ``eta_k``: lecturer ``k`` is undersubscribed / full,
* ``delta_i_k``: student ``i`` is assigned to lecturer ``k`` or is no worse
  than the worst student assigned to ``k``,
* ``lambda_i_j_k``: student ``i`` is no worse than the worst assignee of ``j``.

Each indicator is forced to 1 by one "forcing" constraint when its state
holds.  Three families of constraints then forbid each type of blocking pair.
The expression ``1 - x_i_j - (x over projects i strictly prefers to j)``
is expanded in place rather than introduced as a variable.

A feasible 0/1 solution corresponds exactly to a super-stable matching.
:func:`feasible_matchings_by_enumeration` checks this by enumerating
matchings and setting every indicator to its least feasible value;
:func:`feasible_by_binary_enumeration` is the literal brute force over all
variable vectors, for very small models.
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import oracle
from .instance import Instance
from .oracle import DEFAULT_BUDGET, EnumerationBudget
from .stability import Matching

LE = "<="
GE = ">="

# constraint families, in model order
STUDENT = "student"
PROJECT_CAP = "project_cap"
LECTURER_CAP = "lecturer_cap"
PROJECT_UNDER = "project_under"
LECTURER_UNDER = "lecturer_under"
BLOCK_I = "block_i"
LECTURER_FULL = "lecturer_full"
LECTURER_WORST = "lecturer_worst"
BLOCK_II = "block_ii"
PROJECT_FULL = "project_full"
PROJECT_WORST = "project_worst"
BLOCK_III = "block_iii"
FAMILIES = (
    STUDENT,
    PROJECT_CAP,
    LECTURER_CAP,
    PROJECT_UNDER,
    LECTURER_UNDER,
    BLOCK_I,
    LECTURER_FULL,
    LECTURER_WORST,
    BLOCK_II,
    PROJECT_FULL,
    PROJECT_WORST,
    BLOCK_III,
)
# families whose single non-x variable is the indicator they force
FORCING = (PROJECT_UNDER, LECTURER_UNDER, LECTURER_FULL, LECTURER_WORST, PROJECT_FULL, PROJECT_WORST)


@dataclass(frozen=True)
class Constraint:
    name: str
    family: str
    terms: tuple[tuple[str, int], ...]  # (variable, coefficient), no zeros
    sense: str
    rhs: int


@dataclass
class IpModel:
    """Variables, constraints and objective; variables are all binary."""

    variables: list[str] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: list[str] = field(default_factory=list)  # maximise the sum
    x_pairs: list[tuple[int, int]] = field(default_factory=list)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.variables)}

    @property
    def n_x(self) -> int:
        return len(self.x_pairs)

    def family_counts(self) -> dict[str, int]:
        counts = Counter(c.family for c in self.constraints)
        return {f: counts.get(f, 0) for f in FAMILIES}

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """``(A, b)`` with every constraint rewritten as ``A v <= b``."""
        a = np.zeros((len(self.constraints), len(self.variables)), dtype=np.int64)
        b = np.zeros(len(self.constraints), dtype=np.int64)
        for r, c in enumerate(self.constraints):
            sign = 1 if c.sense == LE else -1
            for v, coef in c.terms:
                a[r, self.index[v]] = sign * coef
            b[r] = sign * c.rhs
        return a, b

    def vector(self, m: Matching) -> np.ndarray:
        """The 0/1 solution encoding ``m``, with least feasible indicators."""
        return self.vectors_for_x(self.x_matrix([m]))[0]

    def x_matrix(self, matchings) -> np.ndarray:
        col = {pair: i for i, pair in enumerate(self.x_pairs)}
        x = np.zeros((len(matchings), self.n_x), dtype=np.int64)
        for r, m in enumerate(matchings):
            for pair in m:
                x[r, col[pair]] = 1
        return x

    def vectors_for_x(self, x: np.ndarray) -> np.ndarray:
        """Extend rows of x-values by setting each indicator to 1 exactly when forced."""
        a, b = self.dense()
        v = np.zeros((len(x), len(self.variables)), dtype=np.int64)
        v[:, : self.n_x] = x
        for r, c in enumerate(self.constraints):
            if c.family not in FORCING:
                continue
            aux = next(self.index[name] for name, _ in c.terms if not name.startswith("x_"))
            v[:, aux] = (x @ a[r, : self.n_x]) > b[r]
        return v

    def feasible(self, v: np.ndarray) -> np.ndarray:
        """Row mask: which variable vectors satisfy every constraint."""
        a, b = self.dense()
        return np.all(np.atleast_2d(v) @ a.T <= b, axis=1)

    def objective_value(self, v: np.ndarray) -> int:
        return int(np.asarray(v)[: self.n_x].sum())


# -- index sets --------------------------------------------------------------


def strictly_preferred_projects(inst: Instance, student: int, project: int) -> list[int]:
    """Projects ``student`` ranks strictly above ``project``."""
    ranks = inst.student_rank[student - 1]
    r = ranks[project]
    return sorted(p for p, q in ranks.items() if q < r)


def better_on_projected_list(inst: Instance, student: int, project: int) -> list[int]:
    """Students interested in ``project`` whom its lecturer ranks strictly above ``student``."""
    k = inst.lecturer_of(project)
    ranks = inst.lecturer_rank[k - 1]
    r = ranks[student]
    return sorted(s for s, q in ranks.items() if q < r and inst.is_acceptable(s, project))


def better_on_lecturer_list(inst: Instance, student: int, lecturer: int) -> list[int]:
    """Students ``lecturer`` ranks strictly above ``student``."""
    ranks = inst.lecturer_rank[lecturer - 1]
    r = ranks[student]
    return sorted(s for s, q in ranks.items() if q < r)


# -- construction --------------------------------------------------------------


def _x(s: int, p: int) -> str:
    return f"x_{s}_{p}"


def build_model(inst: Instance) -> IpModel:
    """The integer program whose feasible solutions are the super-stable matchings."""
    model = IpModel()
    pairs = list(inst.acceptable_pairs)
    slots = sorted({(s, inst.lecturer_of(p)) for s, p in pairs})
    model.x_pairs = pairs
    model.variables = (
        [_x(s, p) for s, p in pairs]
        + [f"alpha_{j}" for j in inst.projects]
        + [f"beta_{k}" for k in inst.lecturers]
        + [f"eta_{k}" for k in inst.lecturers]
        + [f"delta_{s}_{k}" for s, k in slots]
        + [f"gamma_{j}" for j in inst.projects]
        + [f"lambda_{s}_{p}_{inst.lecturer_of(p)}" for s, p in pairs]
    )
    model.objective = [_x(s, p) for s, p in pairs]

    by_student = defaultdict(list)
    by_project = defaultdict(list)
    by_lecturer = defaultdict(list)
    for s, p in pairs:
        by_student[s].append(p)
        by_project[p].append(s)
        by_lecturer[inst.lecturer_of(p)].append((s, p))
    cons = model.constraints

    def add(name: str, family: str, terms: dict[str, int], sense: str, rhs: int) -> None:
        cons.append(Constraint(name, family, tuple((v, c) for v, c in terms.items() if c), sense, rhs))

    def load_terms(xs) -> dict[str, int]:
        return {_x(s, p): 1 for s, p in xs}

    for s in inst.students:
        add(f"student_{s}", STUDENT, load_terms((s, p) for p in by_student[s]), LE, 1)
    for j in inst.projects:
        add(f"project_cap_{j}", PROJECT_CAP, load_terms((s, j) for s in by_project[j]), LE, inst.capacity(j))
    for k in inst.lecturers:
        add(f"lecturer_cap_{k}", LECTURER_CAP, load_terms(by_lecturer[k]), LE, inst.lecturer_capacity(k))
    for j in inst.projects:
        c = inst.capacity(j)
        add(f"project_under_{j}", PROJECT_UNDER, {f"alpha_{j}": c, **load_terms((s, j) for s in by_project[j])}, GE, c)
    for k in inst.lecturers:
        d = inst.lecturer_capacity(k)
        add(f"lecturer_under_{k}", LECTURER_UNDER, {f"beta_{k}": d, **load_terms(by_lecturer[k])}, GE, d)

    def not_better_terms(s: int, p: int) -> dict[str, int]:
        # -(x_{s,p} + x over projects s strictly prefers): the expanded indicator minus 1
        terms = {_x(s, p): -1}
        for q in strictly_preferred_projects(inst, s, p):
            terms[_x(s, q)] = -1
        return terms

    for s, p in pairs:
        k = inst.lecturer_of(p)
        add(f"block_i_{s}_{p}", BLOCK_I, {**not_better_terms(s, p), f"alpha_{p}": 1, f"beta_{k}": 1}, LE, 1)
    for k in inst.lecturers:
        d = inst.lecturer_capacity(k)
        terms = {f"eta_{k}": d}
        terms.update({v: -1 for v in load_terms(by_lecturer[k])})
        add(f"lecturer_full_{k}", LECTURER_FULL, terms, GE, 1 - d)
    for s, k in slots:
        lrank = inst.lecturer_rank[k - 1]
        r = lrank[s]
        terms = {f"delta_{s}_{k}": inst.lecturer_capacity(k)}
        terms.update({_x(t, p): -1 for t, p in by_lecturer[k] if lrank[t] >= r})
        add(f"lecturer_worst_{s}_{k}", LECTURER_WORST, terms, GE, 0)
    for s, p in pairs:
        k = inst.lecturer_of(p)
        terms = {**not_better_terms(s, p), f"alpha_{p}": 1, f"eta_{k}": 1, f"delta_{s}_{k}": 1}
        add(f"block_ii_{s}_{p}", BLOCK_II, terms, LE, 2)
    for j in inst.projects:
        c = inst.capacity(j)
        terms = {f"gamma_{j}": c}
        terms.update({_x(s, j): -1 for s in by_project[j]})
        add(f"project_full_{j}", PROJECT_FULL, terms, GE, 1 - c)
    for s, p in pairs:
        k = inst.lecturer_of(p)
        lrank = inst.lecturer_rank[k - 1]
        r = lrank[s]
        terms = {f"lambda_{s}_{p}_{k}": inst.capacity(p)}
        terms.update({_x(t, p): -1 for t in by_project[p] if lrank[t] >= r})
        add(f"project_worst_{s}_{p}", PROJECT_WORST, terms, GE, 0)
    for s, p in pairs:
        k = inst.lecturer_of(p)
        terms = {**not_better_terms(s, p), f"gamma_{p}": 1, f"lambda_{s}_{p}_{k}": 1}
        add(f"block_iii_{s}_{p}", BLOCK_III, terms, LE, 1)
    return model


def expected_family_counts(inst: Instance) -> dict[str, int]:
    """Constraint counts predicted from the instance's dimensions."""
    n1, n2, n3 = inst.n_students, inst.n_projects, inst.n_lecturers
    n_pairs = len(inst.acceptable_pairs)
    n_slots = len({(s, inst.lecturer_of(p)) for s, p in inst.acceptable_pairs})
    per = {STUDENT: n1, PROJECT_CAP: n2, LECTURER_CAP: n3, PROJECT_UNDER: n2, LECTURER_UNDER: n3}
    per.update({BLOCK_I: n_pairs, LECTURER_FULL: n3, LECTURER_WORST: n_slots, BLOCK_II: n_pairs})
    per.update({PROJECT_FULL: n2, PROJECT_WORST: n_pairs, BLOCK_III: n_pairs})
    return {f: per[f] for f in FAMILIES}


# -- exhaustive feasibility --------------------------------------------------------


def feasible_matchings_by_enumeration(
    inst: Instance, budget: EnumerationBudget = DEFAULT_BUDGET, model: IpModel | None = None
) -> list[Matching]:
    """Matchings whose encoding (with least indicators) satisfies the model.

    Matchings are listed in the oracle's canonical order.
    """
    model = model or build_model(inst)
    rows = oracle.enumerate_matchings(inst, budget)
    matchings = [oracle.row_to_matching(r) for r in rows]
    v = model.vectors_for_x(model.x_matrix(matchings))
    keep = model.feasible(v)
    return [m for m, ok in zip(matchings, keep) if ok]


def feasible_by_binary_enumeration(model: IpModel, max_variables: int = 16) -> set[Matching]:
    """x-projections of every feasible 0/1 vector, by trying all ``2**n`` of them."""
    n = len(model.variables)
    if n > max_variables:
        raise oracle.BudgetExceeded(f"{n} variables exceed the limit of {max_variables}")
    codes = np.arange(1 << n, dtype=np.int64)
    v = (codes[:, None] >> np.arange(n)) & 1
    ok = v[model.feasible(v)]
    out = set()
    for row in ok:
        out.add(frozenset(pair for pair, bit in zip(model.x_pairs, row[: model.n_x]) if bit))
    return out


# -- LP text format ------------------------------------------------------------------


def _linear(terms) -> str:
    parts = []
    for v, c in terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1 else f"{mag} {v}"
        parts.append(f"{sign} {body}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def export_lp(model: IpModel) -> str:
    """The model in CPLEX LP text format, one constraint per line."""
    lines = ["\\ super-stable matching model", "Maximize", f" obj: {_linear((v, 1) for v in model.objective)}"]
    lines.append("Subject To")
    for c in model.constraints:
        lines.append(f" {c.name}: {_linear(c.terms)} {c.sense} {c.rhs}")
    lines.append("Binary")
    lines.extend(f" {v}" for v in model.variables)
    lines.append("End")
    return "\n".join(lines) + "\n"


_TERM = re.compile(r"([+-])?\s*(\d+)?\s*([A-Za-z_][\w.]*)")


@dataclass
class LpText:
    """What :func:`parse_lp` recovers from LP text."""

    sense: str
    objective: dict[str, int]
    constraints: list[Constraint]
    binaries: list[str]


def _parse_terms(text: str) -> dict[str, int]:
    terms: dict[str, int] = {}
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse linear expression near {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        terms[m.group(3)] = terms.get(m.group(3), 0) + sign * coef
        pos = m.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return terms


def parse_lp(text: str) -> LpText:
    """Read back the subset of LP format written by :func:`export_lp`."""
    section = None
    sense = ""
    objective: dict[str, int] = {}
    constraints: list[Constraint] = []
    binaries: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("maximize", "minimize"):
            section, sense = "obj", low
            continue
        if low == "subject to":
            section = "st"
            continue
        if low in ("binary", "binaries"):
            section = "bin"
            continue
        if low == "end":
            break
        if section == "obj":
            objective = _parse_terms(line.split(":", 1)[1])
        elif section == "st":
            name, body = line.split(":", 1)
            m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)\s*$", body)
            if not m:
                raise ValueError(f"cannot parse constraint {line!r}")
            terms = tuple(_parse_terms(m.group(1)).items())
            name = name.strip()
            family = re.sub(r"(_\d+)+$", "", name)
            constraints.append(Constraint(name, family, terms, m.group(2), int(m.group(3))))
        elif section == "bin":
            binaries.extend(line.split())
        else:
            raise ValueError(f"unexpected line outside any section: {line!r}")
    return LpText(sense, objective, constraints, binaries)
