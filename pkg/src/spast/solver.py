"""Linear-time computation of a student-optimal super-stable matching.

The solver runs the deferred-acceptance style procedure for SPA-ST under
super-stability: unassigned students apply to every project at the head of
their list, over-full and full projects and lecturers delete pairs from the
tails of their (projected) lists, and projects that were full but ended up
undersubscribed trigger deletions from the tail of their lecturer's list.
The resulting assignment is either the student-optimal super-stable matching
or a witness that none exists.

Data layout
-----------
Every acceptable pair is an *entry* ``e`` with flat per-entry arrays.  A
student's list is a doubly linked list over her entries plus a "tied with
successor" flag, so the head rank group is read in time proportional to its
size and deletions unlink in O(1).  Each (student, lecturer) pair with at
least one acceptable project is a *slot* holding the chain of that student's
entries for the lecturer's projects.

Lecturer lists L_k and projected lists L_k^j are stored as rank groups with
per-group counts of live members and of provisionally assigned members, and a
``last`` group pointer that only moves towards the front.  Finding a tail or
the worst assignee therefore costs O(1) plus the number of members deleted
on the way, which keeps the total work linear in the instance size.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .instance import Instance, flat_ranks
from .stability import Matching, has_blocking_pair

# deletion causes
PROJECT_OVER = "project-over"
LECTURER_OVER = "lecturer-over"
PROJECT_FULL = "project-full"
LECTURER_FULL = "lecturer-full"
REJECTED_TAIL = "rejected-tail"

# reasons for a negative verdict
MULTIPLY_ASSIGNED = "multiply-assigned"
NOT_A_MATCHING = "not-a-matching"
BLOCKING_PAIR = "blocking-pair"


@dataclass(frozen=True)
class SolverPolicy:
    """Deterministic resolution of the algorithm's free choices.

    ``worklist`` is the discipline for unassigned students ("lifo" or "fifo"),
    ``head_order`` the order in which a student applies to her head projects
    ("list" or "reversed"), ``scan_order`` the order in which projects are
    examined after the application loop ("ascending" or "descending"), and
    ``pick`` selects among equally ranked rejected students ("min" or "max"
    index).  The result of :func:`solve` does not depend on any of these.
    """

    worklist: str = "lifo"
    head_order: str = "list"
    scan_order: str = "ascending"
    pick: str = "min"


DEFAULT_POLICY = SolverPolicy()
OPPOSITE_POLICY = SolverPolicy("fifo", "reversed", "descending", "max")


@dataclass
class SolveOutcome:
    matching: Matching | None
    reason: str | None = None
    deletions: list[tuple[int, int, str]] = field(default_factory=list)
    applications: int = 0
    trace: list[str] | None = None
    final_assignment: tuple[tuple[int, int], ...] = ()
    ever_full_lecturers: frozenset[int] = frozenset()
    phases: int = 0

    @property
    def exists(self) -> bool:
        return self.matching is not None


class _Run:
    def __init__(self, inst: Instance, policy: SolverPolicy, traced: bool):
        self.inst = inst
        self.policy = policy
        self.trace: list[str] | None = [] if traced else None
        n1, n2, n3 = inst.n_students, inst.n_projects, inst.n_lecturers
        owner = np.asarray((0,) + inst.project_lecturer, dtype=np.int64)

        # entries, in student-list order; neighbours of equal rank are tied
        pairs = inst.pair_arrays
        e_student, e_proj = pairs.student, pairs.project
        n_entries = len(e_proj)
        e_tie = np.zeros(n_entries, dtype=bool)
        e_tie[:-1] = (e_student[1:] == e_student[:-1]) & (pairs.student_rank[1:] == pairs.student_rank[:-1])
        s_start = np.searchsorted(e_student, np.arange(1, n1 + 2))
        e_next = np.arange(1, n_entries + 1)
        e_next[s_start[1:] - 1] = -1
        e_prev = np.arange(-1, n_entries - 1)
        e_prev[s_start[:-1]] = -1

        # slots (student, lecturer), sorted by student then lecturer
        base = n3 + 1
        keys, e_slot = np.unique(e_student * base + owner[e_proj], return_inverse=True)
        e_slot = e_slot.reshape(-1)
        q_lect = keys % base
        by_slot = np.argsort(e_slot, kind="stable")
        q_start = np.concatenate(([0], np.cumsum(np.bincount(e_slot, minlength=len(keys)))))

        # lecturer lists as rank groups of slots, numbered globally
        l_owner, l_student, l_rank = flat_ranks(inst.lecturer_prefs)
        fresh = np.ones(len(l_owner), dtype=bool)
        fresh[1:] = (l_owner[1:] != l_owner[:-1]) | (l_rank[1:] != l_rank[:-1])
        l_ngroups = np.bincount(l_owner[fresh], minlength=n3 + 1)
        l_first = np.cumsum(l_ngroups) - l_ngroups
        l_start = np.concatenate((np.flatnonzero(fresh), [len(l_owner)]))
        l_members = np.searchsorted(keys, l_student * base + l_owner)
        q_group = np.empty(len(keys), dtype=np.int64)
        q_group[l_members] = np.cumsum(fresh) - 1
        q_pos = np.empty(len(keys), dtype=np.int64)
        q_pos[l_members] = np.arange(len(l_members))

        # projected lists: entries grouped by project, then lecturer rank group
        e_lgroup = q_group[e_slot]
        p_order = np.lexsort((q_pos[e_slot], e_proj))
        sp, sg = e_proj[p_order], e_lgroup[p_order]
        fresh = np.ones(n_entries, dtype=bool)
        fresh[1:] = (sp[1:] != sp[:-1]) | (sg[1:] != sg[:-1])
        gid = np.cumsum(fresh) - 1
        e_pgroup = np.empty(n_entries, dtype=np.int64)
        e_pgroup[p_order] = gid
        n_pgroups = int(gid[-1]) + 1 if n_entries else 0
        p_start = np.concatenate((np.flatnonzero(fresh), [n_entries]))
        per_project = np.bincount(sp[fresh], minlength=n2 + 1)
        p_first = np.concatenate(([0], np.cumsum(per_project)[:-1]))

        self.e_student, self.e_proj, self.e_slot = e_student.tolist(), e_proj.tolist(), e_slot.tolist()
        self.e_tie, self.e_next, self.e_prev = e_tie.tolist(), e_next.tolist(), e_prev.tolist()
        self.e_pgroup = e_pgroup.tolist()
        self.head = [-1] + s_start[:-1].tolist()
        self.q_lect, self.q_group = q_lect.tolist(), q_group.tolist()
        self.q_members, self.q_start = by_slot.tolist(), q_start.tolist()
        self.q_remaining = np.diff(q_start).tolist()
        self.l_members, self.l_start = l_members.tolist(), l_start.tolist()
        self.l_first = l_first.tolist()
        self.l_last = (l_first + l_ngroups - 1).tolist()
        self.lg_live = np.diff(l_start).tolist()
        self.lg_assigned = [0] * (len(l_start) - 1)
        self.p_members, self.p_start = p_order.tolist(), p_start.tolist()
        self.p_first = p_first.tolist()
        self.p_last = (p_first + per_project - 1).tolist()
        self.pg_live = np.diff(p_start).tolist()
        self.pg_assigned = [0] * n_pgroups

        self.deleted = bytearray(n_entries)
        self.assigned = bytearray(n_entries)
        self.held = [0] * (n1 + 1)
        self.pload = [0] * (n2 + 1)
        self.lload = [0] * (n3 + 1)
        self.pcap = (0,) + inst.project_capacities
        self.lcap = (0,) + inst.lecturer_capacities
        self.full = [False] * (n2 + 1)
        self.ever_full_lect: set[int] = set()
        self.best_rej_group = [-1] * (n2 + 1)
        self.best_rej_student = [0] * (n2 + 1)
        self.pick_max = policy.pick == "max"
        self.deletions: list[tuple[int, int, str]] = []
        self.applications = 0
        self.in_queue = bytearray(n1 + 1)
        order = range(1, n1 + 1)
        if policy.worklist == "lifo":
            # popped from the end: student 1 goes first
            self.queue: list[int] | deque[int] = list(reversed(order))
            self.pop = self.queue.pop
        elif policy.worklist == "fifo":
            self.queue = deque(reversed(order))
            self.pop = self.queue.popleft
        else:
            raise ValueError(f"unknown worklist discipline {policy.worklist!r}")
        for s in order:
            self.in_queue[s] = 1

    # -- primitive operations ------------------------------------------------

    def delete_entries(self, entries: list[int], cause: str) -> None:
        """Delete every live entry of ``entries`` (in order), unlinking it everywhere."""
        deleted, e_student, e_proj, e_slot = self.deleted, self.e_student, self.e_proj, self.e_slot
        e_next, e_prev, e_tie, head = self.e_next, self.e_prev, self.e_tie, self.head
        e_pgroup, pg_live, q_group, remaining, lg_live = (
            self.e_pgroup, self.pg_live, self.q_group, self.q_remaining, self.lg_live
        )
        assigned, log, trace = self.assigned, self.deletions, self.trace
        for e in entries:
            if deleted[e]:
                continue
            deleted[e] = 1
            s = e_student[e]
            j = e_proj[e]
            q = e_slot[e]
            nxt = e_next[e]
            prv = e_prev[e]
            if prv >= 0:
                e_next[prv] = nxt
                if e_tie[prv] and not e_tie[e]:
                    e_tie[prv] = False
            else:
                head[s] = nxt
            if nxt >= 0:
                e_prev[nxt] = prv
            pg = e_pgroup[e]
            pg_live[pg] -= 1
            qg = q_group[q]
            remaining[q] -= 1
            if not remaining[q]:
                lg_live[qg] -= 1
            log.append((s, j, cause))
            if trace is not None:
                trace.append(f"DELETE {s} {j} {cause}")
            if assigned[e]:
                self._unassign(e, s, j, q, pg, qg)

    def _unassign(self, e: int, s: int, j: int, q: int, pg: int, qg: int) -> None:
        self.assigned[e] = 0
        self.held[s] -= 1
        self.pload[j] -= 1
        self.pg_assigned[pg] -= 1
        self.lload[self.q_lect[q]] -= 1
        self.lg_assigned[qg] -= 1
        best = self.best_rej_group[j]
        if best < 0 or qg < best:
            self.best_rej_group[j] = qg
            self.best_rej_student[j] = s
        elif qg == best and (s > self.best_rej_student[j]) == self.pick_max:
            self.best_rej_student[j] = s
        if self.held[s] == 0 and self.head[s] >= 0 and not self.in_queue[s]:
            self.in_queue[s] = 1
            self.queue.append(s)

    def project_tail(self, j: int) -> int:
        live = self.pg_live
        g = self.p_last[j]
        lo = self.p_first[j]
        while g >= lo and live[g] == 0:
            g -= 1
        self.p_last[j] = g
        return g

    def lecturer_tail(self, k: int) -> int:
        live = self.lg_live
        g = self.l_last[k]
        lo = self.l_first[k]
        while g >= lo and live[g] == 0:
            g -= 1
        self.l_last[k] = g
        return g

    def delete_project_group(self, g: int, cause: str) -> None:
        self.delete_entries(self.p_members[self.p_start[g] : self.p_start[g + 1]], cause)

    def delete_lecturer_groups(self, first: int, last: int, cause: str) -> None:
        """Delete every remaining pair of each student in groups ``first..last``."""
        q_members, q_start, remaining = self.q_members, self.q_start, self.q_remaining
        entries = []
        for q in self.l_members[self.l_start[first] : self.l_start[last + 1]]:
            if remaining[q]:
                entries.extend(q_members[q_start[q] : q_start[q + 1]])
        self.delete_entries(entries, cause)

    def apply(self, e: int) -> None:
        s = self.e_student[e]
        j = self.e_proj[e]
        q = self.e_slot[e]
        k = self.q_lect[q]
        self.applications += 1
        if self.trace is not None:
            self.trace.append(f"APPLY {s} {j}")
        self.assigned[e] = 1
        self.held[s] += 1
        self.pload[j] += 1
        self.pg_assigned[self.e_pgroup[e]] += 1
        self.lload[k] += 1
        self.lg_assigned[self.q_group[q]] += 1

        if self.pload[j] > self.pcap[j]:
            g = self.project_tail(j)
            self.delete_project_group(g, PROJECT_OVER)
        elif self.lload[k] > self.lcap[k]:
            g = self.lecturer_tail(k)
            self.delete_lecturer_groups(g, g, LECTURER_OVER)

        if self.pload[j] == self.pcap[j]:
            self.full[j] = True
            # strict successors of the worst assignee: every group after its group
            assigned = self.pg_assigned
            last = self.project_tail(j)
            g = last
            while not assigned[g]:
                g -= 1
            if g < last:
                self.delete_entries(self.p_members[self.p_start[g + 1] : self.p_start[last + 1]], PROJECT_FULL)
                self.p_last[j] = g

        if self.lload[k] == self.lcap[k]:
            self.ever_full_lect.add(k)
            assigned = self.lg_assigned
            last = self.lecturer_tail(k)
            g = last
            while not assigned[g]:
                g -= 1
            if g < last:
                self.delete_lecturer_groups(g + 1, last, LECTURER_FULL)
                self.l_last[k] = g

    # -- main loop -------------------------------------------------------------

    def application_loop(self) -> None:
        queue, pop = self.queue, self.pop
        head, held, deleted = self.head, self.held, self.deleted
        e_next, e_tie = self.e_next, self.e_tie
        in_queue = self.in_queue
        reverse = self.policy.head_order == "reversed"
        while queue:
            s = pop()
            in_queue[s] = 0
            if held[s] or head[s] < 0:
                continue
            e = head[s]
            snapshot = [e]
            while e_tie[e]:
                e = e_next[e]
                snapshot.append(e)
            if reverse:
                snapshot.reverse()
            for e in snapshot:
                if not deleted[e]:
                    self.apply(e)
            if not held[s] and head[s] >= 0 and not in_queue[s]:
                in_queue[s] = 1
                queue.append(s)

    def rejection_scan(self) -> None:
        projects = range(1, self.inst.n_projects + 1)
        if self.policy.scan_order == "descending":
            projects = reversed(projects)
        owner = self.inst.project_lecturer
        for j in projects:
            if not self.full[j] or self.pload[j] >= self.pcap[j]:
                continue
            k = owner[j - 1]
            g = self.lecturer_tail(k)
            # tail no better than the most preferred rejected student
            if g >= self.l_first[k] and g >= self.best_rej_group[j]:
                self.delete_lecturer_groups(g, g, REJECTED_TAIL)

    def run(self) -> SolveOutcome:
        phases = 0
        while True:
            self.application_loop()
            phases += 1
            if self.trace is not None:
                self.trace.append(f"PHASE {phases}")
            self.rejection_scan()
            if not self.queue:
                break

        final = tuple(
            sorted(
                (self.e_student[e], self.e_proj[e])
                for e in range(len(self.e_proj))
                if self.assigned[e]
            )
        )
        outcome = SolveOutcome(
            matching=None,
            deletions=self.deletions,
            applications=self.applications,
            trace=self.trace,
            final_assignment=final,
            ever_full_lecturers=frozenset(self.ever_full_lect),
            phases=phases,
        )
        if any(h > 1 for h in self.held):
            outcome.reason = MULTIPLY_ASSIGNED
        elif any(map(int.__gt__, self.pload, self.pcap)) or any(map(int.__gt__, self.lload, self.lcap)):
            outcome.reason = NOT_A_MATCHING
        elif has_blocking_pair(self.inst, final):
            outcome.reason = BLOCKING_PAIR
        else:
            outcome.matching = frozenset(final)
        return outcome


def solve(inst: Instance, policy: SolverPolicy = DEFAULT_POLICY) -> SolveOutcome:
    """Find the student-optimal super-stable matching of ``inst``, if one exists.

    Returns a :class:`SolveOutcome` whose ``matching`` is ``None`` when the
    instance admits no super-stable matching; ``reason`` then says which
    final test failed.  ``deletions`` lists every deleted pair in order,
    tagged with the rule that deleted it.
    """
    return _Run(inst, policy, traced=False).run()


def solve_traced(inst: Instance, policy: SolverPolicy = DEFAULT_POLICY) -> SolveOutcome:
    """As :func:`solve`, additionally recording ``APPLY``/``DELETE``/``PHASE`` events."""
    return _Run(inst, policy, traced=True).run()


def replay_trace(events: list[str]) -> tuple[tuple[int, int], ...]:
    """Rebuild the final provisional assignment from a trace."""
    held: set[tuple[int, int]] = set()
    for ev in events:
        parts = ev.split()
        if parts[0] == "APPLY":
            held.add((int(parts[1]), int(parts[2])))
        elif parts[0] == "DELETE":
            held.discard((int(parts[1]), int(parts[2])))
        elif parts[0] != "PHASE":
            raise ValueError(f"unknown trace event {ev!r}")
    return tuple(sorted(held))
