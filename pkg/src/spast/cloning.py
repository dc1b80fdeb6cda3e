"""Reduction of SPA-ST to hospitals/residents with ties by cloning lecturers.

Every project becomes a hospital with its own capacity.  A lecturer whose
projects can hold ``n = sum(c_j) - d_k`` more students than she can supervise
gets ``n`` dummy residents, placed in a single tie at the top of each of her
hospitals' lists, and each dummy finds all of her hospitals acceptable (one
tie).  The dummies soak up the surplus capacity.  The reduction does not
preserve super-stability in general.
"""

from __future__ import annotations

from .instance import Instance, projected_preference_list


def is_hrt(inst: Instance) -> bool:
    """True if every lecturer offers exactly one project, of capacity ``d_k``."""
    return all(
        len(ps) == 1 and inst.capacity(ps[0]) == inst.lecturer_capacity(k)
        for k, ps in zip(inst.lecturers, inst.offered)
    )


def dummy_counts(inst: Instance) -> list[int]:
    """Dummy residents per lecturer, in lecturer order."""
    return [
        sum(inst.capacity(j) for j in ps) - inst.lecturer_capacity(k)
        for k, ps in zip(inst.lecturers, inst.offered)
    ]


def clone_to_hrt(inst: Instance) -> Instance:
    """The cloned HRT instance, encoded as an SPA-ST instance.

    Hospital ``j`` is project ``j`` offered by its own lecturer ``j`` with
    ``d_j = c_j``.  Residents ``1..n1`` are the students; dummy residents
    follow, numbered by lecturer and then by ordinal.
    """
    n1 = inst.n_students
    dummies: list[tuple[int, ...]] = []
    next_id = n1 + 1
    for n in dummy_counts(inst):
        dummies.append(tuple(range(next_id, next_id + n)))
        next_id += n

    hospital_prefs = []
    for j in inst.projects:
        k = inst.lecturer_of(j)
        groups = projected_preference_list(inst, k, j)
        hospital_prefs.append(((dummies[k - 1],) if dummies[k - 1] else ()) + groups)

    resident_prefs = list(inst.student_prefs)
    for k, ids in zip(inst.lecturers, dummies):
        resident_prefs.extend([(inst.offered[k - 1],)] * len(ids))

    caps = inst.project_capacities
    return Instance(caps, caps, tuple(inst.projects), tuple(resident_prefs), tuple(hospital_prefs))
