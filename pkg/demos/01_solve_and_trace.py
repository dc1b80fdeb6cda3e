"""Solving a small instance and reading the solver's trace.

Run with ``python demos/01_solve_and_trace.py``.
"""

# %%
from pathlib import Path

from spast import find_blocking_pairs, read_instance, solve, solve_traced
from spast import oracle

DATA = Path(__file__).parent / "data"

# Five students, three projects, two lecturers; s_2 and l_1 each have a tie.
inst = read_instance(DATA / "five_students.txt")
print(inst.n_students, "students,", inst.n_projects, "projects,", inst.n_lecturers, "lecturers")
print("total list length L =", inst.total_length)

# %%
# Each student applies to every project in her head tie at once.  Projects
# and lecturers that become over-full delete their worst-ranked tie, and a
# project that was full but ends up short triggers deletions on its
# lecturer's list between phases.
outcome = solve_traced(inst)
for event in outcome.trace:
    print(event)
print("matching:", sorted(outcome.matching))

# %%
# The result has no blocking pair even when ties count as improvements.
print("blocking pairs:", find_blocking_pairs(inst, outcome.matching))

# %%
# A second instance admits two super-stable matchings.  The solver returns
# the one every student likes at least as much.
six = read_instance(DATA / "six_students.txt")
for m in oracle.all_super_stable(six):
    print(sorted(m))
print("solver:", sorted(solve(six).matching))

# %%
# Both matchings assign the same number of students to each lecturer and
# leave the same students unassigned.
print(oracle.check_unpopular_projects(six))
