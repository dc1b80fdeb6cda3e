"""Instances without a super-stable matching, and what tie-breaking says.

Run with ``python demos/02_when_none_exists.py``.
"""

# %%
from pathlib import Path

from spast import Instance, clone_to_hrt, find_blocking_pairs, read_instance, solve
from spast import oracle

DATA = Path(__file__).parent / "data"

# Two students, two unit projects and one lecturer, with every list a single
# tie.  Whatever we pick, a student and the other project block it.
ties = read_instance(DATA / "all_ties.txt")
outcome = solve(ties)
print("exists:", outcome.exists, "reason:", outcome.reason)
for m in oracle.all_weakly_stable(ties):
    print(sorted(m), "blocked by", [(b.student, b.project) for b in find_blocking_pairs(ties, m)])

# %%
# Cloning lecturers into hospitals does not preserve super-stability: this
# instance has a super-stable matching but its clone does not.
source = read_instance(DATA / "clone_source.txt")
print("source:", sorted(solve(source).matching))
hrt = clone_to_hrt(source)
print("clone has", hrt.n_students - source.n_students, "dummy resident(s)")
print("clone:", solve(hrt).reason)

# %%
# A super-stable matching is stable however the ties are broken.
m = solve(source).matching
print(oracle.check_super_vs_every_tie_breaking(source, m))

# %%
# Weak stability is subtler.  Here the lecturer is indifferent between all
# three students; s_1 and s_2 each hold the other's first choice.  The
# matching is weakly stable, yet every strict order of the lecturer's tie
# favours one of them, who then blocks with the project the other holds.
inst = Instance.build([1, 1], [2], [1, 1], [[1, 2], [2, 1], [1, 2]], [[(3, 2, 1)]])
m = frozenset({(1, 2), (2, 1)})
print("weakly stable:", not find_blocking_pairs(inst, m, "weak"))
print("stable per tie-breaking:", oracle.stable_under_tie_breakings(inst, m).tolist())
