"""The integer-programming model of super-stability.

Run with ``python demos/03_integer_program.py``.
"""

# %%
from pathlib import Path

from spast import ipmodel, oracle, read_instance

DATA = Path(__file__).parent / "data"

# The smallest instance: one student, one project, one lecturer.  There is
# one x-variable, six indicator variables and twelve constraints.
single = read_instance(DATA / "single_pair.txt")
print(ipmodel.export_lp(ipmodel.build_model(single)))

# %%
# Constraint counts follow from the instance's dimensions.
inst = read_instance(DATA / "six_students.txt")
model = ipmodel.build_model(inst)
for family, count in model.family_counts().items():
    print(f"{family:16s} {count}")

# %%
# Feasible solutions are exactly the super-stable matchings.  We check this
# by enumerating every matching and setting each indicator to its least
# feasible value.
feasible = ipmodel.feasible_matchings_by_enumeration(inst)
print("feasible:", [sorted(m) for m in feasible])
print("equal to oracle:", feasible == oracle.all_super_stable(inst))

# %%
# For tiny models we can also try every 0/1 vector directly.
print(ipmodel.feasible_by_binary_enumeration(ipmodel.build_model(single)))
