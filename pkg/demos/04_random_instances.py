"""Random instances: how often does a super-stable matching exist?

Run with ``python demos/04_random_instances.py``.  Uses small trial counts;
the ``spast experiment`` command runs the full grids.
"""

# %%
import numpy as np

from spast import GeneratorConfig, generate, solve
from spast import experiments

# 100 students, 50 projects, 20 lecturers, total capacity 150; each student
# ranks 50 projects, and about one list in five contains a tie.
inst = generate(GeneratorConfig(100, 50, t_ds=0.005, t_dl=0.005, seed=1))
ties = sum(len(prefs) < 50 for prefs in inst.student_prefs)
print(inst.n_projects, "projects,", inst.n_lecturers, "lecturers,", ties, "student lists with a tie")
print("super-stable matching exists:", solve(inst).exists)

# %%
# Larger instances admit super-stable matchings less often.
for row in experiments.experiment_1([100, 200, 300], trials=50, seed=0):
    print(row.n1, f"{row.proportion:.2f}")

# %%
# Ties on the lecturers' side alone hurt far less than ties on both sides.
cells = [(0.0, 0.05), (0.05, 0.05), (0.05, 0.0)]
for row in experiments.experiment_3([100], trials=50, seed=0, cells=cells):
    print(f"t_ds={row.t_ds:.3f} t_dl={row.t_dl:.3f} proportion={row.proportion:.2f}")

# %%
# Solve time grows linearly with the total list length.
rows = experiments.bench([100, 400, 1000], trials=5, seed=0)
ms = np.array([r.mean_solve_s for r in rows]) * 1e3
for r, t in zip(rows, ms):
    print(r.n1, f"L={r.mean_length:.0f}", f"{t:.1f} ms", f"{t / r.mean_length * 1e3:.2f} us per entry")
