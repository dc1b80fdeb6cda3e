from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings

from spast.generator import GeneratorConfig, generate
from spast.instance import format_instance

from strategies import small_configs


def test_default_proportions():
    inst = generate(GeneratorConfig(100, 50, 0.005, 0.005, seed=1))
    assert inst.n_students == 100
    assert inst.n_projects == 50
    assert inst.n_lecturers == 20
    assert sum(inst.project_capacities) == 150
    assert all(len([p for g in prefs for p in g]) == 50 for prefs in inst.student_prefs)


def test_same_seed_same_instance():
    config = GeneratorConfig(60, 10, 0.2, 0.2, seed=7)
    assert format_instance(generate(config)) == format_instance(generate(config))


def test_different_seeds_differ():
    texts = {format_instance(generate(GeneratorConfig(60, 10, 0.2, 0.2, seed=s))) for s in range(5)}
    assert len(texts) == 5


def test_zero_density_has_no_ties():
    assert not generate(GeneratorConfig(50, 10, 0.0, 0.0, seed=3)).has_ties()


def test_full_density_gives_single_ties():
    inst = generate(GeneratorConfig(50, 10, 1.0, 1.0, seed=3))
    assert all(len(prefs) == 1 for prefs in inst.student_prefs)
    assert all(len(prefs) <= 1 for prefs in inst.lecturer_prefs)


def test_tied_adjacencies_per_list():
    # mean number of tied neighbours per student list should be 49 * 0.005
    counts = []
    for seed in range(400):
        inst = generate(GeneratorConfig(100, 50, 0.005, 0.0, seed=seed))
        counts.extend(50 - len(prefs) for prefs in inst.student_prefs)
    counts = np.array(counts)
    se = counts.std(ddof=1) / math.sqrt(len(counts))
    assert abs(counts.mean() - 49 * 0.005) < 3 * se


@pytest.mark.parametrize(
    "config",
    [
        GeneratorConfig(10, 6),
        GeneratorConfig(10, 3, n_projects=2, n_lecturers=3),
        GeneratorConfig(10, 3, total_capacity=4),
        GeneratorConfig(10, 3, t_ds=1.5),
        GeneratorConfig(0, 1),
    ],
)
def test_unsatisfiable_configs(config):
    with pytest.raises(ValueError):
        generate(config)


@settings(max_examples=100, deadline=None)
@given(small_configs(max_students=12, max_projects=6))
def test_generated_instances_respect_the_config(config):
    inst = generate(config)
    assert inst.n_students == config.n_students
    assert inst.n_projects == config.n2
    assert inst.n_lecturers == config.n3
    assert sum(inst.project_capacities) == config.capacity
    assert all(sum(len(g) for g in prefs) == config.pref_len for prefs in inst.student_prefs)
    for k, ps in zip(inst.lecturers, inst.offered):
        caps = [inst.capacity(j) for j in ps]
        assert max(caps) <= inst.lecturer_capacity(k) <= sum(caps)
