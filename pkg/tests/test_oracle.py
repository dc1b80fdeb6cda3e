from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings

from spast import oracle
from spast.instance import Instance
from spast.known_instances import all_ties, clone_source, cloned_hrt, five_students, single_pair, six_students
from spast.stability import SUPER, WEAK, find_blocking_pairs, is_matching

from strategies import small_instances

OPTIMAL = frozenset({(3, 2), (4, 3), (5, 1)})
SIX_M1 = frozenset({(3, 3), (4, 2), (5, 3), (6, 2)})
SIX_M2 = frozenset({(3, 3), (4, 3), (5, 2), (6, 2)})


def brute_force_matchings(inst: Instance) -> set[frozenset]:
    options = [[None, *sorted(inst.student_rank[s - 1])] for s in inst.students]
    out = set()
    for choice in itertools.product(*options):
        m = frozenset((s, p) for s, p in zip(inst.students, choice) if p is not None)
        if is_matching(inst, m):
            out.add(m)
    return out


@pytest.mark.parametrize("make", [five_students, six_students, clone_source, cloned_hrt, all_ties, single_pair])
def test_enumeration_is_complete(make):
    inst = make()
    rows = oracle.enumerate_matchings(inst)
    got = [oracle.row_to_matching(r) for r in rows]
    assert len(set(got)) == len(got)
    assert set(got) == brute_force_matchings(inst)


def test_matching_counts():
    assert len(oracle.enumerate_matchings(five_students())) == 41
    assert len(oracle.enumerate_matchings(single_pair())) == 2


def test_super_stable_sets():
    assert oracle.all_super_stable(five_students()) == [OPTIMAL]
    assert set(oracle.all_super_stable(six_students())) == {SIX_M1, SIX_M2}
    assert oracle.all_super_stable(clone_source()) == [frozenset({(1, 1), (3, 3)})]
    assert oracle.all_super_stable(cloned_hrt()) == []
    assert oracle.all_super_stable(all_ties()) == []


def test_weakly_stable_sets():
    assert oracle.all_weakly_stable(five_students()) == [OPTIMAL]
    assert set(oracle.all_weakly_stable(all_ties())) == {
        frozenset({(1, 1), (2, 2)}),
        frozenset({(1, 2), (2, 1)}),
    }
    assert len(oracle.all_weakly_stable(cloned_hrt())) == 3


def test_budget():
    with pytest.raises(oracle.BudgetExceeded):
        oracle.enumerate_matchings(six_students(), oracle.EnumerationBudget(5))
    with pytest.raises(ValueError):
        oracle.EnumerationBudget(0)


def test_tie_breaking_counts():
    assert oracle.tie_breaking_count(five_students()) == 4
    assert oracle.tie_breaking_count(all_ties()) == 8
    assert oracle.tie_breaking_count(single_pair()) == 1
    one_tie = Instance.build([1, 1], [2], [1, 1], [[(1, 2)]], [[1]])
    assert len(list(oracle.enumerate_tie_breakings(one_tie))) == 2


def test_no_ties_yields_the_input():
    assert list(oracle.enumerate_tie_breakings(single_pair())) == [single_pair()]


def test_tie_breakings_are_distinct_and_strict():
    seen = list(oracle.enumerate_tie_breakings(five_students()))
    assert len(set(seen)) == 4
    assert not any(t.has_ties() for t in seen)


def test_optimal_matching_is_stable_in_every_tie_breaking():
    v = oracle.check_super_vs_every_tie_breaking(five_students(), OPTIMAL)
    assert v.stability_claim and v.tie_breaking_claim and v.count == 4


def test_all_ties_matching_is_stable_in_some_tie_breakings():
    m = frozenset({(1, 1), (2, 2)})
    stable = oracle.stable_under_tie_breakings(all_ties(), m)
    assert 0 < stable.sum() < 8
    weak = oracle.check_weak_vs_some_tie_breaking(all_ties(), m)
    assert weak.holds and weak.stability_claim
    super_ = oracle.check_super_vs_every_tie_breaking(all_ties(), m)
    assert super_.holds and not super_.stability_claim


def test_weakly_stable_but_stable_in_no_tie_breaking():
    # one indifferent lecturer; s_1 and s_2 each hold the other's first choice
    inst = Instance.build([1, 1], [2], [1, 1], [[1, 2], [2, 1], [1, 2]], [[(3, 2, 1)]])
    m = frozenset({(1, 2), (2, 1)})
    assert oracle.all_weakly_stable(inst).count(m) == 1
    assert not oracle.stable_under_tie_breakings(inst, m).any()
    assert all(find_blocking_pairs(t, m, WEAK) for t in oracle.enumerate_tie_breakings(inst))
    verdict = oracle.check_weak_vs_some_tie_breaking(inst, m)
    assert verdict.stability_claim and not verdict.holds
    assert oracle.check_super_vs_every_tie_breaking(inst, m).holds


@settings(max_examples=80, deadline=None)
@given(small_instances(max_students=5, max_projects=3))
def test_super_stability_means_stable_in_every_tie_breaking(inst):
    if oracle.tie_breaking_count(inst) > 2000:
        return
    for row in oracle.enumerate_matchings(inst)[:20]:
        m = oracle.row_to_matching(row)
        assert oracle.check_super_vs_every_tie_breaking(inst, m).holds
        # stable in some tie-breaking always implies weakly stable
        if oracle.stable_under_tie_breakings(inst, m).any():
            assert oracle.check_weak_vs_some_tie_breaking(inst, m).stability_claim


def test_six_students_unpopular_projects():
    v = oracle.check_unpopular_projects(six_students())
    assert v.holds and v.n_matchings == 2
    for m in (SIX_M1, SIX_M2):
        assert sum(1 for _, p in m if p in (1, 2)) == 2
        assert sum(1 for _, p in m if p in (3, 4)) == 2
        assert {1, 2}.isdisjoint(s for s, _ in m)
        assert sum(1 for _, p in m if p == 4) == 0


def test_unpopular_projects_vacuous_without_matchings():
    assert oracle.unpopular_projects_verdict(all_ties(), []).holds


@settings(max_examples=60, deadline=None)
@given(small_instances())
def test_array_filter_agrees_with_scalar_checker(inst):
    rows = oracle.enumerate_matchings(inst)
    for notion in (SUPER, WEAK):
        blocked = oracle.blocked_rows(inst, rows, notion)
        for row, b in zip(rows, blocked):
            assert bool(b) == bool(find_blocking_pairs(inst, oracle.row_to_matching(row), notion))


@settings(max_examples=60, deadline=None)
@given(small_instances())
def test_weakly_stable_matchings_exist(inst):
    assert oracle.all_weakly_stable(inst)


@settings(max_examples=60, deadline=None)
@given(small_instances())
def test_without_ties_the_notions_coincide(inst):
    if not inst.has_ties():
        assert oracle.all_weakly_stable(inst) == oracle.all_super_stable(inst)


@settings(max_examples=40, deadline=None)
@given(small_instances(max_students=4, max_projects=3))
def test_rank_tables_follow_enumeration_order(inst):
    if oracle.tie_breaking_count(inst) > 200:
        return
    srank, lrank = oracle.tie_breaking_ranks(inst)
    for t, strict in enumerate(oracle.enumerate_tie_breakings(inst)):
        for s in strict.students:
            for p, r in strict.student_rank[s - 1].items():
                assert srank[t, s, p] == r
        for k in strict.lecturers:
            for s, r in strict.lecturer_rank[k - 1].items():
                assert lrank[t, k, s] == r
