from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spast import oracle
from spast.instance import InstanceError
from spast.known_instances import all_ties, cloned_hrt, five_students, six_students
from spast.stability import (
    SUPER,
    WEAK,
    BlockingPair,
    MatchingError,
    check_matching,
    find_blocking_pairs,
    format_matching,
    has_blocking_pair,
    is_matching,
    is_super_stable,
    is_weakly_stable,
    matching_violations,
    parse_matching,
)

from strategies import small_instances

OPTIMAL = [(3, 2), (4, 3), (5, 1)]


def test_matching_validity():
    inst = five_students()
    assert is_matching(inst, OPTIMAL)
    assert is_matching(inst, [])
    assert matching_violations(inst, [(3, 2), (4, 2), (5, 1)]) == ["|M(l_1)| = 3 > d_1 = 2"]
    assert matching_violations(inst, [(1, 1), (2, 1)]) == ["|M(p_1)| = 2 > c_1 = 1"]
    assert matching_violations(inst, [(4, 2), (4, 3)]) == ["s_4 is assigned 2 projects"]


def test_unacceptable_pair_is_rejected():
    with pytest.raises(InstanceError):
        is_matching(five_students(), [(1, 2)])
    with pytest.raises(MatchingError):
        check_matching(five_students(), [(1, 1), (2, 1)])


def test_optimal_matching_has_no_blocking_pair():
    assert find_blocking_pairs(five_students(), OPTIMAL, SUPER) == []
    assert is_super_stable(five_students(), OPTIMAL)


def test_empty_matching_is_blocked_by_type_i():
    blocking = find_blocking_pairs(five_students(), [], SUPER)
    assert BlockingPair(1, 1, "i", SUPER) in blocking
    assert len(blocking) == five_students().total_length


def test_indifference_only_blocks_under_super():
    # s_2 is indifferent between p_1 and p_3, so (s_2, p_1) blocks only under super
    m = [(2, 3), (3, 2), (4, 2)]
    assert find_blocking_pairs(five_students(), m, SUPER) == [
        BlockingPair(1, 1, "ii", SUPER),
        BlockingPair(2, 1, "ii", SUPER),
        BlockingPair(5, 1, "ii", SUPER),
        BlockingPair(5, 3, "iii", SUPER),
    ]
    assert find_blocking_pairs(five_students(), m, WEAK) == [
        BlockingPair(1, 1, "ii", WEAK),
        BlockingPair(5, 1, "ii", WEAK),
        BlockingPair(5, 3, "iii", WEAK),
    ]


def test_full_project_blocks_type_iii():
    m = [(1, 1), (3, 2), (4, 3)]
    assert find_blocking_pairs(five_students(), m, SUPER) == [
        BlockingPair(2, 1, "iii", SUPER),
        BlockingPair(5, 1, "iii", SUPER),
    ]
    assert find_blocking_pairs(five_students(), m, WEAK) == [BlockingPair(5, 1, "iii", WEAK)]


def test_six_students_has_two_super_stable_matchings():
    inst = six_students()
    assert is_super_stable(inst, [(3, 3), (4, 2), (5, 3), (6, 2)])
    assert is_super_stable(inst, [(3, 3), (4, 3), (5, 2), (6, 2)])


def test_all_ties_matchings_are_weakly_but_not_super_stable():
    inst = all_ties()
    for m in ([(1, 1), (2, 2)], [(1, 2), (2, 1)]):
        assert not is_super_stable(inst, m)
        assert is_weakly_stable(inst, m)
    assert find_blocking_pairs(inst, [(1, 1), (2, 2)]) == [
        BlockingPair(1, 2, "iii", SUPER),
        BlockingPair(2, 1, "iii", SUPER),
    ]


def test_dummy_resident_blocks_cloned_matching():
    # residents r_1..r_3 are students 1..3 and the dummy r_0 is student 4
    m = [(4, 2), (1, 1), (3, 3)]
    assert BlockingPair(4, 1, "iii", SUPER) in find_blocking_pairs(cloned_hrt(), m)


def test_unknown_notion():
    with pytest.raises(ValueError):
        find_blocking_pairs(five_students(), [], "strong")


def test_matching_text_round_trip():
    text = format_matching(OPTIMAL)
    assert text == "3 2\n4 3\n5 1\n"
    assert parse_matching("# optimal\n" + text) == frozenset(OPTIMAL)


@settings(max_examples=80, deadline=None)
@given(small_instances(), st.data())
def test_fast_check_agrees_with_listing(inst, data):
    matchings = oracle.enumerate_matchings(inst)
    row = matchings[data.draw(st.integers(0, len(matchings) - 1))]
    m = oracle.row_to_matching(row)
    for notion in (SUPER, WEAK):
        assert has_blocking_pair(inst, m, notion) == bool(find_blocking_pairs(inst, m, notion))


@settings(max_examples=80, deadline=None)
@given(small_instances())
def test_super_stable_implies_weakly_stable(inst):
    for m in oracle.all_super_stable(inst):
        assert is_weakly_stable(inst, m)


@settings(max_examples=60, deadline=None)
@given(small_instances())
def test_super_blocking_pairs_contain_weak_ones(inst):
    for row in oracle.enumerate_matchings(inst)[:50]:
        m = oracle.row_to_matching(row)
        weak = {(b.student, b.project) for b in find_blocking_pairs(inst, m, WEAK)}
        strong = {(b.student, b.project) for b in find_blocking_pairs(inst, m, SUPER)}
        assert weak <= strong
