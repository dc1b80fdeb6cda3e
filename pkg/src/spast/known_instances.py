"""Small hand-checked instances used throughout the tests and demos."""

from __future__ import annotations

from .instance import Instance, parse_instance

# 5 students, 3 projects, 2 lecturers; l_1 offers p_1, p_2 and l_2 offers p_3.
FIVE_STUDENTS_TEXT = """\
# five students, three projects, two lecturers
5 3 2
1 2 1
2 1
1 1 2
1
(1 3)
2
2 3
3 1
5 (1 2) 3 4
4 5 2
"""

# Admits a super-stable matching, but its cloned HRT instance does not.
CLONE_SOURCE_TEXT = """\
3 3 2
1 1 1
1 1
1 1 2
1
(1 2)
2 3
1 (2 3)
3
"""

# HRT instance obtained by cloning CLONE_SOURCE_TEXT.  Residents r_1..r_3 are
# students 1..3; the dummy resident r_0 is student 4.
CLONED_HRT_TEXT = """\
4 3 3
1 1 1
1 1 1
1 2 3
1
(1 2)
2 3
(1 2)
4 1 2
4 (2 3)
3
"""

# Two super-stable matchings; the solver returns the student-optimal one.
SIX_STUDENTS_TEXT = """\
6 4 2
1 2 2 1
2 3
1 1 2 2
1
(1 3)
2 3
2 3
3 2
2 4
5 6 4 (1 2) 3
3 4 5 6 2
"""

# Two students, two unit projects, one lecturer of capacity 2, every list one tie.
ALL_TIES_TEXT = """\
2 2 1
1 1
2
1 1
(1 2)
(1 2)
(1 2)
"""

SINGLE_PAIR_TEXT = """\
1 1 1
1
1
1
1
1
"""


def five_students() -> Instance:
    return parse_instance(FIVE_STUDENTS_TEXT)


def six_students() -> Instance:
    return parse_instance(SIX_STUDENTS_TEXT)


def clone_source() -> Instance:
    return parse_instance(CLONE_SOURCE_TEXT)


def cloned_hrt() -> Instance:
    return parse_instance(CLONED_HRT_TEXT)


def all_ties() -> Instance:
    return parse_instance(ALL_TIES_TEXT)


def single_pair() -> Instance:
    return parse_instance(SINGLE_PAIR_TEXT)
