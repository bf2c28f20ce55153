import pytest

from polarmodal.frames import Sort, SortedFrame, SortedRelation, SortingType


@pytest.fixture
def f0():
    """The 2+2 reference frame: I = {(a0,b1), (a1,b0)}."""
    return SortedFrame(["a0", "a1"], ["b0", "b1"], [("a0", "b1"), ("a1", "b0")])


def make_rel(name, sorting, tuples):
    return SortedRelation(name, SortingType.parse(sorting),
                          frozenset(tuple(t) for t in tuples))


def with_relation(frame, rel):
    return SortedFrame(frame.points_a, frame.points_b, frame.incidence,
                       {**frame.relations, rel.name: rel})
