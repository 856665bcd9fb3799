import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feynpoly.chords import (
    ChordDiagram,
    ChordError,
    add_chord,
    colour_cycle_counts,
    double_factorial,
    enumerate_completions,
    project_pi0,
    sgn_vertices,
)


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_completion_counts(N):
    D0 = ChordDiagram.chordless([N])
    assert len(enumerate_completions(D0, 0)) == double_factorial(2 * N - 1)
    assert len(enumerate_completions(D0, 1)) == N * double_factorial(2 * N - 1)


def test_completion_counts_frozen():
    # frozen from the double factorial formula, checked for several base shapes
    for n in ([1], [2], [1, 1], [3], [2, 1], [1, 1, 1]):
        D0 = ChordDiagram.chordless(n)
        assert len(enumerate_completions(D0, 0)) == {1: 1, 2: 3, 3: 15}[sum(n)]
        assert len(enumerate_completions(D0, 1)) == {1: 1, 2: 6, 3: 45}[sum(n)]


def test_completions_are_distinct():
    D0 = ChordDiagram.chordless([2, 1])
    for k in range(4):
        ds = enumerate_completions(D0, k)
        assert len(set(ds)) == len(ds)
        assert all(len(D.free_vertices) == 2 * k for D in ds)


def test_validation():
    with pytest.raises(ChordError):
        ChordDiagram(((1, 2, 3),))
    with pytest.raises(ChordError):
        ChordDiagram(((1, 2), (2, 3)))
    with pytest.raises(ChordError):
        ChordDiagram(((1, 2, 3, 4),), ((1, 2), (2, 3)))
    with pytest.raises(ChordError):
        ChordDiagram(((1, 2),), ((1, 9),))
    D = ChordDiagram.chordless([2])
    with pytest.raises(ChordError):
        enumerate_completions(D, 3)
    with pytest.raises(ChordError):
        add_chord(add_chord(D, 1, 3), 1, 2)


def test_one_cycle_single_chord():
    # n = (1): the lone chord closes one cycle in each colour
    D = add_chord(ChordDiagram.chordless([1]), 1, 2)
    c = colour_cycle_counts(D)
    assert (c.c2_1, c.c2_2, c.c3) == (1, 1, 0)


def _first_with(D0, k, counts):
    for D in enumerate_completions(D0, k):
        c = colour_cycle_counts(D)
        if (c.c2, c.c3) == counts:
            return D
    raise AssertionError(counts)


def test_example_diagrams():
    # Reconstructed: first full diagram on one 8-gon with (c2, c3) = (3, 0) and
    # first two-chord diagram with (1, 1).
    D0 = ChordDiagram.chordless([4])
    D1 = _first_with(D0, 0, (3, 0))
    D3 = _first_with(D0, 2, (1, 1))
    # both checked by tracing the colour classes by hand
    assert D1.chords == ((1, 2), (3, 5), (4, 7), (6, 8))
    assert D3.chords == ((5, 7), (6, 8))
    assert not D1.free_vertices
    assert len(D3.free_vertices) == 4
    assert len(D3.tricoloured_cycles()) == 1
    assert project_pi0(D3) == ChordDiagram.chordless([2])


def test_cycle_count_distribution_frozen():
    D0 = ChordDiagram.chordless([4])
    dist = {}
    for D in enumerate_completions(D0, 0):
        c = colour_cycle_counts(D)
        dist[(c.c2, c.c3)] = dist.get((c.c2, c.c3), 0) + 1
    assert dist == {(2, 0): 20, (3, 0): 42, (4, 0): 29, (5, 0): 14}


def random_partial(rng, n):
    D0 = ChordDiagram.chordless(n)
    free = list(D0.vertices)
    rng.shuffle(free)
    chords = []
    for _ in range(rng.randint(0, len(free) // 2 - 1)):
        chords.append((free.pop(), free.pop()))
    return ChordDiagram(D0.base, tuple(chords))


def test_chord_addition_law():
    rng = random.Random(11)
    for _ in range(500):
        n = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
        D = random_partial(rng, n)
        u, v = rng.sample(D.free_vertices, 2)
        before = colour_cycle_counts(D).c_tilde
        after = colour_cycle_counts(add_chord(D, u, v)).c_tilde
        assert after == before + sgn_vertices(D, u, v)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.randoms(use_true_random=False))
def test_projection_properties(n, rng):
    D = random_partial(rng, n)
    P = project_pi0(D)
    assert set(P.vertices) == set(D.free_vertices)
    assert project_pi0(P) == P
    assert colour_cycle_counts(D).c3 == len(P.base)
    for u in D.free_vertices:
        for v in D.free_vertices:
            if u != v:
                assert sgn_vertices(D, u, v) == sgn_vertices(P, u, v)
                assert sgn_vertices(D, u, v) == sgn_vertices(D, v, u)


def test_sgn_on_chordless():
    D = ChordDiagram.chordless([2, 1])
    assert sgn_vertices(D, 1, 2) == 1
    assert sgn_vertices(D, 1, 3) == 0
    assert sgn_vertices(D, 1, 4) == 1
    assert sgn_vertices(D, 1, 5) == -1
    with pytest.raises(ChordError):
        sgn_vertices(D, 1, 1)
