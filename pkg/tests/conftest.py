import random

import pytest
from hypothesis import strategies as st

from feynpoly.graph import random_connected_graph
from feynpoly.graphio import load_fixture
from feynpoly.poly import MultiPoly


@pytest.fixture(scope="session")
def fixtures():
    names = ("one_loop", "two_loop", "ws3", "fig1_right", "graph_h")
    return {n: load_fixture(n) for n in names}


def polys(nvars: int = 3, max_terms: int = 5, max_exp: int = 3, max_coef: int = 20):
    """Hypothesis strategy for small dense-ish polynomials."""
    mono = st.tuples(*[st.integers(0, max_exp)] * nvars)
    coef = st.integers(-max_coef, max_coef)
    return st.dictionaries(mono, coef, max_size=max_terms).map(lambda d: MultiPoly(nvars, d))


@st.composite
def connected_graphs(draw, max_vertices: int = 5, max_edges: int = 7, external: bool = False):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    nv = draw(st.integers(2, max_vertices))
    ne = draw(st.integers(nv - 1, max(max_edges, nv - 1)))
    return random_connected_graph(rng, nv, ne, external=external)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
