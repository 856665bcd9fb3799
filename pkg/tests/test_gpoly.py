import random

import pytest
from hypothesis import given, settings

from feynpoly.gpoly import (
    alpha,
    bond_poly,
    cycle_poly,
    dodgson_cycle,
    dodgson_det,
    dot_bond_poly,
    kirchhoff,
    kirchhoff_det,
    mixed_dodgson,
    phi_hat,
    x_poly,
)
from feynpoly.graph import random_connected_graph
from feynpoly.poly import MultiPoly, parse_poly

from conftest import connected_graphs


def monomials(nvars, index_sets):
    p = MultiPoly.zero(nvars)
    for s in index_sets:
        p = p + MultiPoly.monomial(nvars, [1 if i + 1 in s else 0 for i in range(nvars)])
    return p


WS3_PSI = [(1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 5), (1, 2, 6), (1, 3, 6), (1, 4, 6), (1, 5, 6),
           (2, 3, 4), (2, 3, 5), (2, 4, 5), (3, 4, 5), (2, 3, 6), (2, 4, 6), (3, 5, 6), (4, 5, 6)]
FIG1_PSI = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (3, 5), (4, 5)]
FIG1_PHI = [(1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 5), (2, 3, 4), (2, 3, 5), (2, 4, 5), (3, 4, 5)]


def test_ws3_kirchhoff_golden(fixtures):
    psi = kirchhoff(fixtures["ws3"])
    assert len(psi) == 16
    assert psi == monomials(6, WS3_PSI)


def test_fig1_right_golden(fixtures):
    G = fixtures["fig1_right"]
    assert kirchhoff(G) == monomials(5, FIG1_PSI)
    assert phi_hat(G) == monomials(5, FIG1_PHI)


def test_fig1_right_from_ws3(fixtures):
    ws3 = kirchhoff(fixtures["ws3"])
    G = fixtures["fig1_right"]
    # the wheel is the fig. 1 graph with an extra edge 6 joining its externals
    assert phi_hat(G).with_nvars(6) == ws3.set_zero(5)
    assert kirchhoff(G).with_nvars(6) == ws3.derivative(5)


def test_kirchhoff_det_on_fixtures(fixtures):
    for G in fixtures.values():
        assert kirchhoff_det(G) == kirchhoff(G), G.name


def test_kirchhoff_det_random():
    rng = random.Random(7)
    for _ in range(50):
        nv = rng.randint(2, 6)
        G = random_connected_graph(rng, nv, rng.randint(nv - 1, 8))
        assert kirchhoff_det(G) == kirchhoff(G)


def test_graph_h_chi_values(fixtures):
    G = fixtures["graph_h"]
    X = parse_poly("-1*a2*a5+1*a7*a8", 8)
    Yp = parse_poly("-1*a1*a3-1*a1*a4-1*a3*a6-1*a4*a6+1*a7*a8", 8)
    assert cycle_poly(G, 1, 4) == X
    assert cycle_poly(G, 3, 6) == X
    assert cycle_poly(G, 2, 5) == Yp


@pytest.mark.parametrize("name", ["ws3", "graph_h"])
def test_chi_is_signed_minor(fixtures, name):
    G = fixtures[name]
    for i in G.edge_ids:
        for j in G.edge_ids:
            chi = cycle_poly(G, i, j)
            det = dodgson_det(G, [i], [j])
            assert chi in (det, -det), (i, j)


def test_dodgson_identity_random():
    rng = random.Random(3)
    done = 0
    while done < 60:
        nv = rng.randint(2, 5)
        G = random_connected_graph(rng, nv, rng.randint(max(4, nv - 1), 8))
        a, b, c, d = rng.sample(G.edge_ids, 4)
        lhs = cycle_poly(G, a, c) * cycle_poly(G, b, d) - cycle_poly(G, a, d) * cycle_poly(G, b, c)
        assert lhs == kirchhoff(G) * dodgson_cycle(G, (a, b), (c, d))
        done += 1


def test_dodgson_repeated_letter_vanishes(fixtures):
    G = fixtures["graph_h"]
    assert dodgson_cycle(G, (1, 1), (2, 3)).is_zero()
    assert dodgson_cycle(G, (), ()) == kirchhoff(G)


@settings(max_examples=40, deadline=None)
@given(connected_graphs())
def test_cycle_bond_identities(G):
    psi = kirchhoff(G)
    for e in G.edge_ids:
        v = G.var(e)
        assert cycle_poly(G, e, e) == psi.derivative(v)
        assert bond_poly(G, e, e) == alpha(G, e) * psi.set_zero(v)
        for f in G.edge_ids:
            if f != e:
                assert bond_poly(G, e, f) == -(alpha(G, e) * alpha(G, f) * cycle_poly(G, e, f))


@settings(max_examples=30, deadline=None)
@given(connected_graphs())
def test_cycle_poly_symmetric(G):
    for e in G.edge_ids:
        for f in G.edge_ids:
            assert cycle_poly(G, e, f) == cycle_poly(G, f, e)


def test_one_loop_x_polys(fixtures):
    G = fixtures["one_loop"]
    assert x_poly(G, 1) == parse_poly("+1*a2", 2)
    assert x_poly(G, 2) == parse_poly("-1*a1", 2)


def test_mixed_dodgson_one_loop(fixtures):
    G = fixtures["one_loop"]
    assert mixed_dodgson(G, ("y",), ("y",)) == phi_hat(G)
    assert mixed_dodgson(G, (1, "y"), (2, "y")).is_zero()
    with pytest.raises(ValueError):
        mixed_dodgson(G, (1,), (2,))


@pytest.mark.parametrize("name", ["two_loop", "graph_h"])
def test_x_product_identity(fixtures, name):
    G = fixtures[name]
    psi, ph = kirchhoff(G), phi_hat(G)
    for e in G.edge_ids:
        for f in G.edge_ids:
            lhs = alpha(G, e) * alpha(G, f) * x_poly(G, e) * x_poly(G, f)
            assert lhs == ph * bond_poly(G, e, f) - psi * dot_bond_poly(G, e, f), (e, f)
