from fractions import Fraction

import pytest
from scipy.integrate import quad

from feynpoly.chords import ChordDiagram
from feynpoly.graph import Graph
from feynpoly.poly import parse_poly
from feynpoly.qed import (
    TopologyError,
    build_skeleton,
    census_multiset,
    expected_numerator_degree,
    export_integrand,
    i0_factor_check,
    make_context,
    one_loop_chart_integrand,
    one_loop_prefactor_chain,
    one_loop_value,
    propagator_graph,
    renormalised_integrand,
    strip_psi,
    table_column_counts,
    topology_census,
)


def test_skeleton_graph_h(fixtures):
    sk = build_skeleton(fixtures["graph_h"])
    assert sk.fermion_cycle == (1, 2, 3, 4, 5, 6)
    assert sk.D0 == ChordDiagram(((1, 4), (2, 5), (3, 6)))
    assert sk.D0.n == (1, 1, 1)
    assert sk.external_chord == (-4, -1)
    assert len(sk.internal_chords) == 2


def test_skeleton_small(fixtures):
    assert build_skeleton(fixtures["one_loop"]).D0 == ChordDiagram.chordless([1])
    two = build_skeleton(fixtures["two_loop"]).D0
    assert two.N == 2 and two.n == (2,)


@pytest.mark.parametrize(
    "edges, external, fragment",
    [
        ([(1, 1, 2, "fermion"), (2, 2, 1, "fermion")], (), "two external"),
        ([(1, 1, 2, "photon"), (2, 2, 1, "photon")], (1, 2), "no fermion"),
        ([(1, 1, 2, "fermion"), (2, 2, 1, "fermion"), (3, 3, 4, "fermion"), (4, 4, 3, "fermion"),
          (5, 2, 3, "photon"), (6, 4, 1, "photon")], (1, 3), "more than one cycle"),
        ([(1, 1, 2, "fermion"), (2, 2, 3, "fermion"), (3, 3, 1, "fermion")], (1, 2), "exactly one photon"),
        ([(1, 1, 2, "fermion"), (2, 2, 3, "fermion"), (3, 3, 4, "fermion"), (4, 4, 1, "fermion"),
          (5, 2, 2, "photon")], (1, 3), "loop"),
    ],
)
def test_skeleton_errors(edges, external, fragment):
    G = Graph.build(edges, external=external)
    with pytest.raises(TopologyError) as info:
        build_skeleton(G)
    assert fragment in str(info.value)


def test_one_loop_integrand(fixtures):
    rep = renormalised_integrand(fixtures["one_loop"])
    assert rep.reduced_numerator == parse_poly("+3*a1*a2", 2)
    assert rep.denominator_power == 4
    assert rep.prefactor == Fraction(8, 3)
    assert rep.counts["numerator_degree"] == expected_numerator_degree(1, 1)


def test_one_loop_value():
    assert abs(one_loop_value() - Fraction(4, 3)) < 1e-9
    chart, _ = quad(one_loop_chart_integrand, 0, float("inf"))
    assert abs(chart - 0.5) < 1e-9
    assert one_loop_prefactor_chain() == Fraction(4, 3)


@pytest.mark.parametrize("name", ["one_loop", "two_loop", "graph_h"])
def test_degree_audit(fixtures, name):
    G = fixtures[name]
    rep = renormalised_integrand(G, with_levels=False)
    N = make_context(G).N
    assert rep.numerator.is_homogeneous(expected_numerator_degree(N, rep.h1))


def test_graph_h_counts(fixtures):
    rep = renormalised_integrand(fixtures["graph_h"])
    c = rep.counts
    assert c["z0"] == 437
    assert c["z1"] == 4665
    assert c["numerator"] == 4626
    assert c["removed_psi_power"] == 0
    assert c["z0_removed_psi_power"] == 0
    assert c["z0_levels"] == [1, 22, 15]
    assert c["s_levels"] == [2, 60, 164]
    assert c["level_numerators"] == [93, 826, 1554]
    cols = table_column_counts(fixtures["graph_h"], rep)
    assert cols["z0_compact"] == 38
    assert cols["z1_level3_numerator"] == 1551


def test_strip_psi(fixtures):
    ctx = make_context(fixtures["two_loop"])
    p = ctx.psi ** 2 * ctx.phihat
    assert strip_psi(p, ctx.psi) == (2, ctx.phihat)
    assert strip_psi(p * 0, ctx.psi)[0] == 0


def test_export(fixtures, tmp_path):
    rep = renormalised_integrand(fixtures["one_loop"], with_levels=False)
    text = export_integrand(rep)
    assert "# graph: one_loop" in text
    assert "numerator = +3*a1*a2" in text
    lines = dict(l.split(" = ", 1) for l in text.splitlines() if " = " in l and not l.startswith("#"))
    assert parse_poly(lines["psi"], 2) == rep.psi


@pytest.mark.parametrize("name", ["one_loop", "two_loop", "graph_h"])
def test_i0_factor(fixtures, name):
    assert i0_factor_check(fixtures[name])


def test_propagator_graph_round_trip(fixtures):
    G = propagator_graph(6, [(2, 5), (3, 6)], (1, 4))
    assert len(make_context(G).d0.base) == 3
    assert len(renormalised_integrand(G, with_levels=False).z0) == 437


def test_census_small():
    assert len(topology_census(1, count_terms=False)) == 1
    assert census_multiset(topology_census(2)) == sorted(census_multiset(topology_census(2)))
    with pytest.raises(ValueError):
        topology_census(4)


def test_census_three_loops():
    entries = topology_census(3)
    assert len(entries) == 8
    assert sorted(census_multiset(entries)) == [9, 9, 44, 84, 231, 348, 437, 448]
