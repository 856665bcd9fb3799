"""Photon-propagator assembly: skeleton diagrams, the renormalised integrand
numerator, Kirchhoff-power reduction, term counts and the 1-loop check.

Positions on the skeleton base cycle alternate between graph vertices and
fermion edges along the fermion cycle, starting at the first external vertex.
A fermion edge sits at position label ``e.id``; a vertex ``v`` at ``-v``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .chords import ChordDiagram, project_pi0
from .graph import FERMION, PHOTON, Edge, Graph, GraphError, betti
from .partition import Context, brute_force_rhs, partial_sums, z0, z0_level, z1, z1_level
from .poly import MultiPoly


class TopologyError(GraphError):
    """The graph is not a one-fermion-cycle photon propagator graph."""


@dataclass(frozen=True)
class Skeleton:
    graph: Graph
    fermion_cycle: tuple[int, ...]
    D_Gamma: ChordDiagram
    D0: ChordDiagram
    internal_chords: tuple[tuple[int, int], ...]
    external_chord: tuple[int, int]
    external_positions: tuple[int, int]


def _fermion_cycle(G: Graph) -> list[Edge]:
    fermions = [e for e in G.edges if e.kind == FERMION]
    if not fermions:
        raise TopologyError("no fermion edges")
    out = {}
    for e in fermions:
        if e.src in out:
            raise TopologyError(f"vertex {e.src} has two outgoing fermion edges")
        out[e.src] = e
    if {e.dst for e in fermions} != set(out):
        raise TopologyError("fermion edges do not form a directed cycle")
    start = G.external[0] if G.external else min(out)
    if start not in out:
        raise TopologyError(f"external vertex {start} is not on the fermion cycle")
    cycle = []
    v = start
    while True:
        e = out[v]
        cycle.append(e)
        v = e.dst
        if v == start:
            break
        if len(cycle) > len(fermions):
            break
    if len(cycle) != len(fermions):
        raise TopologyError("fermion edges form more than one cycle")
    return cycle


def build_skeleton(G: Graph) -> Skeleton:
    if len(G.external) != 2:
        raise TopologyError("a photon propagator graph needs two external vertices")
    cycle = _fermion_cycle(G)
    on_cycle = [e.src for e in cycle]
    attached: dict[int, int] = {v: 0 for v in on_cycle}
    internal = []
    for e in G.edges:
        if e.kind != PHOTON:
            continue
        for v in (e.src, e.dst):
            if v not in attached:
                raise TopologyError(f"photon edge {e.id} ends at vertex {v} off the fermion cycle")
            attached[v] += 1
        if e.src == e.dst:
            raise TopologyError(f"photon edge {e.id} is a loop")
        internal.append((-e.src, -e.dst))
    x, y = G.external
    if x == y:
        raise TopologyError("external vertices must differ")
    for v in (x, y):
        attached[v] += 1
    bad = sorted(v for v, c in attached.items() if c != 1)
    if bad:
        raise TopologyError(f"vertices {bad} do not carry exactly one photon")
    if len(set(G.vertices)) != len(on_cycle):
        raise TopologyError("every vertex must lie on the fermion cycle")
    positions = []
    for e in cycle:
        positions += [-e.src, e.id]
    ext = (-x, -y)
    D_Gamma = ChordDiagram._coloured([positions], internal + [ext])
    return Skeleton(
        graph=G,
        fermion_cycle=tuple(e.id for e in cycle),
        D_Gamma=D_Gamma,
        D0=project_pi0(D_Gamma),
        internal_chords=tuple(sorted((min(a, b), max(a, b)) for a, b in internal)),
        external_chord=(min(ext), max(ext)),
        external_positions=ext,
    )


def make_context(G: Graph, word_colour: int = 2) -> Context:
    sk = build_skeleton(G)
    return Context(G, sk.D0, sk, word_colour)


# integrand --------------------------------------------------------------------


def strip_psi(p: MultiPoly, psi: MultiPoly) -> tuple[int, MultiPoly]:
    """Largest m with psi^m dividing p, and the quotient."""
    m = 0
    if not p:
        return 0, p
    while True:
        q = p.divmod_exact(psi)
        if q is None:
            return m, p
        p, m = q, m + 1


@dataclass
class IntegrandReport:
    graph_name: str
    h1: int
    numerator: MultiPoly
    kirchhoff_power: int
    removed_psi_power: int
    reduced_numerator: MultiPoly
    prefactor: Fraction
    psi: MultiPoly
    phihat: MultiPoly
    z0: MultiPoly
    z1: MultiPoly
    tensor: str = "(q^2 g^{mu nu} - q^mu q^nu) L"
    counts: dict[str, Any] = field(default_factory=dict)

    @property
    def denominator_power(self) -> int:
        return self.kirchhoff_power - self.removed_psi_power


def level_counts(ctx: Context) -> dict[str, Any]:
    """Term counts of the level polynomials and of their natural combinations."""
    N = ctx.N
    z0l = [z0_level(ctx, l) for l in range(1, N + 1)]
    sl = [z1_level(ctx, l) for l in range(1, N + 1)]
    return {
        "z0_levels": [len(p) for p in z0l],
        "z0_levels_total": sum(len(p) for p in z0l),
        "s_levels": [len(p) for p in sl],
        "s_levels_total": sum(len(p) for p in sl),
        # numerator of the level-l summand of phi_hat*Z0 + Z1 over psi^(l+2)
        "level_numerators": [
            len(ctx.phihat * p * (l + 2) - ctx.psi * s) for l, (p, s) in enumerate(zip(z0l, sl), start=1)
        ],
    }


def renormalised_integrand(G: Graph, with_levels: bool = True) -> IntegrandReport:
    ctx = make_context(G)
    h1 = betti(G)
    psi, ph = ctx.psi, ctx.phihat
    Z0, Z1 = z0(ctx), z1(ctx)
    num = ph * Z0 + Z1
    m, reduced = strip_psi(num, psi)
    m0, z0_reduced = strip_psi(Z0, psi)
    counts: dict[str, Any] = {
        "psi": len(psi),
        "phihat": len(ph),
        "z0": len(Z0),
        "z0_removed_psi_power": m0,
        "z0_reduced": len(z0_reduced),
        "z1": len(Z1),
        "numerator": len(num),
        "removed_psi_power": m,
        "reduced_numerator": len(reduced),
        "numerator_degree": num.degree() if num else 0,
    }
    if with_levels:
        counts.update(level_counts(ctx))
    return IntegrandReport(
        graph_name=G.name,
        h1=h1,
        numerator=num,
        kirchhoff_power=h1 + 3,
        removed_psi_power=m,
        reduced_numerator=reduced,
        prefactor=Fraction(2 ** (h1 + 2), 3),
        psi=psi,
        phihat=ph,
        z0=Z0,
        z1=Z1,
        counts=counts,
    )


def table_column_counts(G: Graph, report: IntegrandReport | None = None) -> dict[str, int]:
    """Counts to set beside one column of the published term-count tables.

    ``z0_compact`` is the per-level count sum; ``z0_max_psi_removed`` is what
    maximal psi-power removal leaves.  ``z1_level3_numerator`` counts
    psi * Z1|_3 written over a common denominator.
    """
    ctx = make_context(G)
    r = report if report is not None else renormalised_integrand(G)
    c = r.counts if "z0_levels_total" in r.counts else {**r.counts, **level_counts(ctx)}
    out = {
        "z0": c["z0"],
        "z0_compact": c["z0_levels_total"],
        "z0_max_psi_removed": c["z0_reduced"],
        "numerator": c["numerator"],
        "numerator_compact": c["reduced_numerator"],
        "s1": c["s_levels"][0],
    }
    if ctx.N >= 3:
        out["z1_level3_numerator"] = len(ctx.psi * z1_level(ctx, 3) - ctx.phihat * z0_level(ctx, 3) * 3)
    return out


def expected_numerator_degree(N: int, h1: int) -> int:
    return N * h1 + h1 - N + 1


def export_integrand(report: IntegrandReport) -> str:
    lines = [
        f"# graph: {report.graph_name}",
        f"# h1: {report.h1}",
        f"# prefactor: {report.prefactor}",
        f"# kirchhoff_power: {report.kirchhoff_power}",
        f"# removed_psi_power: {report.removed_psi_power}",
        f"# tensor: {report.tensor}, L = log(q^2/mu^2)",
        f"psi = {report.psi.to_text()}",
        f"phihat = {report.phihat.to_text()}",
        f"numerator = {report.reduced_numerator.to_text()}",
    ]
    return "\n".join(lines) + "\n"


# 1-loop check -----------------------------------------------------------------


def one_loop_chart_integrand(a: float) -> float:
    """3 phi_hat / psi^4 on the chart alpha_2 = 1."""
    return 3.0 * a / (1.0 + a) ** 4


def one_loop_value() -> float:
    """8 times the chart integral of alpha/(1+alpha)^4, which is 4/3."""
    from scipy.integrate import quad

    val, err = quad(lambda a: a / (1.0 + a) ** 4, 0.0, float("inf"), epsabs=1e-13, epsrel=1e-13)
    if not err < 1e-10:
        raise ArithmeticError(f"quadrature did not converge (error estimate {err})")
    return 8.0 * val


def one_loop_prefactor_chain() -> Fraction:
    """2^(h1+2)/3 times the numerator coefficient 3 times the exact chart integral 1/6, per unit L."""
    # the 3 of the numerator cancels the 1/3 of the prefactor, leaving 2^(h1+2) = 8
    h1 = 1
    return Fraction(2 ** (h1 + 2), 3) * 3 * Fraction(1, 6)


def i0_factor_check(G: Graph) -> bool:
    """z0 against the chord-diagram sum, plus the 2^h1 normalisation of the k=0 term.

    For a k=0 diagram with sgn(x, y) = +1 the external chord closes one more
    two-coloured cycle, so its trace value carries (-2)^(c~+1); with the 1/2 of
    the diagram sum and the -1/2 coming from (-2)^1 this is 2^h1 times Z0 up
    to sign, and the sign is +1 exactly when every diagram is in the + bucket.
    """
    ctx = make_context(G)
    Z0 = z0(ctx)
    if Z0 != brute_force_rhs(ctx, 0):
        return False
    plus, zero, minus = partial_sums(ctx, 0)
    return bool(zero.is_zero() and minus.is_zero() and plus == Z0)


# topology census --------------------------------------------------------------


def _matchings(items: list[int]) -> list[list[tuple[int, int]]]:
    if not items:
        return [[]]
    a, rest = items[0], items[1:]
    out = []
    for i, b in enumerate(rest):
        for m in _matchings(rest[:i] + rest[i + 1:]):
            out.append([(a, b)] + m)
    return out


def propagator_graph(n_vertices: int, photons: list[tuple[int, int]], external: tuple[int, int], name: str = "") -> Graph:
    """Fermion cycle 1 -> 2 -> ... -> n -> 1 with photon edges numbered after it."""
    edges = [(i, i, i % n_vertices + 1, FERMION) for i in range(1, n_vertices + 1)]
    for j, (a, b) in enumerate(photons, start=n_vertices + 1):
        edges.append((j, a, b, PHOTON))
    return Graph.build(edges, external=external, name=name)


@dataclass(frozen=True)
class CensusEntry:
    graph: Graph
    z0_terms: int


def topology_census(h1: int, count_terms: bool = True) -> list[CensusEntry]:
    """One-fermion-cycle photon propagator graphs up to rotation and reflection of the cycle.

    The external vertices are unordered.  Classes are keyed by their smallest
    relabelled chord set, with the representative's first external vertex at 1.
    """
    if not 1 <= h1 <= 3:
        raise ValueError("census supports 1 to 3 loops")
    n = 2 * h1
    seen: set[tuple] = set()
    reps = []
    for m in _matchings(list(range(1, n + 1))):
        for ext in m:
            internal = [c for c in m if c != ext]
            key = _orbit_key(n, internal, ext)
            if key in seen:
                continue
            seen.add(key)
            reps.append(key)
    out = []
    for idx, (ext, internal) in enumerate(sorted(reps)):
        G = propagator_graph(n, [tuple(c) for c in internal], tuple(ext), name=f"census_{h1}_{idx + 1}")
        count = len(z0(make_context(G))) if count_terms else 0
        out.append(CensusEntry(G, count))
    return out


def _orbit_key(n: int, internal: list[tuple[int, int]], ext: tuple[int, int]) -> tuple:
    best = None
    for shift, flip in itertools.product(range(n), (False, True)):
        def f(v: int) -> int:
            w = (v - 1 + shift) % n
            if flip:
                w = (-w) % n
            return w + 1

        e = tuple(sorted((f(ext[0]), f(ext[1]))))
        if e[0] != 1:
            continue
        ch = tuple(sorted(tuple(sorted((f(a), f(b)))) for a, b in internal))
        cand = (e, ch)
        if best is None or cand < best:
            best = cand
    assert best is not None
    return best


def census_multiset(entries: list[CensusEntry]) -> list[int]:
    return sorted(e.z0_terms for e in entries)


__all__ = [
    "CensusEntry",
    "IntegrandReport",
    "Skeleton",
    "TopologyError",
    "build_skeleton",
    "census_multiset",
    "table_column_counts",
    "export_integrand",
    "expected_numerator_degree",
    "i0_factor_check",
    "make_context",
    "one_loop_prefactor_chain",
    "one_loop_value",
    "propagator_graph",
    "renormalised_integrand",
    "strip_psi",
    "topology_census",
]
