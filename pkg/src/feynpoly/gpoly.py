"""Graph polynomials: Kirchhoff, forest, Dodgson, cycle, bond and x polynomials.

Signs come from the combinatorial definitions (cycle and bond orientations,
forest sums).  Determinant routes are independent oracles that agree up to
sign.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence, Union

from .graph import (
    Graph,
    GraphError,
    bonds,
    dot_graph,
    maximal_forests,
    minor,
    simple_cycles,
    spanning_forests,
)
from .poly import MultiPoly, NotDivisible, exact_div

Y = "y"
Letter = Union[int, str]
Index = Union[int, tuple[str, int]]  # edge id, or ("v", vertex id)


def edge_monomial(G: Graph, eids: Iterable[int]) -> MultiPoly:
    exps = [0] * G.nvars
    for eid in eids:
        exps[eid - 1] += 1
    return MultiPoly.monomial(G.nvars, exps)


def alpha(G: Graph, eid: int) -> MultiPoly:
    return MultiPoly.variable(G.nvars, eid - 1)


def _complement_sum(G: Graph, forests: Iterable[frozenset[int]]) -> MultiPoly:
    ids = G.edge_ids
    terms: dict[tuple[int, ...], int] = {}
    for f in forests:
        exps = [0] * G.nvars
        for eid in ids:
            if eid not in f:
                exps[eid - 1] = 1
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + 1
    return MultiPoly(G.nvars, terms)


@lru_cache(maxsize=4096)
def kirchhoff(G: Graph) -> MultiPoly:
    """Sum over maximal spanning forests of the product of non-forest edge variables.

    For a disconnected graph this is the product over its components.
    """
    return _complement_sum(G, maximal_forests(G))


def phi_hat(G: Graph) -> MultiPoly:
    """Kirchhoff polynomial of the graph with its external vertices identified."""
    return kirchhoff(dot_graph(G))


def spanning_forest_poly(G: Graph, parts: Sequence[Iterable[int]]) -> MultiPoly:
    return _complement_sum(G, spanning_forests(G, parts))


# determinants -----------------------------------------------------------------


def _is_unit(p: MultiPoly) -> bool:
    return len(p) == 1 and p.degree() == 0


def bareiss_det(matrix: Sequence[Sequence[MultiPoly]], nvars: int) -> MultiPoly:
    """Fraction-free determinant with full pivoting (smallest pivot first)."""
    n = len(matrix)
    if n == 0:
        return MultiPoly.constant(nvars, 1)
    M = [list(row) for row in matrix]
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    sign = 1
    prev = MultiPoly.constant(nvars, 1)
    for k in range(n):
        best = None
        for i in range(k, n):
            row = M[i]
            for j in range(k, n):
                p = row[j]
                if p:
                    key = (p.degree(), len(p))
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            return MultiPoly.zero(nvars)
        _, pi, pj = best
        if pi != k:
            M[k], M[pi] = M[pi], M[k]
            sign = -sign
        if pj != k:
            for row in M:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        piv = M[k][k]
        unit_prev = _is_unit(prev)
        prev_c = prev.constant_term() if unit_prev else 0
        rk = M[k]
        for i in range(k + 1, n):
            ri = M[i]
            lead = ri[k]
            for j in range(k + 1, n):
                a = ri[j]
                b = rk[j]
                if lead and b:
                    num = piv * a - lead * b if a else -(lead * b)
                elif a:
                    num = piv * a
                else:
                    continue
                ri[j] = num.scale_div(prev_c) if unit_prev else exact_div(num, prev)
            ri[k] = MultiPoly.zero(nvars)
        prev = piv
    return M[n - 1][n - 1] * sign


def cofactor_det(matrix: Sequence[Sequence[MultiPoly]], nvars: int) -> MultiPoly:
    """Laplace expansion along rows, memoised on the set of used columns."""
    n = len(matrix)
    if n == 0:
        return MultiPoly.constant(nvars, 1)
    memo: dict[int, MultiPoly] = {}

    def rec(r: int, free: int) -> MultiPoly:
        if r == n:
            return MultiPoly.constant(nvars, 1)
        hit = memo.get(free)
        if hit is not None:
            return hit
        total = MultiPoly.zero(nvars)
        pos = 0
        for c in range(n):
            if free >> c & 1:
                entry = matrix[r][c]
                if entry:
                    sub = rec(r + 1, free & ~(1 << c))
                    if sub:
                        term = entry * sub
                        total = total - term if pos % 2 else total + term
                pos += 1
        memo[free] = total
        return total

    return rec(0, (1 << n) - 1)


# graph matrix -----------------------------------------------------------------


def graph_matrix(G: Graph, v0: int | None = None) -> tuple[list[list[MultiPoly]], list[Index]]:
    """Expanded Laplacian [[A, I'], [-I'^T, 0]] with the column of ``v0`` removed.

    Rows and columns: edges ascending, then vertices ascending without ``v0``.
    ``I[e][v]`` is +1 if v is the target of e and -1 if it is the source.
    """
    if v0 is None:
        v0 = G.vertices[0]
    if v0 not in G.vertices:
        raise GraphError(f"unknown vertex {v0}")
    n = G.nvars
    labels: list[Index] = [e.id for e in G.edges] + [("v", v) for v in G.vertices if v != v0]
    pos = {lab: i for i, lab in enumerate(labels)}
    size = len(labels)
    zero = MultiPoly.zero(n)
    M = [[zero] * size for _ in range(size)]
    for e in G.edges:
        r = pos[e.id]
        M[r][r] = alpha(G, e.id)
        inc: dict[int, int] = {}
        inc[e.dst] = inc.get(e.dst, 0) + 1
        inc[e.src] = inc.get(e.src, 0) - 1
        for v, s in inc.items():
            if s and v != v0:
                c = pos[("v", v)]
                M[r][c] = MultiPoly.constant(n, s)
                M[c][r] = MultiPoly.constant(n, -s)
    return M, labels


def kirchhoff_det(G: Graph) -> MultiPoly:
    """Kirchhoff polynomial as the determinant of the graph matrix."""
    M, _ = graph_matrix(G)
    return bareiss_det(M, G.nvars)


def _normalise_index(ix: Index) -> Index:
    if isinstance(ix, tuple):
        if len(ix) != 2 or ix[0] != "v":
            raise ValueError(f"bad index {ix!r}")
        return ("v", int(ix[1]))
    return int(ix)


def dodgson_det(G: Graph, rows: Iterable[Index], cols: Iterable[Index], v0: int | None = None) -> MultiPoly:
    """Determinant of the graph matrix with the given rows and columns removed."""
    rows = [_normalise_index(r) for r in rows]
    cols = [_normalise_index(c) for c in cols]
    if len(rows) != len(cols):
        raise ValueError("row and column sets differ in size")
    if v0 is None:
        v0 = G.external[0] if G.external else G.vertices[0]
    if ("v", v0) in rows or ("v", v0) in cols:
        raise ValueError("the deleted vertex cannot be listed")
    M, labels = graph_matrix(G, v0)
    pos = {lab: i for i, lab in enumerate(labels)}
    for ix in rows + cols:
        if ix not in pos:
            raise ValueError(f"unknown index {ix!r}")
    rdel = {pos[r] for r in rows}
    cdel = {pos[c] for c in cols}
    sub = [[M[i][j] for j in range(len(M)) if j not in cdel] for i in range(len(M)) if i not in rdel]
    return bareiss_det(sub, G.nvars)


# cycle and bond polynomials ---------------------------------------------------


@lru_cache(maxsize=1024)
def cycle_table(G: Graph) -> dict[tuple[int, int], MultiPoly]:
    """All nonzero cycle polynomials of G, keyed by ordered edge pairs."""
    acc: dict[tuple[int, int], MultiPoly] = {}
    for C in simple_cycles(G):
        es = sorted(C.edges)
        rest = kirchhoff(minor(G, delete=es[:1], contract=es[1:]))
        for i in es:
            for j in es:
                term = rest if C.sign(i) * C.sign(j) > 0 else -rest
                acc[(i, j)] = acc[(i, j)] + term if (i, j) in acc else term
    return {k: v for k, v in acc.items() if v}


def cycle_poly(G: Graph, i: int, j: int) -> MultiPoly:
    """Signed sum over simple cycles through i and j of psi of G with the cycle contracted."""
    G.edge(i), G.edge(j)
    return cycle_table(G).get((i, j), MultiPoly.zero(G.nvars))


@lru_cache(maxsize=1024)
def bond_table(G: Graph) -> dict[tuple[int, int], MultiPoly]:
    acc: dict[tuple[int, int], MultiPoly] = {}
    for B in bonds(G):
        es = sorted(B.edges)
        base = edge_monomial(G, es) * kirchhoff(minor(G, delete=es))
        for i in es:
            for j in es:
                term = base if B.sign(i) * B.sign(j) > 0 else -base
                acc[(i, j)] = acc[(i, j)] + term if (i, j) in acc else term
    return {k: v for k, v in acc.items() if v}


def bond_poly(G: Graph, i: int, j: int) -> MultiPoly:
    """Signed sum over bonds through i and j of alpha_B times psi of G minus B."""
    G.edge(i), G.edge(j)
    return bond_table(G).get((i, j), MultiPoly.zero(G.nvars))


# x polynomials ----------------------------------------------------------------


@lru_cache(maxsize=4096)
def x_poly(G: Graph, eid: int) -> MultiPoly:
    """Edge polynomial of the momentum flow through ``eid`` (in-vertex x, out-vertex y)."""
    if len(G.external) != 2:
        raise GraphError("x polynomials need two external vertices")
    x, y = G.external
    e = G.edge(eid)

    def phi(w: int) -> MultiPoly:
        if w == x:
            return MultiPoly.zero(G.nvars)
        return spanning_forest_poly(G, [{x}, {w, y}])

    return exact_div(phi(e.dst) - phi(e.src), alpha(G, eid))


# Dodgson cycle polynomials ----------------------------------------------------


def _has_repeat(word: Sequence[Letter]) -> bool:
    return len(set(word)) != len(word)


def chi_matrix(G: Graph, u: Sequence[int], v: Sequence[int]) -> list[list[MultiPoly]]:
    return [[cycle_poly(G, a, b) for b in v] for a in u]


@lru_cache(maxsize=65536)
def _dodgson_cycle(G: Graph, u: tuple[int, ...], v: tuple[int, ...]) -> MultiPoly:
    k = len(u)
    if k == 0:
        return kirchhoff(G)
    if k == 1:
        return cycle_poly(G, u[0], v[0])
    num = cofactor_det(chi_matrix(G, u, v), G.nvars)
    return exact_div(num, kirchhoff(G) ** (k - 1))


def dodgson_cycle(G: Graph, u: Sequence[int], v: Sequence[int]) -> MultiPoly:
    """Higher Dodgson cycle polynomial: det of first-order entries over psi^(k-1)."""
    u, v = tuple(u), tuple(v)
    if len(u) != len(v):
        raise ValueError("words differ in length")
    if Y in u or Y in v:
        raise ValueError("use mixed_dodgson for words containing the vertex letter")
    if _has_repeat(u) or _has_repeat(v):
        return MultiPoly.zero(G.nvars)
    return _dodgson_cycle(G, u, v)


@lru_cache(maxsize=65536)
def _mixed_dodgson(G: Graph, u: tuple[int, ...], v: tuple[int, ...]) -> MultiPoly:
    k = len(u)
    ph = phi_hat(G)
    if k == 0:
        return ph
    A = chi_matrix(G, u, v)
    n = G.nvars
    # Bordered determinant: phi_hat * det(A) - sum_ij b_i c_j adj(A)_ji, where each
    # symbol product b_i c_j is replaced by -x^{u_i} x^{v_j}.
    total = ph * cofactor_det(A, n)
    for i in range(k):
        xi = x_poly(G, u[i])
        if not xi:
            continue
        for j in range(k):
            xj = x_poly(G, v[j])
            if not xj:
                continue
            minor_ij = [[A[r][c] for c in range(k) if c != j] for r in range(k) if r != i]
            cof = cofactor_det(minor_ij, n)
            if not cof:
                continue
            term = xi * xj * cof
            total = total - term if (i + j) % 2 else total + term
    return exact_div(total, kirchhoff(G) ** k)


def mixed_dodgson(G: Graph, u: Sequence[Letter], v: Sequence[Letter]) -> MultiPoly:
    """Dodgson polynomial with the out-vertex letter ``y`` closing both words."""
    u, v = tuple(u), tuple(v)
    if len(u) != len(v):
        raise ValueError("words differ in length")
    if not u or u[-1] != Y or v[-1] != Y:
        raise ValueError("both words must end with the vertex letter 'y'")
    ue, ve = u[:-1], v[:-1]
    if Y in ue or Y in ve:
        raise ValueError("the vertex letter may only appear last")
    if _has_repeat(ue) or _has_repeat(ve):
        return MultiPoly.zero(G.nvars)
    return _mixed_dodgson(G, tuple(int(a) for a in ue), tuple(int(b) for b in ve))


def dot_bond_poly(G: Graph, i: int, j: int) -> MultiPoly:
    """Bond polynomial of the graph with identified external vertices."""
    return bond_poly(dot_graph(G), i, j)


__all__ = [
    "Y",
    "NotDivisible",
    "alpha",
    "bareiss_det",
    "bond_poly",
    "chi_matrix",
    "cofactor_det",
    "cycle_poly",
    "dodgson_cycle",
    "dodgson_det",
    "dot_bond_poly",
    "edge_monomial",
    "graph_matrix",
    "kirchhoff",
    "kirchhoff_det",
    "mixed_dodgson",
    "phi_hat",
    "spanning_forest_poly",
    "x_poly",
]
