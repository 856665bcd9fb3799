"""Word pairs, base-edge partitions and the partition polynomials Z0 and Z1.

The chord-diagram sums that these polynomials are compared against are
computed here as well (``brute_force_rhs``), directly from cycle counts,
without going through any word or partition bookkeeping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial
from typing import Any, Iterator, Sequence, TypeVar

from .chords import ChordDiagram, colour_cycle_counts, enumerate_completions, sgn_vertices
from .gpoly import Y, cycle_poly, dodgson_cycle, kirchhoff, mixed_dodgson, phi_hat, x_poly
from .graph import Graph
from .parallel import pmap
from .poly import MultiPoly, NotDivisible, poly_sum

T = TypeVar("T")
Edge2 = tuple[int, int]
BaseEdgePartition = tuple[tuple[Edge2, ...], ...]


@dataclass(frozen=True)
class WordPair:
    u: tuple
    v: tuple

    def __iter__(self):
        return iter((self.u, self.v))

    def __str__(self) -> str:
        def w(x: tuple) -> str:
            return "".join(f"a{c}" if c != Y else "y" for c in x)

        return f"({w(self.u)},{w(self.v)})"


@dataclass
class Context:
    """A graph together with the chordless diagram whose vertices are its edges."""

    graph: Graph
    d0: ChordDiagram
    skeleton: Any = None
    word_colour: int = 2
    _terms: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        ids = set(self.graph.edge_ids)
        missing = [v for v in self.d0.vertices if v not in ids]
        if missing:
            raise ValueError(f"diagram vertices {missing} are not edges of the graph")
        if self.word_colour not in (1, 2):
            raise ValueError("word colour must be 1 or 2")

    @property
    def N(self) -> int:
        return self.d0.N

    @property
    def nvars(self) -> int:
        return self.graph.nvars

    @cached_property
    def psi(self) -> MultiPoly:
        return kirchhoff(self.graph)

    @cached_property
    def phihat(self) -> MultiPoly:
        return phi_hat(self.graph)

    def with_word_colour(self, colour: int) -> "Context":
        return Context(self.graph, self.d0, self.skeleton, colour)


# word pairs and partitions ----------------------------------------------------


def word_pair_classes(D0: ChordDiagram, colour: int) -> list[WordPair]:
    """One representative per class: base edges in order of their lower end,
    lower ends in the first word, with every subset of pairs but the first swapped."""
    edges = sorted((min(a, b), max(a, b)) for a, b in D0.colour_edges(colour))
    out = []
    for flips in itertools.product((0, 1), repeat=max(len(edges) - 1, 0)):
        t = (0,) + flips
        u = tuple(b if s else a for (a, b), s in zip(edges, t))
        v = tuple(a if s else b for (a, b), s in zip(edges, t))
        out.append(WordPair(u, v))
    return out


def set_partitions(items: Sequence[T]) -> Iterator[list[list[T]]]:
    """Set partitions in restricted-growth-string order."""
    n = len(items)
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def rec(i: int, m: int) -> Iterator[list[list[T]]]:
        if i == n:
            blocks: list[list[T]] = [[] for _ in range(m + 1)]
            for it, b in zip(items, rgs):
                blocks[b].append(it)
            yield blocks
            return
        for b in range(m + 2):
            rgs[i] = b
            yield from rec(i + 1, max(m, b))

    rgs[0] = 0
    yield from rec(1, 0)


def base_edge_partitions(D0: ChordDiagram, colour: int, size: int | None = None) -> list[BaseEdgePartition]:
    edges = sorted((min(a, b), max(a, b)) for a, b in D0.colour_edges(colour))
    out = []
    for blocks in set_partitions(edges):
        if size is None or len(blocks) == size:
            out.append(tuple(tuple(b) for b in blocks))
    return out


def lambda_split(E: BaseEdgePartition, w: WordPair) -> list[WordPair]:
    """Restrict the pair to each part's vertices, keeping letter order.

    Returns an empty list when some part gets words of different lengths.
    """
    out = []
    for part in E:
        verts = {x for e in part for x in e}
        u = tuple(a for a in w.u if a in verts)
        v = tuple(b for b in w.v if b in verts)
        if len(u) != len(v):
            return []
        out.append(WordPair(u, v))
    return out


def perm_sign(seq: Sequence, ref: Sequence) -> int:
    """Sign of the permutation taking ``ref`` to ``seq``."""
    pos = {x: i for i, x in enumerate(ref)}
    idx = [pos[x] for x in seq]
    sign = 1
    seen = [False] * len(idx)
    for i in range(len(idx)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = idx[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sgn_partition(E: BaseEdgePartition, w: WordPair) -> int:
    parts = lambda_split(E, w)
    if not parts:
        return 0
    cu = tuple(x for p in parts for x in p.u)
    cv = tuple(x for p in parts for x in p.v)
    return perm_sign(cu, w.u) * perm_sign(cv, w.v)


def _level_terms(ctx: Context, l: int) -> list[tuple[int, list[WordPair]]]:
    """Nonzero (sign, split) pairs over all partitions with l parts and all word pairs."""
    key = (ctx.word_colour, l)
    hit = ctx._terms.get(key)
    if hit is None:
        words = word_pair_classes(ctx.d0, ctx.word_colour)
        hit = []
        for E in base_edge_partitions(ctx.d0, 3 - ctx.word_colour, l):
            for w in words:
                s = sgn_partition(E, w)
                if s:
                    hit.append((s, lambda_split(E, w)))
        ctx._terms[key] = hit
    return hit


def _check_level(ctx: Context, l: int) -> None:
    if not 1 <= l <= ctx.N:
        raise ValueError(f"level {l} outside 1..{ctx.N}")


# partition polynomials --------------------------------------------------------


def z0_level(ctx: Context, l: int) -> MultiPoly:
    _check_level(ctx, l)
    G = ctx.graph

    def term(item: tuple[int, list[WordPair]]) -> MultiPoly:
        s, parts = item
        p = MultiPoly.constant(G.nvars, s)
        for wp in parts:
            p = p * dodgson_cycle(G, wp.u, wp.v)
            if not p:
                break
        return p

    return poly_sum(pmap(term, _level_terms(ctx, l)), G.nvars)


def z0(ctx: Context) -> MultiPoly:
    N = ctx.N
    neg_psi = -ctx.psi
    return poly_sum(
        (neg_psi ** (N - l) * z0_level(ctx, l) * factorial(l + 1) for l in range(1, N + 1)),
        ctx.nvars,
    )


def z1_level(ctx: Context, l: int) -> MultiPoly:
    """S_l: the part of the level-l first-order sum carrying a vertex letter.

    The full level polynomial is -l * (phi_hat / psi) * Z0|_l + S_l.
    """
    _check_level(ctx, l)
    G = ctx.graph

    def term(item: tuple[int, list[WordPair]]) -> MultiPoly:
        s, parts = item
        plain = [dodgson_cycle(G, wp.u, wp.v) for wp in parts]
        acc = MultiPoly.zero(G.nvars)
        for c, wp in enumerate(parts):
            p = mixed_dodgson(G, wp.u + (Y,), wp.v + (Y,))
            for j, q in enumerate(plain):
                if not p:
                    break
                if j != c:
                    p = p * q
            acc = acc + p
        return acc * s

    return poly_sum(pmap(term, _level_terms(ctx, l)), G.nvars)


def _halve(p: MultiPoly) -> MultiPoly:
    try:
        return p.scale_div(2)
    except NotDivisible as exc:
        raise NotDivisible("odd coefficient before halving: sign or weight convention broken") from exc


def z1(ctx: Context) -> MultiPoly:
    # (-psi)^(N-l+1) * (-l phi/psi Z0|_l + S_l) = l phi (-psi)^(N-l) Z0|_l + (-psi)^(N-l+1) S_l
    N = ctx.N
    neg_psi = -ctx.psi
    terms = []
    for l in range(1, N + 1):
        f = factorial(l + 1)
        terms.append(ctx.phihat * neg_psi ** (N - l) * z0_level(ctx, l) * (l * f))
        terms.append(neg_psi ** (N - l + 1) * z1_level(ctx, l) * f)
    return _halve(poly_sum(terms, ctx.nvars))


# chord-diagram sums -----------------------------------------------------------


def diagram_term(ctx: Context, D: ChordDiagram) -> MultiPoly:
    """(-2)^c~(D) times the chord cycle polynomials and the free-vertex x polynomials."""
    G = ctx.graph
    weight = (-2) ** colour_cycle_counts(D).c_tilde
    p = MultiPoly.constant(G.nvars, weight)
    for a, b in D.chords:
        p = p * cycle_poly(G, a, b)
        if not p:
            return p
    for w in D.free_vertices:
        p = p * x_poly(G, w)
        if not p:
            return p
    return p


def brute_force_rhs(ctx: Context, k: int) -> MultiPoly:
    if k not in (0, 1):
        raise ValueError("only k = 0 and k = 1 are supported")
    diagrams = enumerate_completions(ctx.d0, k)
    return _halve(poly_sum(pmap(lambda D: diagram_term(ctx, D), diagrams), ctx.nvars))


def external_signum(ctx: Context, D: ChordDiagram) -> int:
    """sgn(x, y) of the external attachment points in the skeleton completed by D."""
    sk = ctx.skeleton
    if sk is None:
        raise ValueError("partial sums need a skeleton (build the context from a Feynman graph)")
    full = ChordDiagram(sk.D_Gamma.base, tuple(sk.internal_chords) + D.chords)
    x, y = sk.external_positions
    return sgn_vertices(full, x, y)


def partial_sums(ctx: Context, k: int) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    """Chord-diagram sum split by sgn(x, y) = +1, 0, -1."""
    if k not in (0, 1):
        raise ValueError("only k = 0 and k = 1 are supported")
    diagrams = enumerate_completions(ctx.d0, k)
    signs = [external_signum(ctx, D) for D in diagrams]
    terms = pmap(lambda D: diagram_term(ctx, D), diagrams)
    buckets = []
    for target in (1, 0, -1):
        buckets.append(_halve(poly_sum((t for t, s in zip(terms, signs) if s == target), ctx.nvars)))
    return buckets[0], buckets[1], buckets[2]


def partial_sums_z1(ctx: Context) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
    return partial_sums(ctx, 1)


# Stirling numbers -------------------------------------------------------------


def stirling2(k: int, l: int) -> int:
    row = [1] + [0] * l
    for n in range(1, k + 1):
        new = [0] * (l + 1)
        for j in range(1, min(n, l) + 1):
            new[j] = row[j - 1] + j * row[j]
        row = new
    return row[l]


@dataclass(frozen=True)
class StirlingRow:
    k: int
    lhs: int
    rhs: int

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def stirling_check(kmax: int) -> list[StirlingRow]:
    """Sum over l of S(k,l) (-1)^l (l+1)! against (-2)^k, for k = 1..kmax."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    rows = []
    for k in range(1, kmax + 1):
        lhs = sum(stirling2(k, l) * (-1) ** l * factorial(l + 1) for l in range(1, k + 1))
        rows.append(StirlingRow(k, lhs, (-2) ** k))
    return rows
