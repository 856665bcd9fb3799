"""Edge-coloured chord diagrams.

A diagram is a set of base cycles (even length, edges alternately coloured
1 and 2) plus chords (colour 0) forming a partial matching of the vertices.
Vertices without a chord are *free*.

Each base cycle is stored as a vertex list starting at its lowest label, in
the traversal direction for which the edge leaving that first vertex has
colour 2.  Edge ``(c[i], c[i+1])`` therefore has colour 2 for even ``i`` and
colour 1 for odd ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class ChordError(ValueError):
    """Invalid diagram or an operation on a vertex that is not free."""


def _canonical(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate or reverse a cycle whose first edge has colour 2 into canonical form."""
    c = list(cycle)
    m = c.index(min(c))
    if m % 2 == 0:
        return tuple(c[m:] + c[:m])
    return tuple(c[m::-1] + c[:m:-1])


@dataclass(frozen=True)
class CycleCounts:
    c2_1: int
    c2_2: int
    c3: int

    @property
    def c2(self) -> int:
        return self.c2_1 + self.c2_2

    @property
    def c_tilde(self) -> int:
        return self.c2_1 + self.c2_2 + self.c3


@dataclass(frozen=True)
class ChordDiagram:
    base: tuple[tuple[int, ...], ...]
    chords: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        cycles = []
        seen: set[int] = set()
        for c in self.base:
            c = tuple(c)
            if len(c) < 2 or len(c) % 2:
                raise ChordError(f"base cycle {c} must have an even number (>= 2) of vertices")
            if seen & set(c) or len(set(c)) != len(c):
                raise ChordError("base cycles must not share or repeat vertices")
            seen |= set(c)
            m = c.index(min(c))
            cycles.append(c[m:] + c[:m])
        cycles.sort(key=lambda c: c[0])
        chords = []
        used: set[int] = set()
        for a, b in self.chords:
            if a == b:
                raise ChordError(f"chord ({a}, {b}) is a loop")
            if a not in seen or b not in seen:
                raise ChordError(f"chord ({a}, {b}) references an unknown vertex")
            if a in used or b in used:
                raise ChordError("chords must form a matching")
            used |= {a, b}
            chords.append((min(a, b), max(a, b)))
        object.__setattr__(self, "base", tuple(cycles))
        object.__setattr__(self, "chords", tuple(sorted(chords)))

    @classmethod
    def _coloured(cls, cycles: Iterable[Sequence[int]], chords: Iterable[tuple[int, int]] = ()) -> "ChordDiagram":
        """Build from cycles whose first listed edge has colour 2."""
        return cls(tuple(_canonical(c) for c in cycles), tuple(chords))

    @classmethod
    def chordless(cls, n: Sequence[int]) -> "ChordDiagram":
        """Base cycles of half sizes ``n`` on consecutive labels starting at 1."""
        cycles = []
        start = 1
        for ni in n:
            cycles.append(tuple(range(start, start + 2 * ni)))
            start += 2 * ni
        return cls(tuple(cycles))

    # structure --------------------------------------------------------------

    @property
    def n(self) -> tuple[int, ...]:
        return tuple(len(c) // 2 for c in self.base)

    @property
    def N(self) -> int:
        return sum(self.n)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for c in self.base for v in c))

    @cached_property
    def _partners(self) -> tuple[dict[int, int], dict[int, int], dict[int, int]]:
        p0: dict[int, int] = {}
        p1: dict[int, int] = {}
        p2: dict[int, int] = {}
        for c in self.base:
            L = len(c)
            for i, v in enumerate(c):
                nxt, prv = c[(i + 1) % L], c[(i - 1) % L]
                if i % 2 == 0:
                    p2[v], p1[v] = nxt, prv
                else:
                    p1[v], p2[v] = nxt, prv
        for a, b in self.chords:
            p0[a], p0[b] = b, a
        return p0, p1, p2

    def partner(self, v: int, colour: int) -> int | None:
        return self._partners[colour].get(v)

    @property
    def free_vertices(self) -> tuple[int, ...]:
        p0 = self._partners[0]
        return tuple(v for v in self.vertices if v not in p0)

    def is_free(self, v: int) -> bool:
        return v in self._partners[1] and v not in self._partners[0]

    def colour_edges(self, colour: int) -> list[tuple[int, int]]:
        """Base edges of one colour as (first, second) in traversal order."""
        if colour not in (1, 2):
            raise ChordError("base edges have colour 1 or 2")
        out = []
        for c in self.base:
            L = len(c)
            start = 0 if colour == 2 else 1
            for i in range(start, L, 2):
                out.append((c[i], c[(i + 1) % L]))
        return out

    # bicoloured paths -------------------------------------------------------

    @cached_property
    def _paths(self) -> tuple[dict[int, int], dict[int, int]]:
        """For each colour j in 1, 2: free vertex -> other end of its 0j-path."""
        p0 = self._partners[0]
        out = []
        for j in (1, 2):
            pj = self._partners[j]
            ends = {}
            for w in self.free_vertices:
                cur = pj[w]
                while cur in p0:
                    cur = pj[p0[cur]]
                ends[w] = cur
            out.append(ends)
        return out[0], out[1]

    def tricoloured_cycles(self) -> list[list[int]]:
        """Free-vertex sequences of the tricoloured cycles, first step along a 02-path."""
        path1, path2 = self._paths
        seen: set[int] = set()
        out = []
        for w0 in self.free_vertices:
            if w0 in seen:
                continue
            seq = [w0]
            seen.add(w0)
            cur, step = path2[w0], 1
            while cur != w0:
                seq.append(cur)
                seen.add(cur)
                cur = path1[cur] if step % 2 else path2[cur]
                step += 1
            out.append(seq)
        return out


def colour_cycle_counts(D: ChordDiagram) -> CycleCounts:
    """Bicoloured cycles per colour, and tricoloured cycles through free vertices."""
    p0 = D._partners[0]
    counts = []
    for j in (1, 2):
        pj = D._partners[j]
        parent = {v: v for v in D.vertices}

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for v in D.vertices:
            for w in (pj[v], p0.get(v)):
                if w is not None:
                    parent[find(w)] = find(v)
        # a component is a cycle exactly when none of its vertices is free
        has_free = {find(v) for v in D.vertices if v not in p0}
        counts.append(len({find(v) for v in D.vertices} - has_free))
    return CycleCounts(counts[0], counts[1], len(D.tricoloured_cycles()))


def add_chord(D: ChordDiagram, u: int, v: int) -> ChordDiagram:
    if u == v:
        raise ChordError("a chord needs two distinct vertices")
    for w in (u, v):
        if not D.is_free(w):
            raise ChordError(f"vertex {w} is not free")
    return ChordDiagram(D.base, D.chords + ((u, v),))


def sgn_vertices(D: ChordDiagram, u: int, v: int) -> int:
    """-1 for different tricoloured cycles, else parity of the paths between u and v."""
    for w in (u, v):
        if not D.is_free(w):
            raise ChordError(f"vertex {w} is not free")
    if u == v:
        raise ChordError("signum needs two distinct vertices")
    path1, path2 = D._paths
    cur, steps = u, 0
    while True:
        cur = path2[cur] if steps % 2 == 0 else path1[cur]
        steps += 1
        if cur == v:
            return steps % 2
        if cur == u:
            return -1


def project_pi0(D: ChordDiagram) -> ChordDiagram:
    """Contract every bicoloured path to one base edge of its colour."""
    return ChordDiagram._coloured(D.tricoloured_cycles())


def enumerate_completions(D0: ChordDiagram, k: int) -> list[ChordDiagram]:
    """All ways to add N - k chords to a chordless diagram, leaving 2k vertices free."""
    if D0.chords:
        raise ChordError("completions start from a chordless diagram")
    N = D0.N
    if not 0 <= k <= N:
        raise ChordError(f"k = {k} outside 0..{N}")
    out: list[ChordDiagram] = []
    chosen: list[tuple[int, int]] = []

    def rec(remaining: list[int], free_left: int) -> Iterator[None]:
        if len(remaining) < free_left:
            return
        if not remaining:
            yield None
            return
        v, rest = remaining[0], remaining[1:]
        if free_left:
            yield from rec(rest, free_left - 1)
        for i, w in enumerate(rest):
            chosen.append((v, w))
            yield from rec(rest[:i] + rest[i + 1:], free_left)
            chosen.pop()

    for _ in rec(list(D0.vertices), 2 * k):
        out.append(ChordDiagram(D0.base, tuple(chosen)))
    return out


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out
