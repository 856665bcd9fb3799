"""Exact sparse multivariate polynomials with integer coefficients.

Variable ``i`` (0-based) prints as ``a<i+1>``; for graph polynomials the
variable index is ``edge id - 1``.

Internally every monomial is packed into a single Python int: one 16-bit
field holds the total degree, followed by one field per variable with the
first variable in the most significant position.  Integer comparison of two
packed keys is then graded-lex comparison of the exponent vectors, and
multiplying monomials is plain integer addition.
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

_BITS = 16
_MASK = (1 << _BITS) - 1
_MAX_EXP = (1 << (_BITS - 1)) - 1

__all__ = [
    "MultiPoly",
    "NotDivisible",
    "add",
    "mul",
    "exact_div",
    "try_exact_div",
    "partial_derivative",
    "set_var_zero",
    "eval_rational",
    "term_count",
    "parse_poly",
]


class NotDivisible(ArithmeticError):
    """Raised when an exact division leaves a nonzero remainder."""


class _Layout:
    """Bit layout shared by all polynomials with the same number of variables."""

    _cache: dict[int, "_Layout"] = {}

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.shifts = [_BITS * (nvars - 1 - i) for i in range(nvars)]
        self.deg_shift = _BITS * nvars
        self.deg_unit = 1 << self.deg_shift
        # one guard bit at the top of every field, used for the divisibility test
        self.guard = sum(1 << (_BITS * f + _BITS - 1) for f in range(nvars + 1))

    @classmethod
    def get(cls, nvars: int) -> "_Layout":
        lay = cls._cache.get(nvars)
        if lay is None:
            lay = cls._cache[nvars] = _Layout(nvars)
        return lay

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError(f"exponent vector of length {len(exps)}, expected {self.nvars}")
        key = 0
        deg = 0
        for e, s in zip(exps, self.shifts):
            if e < 0 or e > _MAX_EXP:
                raise ValueError(f"exponent {e} out of range")
            key |= e << s
            deg += e
        if deg > _MAX_EXP:
            raise ValueError("total degree out of range")
        return key | (deg << self.deg_shift)

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & _MASK for s in self.shifts)

    def divides(self, big: int, small: int) -> bool:
        g = self.guard
        return ((big | g) - small) & g == g


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables over the integers."""

    __slots__ = ("_n", "_t", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], int] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        lay = _Layout.get(nvars)
        packed: dict[int, int] = {}
        for exps, c in (terms or {}).items():
            c = int(c)
            if c:
                k = lay.pack(tuple(exps))
                c += packed.get(k, 0)
                if c:
                    packed[k] = c
                else:
                    del packed[k]
        self._n = nvars
        self._t = packed
        self._hash: int | None = None

    @classmethod
    def _raw(cls, nvars: int, packed: dict[int, int]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj._n = nvars
        obj._t = packed
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "MultiPoly":
        return cls._raw(nvars, {0: int(c)} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        lay = _Layout.get(nvars)
        return cls._raw(nvars, {(1 << lay.shifts[i]) | lay.deg_unit: 1})

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], c: int = 1) -> "MultiPoly":
        return cls(nvars, {tuple(exps): c})

    # basic access -----------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self._n

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        lay = _Layout.get(self._n)
        return {lay.unpack(k): c for k, c in self._t.items()}

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """Terms in canonical order: descending graded-lex."""
        lay = _Layout.get(self._n)
        for k in sorted(self._t, reverse=True):
            yield lay.unpack(k), self._t[k]

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self == MultiPoly.constant(self._n, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._n == other._n and self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, frozenset(self._t.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MultiPoly({self._n}, {self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    # degrees ----------------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._t:
            return -1
        return max(self._t) >> _Layout.get(self._n).deg_shift

    def degrees(self) -> set[int]:
        s = _Layout.get(self._n).deg_shift
        return {k >> s for k in self._t}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        if len(ds) != 1:
            return False
        return degree is None or ds == {degree}

    def var_degree(self, i: int) -> int:
        s = _Layout.get(self._n).shifts[i]
        return max(((k >> s) & _MASK for k in self._t), default=-1)

    def max_var_degree(self) -> int:
        return max((max(e) for e, _ in self.items() if e), default=0)

    def variables(self) -> set[int]:
        lay = _Layout.get(self._n)
        found: set[int] = set()
        for k in self._t:
            for i, s in enumerate(lay.shifts):
                if (k >> s) & _MASK:
                    found.add(i)
        return found

    def constant_term(self) -> int:
        return self._t.get(0, 0)

    def with_nvars(self, nvars: int) -> "MultiPoly":
        """The same polynomial in a larger (or unused-trimmed) variable space."""
        if nvars < self._n and any(i >= nvars for i in self.variables()):
            raise ValueError("cannot drop a variable that occurs")
        return MultiPoly(nvars, {tuple(e[:nvars]) + (0,) * (nvars - self._n): c for e, c in self.items()})

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self._n != other._n:
            raise ValueError(f"variable count mismatch: {self._n} vs {other._n}")

    def _coerce(self, other: object) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return MultiPoly.constant(self._n, other)
        raise TypeError(f"cannot combine MultiPoly with {type(other).__name__}")

    def __add__(self, other: object) -> "MultiPoly":
        o = self._coerce(other)
        if len(o._t) > len(self._t):
            big, small = o._t, self._t
        else:
            big, small = self._t, o._t
        out = dict(big)
        for k, c in small.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return MultiPoly._raw(self._n, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self._n, {k: -c for k, c in self._t.items()})

    def __sub__(self, other: object) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "MultiPoly":
        if isinstance(other, int):
            if not other:
                return MultiPoly.zero(self._n)
            return MultiPoly._raw(self._n, {k: c * other for k, c in self._t.items()})
        o = self._coerce(other)
        a, b = self._t, o._t
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return MultiPoly._raw(self._n, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.constant(self._n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale_div(self, c: int) -> "MultiPoly":
        """Divide every coefficient by the integer ``c``; raises if inexact."""
        out = {}
        for k, v in self._t.items():
            q, r = divmod(v, c)
            if r:
                raise NotDivisible(f"coefficient {v} not divisible by {c}")
            out[k] = q
        return MultiPoly._raw(self._n, out)

    def divmod_exact(self, d: "MultiPoly") -> "MultiPoly | None":
        """Quotient ``q`` with ``q*d == self``, or None if there is none."""
        self._check(d)
        if not d._t:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._t:
            return MultiPoly.zero(self._n)
        lay = _Layout.get(self._n)
        lk = max(d._t)
        lc = d._t[lk]
        dterms = list(d._t.items())
        if len(dterms) == 1:
            out = {}
            for k, c in self._t.items():
                if not lay.divides(k, lk) or c % lc:
                    return None
                out[k - lk] = c // lc
            return MultiPoly._raw(self._n, out)
        rem = dict(self._t)
        heap = [-k for k in rem]
        heapq.heapify(heap)
        quot: dict[int, int] = {}
        while heap:
            k = -heapq.heappop(heap)
            c = rem.get(k)
            if not c:
                continue
            if not lay.divides(k, lk) or c % lc:
                return None
            qk = k - lk
            qc = c // lc
            quot[qk] = qc
            for dk, dc in dterms:
                nk = qk + dk
                old = rem.get(nk)
                nc = (old or 0) - qc * dc
                if nc:
                    if old is None:
                        heapq.heappush(heap, -nk)
                    rem[nk] = nc
                elif old is not None:
                    del rem[nk]
        return MultiPoly._raw(self._n, quot)

    # calculus and substitution ----------------------------------------------

    def derivative(self, i: int) -> "MultiPoly":
        if not 0 <= i < self._n:
            raise IndexError(f"variable index {i} out of range for {self._n} variables")
        lay = _Layout.get(self._n)
        s = lay.shifts[i]
        step = (1 << s) | lay.deg_unit
        out = {}
        for k, c in self._t.items():
            e = (k >> s) & _MASK
            if e:
                out[k - step] = c * e
        return MultiPoly._raw(self._n, out)

    def set_zero(self, i: int) -> "MultiPoly":
        if not 0 <= i < self._n:
            raise IndexError(f"variable index {i} out of range for {self._n} variables")
        s = _Layout.get(self._n).shifts[i]
        return MultiPoly._raw(self._n, {k: c for k, c in self._t.items() if not (k >> s) & _MASK})

    def evaluate(self, point: Sequence[int | Fraction]) -> Fraction:
        if len(point) != self._n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self._n}")
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for exps, c in self.items():
            v = Fraction(c)
            for x, e in zip(pt, exps):
                if e:
                    v *= x**e
            total += v
        return total

    def substitute_zero_except(self, keep: Iterable[int]) -> "MultiPoly":
        out = self
        keep = set(keep)
        for i in range(self._n):
            if i not in keep:
                out = out.set_zero(i)
        return out

    # text -------------------------------------------------------------------

    def to_text(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for exps, c in self.items():
            sign = "-" if c < 0 else "+"
            chunk = [f"{sign}{abs(c)}"]
            for i, e in enumerate(exps):
                if e == 1:
                    chunk.append(f"a{i + 1}")
                elif e:
                    chunk.append(f"a{i + 1}^{e}")
            parts.append("*".join(chunk))
        return "".join(parts)


_TERM_RE = re.compile(r"\s*([+-])\s*(\d+)((?:\s*\*\s*a\d+(?:\^\d+)?)*)")
_FACTOR_RE = re.compile(r"a(\d+)(?:\^(\d+))?")


def parse_poly(text: str, nvars: int) -> MultiPoly:
    """Inverse of :meth:`MultiPoly.to_text`."""
    text = text.strip()
    if text == "0":
        return MultiPoly.zero(nvars)
    pos = 0
    terms: dict[tuple[int, ...], int] = {}
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial text at offset {pos}: {text[pos:pos + 20]!r}")
        c = int(m.group(2)) * (-1 if m.group(1) == "-" else 1)
        exps = [0] * nvars
        for fm in _FACTOR_RE.finditer(m.group(3)):
            i = int(fm.group(1)) - 1
            if not 0 <= i < nvars:
                raise ValueError(f"variable a{i + 1} outside {nvars} variables")
            exps[i] += int(fm.group(2) or 1)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + c
        pos = m.end()
    return MultiPoly(nvars, terms)


# functional interface ---------------------------------------------------------


def add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p + q


def mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p * q


def exact_div(p: MultiPoly, d: MultiPoly) -> MultiPoly:
    """Exact quotient ``p / d``; raises :class:`NotDivisible` on a remainder."""
    q = p.divmod_exact(d)
    if q is None:
        raise NotDivisible("polynomial division leaves a remainder")
    return q


def try_exact_div(p: MultiPoly, d: MultiPoly) -> MultiPoly | None:
    return p.divmod_exact(d)


def partial_derivative(p: MultiPoly, var: int) -> MultiPoly:
    return p.derivative(var)


def set_var_zero(p: MultiPoly, var: int) -> MultiPoly:
    return p.set_zero(var)


def eval_rational(p: MultiPoly, point: Sequence[int | Fraction]) -> Fraction:
    return p.evaluate(point)


def term_count(p: MultiPoly) -> int:
    return len(p)


def poly_sum(polys: Iterable[MultiPoly], nvars: int) -> MultiPoly:
    """Sum of an iterable, accumulated in one dict."""
    acc: dict[int, int] = {}
    get = acc.get
    for p in polys:
        if p._n != nvars:
            raise ValueError(f"variable count mismatch: {p._n} vs {nvars}")
        for k, c in p._t.items():
            acc[k] = get(k, 0) + c
    return MultiPoly._raw(nvars, {k: c for k, c in acc.items() if c})
