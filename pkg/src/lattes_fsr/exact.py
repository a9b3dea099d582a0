"""Exact arithmetic in Q(sqrt m) and exact planar predicates.

Every geometric decision in the package bottoms out here.  Values are
immutable; mixing radicands is an error rather than a coercion.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

Rat = Fraction


def is_squarefree(m: int) -> bool:
    if m == 0:
        return False
    n = abs(m)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n = s**2 * m with m square-free; return (s, m)."""
    if n == 0:
        raise ValueError("zero has no square-free part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    s = 1
    k = 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
            s *= k
        k += 1
    return s, sign * n


class RadicandMismatch(ValueError):
    pass


class QuadExt:
    """The number x + y*sqrt(m) with x, y rational and m square-free."""

    __slots__ = ("m", "x", "y")

    def __init__(self, m: int, x=0, y=0):
        if not is_squarefree(m):
            raise ValueError(f"radicand {m} is not square-free")
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "x", Fraction(x))
        object.__setattr__(self, "y", Fraction(y))

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    def _coerce(self, other) -> QuadExt:
        if isinstance(other, QuadExt):
            if other.m != self.m:
                raise RadicandMismatch(f"sqrt({self.m}) vs sqrt({other.m})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.m, other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.m, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(self.m, -self.x, -self.y)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.m, self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.m, self.x * o.x + self.m * self.y * o.y,
                       self.x * o.y + self.y * o.x)

    __rmul__ = __mul__

    def conj(self) -> QuadExt:
        return QuadExt(self.m, self.x, -self.y)

    def norm(self) -> QuadExt:
        return QuadExt(self.m, self.x * self.x - self.m * self.y * self.y, 0)

    def inverse(self) -> QuadExt:
        n = self.norm().x
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt m)")
        return QuadExt(self.m, self.x / n, -self.y / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        if not isinstance(other, QuadExt):
            return NotImplemented
        return (self.m, self.x, self.y) == (other.m, other.x, other.y)

    def __hash__(self):
        return hash((self.m, self.x, self.y))

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __complex__(self):
        if self.m < 0:
            return complex(float(self.x), float(self.y) * abs(self.m) ** 0.5)
        return complex(float(self.x) + float(self.y) * self.m ** 0.5, 0.0)

    def __float__(self):
        if self.m < 0:
            raise TypeError("no real value for a complex QuadExt")
        return float(self.x) + float(self.y) * self.m ** 0.5

    def real_part(self) -> Fraction:
        """Re of the value when m < 0."""
        return self.x

    def imag_sq(self) -> Fraction:
        """(Im)**2 when m < 0, kept rational."""
        return self.y * self.y * -self.m

    def __repr__(self):
        return f"QuadExt({self.m}, {self.x}, {self.y})"

    def __str__(self):
        if self.y == 0:
            return str(self.x)
        root = f"sqrt({self.m})"
        if self.x == 0:
            return f"{self.y}*{root}"
        sign = "+" if self.y > 0 else "-"
        return f"{self.x} {sign} {abs(self.y)}*{root}"


def qext_arith(op: str, u: QuadExt, v: QuadExt | None = None) -> QuadExt:
    if op == "add":
        return u + v
    if op == "sub":
        return u - v
    if op == "mul":
        return u * v
    if op == "div":
        return u / v
    if op == "conj":
        return u.conj()
    if op == "norm":
        return u.norm()
    raise ValueError(f"unknown operation {op!r}")


def qext_sign(u: QuadExt) -> int:
    """Exact sign of x + y*sqrt(m) for m > 0, using rational arithmetic only."""
    if u.m < 0:
        raise ValueError("no real order on Q(sqrt m) with m < 0")
    sx = (u.x > 0) - (u.x < 0)
    sy = (u.y > 0) - (u.y < 0)
    if sy == 0:
        return sx
    if sx == 0 or sx == sy:
        return sy
    # opposite signs: whichever term has the larger square wins
    lhs = u.x * u.x
    rhs = u.m * u.y * u.y
    if lhs == rhs:
        return 0
    return sx if lhs > rhs else sy


class PlanePoint(NamedTuple):
    px: QuadExt
    py: QuadExt

    @classmethod
    def of(cls, x0, x1, y0, y1) -> PlanePoint:
        """Point (x0 + x1*sqrt3, y0 + y1*sqrt3)."""
        return cls(QuadExt(3, x0, x1), QuadExt(3, y0, y1))

    def __add__(self, other):
        return PlanePoint(self.px + other.px, self.py + other.py)

    def __sub__(self, other):
        return PlanePoint(self.px - other.px, self.py - other.py)

    def scale(self, k) -> PlanePoint:
        return PlanePoint(self.px * k, self.py * k)

    def to_float(self) -> tuple[float, float]:
        return float(self.px), float(self.py)


def plane_point(x, y) -> PlanePoint:
    """Convenience: accepts rationals or QuadExt(3, ...) coordinates."""
    def lift(v):
        return v if isinstance(v, QuadExt) else QuadExt(3, v, 0)
    return PlanePoint(lift(x), lift(y))


class ExactLine(NamedTuple):
    p0: PlanePoint
    p1: PlanePoint

    @classmethod
    def through(cls, p0: PlanePoint, p1: PlanePoint) -> ExactLine:
        if p0 == p1:
            raise ValueError("a line needs two distinct points")
        return cls(p0, p1)


def orient2d(a: PlanePoint, b: PlanePoint, c: PlanePoint) -> int:
    d = (b.px - a.px) * (c.py - a.py) - (b.py - a.py) * (c.px - a.px)
    return qext_sign(d)


CROSSES_INTERIOR = "crosses_interior"
TOUCHES_ENDPOINT = "touches_endpoint"
MISSES = "misses"


def segment_crosses_line(line: ExactLine, s0: PlanePoint, s1: PlanePoint) -> str:
    if s0 == s1:
        raise ValueError("degenerate segment")
    o0 = orient2d(line.p0, line.p1, s0)
    o1 = orient2d(line.p0, line.p1, s1)
    if o0 == 0 or o1 == 0:
        return TOUCHES_ENDPOINT
    return CROSSES_INTERIOR if o0 != o1 else MISSES


class GF2Rank(NamedTuple):
    rank: int
    column_space: frozenset


def gf2_rank(M) -> GF2Rank:
    """Rank over GF(2) of a 2x2 bit matrix, plus its column space."""
    (p, q), (r, s) = ((int(v) & 1 for v in row) for row in M)
    cols = [(p, r), (q, s)]
    span = {(0, 0)}
    for col in cols:
        span |= {((x + col[0]) % 2, (y + col[1]) % 2) for x, y in span}
    rank = {1: 0, 2: 1, 4: 2}[len(span)]
    return GF2Rank(rank, frozenset(span))
