"""Lattès map data: multiplier matrices, lattice parameter, translation
cosets and the conjugacy-class key.

A matrix (a, b, c, d) is the matrix of multiplication by alpha on the
ordered lattice basis (1, tau): alpha*1 = a + c*tau, alpha*tau = b + d*tau.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

from .exact import QuadExt, gf2_rank, squarefree_part


class InvalidMatrix(ValueError):
    pass


class MultiplierMatrix(NamedTuple):
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def scalar(cls, n: int) -> MultiplierMatrix:
        return cls(n, 0, 0, n)

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def apply(self, v: tuple[int, int]) -> tuple[int, int]:
        """alpha * (x + y*tau) in the basis (1, tau)."""
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)


def degree(M: MultiplierMatrix) -> int:
    a, b, c, d = M
    return a * d - b * c


def discriminant(M: MultiplierMatrix) -> int:
    a, b, c, d = M
    return (a - d) ** 2 + 4 * b * c


def satisfies_mx(M: MultiplierMatrix) -> bool:
    a, b, c, d = M
    if c <= 0:
        return False
    if 2 * a < -c:
        return False
    if not max(a - c + 1, -a) <= d <= a + c:
        return False
    if b > -c:
        return False
    if b == -c and d < a:
        return False
    return True


class TauValue(NamedTuple):
    tau: QuadExt

    @property
    def re(self) -> Fraction:
        return self.tau.x

    @property
    def abs_sq(self) -> Fraction:
        return self.tau.x ** 2 + self.tau.imag_sq()

    def in_fundamental_domain(self) -> bool:
        t = self.tau
        if t.m >= 0 or t.y <= 0:
            return False
        if not Fraction(-1, 2) < self.re <= Fraction(1, 2):
            return False
        if self.abs_sq < 1:
            return False
        if self.abs_sq == 1 and self.re < 0:
            return False
        return True

    @property
    def on_boundary_of_fundamental_domain(self) -> bool:
        return self.in_fundamental_domain() and (
            self.re == Fraction(1, 2) or self.abs_sq == 1)


def tau_from_matrix(M: MultiplierMatrix) -> tuple[TauValue, QuadExt]:
    a, b, c, d = M
    if c <= 0:
        raise InvalidMatrix("tau needs c > 0")
    disc = discriminant(M)
    if disc >= 0:
        raise InvalidMatrix(f"discriminant {disc} is not negative")
    s, m = squarefree_part(disc)
    tau = QuadExt(m, Fraction(d - a, 2 * c), Fraction(s, 2 * c))
    alpha = tau * c + a
    return TauValue(tau), alpha


def matrix_of_multiplication(alpha: QuadExt, tau: QuadExt) -> MultiplierMatrix:
    """Integer matrix of z -> alpha*z on the basis (1, tau)."""
    def coords(z: QuadExt) -> tuple[int, int]:
        # z = p + q*tau with tau = tx + ty*sqrt(m)
        q = z.y / tau.y
        p = z.x - q * tau.x
        if p.denominator != 1 or q.denominator != 1:
            raise InvalidMatrix(f"{z} is not in the lattice")
        return int(p), int(q)
    a, c = coords(alpha)
    b, d = coords(alpha * tau)
    return MultiplierMatrix(a, b, c, d)


def enumerate_rigid(max_degree: int) -> list[MultiplierMatrix]:
    if max_degree < 2:
        return []
    out = []
    # degree >= 3c^2/4 bounds c
    cmax = isqrt(4 * max_degree // 3)
    for c in range(1, cmax + 1):
        a = -(c // 2)
        while True:
            if a >= c and a * (a - c + 1) + c * c > max_degree:
                break
            for d in range(max(a - c + 1, -a), a + c + 1):
                for deg in range(2, max_degree + 1):
                    num = a * d - deg
                    if num % c:
                        continue
                    M = MultiplierMatrix(a, num // c, c, d)
                    if satisfies_mx(M):
                        out.append((deg, c, a, d, M))
            a += 1
    out.sort(key=lambda t: t[:4])
    return [t[4] for t in out]


class BetaCoset(NamedTuple):
    representatives: list


def _mod2_matrix(M: MultiplierMatrix):
    a, b, c, d = M
    return [[(a + 1) % 2, b % 2], [c % 2, (d + 1) % 2]]


def beta_representatives(M: MultiplierMatrix) -> BetaCoset:
    r = gf2_rank(_mod2_matrix(M))
    if r.rank == 2:
        return BetaCoset([(0, 0)])
    if r.rank == 0:
        return BetaCoset([(0, 0), (1, 0), (0, 1), (1, 1)])
    for lam in ((1, 0), (0, 1), (1, 1)):
        if lam not in r.column_space:
            return BetaCoset([(0, 0), lam])
    raise AssertionError("rank-1 column space cannot contain all of GF(2)^2")


class SubgroupLattice:
    """The subgroup (alpha+1)Λ + 2Λ of Λ = Z^2, by integer row reduction of
    its generators alpha+1, (alpha+1)tau, 2, 2tau."""

    def __init__(self, M: MultiplierMatrix):
        a, b, c, d = M
        gens = [(a + 1, c), (b, d + 1), (2, 0), (0, 2)]
        self.basis = _hermite_basis(gens)

    def contains(self, v: tuple[int, int]) -> bool:
        (p, q), (r, s) = self.basis
        # basis is upper triangular: (p, q), (0, s)
        x, y = v
        if x % p:
            return False
        k = x // p
        y -= k * q
        return y % s == 0

    def index(self) -> int:
        (p, _), (_, s) = self.basis
        return abs(p * s)


def _hermite_basis(gens):
    """Upper-triangular basis ((p, q), (0, s)) of the Z-span of 2-vectors."""
    rows = [list(g) for g in gens if g != (0, 0)]
    # gcd elimination on the first coordinate
    while sum(1 for r in rows if r[0] != 0) > 1:
        rows.sort(key=lambda r: (r[0] == 0, abs(r[0])))
        pivot = rows[0]
        for r in rows[1:]:
            if r[0]:
                k = r[0] // pivot[0]
                r[0] -= k * pivot[0]
                r[1] -= k * pivot[1]
    rows.sort(key=lambda r: (r[0] == 0, abs(r[0])))
    first = rows[0]
    s = 0
    for r in rows[1:]:
        s = _gcd(s, r[1])
    if first[0] < 0:
        first = [-first[0], -first[1]]
    s = abs(s)
    if first[0] == 0 or s == 0:
        raise InvalidMatrix("subgroup does not have full rank")
    return (first[0], first[1] % s), (0, s)


def _gcd(x, y):
    x, y = abs(x), abs(y)
    while y:
        x, y = y, x % y
    return x


class Unit(NamedTuple):
    label: str
    matrix: tuple  # action on the basis (1, tau): ((p, q), (r, s)) columns images


def lattice_units(tau: TauValue) -> list[Unit]:
    t = tau.tau
    one = Unit("1", ((1, 0), (0, 1)))
    minus = Unit("-1", ((-1, 0), (0, -1)))
    if t.m == -1 and t.x == 0 and t.y == 1:
        # i*1 = tau, i*tau = -1
        i = ((0, -1), (1, 0))
        return [one, Unit("i", i), minus, Unit("-i", _neg(i))]
    if t.m == -3 and t.x == Fraction(1, 2) and t.y == Fraction(1, 2):
        # tau is a primitive sixth root of unity: tau*1 = tau, tau*tau = tau - 1
        z = ((0, -1), (1, 1))
        units = []
        power = ((1, 0), (0, 1))
        for k in range(6):
            units.append(Unit(f"exp(2*pi*i*{k}/6)", power))
            power = _matmul(z, power)
        return units
    return [one, minus]


def _neg(m):
    return tuple(tuple(-v for v in row) for row in m)


def _matmul(p, q):
    return tuple(tuple(sum(p[i][k] * q[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))


def _apply_unit(u: Unit, v):
    m = u.matrix
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


class LattesClass(NamedTuple):
    matrix: MultiplierMatrix
    tau: TauValue
    alpha: QuadExt
    beta: tuple
    degree: int
    rigid: bool

    def to_json_obj(self) -> dict:
        a, b, c, d = self.matrix
        t = self.tau.tau
        return {
            "a": str(a), "b": str(b), "c": str(c), "d": str(d),
            "tau": {"m": str(t.m), "x_num": str(t.x.numerator),
                    "x_den": str(t.x.denominator),
                    "y_num": str(t.y.numerator), "y_den": str(t.y.denominator)},
            "beta": [str(self.beta[0]), str(self.beta[1])],
            "degree": str(self.degree),
            "rigid": self.rigid,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> LattesClass:
        M = MultiplierMatrix(*(int(obj[k]) for k in "abcd"))
        t = obj["tau"]
        tau = QuadExt(int(t["m"]), Fraction(int(t["x_num"]), int(t["x_den"])),
                      Fraction(int(t["y_num"]), int(t["y_den"])))
        beta = (int(obj["beta"][0]), int(obj["beta"][1]))
        rigid = bool(obj["rigid"])
        alpha = tau * M.c + M.a if rigid else QuadExt(tau.m, M.a, 0)
        return cls(M, TauValue(tau), alpha, beta, int(obj["degree"]), rigid)

    @classmethod
    def from_json(cls, text: str) -> LattesClass:
        return cls.from_json_obj(json.loads(text))


def conjugacy_key(M: MultiplierMatrix, beta, tau: TauValue | None = None) -> LattesClass:
    M = MultiplierMatrix(*M)
    if M.is_scalar():
        n = M.a
        if n < 2:
            raise InvalidMatrix("nonrigid maps need alpha = n >= 2")
        if tau is None:
            tau = TauValue(QuadExt(-1, 0, 1))
        alpha = QuadExt(tau.tau.m, n, 0)
        rigid = False
    elif satisfies_mx(M):
        tau, alpha = tau_from_matrix(M)
        rigid = True
    else:
        raise InvalidMatrix(f"{tuple(M)} violates the normalization inequalities")
    sub = SubgroupLattice(M)
    reps = beta_representatives(M).representatives
    beta = (int(beta[0]), int(beta[1]))
    orbit = [_apply_unit(u, beta) for u in lattice_units(tau)]
    key = None
    for r in reps:
        if any(sub.contains((g[0] - r[0], g[1] - r[1])) for g in orbit):
            key = r
            break
    if key is None:
        raise AssertionError("coset representatives do not cover the lattice")
    return LattesClass(M, tau, alpha, key, degree(M), rigid)
