"""Exact univariate polynomials and rational functions over the integers."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Sequence

from .errors import ZeroConstantTerm


class Poly:
    """Polynomial in z with exact (int or Fraction) coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rational] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(_tidy(x) for x in c)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, c, k: int) -> "Poly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            body = "z" if k == 1 else f"z^{k}"
            if k == 0:
                t = str(mag)
            elif mag == 1:
                t = body
            else:
                t = f"{mag}{body}"
            terms.append(("-" if c < 0 else "+", t))
        sign, first = terms[0]
        out = ("-" if sign == "-" else "") + first
        for sign, t in terms[1:]:
            out += f" {sign} {t}"
        return out

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        lead = Fraction(other.coeffs[-1])
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [Fraction(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            q = rem[k + other.degree] / lead
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return Poly(quot), Poly(rem[:other.degree])

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return q

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive in Z[z]."""
        if not self.coeffs:
            return Fraction(0)
        fr = [Fraction(c) for c in self.coeffs]
        den = lcm(*(f.denominator for f in fr))
        num = gcd(*(f.numerator * (den // f.denominator) for f in fr))
        return Fraction(num, den)

    def scale(self, c) -> "Poly":
        return Poly(x * c for x in self.coeffs)

    def monic(self) -> "Poly":
        return self.scale(Fraction(1) / Fraction(self.coeffs[-1]))

    def lowest_nonzero(self):
        for c in self.coeffs:
            if c != 0:
                return c
        return 0


def _tidy(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (zero if both are zero)."""
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic() if a else a


class RationalFunction:
    """num/den in lowest terms, integer coefficients with joint content 1.

    The sign is fixed by making the lowest-order nonzero coefficient of the
    denominator positive, so 1/(1 - nz) keeps its familiar shape.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = _as_poly(num), _as_poly(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = Poly(), Poly([1])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        c_num, c_den = num.content(), den.content()
        # joint content of (num, den): gcd of numerators over lcm of denominators
        joint = Fraction(gcd(c_num.numerator, c_den.numerator), lcm(c_num.denominator, c_den.denominator))
        if den.lowest_nonzero() < 0:
            joint = -joint
        self.num = num.scale(1 / joint)
        self.den = den.scale(1 / joint)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other)
        return self + (-other)

    def __repr__(self):
        return f"RationalFunction({list(self.num.coeffs)}, {list(self.den.coeffs)})"

    def __str__(self):
        return f"({self.num}) / ({self.den})"

    def is_zero(self) -> bool:
        return not self.num

    def to_json(self) -> dict:
        return {"num": [int(c) for c in self.num.coeffs] or [0], "den": [int(c) for c in self.den.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "RationalFunction":
        return cls(Poly(obj["num"]), Poly(obj["den"]))


def series_coeffs(r: RationalFunction, K: int) -> list:
    """First K+1 Taylor coefficients of r at z = 0."""
    den = r.den
    if den[0] == 0:
        raise ZeroConstantTerm(f"denominator {den} vanishes at z = 0")
    d0 = Fraction(den[0])
    out = []
    for k in range(K + 1):
        acc = Fraction(r.num[k])
        for j in range(1, min(k, den.degree) + 1):
            acc -= den[j] * out[k - j]
        out.append(_tidy(acc / d0))
    return out


def poly_det(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant over Z[z] by fraction-free (Bareiss) elimination with row pivoting."""
    m = [[_as_poly(x) for x in row] for row in matrix]
    n = len(m)
    if n == 0:
        return Poly([1])
    sign = 1
    prev = Poly([1])
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Poly()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]).exact_div(prev)
        prev = m[k][k]
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]
