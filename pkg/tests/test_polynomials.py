from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hsautomata.errors import ZeroConstantTerm
from hsautomata.polynomials import Poly, RationalFunction, poly_det, poly_gcd, series_coeffs

coeffs = st.lists(st.integers(-20, 20), min_size=1, max_size=6)


def rf(num, den):
    return RationalFunction(Poly(num), Poly(den))


def test_series_examples():
    assert series_coeffs(rf([1], [1, -2]), 3) == [1, 2, 4, 8]
    assert series_coeffs(rf([0, 2], [1, 0, 0, 0, -16]), 5) == [0, 2, 0, 0, 0, 32]
    assert series_coeffs(rf([1], [1, 0, -4]), 4) == [1, 0, 4, 0, 16]


def test_series_zero_constant_term():
    with pytest.raises(ZeroConstantTerm):
        series_coeffs(rf([1], [0, 1]), 3)


def test_normalisation_removes_common_factor():
    # (1 + z)(2z) / ((1 + z)(1 - 16 z^4))
    r = rf((Poly([1, 1]) * Poly([0, 2])).coeffs, (Poly([1, 1]) * Poly([1, 0, 0, 0, -16])).coeffs)
    assert r.num == Poly([0, 2]) and r.den == Poly([1, 0, 0, 0, -16])
    assert rf([-2], [-4, 8]) == rf([1], [2, -4])
    assert rf([3, 3], [6, 6]) == RationalFunction(Poly([1]), Poly([2]))


def test_addition_identity():
    # 1/(1-4z^2) + 2z/(1-16z^4) + 8z^3/(1-16z^4) = 1/(1-2z)
    total = rf([1], [1, 0, -4]) + rf([0, 2], [1, 0, 0, 0, -16]) + rf([0, 0, 0, 8], [1, 0, 0, 0, -16])
    assert total == rf([1], [1, -2])


def test_json_round_trip():
    r = rf([0, 2], [1, 0, 0, 0, -16])
    assert r.to_json() == {"num": [0, 2], "den": [1, 0, 0, 0, -16]}
    assert RationalFunction.from_json(r.to_json()) == r


@given(coeffs, coeffs.filter(lambda c: any(c)))
def test_divmod(a, b):
    a, b = Poly(a), Poly(b)
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(coeffs, coeffs, coeffs)
def test_gcd_divides(a, b, c):
    a, b, c = Poly(a), Poly(b), Poly(c)
    if not c:
        return
    g = poly_gcd(a * c, b * c)
    assert (a * c).divmod(g)[1].is_zero() and (b * c).divmod(g)[1].is_zero()
    assert g.divmod(c.monic())[1].is_zero()


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_against_leibniz(m):
    polys = [[Poly([x, x + 1]) for x in row] for row in m]
    def leib(p):
        import itertools
        total = Poly()
        for perm in itertools.permutations(range(3)):
            inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
            term = Poly([(-1) ** inv])
            for i in range(3):
                term = term * p[i][perm[i]]
            total = total + term
        return total
    assert poly_det(polys) == leib(polys)


def test_str():
    assert str(rf([0, 2], [1, 0, 0, 0, -16])) == "(2z) / (1 - 16z^4)"
    assert Poly([Fraction(1, 2)]).content() == Fraction(1, 2)
