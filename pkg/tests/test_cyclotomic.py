from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from coxsplit.coxeter import INF
from coxsplit.cyclotomic import (AlgebraicReal, ExactMatrix, cos_pi_over, cyclotomic_polynomial,
                                 determinant, field, gram_matrix, is_positive_definite,
                                 kernel_contains, nullity, rank, reflection_matrix, sign_of)

from conftest import SYSTEMS, cox, dihedral, path, universal


def sympy_gram(s, t=None):
    t = range(s.rank) if t is None else t
    def entry(i, j):
        if i == j:
            return sympy.Integer(1)
        m = s.orders[i][j]
        return sympy.Integer(-1) if m == INF else -sympy.cos(sympy.pi / int(m))
    return sympy.Matrix([[entry(i, j) for j in t] for i in t])


# -- field basics ----------------------------------------------------------------

def test_cyclotomic_polynomials():
    x = sympy.Symbol("x")
    for n in (1, 2, 3, 4, 8, 12, 15, 30, 60, 120):
        expected = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
        assert list(cyclotomic_polynomial(n)) == [int(c) for c in expected]


@pytest.mark.parametrize("m, expected", [(2, 0), (3, Fraction(1, 2)), (INF, 1)])
def test_cos_rational_values(m, expected):
    assert cos_pi_over(m) == expected


def test_cos_pi_over_embeds_in_larger_field():
    c = cos_pi_over(3, 60)
    assert c.field.order == 60
    assert c == Fraction(1, 2)
    c5 = cos_pi_over(5, 60)
    # golden ratio identity: 4c^2 - 2c - 1 = 0 for c = cos(pi/5)
    assert 4 * c5 * c5 - 2 * c5 - 1 == 0


def test_cos_pi_over_rejects_order_one():
    with pytest.raises(ValueError):
        cos_pi_over(1)
    with pytest.raises(ValueError):
        cos_pi_over(5, 12)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7, 8, 10, 12])
def test_cos_values_against_float(m):
    assert abs(float(cos_pi_over(m)) - float(mpmath.cos(mpmath.pi / m))) < 1e-15


def test_elements_are_real():
    for m in (4, 5, 7, 9, 12):
        assert cos_pi_over(m, 2 * m * 3).is_real()
    z = AlgebraicReal.make(field(5), [0, 1])
    assert not z.is_real()


def test_inverse_and_division():
    c = cos_pi_over(5, 60)
    inv = c.inverse()
    assert c * inv == 1
    assert (c + 2) / (c + 2) == 1
    with pytest.raises(ZeroDivisionError):
        field(60).zero().inverse()


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        cos_pi_over(5) + cos_pi_over(4)


# -- signs -----------------------------------------------------------------------

def test_sign_zero():
    assert sign_of(field(60).zero()) == 0
    assert sign_of(cos_pi_over(3, 12) - Fraction(1, 2)) == 0


def test_sign_cos_pi_over_5():
    x = cos_pi_over(5) - Fraction(1, 2)
    assert sign_of(x) == 1
    assert sign_of(-x) == -1
    lo, hi = x.interval(64)
    assert lo > 0 and hi - lo < Fraction(1, 2**50)


def test_sign_needs_more_precision_for_tiny_values():
    # (c - 1/2) ** 100 is a Fibonacci cancellation: 64 bits cannot decide it
    x = (cos_pi_over(5) - Fraction(1, 2)) ** 100
    lo, hi = x.interval(64)
    assert lo <= 0 <= hi
    assert x.interval(128)[0] <= 0
    assert x.interval(256)[0] > 0
    assert sign_of(x) == 1
    assert sign_of(-x) == -1


def test_cos_table_beyond_double_precision():
    with mpmath.workprec(300):
        exact = mpmath.cos(2 * mpmath.pi / 10) * mpmath.mpf(2) ** 256
    lo, hi = field(10).cos_table(256)[1]
    assert lo <= exact <= hi and hi - lo <= 2


ORDERS = [4, 6, 8, 10, 12, 20, 24, 30, 60, 120]


@st.composite
def elements(draw, order=None):
    n = order or draw(st.sampled_from(ORDERS))
    fld = field(n)
    coeffs = draw(st.lists(st.integers(-20, 20), min_size=0, max_size=6))
    den = draw(st.integers(1, 12))
    # realify: sum of 2cos terms
    x = fld.zero()
    for k, c in enumerate(coeffs):
        x = x + fld.two_cos(k) * c
    return x * Fraction(1, den)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_field_axioms(data):
    n = data.draw(st.sampled_from(ORDERS))
    x, y, z = (data.draw(elements(n)) for _ in range(3))
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x - x == 0
    assert x.is_real()
    if x:
        assert x * x.inverse() == 1


@settings(max_examples=150, deadline=None)
@given(elements())
def test_sign_consistent_with_arithmetic(x):
    s = sign_of(x)
    assert sign_of(-x) == -s
    assert sign_of(x * x) in (0, 1)
    assert (s == 0) == x.is_zero()


def _reference(x: AlgebraicReal):
    with mpmath.workprec(256):
        n = x.field.order
        v = mpmath.fsum(c * mpmath.cos(2 * mpmath.pi * k / n) for k, c in enumerate(x.num))
        return v / x.den


@settings(max_examples=100, deadline=None)
@given(elements(), st.sampled_from([64, 128, 256]))
def test_interval_contains_reference(x, bits):
    lo, hi = x.interval(bits)
    ref = _reference(x)
    slack = mpmath.mpf(2) ** -240
    with mpmath.workprec(256):
        assert mpmath.mpf(lo.numerator) / lo.denominator <= ref + slack
        assert ref - slack <= mpmath.mpf(hi.numerator) / hi.denominator


def test_json_round_trip():
    x = cos_pi_over(5, 60) * Fraction(3, 7)
    assert AlgebraicReal.from_json(x.to_json()) == x


# -- Gram matrices ----------------------------------------------------------------

def test_gram_commuting_pair_is_identity():
    g = gram_matrix(dihedral(2))
    assert g == ExactMatrix.identity(g.field, 2)


def test_gram_m3_pair():
    g = gram_matrix(dihedral(3))
    assert g.rows == ((1, Fraction(-1, 2)), (Fraction(-1, 2), 1))


def test_gram_infinite_order_is_minus_one():
    g = gram_matrix(dihedral(0))
    assert g[0, 1] == -1


def test_affine_a2_determinant_zero():
    s = SYSTEMS["A2~"]()
    g = gram_matrix(s)
    assert all(g[i, j] == Fraction(-1, 2) for i in range(3) for j in range(3) if i != j)
    # independent rational cofactor expansion
    h = Fraction(-1, 2)
    rat = [[1, h, h], [h, 1, h], [h, h, 1]]
    cof = (rat[0][0] * (rat[1][1] * rat[2][2] - rat[1][2] * rat[2][1])
           - rat[0][1] * (rat[1][0] * rat[2][2] - rat[1][2] * rat[2][0])
           + rat[0][2] * (rat[1][0] * rat[2][1] - rat[1][1] * rat[2][0]))
    assert cof == 0
    assert determinant(g) == 0


@pytest.mark.parametrize("name", ["A2", "A3", "B3", "H3", "F4", "A2~", "B2~", "Dinf", "W3"])
def test_determinant_matches_sympy(name):
    s = SYSTEMS[name]()
    expected = sympy.nsimplify(sympy.simplify(sympy_gram(s).det()))
    got = determinant(gram_matrix(s))
    assert abs(float(got) - float(expected)) < 1e-12
    assert got.is_zero() == (sympy.simplify(expected) == 0)


def test_positive_definite_examples():
    assert is_positive_definite(ExactMatrix.identity(field(4), 3))
    assert is_positive_definite(gram_matrix(path(5, 3)))
    assert not is_positive_definite(gram_matrix(path(4, 4)))
    assert not is_positive_definite(gram_matrix(universal(2)))


def test_positive_definite_rejects_asymmetric():
    r = reflection_matrix(path(3), 0)
    with pytest.raises(ValueError):
        is_positive_definite(r)
    with pytest.raises(ValueError):
        nullity(r)


def test_nullity_examples():
    assert nullity(ExactMatrix.identity(field(4), 4)) == 0
    g = gram_matrix(SYSTEMS["A2~"]())
    assert nullity(g) == 1
    one = g.field.one()
    assert kernel_contains(g, [one, one, one])
    assert nullity(gram_matrix(path(4, 4))) == 1
    assert nullity(gram_matrix(path(5, 3))) == 0
    assert nullity(gram_matrix(universal(3))) == 0  # hyperbolic, not degenerate


def test_nullity_matches_sympy_rank():
    # two disjoint affine triangles plus a free node: nullity 2
    m = [[1] * 7 for _ in range(7)]
    for i in range(7):
        for j in range(7):
            if i != j:
                same = (i < 3 and j < 3) or (3 <= i < 6 and 3 <= j < 6)
                m[i][j] = 3 if same else 2
    s = cox(m)
    assert nullity(gram_matrix(s)) == 7 - sympy_gram(s).rank() == 2


@pytest.mark.parametrize("name", ["A3", "H3", "B3", "F4"])
def test_spherical_grams_invertible(name):
    s = SYSTEMS[name]()
    assert is_positive_definite(gram_matrix(s))
    assert nullity(gram_matrix(s)) == 0


# -- reflections ----------------------------------------------------------------------

def test_rank_one_reflection():
    r = reflection_matrix(cox([[1]]), 0)
    assert r.rows == ((-1,),)


def test_infinite_dihedral_reflection():
    r = reflection_matrix(dihedral(0), 0)
    assert r.rows == ((-1, 2), (0, 1))


def _matrix_order(m: ExactMatrix, limit=20):
    eye = ExactMatrix.identity(m.field, m.dimension)
    p = m
    for k in range(1, limit + 1):
        if p == eye:
            return k
        p = p @ m
    return None


@pytest.mark.parametrize("name", ["A3", "B3", "H3", "F4", "A2~", "B2~", "W3"])
def test_reflections_are_involutions(name):
    s = SYSTEMS[name]()
    for i in range(s.rank):
        assert _matrix_order(reflection_matrix(s, i)) == 2


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_product_of_reflections_has_order_m(m):
    s = dihedral(m)
    prod = reflection_matrix(s, 0) @ reflection_matrix(s, 1)
    assert _matrix_order(prod) == m


def test_infinite_product_has_no_small_order():
    s = dihedral(0)
    prod = reflection_matrix(s, 0) @ reflection_matrix(s, 1)
    assert _matrix_order(prod, 12) is None


def test_reflection_preserves_form():
    s = path(5, 3)
    g = gram_matrix(s)
    for i in range(3):
        r = reflection_matrix(s, i)
        # sigma^T B sigma = B in the root basis
        assert r.transpose() @ g @ r == g


def test_rank_of_reflection_representation():
    s = path(5, 3)
    assert rank(reflection_matrix(s, 1)) == 3
