"""Exact arithmetic in the real subfield of a cyclotomic field.

Elements are polynomials in a primitive ``N``-th root of unity ``z`` with
integer numerators over a common positive denominator, reduced modulo the
``N``-th cyclotomic polynomial.  Signs are decided by an exact zero test
followed by interval evaluation at doubling precision.

Also hosts the geometric representation of a Coxeter system: its Gram
matrix ``B_st = -cos(pi/m_st)`` (``-1`` for infinite order) and the simple
reflections ``v -> v - 2 B(a_s, v) a_s``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
from mpmath.libmp import to_int

from .coxeter import INF, CoxeterSystem, check_subset

#: Starting precision (bits) for interval sign determination.
START_PRECISION = 64


# --------------------------------------------------------------------------
# integer polynomials (lists of coefficients, lowest degree first)

def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _divmod_monic(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    num = list(num)
    d = len(den) - 1
    q = [0] * max(len(num) - d, 0)
    for k in range(len(num) - 1, d - 1, -1):
        c = num[k]
        if c:
            q[k - d] = c
            for j in range(d + 1):
                num[k - d + j] -= c * den[j]
    return q, _trim(num[:d])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of the ``n``-th cyclotomic polynomial, low degree first."""
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p, r = _divmod_monic(p, list(cyclotomic_polynomial(d)))
            assert not r
    return tuple(p)


class CyclotomicField:
    """Q(z) for a primitive N-th root of unity z.  Use :func:`field`."""

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        poly = cyclotomic_polynomial(order)
        self.degree = len(poly) - 1
        # x^degree = -sum(poly[j] x^j); keep only the nonzero tail
        self._tail = [(j, c) for j, c in enumerate(poly[:-1]) if c]
        self._powers: dict[int, tuple[int, ...]] = {}
        self._tables: dict[int, list[tuple[int, int]]] = {}

    def __repr__(self):
        return f"CyclotomicField({self.order})"

    def __reduce__(self):
        return field, (self.order,)

    def reduce(self, p: list[int]) -> list[int]:
        """Reduce an integer polynomial modulo the cyclotomic polynomial (in place)."""
        d = self.degree
        tail = self._tail
        for k in range(len(p) - 1, d - 1, -1):
            c = p[k]
            if c:
                base = k - d
                for j, a in tail:
                    p[base + j] -= c * a
        del p[d:]
        return _trim(p)

    def power(self, k: int) -> tuple[int, ...]:
        """Canonical coefficients of ``z**k``."""
        k %= self.order
        if k not in self._powers:
            p = [0] * k + [1]
            self._powers[k] = tuple(self.reduce(p))
        return self._powers[k]

    def cos_table(self, bits: int) -> list[tuple[int, int]]:
        """Integer bounds ``lo_k <= 2**bits * cos(2 pi k / N) <= hi_k``."""
        table = self._tables.get(bits)
        if table is None:
            table = []
            scale = mpmath.mpf(2) ** bits
            iv = mpmath.iv
            saved = iv.prec
            iv.prec = bits + 32
            try:
                for k in range(self.degree):
                    lo, hi = (iv.cos(2 * iv.pi * k / self.order) * scale)._mpi_
                    # round the raw endpoints outward; mpmath.floor would go via 53-bit floats
                    table.append((to_int(lo, "f"), to_int(hi, "c")))
            finally:
                iv.prec = saved
            self._tables[bits] = table
        return table

    # constructors
    def zero(self) -> AlgebraicReal:
        return AlgebraicReal(self, (), 1)

    def one(self) -> AlgebraicReal:
        return AlgebraicReal(self, (1,), 1)

    def rational(self, q: int | Fraction) -> AlgebraicReal:
        q = Fraction(q)
        return AlgebraicReal(self, (q.numerator,) if q else (), q.denominator)

    def two_cos(self, k: int) -> AlgebraicReal:
        """``z**k + z**-k`` = ``2 cos(2 pi k / N)``."""
        a, b = self.power(k), self.power(-k)
        n = max(len(a), len(b))
        p = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        return AlgebraicReal(self, tuple(_trim(p)), 1)


@lru_cache(maxsize=None)
def field(order: int) -> CyclotomicField:
    return CyclotomicField(order)


class AlgebraicReal:
    """Real element ``num(z) / den`` of a cyclotomic field, canonical form.

    ``num`` is a tuple of ints with degree below the field degree and no
    trailing zeros; ``den > 0`` and shares no factor with the content of
    ``num``.  Equal values have identical representations.
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, fld: CyclotomicField, num: Sequence[int], den: int = 1, *, _canonical=True):
        self.field = fld
        if _canonical:
            self.num = tuple(num)
            self.den = den
        else:
            p = fld.reduce(list(num))
            if den < 0:
                p = [-c for c in p]
                den = -den
            g = math.gcd(den, *p)
            if g != 1:
                p = [c // g for c in p]
                den //= g
            if not p:
                den = 1
            self.num = tuple(p)
            self.den = den

    @classmethod
    def make(cls, fld: CyclotomicField, num: Sequence[int], den: int = 1) -> AlgebraicReal:
        """Canonicalise an arbitrary integer polynomial over ``den``."""
        return cls(fld, num, den, _canonical=False)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> AlgebraicReal:
        if isinstance(other, AlgebraicReal):
            if other.field is not self.field:
                raise ValueError(f"mixed fields {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.num, other.num
        if not a:
            return other
        if not b:
            return self
        da, db = self.den, other.den
        if da == db:
            n = max(len(a), len(b))
            p = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
            return AlgebraicReal.make(self.field, p, da)
        n = max(len(a), len(b))
        p = [(a[i] * db if i < len(a) else 0) + (b[i] * da if i < len(b) else 0) for i in range(n)]
        return AlgebraicReal.make(self.field, p, da * db)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicReal(self.field, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.num, other.num
        if not a or not b:
            return self.field.zero()
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            c = b[0]
            p = [x * c for x in a]
        else:
            p = [0] * (len(a) + len(b) - 1)
            for j, y in enumerate(b):
                if y:
                    for i, x in enumerate(a):
                        p[i + j] += x * y
        return AlgebraicReal.make(self.field, p, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> AlgebraicReal:
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return _inverse(self)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        return self.field.order == other.field.order and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.field.order, self.num, self.den))

    def is_zero(self) -> bool:
        return not self.num

    def sign(self) -> int:
        return sign_of(self)

    def __lt__(self, other):
        return sign_of(self - other) < 0

    def __gt__(self, other):
        return sign_of(self - other) > 0

    def __bool__(self):
        return bool(self.num)

    # -- misc ----------------------------------------------------------------
    def conjugate(self) -> AlgebraicReal:
        """Image under ``z -> z**-1``."""
        acc = [0] * self.field.degree
        for k, c in enumerate(self.num):
            if c:
                for j, x in enumerate(self.field.power(-k)):
                    acc[j] += c * x
        return AlgebraicReal.make(self.field, acc, self.den)

    def is_real(self) -> bool:
        return self.conjugate() == self

    def is_rational(self) -> bool:
        return len(self.num) <= 1

    def interval(self, bits: int = START_PRECISION) -> tuple[Fraction, Fraction]:
        lo, hi = _interval_ints(self, bits)
        scale = self.den << bits
        return Fraction(lo, scale), Fraction(hi, scale)

    def __float__(self):
        # refine until the interval is narrower than double precision
        bits = START_PRECISION
        while True:
            lo, hi = self.interval(bits)
            if hi - lo <= max(abs(lo), abs(hi)) * Fraction(1, 2**60) or bits >= 4096:
                return float((lo + hi) / 2)
            bits *= 2

    def __repr__(self):
        return f"AlgebraicReal(N={self.field.order}, num={list(self.num)}, den={self.den} ~ {float(self):.12g})"

    def to_json(self) -> dict:
        return {"N": self.field.order, "num": list(self.num), "den": self.den}

    @classmethod
    def from_json(cls, data: dict) -> AlgebraicReal:
        return cls.make(field(data["N"]), data["num"], data["den"])


def _interval_ints(x: AlgebraicReal, bits: int) -> tuple[int, int]:
    table = x.field.cos_table(bits)
    lo = hi = 0
    for c, (l, h) in zip(x.num, table):
        if c > 0:
            lo += c * l
            hi += c * h
        elif c < 0:
            lo += c * h
            hi += c * l
    return lo, hi


def sign_of(x: AlgebraicReal) -> int:
    """-1, 0 or 1.  Exact zero test first, then intervals at 64, 128, ... bits."""
    if not x.num:
        return 0
    bits = START_PRECISION
    while True:
        lo, hi = _interval_ints(x, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


@lru_cache(maxsize=100000)
def _inverse(x: AlgebraicReal) -> AlgebraicReal:
    # extended Euclid over Q: find u with u * num = 1 mod Phi_N
    fld = x.field
    r0 = [Fraction(c) for c in cyclotomic_polynomial(fld.order)]
    r1 = [Fraction(c) for c in x.num]
    u0: list[Fraction] = []
    u1 = [Fraction(1)]
    while len(r1) > 1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _qsub(u0, _qmul(q, u1))
    c = r1[0]
    u = [v / c for v in u1]
    den = math.lcm(*(v.denominator for v in u)) if u else 1
    num = [int(v * den) for v in u]
    # (num/den) is the inverse of x.num; divide out x.den
    return AlgebraicReal.make(fld, [c * x.den for c in num], den)


def _qdivmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _qmul(a, b):
    if not a or not b:
        return []
    p = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            p[i + j] += x * y
    return p


def _qsub(a, b):
    n = max(len(a), len(b))
    p = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while p and p[-1] == 0:
        p.pop()
    return p


def cos_pi_over(m: float, order: int | None = None) -> AlgebraicReal:
    """``cos(pi/m)`` in ``Q(z_order)``; ``1`` for infinite ``m``.

    ``order`` defaults to ``2m`` (``2`` when ``m`` is infinite) and must be a
    multiple of ``2m``.
    """
    if m == INF:
        return field(order or 2).one()
    if m != int(m) or m < 2:
        raise ValueError(f"cos(pi/m) needs an order m >= 2 or infinity, got {m}")
    m = int(m)
    order = order or 2 * m
    if order % (2 * m):
        raise ValueError(f"cos(pi/{m}) does not live in Q(z_{order})")
    fld = field(order)
    two = fld.two_cos(order // (2 * m))
    return AlgebraicReal.make(fld, two.num, 2)


# --------------------------------------------------------------------------
# matrices

class ExactMatrix:
    """Immutable dense square matrix over one cyclotomic field."""

    __slots__ = ("field", "rows", "_hash")

    def __init__(self, fld: CyclotomicField, rows: Iterable[Iterable[AlgebraicReal]]):
        self.field = fld
        self.rows = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        for r in self.rows:
            if len(r) != n:
                raise ValueError("ExactMatrix must be square")
            for x in r:
                if x.field is not fld:
                    raise ValueError("all entries must share the ambient field")
        self._hash = None

    @classmethod
    def identity(cls, fld: CyclotomicField, n: int) -> ExactMatrix:
        one, zero = fld.one(), fld.zero()
        return cls(fld, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field.order == other.field.order and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.order, self.rows))
        return self._hash

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        n = self.dimension
        cols = list(zip(*other.rows))
        zero = self.field.zero()
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for x, y in zip(r, c):
                    if x.num and y.num:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return ExactMatrix(self.field, out)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(self.field, zip(*self.rows))

    def is_symmetric(self) -> bool:
        n = self.dimension
        return all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i))

    def to_floats(self) -> list[list[float]]:
        return [[float(x) for x in r] for r in self.rows]

    def __repr__(self):
        body = "; ".join(" ".join(f"{float(x):.6g}" for x in r) for r in self.rows)
        return f"ExactMatrix(N={self.field.order}, [{body}])"


def _require_symmetric(m: ExactMatrix):
    if not m.is_symmetric():
        raise ValueError("matrix is not symmetric")


def leading_minor_signs(m: ExactMatrix, stop_at_nonpositive: bool = True) -> list[int]:
    """Signs of the leading principal minors via Bareiss elimination.

    Without pivoting the k-th Bareiss pivot is the k-th leading minor.
    Elimination halts at a zero pivot (later minors are not reachable
    without pivoting) or, if asked, at the first non-positive one.
    """
    a = [list(r) for r in m.rows]
    n = len(a)
    prev = m.field.one()
    signs = []
    for k in range(n):
        piv = a[k][k]
        s = sign_of(piv)
        signs.append(s)
        if s == 0 or (stop_at_nonpositive and s < 0):
            break
        inv_prev = prev.inverse()
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                t = piv * a[i][j]
                if aik.num and a[k][j].num:
                    t = t - aik * a[k][j]
                a[i][j] = t * inv_prev if t.num else t
        prev = piv
    return signs


def is_positive_definite(m: ExactMatrix) -> bool:
    _require_symmetric(m)
    signs = leading_minor_signs(m)
    return len(signs) == m.dimension and all(s > 0 for s in signs)


def determinant(m: ExactMatrix) -> AlgebraicReal:
    """Bareiss determinant with row pivoting on exact zeros."""
    a = [list(r) for r in m.rows]
    n = len(a)
    fld = m.field
    if n == 0:
        return fld.one()
    prev = fld.one()
    negate = False
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k].num), None)
        if p is None:
            return fld.zero()
        if p != k:
            a[k], a[p] = a[p], a[k]
            negate = not negate
        inv_prev = prev.inverse()
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (piv * a[i][j] - a[i][k] * a[k][j]) * inv_prev
        prev = piv
    return -a[n - 1][n - 1] if negate else a[n - 1][n - 1]


def rank(m: ExactMatrix) -> int:
    """Rank by fraction-free elimination with full column scan."""
    a = [list(r) for r in m.rows]
    rows = len(a)
    cols = rows
    r = 0
    prev = m.field.one()
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c].num), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        inv_prev = prev.inverse()
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                a[i][j] = (piv * a[i][j] - a[i][c] * a[r][j]) * inv_prev
            a[i][c] = m.field.zero()
        prev = piv
        r += 1
    return r


def nullity(m: ExactMatrix) -> int:
    _require_symmetric(m)
    return m.dimension - rank(m)


def kernel_contains(m: ExactMatrix, v: Sequence[AlgebraicReal]) -> bool:
    zero = m.field.zero()
    for row in m.rows:
        acc = zero
        for x, y in zip(row, v):
            acc = acc + x * y
        if acc.num:
            return False
    return True


# --------------------------------------------------------------------------
# geometric representation

@lru_cache(maxsize=4096)
def _two_cos_entries(system: CoxeterSystem) -> tuple[tuple[AlgebraicReal, ...], ...]:
    """``2 cos(pi/m_st)`` in the ambient field (``2`` for infinity, ``2`` on
    the diagonal)."""
    n = system.ambient_order
    fld = field(n)
    out = []
    for i in range(system.rank):
        row = []
        for j in range(system.rank):
            m = system.orders[i][j]
            if m == INF or m == 1:
                row.append(fld.rational(2))
            else:
                row.append(fld.two_cos(n // (2 * int(m))))
        out.append(tuple(row))
    return tuple(out)


def ambient_field(system: CoxeterSystem) -> CyclotomicField:
    return field(system.ambient_order)


def gram_matrix(system: CoxeterSystem, subset: Iterable[int] | None = None) -> ExactMatrix:
    """Bilinear form of the geometric representation restricted to ``subset``."""
    t = tuple(range(system.rank)) if subset is None else check_subset(system, subset)
    two = _two_cos_entries(system)
    fld = ambient_field(system)
    rows = []
    for i in t:
        row = []
        for j in t:
            x = two[i][j]
            row.append(fld.one() if i == j else AlgebraicReal.make(fld, [-c for c in x.num], 2 * x.den))
        rows.append(row)
    return ExactMatrix(fld, rows)


def scaled_gram_matrix(system: CoxeterSystem, subset: Iterable[int] | None = None) -> ExactMatrix:
    """``2 B`` restricted to ``subset``; integral entries, same definiteness."""
    t = tuple(range(system.rank)) if subset is None else check_subset(system, subset)
    two = _two_cos_entries(system)
    fld = ambient_field(system)
    return ExactMatrix(fld, [[two[i][j] if i == j else -two[i][j] for j in t] for i in t])


def reflection_matrix(system: CoxeterSystem, s: int) -> ExactMatrix:
    """Matrix of ``sigma_s`` in the simple-root basis.

    Only row ``s`` differs from the identity: ``-1`` on the diagonal and
    ``2 cos(pi/m_st)`` elsewhere.
    """
    if not 0 <= s < system.rank:
        raise IndexError(f"generator index {s} out of range")
    fld = ambient_field(system)
    two = _two_cos_entries(system)
    eye = ExactMatrix.identity(fld, system.rank)
    rows = [list(r) for r in eye.rows]
    rows[s] = [(-fld.one() if t == s else two[s][t]) for t in range(system.rank)]
    return ExactMatrix(fld, rows)
