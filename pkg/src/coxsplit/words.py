"""Word problem for Coxeter systems.

Normal forms come from the root-sign descent criterion: ``s`` is a left
descent of ``w`` iff ``w^{-1}(a_s)`` is a negative root.  The matrix of
``w^{-1}`` in the simple-root basis is tracked exactly, and the ShortLex
normal form is read off greedily (smallest left descent first).

:func:`tits_reduce_oracle` solves the same problem by braid moves and
``ss``-deletions only, with no arithmetic, and serves as the cross-check.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, Sequence

from .coxeter import (INF, CoxeterSystem, NotSphericalError, check_subset, classify_finite_type,
                      induced_subsystem)
from .cyclotomic import AlgebraicReal, _two_cos_entries, ambient_field, sign_of

Word = tuple[int, ...]

ORACLE_CAP = 25
CAYLEY_CAP = 10**5


class OracleCapError(ValueError):
    pass


class CayleyOverflowError(RuntimeError):
    """The parabolic subgroup has more elements than the enumeration cap."""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"more than {cap} elements")


@dataclass(frozen=True, order=True)
class NormalForm:
    letters: Word

    @property
    def length(self) -> int:
        return len(self.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)


def check_word(system: CoxeterSystem, w: Iterable[int]) -> Word:
    w = tuple(w)
    for s in w:
        if not 0 <= s < system.rank:
            raise IndexError(f"generator index {s} out of range for rank {system.rank}")
    return w


def parse_word(system: CoxeterSystem, text: str) -> Word:
    """Whitespace-separated generator labels, e.g. ``"s1 s2 s1"``."""
    return tuple(system.index(tok) for tok in text.split())


def format_word(system: CoxeterSystem, w: Iterable[int]) -> str:
    return " ".join(system.labels[s] for s in w)


# --------------------------------------------------------------------------
# exact matrices of group elements, as mutable row lists

class _Reps:
    """Per-system constants: coefficients ``c_st = 2 cos(pi/m_st)``."""

    def __init__(self, system: CoxeterSystem):
        self.rank = system.rank
        self.field = ambient_field(system)
        two = _two_cos_entries(system)
        self.coef = [[two[s][t] for t in range(self.rank)] for s in range(self.rank)]
        self.nbrs = [[t for t in range(self.rank) if t != s and two[s][t].num]
                     for s in range(self.rank)]

    def identity(self) -> list[list[AlgebraicReal]]:
        one, zero = self.field.one(), self.field.zero()
        return [[one if i == j else zero for j in range(self.rank)] for i in range(self.rank)]

    def left_mul(self, a: list[list[AlgebraicReal]], s: int) -> None:
        """``a <- sigma_s a``: only row ``s`` changes."""
        row = [-x for x in a[s]]
        c = self.coef[s]
        for t in self.nbrs[s]:
            ct = c[t]
            rt = a[t]
            for j in range(self.rank):
                if rt[j].num:
                    row[j] = row[j] + ct * rt[j]
        a[s] = row

    def right_mul(self, a: list[list[AlgebraicReal]], s: int) -> None:
        """``a <- a sigma_s``: column ``t`` gains ``c_st`` times column ``s``."""
        c = self.coef[s]
        nb = self.nbrs[s]
        for row in a:
            x = row[s]
            if x.num:
                for t in nb:
                    row[t] = row[t] + c[t] * x
                row[s] = -x

    def column_negative(self, a: list[list[AlgebraicReal]], s: int) -> bool:
        for row in a:
            x = row[s]
            if x.num:
                return sign_of(x) < 0
        raise AssertionError("image of a simple root vanished")


@lru_cache(maxsize=256)
def _reps(system: CoxeterSystem) -> _Reps:
    return _Reps(system)


def inverse_matrix(system: CoxeterSystem, w: Sequence[int]) -> list[list[AlgebraicReal]]:
    """Rows of the matrix of ``w^{-1}`` in the simple-root basis."""
    r = _reps(system)
    a = r.identity()
    for s in w:
        r.left_mul(a, s)
    return a


def element_matrix(system: CoxeterSystem, w: Sequence[int]) -> list[list[AlgebraicReal]]:
    """Rows of the matrix of ``w`` in the simple-root basis."""
    r = _reps(system)
    a = r.identity()
    for s in w:
        r.right_mul(a, s)
    return a


def _greedy_normal_form(r: _Reps, a: list[list[AlgebraicReal]]) -> Word:
    # a is the matrix of w^{-1}; consumed
    out = []
    while True:
        for s in range(r.rank):
            if r.column_negative(a, s):
                break
        else:
            return tuple(out)
        out.append(s)
        r.right_mul(a, s)


def is_left_descent(system: CoxeterSystem, w: Sequence[int], s: int) -> bool:
    w = check_word(system, w)
    check_word(system, (s,))
    return _reps(system).column_negative(inverse_matrix(system, w), s)


def is_right_descent(system: CoxeterSystem, w: Sequence[int], s: int) -> bool:
    w = check_word(system, w)
    check_word(system, (s,))
    return _reps(system).column_negative(element_matrix(system, w), s)


def shortlex_normal_form(system: CoxeterSystem, w: Sequence[int]) -> NormalForm:
    w = check_word(system, w)
    if len(w) <= 1:
        return NormalForm(w)
    return NormalForm(_greedy_normal_form(_reps(system), inverse_matrix(system, w)))


def length(system: CoxeterSystem, w: Sequence[int]) -> int:
    return shortlex_normal_form(system, w).length


def inverse(w: Sequence[int]) -> Word:
    return tuple(reversed(w))


# --------------------------------------------------------------------------
# braid-move oracle

def _braid_neighbours(system: CoxeterSystem, w: Word):
    n = len(w)
    for i in range(n - 1):
        a, b = w[i], w[i + 1]
        if a == b:
            continue
        m = system.orders[a][b]
        if m == INF or i + m > n:
            continue
        m = int(m)
        if all(w[i + k] == (a if k % 2 == 0 else b) for k in range(m)):
            swapped = tuple(b if k % 2 == 0 else a for k in range(m))
            yield w[:i] + swapped + w[i + m:]


def _cancel_adjacent(w: Word) -> Word:
    out: list[int] = []
    for s in w:
        if out and out[-1] == s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def _has_square(w: Word) -> int:
    for i in range(len(w) - 1):
        if w[i] == w[i + 1]:
            return i
    return -1


def tits_reduce_oracle(system: CoxeterSystem, w: Sequence[int], cap: int = ORACLE_CAP) -> NormalForm:
    """ShortLex normal form by exhaustive braid moves plus ``ss`` deletion.

    By Tits' solution of the word problem, a word is reduced iff no word in
    its braid class contains a square, and the reduced words of an element
    form one braid class.  Exponential; desk-scale only.
    """
    w = check_word(system, w)
    if len(w) > cap:
        raise OracleCapError(f"word length {len(w)} exceeds oracle cap {cap}")
    # letters are absorbed one at a time so every search starts from a
    # reduced word with one extra letter
    reduced: Word = ()
    for s in w:
        reduced = _oracle_step(system, reduced + (s,))
    return NormalForm(reduced)


@lru_cache(maxsize=200000)
def _oracle_step(system: CoxeterSystem, w: Word) -> Word:
    while True:
        w = _cancel_adjacent(w)
        seen = {w}
        queue = deque([w])
        hit = None
        while queue and hit is None:
            u = queue.popleft()
            for v in _braid_neighbours(system, u):
                if v in seen:
                    continue
                i = _has_square(v)
                if i >= 0:
                    hit = v[:i] + v[i + 2:]
                    break
                seen.add(v)
                queue.append(v)
        if hit is None:
            return min(seen)
        w = hit


# --------------------------------------------------------------------------
# finite parabolic subgroups

@dataclass(frozen=True)
class ElementTable:
    """Cayley graph of a finite parabolic subgroup under right multiplication.

    ``elements`` are in BFS (length, then discovery) order; ``edges`` maps
    ``(element, generator)`` to ``element * generator``.  Generators are
    indices of the ambient system.
    """

    subset: tuple[int, ...]
    elements: tuple[NormalForm, ...]
    edges: dict = dc_field(compare=False, repr=False)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, item):
        nf = item if isinstance(item, NormalForm) else NormalForm(tuple(item))
        return nf in self.elements

    def multiply(self, u: NormalForm, v: Sequence[int]) -> NormalForm:
        for s in v:
            u = self.edges[(u, s)]
        return u


def cayley_enumerate(system: CoxeterSystem, subset: Iterable[int], cap: int = CAYLEY_CAP) -> ElementTable:
    """Breadth-first enumeration of ``W_T``, deduplicated by normal form.

    Raises :class:`CayleyOverflowError` once more than ``cap`` elements are
    found (always the case for infinite ``W_T``).
    """
    t = check_subset(system, subset)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    sub = induced_subsystem(system, t)
    r = _reps(sub)
    ident = NormalForm(())
    index = {(): 0}
    elements = [ident]
    mats = [r.identity()]
    edges = {}
    queue = deque([0])
    while queue:
        k = queue.popleft()
        w = elements[k].letters
        for local in range(sub.rank):
            a = [list(row) for row in mats[k]]
            r.left_mul(a, local)  # (w s)^{-1} = s w^{-1}
            nf = _greedy_normal_form(r, [list(row) for row in a])
            j = index.get(nf)
            if j is None:
                if len(elements) >= cap:
                    raise CayleyOverflowError(cap)
                j = len(elements)
                index[nf] = j
                elements.append(NormalForm(nf))
                mats.append(a)
                queue.append(j)
            edges[(k, local)] = j
    lift = lambda nf: NormalForm(tuple(t[i] for i in nf.letters))
    lifted = [lift(e) for e in elements]
    return ElementTable(
        t,
        tuple(lifted),
        {(lifted[k], t[s]): lifted[j] for (k, s), j in edges.items()},
    )


def _require_spherical(system: CoxeterSystem, t: tuple[int, ...]):
    if not classify_finite_type(system, t).is_spherical:
        raise NotSphericalError(f"subset {list(t)} is not spherical")


def longest_element(system: CoxeterSystem, subset: Iterable[int]) -> Word:
    """Greedy ascent: right-multiply by the first non-descent until every
    generator of ``T`` is a right descent.  Returned in normal form."""
    t = check_subset(system, subset)
    _require_spherical(system, t)
    sub = induced_subsystem(system, t)
    r = _reps(sub)
    a = r.identity()  # matrix of w
    word = []
    while True:
        for s in range(sub.rank):
            if not r.column_negative(a, s):
                break
        else:
            break
        word.append(s)
        r.right_mul(a, s)
    nf = shortlex_normal_form(sub, word)
    return tuple(t[i] for i in nf.letters)


def is_w0_central(system: CoxeterSystem, subset: Iterable[int]) -> bool:
    t = check_subset(system, subset)
    w0 = longest_element(system, t)
    return all(shortlex_normal_form(system, w0 + (s,) + w0).letters == (s,) for s in t)


def center_order(system: CoxeterSystem, subset: Iterable[int]) -> int:
    """``|Z(W_T)|`` for spherical ``T``: product over irreducible components
    of 2 when that component's longest element is central, else 1."""
    t = check_subset(system, subset)
    decomp = classify_finite_type(system, t)
    if not decomp.is_spherical:
        raise NotSphericalError(f"subset {list(t)} is not spherical")
    order = 1
    for _, nodes in decomp.components:
        if is_w0_central(system, nodes):
            order *= 2
    return order
