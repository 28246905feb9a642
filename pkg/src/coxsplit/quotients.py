"""Finite permutation quotients of Coxeter groups.

A quotient is an assignment of an involution (or the identity) in the
symmetric group of degree ``n`` to each generator such that every relation
``(st)^m = 1`` with finite ``m`` holds.  Assignments are searched by
backtracking in a canonical order: degree ascending, then lexicographic in
the one-line arrays of the generator images.

Permutations are 0-based one-line tuples; products compose left to right
(``(p * q)[i] = q[p[i]]``).  Cycle notation in JSON is 1-based.
"""
from __future__ import annotations

import math
import re
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import islice
from typing import Iterable, Iterator, Sequence

from .coxeter import INF, CoxeterSystem, check_subset, classify_finite_type
from .words import check_word, shortlex_normal_form

Perm = tuple[int, ...]

GROUP_CAP = 10**6


class QuotientTooLargeError(RuntimeError):
    pass


class IdentityWordError(ValueError):
    """Separation was requested for a word equal to the identity."""


# --------------------------------------------------------------------------
# permutations

def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def perm_mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[i] for i in p)


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_pow(p: Perm, k: int) -> Perm:
    out = identity_perm(len(p))
    for _ in range(k):
        out = perm_mul(out, p)
    return out


def perm_order(p: Perm) -> int:
    seen = [False] * len(p)
    order = 1
    for i in range(len(p)):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                n += 1
            order = math.lcm(order, n)
    return order


def to_cycles(p: Perm) -> str:
    seen = set()
    parts = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        parts.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) or "()"


def from_cycles(text: str, degree: int) -> Perm:
    out = list(range(degree))
    for body in re.findall(r"\(([^()]*)\)", text):
        pts = [int(x) - 1 for x in body.split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if not (0 <= a < degree and 0 <= b < degree):
                raise ValueError(f"point out of range in {text!r}")
            out[a] = b
    if sorted(out) != list(range(degree)):
        raise ValueError(f"not a permutation: {text!r}")
    return tuple(out)


@lru_cache(maxsize=None)
def involutions(n: int) -> tuple[Perm, ...]:
    """The identity and all involutions of degree ``n``, lexicographically."""
    out = []

    def rec(p: list[int], i: int):
        while i < n and p[i] != -1:
            i += 1
        if i == n:
            out.append(tuple(p))
            return
        p[i] = i
        rec(p, i + 1)
        for j in range(i + 1, n):
            if p[j] == -1:
                p[i], p[j] = j, i
                rec(p, i + 1)
                p[j] = -1
        p[i] = -1

    rec([-1] * n, 0)
    return tuple(sorted(out))


def generate_group(gens: Sequence[Perm], degree: int, cap: int = GROUP_CAP) -> set[Perm]:
    ident = identity_perm(degree)
    elems = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for h in gens:
            x = perm_mul(g, h)
            if x not in elems:
                if len(elems) >= cap:
                    raise QuotientTooLargeError(f"image group exceeds {cap} elements")
                elems.add(x)
                queue.append(x)
    return elems


# --------------------------------------------------------------------------
# quotients

@dataclass(frozen=True)
class PermQuotient:
    degree: int
    images: tuple[Perm, ...]

    @cached_property
    def image_order(self) -> int:
        return len(generate_group(self.images, self.degree))

    def image(self, w: Iterable[int]) -> Perm:
        out = identity_perm(self.degree)
        for s in w:
            out = perm_mul(out, self.images[s])
        return out

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "images": [to_cycles(p) for p in self.images],
            "image_order": self.image_order,
        }

    @classmethod
    def from_json(cls, data: dict) -> PermQuotient:
        n = data["degree"]
        return cls(n, tuple(from_cycles(c, n) for c in data["images"]))

    def __str__(self):
        return f"degree {self.degree}: " + ", ".join(to_cycles(p) for p in self.images)


def _relations(system: CoxeterSystem) -> list[list[tuple[int, int]]]:
    # for generator i, the finite relations (j, m) with j < i
    return [[(j, int(system.orders[i][j])) for j in range(i) if system.orders[i][j] != INF]
            for i in range(system.rank)]


def _search_degree(system: CoxeterSystem, degree: int, first: Perm | None = None) -> Iterator[PermQuotient]:
    """Valid assignments at one degree in canonical order.  ``first`` pins
    the image of generator 0 (used to split the search into subtrees)."""
    rank = system.rank
    rels = _relations(system)
    invs = involutions(degree)
    ident = identity_perm(degree)
    chosen: list[Perm] = []

    def rec(i: int):
        if i == rank:
            if rank == 0 or any(p != ident for p in chosen):
                yield PermQuotient(degree, tuple(chosen))
            return
        options = (first,) if (i == 0 and first is not None) else invs
        for p in options:
            if all(perm_pow(perm_mul(chosen[j], p), m) == ident for j, m in rels[i]):
                chosen.append(p)
                yield from rec(i + 1)
                chosen.pop()

    yield from rec(0)


def iter_quotients(system: CoxeterSystem, max_degree: int, min_degree: int = 1) -> Iterator[PermQuotient]:
    """Lazy canonical-order stream of all quotients up to ``max_degree``."""
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    if system.rank == 0:
        yield PermQuotient(1, ())
        return
    for n in range(min_degree, max_degree + 1):
        yield from _search_degree(system, n)


def _subtree(args) -> list[PermQuotient]:
    system, degree, first, limit = args
    return list(islice(_search_degree(system, degree, first), limit))


def search_quotients(system: CoxeterSystem, max_degree: int, max_count: int = 10,
                     workers: int = 1) -> list[PermQuotient]:
    """Up to ``max_count`` quotients of degree at most ``max_degree``.

    With ``workers > 1`` each degree is split by the image of the first
    generator and the subtrees run in a process pool; results are merged in
    canonical order, so the output does not depend on scheduling.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    if workers <= 1 or system.rank == 0:
        found = list(islice(iter_quotients(system, max_degree), max_count))
    else:
        found = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for n in range(1, max_degree + 1):
                need = max_count - len(found)
                if need <= 0:
                    break
                jobs = [(system, n, p, need) for p in involutions(n)]
                for part in pool.map(_subtree, jobs):
                    found.extend(part)
                found = found[:max_count]
    for q in found:
        if not verify_quotient(system, q):
            raise AssertionError(f"search produced an invalid quotient {q}")
    return found


def verify_quotient(system: CoxeterSystem, q: PermQuotient) -> bool:
    """Recheck every defining relation by explicit composition."""
    n = q.degree
    if len(q.images) != system.rank:
        return False
    ident = list(range(n))
    for p in q.images:
        if len(p) != n or sorted(p) != ident:
            return False
        if [p[p[i]] for i in range(n)] != ident:
            return False
    for i in range(system.rank):
        for j in range(i + 1, system.rank):
            m = system.orders[i][j]
            if m == INF:
                continue
            a, b = q.images[i], q.images[j]
            x = list(range(n))
            for _ in range(int(m)):
                x = [b[a[k]] for k in x]
            if x != ident:
                return False
    return True


def separate_element(system: CoxeterSystem, w: Sequence[int], max_degree: int) -> PermQuotient | None:
    """First quotient (canonical order) in which ``w`` maps to a non-identity
    permutation, or None when none exists up to ``max_degree``.  None is
    inconclusive: no general degree bound is known."""
    w = check_word(system, w)
    if not shortlex_normal_form(system, w).letters:
        raise IdentityWordError("the word represents the identity; nothing to separate")
    for q in iter_quotients(system, max_degree):
        if q.image(w) != identity_perm(q.degree):
            if not verify_quotient(system, q):
                raise AssertionError(f"search produced an invalid quotient {q}")
            return q
    return None


# --------------------------------------------------------------------------
# normalizer / centralizer evidence

@dataclass(frozen=True)
class Evidence:
    """Image of ``W_T`` in a finite quotient and the order of its normalizer,
    centralizer or separating image there.  Advisory only."""

    kind: str
    quotient: PermQuotient
    subset: tuple[int, ...]
    subgroup_image_order: int
    result_order: int
    tight: bool

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "quotient": self.quotient.to_json(),
            "subset": list(self.subset),
            "subgroup_image_order": self.subgroup_image_order,
            "result_order": self.result_order,
            "tight": self.tight,
        }


def _images(system: CoxeterSystem, subset, q: PermQuotient, cap: int):
    t = check_subset(system, subset)
    if not classify_finite_type(system, t).is_spherical:
        raise ValueError(f"subset {list(t)} is not spherical")
    if not verify_quotient(system, q):
        raise ValueError("quotient does not satisfy the Coxeter relations")
    whole = generate_group(q.images, q.degree, cap)
    sub_gens = [q.images[i] for i in t]
    sub = generate_group(sub_gens, q.degree, cap)
    return t, whole, sub, sub_gens


def normalizer_evidence(system: CoxeterSystem, subset: Iterable[int], q: PermQuotient,
                        cap: int = GROUP_CAP) -> Evidence:
    """Order of the normalizer of phi(W_T) in phi(W).  Tight when it equals
    |phi(W_T)|; a loose bound never refutes self-normalization."""
    t, whole, sub, sub_gens = _images(system, subset, q, cap)
    norm = 0
    for g in whole:
        gi = perm_inv(g)
        if all(perm_mul(perm_mul(gi, h), g) in sub for h in sub_gens):
            norm += 1
    return Evidence("normalizer", q, t, len(sub), norm, norm == len(sub))


def centralizer_evidence(system: CoxeterSystem, subset: Iterable[int], q: PermQuotient,
                         cap: int = GROUP_CAP) -> Evidence:
    t, whole, sub, sub_gens = _images(system, subset, q, cap)
    cent = sum(1 for g in whole if all(perm_mul(g, h) == perm_mul(h, g) for h in sub_gens))
    center = sum(1 for z in sub if all(perm_mul(z, h) == perm_mul(h, z) for h in sub_gens))
    return Evidence("centralizer", q, t, len(sub), cent, cent == center)


def separation_evidence(system: CoxeterSystem, w: Sequence[int], q: PermQuotient) -> Evidence:
    """Separation record: ``result_order`` is the order of phi(w)."""
    p = q.image(check_word(system, w))
    order = perm_order(p)
    return Evidence("separation", q, (), 1, order, order > 1)
