"""Coxeter systems, the ``.cox`` file format and finite-type classification.

A Coxeter system is stored as its symmetric matrix of orders ``m_st``.  The
infinite order is ``math.inf`` internally and ``0`` in files.  Spherical
(finite) standard parabolic subgroups are recognised purely from the
Coxeter diagram by matching connected components against the finite-type
templates A, B, D, E6-E8, F4, H3, H4 and I2(m).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

INF = math.inf

#: Enumeration cap on the rank for subset-lattice walks.
MAX_ENUMERATION_RANK = 20


class CoxeterFormatError(ValueError):
    """Malformed ``.cox`` input.  ``row``/``col`` are 0-based when known."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        self.row = row
        self.col = col
        where = ""
        if row is not None:
            where = f" (row {row + 1}" + (f", column {col + 1})" if col is not None else ")")
        super().__init__(message + where)


class MalformedMatrixError(CoxeterFormatError):
    pass


class AsymmetricMatrixError(CoxeterFormatError):
    pass


class DiagonalError(CoxeterFormatError):
    pass


class OrderError(CoxeterFormatError):
    pass


class EnumerationCapError(RuntimeError):
    pass


class NotSphericalError(ValueError):
    pass


Subset = tuple[int, ...]


@dataclass(frozen=True)
class CoxeterSystem:
    """Coxeter matrix together with generator labels.

    ``orders[i][j]`` is an ``int`` or ``INF``.  Label order fixes the
    ShortLex order and every enumeration order downstream.
    """

    orders: tuple[tuple[float, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        n = len(self.orders)
        for i, row in enumerate(self.orders):
            if len(row) != n:
                raise MalformedMatrixError(f"expected {n} entries, got {len(row)}", i)
        for i in range(n):
            if self.orders[i][i] != 1:
                raise DiagonalError("diagonal entry must be 1", i, i)
            for j in range(n):
                if i == j:
                    continue
                m = self.orders[i][j]
                if m != INF and (m != int(m) or m < 2):
                    raise OrderError(f"off-diagonal order {m} must be >= 2 or infinite", i, j)
                if m != self.orders[j][i]:
                    raise AsymmetricMatrixError(
                        f"m[{i}][{j}] = {_fmt(m)} but m[{j}][{i}] = {_fmt(self.orders[j][i])}", i, j)
        if len(self.labels) != n:
            raise CoxeterFormatError(f"expected {n} labels, got {len(self.labels)}")
        if len(set(self.labels)) != n:
            raise CoxeterFormatError("generator labels must be distinct")
        for lab in self.labels:
            if not lab or any(c.isspace() for c in lab):
                raise CoxeterFormatError(f"invalid generator label {lab!r}")

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[float]], labels: Sequence[str] | None = None):
        """Build from a nested sequence; ``0`` and ``inf`` both mean infinity."""
        orders = tuple(
            tuple(INF if (m == 0 or m == INF) else int(m) for m in row) for row in matrix
        )
        if labels is None:
            labels = default_labels(len(orders))
        return cls(orders, tuple(labels))

    @property
    def rank(self) -> int:
        return len(self.orders)

    def m(self, i: int, j: int) -> float:
        return self.orders[i][j]

    @property
    def ambient_order(self) -> int:
        """Order ``N`` of the root of unity generating the coefficient field.

        ``N = lcm(2 m_st)`` over all finite entries, diagonal included, so
        ``N >= 2``.
        """
        n = 2
        for row in self.orders:
            for m in row:
                if m != INF:
                    n = math.lcm(n, 2 * int(m))
        return n

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown generator {label!r}") from None

    def __str__(self):
        return format_coxeter_system(self)


def _fmt(m: float) -> str:
    return "inf" if m == INF else str(int(m))


def default_labels(n: int) -> tuple[str, ...]:
    return tuple(f"s{i + 1}" for i in range(n))


def parse_coxeter_system(text: str) -> CoxeterSystem:
    """Parse the ``.cox`` format.

    Layout: optional ``rank N`` line, optional ``labels a b ...`` line, then
    the N x N matrix of integers with ``0`` meaning infinity.  Blank lines and
    ``#`` comments are ignored.  Without a ``rank`` line the rank is the
    length of the first matrix row.
    """
    rank = None
    labels = None
    rows: list[list[int]] = []
    row_lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines()):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "rank":
            if rank is not None or rows:
                raise MalformedMatrixError("unexpected 'rank' line", lineno)
            try:
                rank = int(rest)
            except ValueError:
                raise MalformedMatrixError(f"bad rank {rest.strip()!r}", lineno) from None
            if rank < 0:
                raise MalformedMatrixError("rank must be non-negative", lineno)
            continue
        if head == "labels":
            if labels is not None or rows:
                raise MalformedMatrixError("unexpected 'labels' line", lineno)
            labels = rest.split()
            continue
        row = []
        for col, tok in enumerate(line.split()):
            try:
                row.append(int(tok))
            except ValueError:
                raise MalformedMatrixError(f"non-integer entry {tok!r}", len(rows), col) from None
        rows.append(row)
        row_lines.append(lineno)

    if rank is None:
        rank = len(rows[0]) if rows else 0
    if len(rows) != rank:
        raise MalformedMatrixError(f"expected {rank} matrix rows, got {len(rows)}")
    for i, row in enumerate(rows):
        if len(row) != rank:
            raise MalformedMatrixError(f"expected {rank} entries, got {len(row)}", i)
        for j, v in enumerate(row):
            if v < 0:
                raise OrderError(f"negative entry {v}", i, j)
    # check in reading order so the first offending cell is reported
    for i in range(rank):
        if rows[i][i] != 1:
            raise DiagonalError(f"diagonal entry is {rows[i][i]}, must be 1", i, i)
    for i in range(rank):
        for j in range(rank):
            if i != j and rows[i][j] == 1:
                raise OrderError("off-diagonal entry 1 (must be >= 2, or 0 for infinity)", i, j)
            if rows[i][j] != rows[j][i]:
                raise AsymmetricMatrixError(
                    f"entry {rows[i][j]} differs from transposed entry {rows[j][i]}", i, j)
    if labels is None:
        labels = default_labels(rank)
    return CoxeterSystem.from_matrix(rows, labels)


def format_coxeter_system(system: CoxeterSystem) -> str:
    """Canonical ``.cox`` text; certificates fingerprint this string."""
    lines = [f"rank {system.rank}"]
    lines.append(" ".join(["labels", *system.labels]).rstrip())
    for row in system.orders:
        lines.append(" ".join("0" if m == INF else str(int(m)) for m in row))
    return "\n".join(lines) + "\n"


def check_subset(system: CoxeterSystem, subset: Iterable[int]) -> Subset:
    members = tuple(sorted(set(subset)))
    for i in members:
        if not 0 <= i < system.rank:
            raise IndexError(f"generator index {i} out of range for rank {system.rank}")
    return members


def induced_subsystem(system: CoxeterSystem, subset: Iterable[int]) -> CoxeterSystem:
    t = check_subset(system, subset)
    return CoxeterSystem(
        tuple(tuple(system.orders[i][j] for j in t) for i in t),
        tuple(system.labels[i] for i in t),
    )


# --------------------------------------------------------------------------
# finite-type classification

@dataclass(frozen=True)
class TypeDecomposition:
    """Connected components of an induced Coxeter diagram.

    ``components`` holds ``(type_name, nodes)`` pairs; ``type_name`` is None
    for a component matching no finite-type template.
    """

    components: tuple[tuple[str | None, tuple[int, ...]], ...]
    is_spherical: bool

    @property
    def type_names(self) -> tuple[str | None, ...]:
        return tuple(name for name, _ in self.components)

    def __str__(self):
        if not self.components:
            return "trivial"
        return " x ".join(name or "?" for name in self.type_names)


def _components(system: CoxeterSystem, nodes: Subset) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    comps = []
    for start in nodes:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in nodes:
                if u not in seen and system.orders[v][u] != 2:
                    seen.add(u)
                    stack.append(u)
        comps.append(tuple(sorted(comp)))
    return comps


def _classify_component(system: CoxeterSystem, comp: tuple[int, ...]) -> tuple[str | None, tuple[int, ...]]:
    """Match one connected component; returns the type name and the nodes in
    diagram order (path order, or branch node first for D/E)."""
    n = len(comp)
    if n == 1:
        return "A1", comp
    nbrs = {v: [u for u in comp if u != v and system.orders[v][u] != 2] for v in comp}
    labels = {}
    for v in comp:
        for u in nbrs[v]:
            labels[frozenset((u, v))] = system.orders[v][u]
    if any(m == INF for m in labels.values()):
        return None, comp
    if n == 2:
        m = int(system.orders[comp[0]][comp[1]])
        return ("A2" if m == 3 else f"I2({m})"), comp
    if len(labels) != n - 1:
        return None, comp  # contains a cycle
    degrees = {v: len(nbrs[v]) for v in comp}
    branch = [v for v in comp if degrees[v] >= 3]

    if not branch:
        ends = [v for v in comp if degrees[v] == 1]
        path = _walk(min(ends), nbrs)
        seq = [labels[frozenset(p)] for p in zip(path, path[1:])]
        if seq[-1] > seq[0] or (seq[-1] == seq[0] and path[-1] < path[0]):
            path.reverse()
            seq.reverse()
        # now any distinguished label sits at the front
        if all(m == 3 for m in seq):
            return f"A{n}", tuple(path)
        if seq[0] == 4 and all(m == 3 for m in seq[1:]):
            return f"B{n}", tuple(path)
        if seq[0] == 5 and all(m == 3 for m in seq[1:]) and n in (3, 4):
            return f"H{n}", tuple(path)
        if n == 4 and seq == [3, 4, 3]:
            return "F4", tuple(path)
        return None, comp

    if len(branch) > 1 or degrees[branch[0]] > 3 or any(m != 3 for m in labels.values()):
        return None, comp
    centre = branch[0]
    arms = []
    for u in nbrs[centre]:
        arm = [u]
        prev = centre
        while True:
            nxt = [x for x in nbrs[arm[-1]] if x != prev]
            if not nxt:
                break
            prev = arm[-1]
            arm.append(nxt[0])
        arms.append(arm)
    arms.sort(key=lambda a: (len(a), a))
    lengths = tuple(len(a) for a in arms)
    order = (centre, *[v for arm in arms for v in arm])
    if lengths[:2] == (1, 1):
        return f"D{n}", order
    if lengths in ((1, 2, 2), (1, 2, 3), (1, 2, 4)):
        return f"E{n}", order
    return None, comp


def _walk(start: int, nbrs: dict[int, list[int]]) -> list[int]:
    path = [start]
    prev = None
    while True:
        nxt = [u for u in nbrs[path[-1]] if u != prev]
        if not nxt:
            return path
        prev = path[-1]
        path.append(nxt[0])


def classify_finite_type(system: CoxeterSystem, subset: Iterable[int]) -> TypeDecomposition:
    t = check_subset(system, subset)
    return _classify(system, t)


@lru_cache(maxsize=65536)
def _classify(system: CoxeterSystem, t: Subset) -> TypeDecomposition:
    comps = tuple(_classify_component(system, c) for c in _components(system, t))
    return TypeDecomposition(comps, all(name is not None for name, _ in comps))


def is_spherical(system: CoxeterSystem, subset: Iterable[int]) -> bool:
    return classify_finite_type(system, subset).is_spherical


_EXCEPTIONAL_ORDERS = {
    "E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "H3": 120, "H4": 14400,
}


def type_order(name: str) -> int:
    """Order of an irreducible finite Coxeter group given its type name."""
    if name in _EXCEPTIONAL_ORDERS:
        return _EXCEPTIONAL_ORDERS[name]
    if name.startswith("I2("):
        return 2 * int(name[3:-1])
    family, n = name[0], int(name[1:])
    if family == "A":
        return math.factorial(n + 1)
    if family == "B":
        return 2**n * math.factorial(n)
    if family == "D":
        return 2 ** (n - 1) * math.factorial(n)
    raise ValueError(f"unknown finite type {name!r}")


def order_of(decomp: TypeDecomposition) -> int:
    if not decomp.is_spherical:
        raise NotSphericalError(f"type {decomp} is not spherical")
    return math.prod(type_order(name) for name in decomp.type_names)


def enumerate_spherical_subsets(system: CoxeterSystem, cap: int = MAX_ENUMERATION_RANK) -> list[Subset]:
    """All spherical subsets in lexicographic order, found level by level.

    A candidate of size k+1 is only classified when all of its k-element
    subsets are spherical.
    """
    if system.rank > cap:
        raise EnumerationCapError(f"rank {system.rank} exceeds enumeration cap {cap}")
    level: set[Subset] = {()}
    found: list[Subset] = [()]
    while level:
        nxt = set()
        for t in level:
            for s in range((t[-1] + 1) if t else 0, system.rank):
                cand = t + (s,)
                if all(cand[:i] + cand[i + 1:] in level for i in range(len(cand))) \
                        and _classify(system, cand).is_spherical:
                    nxt.add(cand)
        found.extend(nxt)
        level = nxt
    return sorted(found)


def maximal_spherical_subsets(system: CoxeterSystem, cap: int = MAX_ENUMERATION_RANK) -> list[Subset]:
    spherical = enumerate_spherical_subsets(system, cap)
    sets = [frozenset(t) for t in spherical]
    return [t for t, st in zip(spherical, sets) if not any(st < other for other in sets)]


def all_subsets(rank: int) -> list[Subset]:
    return sorted(c for k in range(rank + 1) for c in combinations(range(rank), k))
