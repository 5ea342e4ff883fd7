"""Simplicial complexes, filtrations and persistent homology over GF(2)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import ActionNotSimplicial, MalformedDocument
from .report import Collector, LawReport
from .symgrp import FinGroup

INF = math.inf
MAX_DIM = 3


def _faces(s: tuple) -> list[tuple]:
    return [s[:i] + s[i + 1:] for i in range(len(s))] if len(s) > 1 else []


@dataclass(frozen=True)
class SimplicialComplex:
    simplices: tuple[tuple, ...]

    @classmethod
    def from_simplices(cls, simplices: Iterable[Sequence]) -> "SimplicialComplex":
        return cls(tuple(tuple(sorted(s)) for s in simplices))

    @classmethod
    def closure(cls, top: Iterable[Sequence]) -> "SimplicialComplex":
        out = set()
        for s in top:
            s = tuple(sorted(s))
            for k in range(1, len(s) + 1):
                out.update(itertools.combinations(s, k))
        return cls(tuple(sorted(out, key=lambda t: (len(t), t))))

    @property
    def vertices(self) -> list:
        return sorted({v for s in self.simplices for v in s})

    def dim(self, s) -> int:
        return len(s) - 1


def validate_complex(k: SimplicialComplex) -> LawReport:
    col = Collector("validate_complex")
    present = set(k.simplices)
    col.case(len(present) == len(k.simplices), "no_duplicates", ())
    for s in k.simplices:
        if len(s) == 0 or len(s) - 1 > MAX_DIM:
            raise MalformedDocument(f"simplex {s!r} has unsupported dimension")
        col.case(list(s) == sorted(set(s)), "sorted_distinct_vertices", (s,))
        for f in _faces(s):
            col.case(f in present, "face_closure", (s, f))
    return col.report()


@dataclass(frozen=True, eq=False)
class Filtration:
    complex: SimplicialComplex
    values: Mapping[tuple, float]

    @classmethod
    def build(cls, values: Mapping[Sequence, float]) -> "Filtration":
        vals = {tuple(sorted(s)): float(v) for s, v in values.items()}
        return cls(SimplicialComplex(tuple(vals)), vals)

    def value(self, s) -> float:
        return self.values[s]

    def order(self) -> list[tuple]:
        """Simplices sorted by (value, dimension, vertex tuple)."""
        return sorted(self.complex.simplices, key=lambda s: (self.values[s], len(s), s))

    def pullback(self, perm: Mapping) -> "Filtration":
        """Filtration ``s -> value(g.s)`` for the vertex permutation ``perm``."""
        return Filtration(self.complex, {s: self.values[act_on_simplex(perm, s)] for s in self.complex.simplices})


def validate_filtration(f: Filtration) -> LawReport:
    col = Collector("validate_filtration")
    base = validate_complex(f.complex)
    for v in base.violations:
        col.violation(v.law, v.witness)
    col.cases += base.cases
    for s in f.complex.simplices:
        if s not in f.values or not math.isfinite(f.values[s]):
            raise MalformedDocument(f"simplex {s!r} has no finite filtration value")
        for face in _faces(s):
            if face in f.values:
                col.case(f.values[face] <= f.values[s], "monotone", (face, s))
    return col.report()


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of ``(dim, birth, death)``; ``death`` may be ``inf``."""

    bars: tuple[tuple[int, float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "bars", tuple(sorted((int(d), float(b), float(e)) for d, b, e in self.bars)))

    def dim(self, k: int) -> list[tuple[float, float]]:
        return [(b, d) for dd, b, d in self.bars if dd == k]

    def finite(self, k: int | None = None) -> list[tuple[float, float]]:
        return [(b, d) for dd, b, d in self.bars if (k is None or dd == k) and d != INF]

    def infinite(self, k: int) -> list[float]:
        return [b for dd, b, d in self.bars if dd == k and d == INF]

    @property
    def dims(self) -> list[int]:
        return sorted({d for d, _, _ in self.bars})

    def to_list(self) -> list:
        return [list(b) for b in self.bars]


def persistence(f: Filtration, keep_zero: bool = False) -> PersistenceDiagram:
    """Standard column reduction of the boundary matrix over GF(2).

    Zero-length bars (birth == death) are dropped unless ``keep_zero``.
    """
    order = f.order()
    index = {s: i for i, s in enumerate(order)}
    columns: list[set[int]] = []
    for s in order:
        columns.append({index[face] for face in _faces(s)})
    low_owner: dict[int, int] = {}
    pivot_of = [-1] * len(order)
    for j, col in enumerate(columns):
        while col:
            low = max(col)
            other = low_owner.get(low)
            if other is None:
                low_owner[low] = j
                pivot_of[j] = low
                break
            col ^= columns[other]
    killed = set(low_owner)
    bars = []
    for j, s in enumerate(order):
        if pivot_of[j] >= 0:
            birth_s = order[pivot_of[j]]
            b, d = f.values[birth_s], f.values[s]
            if d > b or keep_zero:
                bars.append((len(birth_s) - 1, b, d))
        elif j not in killed:
            bars.append((len(s) - 1, f.values[s], INF))
    return PersistenceDiagram(tuple(bars))


def _components(k: SimplicialComplex) -> int:
    parent = {v: v for v in k.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for s in k.simplices:
        if len(s) == 2:
            a, b = find(s[0]), find(s[1])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return len({find(v) for v in parent})


def validate_diagram(d: PersistenceDiagram, f: Filtration | None = None) -> LawReport:
    """Bars end no earlier than they start; with ``f``, infinite H0 bars count its components."""
    col = Collector("validate_diagram")
    for bar in d.bars:
        col.case(bar[2] >= bar[1], "death_after_birth", bar)
    if f is not None:
        n_inf, n_comp = len(d.infinite(0)), _components(f.complex)
        col.case(n_inf == n_comp, "h0_components", (n_inf, n_comp))
    return col.report()


# -- bottleneck distance ---------------------------------------------------------

def _linf(p, q) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _diag(p) -> float:
    return (p[1] - p[0]) / 2.0


def _feasible(A, B, r) -> bool:
    """Perfect matching on the diagonal-augmented bipartite graph at radius ``r``."""
    n, m = len(A), len(B)
    size = n + m
    rows, cols = [], []
    for i, p in enumerate(A):
        for j, q in enumerate(B):
            if _linf(p, q) <= r:
                rows.append(i)
                cols.append(j)
        if _diag(p) <= r:
            rows.append(i)
            cols.append(m + i)
    for j, q in enumerate(B):
        if _diag(q) <= r:
            rows.append(n + j)
            cols.append(j)
        for i in range(n):
            rows.append(n + j)
            cols.append(m + i)
    if size == 0:
        return True
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def _finite_bottleneck(A: list, B: list) -> float:
    cands = {0.0}
    cands.update(_linf(p, q) for p in A for q in B)
    cands.update(_diag(p) for p in A)
    cands.update(_diag(q) for q in B)
    cands = sorted(cands)
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(A, B, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram, dim: int | None = None) -> float:
    """Exact bottleneck distance, restricted to ``dim`` when given.

    Infinite bars are matched among themselves by sorted birth; unequal
    counts give ``inf``.
    """
    dims = [dim] if dim is not None else sorted(set(d1.dims) | set(d2.dims))
    worst = 0.0
    for k in dims:
        i1, i2 = sorted(d1.infinite(k)), sorted(d2.infinite(k))
        if len(i1) != len(i2):
            return INF
        for a, b in zip(i1, i2):
            worst = max(worst, abs(a - b))
        worst = max(worst, _finite_bottleneck(d1.finite(k), d2.finite(k)))
    return worst


# -- group actions on complexes ------------------------------------------------------

def act_on_simplex(perm: Mapping, s: tuple) -> tuple:
    return tuple(sorted(perm[v] for v in s))


@dataclass(frozen=True, eq=False)
class ComplexAction:
    group: FinGroup
    perms: tuple[Mapping, ...]  # vertex permutation per group element


def validate_complex_action(act: ComplexAction, k: SimplicialComplex) -> LawReport:
    G = act.group
    col = Collector("validate_complex_action")
    present = set(k.simplices)
    verts = k.vertices
    for g in G:
        p = act.perms[g]
        col.case(sorted(p[v] for v in verts) == verts, "vertex_permutation", (G.names[g],))
        for s in k.simplices:
            col.case(act_on_simplex(p, s) in present, "simplicial", (G.names[g], s))
    for g, h in itertools.product(G, repeat=2):
        gh = act.perms[G.mul(g, h)]
        col.case(all(gh[v] == act.perms[g][act.perms[h][v]] for v in verts), "homomorphism", (G.names[g], G.names[h]))
    return col.report()


def _require_simplicial(act: ComplexAction, k: SimplicialComplex):
    present = set(k.simplices)
    for g in act.group:
        for s in k.simplices:
            if act_on_simplex(act.perms[g], s) not in present:
                raise ActionNotSimplicial(f"element {act.group.names[g]!r} maps {s!r} outside the complex")


def check_equivariant_filtration(act: ComplexAction, f: Filtration) -> LawReport:
    """``value(g.s) == value(s)`` exactly for every simplex and element."""
    _require_simplicial(act, f.complex)
    col = Collector("check_equivariant_filtration")
    for g in act.group:
        for s in f.complex.simplices:
            col.case(f.values[act_on_simplex(act.perms[g], s)] == f.values[s], "invariant_value", (act.group.names[g], s))
    return col.report()


def diagram_invariance(act: ComplexAction, f: Filtration) -> LawReport:
    """Persistence of each pulled-back filtration equals the original, as multisets."""
    _require_simplicial(act, f.complex)
    base = persistence(f)
    col = Collector("diagram_invariance")
    diffs = {}
    for g in act.group:
        other = persistence(f.pullback(act.perms[g]))
        ok = other.bars == base.bars
        col.case(ok, "same_diagram", (act.group.names[g],))
        if not ok:
            diffs[act.group.names[g]] = other.to_list()
    col.details["diagram"] = base.to_list()
    if diffs:
        col.details["differing"] = diffs
    col.details["filtration_equivariant"] = check_equivariant_filtration(act, f).passed
    return col.report()


# -- losses and 1D sublevel persistence ----------------------------------------------

def total_persistence(d: PersistenceDiagram) -> float:
    return float(sum(death - birth for _, birth, death in d.bars if death != INF))


def ph_loss(d: PersistenceDiagram, mode: str, ref: PersistenceDiagram | None = None) -> float:
    """``total_persistence``: sum of finite bar lengths.
    ``bottleneck_to``: bottleneck distance to ``ref``, summed over dimensions.
    """
    if mode == "total_persistence":
        return total_persistence(d)
    if mode == "bottleneck_to":
        if ref is None:
            raise ValueError("bottleneck_to needs a reference diagram")
        return float(sum(bottleneck(d, ref, k) for k in sorted(set(d.dims) | set(ref.dims))))
    raise ValueError(f"unknown mode {mode!r}")


def sublevel_persistence_1d(values: Sequence[float]) -> PersistenceDiagram:
    """H0 of the lower-star filtration on a path graph (elder rule).

    At a merge the component with the higher birth dies; equal births keep
    the component whose minimum has the smaller index.
    """
    vals = [float(v) for v in values]
    if not vals or not all(math.isfinite(v) for v in vals):
        raise ValueError("need a non-empty finite sequence")
    parent: dict[int, int] = {}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    bars = []
    for i in sorted(range(len(vals)), key=lambda i: (vals[i], i)):
        parent[i] = i
        for j in (i - 1, i + 1):
            if j in parent:
                a, b = find(i), find(j)
                if a == b:
                    continue
                old, young = sorted((a, b), key=lambda r: (vals[r], r))
                if vals[i] > vals[young]:
                    bars.append((0, vals[young], vals[i]))
                parent[young] = old
    roots = {find(i) for i in parent}
    bars.extend((0, vals[r], INF) for r in roots)
    return PersistenceDiagram(tuple(bars))


def local_minima_count(values: Sequence[float]) -> int:
    """Maximal runs of equal values whose neighbours on both sides are strictly larger."""
    vals = list(values)
    count = 0
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] == vals[i]:
            j += 1
        left_ok = i == 0 or vals[i - 1] > vals[i]
        right_ok = j == len(vals) - 1 or vals[j + 1] > vals[i]
        count += left_ok and right_ok
        i = j + 1
    return count


# -- fixtures ------------------------------------------------------------------------

def triangle_filtration(edge_values=(1.0, 1.0, 1.0), filled: float | None = 2.0) -> Filtration:
    """Vertices 1, 2, 3 at 0; edges 12, 23, 13 at ``edge_values``; optional 2-cell."""
    vals = {(1,): 0.0, (2,): 0.0, (3,): 0.0}
    vals.update(zip([(1, 2), (2, 3), (1, 3)], map(float, edge_values)))
    if filled is not None:
        vals[(1, 2, 3)] = float(filled)
    return Filtration.build(vals)


def rotation_action() -> ComplexAction:
    from .symgrp import cyclic

    G = cyclic(3)
    perms = tuple({v: (v - 1 + k) % 3 + 1 for v in (1, 2, 3)} for k in range(3))
    return ComplexAction(G, perms)
