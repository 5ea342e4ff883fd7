"""Truncated simplicial objects in finite sets.

Level ``k`` is ``range(sizes[k])``.  Face ``d_i^k`` maps level ``k`` to
``k-1`` for ``0 <= i <= k``; degeneracy ``s_i^k`` maps level ``k-1`` to
``k`` for ``0 <= i <= k-1``.  Tables are tuples of ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import LengthMismatch, MalformedDocument
from .fincat import FinCategory, FunctorData
from .report import Collector, LawReport


@dataclass(frozen=True, eq=False)
class SimplicialObjectData:
    sizes: tuple[int, ...]
    faces: Mapping[tuple[int, int], tuple[int, ...]]  # (k, i) -> table on level k
    degeneracies: Mapping[tuple[int, int], tuple[int, ...]]  # (k, i) -> table on level k-1
    labels: tuple = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return len(self.sizes) - 1

    def d(self, k: int, i: int, x: int) -> int:
        return self.faces[(k, i)][x]

    def s(self, k: int, i: int, x: int) -> int:
        return self.degeneracies[(k, i)][x]

    def with_face(self, k, i, x, value) -> "SimplicialObjectData":
        faces = dict(self.faces)
        t = list(faces[(k, i)])
        t[x] = value
        faces[(k, i)] = tuple(t)
        return SimplicialObjectData(self.sizes, faces, self.degeneracies, self.labels)

    def with_degeneracy(self, k, i, x, value) -> "SimplicialObjectData":
        degs = dict(self.degeneracies)
        t = list(degs[(k, i)])
        t[x] = value
        degs[(k, i)] = tuple(t)
        return SimplicialObjectData(self.sizes, self.faces, degs, self.labels)


def _check_tables(m: SimplicialObjectData) -> None:
    for k in range(1, m.n + 1):
        for i in range(k + 1):
            t = m.faces.get((k, i))
            if t is None or len(t) != m.sizes[k] or any(not 0 <= y < m.sizes[k - 1] for y in t):
                raise MalformedDocument(f"face table d_{i}^{k} missing or not a map level {k} -> {k - 1}")
        for i in range(k):
            t = m.degeneracies.get((k, i))
            if t is None or len(t) != m.sizes[k - 1] or any(not 0 <= y < m.sizes[k] for y in t):
                raise MalformedDocument(f"degeneracy table s_{i}^{k} missing or not a map level {k - 1} -> {k}")


def validate_simplicial(m: SimplicialObjectData, max_violations: int | None = None) -> LawReport:
    """Check every instance of the simplicial identities within the truncation.

    Witnesses are ``(k, i, j, x)``: ``k`` is the level the composite
    starts from and ``x`` the element.
    """
    _check_tables(m)
    col = Collector("validate_simplicial", max_violations)
    n = m.n
    # d_i d_j = d_{j-1} d_i  (i < j), starting at level k >= 2
    for k in range(2, n + 1):
        for j in range(k + 1):
            for i in range(j):
                for x in range(m.sizes[k]):
                    col.case(
                        m.d(k - 1, i, m.d(k, j, x)) == m.d(k - 1, j - 1, m.d(k, i, x)),
                        "dd", (k, i, j, x),
                    )
    # s_i s_j = s_{j+1} s_i  (i <= j), from level k-1 to k+1
    for k in range(1, n):
        for j in range(k):
            for i in range(j + 1):
                for x in range(m.sizes[k - 1]):
                    col.case(
                        m.s(k + 1, i, m.s(k, j, x)) == m.s(k + 1, j + 1, m.s(k, i, x)),
                        "ss", (k - 1, i, j, x),
                    )
    # d_i s_j, from level k-1 through k back to k-1
    for k in range(1, n + 1):
        for j in range(k):
            for i in range(k + 1):
                for x in range(m.sizes[k - 1]):
                    lhs = m.d(k, i, m.s(k, j, x))
                    if i == j or i == j + 1:
                        col.case(lhs == x, "ds_identity", (k - 1, i, j, x))
                    elif i < j:
                        col.case(lhs == m.s(k - 1, j - 1, m.d(k - 1, i, x)), "ds_lower", (k - 1, i, j, x))
                    else:
                        col.case(lhs == m.s(k - 1, j, m.d(k - 1, i - 1, x)), "ds_upper", (k - 1, i, j, x))
    return col.report()


def check_simplicial_invariance(
    family: Sequence[Sequence[int]], m: SimplicialObjectData, max_violations: int | None = None
) -> LawReport:
    """Check that the level maps ``family[k]`` commute with all faces and degeneracies."""
    _check_tables(m)
    if len(family) != len(m.sizes):
        raise MalformedDocument(f"need {len(m.sizes)} level maps, got {len(family)}")
    for k, Fk in enumerate(family):
        if len(Fk) != m.sizes[k] or any(not 0 <= y < m.sizes[k] for y in Fk):
            raise MalformedDocument(f"level map {k} is not total on level {k}")
    col = Collector("check_simplicial_invariance", max_violations)
    for k in range(1, m.n + 1):
        for i in range(k + 1):
            for x in range(m.sizes[k]):
                col.case(family[k - 1][m.d(k, i, x)] == m.d(k, i, family[k][x]), "face", (k, i, x))
        for i in range(k):
            for x in range(m.sizes[k - 1]):
                col.case(family[k][m.s(k, i, x)] == m.s(k, i, family[k - 1][x]), "degeneracy", (k, i, x))
    return col.report()


def identity_family(m: SimplicialObjectData) -> list[tuple[int, ...]]:
    return [tuple(range(s)) for s in m.sizes]


def adapt_level(m: SimplicialObjectData | None, scores: Sequence[float], threshold: float) -> int | None:
    """Least level whose score is at or below ``threshold``.

    Ties go to the lower level, and a score equal to the threshold
    qualifies.
    """
    if m is not None and len(scores) != len(m.sizes):
        raise LengthMismatch(f"{len(scores)} scores for {len(m.sizes)} levels")
    for k, s in enumerate(scores):
        if not math.isfinite(s):
            raise ValueError(f"score at level {k} is not finite")
        if s <= threshold:
            return k
    return None


def constant(n: int) -> SimplicialObjectData:
    sizes = (1,) * (n + 1)
    faces = {(k, i): (0,) for k in range(1, n + 1) for i in range(k + 1)}
    degs = {(k, i): (0,) for k in range(1, n + 1) for i in range(k)}
    return SimplicialObjectData(sizes, faces, degs)


def nerve(c: FinCategory, n: int = 2) -> SimplicialObjectData:
    """Nerve of ``c`` truncated at level ``n`` (``n <= 3``).

    Level-k elements are chains ``(f_1, ..., f_k)`` with ``f_{i+1} o f_i``
    defined; level 0 is the objects.  ``d_0`` drops the first arrow,
    ``d_k`` the last, inner faces compose neighbours; ``s_i`` inserts an
    identity at vertex ``i``.
    """
    if not 0 <= n <= 3:
        raise ValueError("nerve truncation supported for n <= 3")
    levels: list[list] = [list(c.objects), [(m,) for m in c.morphisms]]
    for k in range(2, n + 1):
        levels.append([ch + (g,) for ch in levels[k - 1] for g in c.morphisms if c.composable(g, ch[-1])])
    levels = levels[: n + 1]
    index = [{x: p for p, x in enumerate(level)} for level in levels]

    def vertex(ch, i):
        return c.src(ch[0]) if i == 0 else c.tgt(ch[i - 1])

    def face(k, i, x):
        if k == 1:
            return index[0][c.tgt(x[0]) if i == 0 else c.src(x[0])]
        if i == 0:
            y = x[1:]
        elif i == k:
            y = x[:-1]
        else:
            y = x[: i - 1] + (c.composition[(x[i], x[i - 1])],) + x[i + 1:]
        return index[k - 1][y]

    def degeneracy(k, i, x):
        if k == 1:
            return index[1][(c.identities[x],)]
        idm = c.identities[vertex(x, i)]
        return index[k][x[:i] + (idm,) + x[i:]]

    faces = {(k, i): tuple(face(k, i, x) for x in levels[k]) for k in range(1, n + 1) for i in range(k + 1)}
    degs = {(k, i): tuple(degeneracy(k, i, x) for x in levels[k - 1]) for k in range(1, n + 1) for i in range(k)}
    labels = tuple(tuple(level) for level in levels)
    return SimplicialObjectData(tuple(len(level) for level in levels), faces, degs, labels)


def nerve_map(F: FunctorData, c: FinCategory, m: SimplicialObjectData) -> list[tuple[int, ...]]:
    """Level maps induced on ``nerve(c)`` by an endofunctor ``F``."""
    index = [{x: p for p, x in enumerate(level)} for level in m.labels]
    fam = [tuple(index[0][F.obj_map[x]] for x in m.labels[0])]
    for k in range(1, len(m.labels)):
        fam.append(tuple(index[k][tuple(F(f) for f in ch)] for ch in m.labels[k]))
    return fam
