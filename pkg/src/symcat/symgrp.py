"""Finite groups, set actions, orbit counting and matrix representations.

Groups are given extensionally by multiplication tables over element
indices ``0..|G|-1``; representations carry one float64 matrix per element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, GroupMismatch, MalformedDocument, NonIntegralCount
from .report import Collector, LawReport

ALG_TOL = 1e-9
PIV_TOL = 1e-10


@dataclass(frozen=True)
class FinGroup:
    """A finite group as a multiplication table ``table[g][h] = g*h``."""

    names: tuple
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(range(len(self.names)))

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def index(self, name) -> int:
        return self.names.index(name)

    @classmethod
    def from_table(cls, names, table, identity=None, inverse=None) -> "FinGroup":
        """Build a group; identity and inverses are inferred when omitted."""
        names = tuple(names)
        n = len(names)
        table = tuple(tuple(int(x) for x in row) for row in table)
        if len(table) != n or any(len(row) != n for row in table):
            raise MalformedDocument(f"group table must be {n}x{n}")
        if any(not 0 <= x < n for row in table for x in row):
            raise MalformedDocument("group table entry out of range")
        if identity is None:
            cands = [e for e in range(n) if all(table[e][g] == g == table[g][e] for g in range(n))]
            if not cands:
                raise MalformedDocument("no identity element in table")
            identity = cands[0]
        if inverse is None:
            inv = []
            for g in range(n):
                hs = [h for h in range(n) if table[g][h] == identity]
                if not hs:
                    raise MalformedDocument(f"element {names[g]!r} has no inverse")
                inv.append(hs[0])
            inverse = inv
        inverse = tuple(int(x) for x in inverse)
        if len(inverse) != n or any(not 0 <= x < n for x in inverse):
            raise MalformedDocument("inverse table malformed")
        return cls(names, table, int(identity), inverse)


def cyclic(n: int) -> FinGroup:
    names = ("e",) + tuple(f"r{k}" for k in range(1, n))
    return FinGroup.from_table(names, [[(i + j) % n for j in range(n)] for i in range(n)], 0)


def trivial_group() -> FinGroup:
    return cyclic(1)


def z2() -> FinGroup:
    return FinGroup.from_table(("e", "s"), [[0, 1], [1, 0]], 0, (0, 1))


def symmetric(n: int) -> FinGroup:
    """S_n with elements as permutation tuples; ``(p*q)(i) = p(q(i))``."""
    perms = list(itertools.permutations(range(n)))
    idx = {p: k for k, p in enumerate(perms)}
    table = [[idx[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return FinGroup.from_table(tuple("".join(map(str, p)) for p in perms), table, 0)


def validate_group(g: FinGroup, max_violations: int | None = None) -> LawReport:
    n = g.order
    col = Collector("validate_group", max_violations)
    for a in range(n):
        col.case(len(set(g.table[a])) == n, "latin_row", (g.names[a],))
        col.case(len({g.table[b][a] for b in range(n)}) == n, "latin_column", (g.names[a],))
        col.case(g.table[g.identity][a] == a == g.table[a][g.identity], "identity", (g.names[a],))
        col.case(
            g.table[a][g.inverse[a]] == g.identity == g.table[g.inverse[a]][a],
            "inverse",
            (g.names[a], g.names[g.inverse[a]]),
        )
    for a, b, c in itertools.product(range(n), repeat=3):
        col.case(
            g.table[g.table[a][b]][c] == g.table[a][g.table[b][c]],
            "associativity",
            (g.names[a], g.names[b], g.names[c]),
        )
    return col.report()


@dataclass(frozen=True)
class SetAction:
    """Left action ``table[g][i]`` of a group on ``{0, ..., size-1}``."""

    group: FinGroup
    size: int
    table: tuple[tuple[int, ...], ...]

    def act(self, g: int, i: int) -> int:
        return self.table[g][i]

    @classmethod
    def from_table(cls, group: FinGroup, table) -> "SetAction":
        table = tuple(tuple(int(x) for x in row) for row in table)
        if len(table) != group.order:
            raise MalformedDocument("action table needs one row per group element")
        size = len(table[0]) if table else 0
        if any(len(row) != size for row in table) or any(not 0 <= x < size for row in table for x in row):
            raise MalformedDocument("action table rows must be maps into range(size)")
        return cls(group, size, table)


def trivial_action(group: FinGroup, size: int) -> SetAction:
    return SetAction(group, size, tuple(tuple(range(size)) for _ in group))


def regular_action(group: FinGroup) -> SetAction:
    return SetAction(group, group.order, group.table)


def product_action(a_out: SetAction, a_in: SetAction) -> SetAction:
    """Diagonal action on index pairs ``(i, j)``, flattened row-major."""
    if a_out.group is not a_in.group and a_out.group != a_in.group:
        raise GroupMismatch("actions over different groups")
    n_in = a_in.size
    table = tuple(
        tuple(a_out.act(g, k // n_in) * n_in + a_in.act(g, k % n_in) for k in range(a_out.size * n_in))
        for g in a_out.group
    )
    return SetAction(a_out.group, a_out.size * n_in, table)


def validate_action(a: SetAction, max_violations: int | None = None) -> LawReport:
    G = a.group
    col = Collector("validate_action", max_violations)
    for i in range(a.size):
        col.case(a.act(G.identity, i) == i, "identity", (G.names[G.identity], i))
    for g in G:
        col.case(len(set(a.table[g])) == a.size, "bijective", (G.names[g],))
    for g, h in itertools.product(G, repeat=2):
        gh = G.mul(g, h)
        for i in range(a.size):
            col.case(
                a.act(gh, i) == a.act(g, a.act(h, i)),
                "compatibility",
                (G.names[g], G.names[h], i),
            )
    return col.report()


@dataclass(frozen=True)
class OrbitPartition:
    size: int
    orbit_of: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.members)


def orbits(a: SetAction) -> OrbitPartition:
    """Orbit partition by union-find, cross-checked against Burnside's count."""
    parent = list(range(a.size))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in a.group:
        for i in range(a.size):
            ri, rj = find(i), find(a.act(g, i))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    roots: dict[int, int] = {}
    orbit_of = []
    for i in range(a.size):
        orbit_of.append(roots.setdefault(find(i), len(roots)))
    members = tuple(tuple(i for i in range(a.size) if orbit_of[i] == k) for k in range(len(roots)))
    part = OrbitPartition(a.size, tuple(orbit_of), members)
    if part.count != burnside(a):
        raise NonIntegralCount(f"orbit count {part.count} disagrees with Burnside {burnside(a)}")
    return part


def burnside(a: SetAction) -> int:
    """Orbit count as the average number of fixed points, in exact arithmetic."""
    fixed = sum(sum(1 for i in range(a.size) if a.act(g, i) == i) for g in a.group)
    count = Fraction(fixed, a.group.order)
    if count.denominator != 1:
        raise NonIntegralCount(f"Burnside average {count} is not an integer; action is invalid")
    return int(count)


@dataclass(frozen=True, eq=False)
class Representation:
    """One real ``dim x dim`` matrix per group element, indexed like the group."""

    group: FinGroup
    matrices: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrices, dtype=np.float64)
        if m.ndim != 3 or m.shape[1] != m.shape[2] or m.shape[0] != self.group.order:
            raise MalformedDocument(
                f"representation needs {self.group.order} square matrices, got shape {m.shape}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def __call__(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def is_permutation(self) -> bool:
        m = self.matrices
        return bool(
            np.all((m == 0) | (m == 1))
            and np.all(m.sum(axis=1) == 1)
            and np.all(m.sum(axis=2) == 1)
        )

    def is_orthogonal(self, tol: float = ALG_TOL) -> bool:
        eye = np.eye(self.dim)
        return all(np.max(np.abs(M @ M.T - eye), initial=0.0) <= tol for M in self.matrices)


def permutation_representation(a: SetAction) -> Representation:
    """Matrices with ``rho(g) e_i = e_{g.i}``."""
    mats = np.zeros((a.group.order, a.size, a.size))
    for g in a.group:
        for i in range(a.size):
            mats[g, a.act(g, i), i] = 1.0
    return Representation(a.group, mats)


def trivial_representation(group: FinGroup, dim: int = 1) -> Representation:
    return Representation(group, np.broadcast_to(np.eye(dim), (group.order, dim, dim)).copy())


def regular_representation(group: FinGroup) -> Representation:
    return permutation_representation(regular_action(group))


def swap_rep() -> Representation:
    """Z2 acting on R^2 by exchanging coordinates."""
    return Representation(z2(), np.array([np.eye(2), [[0.0, 1.0], [1.0, 0.0]]]))


def validate_representation(r: Representation, tol: float = ALG_TOL, max_violations=None) -> LawReport:
    G = r.group
    col = Collector("validate_representation", max_violations)
    eye = np.eye(r.dim)
    col.case(bool(np.array_equal(r(G.identity), eye)), "identity_exact", (G.names[G.identity],))
    worst = 0.0
    for g, h in itertools.product(G, repeat=2):
        res = float(np.max(np.abs(r(G.mul(g, h)) - r(g) @ r(h)), initial=0.0))
        worst = max(worst, res)
        col.case(res <= tol, "homomorphism", (G.names[g], G.names[h]))
    for g in G:
        cond = np.linalg.cond(r(g)) if r.dim else 1.0
        col.case(bool(np.isfinite(cond) and cond < 1.0 / np.finfo(float).eps), "invertible", (G.names[g],))
    col.details["max_residual"] = worst
    return col.report()


def _check_dim(r: Representation, n: int, what: str):
    if r.dim != n:
        raise DimensionMismatch(f"{what}: representation dim {r.dim} != {n}")


def reynolds_vector(r: Representation, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    _check_dim(r, v.shape[-1], "reynolds_vector")
    return np.einsum("gij,j->i", r.matrices, v) / r.group.order


def reynolds_map(r_in: Representation, r_out: Representation, W) -> np.ndarray:
    """Average ``rho_out(g)^-1 W rho_in(g)`` over the group."""
    if r_in.group != r_out.group:
        raise GroupMismatch("representations over different groups")
    W = np.asarray(W, dtype=np.float64)
    if W.shape != (r_out.dim, r_in.dim):
        raise DimensionMismatch(f"W has shape {W.shape}, expected {(r_out.dim, r_in.dim)}")
    G = r_in.group
    acc = np.zeros_like(W)
    for g in G:
        acc += r_out(G.inverse[g]) @ W @ r_in(g)
    return acc / G.order


def _nullspace(A: np.ndarray, piv_tol: float) -> np.ndarray:
    """Orthonormal basis (as columns) of ker A; rank decided by ``piv_tol``."""
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > piv_tol * max(1.0, s[0] if s.size else 0.0)))
    return vt[rank:].T.copy()


def intertwiner_basis(r_in: Representation, r_out: Representation, piv_tol: float = PIV_TOL) -> list[np.ndarray]:
    """Basis of ``{W : rho_out(g) W = W rho_in(g) for all g}``."""
    if r_in.group != r_out.group:
        raise GroupMismatch("representations over different groups")
    n_out, n_in = r_out.dim, r_in.dim
    # row-major vec: vec(A W B) = (A kron B^T) vec(W)
    blocks = [
        np.kron(r_out(g), np.eye(n_in)) - np.kron(np.eye(n_out), r_in(g).T)
        for g in r_in.group
    ]
    ns = _nullspace(np.vstack(blocks), piv_tol)
    return [ns[:, k].reshape(n_out, n_in) for k in range(ns.shape[1])]


def fixed_subspace(r: Representation, piv_tol: float = PIV_TOL) -> np.ndarray:
    """Orthonormal column basis of the vectors fixed by every ``rho(g)``."""
    P = r.matrices.sum(axis=0) / r.group.order
    u, s, _ = np.linalg.svd(P)
    rank = int(np.sum(s > piv_tol * max(1.0, s[0] if s.size else 0.0)))
    return u[:, :rank].copy()


def orbit_distance(r: Representation, x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionMismatch("x and y differ in shape")
    _check_dim(r, x.shape[-1], "orbit_distance")
    return float(min(np.linalg.norm(x - r(g) @ y) for g in r.group))


def equivariance_residual(r_in: Representation, r_out: Representation, W) -> float:
    W = np.asarray(W, dtype=np.float64)
    return float(
        max(np.max(np.abs(r_out(g) @ W - W @ r_in(g)), initial=0.0) for g in r_in.group)
    )


def direct_sum(*reps: Representation) -> Representation:
    G = reps[0].group
    if any(r.group != G for r in reps):
        raise GroupMismatch("direct sum over different groups")
    n = sum(r.dim for r in reps)
    mats = np.zeros((G.order, n, n))
    off = 0
    for r in reps:
        mats[:, off:off + r.dim, off:off + r.dim] = r.matrices
        off += r.dim
    return Representation(G, mats)


def as_permutation(r: Representation) -> SetAction:
    """Recover the set action underlying a permutation representation."""
    if not r.is_permutation():
        raise MalformedDocument("representation is not a permutation representation")
    table = tuple(tuple(int(np.argmax(r(g)[:, i])) for i in range(r.dim)) for g in r.group)
    return SetAction(r.group, r.dim, table)


def element_names(group: FinGroup, items: Sequence[int]) -> list:
    return [group.names[i] for i in items]
