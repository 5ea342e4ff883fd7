"""Objects with a group representation, equivariant maps between them,
symmetry reduction to canonical orbit representatives, and checks for
updates and regularizers that should respect the symmetry."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Union

import numpy as np

from .errors import DimensionMismatch, GroupMismatch, MalformedDocument
from .fincat import FinCategory
from .optdyn import rng
from .report import Collector, LawReport
from .symgrp import ALG_TOL, FinGroup, Representation, reynolds_map, reynolds_vector

ROUND_DECIMALS = 12
DEFAULT_SAMPLES = 100


@dataclass(frozen=True, eq=False)
class CategoricalRep:
    """A homomorphism ``G -> Aut(X)`` inside a finite category."""

    category: FinCategory
    obj: object
    group: FinGroup
    elements: tuple  # morphism id per group element


@dataclass(frozen=True, eq=False)
class EnrichedObject:
    carrier: Union[int, object]  # vector-space dimension, or a category object id
    rep: Union[Representation, CategoricalRep]

    def __post_init__(self):
        if isinstance(self.rep, Representation):
            if self.carrier != self.rep.dim:
                raise DimensionMismatch(f"carrier dim {self.carrier} != representation dim {self.rep.dim}")
        elif self.rep.obj != self.carrier:
            raise MalformedDocument("categorical representation acts on a different object")

    @property
    def group(self) -> FinGroup:
        return self.rep.group


@dataclass(frozen=True, eq=False)
class EnrichedMorphism:
    source: EnrichedObject
    target: EnrichedObject
    map: object  # matrix for linear carriers, morphism id for categorical ones


def check_enriched_morphism(f: EnrichedMorphism, tol: float = ALG_TOL) -> LawReport:
    """Check ``sigma(g) o f = f o rho(g)`` for every group element."""
    src, dst = f.source, f.target
    if src.group != dst.group:
        raise GroupMismatch("source and target carry different groups")
    G = src.group
    col = Collector("check_enriched_morphism")
    if isinstance(src.rep, Representation):
        W = np.asarray(f.map, dtype=np.float64)
        if W.shape != (dst.rep.dim, src.rep.dim):
            raise DimensionMismatch(f"map has shape {W.shape}, expected {(dst.rep.dim, src.rep.dim)}")
        worst = 0.0
        for g in G:
            res = float(np.max(np.abs(dst.rep(g) @ W - W @ src.rep(g)), initial=0.0))
            worst = max(worst, res)
            col.case(res <= tol, "equivariance", (G.names[g],))
        col.details["max_residual"] = worst
        return col.report()
    c = src.rep.category
    if c is not dst.rep.category:
        raise MalformedDocument("categorical carriers live in different categories")
    if c.morphisms[f.map] != (src.carrier, dst.carrier):
        raise MalformedDocument(f"{f.map!r} is not a morphism {src.carrier!r} -> {dst.carrier!r}")
    for g in G:
        lhs = c.compose(dst.rep.elements[g], f.map)
        rhs = c.compose(f.map, src.rep.elements[g])
        col.case(lhs == rhs, "equivariance", (G.names[g],))
    return col.report()


def _samples(dim: int, n_samples: int, seed: int) -> np.ndarray:
    return rng(seed).standard_normal((n_samples, dim))


def check_update_invariance(U: Callable, r: Representation, n_samples: int = DEFAULT_SAMPLES, seed: int = 0,
                            tol: float = ALG_TOL) -> LawReport:
    """``U(rho(g) theta) = rho(g) U(theta)`` on seeded Gaussian samples."""
    col = Collector("check_update_invariance")
    worst = 0.0
    for k, theta in enumerate(_samples(r.dim, n_samples, seed)):
        u = np.asarray(U(theta), dtype=np.float64)
        for g in r.group:
            res = float(np.max(np.abs(np.asarray(U(r(g) @ theta)) - r(g) @ u), initial=0.0))
            worst = max(worst, res)
            col.case(res <= tol, "commutation", (r.group.names[g], k))
    col.details["max_violation"] = worst
    return col.report()


def canonical_representative(r: Representation, x, decimals: int = ROUND_DECIMALS) -> np.ndarray:
    """Lexicographically least point of the orbit of ``x``.

    Orbit points are compared after rounding to ``decimals``; ties go to the
    lowest group-element index.  The returned point is not rounded.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (r.dim,):
        raise DimensionMismatch(f"vector of shape {x.shape} for representation of dim {r.dim}")
    orbit = [r(g) @ x for g in r.group]
    best = min(range(len(orbit)), key=lambda g: (tuple(np.round(orbit[g], decimals) + 0.0), g))
    return orbit[best]


def check_reduction_optimality(S: Callable, r: Representation, n_samples: int = DEFAULT_SAMPLES, seed: int = 0,
                               tol: float | None = None, samples=None) -> LawReport:
    """``S(rho(g) x) = S(x)``; exact comparison when ``tol`` is None."""
    col = Collector("check_reduction_optimality")
    xs = _samples(r.dim, n_samples, seed) if samples is None else np.asarray(samples, dtype=np.float64)
    worst = 0.0
    for k, x in enumerate(xs):
        s = np.asarray(S(x), dtype=np.float64)
        for g in r.group:
            sg = np.asarray(S(r(g) @ x), dtype=np.float64)
            res = float(np.max(np.abs(sg - s), initial=0.0))
            worst = max(worst, res)
            ok = bool(np.array_equal(sg, s)) if tol is None else res <= tol
            col.case(ok, "orbit_constant", (r.group.names[g], k))
    col.details["max_violation"] = worst
    return col.report()


@dataclass(frozen=True)
class RegularizerVerdicts:
    commutation: LawReport
    projection: LawReport

    @property
    def passed(self) -> bool:
        return self.commutation.passed and self.projection.passed


def check_regularizer(R: Callable, r: Representation, n_samples: int = DEFAULT_SAMPLES, seed: int = 0,
                      tol: float = ALG_TOL) -> RegularizerVerdicts:
    """Two separate verdicts: ``R`` commutes with the action, and ``R`` is idempotent."""
    xs = _samples(r.dim, n_samples, seed)
    comm = check_update_invariance(R, r, n_samples=n_samples, seed=seed, tol=tol)
    comm = LawReport("regularizer_commutation", comm.violations, comm.cases, comm.n_violations, comm.details)
    col = Collector("regularizer_projection")
    worst = 0.0
    for k, x in enumerate(xs):
        y = np.asarray(R(x), dtype=np.float64)
        res = float(np.max(np.abs(np.asarray(R(y)) - y), initial=0.0))
        worst = max(worst, res)
        col.case(res <= tol, "idempotent", (k,))
    col.details["max_violation"] = worst
    return RegularizerVerdicts(comm, col.report())


# -- built-in maps, also reachable from the command line ---------------------

def reynolds_projector(r: Representation) -> Callable:
    return lambda x: reynolds_vector(r, x)


def scale_map(c: float) -> Callable:
    return lambda x: c * np.asarray(x, dtype=np.float64)


def offset_map(v) -> Callable:
    v = np.asarray(v, dtype=np.float64)
    return lambda x: np.asarray(x, dtype=np.float64) + v


def affine_map(a: float, v) -> Callable:
    v = np.asarray(v, dtype=np.float64)
    return lambda x: a * np.asarray(x, dtype=np.float64) + v


def canonical_map(r: Representation) -> Callable:
    return lambda x: canonical_representative(r, x)


def reynolds_matrix_map(r_in: Representation, r_out: Representation) -> Callable:
    return lambda W: reynolds_map(r_in, r_out, W)


def categorical_rep(category: FinCategory, obj, group: FinGroup, elements: Mapping | tuple) -> CategoricalRep:
    if isinstance(elements, Mapping):
        elements = tuple(elements[n] for n in group.names)
    return CategoricalRep(category, obj, group, tuple(elements))
