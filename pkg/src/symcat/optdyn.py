"""Losses, contraction certificates, fixed-point iteration and discrete flows."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import autodiff as ad
from .errors import DimensionMismatch, EmptyTrajectory, NonConvergence, NonFinite
from .report import Collector, LawReport
from .symgrp import ALG_TOL, Representation, orbit_distance

GRAD_TOL = 1e-6
DEFAULT_STEP = 0.1

Map = Callable[[np.ndarray], np.ndarray]


def rng(seed: int) -> np.random.Generator:
    """Counter-based generator; equal seeds give equal streams on every platform."""
    return np.random.Generator(np.random.Philox(key=int(seed)))


class DiffFunction:
    """A scalar function written against :mod:`symcat.autodiff` primitives.

    ``fn`` receives either a float vector or a :class:`~symcat.autodiff.Jet`
    and must only use operations both support.
    """

    def __init__(self, fn: Callable, name: str = "f"):
        self.fn = fn
        self.name = name

    def __repr__(self):
        return f"DiffFunction({self.name})"

    def value(self, theta) -> float:
        v = float(self.fn(np.asarray(theta, dtype=np.float64)))
        if not math.isfinite(v):
            raise NonFinite(f"{self.name} is not finite at {theta}")
        return v

    __call__ = value

    def gradient(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=np.float64)
        g = np.empty_like(theta)
        for i in range(theta.size):
            e = np.zeros_like(theta)
            e[i] = 1.0
            g[i] = float(ad.derivatives(self.fn, theta, e)[1])
        if not np.all(np.isfinite(g)):
            raise NonFinite(f"gradient of {self.name} is not finite at {theta}")
        return g

    def second_directional(self, theta, v) -> float:
        return float(ad.derivatives(self.fn, theta, v)[2])


def gradient(f: DiffFunction, theta, check_fd: bool = False, rel_tol: float = GRAD_TOL) -> np.ndarray:
    """Exact gradient; with ``check_fd`` also compared against central differences."""
    g = f.gradient(theta)
    if check_fd:
        fd = ad.central_difference(f.value, theta)
        err = relative_error(g, fd)
        if err > rel_tol:
            raise AssertionError(f"AD/FD disagreement {err:.3g} > {rel_tol}")
    return g


def relative_error(a, b) -> float:
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    scale = max(float(np.max(np.abs(b), initial=0.0)), 1.0)
    return float(np.max(np.abs(a - b), initial=0.0)) / scale


# -- built-in losses -----------------------------------------------------------

def quad_loss() -> DiffFunction:
    """Half the squared norm."""
    return DiffFunction(lambda t: 0.5 * (t * t).sum(), "quad")


def sumsq_loss() -> DiffFunction:
    """Square of the coordinate sum; invariant under any coordinate permutation."""
    def f(t):
        s = t.sum()
        return s * s
    return DiffFunction(f, "sumsq")


def poly_loss(coeffs: Sequence[float]) -> DiffFunction:
    """``sum_i p(theta_i)`` with ``p(x) = c0 + c1 x + c2 x^2 + ...``."""
    coeffs = [float(c) for c in coeffs]

    def f(t):
        acc = 0.0
        power = 1.0
        for c in coeffs:
            acc = acc + c * power
            power = power * t
        return acc.sum() if hasattr(acc, "sum") else acc
    return DiffFunction(f, "custom-poly:" + ",".join(repr(c) for c in coeffs))


def gradient_step(loss: DiffFunction, eta: float = DEFAULT_STEP) -> Map:
    def step(theta):
        theta = np.asarray(theta, dtype=np.float64)
        return theta - eta * loss.gradient(theta)
    return step


# -- contraction ---------------------------------------------------------------

@dataclass(frozen=True)
class ContractionCertificate:
    n_pairs: int
    ratio: float
    sampler: str
    seed: int
    skipped: int = 0

    @property
    def contractive(self) -> bool:
        return self.ratio < 1.0


def box_sampler(dim: int, low: float = -1.0, high: float = 1.0):
    def sample(g: np.random.Generator) -> np.ndarray:
        return g.uniform(low, high, size=dim)
    sample.spec = f"uniform[{low!r},{high!r}]^{dim}"
    return sample


def estimate_contraction(F: Map, sampler, n_pairs: int = 100, seed: int = 0, metric=None) -> ContractionCertificate:
    """Largest observed ``d(F x, F y) / d(x, y)`` over seeded random pairs."""
    metric = metric or (lambda a, b: float(np.linalg.norm(np.asarray(a) - np.asarray(b))))
    g = rng(seed)
    worst = 0.0
    skipped = 0
    for _ in range(n_pairs):
        x, y = sampler(g), sampler(g)
        dxy = metric(x, y)
        if dxy == 0.0:
            skipped += 1
            continue
        worst = max(worst, metric(F(x), F(y)) / dxy)
    return ContractionCertificate(n_pairs, worst, getattr(sampler, "spec", repr(sampler)), int(seed), skipped)


@dataclass(frozen=True)
class FixedPoint:
    theta: np.ndarray
    iterations: int
    residual: float
    residuals: tuple[float, ...] = ()


def banach_iterate(F: Map, theta0, tol: float = 1e-10, max_iter: int = 1000) -> FixedPoint:
    """Iterate ``F`` until ``||F(theta) - theta||_inf <= tol``.

    Returns the newest iterate ``F(theta)``; ``residual`` is the length of
    that final step.  For a contraction with factor ``q`` the returned
    point then has residual at most ``q * tol`` and lies within ``tol``
    of the fixed point when ``q <= 1/2``.
    """
    theta = np.asarray(theta0, dtype=np.float64)
    residuals: list[float] = []
    for it in range(max_iter + 1):
        nxt = np.asarray(F(theta), dtype=np.float64)
        if not np.all(np.isfinite(nxt)):
            raise NonConvergence("iterate became non-finite", theta, residuals)
        res = float(np.max(np.abs(nxt - theta), initial=0.0))
        residuals.append(res)
        if res <= tol:
            return FixedPoint(nxt, it, res, tuple(residuals))
        theta = nxt
    raise NonConvergence(f"no fixed point within {max_iter} iterations (residual {residuals[-1]:.3g})", theta, residuals)


# -- flows ---------------------------------------------------------------------

class FlowMap:
    """Discrete-time flow: ``Flow(t)`` is ``step`` applied ``t`` times."""

    def __init__(self, step: Map, name: str = "flow"):
        self.step = step
        self.name = name

    def __call__(self, t: int, x) -> np.ndarray:
        if t < 0:
            raise ValueError("flow time must be non-negative")
        x = np.asarray(x, dtype=np.float64)
        for _ in range(int(t)):
            x = np.asarray(self.step(x), dtype=np.float64)
        return x

    def trajectory(self, x0, steps: int) -> "Trajectory":
        pts = [(0, np.asarray(x0, dtype=np.float64))]
        x = pts[0][1]
        for t in range(1, steps + 1):
            x = np.asarray(self.step(x), dtype=np.float64)
            pts.append((t, x))
        return Trajectory(tuple(pts))


def check_semigroup(flow: FlowMap, cases: Sequence[tuple[int, int]], x) -> LawReport:
    """``Flow(s + t)(x)`` equals ``Flow(s)(Flow(t)(x))`` bit for bit."""
    col = Collector("check_semigroup")
    for s, t in cases:
        if s < 0 or t < 0:
            raise ValueError("s and t must be non-negative")
        a = flow(s + t, x)
        b = flow(s, flow(t, x))
        col.case(bool(np.array_equal(a, b)), "semigroup", (s, t))
    return col.report()


def random_semigroup_cases(n_cases: int, t_max: int = 16, seed: int = 0) -> list[tuple[int, int]]:
    g = rng(seed)
    return [(int(s), int(t)) for s, t in g.integers(0, t_max + 1, size=(n_cases, 2))]


def check_flow_equivariance(
    flow: FlowMap, r: Representation, t_max: int, n_samples: int = 20, seed: int = 0, tol: float = ALG_TOL
) -> LawReport:
    g_rng = rng(seed)
    col = Collector("check_flow_equivariance")
    worst = 0.0
    for k in range(n_samples):
        x = g_rng.standard_normal(r.dim)
        path = flow.trajectory(x, t_max).points
        for g in r.group:
            gpath = flow.trajectory(r(g) @ x, t_max).points
            for (t, xt), (_, yt) in zip(path, gpath):
                if yt.shape != xt.shape or xt.shape != (r.dim,):
                    raise DimensionMismatch("flow changes the parameter dimension")
                res = float(np.max(np.abs(yt - r(g) @ xt), initial=0.0))
                worst = max(worst, res)
                col.case(res <= tol, "equivariance", (r.group.names[g], k, t))
    col.details["max_violation"] = worst
    return col.report()


# -- trajectories ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Trajectory:
    points: tuple[tuple[int, np.ndarray], ...]

    def __post_init__(self):
        ts = [t for t, _ in self.points]
        if ts and (ts[0] != 0 or any(b <= a for a, b in zip(ts, ts[1:]))):
            raise ValueError("trajectory times must start at 0 and increase strictly")

    @classmethod
    def from_values(cls, values) -> "Trajectory":
        return cls(tuple((t, np.atleast_1d(np.asarray(v, dtype=np.float64))) for t, v in enumerate(values)))


def detect_convergence(traj: Trajectory, eps: float, metric: str = "euclidean", rep: Representation | None = None):
    """Least recorded ``T`` with ``d(theta_t, theta_T) < eps`` for every recorded ``t > T``.

    ``T`` must have at least one later point, so the last recorded time is
    never returned on its own (otherwise every trajectory would converge).
    A single-point trajectory converges at 0.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    pts = traj.points
    if not pts:
        raise EmptyTrajectory("trajectory has no points")
    if metric == "euclidean":
        d = lambda a, b: float(np.linalg.norm(a - b))
    elif metric == "orbit":
        if rep is None:
            raise ValueError("orbit metric needs a representation")
        d = lambda a, b: orbit_distance(rep, a, b)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    if len(pts) == 1:
        return pts[0][0]
    for k, (T, xT) in enumerate(pts[:-1]):
        if all(d(xt, xT) < eps for _, xt in pts[k + 1:]):
            return T
    return None


# -- meta fixed point ------------------------------------------------------------

@dataclass(frozen=True)
class MetaResult:
    theta: np.ndarray
    iterations: int
    invariance_defect: float
    hypothesis: LawReport
    invariance: LawReport


def meta_fixed_point(Phi: Map, r: Representation, theta0, tol: float = 1e-12, max_iter: int = 10_000,
                     n_samples: int = 100, seed: int = 0) -> MetaResult:
    """Fixed point of ``Phi`` plus how far it is from being group-invariant.

    Equivariance of ``Phi`` is checked first; a failure is recorded in
    ``hypothesis`` and the iteration still runs.
    """
    from .enriched import check_update_invariance

    hyp = check_update_invariance(Phi, r, n_samples=n_samples, seed=seed, tol=ALG_TOL)
    fp = banach_iterate(Phi, theta0, tol=tol, max_iter=max_iter)
    col = Collector("fixed_point_invariance")
    worst = 0.0
    for g in r.group:
        d = float(np.max(np.abs(r(g) @ fp.theta - fp.theta), initial=0.0))
        worst = max(worst, d)
        col.case(d <= 10 * tol, "invariant", (r.group.names[g],))
    col.details["invariance_defect"] = worst
    return MetaResult(fp.theta, fp.iterations, worst, hyp, col.report())


def gradient_descent(loss: DiffFunction, theta0, eta: float, steps: int) -> Trajectory:
    return FlowMap(gradient_step(loss, eta), "gradstep").trajectory(theta0, steps)
