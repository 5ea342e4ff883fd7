"""1D Poisson physics-informed training with an optional reflection-symmetric ansatz.

The network maps ``x -> u(x)``.  Second derivatives in ``x`` are carried
forward as truncated jets through every layer, and parameter gradients of
the residual loss are obtained by back-propagating through that jet
computation.  Training is plain fixed-step gradient descent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import autodiff as ad
from .errors import AsymmetricDomain, NonFinite
from .optdyn import FlowMap, rng

DEFAULT_STEP = 0.01
THRESHOLDS = (1e-1, 1e-2)

# name -> (source f, exact solution written against autodiff primitives)
SOURCES: dict[str, tuple[Callable, Callable]] = {
    "cospi": (lambda x: -math.pi**2 * np.cos(math.pi * x), lambda x: ad.cos(math.pi * x)),
    "zero": (lambda x: np.zeros_like(x), lambda x: 0.0 * x),
    "one": (lambda x: np.ones_like(x), lambda x: 0.5 * x * x - 0.5),
}


@dataclass(frozen=True)
class PdeSpec:
    a: float = -1.0
    b: float = 1.0
    source: str = "cospi"
    ua: float = -1.0
    ub: float = -1.0
    n_colloc: int = 12
    penalty: float = 2.0

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("domain needs a < b")
        if self.n_colloc < 2:
            raise ValueError("need at least two collocation points")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}; choose from {sorted(SOURCES)}")
        if not (math.isfinite(self.ua) and math.isfinite(self.ub)):
            raise ValueError("boundary values must be finite")

    def points(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.n_colloc)

    def f(self, x):
        return SOURCES[self.source][0](np.asarray(x, dtype=np.float64))


# -- the network -------------------------------------------------------------------

def parse_arch(arch: str) -> tuple[int, ...]:
    """``"2x16"`` -> two tanh hidden layers of width 16."""
    depth, width = arch.lower().split("x")
    return (int(width),) * int(depth)


def init_params(hidden: Sequence[int], seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    g = rng(seed)
    sizes = [1, *hidden, 1]
    params = []
    for n_in, n_out in zip(sizes, sizes[1:]):
        params.append((g.standard_normal((n_out, n_in)) / math.sqrt(n_in), np.zeros(n_out)))
    return params


def flatten(params) -> np.ndarray:
    return np.concatenate([np.concatenate([W.ravel(), b]) for W, b in params])


def unflatten(theta: np.ndarray, hidden: Sequence[int]) -> list[tuple[np.ndarray, np.ndarray]]:
    sizes = [1, *hidden, 1]
    out, off = [], 0
    for n_in, n_out in zip(sizes, sizes[1:]):
        W = theta[off:off + n_in * n_out].reshape(n_out, n_in)
        off += n_in * n_out
        out.append((W, theta[off:off + n_out]))
        off += n_out
    return out


def _jet_forward(params, x, dx):
    """Value, d/dx and d2/dx2 of the network along input direction ``dx``."""
    h = (x[:, None], np.broadcast_to(np.asarray(dx, dtype=np.float64), x.shape)[:, None], np.zeros((x.size, 1)))
    cache = []
    last = len(params) - 1
    for l, (W, b) in enumerate(params):
        z0 = h[0] @ W.T + b
        z1 = h[1] @ W.T
        z2 = h[2] @ W.T
        if l == last:
            cache.append((h, None))
            return (z0[:, 0], z1[:, 0], z2[:, 0]), cache
        t = np.tanh(z0)
        s1 = 1.0 - t * t
        s2 = -2.0 * t * s1
        s3 = -2.0 * (s1 * s1 + t * s2)
        cache.append((h, (z1, z2, s1, s2, s3)))
        h = (t, s1 * z1, s2 * z1 * z1 + s1 * z2)


def _jet_backward(params, cache, g0, g1, g2):
    """Gradients of ``sum(g0*u + g1*u' + g2*u'')`` with respect to every ``(W, b)``."""
    grads = [None] * len(params)
    gz = (g0[:, None], g1[:, None], g2[:, None])
    for l in range(len(params) - 1, -1, -1):
        W, _ = params[l]
        h, _ = cache[l]
        gW = gz[0].T @ h[0] + gz[1].T @ h[1] + gz[2].T @ h[2]
        grads[l] = (gW, gz[0].sum(axis=0))
        if l == 0:
            break
        gh = (gz[0] @ W, gz[1] @ W, gz[2] @ W)
        z1, z2, s1, s2, s3 = cache[l - 1][1]
        gz = (
            gh[0] * s1 + gh[1] * s2 * z1 + gh[2] * (s3 * z1 * z1 + s2 * z2),
            gh[1] * s1 + gh[2] * 2.0 * s2 * z1,
            gh[2] * s1,
        )
    return grads


@dataclass(frozen=True, eq=False)
class Ansatz:
    """Network ansatz; ``symmetric`` evaluates ``(u(x) + u(-x)) / 2``."""

    hidden: tuple[int, ...]
    theta: np.ndarray
    symmetric: bool = False

    def params(self):
        return unflatten(self.theta, self.hidden)

    def jets(self, x) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=np.float64)
        p = self.params()
        u, _ = _jet_forward(p, x, 1.0)
        if not self.symmetric:
            return u
        v, _ = _jet_forward(p, -x, -1.0)
        return tuple(0.5 * (a + b) for a, b in zip(u, v))

    def __call__(self, x) -> np.ndarray:
        return self.jets(x)[0]

    def with_theta(self, theta) -> "Ansatz":
        return Ansatz(self.hidden, theta, self.symmetric)


@dataclass(frozen=True, eq=False)
class FunctionAnsatz:
    """Closed-form ansatz written against :mod:`symcat.autodiff` primitives."""

    fn: Callable
    symmetric: bool = False

    def jets(self, x):
        x = np.asarray(x, dtype=np.float64)
        J = ad.Jet.lift(self.fn(ad.Jet(x, np.ones_like(x), np.zeros_like(x))))
        out = tuple(np.broadcast_to(np.asarray(c, dtype=np.float64), x.shape) for c in (J.v, J.d1, J.d2))
        if not self.symmetric:
            return out
        K = ad.Jet.lift(self.fn(ad.Jet(-x, -np.ones_like(x), np.zeros_like(x))))
        other = tuple(np.broadcast_to(np.asarray(c, dtype=np.float64), x.shape) for c in (K.v, K.d1, K.d2))
        return tuple(0.5 * (a + b) for a, b in zip(out, other))

    def __call__(self, x):
        return self.jets(x)[0]


def symmetrize(ans):
    """Reflection-averaged ansatz ``x -> (u(x) + u(-x)) / 2``."""
    if isinstance(ans, Ansatz):
        return Ansatz(ans.hidden, ans.theta, True)
    return FunctionAnsatz(ans.fn, True)


def check_symmetric_domain(spec: PdeSpec) -> None:
    if spec.a != -spec.b:
        raise AsymmetricDomain(f"domain [{spec.a}, {spec.b}] is not symmetric about 0")


def invariance_defect(ans, grid) -> float:
    grid = np.asarray(grid, dtype=np.float64)
    return float(np.max(np.abs(ans(grid) - ans(-grid)), initial=0.0))


# -- loss and training ---------------------------------------------------------------

@dataclass(frozen=True)
class LossParts:
    total: float
    residual: float
    boundary: float


def loss_parts(ans, spec: PdeSpec) -> LossParts:
    x = spec.points()
    _, _, u2 = ans.jets(x)
    r = u2 - spec.f(x)
    ub = ans(np.array([spec.a, spec.b]))
    res = float(np.mean(r * r))
    bnd = float((ub[0] - spec.ua) ** 2 + (ub[1] - spec.ub) ** 2)
    total = res + spec.penalty * bnd
    if not math.isfinite(total):
        raise NonFinite("residual loss is not finite")
    return LossParts(total, res, bnd)


def residual_loss(ans, spec: PdeSpec) -> float:
    """Mean squared ``u'' - f`` at the collocation points plus the boundary penalty."""
    return loss_parts(ans, spec).total


def loss_and_grad(ans: Ansatz, spec: PdeSpec) -> tuple[float, np.ndarray]:
    p = ans.params()
    x = spec.points()
    xb = np.array([spec.a, spec.b])
    target_b = np.array([spec.ua, spec.ub])
    f = spec.f(x)
    n = x.size
    dirs = [(x, 1.0, xb)] if not ans.symmetric else [(x, 1.0, xb), (-x, -1.0, -xb)]
    w = 1.0 / len(dirs)
    runs = [(_jet_forward(p, xi, di), _jet_forward(p, bi, 0.0)) for xi, di, bi in dirs]
    u2 = sum(w * r[0][0][2] for r in runs)
    ubv = sum(w * r[1][0][0] for r in runs)
    res = u2 - f
    db = ubv - target_b
    loss = float(np.mean(res * res) + spec.penalty * np.sum(db * db))
    g_u2 = 2.0 * res / n * w
    g_b = 2.0 * spec.penalty * db * w
    total = [(np.zeros_like(W), np.zeros_like(b)) for W, b in p]
    zeros_n, zeros_b = np.zeros(n), np.zeros(2)
    for (_, cache), (_, bcache) in runs:
        for grads in (_jet_backward(p, cache, zeros_n, zeros_n, g_u2), _jet_backward(p, bcache, g_b, zeros_b, zeros_b)):
            total = [(TW + gW, Tb + gb) for (TW, Tb), (gW, gb) in zip(total, grads)]
    grad = flatten(total)
    if not (math.isfinite(loss) and np.all(np.isfinite(grad))):
        raise NonFinite("non-finite loss or gradient")
    return loss, grad


@dataclass(frozen=True)
class TrainReport:
    losses: tuple[float, ...]
    final_residual: float
    boundary_error: float
    invariance_defects: tuple[float, ...]
    steps: int
    seed: int
    symmetric: bool
    theta: np.ndarray = field(repr=False, compare=False, default=None)

    def steps_to(self, threshold: float) -> int | None:
        for k, v in enumerate(self.losses):
            if v < threshold:
                return k
        return None

    def to_dict(self) -> dict:
        return {
            "symmetric": self.symmetric,
            "steps": self.steps,
            "seed": self.seed,
            "losses": list(self.losses),
            "final_loss": self.losses[-1],
            "final_residual": self.final_residual,
            "boundary_error": self.boundary_error,
            "invariance_defects": list(self.invariance_defects),
            "max_invariance_defect": max(self.invariance_defects),
            "steps_to_threshold": {repr(t): self.steps_to(t) for t in THRESHOLDS},
        }


def train(spec: PdeSpec, arch: str = "2x16", steps: int = 2000, seed: int = 0, symmetric: bool = False,
          eta: float = DEFAULT_STEP, defect_grid: int = 101) -> TrainReport:
    hidden = parse_arch(arch)
    if symmetric:
        check_symmetric_domain(spec)
    ans = Ansatz(hidden, flatten(init_params(hidden, seed)), symmetric)
    grid = np.linspace(spec.a, spec.b, defect_grid)
    losses, defects = [], []

    def step(theta):
        loss, g = loss_and_grad(ans.with_theta(theta), spec)
        losses.append(loss)
        defects.append(invariance_defect(ans.with_theta(theta), grid))
        return theta - eta * g

    try:
        theta = FlowMap(step, "pinn")(steps, ans.theta)
    except NonFinite as exc:
        raise NonFinite(str(exc), partial={"losses": losses, "invariance_defects": defects}) from exc
    final = ans.with_theta(theta)
    parts = loss_parts(final, spec)
    losses.append(parts.total)
    defects.append(invariance_defect(final, grid))
    return TrainReport(tuple(losses), parts.residual, math.sqrt(parts.boundary), tuple(defects), steps, seed,
                       symmetric, theta)


def train_compare(spec: PdeSpec, arch: str = "2x16", steps: int = 2000, seed: int = 0,
                  eta: float = DEFAULT_STEP) -> dict:
    """Baseline and symmetrized runs from the same initial weights."""
    warn = None
    xs = spec.points()
    if not np.allclose(spec.f(xs), spec.f(-xs), rtol=0, atol=1e-12):
        warn = "source is not even about 0; comparison is not meaningful"
    base = train(spec, arch, steps, seed, False, eta)
    sym = train(spec, arch, steps, seed, True, eta)
    return {
        "baseline": base,
        "symmetrized": sym,
        "steps_to_threshold": {
            repr(t): {"baseline": base.steps_to(t), "symmetrized": sym.steps_to(t)} for t in THRESHOLDS
        },
        "warning": warn,
    }
