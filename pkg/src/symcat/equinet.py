"""Small dense networks with weights constrained to intertwiner spaces.

Equivariance is built in by construction (projection onto, or expansion
over, the intertwiner space) and then measured independently by sampling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import autodiff as ad
from .errors import (
    BudgetExhausted,
    DimensionMismatch,
    GroupMismatch,
    NonPermutationWithNonlinearity,
)
from .optdyn import DiffFunction, gradient_descent, rng
from .report import Collector, LawReport
from .symgrp import (
    ALG_TOL,
    Representation,
    SetAction,
    burnside,
    direct_sum,
    fixed_subspace,
    intertwiner_basis,
    orbits,
    product_action,
    reynolds_map,
    reynolds_vector,
    trivial_representation,
)

ACTIVATIONS = ("identity", "tanh", "relu")


@dataclass(frozen=True, eq=False)
class Layer:
    W: np.ndarray
    b: np.ndarray
    activation: str = "identity"

    def __post_init__(self):
        W = np.array(self.W, dtype=np.float64, ndmin=2)
        b = np.array(self.b, dtype=np.float64, ndmin=1)
        if b.shape != (W.shape[0],):
            raise DimensionMismatch(f"bias shape {b.shape} for weight shape {W.shape}")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
            raise ValueError("layer parameters must be finite")
        W.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "b", b)

    @property
    def shape(self) -> tuple[int, int]:
        return self.W.shape


@dataclass(frozen=True, eq=False)
class DenseModel:
    layers: tuple[Layer, ...]
    reps: tuple = field(default=())  # optional representation per layer boundary

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        for a, b in zip(self.layers, self.layers[1:]):
            if b.W.shape[1] != a.W.shape[0]:
                raise DimensionMismatch(f"layer shapes {a.W.shape} and {b.W.shape} do not compose")

    @property
    def n_in(self) -> int:
        return self.layers[0].W.shape[1]

    @property
    def n_out(self) -> int:
        return self.layers[-1].W.shape[0]

    @property
    def nonlinear(self) -> bool:
        return any(l.activation != "identity" for l in self.layers)

    def __call__(self, x):
        return forward(self, x)


def _activate(name: str, z):
    if name == "tanh":
        return ad.tanh(z)
    if name == "relu":
        return ad.relu(z)
    return z


def forward(m: DenseModel, x) -> np.ndarray:
    """Evaluate ``m`` on one input vector or a batch of row vectors."""
    h = np.asarray(x, dtype=np.float64)
    if h.shape[-1] != m.n_in:
        raise DimensionMismatch(f"input has {h.shape[-1]} features, model expects {m.n_in}")
    for layer in m.layers:
        h = _activate(layer.activation, h @ layer.W.T + layer.b)
    return h


# -- constructors ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EquivariantLayerSpec:
    mode: str  # "reynolds" or "basis"
    r_in: Representation
    r_out: Representation
    coefficients: Sequence[float] | None = None
    bias_coefficients: Sequence[float] | None = None
    seed: int = 0
    activation: str = "identity"


def build_equivariant_layer(spec: EquivariantLayerSpec) -> Layer:
    r_in, r_out = spec.r_in, spec.r_out
    if r_in.group != r_out.group:
        raise GroupMismatch("input and output representations use different groups")
    if spec.mode == "reynolds":
        g = rng(spec.seed)
        W = g.standard_normal((r_out.dim, r_in.dim))
        b = g.standard_normal(r_out.dim)
        return Layer(reynolds_map(r_in, r_out, W), reynolds_vector(r_out, b), spec.activation)
    if spec.mode == "basis":
        basis = intertwiner_basis(r_in, r_out)
        coeffs = np.zeros(len(basis)) if spec.coefficients is None else np.asarray(spec.coefficients, dtype=np.float64)
        if coeffs.shape != (len(basis),):
            raise DimensionMismatch(f"{coeffs.size} coefficients for an intertwiner space of dim {len(basis)}")
        W = sum((c * B for c, B in zip(coeffs, basis)), np.zeros((r_out.dim, r_in.dim)))
        F = fixed_subspace(r_out)
        bc = np.zeros(F.shape[1]) if spec.bias_coefficients is None else np.asarray(spec.bias_coefficients, dtype=np.float64)
        if bc.shape != (F.shape[1],):
            raise DimensionMismatch(f"{bc.size} bias coefficients for a fixed subspace of dim {F.shape[1]}")
        return Layer(W, F @ bc, spec.activation)
    raise ValueError(f"unknown mode {spec.mode!r}")


def orbit_sum_head(r_in: Representation, seed: int = 0) -> Layer:
    """Invariant scalar readout: one weight per input orbit (row-constant on orbits)."""
    return build_equivariant_layer(
        EquivariantLayerSpec("reynolds", r_in, trivial_representation(r_in.group, 1), seed=seed)
    )


def equivariant_stack(reps: Sequence[Representation], seed: int = 0, activation: str = "tanh",
                      invariant_head: bool = False) -> DenseModel:
    """Layers ``reps[0] -> reps[1] -> ...`` built by Reynolds projection.

    The last layer has identity activation; with ``invariant_head`` an
    orbit-sum readout to the trivial representation is appended.
    """
    layers = []
    for k, (a, b) in enumerate(zip(reps, reps[1:])):
        last = k == len(reps) - 2 and not invariant_head
        layers.append(build_equivariant_layer(
            EquivariantLayerSpec("reynolds", a, b, seed=seed * 1000 + k, activation="identity" if last else activation)
        ))
    all_reps = list(reps)
    if invariant_head:
        layers.append(orbit_sum_head(reps[-1], seed=seed * 1000 + len(reps)))
        all_reps.append(trivial_representation(reps[0].group, 1))
    return DenseModel(tuple(layers), tuple(all_reps))


def random_model(sizes: Sequence[int], seed: int = 0, activation: str = "tanh") -> DenseModel:
    g = rng(seed)
    layers = []
    for k, (a, b) in enumerate(zip(sizes, sizes[1:])):
        act = "identity" if k == len(sizes) - 2 else activation
        layers.append(Layer(g.standard_normal((b, a)), g.standard_normal(b), act))
    return DenseModel(tuple(layers))


# -- checking ----------------------------------------------------------------------

def check_model_equivariance(m: DenseModel, r_in: Representation, r_out: Representation, n_samples: int = 100,
                             seed: int = 0, tol: float = ALG_TOL) -> LawReport:
    """Largest ``||f(rho_in(g) x) - rho_out(g) f(x)||_inf`` over seeded samples.

    Refuses non-permutation representations when the model has a nonlinear
    activation, since pointwise nonlinearities only commute with permutations.
    """
    if r_in.group != r_out.group:
        raise GroupMismatch("input and output representations use different groups")
    if (r_in.dim, r_out.dim) != (m.n_in, m.n_out):
        raise DimensionMismatch("representation dims do not match the model")
    if m.nonlinear and not (r_in.is_permutation() and r_out.is_permutation()):
        raise NonPermutationWithNonlinearity(
            "nonlinear activations need permutation representations on both ends"
        )
    G = r_in.group
    xs = rng(seed).standard_normal((n_samples, m.n_in))
    fx = forward(m, xs)
    col = Collector("check_model_equivariance")
    worst = 0.0
    for g in G:
        fgx = forward(m, xs @ r_in(g).T)
        res = np.max(np.abs(fgx - fx @ r_out(g).T), axis=1)
        for k, rk in enumerate(res):
            col.case(bool(rk <= tol), "equivariance", (G.names[g], k))
        worst = max(worst, float(res.max(initial=0.0)))
    col.details["max_violation"] = worst
    return col.report()


# -- compression ------------------------------------------------------------------

@dataclass(frozen=True)
class LayerCompression:
    raw_weights: int
    tied_weights: int
    raw_bias: int
    tied_bias: int

    @property
    def raw(self) -> int:
        return self.raw_weights + self.raw_bias

    @property
    def tied(self) -> int:
        return self.tied_weights + self.tied_bias

    @property
    def weight_ratio(self) -> float:
        return self.raw_weights / self.tied_weights


@dataclass(frozen=True)
class CompressionReport:
    layers: tuple[LayerCompression, ...]
    group_order: int

    @property
    def raw(self) -> int:
        return sum(l.raw for l in self.layers)

    @property
    def tied(self) -> int:
        return sum(l.tied for l in self.layers)

    @property
    def raw_weights(self) -> int:
        return sum(l.raw_weights for l in self.layers)

    @property
    def tied_weights(self) -> int:
        return sum(l.tied_weights for l in self.layers)

    @property
    def ratio(self) -> float:
        return self.raw / self.tied

    def to_dict(self) -> dict:
        return {
            "group_order": self.group_order,
            "best_case_ratio": self.group_order,
            "layers": [
                {"raw_weights": l.raw_weights, "tied_weights": l.tied_weights,
                 "raw_bias": l.raw_bias, "tied_bias": l.tied_bias, "weight_ratio": l.weight_ratio}
                for l in self.layers
            ],
            "raw": self.raw,
            "tied": self.tied,
            "ratio": self.ratio,
        }


def compress(shape: tuple[int, int], a_out: SetAction, a_in: SetAction) -> tuple[np.ndarray, CompressionReport]:
    """Tie weights along orbits of the index-pair action ``(i, j) -> (g.i, g.j)``.

    Returns an ``(n_out, n_in)`` array giving the shared-parameter index of
    each weight position, plus exact parameter counts.  The group order is
    reported as the best-case ratio, reached only for free actions.
    """
    if a_out.group != a_in.group:
        raise GroupMismatch("actions over different groups")
    n_out, n_in = shape
    if (a_out.size, a_in.size) != (n_out, n_in):
        raise DimensionMismatch(f"actions on sets of size {(a_out.size, a_in.size)} for shape {shape}")
    pairs = product_action(a_out, a_in)
    part = orbits(pairs)
    tying = np.array(part.orbit_of, dtype=np.int64).reshape(n_out, n_in)
    layer = LayerCompression(n_out * n_in, part.count, n_out, burnside(a_out))
    return tying, CompressionReport((layer,), a_out.group.order)


def check_tying(tying: np.ndarray, a_out: SetAction, a_in: SetAction) -> LawReport:
    """The tying pattern is constant on index-pair orbits and uses one index per orbit."""
    tying = np.asarray(tying)
    col = Collector("check_tying")
    n_out, n_in = tying.shape
    for g in a_out.group:
        for i, j in itertools.product(range(n_out), range(n_in)):
            col.case(tying[a_out.act(g, i), a_in.act(g, j)] == tying[i, j], "orbit_constant",
                     (a_out.group.names[g], i, j))
    used = sorted(set(tying.ravel().tolist()))
    col.case(used == list(range(len(used))), "contiguous_indices", (len(used),))
    col.case(len(used) == burnside(product_action(a_out, a_in)), "one_index_per_orbit", (len(used),))
    return col.report()


def compress_layers(actions: Sequence[SetAction]) -> CompressionReport:
    """Compression for a stack whose boundary ``k`` carries ``actions[k]``."""
    layers = []
    for a_in, a_out in zip(actions, actions[1:]):
        _, rep = compress((a_out.size, a_in.size), a_out, a_in)
        layers.extend(rep.layers)
    return CompressionReport(tuple(layers), actions[0].group.order)


def tied_weights(tying: np.ndarray, values: Sequence[float]) -> np.ndarray:
    return np.asarray(values, dtype=np.float64)[tying]


# -- fitting invariant functions ----------------------------------------------------

def symmetric_grid(dim: int, points: int = 21, low: float = -1.0, high: float = 1.0) -> np.ndarray:
    axis = np.linspace(low, high, points)
    return np.array(list(itertools.product(axis, repeat=dim)))


@dataclass(frozen=True, eq=False)
class FitResult:
    model: DenseModel
    sup_error: float
    losses: tuple[float, ...]
    params: np.ndarray


class _InvariantAnsatz:
    """Parameterised invariant network: coefficients over intertwiner bases."""

    def __init__(self, r_in: Representation, channels: int, activation: str = "tanh"):
        G = r_in.group
        self.trivial = trivial_representation(G, 1)
        self.activation = activation
        self.blocks = []  # (basis, fixed-subspace basis) per layer
        reps = [r_in]
        if channels:
            reps.append(direct_sum(*[r_in] * channels))
        reps.append(self.trivial)
        self.reps = reps
        for a, b in zip(reps, reps[1:]):
            self.blocks.append((np.array(intertwiner_basis(a, b)), fixed_subspace(b)))
        self.sizes = [len(B) + F.shape[1] for B, F in self.blocks]

    @property
    def n_params(self) -> int:
        return sum(self.sizes)

    def _unpack(self, theta):
        off = 0
        out = []
        for (B, F), n in zip(self.blocks, self.sizes):
            out.append((theta[off:off + len(B)], theta[off + len(B):off + n]))
            off += n
        return out

    def materialize(self, theta: np.ndarray) -> DenseModel:
        layers = []
        for k, ((B, F), (c, bc)) in enumerate(zip(self.blocks, self._unpack(theta))):
            W = np.tensordot(c, B, axes=1) if len(B) else np.zeros((F.shape[0], 0))
            act = "identity" if k == len(self.blocks) - 1 else self.activation
            layers.append(Layer(W, F @ bc, act))
        return DenseModel(tuple(layers), tuple(self.reps))

    def evaluate(self, theta, X):
        """Model output on rows of ``X``; ``theta`` may be a Jet."""
        h = X
        for k, ((B, F), (c, bc)) in enumerate(zip(self.blocks, self._unpack(theta))):
            # h @ W.T with W = sum_i c_i B_i, written so c can carry derivatives
            z = _lincomb(c, [h @ Bi.T for Bi in B])
            z = z + _lincomb(bc, list(F.T))
            h = z if k == len(self.blocks) - 1 else _activate(self.activation, z)
        return h


def _lincomb(coeffs, terms):
    acc = 0.0
    for i, t in enumerate(terms):
        acc = acc + coeffs[i] * t
    return acc


def fit_invariant(target: Callable, r_in: Representation, arch: str | int = "linear", budget: int = 500,
                  seed: int = 0, eta: float = 0.5, grid: np.ndarray | None = None,
                  target_error: float | None = None) -> FitResult:
    """Fit an exactly invariant network to ``target`` by gradient descent.

    ``arch`` is ``"linear"`` (orbit-sum head only) or a number of hidden
    channels, each a copy of ``r_in`` with tanh.  The reported error is the
    sup norm over ``grid`` (default: 21 points per axis on ``[-1, 1]^n``).
    """
    channels = 0 if arch in ("linear", 0) else int(arch)
    if channels and not r_in.is_permutation():
        raise NonPermutationWithNonlinearity("hidden tanh channels need a permutation representation")
    ans = _InvariantAnsatz(r_in, channels)
    X = symmetric_grid(r_in.dim) if grid is None else np.asarray(grid, dtype=np.float64)
    y = np.array([float(target(x)) for x in X])

    def mse(theta):
        d = ans.evaluate(theta, X)[:, 0] - y
        return (d * d).sum() * (1.0 / len(y))

    loss = DiffFunction(mse, "mse")
    theta0 = 0.1 * rng(seed).standard_normal(ans.n_params) if channels else np.zeros(ans.n_params)
    traj = gradient_descent(loss, theta0, eta, budget)
    losses = tuple(loss.value(th) for _, th in traj.points)
    best = int(np.argmin(losses))
    theta = traj.points[best][1]
    model = ans.materialize(theta)
    err = float(np.max(np.abs(forward(model, X)[:, 0] - y)))
    result = FitResult(model, err, losses, theta)
    if target_error is not None and err > target_error:
        raise BudgetExhausted(f"sup error {err:.3g} above {target_error} after {budget} steps", result)
    return result


# -- adversarial invariance ----------------------------------------------------------

def half_sq_loss(y) -> float:
    y = np.asarray(y, dtype=np.float64)
    return 0.5 * float(y @ y)


def adversarial_invariance(m: DenseModel, loss: Callable, x, r_in: Representation, mode: str = "orbit",
                           eps: float = 0.1, n_samples: int = 100, seed: int = 0, tol: float = 1e-12) -> LawReport:
    """Largest loss change under symmetry-respecting perturbations of ``x``.

    ``orbit``: ``x + delta_g = rho(g) x`` for each group element; the
    ``tol`` threshold applies.  ``fixed``: ``delta`` drawn from the fixed
    subspace of ``r_in`` with norm at most ``eps``; measured only.
    """
    x = np.asarray(x, dtype=np.float64)
    base = loss(forward(m, x))
    col = Collector(f"adversarial_{mode}")
    worst = 0.0
    if mode == "orbit":
        for g in r_in.group:
            d = abs(loss(forward(m, r_in(g) @ x)) - base)
            worst = max(worst, d)
            col.case(d <= tol, "loss_invariance", (r_in.group.names[g],))
            if d > 0:
                col.details.setdefault("witness", r_in.group.names[g])
    elif mode == "fixed":
        F = fixed_subspace(r_in)
        g = rng(seed)
        for _ in range(n_samples):
            col.cases += 1
            if F.shape[1] == 0 or eps == 0:
                continue
            c = g.standard_normal(F.shape[1])
            delta = F @ c
            delta *= eps * g.uniform() / max(np.linalg.norm(delta), 1e-300)
            worst = max(worst, abs(loss(forward(m, x + delta)) - base))
        col.details["asserted"] = False
    else:
        raise ValueError(f"unknown mode {mode!r}")
    col.details["max_delta_loss"] = worst
    return col.report()
