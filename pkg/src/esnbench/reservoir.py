"""Echo state network core: fixed random weights and the state recursion.

A reservoir holds an input matrix ``w_in`` of shape ``(size, 1 + input_dim)``
(first column multiplies the constant bias 1), a recurrent matrix ``w`` of
shape ``(size, size)`` rescaled to a target spectral radius, and the current
unit-state vector.  The update applied by :meth:`Reservoir.step` is

    x(t) = f(w_in @ [1; u(t)] + w @ x(t-1))

with the activation ``f`` applied element-wise.  States start at zero and
are reset to zero by :meth:`Reservoir.reset`.

Weight entries are sampled i.i.d. from N(0, sigma^2) using numpy's PCG64
generator (``np.random.default_rng(seed)``); ``w_in`` is drawn before ``w``.
Construction is therefore bit-reproducible for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .activations import ActivationFn, get_activation

__all__ = [
    "DivergenceError",
    "ReservoirConfig",
    "Reservoir",
    "spectral_radius",
    "build_reservoir",
]


class DivergenceError(RuntimeError):
    """Raised when the state recursion produces a non-finite value."""


@dataclass(frozen=True)
class ReservoirConfig:
    """Construction parameters for a random reservoir.

    ``sigma`` is the standard deviation of the weight initialization and
    ``spectral_radius_target`` the radius ``w`` is rescaled to (default 0.95).
    """

    size: int
    input_dim: int
    sigma: float
    seed: int
    activation: str = "tanh"
    spectral_radius_target: float = 0.95

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"size must be >= 1, got {self.size}")
        if self.input_dim < 1:
            raise ValueError(f"input_dim must be >= 1, got {self.input_dim}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if not self.spectral_radius_target > 0:
            raise ValueError(
                f"spectral_radius_target must be > 0, got {self.spectral_radius_target}"
            )
        get_activation(self.activation)


def spectral_radius(matrix) -> float:
    """Largest eigenvalue modulus of a square real matrix.

    Complex eigenvalues contribute their modulus.  Uses a dense general
    eigenvalue solve; accurate to far better than the 1e-6 contract.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return float(np.max(np.abs(np.linalg.eigvals(m))))


class Reservoir:
    """Mutable reservoir state plus its fixed weight matrices.

    A single instance must not be stepped from multiple threads; distinct
    instances are fully independent.
    """

    def __init__(self, w_in: np.ndarray, w: np.ndarray, activation: ActivationFn):
        w_in = np.asarray(w_in, dtype=np.float64)
        w = np.asarray(w, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"w must be square, got shape {w.shape}")
        if w_in.ndim != 2 or w_in.shape[0] != w.shape[0] or w_in.shape[1] < 2:
            raise ValueError(
                f"w_in must have shape ({w.shape[0]}, 1 + input_dim), got {w_in.shape}"
            )
        self.w_in = w_in
        self.w = w
        self.activation = activation
        self.state = np.zeros(w.shape[0])
        self._t = 0

    @property
    def size(self) -> int:
        return self.w.shape[0]

    @property
    def input_dim(self) -> int:
        return self.w_in.shape[1] - 1

    def reset(self) -> None:
        """Zero the state, matching the state right after construction."""
        self.state = np.zeros(self.size)
        self._t = 0

    def step(self, u) -> np.ndarray:
        """Advance one time step with input vector ``u`` and return the new state."""
        u = np.atleast_1d(np.asarray(u, dtype=np.float64))
        if u.shape != (self.input_dim,):
            raise ValueError(f"expected input of shape ({self.input_dim},), got {u.shape}")
        # overflow here is reported as a DivergenceError, not a warning
        with np.errstate(over="ignore", invalid="ignore"):
            pre = self.w_in[:, 0] + self.w_in[:, 1:] @ u + self.w @ self.state
            x = self.activation.fn(pre)
        self._t += 1
        if not np.all(np.isfinite(x)):
            raise DivergenceError(
                f"non-finite reservoir state at step {self._t} (activation "
                f"{self.activation.name!r})"
            )
        self.state = x
        return x

    def harvest(self, inputs, washout: int) -> np.ndarray:
        """Reset, drive the reservoir over ``inputs``, and collect states.

        Returns the states for t >= washout as rows; row k is the state
        after consuming input ``washout + k``.
        """
        inputs = np.asarray(inputs, dtype=np.float64)
        if inputs.ndim == 1:
            inputs = inputs[:, None]
        n = inputs.shape[0]
        if n == 0:
            raise ValueError("empty input sequence")
        if not 0 <= washout < n:
            raise ValueError(f"washout must be in [0, {n}), got {washout}")
        self.reset()
        states = np.empty((n, self.size))
        for t in range(n):
            states[t] = self.step(inputs[t])
        return states[washout:].copy()


def build_reservoir(cfg: ReservoirConfig, *, w=None, w_in=None) -> Reservoir:
    """Sample a reservoir from the seeded generator and rescale its radius.

    ``w`` / ``w_in`` override the sampled matrices (test hook); the override
    for ``w`` is still rescaled to the target spectral radius.
    """
    rng = np.random.default_rng(cfg.seed)
    drawn_in = rng.normal(0.0, cfg.sigma, (cfg.size, 1 + cfg.input_dim))
    drawn_w = rng.normal(0.0, cfg.sigma, (cfg.size, cfg.size))
    if w_in is not None:
        drawn_in = np.asarray(w_in, dtype=np.float64)
    if w is not None:
        drawn_w = np.asarray(w, dtype=np.float64)
    rho = spectral_radius(drawn_w)
    if rho == 0.0:
        raise ValueError(
            "recurrent matrix has spectral radius 0 and cannot be rescaled; "
            "build again with a different seed"
        )
    drawn_w = drawn_w * (cfg.spectral_radius_target / rho)
    return Reservoir(drawn_in, drawn_w, get_activation(cfg.activation))
