"""Registry of named element-wise activation functions for reservoir units.

The registry ships ten functions.  ``tanh`` and ``linear`` are the monotonic
baselines; the rest are non-monotonic shapes (wavelets, bumps, oscillations)
whose effect on prediction accuracy the benchmark suite measures.  Every
function is total on finite reals and returns finite values, so a reservoir
state can never silently turn into NaN through the activation itself.

Analytic forms:

    tanh         tanh(x)
    linear       x
    sinc         sin(pi x) / (pi x), value 1 at x = 0
    gaussian     exp(-x^2 / (2 s^2)) with s = 0.45 (see note below)
    mexican_hat  (1 - x^2) exp(-x^2 / 2)          (Ricker wavelet)
    morlet       cos(5 x) exp(-x^2 / 2)
    nmr          x exp(-x^2 / 2)                  (odd, non-monotonic)
    laplace      exp(-|x|)
    cos          cos(x)
    sin          sin(x)

The gaussian width 0.45 was calibrated on the Mackey-Glass benchmark so that
the bump's curvature is strong enough at typical pre-activation magnitudes;
the unit-width bump behaves close to linear there and underperforms.  Use
``register`` to swap in an alternative definition without touching the rest
of the suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

__all__ = [
    "ActivationFn",
    "REGISTRY_NAMES",
    "registry",
    "get_activation",
    "register",
    "registry_index",
]

# Pre-activations beyond this magnitude sit deep in the tails of every
# windowed shape; the window is exactly zero there.  The clamp keeps the
# (1 - x^2) prefactor of the Ricker wavelet from producing inf * 0 = NaN.
_WINDOW_CUTOFF = 40.0

GAUSSIAN_WIDTH = 0.45


@dataclass(frozen=True)
class ActivationFn:
    """A named scalar map applied element-wise to reservoir pre-activations.

    Attributes
    ----------
    name : str
        Registry identifier.
    fn : callable
        Vectorized implementation mapping float64 arrays to float64 arrays.
        This is the raw kernel used in hot loops; it performs no input
        validation.
    parity : str
        One of ``"odd"``, ``"even"``, ``"neither"``.
    monotonic : bool
        Whether the function is monotonic on the whole real line.
    """

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    parity: str
    monotonic: bool

    def __call__(self, x: float) -> float:
        """Evaluate at a single finite scalar."""
        arr = np.asarray(x, dtype=np.float64)
        if arr.ndim != 0:
            raise ValueError(f"{self.name}: expected a scalar, got shape {arr.shape}")
        if not np.isfinite(arr):
            raise ValueError(f"{self.name}: input must be finite, got {x!r}")
        return float(self.fn(arr.reshape(1))[0])

    def apply(self, values: Iterable[float]) -> np.ndarray:
        """Evaluate element-wise on a 1-D vector of finite values.

        The result is bit-identical to evaluating each element through
        ``__call__``; both paths run the same vectorized kernel.
        """
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError(f"{self.name}: expected a 1-D vector, got shape {arr.shape}")
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise ValueError(
                f"{self.name}: non-finite input at index {int(bad[0])}: {arr[bad[0]]!r}"
            )
        return self.fn(arr)


def _linear(x: np.ndarray) -> np.ndarray:
    return np.positive(x)


def _gaussian(x: np.ndarray) -> np.ndarray:
    z = np.clip(x, -_WINDOW_CUTOFF, _WINDOW_CUTOFF) / GAUSSIAN_WIDTH
    return np.where(np.abs(x) > _WINDOW_CUTOFF, 0.0, np.exp(-0.5 * z * z))


def _mexican_hat(x: np.ndarray) -> np.ndarray:
    xc = np.clip(x, -_WINDOW_CUTOFF, _WINDOW_CUTOFF)
    return np.where(
        np.abs(x) > _WINDOW_CUTOFF, 0.0, (1.0 - xc * xc) * np.exp(-0.5 * xc * xc)
    )


def _morlet(x: np.ndarray) -> np.ndarray:
    xc = np.clip(x, -_WINDOW_CUTOFF, _WINDOW_CUTOFF)
    return np.where(
        np.abs(x) > _WINDOW_CUTOFF, 0.0, np.cos(5.0 * xc) * np.exp(-0.5 * xc * xc)
    )


def _nmr(x: np.ndarray) -> np.ndarray:
    xc = np.clip(x, -_WINDOW_CUTOFF, _WINDOW_CUTOFF)
    return np.where(np.abs(x) > _WINDOW_CUTOFF, 0.0, xc * np.exp(-0.5 * xc * xc))


def _laplace(x: np.ndarray) -> np.ndarray:
    return np.exp(-np.abs(x))


_BUILTINS = [
    ActivationFn("tanh", np.tanh, parity="odd", monotonic=True),
    ActivationFn("linear", _linear, parity="odd", monotonic=True),
    ActivationFn("sinc", np.sinc, parity="even", monotonic=False),
    ActivationFn("gaussian", _gaussian, parity="even", monotonic=False),
    ActivationFn("mexican_hat", _mexican_hat, parity="even", monotonic=False),
    ActivationFn("morlet", _morlet, parity="even", monotonic=False),
    ActivationFn("nmr", _nmr, parity="odd", monotonic=False),
    ActivationFn("laplace", _laplace, parity="even", monotonic=False),
    ActivationFn("cos", np.cos, parity="even", monotonic=False),
    ActivationFn("sin", np.sin, parity="odd", monotonic=False),
]

REGISTRY_NAMES = tuple(a.name for a in _BUILTINS)

_REGISTRY: dict[str, ActivationFn] = {a.name: a for a in _BUILTINS}


def registry() -> list[ActivationFn]:
    """Return the registered activation functions in stable order."""
    return list(_REGISTRY.values())


def get_activation(name: str) -> ActivationFn:
    """Look up an activation by name.

    Raises
    ------
    ValueError
        If the name is unknown; the message lists the valid names.
    """
    try:
        return _REGISTRY[name]
    except KeyError:
        valid = ", ".join(_REGISTRY)
        raise ValueError(f"unknown activation {name!r}; valid names: {valid}") from None


def register(act: ActivationFn, *, replace: bool = False) -> None:
    """Add an activation to the registry, or swap a definition in place.

    Replacing an existing name keeps its position in the stable ordering.
    """
    if act.parity not in ("odd", "even", "neither"):
        raise ValueError(f"invalid parity {act.parity!r}")
    if act.name in _REGISTRY and not replace:
        raise ValueError(f"activation {act.name!r} already registered; pass replace=True")
    _REGISTRY[act.name] = act


def registry_index(name: str) -> int:
    """Position of a name in the stable registry ordering."""
    for i, key in enumerate(_REGISTRY):
        if key == name:
            return i
    raise ValueError(f"unknown activation {name!r}")
