"""Linear readout trained by ridge regression.

The readout maps the concatenated vector [1; u(t); x(t)] to the output:
``y(t) = w_out @ [1; u; x]``.  Fitting solves the regularized normal
equations

    (F^T F + lambda I) w_out^T = F^T Y

with a symmetric positive-definite (Cholesky) factorization in float64.
If rounding makes the system indefinite at the requested lambda, lambda is
escalated by factors of 10 up to 1e-2 with a logged warning; the lambda
actually used is recorded on the returned weights.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = ["ReadoutWeights", "fit_readout", "predict"]

logger = logging.getLogger(__name__)

_LAMBDA_CEILING = 1e-2


@dataclass(frozen=True)
class ReadoutWeights:
    """Trained readout matrix of shape (output_dim, 1 + input_dim + size)."""

    w_out: np.ndarray
    lam: float


def fit_readout(features, targets, lam: float = 1e-8) -> ReadoutWeights:
    """Fit ridge-regression weights minimizing ||F w^T - Y||^2 + lam ||w||^2.

    Parameters
    ----------
    features : array, shape (T, cols)
        Rows are the concatenated [1; u(t); x(t)] vectors.
    targets : array, shape (T, output_dim) or (T,)
    lam : float
        Ridge parameter; must be >= 0.  With lam = 0 a singular system
        raises instead of escalating.
    """
    F = np.asarray(features, dtype=np.float64)
    Y = np.asarray(targets, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    if F.ndim != 2 or Y.ndim != 2:
        raise ValueError("features and targets must be 2-D")
    if F.shape[0] != Y.shape[0]:
        raise ValueError(
            f"row mismatch: {F.shape[0]} feature rows vs {Y.shape[0]} target rows"
        )
    if F.shape[0] < 1:
        raise ValueError("need at least one sample")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    if not (np.all(np.isfinite(F)) and np.all(np.isfinite(Y))):
        raise ValueError("features and targets must be finite")

    cols = F.shape[1]
    gram = F.T @ F
    rhs = F.T @ Y
    eye = np.eye(cols)

    current = float(lam)
    while True:
        try:
            cho = scipy.linalg.cho_factor(gram + current * eye)
            wt = scipy.linalg.cho_solve(cho, rhs)
            break
        except np.linalg.LinAlgError:
            if current == 0.0:
                raise np.linalg.LinAlgError(
                    "normal equations are singular with lambda = 0; "
                    "refit with lambda > 0"
                ) from None
            nxt = current * 10.0
            if nxt > _LAMBDA_CEILING:
                raise np.linalg.LinAlgError(
                    f"normal equations not positive definite even at "
                    f"lambda = {current:g}"
                ) from None
            logger.warning(
                "ridge factorization failed at lambda=%.3g, escalating to %.3g",
                current,
                nxt,
            )
            current = nxt
    return ReadoutWeights(w_out=wt.T, lam=current)


def predict(weights: ReadoutWeights, u, x) -> np.ndarray:
    """Readout output for one input vector ``u`` and state vector ``x``."""
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    z = np.concatenate([[1.0], u, x])
    if z.shape[0] != weights.w_out.shape[1]:
        raise ValueError(
            f"feature vector has length {z.shape[0]}, readout expects "
            f"{weights.w_out.shape[1]}"
        )
    return weights.w_out @ z
