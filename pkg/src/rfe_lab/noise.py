"""Logical noise model for fault-tolerant circuit executions.

The chain implemented here goes from a code distance to an effective
exponential decay rate of the measured signal:

    distance d  ->  logical error rate r = A * exp(-B * d)
                ->  per-layer N-qubit depolarizing channel with rate r
                ->  survival probability (1 - r)^(N * D * k) after k
                    controlled-unitary applications of depth D
                ->  decay rate lambda = -N * D * ln(1 - r) per application

plus the trajectory-average statistics (mean scale and variance of a
Pauli observable over stochastic error trajectories) that justify
modelling the noisy signal as a damped version of the ideal one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DegenerateChannelError",
    "FtModel",
    "DepolarizingChannel",
    "CircuitShape",
    "TrajectoryStats",
    "logical_rate",
    "physical_qubits",
    "survival_probability",
    "trajectory_variance",
    "enumerated_trajectory_variance",
    "trajectory_stats",
    "lambda_from_depolarizing",
    "stddev_heatmap",
    "write_stddev_csv",
]

_TWO = 2.0


class DegenerateChannelError(ValueError):
    """Raised when r = 1: every trajectory is an error, no decay rate exists."""


def logical_rate(prefactor: float, decay: float, distance: int) -> float:
    """Logical error rate of a distance-`distance` code patch.

    Args:
        prefactor: A > 0, the rate extrapolated to distance 0.
        decay: B > 0, exponential suppression per unit distance.
        distance: code distance, non-negative integer.

    Returns:
        A * exp(-B * distance).
    """
    if prefactor <= 0.0:
        raise ValueError(f"prefactor must be positive, got {prefactor}")
    if decay <= 0.0:
        raise ValueError(f"decay must be positive, got {decay}")
    if distance < 0:
        raise ValueError(f"distance must be non-negative, got {distance}")
    return prefactor * math.exp(-decay * distance)


@dataclass(frozen=True)
class FtModel:
    """Surface-code style overhead model: error rate A*e^(-B*d) at distance d."""

    A: float
    B: float
    d: int

    def __post_init__(self) -> None:
        if self.A <= 0.0:
            raise ValueError(f"A must be positive, got {self.A}")
        if self.B <= 0.0:
            raise ValueError(f"B must be positive, got {self.B}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")

    def logical_rate(self) -> float:
        return logical_rate(self.A, self.B, self.d)


def physical_qubits(model: FtModel, n_logical: int) -> int:
    """Physical qubit count at 2*d^2 physical qubits per logical qubit."""
    if n_logical < 1:
        raise ValueError(f"n_logical must be >= 1, got {n_logical}")
    return 2 * model.d * model.d * n_logical


@dataclass(frozen=True)
class DepolarizingChannel:
    """Single-qubit depolarizing channel with error rate r in [0, 1]."""

    r: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"r must lie in [0, 1], got {self.r}")

    @property
    def kraus_weights(self) -> tuple[float, float, float, float]:
        """Probabilities of (I, X, Y, Z) for one qubit and one layer."""
        return (1.0 - self.r, self.r / 3.0, self.r / 3.0, self.r / 3.0)


@dataclass(frozen=True)
class CircuitShape:
    """Shape of a noisy run: N qubits, D layers per application, k applications."""

    N: int
    D: int
    k: int

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.D < 1:
            raise ValueError(f"D must be >= 1, got {self.D}")
        if self.k < 0:
            raise ValueError(f"k must be >= 0, got {self.k}")

    @property
    def sites(self) -> int:
        """Number of independent single-qubit error sites, N*D*k."""
        return self.N * self.D * self.k


def _log_survival(r: float, n_layers: int, k: int) -> float:
    # Grouped as ((N*D) * log1p(-r)) * k so that exp(-lambda * k) with
    # lambda from `lambda_from_depolarizing` reproduces the same float.
    return (n_layers * math.log1p(-r)) * k


def survival_probability(channel: DepolarizingChannel, shape: CircuitShape) -> float:
    """Probability that no error fires on any site: (1 - r)^(N*D*k).

    Evaluated in log space so deep circuits (N*D*k up to 1e8 and beyond)
    degrade gracefully instead of losing precision term by term.
    """
    if shape.sites == 0:
        return 1.0
    if channel.r == 1.0:
        return 0.0
    return math.exp(_log_survival(channel.r, shape.N * shape.D, shape.k))


def trajectory_variance(channel: DepolarizingChannel, shape: CircuitShape) -> float:
    """Variance of a traceless Pauli expectation over error trajectories.

    Closed form for the composite depolarizing channel:

        Var = [((1-r)^2 + r^2/3)^(N*D*k) - (1-r)^(2*N*D*k)] / (2^N + 1)
    """
    sites = shape.sites
    if sites == 0 or channel.r == 0.0:
        return 0.0
    r = channel.r
    sq_sum = (1.0 - r) ** 2 + r * r / 3.0  # sum of squared Kraus weights per site
    term_all = math.exp(sites * math.log(sq_sum))
    term_id = 0.0 if r == 1.0 else math.exp(2.0 * _log_survival(r, shape.N * shape.D, shape.k))
    return (term_all - term_id) / (2.0**shape.N + 1.0)


def enumerated_trajectory_variance(
    weights: Sequence[float], layers: int, n_qubits: int
) -> float:
    """Brute-force trajectory variance for an explicit per-site weight vector.

    Enumerates every trajectory (one weight index per layer, index 0 being
    the error-free branch) and sums squared trajectory probabilities. Cost
    is len(weights)**layers terms; intended for layers <= 4 cross-checks.
    """
    if layers < 0:
        raise ValueError(f"layers must be >= 0, got {layers}")
    total = math.fsum(weights)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"weights must sum to 1, got {total}")
    acc = 0.0
    for combo in itertools.product(range(len(weights)), repeat=layers):
        if all(i == 0 for i in combo):
            continue
        p = 1.0
        for i in combo:
            p *= weights[i]
        acc += p * p
    return acc / (2.0**n_qubits + 1.0)


@dataclass(frozen=True)
class TrajectoryStats:
    """Mean damping factor and trajectory variance of the measured signal."""

    mean_scale: float
    variance: float


def trajectory_stats(channel: DepolarizingChannel, shape: CircuitShape) -> TrajectoryStats:
    return TrajectoryStats(
        mean_scale=survival_probability(channel, shape),
        variance=trajectory_variance(channel, shape),
    )


def lambda_from_depolarizing(channel: DepolarizingChannel, N: int, D: int) -> float:
    """Decay rate per controlled-unitary application: -N*D*ln(1 - r).

    Raises:
        DegenerateChannelError: if r = 1 (decay rate would be infinite).
    """
    if N < 1 or D < 1:
        raise ValueError(f"N and D must be >= 1, got N={N}, D={D}")
    if channel.r == 1.0:
        raise DegenerateChannelError("r = 1 leaves no error-free trajectory")
    return -(N * D * math.log1p(-channel.r))


def _variance_grid(
    r_values: np.ndarray, depth_values: np.ndarray, n_qubits: int
) -> np.ndarray:
    r = r_values[:, None]
    depth = depth_values[None, :]
    sites = float(n_qubits) * depth
    with np.errstate(divide="ignore"):
        log_sq = np.log((1.0 - r) ** 2 + r * r / 3.0)
        log_id = np.log1p(-r)
    term_all = np.exp(sites * log_sq)
    term_id = np.where(r == 1.0, 0.0, np.exp(2.0 * sites * log_id))
    var = (term_all - term_id) / (2.0**n_qubits + 1.0)
    return np.where(r == 0.0, 0.0, np.maximum(var, 0.0))


def stddev_heatmap(
    r_values: Iterable[float], depth_values: Iterable[float], n_qubits: int
) -> np.ndarray:
    """Standard deviation of a Pauli signal over trajectories.

    Args:
        r_values: depolarizing rates, each in [0, 1].
        depth_values: total layer counts D*k (need not be integers).
        n_qubits: N, number of qubits the channel acts on.

    Returns:
        Array of shape (len(r_values), len(depth_values)) holding sigma.
    """
    rv = np.asarray(list(r_values), dtype=float)
    dv = np.asarray(list(depth_values), dtype=float)
    if rv.size and (rv.min() < 0.0 or rv.max() > 1.0):
        raise ValueError("r values must lie in [0, 1]")
    if dv.size and dv.min() < 0.0:
        raise ValueError("depth values must be non-negative")
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
    return np.sqrt(_variance_grid(rv, dv, n_qubits))


def write_stddev_csv(
    path,
    r_values: Sequence[float],
    depth_values: Sequence[float],
    n_qubits: int,
) -> None:
    """Write `r,depth,N,sigma` rows for one qubit count."""
    from . import config as _config

    sigma = stddev_heatmap(r_values, depth_values, n_qubits)
    rows = []
    for i, r in enumerate(r_values):
        for j, depth in enumerate(depth_values):
            rows.append((r, depth, n_qubits, sigma[i, j]))
    _config.write_csv(path, ("r", "depth", "N", "sigma"), rows)
