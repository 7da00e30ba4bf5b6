"""Randomized Fourier estimation of an eigenphase from single-shot interferometry.

Each shot applies the target unitary a uniformly random number of times
k in {0, ..., K-1}, offsets the interference by a uniform phase
phi in [0, 2*pi), and measures a +/-1 outcome z with

    P(z = +1 | k, phi) = (1 + exp(-lambda*k) * cos(k*theta + phi)) / 2.

The estimator accumulates 2*z*exp(-i*phi) into depth buckets, reads the
resulting length-J Fourier spectrum, and reports the grid phase of the
largest magnitude bin. `expected_spectrum` and `closed_form_peak_power`
give the analytic mean spectrum used by the runtime bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EmptyCampaignError",
    "RfeConfig",
    "ShotRecord",
    "FourierSpectrum",
    "EstimateResult",
    "stream_rng",
    "outcome_probability",
    "draw_shot",
    "shot_estimate",
    "run_rfe",
    "expected_spectrum",
    "closed_form_peak_power",
    "grid_size",
    "choose_K",
    "wrapped_distance",
]

TWO_PI = 2.0 * math.pi

# Shots are drawn in fixed-size blocks; the block size is part of the
# deterministic contract (same seed -> bit-identical spectrum).
_CHUNK = 1 << 19

_MASK64 = (1 << 64) - 1


class EmptyCampaignError(ValueError):
    """Raised when asked to estimate from zero shots."""


def stream_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for stream `stream` of a base seed.

    Distinct (seed, stream) pairs key independent Philox streams, so
    trials can run in any order or in parallel without coordination.
    """
    key = np.array([seed & _MASK64, stream & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def wrapped_distance(a: float, b: float) -> float:
    """Distance between two phases on the circle, in [0, pi]."""
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def grid_size(epsilon: float) -> int:
    """Smallest grid with resolution 2*pi/J <= epsilon."""
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    return max(2, math.ceil(TWO_PI / epsilon))


def choose_K(
    epsilon: float,
    lam: float,
    J: int | None = None,
    strategy: str = "maintext",
) -> int:
    """Depth cap balancing decay against target accuracy.

    Args:
        epsilon: target accuracy, > 0.
        lam: decay rate per application, >= 0.
        J: optional grid size; the result is clamped to at most J.
        strategy: "maintext" rounds 1/(2*lam + 1.5*epsilon/(2*pi)) down
            to a multiple of 10; "harmonic" floors the harmonic mean of
            1/lam and 2*pi/epsilon.

    Returns:
        Integer depth cap >= 2.
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if lam < 0.0:
        raise ValueError(f"lam must be non-negative, got {lam}")
    if strategy == "maintext":
        denom = 2.0 * lam + 1.5 * epsilon / TWO_PI
        k = max(10 * math.floor(1.0 / (10.0 * denom)), 2)
    elif strategy == "harmonic":
        k = max(math.floor(1.0 / (lam + epsilon / TWO_PI)), 2)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if J is not None:
        k = min(k, J)
    return k


def outcome_probability(k, phi, theta: float, lam: float):
    """P(z = +1 | k, phi); accepts scalars or numpy arrays for k and phi."""
    k = np.asarray(k, dtype=float)
    val = 0.5 * (1.0 + np.exp(-lam * k) * np.cos(k * theta + np.asarray(phi)))
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class ShotRecord:
    k: int
    phi: float
    z: int


@dataclass(frozen=True)
class RfeConfig:
    """One estimation campaign: target accuracy and sampling plan.

    Invariants: 0 <= theta < 2*pi, epsilon > 0 with 2*pi/J <= epsilon,
    lam >= 0, 2 <= K <= J, M >= 0 (M = 0 is representable so that the
    empty-campaign error path can be exercised).
    """

    theta: float
    epsilon: float
    lam: float
    J: int
    K: int
    M: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta < TWO_PI:
            raise ValueError(f"theta must lie in [0, 2*pi), got {self.theta}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.lam < 0.0:
            raise ValueError(f"lam must be non-negative, got {self.lam}")
        if self.J < 2:
            raise ValueError(f"J must be >= 2, got {self.J}")
        if TWO_PI / self.J > self.epsilon * (1.0 + 1e-12):
            raise ValueError(
                f"grid too coarse: 2*pi/J = {TWO_PI / self.J} exceeds epsilon = {self.epsilon}"
            )
        if not 2 <= self.K <= self.J:
            raise ValueError(f"K must satisfy 2 <= K <= J, got K={self.K}, J={self.J}")
        if self.M < 0:
            raise ValueError(f"M must be >= 0, got {self.M}")


def draw_shot(config: RfeConfig, rng: np.random.Generator) -> ShotRecord:
    """Sample one (k, phi, z) triple from the outcome distribution."""
    k = int(rng.integers(0, config.K))
    phi = TWO_PI * rng.random()
    p = outcome_probability(k, phi, config.theta, config.lam)
    z = 1 if rng.random() < p else -1
    return ShotRecord(k=k, phi=phi, z=z)


def shot_estimate(shot: ShotRecord, j: int, J: int) -> complex:
    """Single-shot unbiased estimate of the j-th spectrum entry."""
    return 2.0 * shot.z * np.exp(-2j * math.pi * shot.k * j / J) * np.exp(-1j * shot.phi)


@dataclass(frozen=True)
class FourierSpectrum:
    """Shot-averaged spectrum: values[j] = mean of 2*z*e^(-i*phi)*e^(-2*pi*i*k*j/J)."""

    values: np.ndarray
    shots: int

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def merge(self, other: "FourierSpectrum") -> "FourierSpectrum":
        """Shot-weighted combination of two partial campaigns."""
        if self.values.shape != other.values.shape:
            raise ValueError("cannot merge spectra over different grids")
        total = self.shots + other.shots
        if total == 0:
            raise EmptyCampaignError("merging two empty spectra")
        merged = (self.shots * self.values + other.shots * other.values) / total
        return FourierSpectrum(values=merged, shots=total)


@dataclass(frozen=True)
class EstimateResult:
    theta_hat: float
    peak_index: int
    success: bool


def _bucket_sums(
    rng: np.random.Generator, shots: int, K: int, theta: float, lam: float
) -> np.ndarray:
    """Accumulate z*e^(-i*phi) into K depth buckets, in fixed-size blocks."""
    decay = np.exp(-lam * np.arange(K))
    cos_k = np.cos(theta * np.arange(K))
    sin_k = np.sin(theta * np.arange(K))
    acc = np.zeros(K, dtype=complex)
    remaining = shots
    while remaining > 0:
        n = min(_CHUNK, remaining)
        ks = rng.integers(0, K, size=n)
        phi = TWO_PI * rng.random(n)
        c = np.cos(phi)
        s = np.sin(phi)
        p = 0.5 + 0.5 * decay[ks] * (cos_k[ks] * c - sin_k[ks] * s)
        z = np.where(rng.random(n) < p, 1.0, -1.0)
        re = np.bincount(ks, weights=z * c, minlength=K)
        im = np.bincount(ks, weights=z * s, minlength=K)
        acc += re - 1j * im
        remaining -= n
    return acc


def run_rfe(
    config: RfeConfig, rng: np.random.Generator | None = None
) -> tuple[FourierSpectrum, EstimateResult]:
    """Run a full campaign and decode the phase.

    Ties in the spectrum magnitude resolve to the lowest bin index.
    Success means the decoded phase is within epsilon of config.theta
    in wrapped distance.

    Raises:
        EmptyCampaignError: if config.M == 0.
    """
    if config.M == 0:
        raise EmptyCampaignError("campaign has zero shots")
    if rng is None:
        rng = stream_rng(config.seed)
    sums = _bucket_sums(rng, config.M, config.K, config.theta, config.lam)
    # values[j] = (1/M) * sum_k w_k e^(-2*pi*i*j*k/J): a zero-padded DFT
    # of the bucket sums, identical to per-shot accumulation.
    values = 2.0 * np.fft.fft(sums, n=config.J) / config.M
    spectrum = FourierSpectrum(values=values, shots=config.M)
    peak = int(np.argmax(np.abs(values)))
    theta_hat = TWO_PI * peak / config.J
    success = wrapped_distance(theta_hat, config.theta) <= config.epsilon
    return spectrum, EstimateResult(theta_hat=theta_hat, peak_index=peak, success=success)


def expected_spectrum(theta: float, J: int, K: int, lam: float) -> np.ndarray:
    """Mean spectrum: (1/K) * (1 - a^K) / (1 - a) with a = e^(i*theta - 2*pi*i*j/J - lam).

    Evaluated as e^((K-1)w/2) * sinh(K*w/2) / (K * sinh(w/2)) with
    w = i*(theta - 2*pi*j/J) - lam, which stays accurate through the
    removable singularities at a = 1 (value 1 there). For large K*lam
    the sinh form would overflow, so the geometric tail is dropped
    once it is below double precision.
    """
    if J < 1 or K < 1:
        raise ValueError("J and K must be >= 1")
    if lam < 0.0:
        raise ValueError(f"lam must be non-negative, got {lam}")
    j = np.arange(J)
    w = 1j * (theta - TWO_PI * j / J) - lam
    if K * lam > 350.0:
        # |a|^K = e^(-K*lam) < 1e-152: the a^K term is unrepresentable.
        return (1.0 / K) / (1.0 - np.exp(w))
    half = 0.5 * w
    # Complex division squares the denominator magnitude internally, so
    # bins within ~1e-100 of the peak phase would overflow; their limit is 1.
    tiny = np.abs(half) < 1e-100
    sh = np.where(tiny, 1.0, np.sinh(half))
    vals = np.exp((K - 1.0) * half) * np.sinh(K * half) / (K * sh)
    return np.where(tiny, 1.0 + 0.0j, vals)


def closed_form_peak_power(theta: float, j: int, J: int, K: int, lam: float) -> float:
    """|mean spectrum|^2 at bin j, in overflow-free form.

    Equals e^(-(K-1)*lam)/K^2 * (cosh(K*lam) - cos(K*y)) / (cosh(lam) - cos(y))
    with y = theta - 2*pi*j/J, rewritten so only decaying exponentials
    appear. The removable singularity at lam = 0, y = 0 (mod 2*pi)
    evaluates to 1.
    """
    if lam < 0.0:
        raise ValueError(f"lam must be non-negative, got {lam}")
    y = theta - TWO_PI * j / J
    em_k = -math.expm1(-K * lam)  # 1 - e^(-K*lam)
    em_1 = -math.expm1(-lam)
    sin_ky = math.sin(0.5 * K * y)
    sin_y = math.sin(0.5 * y)
    num = em_k * em_k + 4.0 * math.exp(-K * lam) * sin_ky * sin_ky
    den = em_1 * em_1 + 4.0 * math.exp(-lam) * sin_y * sin_y
    if den == 0.0:
        return 1.0
    return num / (K * K * den)
