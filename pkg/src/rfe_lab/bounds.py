"""Analytic sample-count and runtime upper bounds for the Fourier estimator.

The failure probability of the peak decode is controlled by three
spectrum statistics at the worst grid alignment:

    Q  upper-bounds the per-shot second moment of the deviation between
       the peak bin and its nearest non-adjacent competitor,
    R  lower-bounds the peak power |f_(j*)|^2 over the alignment window,
    S  upper-bounds the power of every non-adjacent bin.

A Chernoff argument then needs M = ceil(128*pi^2 * ln(8*J/delta) * Q / (R-S)^2)
shots for failure probability at most delta. R <= S means the gap is not
certifiable and the bound is vacuous.

All cosh/sinh expressions are rewritten in terms of e^(-lam) so that
large decay rates underflow gracefully instead of overflowing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import rfe

__all__ = [
    "VacuousBoundError",
    "BoundInputs",
    "BoundBreakdown",
    "SweepRow",
    "q_bound",
    "r_bound",
    "s_bound",
    "w_ratio",
    "sample_bound",
    "runtime_cu",
    "bound_validity",
    "evaluate_bound",
    "sweep_runtime_curves",
]

_SIDE_LOBE_COEFF = 0.89


class VacuousBoundError(ArithmeticError):
    """Raised when R <= S: the spectral gap cannot be certified."""


def q_bound(K: int, J: int) -> float:
    """Deviation second-moment bound at the nearest non-adjacent offset."""
    _check_kj(K, J)
    x = rfe.TWO_PI / J
    return (32.0 / 3.0) * -math.expm1(-(4.0 * K * K / 7.0) * x * x)


def r_bound(K: int, J: int, lam: float) -> float:
    """Lower bound on the peak power: |f|^2 at the worst alignment offset pi/J."""
    _check_kj(K, J)
    if lam < 0.0:
        raise ValueError(f"lam must be non-negative, got {lam}")
    em_k = -math.expm1(-K * lam)
    em_1 = -math.expm1(-lam)
    sin_k = math.sin(0.5 * K * math.pi / J)
    sin_1 = math.sin(0.5 * math.pi / J)
    num = em_k * em_k + 4.0 * math.exp(-K * lam) * sin_k * sin_k
    den = em_1 * em_1 + 4.0 * math.exp(-lam) * sin_1 * sin_1
    return num / (K * K * den)


def s_bound(K: int, J: int, lam: float) -> float:
    """Upper bound on any non-adjacent bin power, evaluated at offset 2*pi/J.

    The lam = 0 limit replaces the damping ratio (1-e^(-K*lam))/(1-e^(-lam))
    by K exactly.
    """
    _check_kj(K, J)
    if lam < 0.0:
        raise ValueError(f"lam must be non-negative, got {lam}")
    if lam == 0.0:
        damping_sq = 1.0
    else:
        ratio = math.expm1(-K * lam) / math.expm1(-lam)
        damping_sq = (ratio / K) ** 2
    sech_sq = 4.0 * math.exp(-lam) / (1.0 + math.exp(-lam)) ** 2
    sin_sq = math.sin(math.pi / J) ** 2
    if sin_sq >= 1.0:
        cos_pow = 0.0
    else:
        cos_pow = math.exp(0.25 * K * K * math.log1p(-sin_sq))
    bracket = 1.0 - _SIDE_LOBE_COEFF * sech_sq * (1.0 - cos_pow)
    return damping_sq * bracket


def w_ratio(K: int, J: int, lam: float) -> float:
    """16*pi^2 * Q / (R - S)^2, the shot-budget prefactor.

    Raises:
        VacuousBoundError: if R <= S.
    """
    r = r_bound(K, J, lam)
    s = s_bound(K, J, lam)
    gap = r - s
    if gap <= 0.0:
        raise VacuousBoundError(
            f"peak bound {r} does not exceed side bound {s} (K={K}, J={J}, lam={lam})"
        )
    return 16.0 * math.pi**2 * q_bound(K, J) / (gap * gap)


@dataclass(frozen=True)
class BoundInputs:
    """Derived problem geometry: grid J, depth cap K, and failure budget."""

    epsilon: float
    delta: float
    lam: float
    J: int
    K: int

    def __post_init__(self) -> None:
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.lam < 0.0:
            raise ValueError(f"lam must be non-negative, got {self.lam}")
        if not 2 <= self.K <= self.J:
            raise ValueError(f"K must satisfy 2 <= K <= J, got K={self.K}, J={self.J}")

    @classmethod
    def derive(
        cls,
        epsilon: float,
        delta: float,
        lam: float,
        k_strategy: str = "maintext",
    ) -> "BoundInputs":
        """Build (J, K) from the accuracy target.

        lam = 0 bypasses the validity condition lam >= 1/(2K) by taking
        K = J and the lam -> 0 limits of R and S.
        """
        J = rfe.grid_size(epsilon)
        K = J if lam == 0.0 else rfe.choose_K(epsilon, lam, J=J, strategy=k_strategy)
        return cls(epsilon=epsilon, delta=delta, lam=lam, J=J, K=K)


def bound_validity(inputs: BoundInputs) -> str:
    """"valid" inside the derivation's regime, "extrapolated" below it."""
    if inputs.lam == 0.0 or inputs.lam >= 1.0 / (2.0 * inputs.K):
        return "valid"
    return "extrapolated"


def sample_bound(inputs: BoundInputs) -> int:
    """Shot count certifying failure probability <= delta.

    Raises:
        VacuousBoundError: if R <= S at these inputs.
    """
    w = w_ratio(inputs.K, inputs.J, inputs.lam)
    return math.ceil(8.0 * w * math.log(8.0 * inputs.J / inputs.delta))


def runtime_cu(M: int, K: int, worst_case_depth: bool = False) -> float:
    """Total controlled-unitary application count across a campaign.

    Per shot the depth is uniform on {0, ..., K-1}, so the expected cost
    is (K-1)/2 applications; `worst_case_depth` charges K-1 instead.
    """
    if M < 0:
        raise ValueError(f"M must be >= 0, got {M}")
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    per_shot = float(K - 1) if worst_case_depth else (K - 1) / 2.0
    return M * per_shot


@dataclass(frozen=True)
class BoundBreakdown:
    Q: float
    R: float
    S: float
    W: float
    M: int
    runtime: float


def evaluate_bound(inputs: BoundInputs, worst_case_depth: bool = False) -> BoundBreakdown:
    """Full Q/R/S/W/M/runtime chain at one parameter point."""
    q = q_bound(inputs.K, inputs.J)
    r = r_bound(inputs.K, inputs.J, inputs.lam)
    s = s_bound(inputs.K, inputs.J, inputs.lam)
    w = w_ratio(inputs.K, inputs.J, inputs.lam)
    m = sample_bound(inputs)
    return BoundBreakdown(
        Q=q, R=r, S=s, W=w, M=m, runtime=runtime_cu(m, inputs.K, worst_case_depth)
    )


@dataclass(frozen=True)
class SweepRow:
    lam: float
    epsilon: float
    J: int
    K: int
    M: int | None
    runtime: float | None
    validity: str


def sweep_runtime_curves(
    lambdas: Iterable[float],
    epsilons: Sequence[float],
    delta: float = 0.01,
    k_strategy: str = "maintext",
    worst_case_depth: bool = False,
) -> list[SweepRow]:
    """Runtime bound over a (lambda, epsilon) grid.

    Vacuous points are kept in the output with validity "vacuous" and
    empty M/runtime rather than dropped.
    """
    rows: list[SweepRow] = []
    for lam in lambdas:
        for eps in epsilons:
            inputs = BoundInputs.derive(eps, delta, lam, k_strategy=k_strategy)
            try:
                m = sample_bound(inputs)
            except VacuousBoundError:
                rows.append(
                    SweepRow(lam, eps, inputs.J, inputs.K, None, None, "vacuous")
                )
                continue
            rows.append(
                SweepRow(
                    lam,
                    eps,
                    inputs.J,
                    inputs.K,
                    m,
                    runtime_cu(m, inputs.K, worst_case_depth),
                    bound_validity(inputs),
                )
            )
    return rows


def _check_kj(K: int, J: int) -> None:
    if J < 2:
        raise ValueError(f"J must be >= 2, got {J}")
    if not 2 <= K <= J:
        raise ValueError(f"K must satisfy 2 <= K <= J, got K={K}, J={J}")
