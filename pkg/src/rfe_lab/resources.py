"""Fault-tolerant resource comparison: randomized estimation vs textbook QPE.

Both algorithms target accuracy epsilon with failure budget delta on an
N-qubit unitary of logical depth D per application, executed on a code
whose logical error rate is A*e^(-B*d) at distance d.

Textbook QPE needs every gate of one deep coherent circuit to succeed,
which pins a minimum distance; the randomized estimator tolerates errors
through the decay-aware bound and trades distance against shot count.
QEC cycles are counted as (controlled-unitary calls) * D * d, i.e. d
cycles per logical layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from . import bounds, noise, rfe

__all__ = [
    "ProblemInstance",
    "CostReport",
    "qpe_ancillas",
    "qpe_cu_calls",
    "qpe_min_distance",
    "qpe_cost_at_distance",
    "rfe_cost_at_distance",
    "compare_sweep",
]


@dataclass(frozen=True)
class ProblemInstance:
    """Phase estimation task: N qubits, depth D per application, accuracy targets."""

    N: int
    D: int
    epsilon: float
    delta: float

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if self.D < 1:
            raise ValueError(f"D must be >= 1, got {self.D}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")


def qpe_ancillas(epsilon: float, delta: float) -> int:
    """Ancilla register size: ceil(log2(1/epsilon)) + ceil(log2(1/delta + 1/2))."""
    if epsilon <= 0.0 or not 0.0 < delta < 1.0:
        raise ValueError("need epsilon > 0 and 0 < delta < 1")
    return math.ceil(math.log2(1.0 / epsilon)) + math.ceil(math.log2(1.0 / delta + 0.5))


def qpe_cu_calls(epsilon: float, delta: float) -> float:
    """Controlled-unitary applications of one QPE circuit: (1/epsilon)*(1/delta + 1/2)."""
    if epsilon <= 0.0 or not 0.0 < delta < 1.0:
        raise ValueError("need epsilon > 0 and 0 < delta < 1")
    return (1.0 / epsilon) * (1.0 / delta + 0.5)


def qpe_min_distance(instance: ProblemInstance, A: float, B: float) -> int:
    """Smallest distance at which the whole QPE circuit meets the error budget.

    Derived from N*D*A*e^(-B*d) <= epsilon*delta^2/(1 + delta):
    d = ceil((1/B) * ln(A*N*D*(1 + delta) / (epsilon*delta^2))).
    """
    if A <= 0.0 or B <= 0.0:
        raise ValueError("need A > 0 and B > 0")
    arg = A * instance.N * instance.D * (1.0 + instance.delta) / (
        instance.epsilon * instance.delta**2
    )
    return math.ceil(math.log(arg) / B)


@dataclass(frozen=True)
class CostReport:
    """Resource cost of one algorithm at one code distance."""

    algorithm: str
    d: int
    physical_qubits: int
    cu_calls: float
    qec_cycles: float
    feasible: bool


def qpe_cost_at_distance(instance: ProblemInstance, A: float, B: float, d: int) -> CostReport:
    model = noise.FtModel(A=A, B=B, d=d)
    n_logical = instance.N + qpe_ancillas(instance.epsilon, instance.delta)
    cu = qpe_cu_calls(instance.epsilon, instance.delta)
    return CostReport(
        algorithm="qpe",
        d=d,
        physical_qubits=noise.physical_qubits(model, n_logical),
        cu_calls=cu,
        qec_cycles=cu * instance.D * d,
        feasible=d >= qpe_min_distance(instance, A, B),
    )


def rfe_cost_at_distance(instance: ProblemInstance, A: float, B: float, d: int) -> CostReport:
    """Randomized-estimator cost with the decay rate implied by distance d.

    Infeasible (vacuous bound) distances are reported with NaN costs
    rather than dropped, so sweeps keep a row per distance.
    """
    model = noise.FtModel(A=A, B=B, d=d)
    channel = noise.DepolarizingChannel(r=model.logical_rate())
    lam = noise.lambda_from_depolarizing(channel, instance.N, instance.D)
    inputs = bounds.BoundInputs.derive(instance.epsilon, instance.delta, lam)
    qubits = noise.physical_qubits(model, instance.N + 1)
    try:
        m = bounds.sample_bound(inputs)
    except bounds.VacuousBoundError:
        return CostReport(
            algorithm="rfe",
            d=d,
            physical_qubits=qubits,
            cu_calls=math.nan,
            qec_cycles=math.nan,
            feasible=False,
        )
    cu = bounds.runtime_cu(m, inputs.K)
    return CostReport(
        algorithm="rfe",
        d=d,
        physical_qubits=qubits,
        cu_calls=cu,
        qec_cycles=cu * instance.D * d,
        feasible=True,
    )


def compare_sweep(
    instance: ProblemInstance, A: float, B: float, distances: Iterable[int]
) -> list[CostReport]:
    """Side-by-side cost rows for both algorithms over a distance range."""
    rows: list[CostReport] = []
    for d in distances:
        rows.append(rfe_cost_at_distance(instance, A, B, d))
        rows.append(qpe_cost_at_distance(instance, A, B, d))
    return rows
