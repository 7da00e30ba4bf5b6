import math

import pytest

from rfe_lab import bounds, noise, resources
from rfe_lab.resources import ProblemInstance

INSTANCE = ProblemInstance(N=100, D=1000, epsilon=1e-3, delta=1e-2)
A, B = 0.5, 1.6


def test_instance_validation():
    with pytest.raises(ValueError):
        ProblemInstance(N=0, D=1, epsilon=0.1, delta=0.1)
    with pytest.raises(ValueError):
        ProblemInstance(N=1, D=0, epsilon=0.1, delta=0.1)
    with pytest.raises(ValueError):
        ProblemInstance(N=1, D=1, epsilon=0.0, delta=0.1)
    with pytest.raises(ValueError):
        ProblemInstance(N=1, D=1, epsilon=0.1, delta=1.0)


@pytest.mark.parametrize(
    "epsilon, delta, expected",
    [
        (0.5, 0.5, 3),
        (1e-3, 1e-2, 17),
        (1.0, 0.999999, 1),
    ],
)
def test_qpe_ancillas(epsilon, delta, expected):
    assert resources.qpe_ancillas(epsilon, delta) == expected


def test_qpe_cu_calls_values():
    assert resources.qpe_cu_calls(1e-3, 1e-2) == pytest.approx(100_500.0, rel=1e-15)
    # The delta -> 1 limit of (1/eps)(1/delta + 1/2) is 3/2.
    assert resources.qpe_cu_calls(1.0, 0.9999999) == pytest.approx(1.5, rel=1e-6)
    with pytest.raises(ValueError):
        resources.qpe_cu_calls(1.0, 1.0)


def test_qpe_register_size_brackets_call_count():
    # The ancilla count is the ceiling form of log2 of the call count, so
    # the register capacity 2^n lands within [cu, 4*cu).
    for epsilon in (0.5, 0.1, 1e-2, 1e-3, 7e-4):
        for delta in (0.5, 0.1, 1e-2, 3e-3):
            n = resources.qpe_ancillas(epsilon, delta)
            cu = resources.qpe_cu_calls(epsilon, delta)
            assert cu <= 2**n < 4.0 * cu


def test_qpe_min_distance_worked_instance():
    assert resources.qpe_min_distance(INSTANCE, A, B) == 17
    raw = math.log(A * 100 * 1000 * 1.01 / (1e-3 * 1e-4)) / B
    assert raw == pytest.approx(16.8424, abs=1e-4)


def test_qpe_min_distance_parameter_collapse():
    # N = D = 1, epsilon = 1, delta -> 1 collapses the argument to 2A.
    inst = ProblemInstance(N=1, D=1, epsilon=1.0, delta=1.0 - 1e-9)
    # Pairs chosen so ln(2A)/B is safely off an integer; at an exact
    # integer the delta perturbation would tip the ceiling.
    for a, b in ((3.0, 0.7), (2.0, 1.6), (10.0, 0.25)):
        assert resources.qpe_min_distance(inst, a, b) == math.ceil(math.log(2.0 * a) / b)
    with pytest.raises(ValueError):
        resources.qpe_min_distance(inst, 0.0, 1.0)


def test_qpe_cost_report_fields():
    report = resources.qpe_cost_at_distance(INSTANCE, A, B, 17)
    assert report.algorithm == "qpe"
    assert report.physical_qubits == 67_626  # 2 * 17^2 * (100 + 17)
    assert report.cu_calls == pytest.approx(100_500.0, rel=1e-15)
    assert report.qec_cycles == pytest.approx(1_708_500_000.0, rel=1e-15)
    assert report.feasible
    assert not resources.qpe_cost_at_distance(INSTANCE, A, B, 16).feasible


def test_rfe_cost_matches_manual_chain():
    d = 12
    rate = noise.logical_rate(A, B, d)
    lam = noise.lambda_from_depolarizing(noise.DepolarizingChannel(r=rate), 100, 1000)
    inputs = bounds.BoundInputs.derive(1e-3, 1e-2, lam)
    cu = bounds.runtime_cu(bounds.sample_bound(inputs), inputs.K)
    report = resources.rfe_cost_at_distance(INSTANCE, A, B, d)
    assert report.algorithm == "rfe"
    assert report.physical_qubits == 2 * d * d * 101
    assert report.cu_calls == pytest.approx(cu, rel=1e-15)
    assert report.qec_cycles == pytest.approx(cu * 1000 * d, rel=1e-15)
    assert report.feasible


def test_rfe_cost_vacuous_distance_keeps_row():
    report = resources.rfe_cost_at_distance(INSTANCE, A, B, 4)
    assert not report.feasible
    assert report.physical_qubits == 3232
    assert math.isnan(report.cu_calls) and math.isnan(report.qec_cycles)


def test_rfe_cost_golden_values():
    d5 = resources.rfe_cost_at_distance(INSTANCE, A, B, 5)
    assert d5.feasible
    assert d5.physical_qubits == 5050
    assert d5.qec_cycles == pytest.approx(1.7363237971717855e31, rel=1e-12)
    assert resources.rfe_cost_at_distance(INSTANCE, A, B, 9).physical_qubits == 16_362
    d14 = resources.rfe_cost_at_distance(INSTANCE, A, B, 14)
    assert d14.qec_cycles == pytest.approx(85_874_322_177_000.0, rel=1e-12)
    d17 = resources.rfe_cost_at_distance(INSTANCE, A, B, 17)
    assert d17.physical_qubits == 58_378
    assert d17.qec_cycles == pytest.approx(96_728_916_343_500.0, rel=1e-12)


def test_rfe_minimal_feasible_qubits_beat_qpe_floor():
    # Scan downward: the smallest feasible distance needs an order of
    # magnitude fewer physical qubits than QPE's 64,800-qubit floor.
    feasible = [
        d for d in range(3, 18) if resources.rfe_cost_at_distance(INSTANCE, A, B, d).feasible
    ]
    d_min = min(feasible)
    assert d_min == 5
    qubits = resources.rfe_cost_at_distance(INSTANCE, A, B, d_min).physical_qubits
    assert qubits <= 64_800 / 10


def test_rfe_deep_distance_cycle_ratio():
    # Once lam is negligible the shot budget freezes, so consecutive
    # cycle counts scale as d/(d-1).
    r30 = resources.rfe_cost_at_distance(INSTANCE, A, B, 30).qec_cycles
    r29 = resources.rfe_cost_at_distance(INSTANCE, A, B, 29).qec_cycles
    assert r30 / r29 == pytest.approx(30.0 / 29.0, rel=1e-12)


def test_rfe_curve_kink_at_depth_switch():
    """The log-cycle curve flattens while K = 2, then bends down again.

    The discrete second difference is positive on the K = 2 side and
    flips sign across the step where the derived depth first exceeds 2.
    """
    switch = None
    for d in range(5, 18):
        rate = noise.logical_rate(A, B, d)
        lam = noise.lambda_from_depolarizing(noise.DepolarizingChannel(r=rate), 100, 1000)
        if bounds.BoundInputs.derive(1e-3, 1e-2, lam).K > 2:
            switch = d
            break
    assert switch == 9
    log_cycles = {
        d: math.log10(resources.rfe_cost_at_distance(INSTANCE, A, B, d).qec_cycles)
        for d in range(5, 12)
    }
    slope = {d: log_cycles[d + 1] - log_cycles[d] for d in range(5, 11)}
    for d in range(5, switch - 1):
        assert slope[d + 1] > slope[d]  # flattening within K = 2
    assert slope[switch] < slope[switch - 1]  # kink at the switch


def test_compare_sweep_layout_and_ordering():
    rows = resources.compare_sweep(INSTANCE, A, B, range(3, 31))
    assert len(rows) == 2 * 28
    assert [r.algorithm for r in rows[:4]] == ["rfe", "qpe", "rfe", "qpe"]
    by_alg = {"rfe": {}, "qpe": {}}
    for row in rows:
        by_alg[row.algorithm][row.d] = row
    # Below the QPE minimum there are distances where only the
    # randomized estimator is feasible.
    assert any(
        by_alg["rfe"][d].feasible and not by_alg["qpe"][d].feasible for d in range(3, 17)
    )
    at_min = 17
    assert by_alg["qpe"][at_min].feasible and by_alg["rfe"][at_min].feasible
    assert by_alg["rfe"][at_min].qec_cycles > by_alg["qpe"][at_min].qec_cycles
    qpe_cycles = [by_alg["qpe"][d].qec_cycles for d in range(at_min, 31)]
    assert all(a < b for a, b in zip(qpe_cycles, qpe_cycles[1:]))
    cu = {row.cu_calls for row in rows if row.algorithm == "qpe"}
    assert len(cu) == 1  # call count does not depend on distance


def test_qpe_feasibility_matches_error_budget_chain():
    # Re-derive feasibility from the raw budget inequality
    # N*D*rate <= epsilon*delta^2/(1+delta) and check the flip point.
    budget = 1e-3 * 1e-4 / 1.01
    for d in range(3, 31):
        violates = 100 * 1000 * noise.logical_rate(A, B, d) > budget
        assert violates == (d < 17)
