import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circuits import native_circuits, random_native, random_snapshot
from oracles import brute_force_qep
from qepzne.calib import GateCalibration, QubitCalibration, SnapshotProfile, synthetic_snapshot, with_edge_error
from qepzne.circuit import Circuit, TrotterParams, build_trotter_ising, cz, decompose_to_native, measure, rz, sx, x
from qepzne.qep import QepReport, ScheduleError, attributed_gates, mean_qep, qep, schedule


def _trotter(n, steps, dt=0.1, J=1.0, h=0.5):
    return decompose_to_native(build_trotter_ising(TrotterParams.chain(n, steps, dt, J, h)))


# -- schedule ----------------------------------------------------------------


def test_schedule_hand_example():
    c = Circuit(3, (sx(0), sx(0), sx(1), cz(0, 1), sx(2)))
    sched = schedule(c, synthetic_snapshot(3))
    assert sched.busy_ns == (300.0, 300.0, 50.0)
    assert sched.starts[3] == 100.0


def test_schedule_empty_and_single_cz():
    s = synthetic_snapshot(2)
    assert schedule(Circuit(2), s).busy_ns == (0.0, 0.0)
    assert schedule(Circuit(2, (cz(1, 0),)), s).busy_ns == (200.0, 200.0)


def test_measurement_excluded_from_busy_time():
    sched = schedule(Circuit(1, (sx(0), measure(0))), synthetic_snapshot(1))
    assert sched.busy_ns == (50.0,)
    assert sched.final_ns == (1050.0,)


def test_unknown_edge_cannot_be_scheduled():
    with pytest.raises(ScheduleError):
        schedule(Circuit(3, (cz(0, 2),)), synthetic_snapshot(3))


def test_logical_circuit_rejected():
    with pytest.raises(ValueError):
        qep(build_trotter_ising(TrotterParams.chain(2, 1, 0.1, 1.0, 1.0)), synthetic_snapshot(2))


# -- single-qubit arithmetic -------------------------------------------------


def _one_qubit_snapshot(error, duration, t1, t2, readout):
    qc = QubitCalibration(
        t1_us=t1,
        t2_us=t2,
        readout_error=readout,
        readout_ns=1000.0,
        gates={"sx": GateCalibration(error, duration), "rz": GateCalibration(0.0, 0.0), "x": GateCalibration(error, duration)},
    )
    return replace(synthetic_snapshot(1), qubits=(qc,))


def test_single_gate_value():
    s = _one_qubit_snapshot(0.001, 300.0, 100.0, 100.0, 0.0)
    p = qep(Circuit(1, (sx(0),)), s).p[0]
    # 300 ns against T1 = T2 = 100 us gives exp(-0.003) twice
    assert p == pytest.approx(1 - math.exp(-0.006) * 0.999, rel=1e-12)


def test_measurement_only():
    s = _one_qubit_snapshot(0.0, 0.0, 100.0, 100.0, 0.02)
    assert qep(Circuit(1, (measure(0),)), s).p[0] == pytest.approx(0.02, rel=1e-12)
    assert qep(Circuit(1, (measure(0),)), s, include_measurement=False).p[0] == 0.0


def test_no_gates_measurement_only():
    s = _one_qubit_snapshot(0.0, 0.0, 100.0, 100.0, 0.02)
    assert qep(Circuit(1), s).p[0] == pytest.approx(0.02, rel=1e-12)


def test_mean_of_equal_values():
    rep = QepReport(p=(0.125,) * 5, t_ns=(0.0,) * 5, include_measurement=True)
    assert mean_qep(rep) == 0.125
    assert rep.sigma == 0.0


def test_zero_error_device_gives_zero():
    inf = SnapshotProfile(t1=math.inf, t2=math.inf, sq_error=0.0, cz_error=0.0, readout_error=0.0)
    rep = qep(_trotter(6, 4), synthetic_snapshot(6, inf))
    assert rep.p == (0.0,) * 6
    assert rep.mu == 0.0 and rep.sigma == 0.0


# -- attribution -------------------------------------------------------------


def test_attribution_union_rule():
    c = Circuit(3, (sx(0), sx(2), cz(0, 1), sx(1), cz(1, 2)))
    masks = attributed_gates(c)
    as_sets = [{k for k in range(len(c)) if m >> k & 1} for m in masks]
    assert as_sets[0] == {0, 2}
    assert as_sets[1] == as_sets[2] == {0, 1, 2, 3, 4}


def test_missing_edge_makes_lightcone_certain_failure():
    c = Circuit(4, (sx(3), cz(0, 1), sx(1), measure(0), measure(1), measure(3)))
    s = with_edge_error(synthetic_snapshot(4), 0, 1, None)
    rep = qep(c, s)
    assert rep.p[0] == 1.0 and rep.p[1] == 1.0
    assert rep.p[3] < 1.0
    assert any(w.kind.value == "MISSING_GATE_DATA" for w in rep.warnings)


def test_uncoupled_qubits_only_see_their_own_row():
    c = Circuit(3, (sx(0), x(1), sx(2), sx(2), measure(0), measure(1), measure(2)))
    s = synthetic_snapshot(3)
    base = qep(c, s).p
    worse = replace(s, qubits=(s.qubits[0], replace(s.qubits[1], t1_us=1.0, readout_error=0.3), s.qubits[2]))
    p = qep(c, worse).p
    assert p[0] == base[0] and p[2] == base[2] and p[1] > base[1]


# -- aggregates --------------------------------------------------------------


def test_mu_increases_with_depth():
    s = synthetic_snapshot(12)
    mus = [mean_qep(qep(_trotter(12, k), s)) for k in (1, 5, 10, 15)]
    assert all(a < b for a, b in zip(mus, mus[1:]))


def test_sigma_is_population_spread():
    rep = qep(_trotter(5, 3), synthetic_snapshot(5))
    assert rep.sigma == pytest.approx(float(np.std(rep.p)), rel=1e-12)
    assert rep.sigma_sq == pytest.approx(rep.sigma**2, rel=1e-12)


def test_csv_layout():
    rows = qep(_trotter(3, 1), synthetic_snapshot(3)).to_csv().splitlines()
    assert rows[0] == "qubit,p_error,t_ns"
    assert [r.split(",")[0] for r in rows[1:]] == ["0", "1", "2", "mu", "sigma"]


# -- properties --------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(native_circuits(max_qubits=6, max_gates=40), st.integers(0, 2**31), st.booleans())
def test_matches_brute_force_oracle(c, seed, with_meas):
    s = random_snapshot(c.n_qubits, seed)
    got = qep(c, s, include_measurement=with_meas).p
    want = brute_force_qep(c, s, include_measurement=with_meas)
    for a, b in zip(got, want):
        assert a == pytest.approx(b, rel=1e-12, abs=1e-15)


@settings(max_examples=80, deadline=None)
@given(native_circuits(max_qubits=5, max_gates=30), st.integers(0, 2**31), st.integers(0, 4), st.integers(0, 2))
def test_appending_gates_never_lowers_error(c, seed, q, kind):
    c = Circuit(c.n_qubits, c.gates)  # drop measurements so we can append
    q = q % c.n_qubits
    if kind == 2 and c.n_qubits > 1:
        g = cz(q, q + 1) if q + 1 < c.n_qubits else cz(q - 1, q)
    else:
        g = (sx(q), rz(q, 0.4), sx(q))[kind]
    s = random_snapshot(c.n_qubits, seed)
    before = qep(c, s).p
    after = qep(Circuit(c.n_qubits, c.instructions + (g,)), s).p
    assert all(b >= a for a, b in zip(before, after))


def test_commuting_reorder_keeps_errors():
    # gates on disjoint qubits commute and their relative order cannot matter
    s = random_snapshot(4, 7)
    a = Circuit(4, (sx(0), sx(2), cz(0, 1), x(3), cz(2, 3)))
    b = Circuit(4, (x(3), sx(2), cz(2, 3), sx(0), cz(0, 1)))
    assert qep(a, s).p == pytest.approx(qep(b, s).p, rel=1e-15)


def test_values_are_probabilities():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        c = random_native(rng, 6, 200)
        rep = qep(c, random_snapshot(6, seed))
        assert all(0.0 <= p <= 1.0 for p in rep.p)
