import json
import math

import pytest

from qepzne.calib import synthetic_snapshot, with_edge_error
from qepzne.circuit import GateKind, parse
from qepzne.cli import main, parse_real


def body(text: str) -> str:
    return "".join(line + "\n" for line in text.splitlines() if not line.startswith("#"))


@pytest.fixture
def files(tmp_path):
    calib = tmp_path / "calib.json"
    calib.write_text(synthetic_snapshot(6).dumps())
    circuit = tmp_path / "c.txt"
    assert main(["gen-trotter", "--qubits", "6", "--steps", "3", "--dt", "0.25", "--J", "pi", "--h", "0",
                 "--native", "-o", str(circuit)]) == 0
    return tmp_path, circuit, calib


def test_parse_real():
    assert parse_real("pi") == math.pi
    assert parse_real("-pi/2") == -math.pi / 2
    assert parse_real("2*pi") == 2 * math.pi
    assert parse_real("0.5pi") == 0.5 * math.pi
    assert parse_real("1e-3") == 1e-3


def test_gen_trotter_counts(capsys):
    assert main(["gen-trotter", "--qubits", "8", "--steps", "15", "--dt", "0.1", "--J", "1", "--h", "0.3"]) == 0
    c = parse(capsys.readouterr().out)
    assert c.count(GateKind.RZZ) == 15 * 7
    assert c.count(GateKind.RX) == 15 * 8
    assert c.count(GateKind.MEASURE) == 8


def test_gen_trotter_pi_literal(capsys):
    assert main(["gen-trotter", "--qubits", "2", "--steps", "1", "--dt", "0.25", "--J", "pi", "--h", "0"]) == 0
    c = parse(capsys.readouterr().out)
    assert c.instructions[0].theta == -math.pi / 2


def test_gen_trotter_edge_file(tmp_path, capsys):
    edges = tmp_path / "edges.txt"
    edges.write_text("0 2\n# ring closure\n1 2\n")
    assert main(["gen-trotter", "--qubits", "3", "--steps", "2", "--dt", "0.1", "--J", "1", "--h", "1",
                 "--edges", str(edges)]) == 0
    c = parse(capsys.readouterr().out)
    assert [g.qubits for g in c.instructions[:2]] == [(0, 2), (1, 2)]


@pytest.mark.parametrize(
    "argv",
    [
        ["gen-trotter", "--steps", "1", "--dt", "0.1", "--J", "1", "--h", "1"],
        ["gen-trotter", "--qubits", "2", "--steps", "0", "--dt", "0.1", "--J", "1", "--h", "1"],
        ["gen-trotter", "--qubits", "2", "--steps", "1", "--dt", "x", "--J", "1", "--h", "1"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_1(argv):
    assert main(argv) == 1


def test_factors_usage_errors(files):
    _, circuit, calib = files
    for factors in ("0", "1,2", "0,-1"):
        assert main(["zne", "--circuit", str(circuit), "--calib", str(calib), "--factors", factors]) == 1


def test_input_errors_exit_2(files, capsys):
    tmp, circuit, calib = files
    bad = tmp / "bad.json"
    doc = json.loads(calib.read_text())
    doc["qubits"][0]["t1_us"] = -1
    bad.write_text(json.dumps(doc))
    assert main(["qep", "--circuit", str(circuit), "--calib", str(bad)]) == 2
    assert "qubits[0].t1_us" in capsys.readouterr().err
    broken = tmp / "broken.txt"
    broken.write_text("qubits 2\ncz 0 0\n")
    assert main(["qep", "--circuit", str(broken), "--calib", str(calib)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["qep", "--circuit", str(tmp / "nope.txt"), "--calib", str(calib)]) == 2


def test_non_clifford_on_stabilizer_exit_3(files, capsys):
    tmp, _, calib = files
    c = tmp / "t.txt"
    c.write_text("qubits 2\nrz 0 0.3\nmeasure 0\n")
    assert main(["simulate", "--circuit", str(c), "--calib", str(calib), "--backend", "stab"]) == 3


def test_missing_edge_refused_by_zne(files, capsys):
    tmp, circuit, _ = files
    calib = tmp / "missing.json"
    calib.write_text(with_edge_error(synthetic_snapshot(6), 2, 3, None).dumps())
    assert main(["zne", "--circuit", str(circuit), "--calib", str(calib)]) == 2
    assert "WARN MISSING_GATE_DATA 2-3" in capsys.readouterr().err
    # the QEP report still runs and flags it
    assert main(["qep", "--circuit", str(circuit), "--calib", str(calib)]) == 0
    assert "WARN MISSING_GATE_DATA 2-3" in capsys.readouterr().err


def test_qep_report(files, capsys):
    _, circuit, calib = files
    assert main(["qep", "--circuit", str(circuit), "--calib", str(calib), "--include-measurement"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# qepzne ")
    rows = body(out).splitlines()
    assert rows[0] == "qubit,p_error,t_ns"
    assert len(rows) == 1 + 6 + 2


def test_simulate_report(files, capsys):
    _, circuit, calib = files
    assert main(["simulate", "--circuit", str(circuit), "--calib", str(calib), "--backend", "dm"]) == 0
    out = capsys.readouterr().out
    assert "# backend=dm shots=0 seed=" in out
    assert body(out).splitlines()[0] == "qubit,z_expectation,stderr"


def test_zne_axes_differ(files, capsys):
    _, circuit, calib = files
    intercepts = {}
    for axis in ("qep", "factor"):
        assert main(["zne", "--circuit", str(circuit), "--calib", str(calib), "--axis", axis,
                     "--shots", "2000", "--seed", "4"]) == 0
        rows = dict(line.split(",", 1) for line in body(capsys.readouterr().out).splitlines() if "," in line)
        assert rows["axis"] == axis.upper()
        intercepts[axis] = float(rows["intercept"])
    assert intercepts["qep"] != intercepts["factor"]


def test_synth_calib_loads(tmp_path):
    out = tmp_path / "s.json"
    assert main(["synth-calib", "--qubits", "4", "--scale", "2", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["qubits"][0]["t1_us"] == 50.0
    assert len(doc["edges"]) == 3


def test_sweep_rows(capsys):
    assert main(["sweep", "--qubits", "4", "--steps-from", "1", "--steps-to", "3", "--shots", "1000"]) == 0
    rows = body(capsys.readouterr().out).splitlines()
    assert rows[0] == "steps,raw_mean_qep,m_raw,m_zne_factor,m_zne_qep,m_exact"
    assert [r.split(",")[0] for r in rows[1:]] == ["1", "2", "3"]
    assert all(float(r.split(",")[-1]) == 4.0 for r in rows[1:])


def _one_qubit_calib(tmp_path, error, duration, readout):
    doc = {
        "label": "one",
        "qubits": [{
            "t1_us": 100.0, "t2_us": 100.0, "readout_error": readout, "readout_ns": 1000.0,
            "gates": {"sx": {"error": error, "duration_ns": duration}, "rz": {"error": 0.0, "duration_ns": 0.0}},
        }],
        "edges": [],
    }
    path = tmp_path / f"one-{error}-{readout}.json"
    path.write_text(json.dumps(doc))
    return path


def _p_values(out):
    return [float(r.split(",")[1]) for r in body(out).splitlines()[1:] if r[0].isdigit()]


def test_qep_examples_through_files(tmp_path, capsys):
    circuit = tmp_path / "one.txt"
    circuit.write_text("qubits 1\nsx 0\n")
    calib = _one_qubit_calib(tmp_path, 0.001, 300.0, 0.0)
    assert main(["qep", "--circuit", str(circuit), "--calib", str(calib)]) == 0
    assert _p_values(capsys.readouterr().out) == [pytest.approx(1 - math.exp(-0.006) * 0.999, rel=1e-12)]

    empty = tmp_path / "empty.txt"
    empty.write_text("qubits 1\n")
    calib = _one_qubit_calib(tmp_path, 0.0, 0.0, 0.02)
    assert main(["qep", "--circuit", str(empty), "--calib", str(calib), "--include-measurement"]) == 0
    assert _p_values(capsys.readouterr().out) == [pytest.approx(0.02, rel=1e-12)]

    zero = tmp_path / "zero.json"
    doc = json.loads(synthetic_snapshot(3).dumps())
    for q in doc["qubits"]:
        q["readout_error"] = 0.0
        q["t1_us"] = q["t2_us"] = 1e12
        for g in q["gates"].values():
            g["error"] = 0.0
    for e in doc["edges"]:
        e["cz_error"] = 0.0
    zero.write_text(json.dumps(doc))
    circuit3 = tmp_path / "three.txt"
    circuit3.write_text("qubits 3\nsx 0\ncz 0 1\nsx 2\nmeasure 0\n")
    assert main(["qep", "--circuit", str(circuit3), "--calib", str(zero), "--include-measurement"]) == 0
    assert _p_values(capsys.readouterr().out) == pytest.approx([0.0, 0.0, 0.0], abs=1e-9)
