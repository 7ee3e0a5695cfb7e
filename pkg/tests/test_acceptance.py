"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run alone with ``pytest tests/test_acceptance.py -v``; a per-criterion
PASS/FAIL table is printed at the end of the session.
"""

import math
import time

import numpy as np
import pytest

from waveqed import cli, transfer
from waveqed.interferometer import (
    InterferometerPoint,
    abs_t1,
    closed_form,
    interferometer_network,
    periodicity_check,
)
from waveqed.model import SegmentParams
from waveqed.scattering import solve_direct, solve_transfer
from waveqed.errors import SingularNode
from waveqed.verify import check_closed_form, random_gamma, random_network, single_qubit


def test_criterion_01_golden_point():
    p = InterferometerPoint(math.pi / 2, 0.0, 1.0)
    out = closed_form(p)
    engine = solve_transfer(interferometer_network(p))
    expected = {"t1": 7j / 13, "t2": 6j / 13, "r1": -4 / 13, "r2": -4 / 13}
    got = {"t1": out.t1, "t2": out.t2, "r1": out.r1, "r2": out.r2}
    devs = {k: abs(got[k] - v) for k, v in expected.items()}
    print(f"criterion 1: closed form {got}, engine {engine.outputs()}, deviations {devs}")
    assert out.flux == pytest.approx(9 / 13, abs=1e-12)
    assert engine.outgoing_flux == pytest.approx(9 / 13, abs=1e-12)
    bad = [k for k, d in devs.items() if d >= 1e-12]
    assert not bad, f"outputs off the expected golden values: {bad}"


def _engine_grid_dev():
    return check_closed_form((20, 20, 5))


def test_criterion_02_engine_closed_form():
    dev = _engine_grid_dev()
    print(f"criterion 2: max deviation {dev:.3e}")
    assert dev < 1e-10


def test_criterion_03_oracle_equivalence():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(200):
        net = random_network(rng, max_qubits=5, max_modes=3)
        assert net.n_qubits <= 5 and net.modes <= 3
        worst = max(worst, np.max(np.abs(solve_transfer(net).outputs() - solve_direct(net).outputs())))
    print(f"criterion 3: max deviation {worst:.3e}")
    assert worst < 1e-10


def test_criterion_04_flux():
    rng = np.random.default_rng(4)
    cons = 0.0
    for _ in range(100):
        net = random_network(rng, lossless=True)
        assert all(q.Gamma == 0 for q in net.qubits)
        r = solve_transfer(net)
        cons = max(cons, abs(r.outgoing_flux - r.incoming_flux))
    gain = -math.inf
    for _ in range(100):
        r = solve_transfer(random_network(rng))
        gain = max(gain, r.outgoing_flux - r.incoming_flux)
    print(f"criterion 4: lossless |dflux| {cons:.3e}, lossy max gain {gain:.3e}")
    assert cons < 1e-12
    assert gain <= 1e-10


def _single_emitter_ok():
    r0 = solve_direct(single_qubit(0.0))
    r1 = solve_transfer(single_qubit(1.0))
    big = [solve_transfer(single_qubit(100 * np.exp(1j * a))) for a in np.linspace(-1.5, 1.5, 7)]
    return (
        r0.transmitted[0] == 0
        and r0.reflected[0] == -1
        and abs(abs(r1.transmitted[0]) ** 2 - 0.25) < 1e-12
        and abs(abs(r1.reflected[0]) ** 2 - 0.25) < 1e-12
        and all(abs(r.transmitted[0]) > 0.98 for r in big)
    )


def test_criterion_05_single_emitter():
    ok = _single_emitter_ok()
    print(f"criterion 5: {'ok' if ok else 'violated'}")
    assert ok


def test_criterion_06_periodicity():
    rng = np.random.default_rng(6)
    for _ in range(5):
        g = random_gamma(rng)
        rep = periodicity_check(g, n=32, tol=1e-10)
        print(f"criterion 6: gamma={g:.3f} points={rep.points} "
              f"dphi={rep.max_phi_dev:.2e} dtheta={rep.max_theta_dev:.2e}")
        assert rep.points > 0.9 * 32 * 32
        assert rep.phi_period_ok and rep.theta_period_ok


def test_criterion_07_large_detuning():
    ds = np.linspace(5.0, 100.0, 400)
    vals = np.array([abs_t1(math.pi / 2, 0.0, complex(1.0, -d)) for d in ds])
    end = abs_t1(math.pi / 2, 0.0, 1 - 100j)
    print(f"criterion 7: |t1|(1-100i) = {end:.6f}")
    assert end > 0.95
    assert np.all(np.diff(vals) > 0)


def test_criterion_08_matrix_identities():
    for M in range(1, 9):
        A = transfer.build_A(M)
        assert not np.any(A @ A)
        rng = np.random.default_rng(M)
        for _ in range(5):
            seg = SegmentParams(list(rng.uniform(0, 20, M)), list(rng.uniform(-10, 10, M)))
            P = transfer.phase_matrix(seg, float(rng.uniform(0.1, 5)), M)
            assert np.max(np.abs(P.conj().T @ P - np.eye(2 * M))) < 1e-13
    print("criterion 8: A^2 = 0 and phase matrices unitary for M = 1..8")


MAPS = [
    ["sweep", "--gamma", "1,0", "--axis1", "phi:0:12.566370614359172:101",
     "--axis2", "theta:0:6.283185307179586:101"],
    ["sweep", "--theta", "1.5707963267948966", "--phi", "0",
     "--axis1", "re_gamma:0:5:101", "--axis2", "im_gamma:-5:5:101"],
]


def _run_maps(tmp_path, tag):
    outs = []
    for i, argv in enumerate(MAPS):
        path = tmp_path / f"map{i}_{tag}.csv"
        assert cli.main(argv + ["--out", str(path)]) == 0
        outs.append(path.read_bytes())
    return outs


def test_criterion_09_sweep_maps(tmp_path, monkeypatch):
    monkeypatch.setenv("WAVEQED_WORKERS", "1")
    t0 = time.perf_counter()
    first = _run_maps(tmp_path, "a")
    elapsed = time.perf_counter() - t0
    again = _run_maps(tmp_path, "b")
    monkeypatch.setenv("WAVEQED_WORKERS", "4")
    parallel = _run_maps(tmp_path, "c")
    print(f"criterion 9: both maps in {elapsed:.2f} s")
    for data in first:
        assert data.count(b"\n") == 101 * 101 + 1
    assert first == again == parallel
    assert elapsed < 5.0


def test_criterion_10_sign_discriminator(monkeypatch, capsys):
    def flipped(gamma, M):
        if abs(gamma) <= transfer.GAMMA_MIN:
            raise SingularNode(gamma)
        return np.eye(2 * M, dtype=complex) + transfer.build_A(M) / gamma

    monkeypatch.setattr(transfer, "node_matrix", flipped)
    try:
        dev2 = _engine_grid_dev()
    except Exception:
        dev2 = math.inf
    try:
        ok5 = _single_emitter_ok()
    except Exception:
        ok5 = False
    code = cli.main(["verify"])
    report = capsys.readouterr().out
    print(f"criterion 10: grid deviation {dev2:.3e}, single emitter ok={ok5}, verify exit {code}")
    print(report)
    assert not dev2 < 1e-10
    assert not ok5
    assert code == 4
