"""Self-checks run by ``waveqed verify``.

Each check returns its worst deviation against a tolerance. An exception
inside a check counts as a failure and is reported, never propagated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .interferometer import (
    DENOM_MIN,
    InterferometerPoint,
    abs_t1,
    denominator,
    periodicity_check,
    verify_against_engine,
)
from .model import DriveSpec, NetworkSpec, QubitParams, SegmentParams
from .scattering import solve_direct, solve_transfer

GRIDS = {
    # networks per random check, (phi, theta, gamma) grid, periodicity gammas
    "coarse": {"networks": 50, "cf_grid": (8, 8, 3), "periodicity": 2},
    "fine": {"networks": 200, "cf_grid": (20, 20, 5), "periodicity": 5},
}


def random_gamma(rng: np.random.Generator, lossless: bool = False) -> complex:
    im = rng.uniform(-3.0, 3.0)
    if lossless:
        # keep |gamma| well clear of the transfer threshold
        im = math.copysign(max(abs(im), 0.1), im)
        return complex(0.0, im)
    return complex(rng.uniform(0.1, 3.0), im)


def random_network(
    rng: np.random.Generator,
    lossless: bool = False,
    max_qubits: int = 5,
    max_modes: int = 3,
) -> NetworkSpec:
    """Random chain; half the qubits are given by gamma, half physically."""
    N = int(rng.integers(1, max_qubits + 1))
    M = int(rng.integers(1, max_modes + 1))
    k = float(rng.uniform(0.5, 2.0))
    qubits = []
    for _ in range(N):
        if rng.random() < 0.5:
            qubits.append(QubitParams(omega10=k, Gamma=0.0, g=1.0,
                                      gamma_override=random_gamma(rng, lossless)))
        else:
            g = float(rng.uniform(0.5, 1.5))
            gamma = random_gamma(rng, lossless)
            # invert gamma = Gamma/(2g^2) - i(k - omega10)/g^2 for omega10 >= 0
            omega10 = max(k + gamma.imag * g * g, 0.0)
            qubits.append(QubitParams(omega10=omega10, Gamma=2 * g * g * gamma.real, g=g))
    segments = [
        SegmentParams(
            lengths=rng.uniform(0.0, 3.0, M).tolist(),
            extra_phases=rng.uniform(-math.pi, math.pi, M).tolist(),
        )
        for _ in range(N - 1)
    ]
    amp = complex(rng.normal(), rng.normal())
    drive = DriveSpec(
        mode=int(rng.integers(1, M + 1)),
        direction="right" if rng.random() < 0.5 else "left",
        amplitude=amp if abs(amp) > 1e-3 else 1.0,
    )
    return NetworkSpec(modes=M, k=k, qubits=qubits, segments=segments, drive=drive)


def single_qubit(gamma: complex, direction: str = "right") -> NetworkSpec:
    q = QubitParams(omega10=1.0, Gamma=0.0, g=1.0, gamma_override=gamma)
    return NetworkSpec(modes=1, k=1.0, qubits=(q,), drive=DriveSpec(direction=direction))


def closed_form_grid(n_phi: int, n_theta: int, n_gamma: int):
    """Interferometer points for the engine comparison, skipping near-singular ones."""
    phis = np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False) + 0.1
    thetas = np.linspace(0.0, math.pi, n_theta, endpoint=False) + 0.05
    gammas = [complex(0.2 + 0.5 * i, 1.5 - 0.8 * i) for i in range(n_gamma)]
    for g in gammas:
        for th in thetas:
            for ph in phis:
                if abs(denominator(th, ph, g)) > 1e3 * DENOM_MIN:
                    yield InterferometerPoint(float(th), float(ph), g)


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_dev: float
    tol: float
    passed: bool
    note: str = ""


def _check(name: str, tol: float, fn) -> CheckResult:
    try:
        dev = float(fn())
    except Exception as e:  # a crash is a failed check, reported by type
        return CheckResult(name, math.inf, tol, False, type(e).__name__)
    return CheckResult(name, dev, tol, bool(dev <= tol))


def check_single_emitter() -> float:
    """t = gamma/(1+gamma), r = -1/(1+gamma) via the transfer path, and the
    gamma = 0 limit (t = 0, r = -1) via the direct path."""
    dev = 0.0
    for gamma in (1.0, 0.5 - 0.5j, 2.0 + 3.0j, -0.7j, 0.01, 100.0):
        r = solve_transfer(single_qubit(gamma))
        dev = max(dev, abs(r.transmitted[0] - gamma / (1 + gamma)),
                  abs(r.reflected[0] + 1 / (1 + gamma)))
    r = solve_direct(single_qubit(0.0))
    return max(dev, abs(r.transmitted[0]), abs(r.reflected[0] + 1))


def check_oracle(rng, n: int) -> float:
    dev = 0.0
    for _ in range(n):
        net = random_network(rng)
        a, b = solve_transfer(net), solve_direct(net)
        dev = max(dev, float(np.max(np.abs(a.outputs() - b.outputs()))))
    return dev


def check_flux_conservation(rng, n: int) -> float:
    dev = 0.0
    for _ in range(n):
        r = solve_transfer(random_network(rng, lossless=True))
        dev = max(dev, abs(r.outgoing_flux - r.incoming_flux))
    return dev


def check_passivity(rng, n: int) -> float:
    """Largest flux gain (out - in) seen, floored at zero."""
    worst = -math.inf
    for _ in range(n):
        r = solve_transfer(random_network(rng))
        worst = max(worst, r.outgoing_flux - r.incoming_flux)
    return max(worst, 0.0)


def check_closed_form(grid) -> float:
    return max(verify_against_engine(p).max_abs_diff for p in closed_form_grid(*grid))


def check_periodicity(rng, n_gammas: int) -> float:
    dev = 0.0
    for _ in range(n_gammas):
        rep = periodicity_check(random_gamma(rng))
        if rep.points == 0:
            return math.inf
        dev = max(dev, rep.max_phi_dev, rep.max_theta_dev)
    return dev


def check_large_detuning() -> float:
    """|t1| at gamma = 1 - i d must rise with d on [5, 100] and exceed 0.95 at
    d = 100. Returns the shortfall (0 when both hold)."""
    ds = np.logspace(math.log10(5.0), 2.0, 40)
    vals = np.array([abs_t1(math.pi / 2, 0.0, complex(1.0, -d)) for d in ds])
    drop = float(np.max(np.maximum(-np.diff(vals), 0.0)))
    return drop + max(0.95 - vals[-1], 0.0)


def run_verify(grid: str = "coarse", seed: int = 42) -> list[CheckResult]:
    cfg = GRIDS[grid]
    rng = np.random.default_rng(seed)
    n = cfg["networks"]
    return [
        _check("single_emitter", 1e-12, check_single_emitter),
        _check("oracle_equivalence", 1e-10, lambda: check_oracle(rng, n)),
        _check("flux_conservation", 1e-12, lambda: check_flux_conservation(rng, n)),
        _check("passivity", 1e-10, lambda: check_passivity(rng, n)),
        _check("closed_form_agreement", 1e-10, lambda: check_closed_form(cfg["cf_grid"])),
        _check("periodicity", 1e-10, lambda: check_periodicity(rng, cfg["periodicity"])),
        _check("large_detuning", 0.0, check_large_detuning),
    ]


def format_report(results: list[CheckResult]) -> str:
    lines = [f"{'check':<24}{'max_dev':>12}{'tol':>10}  result"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        note = f"  ({r.note})" if r.note else ""
        lines.append(f"{r.name:<24}{r.max_dev:>12.3e}{r.tol:>10.0e}  {status}{note}")
    ok = all(r.passed for r in results)
    lines.append(f"overall: {'PASS' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n"
