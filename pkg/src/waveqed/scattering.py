"""Outgoing amplitudes for a driven network.

Two independent routes:

* ``solve_transfer`` cascades the 2M x 2M transfer matrices and imposes the
  boundary conditions on the resulting 2M-unknown system.
* ``solve_direct`` never forms a transfer matrix. It writes the stationary
  equations (field jumps at each qubit plus each qubit's amplitude equation)
  for the plane-wave amplitudes in every region and the qubit amplitudes,
  and solves the whole system at once. It has no 1/gamma and therefore also
  covers gamma = 0.

Output conventions: ``transmitted`` holds the outgoing amplitudes travelling
in the drive direction on the far side of the chain, ``reflected`` those
travelling back out on the near side. For the default left-incident drive
these are the right-movers just after the last qubit and the left-movers just
before the first qubit. All amplitudes are referenced to the qubit positions
at the chain ends.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import transfer
from .errors import IllConditioned, SingularNode
from .model import LEFT, RIGHT, NetworkSpec

COND_MAX = 1e12


@dataclass(frozen=True)
class ScatteringResult:
    transmitted: tuple[complex, ...]
    reflected: tuple[complex, ...]
    incoming_flux: float
    outgoing_flux: float
    method: str
    qubit_amplitudes: tuple[complex, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "transmitted": [[z.real, z.imag] for z in self.transmitted],
            "reflected": [[z.real, z.imag] for z in self.reflected],
            "flux": {"in": self.incoming_flux, "out": self.outgoing_flux},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def outputs(self) -> np.ndarray:
        return np.array(self.transmitted + self.reflected, dtype=complex)


@dataclass(frozen=True)
class FluxReport:
    incoming: float
    outgoing: float
    absorbed: float


def _solve_checked(S: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # unscaled 2-norm condition: for the transfer route it tracks the
    # cancellation already suffered while forming the chain product
    cond = float(np.linalg.cond(S))
    if not np.isfinite(cond) or cond > COND_MAX:
        raise IllConditioned(cond)
    try:
        return np.linalg.solve(S, rhs)
    except np.linalg.LinAlgError:
        raise IllConditioned(float("inf")) from None


def _result(net, transmitted, reflected, method, q=None) -> ScatteringResult:
    transmitted = tuple(complex(z) for z in transmitted)
    reflected = tuple(complex(z) for z in reflected)
    out = sum(abs(z) ** 2 for z in transmitted) + sum(abs(z) ** 2 for z in reflected)
    return ScatteringResult(
        transmitted=transmitted,
        reflected=reflected,
        incoming_flux=abs(net.drive.amplitude) ** 2,
        outgoing_flux=float(out),
        method=method,
        qubit_amplitudes=None if q is None else tuple(complex(z) for z in q),
    )


def solve_transfer(net: NetworkSpec) -> ScatteringResult:
    """Scatter the drive through the cascaded transfer matrix.

    Raises SingularNode when some |gamma| is below the transfer threshold and
    IllConditioned when the boundary system is numerically singular.
    """
    M = net.modes
    P = transfer.build_chain(net).product
    a_idx = np.arange(0, 2 * M, 2)
    b_idx = a_idx + 1
    m0 = net.drive.mode - 1

    a_left = np.zeros(M, dtype=complex)
    b_right = np.zeros(M, dtype=complex)
    if net.drive.direction == RIGHT:
        a_left[m0] = net.drive.amplitude
    else:
        b_right[m0] = net.drive.amplitude

    # X_right = P X_left with unknowns u = [b_left, a_right]
    S = np.zeros((2 * M, 2 * M), dtype=complex)
    S[:, :M] = P[:, b_idx]
    S[a_idx, M + np.arange(M)] = -1.0
    rhs = -P[:, a_idx] @ a_left
    rhs[b_idx] += b_right
    u = _solve_checked(S, rhs)
    b_left, a_right = u[:M], u[M:]

    if net.drive.direction == RIGHT:
        return _result(net, a_right, b_left, "transfer")
    return _result(net, b_left, a_right, "transfer")


def _node_coefficients(net: NetworkSpec) -> list[tuple[float, complex]]:
    """(g, c) per qubit, with c = E - omega10 + i Gamma/2 the complex detuning.

    A qubit given only by gamma is represented with g = 1 and c = i*gamma,
    which reproduces the same gamma = -i c / g**2.
    """
    coeffs = []
    for q in net.qubits:
        if q.gamma_override is not None:
            coeffs.append((1.0, 1j * q.gamma_override))
        else:
            coeffs.append((q.g, complex(net.k - q.omega10, q.Gamma / 2.0)))
    return coeffs


def qubit_positions(net: NetworkSpec) -> np.ndarray:
    """Per-mode coordinate of every qubit, shape (N, M).

    An inserted phase phi in mode m is equivalent to extra optical path phi/k.
    """
    x = np.zeros((net.n_qubits, net.modes))
    for j, seg in enumerate(net.segments):
        x[j + 1] = x[j] + np.asarray(seg.lengths) + np.asarray(seg.extra_phases) / net.k
    return x


def solve_direct(net: NetworkSpec) -> ScatteringResult:
    """Brute-force solve of the stationary equations in region amplitudes.

    Unknowns: plane-wave amplitudes (a~, b~) of every mode in each of the N+1
    regions separated by the qubits, and the N qubit amplitudes q.
    """
    M, N, k = net.modes, net.n_qubits, net.k
    x = qubit_positions(net)
    coeffs = _node_coefficients(net)

    def ia(region, m):
        return region * 2 * M + 2 * m

    def ib(region, m):
        return region * 2 * M + 2 * m + 1

    def iq(j):
        return 2 * M * (N + 1) + j

    n = 2 * M * (N + 1) + N
    S = np.zeros((n, n), dtype=complex)
    rhs = np.zeros(n, dtype=complex)
    row = 0
    for j, (g, c) in enumerate(coeffs):
        # qubit j separates region j (left) from region j+1 (right)
        for m in range(M):
            e = np.exp(1j * k * x[j, m])
            # right-mover jump: g q = i (a~_{j+1} - a~_j) e^{ikx}
            S[row, iq(j)] = g
            S[row, ia(j + 1, m)] = -1j * e
            S[row, ia(j, m)] = 1j * e
            row += 1
            # left-mover jump: g q = -i (b~_{j+1} - b~_j) e^{-ikx}
            S[row, iq(j)] = g
            S[row, ib(j + 1, m)] = 1j / e
            S[row, ib(j, m)] = -1j / e
            row += 1
        # (E - omega10 + i Gamma/2) q = g/2 * sum of fields averaged across the qubit
        S[row, iq(j)] = c
        for m in range(M):
            e = np.exp(1j * k * x[j, m])
            for region in (j, j + 1):
                S[row, ia(region, m)] -= 0.5 * g * e
                S[row, ib(region, m)] -= 0.5 * g / e
        row += 1

    m0 = net.drive.mode - 1
    e_first = np.exp(1j * k * x[0])
    e_last = np.exp(1j * k * x[-1])
    for m in range(M):
        # incoming right-movers on the far left
        S[row, ia(0, m)] = e_first[m]
        if net.drive.direction == RIGHT and m == m0:
            rhs[row] = net.drive.amplitude
        row += 1
        # incoming left-movers on the far right
        S[row, ib(N, m)] = 1.0 / e_last[m]
        if net.drive.direction == LEFT and m == m0:
            rhs[row] = net.drive.amplitude
        row += 1
    assert row == n

    u = _solve_checked(S, rhs)
    a_out = np.array([u[ia(N, m)] * e_last[m] for m in range(M)])
    b_out = np.array([u[ib(0, m)] / e_first[m] for m in range(M)])
    q = u[iq(0): iq(0) + N]

    if net.drive.direction == RIGHT:
        return _result(net, a_out, b_out, "direct", q)
    return _result(net, b_out, a_out, "direct", q)


def solve(net: NetworkSpec, method: str = "auto") -> ScatteringResult:
    """Dispatch on ``method``: 'transfer', 'direct', or 'auto' (transfer,
    falling back to direct when a node is singular or the cascaded system is
    ill-conditioned)."""
    if method == "transfer":
        return solve_transfer(net)
    if method == "direct":
        return solve_direct(net)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    try:
        return solve_transfer(net)
    except (SingularNode, IllConditioned):
        return solve_direct(net)


def flux_report(r: ScatteringResult) -> FluxReport:
    return FluxReport(
        incoming=r.incoming_flux,
        outgoing=r.outgoing_flux,
        absorbed=r.incoming_flux - r.outgoing_flux,
    )
