"""Transfer matrices for the qubit chain.

State vectors have length 2M with right- and left-movers interleaved per mode:
``X = [a_1, b_1, a_2, b_2, ..., a_M, b_M]`` (0-based index 2m is a_{m+1}).
A node maps the amplitudes just left of a qubit to those just right of it; a
phase matrix carries them along a segment to the next qubit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularNode
from .model import NetworkSpec, SegmentParams, compute_gamma

GAMMA_MIN = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def build_A(M: int) -> np.ndarray:
    """Integer 2M x 2M coupling matrix: every entry of row l is (-1)**l (0-based).

    Every column is the same alternating vector (1, -1, 1, ...), whose
    components sum to zero, so A @ A vanishes identically.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    signs = np.where(np.arange(2 * M) % 2 == 0, 1, -1)
    return _frozen(np.repeat(signs[:, None], 2 * M, axis=1))


def node_matrix(gamma: complex, M: int) -> np.ndarray:
    """Scattering across one qubit: I - A / gamma."""
    gamma = complex(gamma)
    if abs(gamma) <= GAMMA_MIN:
        raise SingularNode(gamma)
    return _frozen(np.eye(2 * M, dtype=complex) - build_A(M) / gamma)


def phase_matrix(seg: SegmentParams, k: float, M: int) -> np.ndarray:
    """Diagonal propagator over a segment.

    Right-movers in mode m pick up exp(+i(k L_m + phi_m)), left-movers the
    conjugate phase.
    """
    seg.check_modes(M)
    theta = k * np.asarray(seg.lengths) + np.asarray(seg.extra_phases)
    diag = np.empty(2 * M, dtype=complex)
    diag[0::2] = np.exp(1j * theta)
    diag[1::2] = np.exp(-1j * theta)
    return _frozen(np.diag(diag))


@dataclass(frozen=True)
class TransferChain:
    """Factors stored in application order reversed, i.e. the product reads
    ``factors[0] @ factors[1] @ ... @ factors[-1]`` and factors[-1] (the
    first qubit) acts first."""

    factors: tuple[np.ndarray, ...]
    product: np.ndarray

    @classmethod
    def from_factors(cls, factors) -> "TransferChain":
        factors = tuple(factors)
        product = factors[-1].copy()
        for f in reversed(factors[:-1]):
            product = f @ product
        return cls(factors=factors, product=_frozen(product))

    @property
    def size(self) -> int:
        return self.product.shape[0]


def node_gammas(net: NetworkSpec) -> list[complex]:
    return [compute_gamma(q, net.k) for q in net.qubits]


def build_chain(net: NetworkSpec) -> TransferChain:
    """Product node_N . Phi_{N-1,N} . ... . Phi_{1,2} . node_1 for a network."""
    M = net.modes
    applied = []
    for j, gamma in enumerate(node_gammas(net)):
        if j > 0:
            applied.append(phase_matrix(net.segments[j - 1], net.k, M))
        try:
            applied.append(node_matrix(gamma, M))
        except SingularNode as e:
            raise SingularNode(e.gamma, node=j + 1) from None
    return TransferChain.from_factors(reversed(applied))


def matrix_to_json(a: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a, dtype=complex)]


def chain_to_json(chain: TransferChain) -> dict:
    return {
        "size": chain.size,
        "factors": [matrix_to_json(f) for f in chain.factors],
        "product": matrix_to_json(chain.product),
    }
