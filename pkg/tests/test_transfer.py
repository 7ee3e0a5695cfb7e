import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from waveqed.errors import SingularNode
from waveqed.model import NetworkSpec, QubitParams, SegmentParams
from waveqed.transfer import (
    TransferChain,
    build_A,
    build_chain,
    chain_to_json,
    node_matrix,
    phase_matrix,
)


def qubit(gamma):
    return QubitParams(omega10=1.0, Gamma=0.0, g=1.0, gamma_override=gamma)


def test_A_small_cases():
    assert build_A(1).tolist() == [[1, 1], [-1, -1]]
    assert build_A(2).tolist() == [[1] * 4, [-1] * 4, [1] * 4, [-1] * 4]


@pytest.mark.parametrize("M", range(1, 9))
def test_A_squares_to_zero_exactly(M):
    A = build_A(M)
    assert A.dtype.kind == "i"
    assert not (A @ A).any()


def test_A_rejects_empty():
    with pytest.raises(ValueError):
        build_A(0)


def test_node_matrix_unit_gamma():
    # I - A with A = [[1, 1], [-1, -1]]
    np.testing.assert_array_equal(node_matrix(1.0, 1), [[0, -1], [1, 2]])


def test_node_matrix_large_gamma_is_nearly_identity():
    gamma = 1e8 * (1 - 1j)
    T = node_matrix(gamma, 2)
    # every off-identity entry has modulus exactly 1/|gamma|
    assert np.max(np.abs(T - np.eye(4))) <= (1 + 1e-12) / abs(gamma)


@pytest.mark.parametrize("gamma", [0.0, 1e-10, 1e-10j])
def test_node_matrix_singular(gamma):
    with pytest.raises(SingularNode):
        node_matrix(gamma, 1)


def test_matrices_are_read_only():
    T = node_matrix(2.0, 1)
    with pytest.raises(ValueError):
        T[0, 0] = 5


def test_phase_matrix_zero_path_is_identity():
    P = phase_matrix(SegmentParams([0, 0], [0, 0]), 3.7, 2)
    np.testing.assert_array_equal(P, np.eye(4))


def test_phase_matrix_interferometer_layout():
    theta, phi, k = 0.9, 0.35, 2.0
    P = phase_matrix(SegmentParams([theta / k] * 2, [0, phi]), k, 2)
    expected = np.diag(np.exp(1j * np.array([theta, -theta, theta + phi, -(theta + phi)])))
    np.testing.assert_allclose(P, expected, atol=1e-15)


def test_phase_wraps_at_two_pi():
    P = phase_matrix(SegmentParams([math.pi], [0.0]), 2.0, 1)
    np.testing.assert_allclose(P, np.eye(2), atol=1e-15)


@given(
    M=st.integers(1, 4),
    data=st.data(),
    k=st.floats(0.01, 20),
)
def test_phase_matrix_diagonal_and_unitary(M, data, k):
    lengths = data.draw(st.lists(st.floats(0, 100), min_size=M, max_size=M))
    phases = data.draw(st.lists(st.floats(-50, 50), min_size=M, max_size=M))
    P = phase_matrix(SegmentParams(lengths, phases), k, M)
    assert np.count_nonzero(P - np.diag(np.diag(P))) == 0
    assert np.max(np.abs(np.abs(np.diag(P)) - 1)) <= 1e-14
    assert np.max(np.abs(P @ P.conj().T - np.eye(2 * M))) <= 1e-13


def test_chain_single_node():
    net = NetworkSpec(modes=2, k=1.0, qubits=[qubit(0.3 - 0.2j)])
    chain = build_chain(net)
    assert len(chain.factors) == 1
    np.testing.assert_array_equal(chain.product, node_matrix(0.3 - 0.2j, 2))


def test_chain_interferometer_product():
    theta, phi = math.pi / 2, 0.4
    seg = SegmentParams([theta, theta], [0.0, phi])
    net = NetworkSpec(modes=2, k=1.0, qubits=[qubit(1.0)] * 2, segments=[seg])
    chain = build_chain(net)
    IA = np.eye(4) - build_A(2)
    expected = IA @ phase_matrix(seg, 1.0, 2) @ IA
    np.testing.assert_allclose(chain.product, expected, atol=1e-15)
    assert len(chain.factors) == 3


def test_chain_factor_order_right_to_left():
    segs = [SegmentParams([0.3], [0.1]), SegmentParams([1.1], [-0.4])]
    gammas = [0.5 + 1j, 2.0, 0.1 - 0.7j]
    net = NetworkSpec(modes=1, k=1.3, qubits=[qubit(g) for g in gammas], segments=segs)
    chain = build_chain(net)
    # the first qubit acts first, so it is the right-most factor
    np.testing.assert_array_equal(chain.factors[-1], node_matrix(gammas[0], 1))
    np.testing.assert_array_equal(chain.factors[0], node_matrix(gammas[2], 1))
    expected = np.eye(2)
    for f in chain.factors:
        expected = expected @ f
    np.testing.assert_allclose(chain.product, expected, atol=1e-14)


def test_chain_transparent_nodes_leave_pure_propagation():
    segs = [SegmentParams([0.7, 1.9], [0.2, -1.0])] * 3
    net = NetworkSpec(modes=2, k=1.4, qubits=[qubit(1e9j)] * 4, segments=segs)
    P = phase_matrix(segs[0], 1.4, 2)
    np.testing.assert_allclose(build_chain(net).product, P @ P @ P, atol=1e-8)


def test_chain_reports_singular_node_index():
    segs = [SegmentParams([1.0], [0.0])] * 2
    net = NetworkSpec(modes=1, k=1.0, qubits=[qubit(1.0), qubit(0.0), qubit(1.0)], segments=segs)
    with pytest.raises(SingularNode) as exc:
        build_chain(net)
    assert exc.value.node == 2


def test_chain_associativity():
    rng = np.random.default_rng(7)
    M = 3
    factors = []
    for _ in range(4):
        g = complex(rng.uniform(0.1, 3), rng.uniform(-3, 3))
        factors.append(node_matrix(g, M))
        factors.append(phase_matrix(SegmentParams(rng.uniform(0, 3, M), rng.uniform(-3, 3, M)),
                                    1.1, M))
    factors.pop()
    left = TransferChain.from_factors(factors).product
    a = TransferChain.from_factors(factors[:3]).product
    b = TransferChain.from_factors(factors[3:]).product
    assert np.max(np.abs(left - a @ b)) <= 1e-12


def test_chain_json_shape():
    net = NetworkSpec(modes=1, k=1.0, qubits=[qubit(1.0)] * 2,
                      segments=[SegmentParams([1.0], [0.0])])
    d = chain_to_json(build_chain(net))
    assert d["size"] == 2 and len(d["factors"]) == 3
    assert d["factors"][-1] == [[[0.0, 0.0], [-1.0, 0.0]], [[1.0, 0.0], [2.0, 0.0]]]
