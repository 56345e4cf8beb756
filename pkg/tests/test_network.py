import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import metropolis_dense
from ppnash.network import (NetworkError, Network, complete_graph, cycle_graph, from_weight_matrix,
                            lift_weight_matrix, metropolis_weights, path_graph, random_connected_graph,
                            read_edge_list, spectral_report, star_graph)


def test_path_graph_weights_and_sigma():
    net = path_graph(3)
    assert np.allclose(net.W, [[2 / 3, 1 / 3, 0], [1 / 3, 1 / 3, 1 / 3], [0, 1 / 3, 2 / 3]])
    assert net.sigma == pytest.approx(2 / 3)


def test_complete_two_nodes():
    net = complete_graph(2)
    assert np.allclose(net.W, 0.5) and net.sigma == pytest.approx(0, abs=1e-15)


def test_single_node_is_degenerate():
    net = metropolis_weights([], 1)
    assert np.array_equal(net.W, [[1.0]]) and net.sigma == 0.0 and net.degenerate


def test_disconnected_graph_lists_components():
    with pytest.raises(NetworkError, match=r"\{1, 2\}; \{3, 4\}"):
        metropolis_weights([(0, 1), (2, 3)], 4)


@pytest.mark.parametrize("W, msg", [
    ([[0.6, 0.5], [0.4, 0.5]], "symmetric"),
    ([[0.0, 1.0], [1.0, 0.0]], "self-loop"),
    ([[0.7, 0.7], [0.7, 0.7]], "doubly stochastic"),
])
def test_invalid_weights_rejected(W, msg):
    with pytest.raises(NetworkError, match=msg):
        from_weight_matrix(np.array(W))


def test_lift_identity_and_n1():
    assert np.array_equal(lift_weight_matrix(np.eye(2), 2).toarray(), np.eye(4))
    W = complete_graph(2).W
    assert np.array_equal(lift_weight_matrix(W, 1).toarray(), W)


def test_lift_matvec_hand_value():
    Wl = lift_weight_matrix(complete_graph(2), 2)
    v = np.array([1.0, 0, 0, 1])
    assert np.allclose(Wl.matvec(v), 0.5)
    assert np.allclose(Wl.toarray() @ v, Wl.matvec(v))


@pytest.mark.parametrize("net, eig", [
    (complete_graph(2), [1, 0]),
    (path_graph(3), [1, 2 / 3, 0]),
    (cycle_graph(3), [1, 0, 0]),
])
def test_spectra(net, eig):
    rep = spectral_report(net)
    assert np.allclose(rep["eigenvalues"], eig, atol=1e-12)
    assert rep["lambda_min_I_plus_W"] == pytest.approx(1.0 + eig[-1])


def test_cycle3_sigma_zero():
    net = cycle_graph(3)
    assert np.allclose(net.W, 1 / 3) and net.sigma == pytest.approx(0, abs=1e-12)


def test_edge_list_parsing(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# triangle\n1 2\n2 3  # comment\n\n3 1\n")
    edges, N = read_edge_list(p)
    assert N == 3 and sorted(edges) == [(0, 1), (1, 2), (2, 0)]
    p.write_text("1 2\n2 x\n")
    with pytest.raises(NetworkError, match="line 2"):
        read_edge_list(p)


def test_weight_csv_roundtrip(tmp_path):
    net = star_graph(4)
    net.to_csv(tmp_path / "w.csv")
    W = np.loadtxt(tmp_path / "w.csv", delimiter=",")
    assert np.array_equal(W, net.W)


@given(st.integers(1, 12), st.floats(0, 1), st.integers(0, 2**16))
def test_metropolis_properties(N, p, seed):
    net = random_connected_graph(N, p, seed)
    W = net.W
    assert np.allclose(W, W.T) and np.allclose(W.sum(axis=1), 1) and np.all(np.diag(W) > 0)
    assert np.allclose(W, metropolis_dense(N, net.edges), atol=1e-15)
    eig = np.linalg.eigvalsh(W)
    assert eig.min() > -1 and eig.max() == pytest.approx(1)
    assert 0 <= net.sigma < 1 + 1e-12
    if N > 1:
        assert net.sigma < 1
    for i in range(N):
        assert set(net.neighbors(i)) == {j for e in net.edges for j in e if i in e and j != i}
