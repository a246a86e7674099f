import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netpath import (
    DirectComparison,
    Status,
    build_network,
    enumerate_loops,
    loop_test,
    netpath_matrix,
    q_path,
    q_path_pinv,
    side_split,
)
from netpath.errors import InsufficientPaths, InvalidLoop, NoDirectEvidence, NoIndirectEvidence
from netpath.inconsistency import quadratic_form

from conftest import networks, five_node_network, toy_network


def brute_q(effects, nma, Sigma):
    d = np.asarray(effects, float) - nma
    return float(d @ np.linalg.solve(np.asarray(Sigma, float), d))


def test_brute_force_toy_values():
    assert brute_q([2, 1, 3], 2, np.diag([0.09, 0.18, 0.18])) == pytest.approx(11.11, abs=0.01)
    sigma = [[0.09, 0, 0], [0, 0.18, 0.09], [0, 0.09, 0.27]]
    assert brute_q([0.5, 1.5, 2.5], 1, sigma) == pytest.approx(11.11, abs=0.01)


@pytest.mark.parametrize("pair", [("T_1", "T_3"), ("T_2", "T_3")])
def test_toy_q(toy, pair):
    report, m = q_path(toy, *pair)
    assert report.status is Status.OK
    assert report.q == pytest.approx(100 / 9, abs=1e-9)
    assert report.dof == 2
    assert report.n_independent == 3
    assert 0.003 <= report.p_value <= 0.004
    assert m.m.shape == (3, 3)


def test_q_symmetric_under_swap(toy):
    a, _ = q_path(toy, "T_2", "T_3")
    b, _ = q_path(toy, "T_3", "T_2")
    assert a.q == pytest.approx(b.q, abs=1e-9)


def test_single_path_status():
    net = build_network([DirectComparison("A", "B", 0.4, 0.2)])
    report, m = q_path(net, "A", "B")
    assert report.status is Status.SINGLE_PATH
    assert report.q == 0 and report.dof == 0 and report.p_value is None
    assert m is None


def test_pinv_oracle_toy(toy):
    report, _ = q_path(toy, "T_1", "T_3")
    assert q_path_pinv(report.system, report.nma_effect) == pytest.approx(11.11, abs=0.01)
    sys_ = report.system
    assert q_path_pinv(sys_, 0.0) != 0
    flat = type(sys_)(sys_.paths, sys_.C, sys_.A, sys_.Sigma, np.full(3, 0.7), sys_.numbers)
    assert q_path_pinv(flat, 0.7) == pytest.approx(0.0, abs=1e-20)


def admissible_removals(system):
    """Every set of paths whose removal leaves a full-rank set of maximal size."""
    A = system.A
    P = A.shape[0]
    rank = np.linalg.matrix_rank(A)
    for drop in itertools.combinations(range(P), P - rank):
        keep = [k for k in range(P) if k not in drop]
        if np.linalg.matrix_rank(A[np.ix_(keep, keep)]) == rank:
            yield keep


def q_for_keep(system, keep, nma):
    sub = system.subset(keep)
    return quadratic_form(sub.effects - nma, sub.Sigma)


@given(
    st.lists(st.floats(-3, 3, allow_nan=False), min_size=7, max_size=7),
    st.lists(st.floats(0.2, 2.0, allow_nan=False), min_size=7, max_size=7),
)
@settings(max_examples=60)
def test_q_invariant_to_removed_path(effects, variances):
    net = five_node_network(effects, variances)
    report, _ = q_path(net, "T_1", "T_3")
    qs = [q_for_keep(report.system, keep, report.nma_effect) for keep in admissible_removals(report.system)]
    assert qs
    assert max(qs) - min(qs) <= 1e-8 * max(1.0, max(qs))
    assert report.q == pytest.approx(qs[0], abs=1e-8 * max(1.0, qs[0]))
    assert q_path_pinv(report.system, report.nma_effect) == pytest.approx(report.q, abs=1e-6 * max(1.0, report.q))


@given(networks(min_nodes=3, max_nodes=7))
@settings(max_examples=60)
def test_q_matches_pinv_on_random_networks(net):
    for i, j in net.pairs()[:4]:
        report, _ = q_path(net, i, j)
        assert report.q >= 0
        if report.status is Status.OK:
            oracle = q_path_pinv(report.system, report.nma_effect)
            assert report.q == pytest.approx(oracle, abs=1e-6 * max(1.0, oracle))
            assert report.dof == report.n_independent - 1


@given(networks(min_nodes=2, max_nodes=7, potentials=True))
@settings(max_examples=60)
def test_consistent_network_has_zero_q(net):
    for i, j in net.pairs():
        report, _ = q_path(net, i, j)
        assert report.q <= 1e-8
        assert report.flow.conservation_residual() <= 1e-8


@given(networks(min_nodes=3, max_nodes=6), st.randoms())
@settings(max_examples=30)
def test_q_invariant_under_relabeling(net, rnd):
    labels = list(net.nodes)
    new = [f"X{k}" for k in range(len(labels))]
    rnd.shuffle(new)
    mapping = dict(zip(labels, new))
    relabeled = build_network(
        [DirectComparison(mapping[e.t1], mapping[e.t2], e.effect, e.variance) for e in net.edges]
    )
    i, j = labels[0], labels[-1]
    a, _ = q_path(net, i, j)
    b, _ = q_path(relabeled, mapping[i], mapping[j])
    assert a.q == pytest.approx(b.q, abs=1e-8 * max(1.0, a.q))
    assert a.n_independent == b.n_independent


def test_netpath_toy():
    m = netpath_matrix([2, 1, 3])
    np.testing.assert_array_equal(m.m, [[0, 0.5, 0.5], [0.5, 0, 1], [0.5, 1, 0]])
    m = netpath_matrix([0.5, 1.5, 2.5])
    assert m.m[0, 2] == 1 and m.m[0, 1] == 0.5 and m.m[1, 2] == 0.5


def test_netpath_degenerate():
    m = netpath_matrix([0.3, 0.3, 0.3])
    assert m.degenerate
    np.testing.assert_array_equal(m.m, np.zeros((3, 3)))
    with pytest.raises(InsufficientPaths):
        netpath_matrix([1.0])


@given(st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=12))
def test_netpath_properties(effects):
    m = netpath_matrix(effects)
    np.testing.assert_array_equal(m.m, m.m.T)
    assert np.all(np.diag(m.m) == 0)
    assert m.m.min() >= 0 and m.m.max() <= 1
    if not m.degenerate:
        assert m.m.max() == 1


def test_side_split_toy(toy):
    r = side_split(toy, "T_1", "T_3")
    assert r.omega == pytest.approx(0, abs=1e-12)
    assert r.p_value == pytest.approx(1.0, abs=1e-6)
    r = side_split(toy, "T_2", "T_3")
    # indirect: -0.5 + pooled(2 @ 0.09, 3 @ 0.18) = 11/6, variance 0.09 + 0.06
    assert r.omega == pytest.approx(11 / 6 - 0.5)
    assert r.se == pytest.approx(np.sqrt(0.09 + 0.15))
    assert r.p_value == pytest.approx(0.006, abs=0.001)


def test_side_split_errors(toy):
    with pytest.raises(NoDirectEvidence):
        side_split(toy, "T_2", "T_4")
    tree = build_network([DirectComparison("A", "B", 1, 1), DirectComparison("B", "C", 1, 1)])
    with pytest.raises(NoIndirectEvidence):
        side_split(tree, "A", "B")


def test_loop_tests(toy):
    r = loop_test(toy, ["T_1", "T_2", "T_3"])
    assert r.omega == pytest.approx(1.0)
    assert r.p_value == pytest.approx(0.0543, abs=1e-4)
    r = loop_test(toy, ["T_2", "T_1", "T_4", "T_3"])
    assert r.omega == pytest.approx(2.0)
    assert r.p_value == pytest.approx(0.00086, abs=5e-5)
    with pytest.raises(InvalidLoop):
        loop_test(toy, ["T_1", "T_3"])
    with pytest.raises(InvalidLoop):
        loop_test(toy, ["T_2", "T_4", "T_3"])


def test_enumerate_loops(toy):
    assert enumerate_loops(toy, "T_1", "T_3", 4) == [("T_1", "T_2", "T_3"), ("T_1", "T_4", "T_3")]
    assert enumerate_loops(toy, "T_2", "T_3", 4) == [("T_2", "T_1", "T_3"), ("T_2", "T_1", "T_4", "T_3")]
    assert enumerate_loops(toy, "T_2", "T_3", 3) == [("T_2", "T_1", "T_3")]
    tree = build_network([DirectComparison("A", "B", 1, 1), DirectComparison("B", "C", 1, 1)])
    assert enumerate_loops(tree, "A", "B") == []


def test_masking_case_consistent_with_q():
    toy = toy_network()
    ss = side_split(toy, "T_1", "T_3")
    report, _ = q_path(toy, "T_1", "T_3")
    assert ss.p_value == pytest.approx(1.0)
    assert report.p_value < 0.01
