import numpy as np
import pytest
from hypothesis import strategies as st

from netpath import DirectComparison, build_network

TOY_EDGES = [
    ("T_1", "T_3", 2.0),
    ("T_1", "T_2", 0.5),
    ("T_2", "T_3", 0.5),
    ("T_1", "T_4", 1.5),
    ("T_4", "T_3", 1.5),
]

# oriented as the arcs of the T_1 vs T_3 flow
FIVE_NODE_EDGES = [
    ("T_1", "T_2"),
    ("T_2", "T_3"),
    ("T_2", "T_4"),
    ("T_4", "T_3"),
    ("T_1", "T_5"),
    ("T_5", "T_2"),
    ("T_5", "T_4"),
]

FIVE_NODE_PATHS = [
    ("T_1", "T_2", "T_3"),
    ("T_1", "T_2", "T_4", "T_3"),
    ("T_1", "T_5", "T_2", "T_3"),
    ("T_1", "T_5", "T_2", "T_4", "T_3"),
    ("T_1", "T_5", "T_4", "T_3"),
]


def toy_network(variance=0.09):
    return build_network([DirectComparison(a, b, e, variance) for a, b, e in TOY_EDGES])


def five_node_network(effects=None, variances=None):
    effects = [0.0] * 7 if effects is None else effects
    variances = [1.0] * 7 if variances is None else variances
    return build_network(
        [DirectComparison(a, b, float(e), float(v)) for (a, b), e, v in zip(FIVE_NODE_EDGES, effects, variances)]
    )


@pytest.fixture
def toy():
    return toy_network()


@pytest.fixture
def five_node():
    return five_node_network([1.2, 2.6, 0.4, 1.9, -0.3, 1.1, 2.2])


def random_network(rng, n_nodes, extra_prob=0.5, potentials=False):
    """Random connected network: a random spanning tree plus extra edges."""
    labels = [f"T{k}" for k in range(1, n_nodes + 1)]
    pairs = set()
    for k in range(1, n_nodes):
        pairs.add((int(rng.integers(0, k)), k))
    for a in range(n_nodes):
        for b in range(a + 1, n_nodes):
            if rng.random() < extra_prob:
                pairs.add((a, b))
    phi = rng.normal(size=n_nodes)
    comps = []
    for a, b in sorted(pairs):
        if rng.random() < 0.5:
            a, b = b, a
        effect = phi[a] - phi[b] if potentials else rng.normal()
        comps.append(DirectComparison(labels[a], labels[b], float(effect), float(rng.uniform(0.05, 1.0))))
    return build_network(comps)


@st.composite
def networks(draw, min_nodes=2, max_nodes=7, potentials=False):
    n = draw(st.integers(min_nodes, max_nodes))
    seed = draw(st.integers(0, 2**32 - 1))
    density = draw(st.sampled_from([0.0, 0.3, 0.6, 1.0]))
    return random_network(np.random.default_rng(seed), n, density, potentials)


# -- acceptance reporting ----------------------------------------------------

def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")
    config._acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
        item.config._acceptance.append((marker.args[0], marker.args[1], status))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance", [])
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, title, status in sorted(results, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {number:>2}  {status:<4}  {title}")
