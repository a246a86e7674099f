"""Random networks generated from node potentials should give Q = 0 everywhere."""

import argparse
from dataclasses import dataclass

import numpy as np

from netpath import DirectComparison, Status, build_network, laplacian_pinv, q_path


@dataclass(frozen=True)
class Config:
    networks: int = 200
    max_nodes: int = 8
    seed: int = 1


def random_consistent(rng, n):
    labels = [f"T{k}" for k in range(1, n + 1)]
    phi = rng.normal(size=n)
    density = rng.uniform()
    pairs = {(int(rng.integers(0, k)), k) for k in range(1, n)}
    pairs |= {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < density}
    return build_network(
        [DirectComparison(labels[a], labels[b], phi[a] - phi[b], rng.uniform(0.05, 1.0)) for a, b in sorted(pairs)]
    )


def main():
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = Config(**vars(p.parse_args()))
    rng = np.random.default_rng(cfg.seed)
    worst_q = worst_res = 0.0
    multi = 0
    for _ in range(cfg.networks):
        net = random_consistent(rng, int(rng.integers(2, cfg.max_nodes + 1)))
        s = laplacian_pinv(net)
        for i, j in net.pairs():
            report, _ = q_path(net, i, j, system=s)
            worst_q = max(worst_q, report.q)
            worst_res = max(worst_res, report.flow.conservation_residual())
            multi += report.status is Status.OK
    print(f"comparisons with >1 independent path: {multi}")
    print(f"max Q: {worst_q:.3e}")
    print(f"max conservation residual: {worst_res:.3e}")


if __name__ == "__main__":
    main()
