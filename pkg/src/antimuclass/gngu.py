"""Growing neural gas with a utility factor, used to place RBF centers.

Nodes compete for input samples: the winner and its topological neighbors
move toward each sample, edges age and expire, new nodes are inserted near
the highest accumulated error, and nodes whose utility (how much worse the
quantization would be without them) falls far below the maximum error are
removed. Node count is capped so the fitted centers can seed a hidden layer
of a fixed size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GnguParams:
    max_nodes: int = 12
    eps_b: float = 0.05          # winner learning rate
    eps_n: float = 0.006         # neighbor learning rate
    insert_interval: int = 100   # samples between node insertions
    alpha: float = 0.5           # error split on insertion
    decay: float = 0.995         # per-step error/utility decay
    k_utility: float = 1000.0    # removal when max_error > k * min_utility
    max_age: int = 88
    epochs: int = 5

    def validate(self) -> None:
        if self.max_nodes < 2:
            raise ValueError("max_nodes must be >= 2")
        if not (0.0 < self.eps_n < self.eps_b < 1.0):
            raise ValueError("need 0 < eps_n < eps_b < 1")
        if self.insert_interval < 1 or self.max_age < 1 or self.epochs < 1:
            raise ValueError("insert_interval, max_age and epochs must be >= 1")
        if not (0.0 < self.alpha < 1.0) or not (0.0 < self.decay <= 1.0):
            raise ValueError("alpha in (0,1) and decay in (0,1] required")
        if self.k_utility <= 0:
            raise ValueError("k_utility must be positive")


class GrowingGasUtility:
    """Incremental GNG-U state; drive it with :meth:`adapt` per sample."""

    def __init__(self, params: GnguParams, first: np.ndarray, second: np.ndarray):
        params.validate()
        self.params = params
        self.positions: dict[int, np.ndarray] = {
            0: np.array(first, dtype=np.float64),
            1: np.array(second, dtype=np.float64),
        }
        self.errors: dict[int, float] = {0: 0.0, 1: 0.0}
        self.utilities: dict[int, float] = {0: 0.0, 1: 0.0}
        self.edges: dict[int, dict[int, int]] = {0: {}, 1: {}}  # node -> {neighbor: age}
        self._next_id = 2
        self._step = 0

    @property
    def node_count(self) -> int:
        return len(self.positions)

    def node_positions(self) -> np.ndarray:
        ids = sorted(self.positions)
        return np.array([self.positions[i] for i in ids])

    def _two_nearest(self, x: np.ndarray) -> tuple[int, int, float, float]:
        ids = sorted(self.positions)
        pos = np.array([self.positions[i] for i in ids])
        d2 = np.sum((pos - x) ** 2, axis=1)
        order = np.argsort(d2, kind="stable")  # ties resolved by lowest id
        return ids[order[0]], ids[order[1]], float(d2[order[0]]), float(d2[order[1]])

    def _set_edge(self, a: int, b: int, age: int = 0) -> None:
        self.edges[a][b] = age
        self.edges[b][a] = age

    def _remove_node(self, node: int) -> None:
        for other in list(self.edges[node]):
            del self.edges[other][node]
        del self.edges[node]
        del self.positions[node]
        del self.errors[node]
        del self.utilities[node]

    def adapt(self, x: np.ndarray) -> None:
        """Present one sample and apply the full GNG-U update."""
        x = np.asarray(x, dtype=np.float64)
        s1, s2, d1, d2 = self._two_nearest(x)

        self.errors[s1] += d1
        self.utilities[s1] += d2 - d1

        for other in self.edges[s1]:
            self.edges[s1][other] += 1
            self.edges[other][s1] += 1

        self.positions[s1] += self.params.eps_b * (x - self.positions[s1])
        for other in self.edges[s1]:
            self.positions[other] += self.params.eps_n * (x - self.positions[other])

        self._set_edge(s1, s2, 0)
        self._prune_edges()
        self._utility_removal()

        self._step += 1
        if self._step % self.params.insert_interval == 0:
            self._insert_node()

        for i in self.errors:
            self.errors[i] *= self.params.decay
            self.utilities[i] *= self.params.decay

    def _prune_edges(self) -> None:
        for a in sorted(self.edges):
            for b in [b for b, age in self.edges[a].items() if age > self.params.max_age]:
                del self.edges[a][b]
                del self.edges[b][a]
        for node in sorted(self.edges):
            if not self.edges[node] and self.node_count > 2:
                self._remove_node(node)

    def _utility_removal(self) -> None:
        if self.node_count <= 2:
            return
        ids = sorted(self.positions)
        max_error = max(self.errors[i] for i in ids)
        low = min(ids, key=lambda i: (self.utilities[i], i))
        if max_error > self.params.k_utility * self.utilities[low]:
            self._remove_node(low)

    def _insert_node(self) -> None:
        if self.node_count >= self.params.max_nodes:
            return
        ids = sorted(self.positions)
        q = max(ids, key=lambda i: (self.errors[i], -i))
        if not self.edges[q]:
            return
        f = max(sorted(self.edges[q]), key=lambda i: (self.errors[i], -i))
        r = self._next_id
        self._next_id += 1
        self.positions[r] = (self.positions[q] + self.positions[f]) / 2.0
        self.errors[q] *= self.params.alpha
        self.errors[f] *= self.params.alpha
        self.errors[r] = self.errors[q]
        self.utilities[r] = (self.utilities[q] + self.utilities[f]) / 2.0
        self.edges[r] = {}
        del self.edges[q][f]
        del self.edges[f][q]
        self._set_edge(q, r, 0)
        self._set_edge(r, f, 0)


def gngu_fit(
    samples: np.ndarray, params: GnguParams, rng: np.random.Generator
) -> np.ndarray:
    """Fit GNG-U to the samples; returns center positions, 2 <= count <= max_nodes.

    Samples are presented in a fresh shuffled order each epoch, so the result
    is deterministic for a fixed seed and sample order.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=np.float64))
    if samples.shape[0] < 2:
        raise ValueError("need at least 2 samples")
    params.validate()
    first, second = rng.choice(samples.shape[0], size=2, replace=False)
    gas = GrowingGasUtility(params, samples[first], samples[second])
    for _ in range(params.epochs):
        for i in rng.permutation(samples.shape[0]):
            gas.adapt(samples[i])
    return gas.node_positions()


def quantization_error(samples: np.ndarray, centers: np.ndarray) -> float:
    """Mean squared distance from each sample to its nearest center."""
    samples = np.atleast_2d(samples)
    centers = np.atleast_2d(centers)
    d2 = np.sum((samples[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    return float(d2.min(axis=1).mean())
