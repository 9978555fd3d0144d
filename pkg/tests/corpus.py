"""Shared graph corpus for the test suite."""

import numpy as np

from gfri import CirculantGraph
from gfri.circulant import is_bipartite

SMALL_SETS = [(1,), (1, 2), (1, 3), (2, 3), (1, 2, 3), (1, 3, 5), (1, 4)]


def corpus(max_n: int = 64, min_n: int = 4):
    """Deterministic list of circulant graphs with ``min_n <= n <= max_n``."""
    graphs = []
    for n in (4, 6, 8, 10, 12, 16, 20, 24, 32, 48, 64, 128):
        if not min_n <= n <= max_n:
            continue
        for s in SMALL_SETS:
            if 2 * max(s) < n:
                graphs.append(CirculantGraph.unweighted(n, s))
        if n >= 8:
            graphs.append(CirculantGraph(n, [(1, 1.0), (2, 0.5)]))
            graphs.append(CirculantGraph(n, [(1, 2.0), (3, 0.25)]))
    return graphs


def bipartite_corpus(max_n: int = 64):
    return [g for g in corpus(max_n) if is_bipartite(g)]


def random_circulant(rng: np.random.Generator, max_n: int = 64) -> CirculantGraph:
    n = int(rng.choice([n for n in range(6, max_n + 1, 2)]))
    count = int(rng.integers(1, 4))
    offsets = rng.choice(np.arange(1, (n - 1) // 2 + 1), size=min(count, (n - 1) // 2), replace=False)
    return CirculantGraph(n, [(int(s), float(rng.uniform(0.5, 2.0))) for s in sorted(offsets)])


def polynomial_signal(n: int, degree: int) -> np.ndarray:
    t = np.arange(n, dtype=float)
    x = (1.3 + 0.7j) * np.ones(n)
    coeffs = [0.9 - 0.4j, 0.05 + 0.02j, 1e-3 - 2e-3j]
    for d in range(1, degree + 1):
        x = x + coeffs[d - 1] * t**d
    return x
