"""Graph coarsening: Kron reduction, spectral reduction and reconnection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .circulant import CirculantGraph, first_row_to_graph, is_circulant, laplacian
from .errors import InvalidGraphError, PreconditionError
from .spectral import spectral_downsample

__all__ = [
    "CoarseningResult",
    "SCHEMES",
    "kron_reduce",
    "kron_coarsen",
    "spectral_reduce",
    "same_generating_set_coarsen",
    "coarsen",
]

SCHEMES = ("same-generating-set", "kron", "spectral")


@dataclass(frozen=True)
class CoarseningResult:
    scheme: str
    kept: tuple
    graph: Optional[CirculantGraph] = None
    laplacian: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return len(self.kept)


def kron_reduce(L: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Schur complement of ``L`` onto the vertex set ``keep``."""
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    if L.ndim != 2 or L.shape != (n, n):
        raise InvalidGraphError("Laplacian must be square")
    keep = np.array(sorted(set(int(v) for v in keep)), dtype=int)
    if keep.size == 0 or keep[0] < 0 or keep[-1] >= n:
        raise PreconditionError("kept vertex set must be non-empty and within range")
    drop = np.setdiff1d(np.arange(n), keep)
    if drop.size == 0:
        return L.copy()
    l_kk = L[np.ix_(keep, keep)]
    l_kd = L[np.ix_(keep, drop)]
    l_dd = L[np.ix_(drop, drop)]
    s = np.linalg.svd(l_dd, compute_uv=False)
    if s[-1] <= 1e-12 * max(s[0], 1.0):
        raise PreconditionError("complement block of the Laplacian is singular")
    reduced = l_kk - l_kd @ np.linalg.solve(l_dd, l_kd.T)
    return 0.5 * (reduced + reduced.T)


def kron_coarsen(g: CirculantGraph, atol: float = 1e-9) -> CirculantGraph:
    """Kron-reduce a circulant graph onto its even vertices and read off the new generators."""
    if g.n % 2:
        raise PreconditionError(f"Kron coarsening on even vertices needs an even vertex count, got {g.n}")
    reduced = kron_reduce(laplacian(g), range(0, g.n, 2))
    if not is_circulant(reduced, atol=atol):
        raise PreconditionError("Kron-reduced Laplacian is not circulant")
    row = -reduced[0].copy()
    row[0] = 0.0
    row[np.abs(row) <= atol] = 0.0
    if np.any(row < 0):
        raise PreconditionError("Kron-reduced graph has negative edge weights")
    return first_row_to_graph(row, atol=atol)


def spectral_reduce(g: CirculantGraph, levels: int) -> CirculantGraph:
    """Apply spectral downsampling ``levels`` times."""
    if levels < 0:
        raise PreconditionError("number of levels must be non-negative")
    out = g
    for j in range(levels):
        try:
            out = spectral_downsample(out)
        except PreconditionError as exc:
            raise PreconditionError(f"level {j}: {exc}") from None
    return out


def same_generating_set_coarsen(g: CirculantGraph) -> CirculantGraph:
    """Half-size circulant graph with the generating set and weights of ``g``."""
    if g.n % 2:
        raise PreconditionError(f"coarsening needs an even vertex count, got {g.n}")
    if not 2 * g.bandwidth < g.n / 2:
        raise PreconditionError(f"bandwidth {g.bandwidth} violates 2B < n/2 for n={g.n}")
    return CirculantGraph(g.n // 2, g.generators)


def coarsen(g: CirculantGraph, scheme: str = "spectral") -> CoarseningResult:
    kept = tuple(range(0, g.n, 2))
    if scheme == "same-generating-set":
        coarse = same_generating_set_coarsen(g)
    elif scheme == "spectral":
        coarse = spectral_reduce(g, 1)
    elif scheme == "kron":
        reduced = kron_reduce(laplacian(g), kept)
        coarse = kron_coarsen(g) if is_circulant(reduced) else None
        return CoarseningResult(scheme, kept, coarse, reduced)
    else:
        raise PreconditionError(f"unknown coarsening scheme {scheme!r}")
    return CoarseningResult(scheme, kept, coarse, laplacian(coarse))
