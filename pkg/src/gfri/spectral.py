"""DFT / DCT-III bases, graph-frequency ordering and spectral downsampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circulant import CirculantGraph, adjacency_matrix, first_row_to_graph
from .errors import PreconditionError

__all__ = [
    "SpectrumInfo",
    "UnitaryBasis",
    "dft_rows",
    "dft_matrix",
    "dct_basis",
    "dct_rows",
    "gft_permutation",
    "spectral_downsample",
    "group_positions",
]

# eigenvalues closer than this are treated as one graph frequency
EIGEN_TIE_TOL = 1e-9


@dataclass(frozen=True)
class SpectrumInfo:
    """Laplacian spectrum of a circulant graph.

    Attributes:
        eigenvalues: ``lambda_k`` in DFT order.
        sigma: ``sigma[i]`` is the DFT position of the ``i``-th smallest
            eigenvalue; ties resolved by ascending DFT position.
        multiplicity_map: distinct eigenvalue -> list of DFT positions.
    """

    eigenvalues: np.ndarray
    sigma: np.ndarray
    multiplicity_map: dict

    @property
    def graph_frequencies(self) -> np.ndarray:
        return self.eigenvalues[self.sigma]


@dataclass(frozen=True)
class UnitaryBasis:
    kind: str
    n: int
    matrix: np.ndarray

    def rows(self, m: int) -> np.ndarray:
        if not 1 <= m <= self.n:
            raise PreconditionError(f"row count {m} outside [1, {self.n}]")
        return self.matrix[:m]

    def __getitem__(self, idx):
        return self.matrix[idx]


def dft_matrix(n: int) -> np.ndarray:
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def dft_rows(n: int, m: int) -> np.ndarray:
    """First ``m`` rows of the unitary DFT matrix (entry ``exp(-i2pi mk/n)/sqrt(n)``)."""
    if not 1 <= m <= n:
        raise PreconditionError(f"row count {m} outside [1, {n}]")
    rows = np.arange(m)
    cols = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(rows, cols) / n) / np.sqrt(n)


def dct_basis(n: int) -> UnitaryBasis:
    """Orthonormal cosine basis ``Q[m, k] = c(m) sqrt(2/n) cos(pi m (k + 1/2) / n)``.

    Its rows diagonalise the Laplacian of the ``n``-vertex path.
    """
    if n < 1:
        raise PreconditionError("dimension must be positive")
    m = np.arange(n)[:, None]
    k = np.arange(n)[None, :]
    q = np.sqrt(2.0 / n) * np.cos(np.pi * m * (k + 0.5) / n)
    q[0] /= np.sqrt(2.0)
    return UnitaryBasis("DCT-III", n, q)


def dct_rows(n: int, m: int) -> np.ndarray:
    return dct_basis(n).rows(m)


def group_positions(values, tol: float = EIGEN_TIE_TOL) -> dict:
    """Group DFT positions by (tolerance-equal) value, keyed by the first value seen."""
    groups: dict = {}
    order = np.argsort(values, kind="stable")
    current_key = None
    for pos in order:
        v = float(values[pos])
        if current_key is None or abs(v - current_key) > tol:
            current_key = v
            groups[current_key] = []
        groups[current_key].append(int(pos))
    return {k: sorted(v) for k, v in groups.items()}


def gft_permutation(g: CirculantGraph) -> SpectrumInfo:
    lam = g.laplacian_representer().eigenvalues(g.n)
    # snap round-off so that tie-breaking by DFT index is deterministic
    snapped = np.round(lam / EIGEN_TIE_TOL) * EIGEN_TIE_TOL
    sigma = np.argsort(snapped, kind="stable")
    return SpectrumInfo(eigenvalues=lam, sigma=sigma, multiplicity_map=group_positions(lam))


def spectral_downsample(g: CirculantGraph, atol: float = 1e-9) -> CirculantGraph:
    """Coarsen to ``n/2`` vertices by subsampling the DFT eigenbasis and spectrum.

    Keeps the first ``n/2`` rows of the unnormalised DFT at even columns and the
    even-indexed adjacency eigenvalues, rebuilds
    ``A' = (2/n) U' diag(lambda_{2j}) U'^H`` densely and reads the generating
    set off its first row.
    """
    n = g.n
    if n % 2:
        raise PreconditionError(f"spectral downsampling needs an even vertex count, got {n}")
    if not 2 * g.bandwidth < n / 2:
        raise PreconditionError(f"bandwidth {g.bandwidth} violates 2B < n/2 for n={n}")
    half = n // 2
    lam = np.fft.fft(adjacency_matrix(g)[0]).real
    rows = np.arange(half)
    uh = np.exp(-2j * np.pi * np.outer(rows, np.arange(0, n, 2)) / n)
    lam_even = lam[0::2]
    a_coarse = (2.0 / n) * (uh.conj().T * lam_even) @ uh
    if np.max(np.abs(a_coarse.imag)) > atol:
        raise ArithmeticError("reconstructed coarse adjacency is not real")
    coarse = first_row_to_graph(a_coarse.real[0], atol=atol)
    # the lemma guarantees the parent's generating set; keep its exact weights
    if coarse.offsets == g.offsets and np.allclose(coarse.weights, g.weights, rtol=0, atol=atol):
        return CirculantGraph(half, g.generators)
    return coarse
