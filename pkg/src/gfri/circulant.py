"""Circulant and path graphs, their matrix operators and Laurent representers.

All matrices are dense ``numpy`` arrays. Circulant operators are described by
a symmetric Laurent polynomial ``l(z) = l_0 + sum_i l_i (z^i + z^-i)``; the
first row of the ``n x n`` matrix is obtained by folding the taps modulo ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import InvalidGraphError

__all__ = [
    "CirculantGraph",
    "PathGraph",
    "RepresenterPolynomial",
    "GraphSignal",
    "adjacency_matrix",
    "laplacian",
    "degree",
    "exponential_degree",
    "e_graph_laplacian",
    "is_bipartite",
    "apply_circulant_filter",
    "circulant_from_first_row",
    "border_indices",
    "is_circulant",
    "first_row_to_graph",
]


@dataclass(frozen=True)
class CirculantGraph:
    """Undirected circulant graph on ``n`` vertices.

    ``generators`` holds ``(s, weight)`` pairs: vertex ``i`` is joined to
    ``(i +- s) mod n`` with the given weight. An offset ``s = n/2`` pairs a
    vertex with a single antipode and therefore adds its weight only once to
    the degree.
    """

    n: int
    generators: tuple[tuple[int, float], ...]

    def __init__(self, n: int, generators: Iterable):
        gens = []
        for g in generators:
            if isinstance(g, (tuple, list)):
                s, w = g
            else:
                s, w = g, 1.0
            gens.append((int(s), float(w)))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "generators", tuple(gens))
        self._validate()

    def _validate(self):
        if self.n < 1:
            raise InvalidGraphError(f"vertex count must be positive, got {self.n}")
        if not self.generators:
            raise InvalidGraphError("a circulant graph needs at least one generator")
        offsets = [s for s, _ in self.generators]
        if any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise InvalidGraphError(f"generator offsets must be strictly increasing: {offsets}")
        for s, w in self.generators:
            if not 0 < s <= self.n / 2:
                raise InvalidGraphError(f"offset {s} outside (0, n/2] for n={self.n}")
            if not w > 0 or not np.isfinite(w):
                raise InvalidGraphError(f"weight for offset {s} must be positive, got {w}")

    @classmethod
    def cycle(cls, n: int) -> "CirculantGraph":
        return cls(n, [(1, 1.0)])

    @classmethod
    def unweighted(cls, n: int, offsets: Sequence[int]) -> "CirculantGraph":
        return cls(n, [(s, 1.0) for s in offsets])

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.generators)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for _, w in self.generators)

    @property
    def bandwidth(self) -> int:
        return max(self.offsets)

    @property
    def degree(self) -> float:
        return sum(w if 2 * s == self.n else 2 * w for s, w in self.generators)

    def adjacency_representer(self) -> "RepresenterPolynomial":
        coeffs = np.zeros(self.bandwidth + 1)
        for s, w in self.generators:
            # z^{n/2} and z^{-n/2} fold onto the same column
            coeffs[s] = w / 2 if 2 * s == self.n else w
        return RepresenterPolynomial(coeffs)

    def laplacian_representer(self) -> "RepresenterPolynomial":
        a = self.adjacency_representer()
        coeffs = -a.coeffs
        coeffs[0] = self.degree
        return RepresenterPolynomial(coeffs)

    def to_dict(self) -> dict:
        return {"n": self.n, "generators": [[s, w] for s, w in self.generators]}


@dataclass(frozen=True)
class PathGraph:
    """Unweighted path on ``n`` vertices (a cycle without the wrap-around edge)."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidGraphError(f"vertex count must be positive, got {self.n}")

    def to_dict(self) -> dict:
        return {"type": "path", "n": self.n}


@dataclass(frozen=True)
class GraphSignal:
    values: np.ndarray
    graph: object = field(default=None, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values)
        object.__setattr__(self, "values", values)
        if self.graph is not None and values.shape != (self.graph.n,):
            raise InvalidGraphError(
                f"signal of length {values.shape} does not live on a graph with {self.graph.n} vertices"
            )

    def __len__(self):
        return len(self.values)


class RepresenterPolynomial:
    """Symmetric Laurent polynomial ``l_0 + sum_{i=1}^{B} l_i (z^i + z^-i)``.

    Args:
        coeffs: ``(l_0, l_1, ..., l_B)``. Trailing zeros are trimmed.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-D sequence")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        self.coeffs = c

    @classmethod
    def from_taps(cls, taps, atol: float = 1e-12) -> "RepresenterPolynomial":
        """Build from a centred tap vector of odd length ``2B+1``."""
        taps = np.asarray(taps, dtype=float)
        if taps.size % 2 != 1:
            raise ValueError("tap vector must have odd length")
        if not np.allclose(taps, taps[::-1], rtol=0, atol=atol * max(1.0, np.abs(taps).max())):
            raise ValueError("taps are not symmetric")
        b = taps.size // 2
        return cls(0.5 * (taps[b:] + taps[b::-1]))

    @classmethod
    def constant(cls, value: float) -> "RepresenterPolynomial":
        return cls([value])

    @property
    def bandwidth(self) -> int:
        return self.coeffs.size - 1

    def taps(self) -> np.ndarray:
        """Centred coefficients of ``z^{-B} .. z^{B}``."""
        return np.concatenate([self.coeffs[:0:-1], self.coeffs])

    def _wrap(self, other):
        if isinstance(other, RepresenterPolynomial):
            return other
        return RepresenterPolynomial([float(other)])

    def __add__(self, other):
        other = self._wrap(other)
        m = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(m)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return RepresenterPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return RepresenterPolynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, RepresenterPolynomial):
            return RepresenterPolynomial(self.coeffs * float(other))
        return RepresenterPolynomial.from_taps(np.convolve(self.taps(), other.taps()))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return RepresenterPolynomial(self.coeffs / float(scalar))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not Laurent polynomials here")
        out = RepresenterPolynomial([1.0])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.coeffs[0], dtype=complex)
        for i in range(1, self.coeffs.size):
            out = out + self.coeffs[i] * (z**i + z ** (-i))
        return out

    def reflect(self) -> "RepresenterPolynomial":
        """The polynomial ``l(-z)``."""
        signs = (-1.0) ** np.arange(self.coeffs.size)
        return RepresenterPolynomial(self.coeffs * signs)

    def allclose(self, other, atol: float = 1e-12) -> bool:
        d = (self - other).coeffs
        return bool(np.max(np.abs(d)) <= atol)

    def first_row(self, n: int) -> np.ndarray:
        """First row of the ``n x n`` circulant matrix (taps folded mod ``n``)."""
        row = np.zeros(n)
        row[0] += self.coeffs[0]
        for i in range(1, self.coeffs.size):
            row[i % n] += self.coeffs[i]
            row[(-i) % n] += self.coeffs[i]
        return row

    def matrix(self, n: int) -> np.ndarray:
        return circulant_from_first_row(self.first_row(n))

    def eigenvalues(self, n: int) -> np.ndarray:
        """Eigenvalues in DFT order: ``l(exp(-i 2 pi k / n))`` for ``k = 0..n-1``."""
        k = np.arange(n)
        i = np.arange(1, self.coeffs.size)
        cos = np.cos(2 * np.pi * np.outer(k, i) / n)
        return self.coeffs[0] + 2 * cos @ self.coeffs[1:]

    def roots(self) -> np.ndarray:
        """Roots of ``z^B l(z)`` via companion-matrix eigenvalues."""
        if self.bandwidth == 0:
            return np.zeros(0, dtype=complex)
        return np.roots(self.taps()).astype(complex)

    def __repr__(self):
        return f"RepresenterPolynomial({np.array2string(self.coeffs, precision=6)})"


def circulant_from_first_row(row) -> np.ndarray:
    """Circulant matrix ``C[i, j] = row[(j - i) mod n]``."""
    row = np.asarray(row)
    return scipy.linalg.circulant(row).T


def adjacency_matrix(g) -> np.ndarray:
    if isinstance(g, PathGraph):
        off = np.ones(g.n - 1)
        return np.diag(off, 1) + np.diag(off, -1)
    return g.adjacency_representer().matrix(g.n)


def degree(g) -> np.ndarray:
    """Per-vertex degree vector."""
    return adjacency_matrix(g).sum(axis=1)


def laplacian(g) -> np.ndarray:
    a = adjacency_matrix(g)
    return np.diag(a.sum(axis=1)) - a


def exponential_degree(g: CirculantGraph, alpha: float) -> float:
    """Exponential degree ``sum_s 2 d_s cos(alpha s)`` (an ``n/2`` offset counts once)."""
    total = 0.0
    for s, w in g.generators:
        mult = 1.0 if 2 * s == g.n else 2.0
        total += mult * w * np.cos(alpha * s)
    return float(total)


def e_graph_laplacian(g: CirculantGraph, alpha: float) -> np.ndarray:
    return exponential_degree(g, alpha) * np.eye(g.n) - adjacency_matrix(g)


def is_bipartite(g: CirculantGraph) -> bool:
    return g.n % 2 == 0 and all(s % 2 == 1 for s in g.offsets)


def apply_circulant_filter(coeffs, x) -> np.ndarray:
    """Cyclic convolution of ``x`` with a symmetric filter.

    ``coeffs`` is a :class:`RepresenterPolynomial` or its ``(l_0, .., l_B)``
    coefficient list; ``x`` an array or :class:`GraphSignal`.
    """
    if not isinstance(coeffs, RepresenterPolynomial):
        coeffs = RepresenterPolynomial(coeffs)
    values = x.values if isinstance(x, GraphSignal) else np.asarray(x)
    if values.ndim != 1:
        raise InvalidGraphError("signal must be one-dimensional")
    n = values.size
    if coeffs.coeffs.size > n:
        raise InvalidGraphError(f"filter with {coeffs.coeffs.size} coefficients exceeds signal length {n}")
    row = coeffs.first_row(n)
    out = np.fft.ifft(np.fft.fft(row) * np.fft.fft(values))
    if np.isrealobj(values):
        out = out.real
    return out


def border_indices(n: int, bandwidth: int, breakpoints: Sequence[int] = (0,)) -> np.ndarray:
    """Vertices whose ``bandwidth``-neighbourhood straddles a piece boundary.

    A boundary at ``t`` separates vertex ``t-1`` from ``t`` (``t = 0`` is the
    wrap-around between ``n-1`` and ``0``). Returns the sorted union of
    ``{t - bandwidth, .., t + bandwidth - 1} mod n`` over all breakpoints.
    """
    if bandwidth <= 0:
        return np.zeros(0, dtype=int)
    idx = set()
    for t in breakpoints:
        for i in range(t - bandwidth, t + bandwidth):
            idx.add(i % n)
    return np.array(sorted(idx), dtype=int)


def is_circulant(m: np.ndarray, atol: float = 1e-9) -> bool:
    """Row-shift test: every row equals the first row cyclically shifted."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    row = m[0]
    return all(np.max(np.abs(np.roll(row, i) - m[i]), initial=0.0) <= atol for i in range(m.shape[0]))


def first_row_to_graph(row, atol: float = 1e-9) -> CirculantGraph:
    """Read the generating set off the first row of a symmetric circulant adjacency."""
    row = np.asarray(row, dtype=float)
    n = row.size
    gens = []
    for s in range(1, n // 2 + 1):
        w = row[s]
        if abs(w) > atol:
            if abs(w - row[(-s) % n]) > atol:
                raise InvalidGraphError("first row is not symmetric")
            gens.append((s, float(w)))
    return CirculantGraph(n, gens)
