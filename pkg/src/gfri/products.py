"""Graph products, tensor-factored signals and Kronecker approximations.

Vertex ``(i1, i2)`` of a product graph has index ``i1 * n2 + i2``; signals
factor as ``x = x1 (x) x2`` under this row-stacking convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circulant import (
    CirculantGraph,
    PathGraph,
    adjacency_matrix,
    circulant_from_first_row,
    first_row_to_graph,
)
from .errors import InvalidGraphError, PreconditionError
from .multires import MultilevelPlan, WaveletCoefficients, analyze, synthesize
from .sampling import (
    SparseSignal,
    prony_dct_reconstruct,
    prony_reconstruct,
    sample_dct,
    sample_gft,
)

__all__ = [
    "PRODUCT_KINDS",
    "ProductGraph",
    "TensorSignal",
    "KroneckerApproximation",
    "graph_product",
    "tensor_decompose",
    "multidim_sample_reconstruct",
    "nearest_circulant",
    "nearest_symmetric_circulant",
    "nearest_kronecker_circulant",
    "separable_gwt",
    "inverse_separable_gwt",
]

PRODUCT_KINDS = ("kronecker", "cartesian", "strong", "lexicographic")
RANK_RTOL = 1e-9


def _adjacency(g) -> np.ndarray:
    if isinstance(g, np.ndarray):
        return g
    return adjacency_matrix(g)


@dataclass(frozen=True)
class ProductGraph:
    kind: str
    factors: tuple
    adjacency: np.ndarray

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def shape(self) -> tuple:
        return tuple(_adjacency(f).shape[0] for f in self.factors)

    def laplacian(self) -> np.ndarray:
        return np.diag(self.adjacency.sum(axis=1)) - self.adjacency

    def circulant_labels(self) -> np.ndarray:
        """Relabelling under which a lexicographic product of circulants is circulant.

        Vertex ``v = i1 + n1 * i2`` of the relabelled graph is product vertex
        ``i1 * n2 + i2``; use as ``A[np.ix_(p, p)]``.
        """
        n1, n2 = self.shape
        v = np.arange(n1 * n2)
        return (v % n1) * n2 + v // n1


def graph_product(g1, g2, kind: str) -> ProductGraph:
    """Kronecker, Cartesian, strong or lexicographic product of two graphs."""
    kind = kind.lower()
    a1, a2 = _adjacency(g1), _adjacency(g2)
    i1, i2 = np.eye(a1.shape[0]), np.eye(a2.shape[0])
    if kind == "kronecker":
        a = np.kron(a1, a2)
    elif kind == "cartesian":
        a = np.kron(a1, i2) + np.kron(i1, a2)
    elif kind == "strong":
        a = np.kron(a1, a2) + np.kron(a1, i2) + np.kron(i1, a2)
    elif kind == "lexicographic":
        a = np.kron(a1, np.ones_like(a2)) + np.kron(i1, a2)
    else:
        raise PreconditionError(f"unknown product kind {kind!r}; expected one of {PRODUCT_KINDS}")
    return ProductGraph(kind, (g1, g2), a)


def _canonical_pair(u: np.ndarray, v: np.ndarray):
    """Move scale so that ``u`` has unit norm and a positive real leading entry."""
    norm = np.linalg.norm(u)
    if norm == 0:
        return u, v * 0
    lead = u[np.flatnonzero(np.abs(u) > RANK_RTOL * np.abs(u).max())[0]]
    phase = lead / abs(lead)
    scale = norm * phase
    return u / scale, v * scale


@dataclass(frozen=True)
class TensorSignal:
    """``x = sum_s x_{s,1} (x) x_{s,2}``; ``factors`` holds the pairs."""

    factors: tuple
    n1: int
    n2: int

    def __post_init__(self):
        for a, b in self.factors:
            if np.shape(a) != (self.n1,) or np.shape(b) != (self.n2,):
                raise PreconditionError("factor lengths do not match (n1, n2)")

    @property
    def rank(self) -> int:
        return len(self.factors)

    def reassemble(self) -> np.ndarray:
        out = np.zeros(self.n1 * self.n2, dtype=complex)
        for a, b in self.factors:
            out = out + np.kron(a, b)
        if np.all(np.isreal(out)):
            return out.real
        return out

    @classmethod
    def rank_one(cls, x1, x2) -> "TensorSignal":
        x1, x2 = np.asarray(x1), np.asarray(x2)
        return cls(((x1, x2),), x1.size, x2.size)


def tensor_decompose(x, n1: int, n2: int, rtol: float = RANK_RTOL) -> TensorSignal:
    """Split ``x`` (length ``n1 n2``) into rank-one terms via the SVD of its row-stacked matrix."""
    x = np.asarray(x)
    if x.shape != (n1 * n2,):
        raise PreconditionError(f"signal of shape {x.shape} cannot be split as {n1} x {n2}")
    u, s, vh = np.linalg.svd(x.reshape(n1, n2))
    rank = int(np.count_nonzero(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    factors = []
    for i in range(rank):
        a, b = _canonical_pair(u[:, i], s[i] * vh[i])
        if np.isrealobj(x):
            a, b = a.real, b.real
        factors.append((a, b))
    return TensorSignal(tuple(factors), n1, n2)


def _factor_basis(g) -> str:
    if isinstance(g, PathGraph):
        return "DCT-III"
    if isinstance(g, CirculantGraph):
        return "DFT"
    raise InvalidGraphError("factor graphs must be circulant or path graphs")


def multidim_sample_reconstruct(x: TensorSignal, g1, g2, K1: int, K2: int):
    """Sample a rank-one product signal factorwise and recover it.

    Circulant factors take ``2 K_i`` DFT samples, path factors ``4 K_i``
    DCT-III samples. The joint samples ``y = y1 (x) y2`` are split by a
    rank-one SVD and each factor is recovered with the annihilating filter.

    Returns:
        ``(recovered, y)``: the canonicalised rank-one ``TensorSignal`` and
        the joint sample vector.
    """
    if x.rank != 1:
        raise PreconditionError("multidimensional recovery is defined for rank-one signals")
    if (g1.n, g2.n) != (x.n1, x.n2):
        raise PreconditionError("factor graphs do not match the signal factors")
    bases = (_factor_basis(g1), _factor_basis(g2))
    ks = (K1, K2)
    ms = tuple(4 * k if b == "DCT-III" else 2 * k for b, k in zip(bases, ks))
    if ms[0] > x.n1 or ms[1] > x.n2:
        raise PreconditionError(f"factor sample counts {ms} exceed the factor dimensions")
    x1, x2 = x.factors[0]
    samplers = [sample_dct if b == "DCT-III" else sample_gft for b in bases]
    s1 = samplers[0](x1, ms[0])
    s2 = samplers[1](x2, ms[1])
    y = np.kron(s1.y, s2.y)

    u, s, vh = np.linalg.svd(y.reshape(ms))
    parts = (u[:, 0] * s[0], vh[0])
    recovered = []
    for part, base, k, n in zip(parts, bases, ks, (x.n1, x.n2)):
        samples = type(s1)(part, n, base)
        solver = prony_dct_reconstruct if base == "DCT-III" else prony_reconstruct
        recovered.append(solver(samples, k).dense())
    a, b = _canonical_pair(*recovered)
    return TensorSignal(((a, b),), x.n1, x.n2), y


def nearest_circulant(a: np.ndarray) -> np.ndarray:
    """Frobenius projection onto circulant matrices: average each wrapped diagonal."""
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise PreconditionError("nearest_circulant needs a square matrix")
    idx = np.arange(n)
    row = np.array([a[idx, (idx + i) % n].mean() for i in range(n)])
    return circulant_from_first_row(row)


def nearest_symmetric_circulant(a: np.ndarray, zero_diagonal: bool = True) -> np.ndarray:
    """Projection onto symmetric circulants (optionally with zero diagonal)."""
    row = nearest_circulant(a)[0]
    row = 0.5 * (row + np.roll(row[::-1], 1))
    if zero_diagonal:
        row[0] = 0.0
    return circulant_from_first_row(row)


def _rearrange(a: np.ndarray, n1: int, n2: int) -> np.ndarray:
    """Van Loan rearrangement: ``||A - B (x) C||_F = ||R - vec(B) vec(C)^T||_F``."""
    blocks = a.reshape(n1, n2, n1, n2).transpose(0, 2, 1, 3)
    return blocks.reshape(n1 * n1, n2 * n2)


@dataclass(frozen=True)
class KroneckerApproximation:
    A1: np.ndarray
    A2: np.ndarray
    residual: float
    history: tuple
    iterations: int

    def product(self) -> np.ndarray:
        return np.kron(self.A1, self.A2)

    def graphs(self, atol: float = 1e-9) -> tuple:
        """Factor graphs; the scale exchange is resolved by making ``A1`` unit-norm."""
        return first_row_to_graph(self.A1[0], atol), first_row_to_graph(self.A2[0], atol)


def nearest_kronecker_circulant(a: np.ndarray, n1: int, n2: int, max_iter: int = 500,
                                tol: float = 1e-10) -> KroneckerApproximation:
    """Approximate ``A`` by ``A1 (x) A2`` with symmetric, zero-diagonal circulant factors.

    Starts from the leading singular pair of the rearranged matrix, then
    alternates exact least-squares updates of one factor with the other
    fixed, each followed by projection onto the factor's feasible subspace.
    Since the feasible sets are linear subspaces, every half-step is an exact
    block minimisation and the residual never increases.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (n1 * n2, n1 * n2):
        raise PreconditionError(f"matrix of shape {a.shape} is not ({n1}*{n2}) square")
    r = _rearrange(a, n1, n2)
    u, s, vh = np.linalg.svd(r)
    b = nearest_symmetric_circulant((s[0] * u[:, 0]).reshape(n1, n1))
    c = nearest_symmetric_circulant(vh[0].reshape(n2, n2))

    def residual(b, c):
        return float(np.linalg.norm(r - np.outer(b.ravel(), c.ravel())))

    history = [residual(b, c)]
    it = 0
    for it in range(1, max_iter + 1):
        cn = np.dot(c.ravel(), c.ravel())
        if cn > 0:
            b = nearest_symmetric_circulant((r @ c.ravel() / cn).reshape(n1, n1))
        bn = np.dot(b.ravel(), b.ravel())
        if bn > 0:
            c = nearest_symmetric_circulant((r.T @ b.ravel() / bn).reshape(n2, n2))
        history.append(residual(b, c))
        if abs(history[-2] - history[-1]) <= tol * max(history[-2], 1e-300):
            break
    first = b[0]
    nz = np.flatnonzero(np.abs(first) > 1e-12 * max(np.abs(first).max(), 1e-300))
    scale = np.linalg.norm(b)
    if nz.size and first[nz[0]] < 0:
        scale = -scale
    if scale != 0:
        b, c = b / scale, c * scale
    return KroneckerApproximation(b, c, history[-1], tuple(history), it)


def _factor_transform(v, plan: MultilevelPlan) -> np.ndarray:
    return analyze(v, plan).in_vertex_order()


def separable_gwt(x: TensorSignal, plans) -> TensorSignal:
    """Apply the factor wavelet transforms to each rank-one term (vertex-ordered output)."""
    p1, p2 = plans
    if (p1.n, p2.n) != (x.n1, x.n2):
        raise PreconditionError("plans do not match the signal factor dimensions")
    terms = tuple((_factor_transform(a, p1), _factor_transform(b, p2)) for a, b in x.factors)
    return TensorSignal(terms, x.n1, x.n2)


def inverse_separable_gwt(w: TensorSignal, plans) -> TensorSignal:
    p1, p2 = plans
    if (p1.n, p2.n) != (w.n1, w.n2):
        raise PreconditionError("plans do not match the coefficient factor dimensions")
    terms = tuple(
        (synthesize(WaveletCoefficients.from_vertex_order(a, p1)),
         synthesize(WaveletCoefficients.from_vertex_order(b, p2)))
        for a, b in w.factors
    )
    return TensorSignal(terms, w.n1, w.n2)
