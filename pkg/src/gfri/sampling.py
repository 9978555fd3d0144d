"""Sampling sparse graph signals in the graph spectral domain and recovering them.

A ``K``-sparse signal on a circulant graph is determined by its first ``2K``
DFT coefficients (``4K`` DCT-III coefficients on a path). Recovery uses the
annihilating filter: the nullspace of a Toeplitz matrix built from the samples
gives a polynomial whose roots encode the support.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .circulant import CirculantGraph, is_bipartite
from .coarsening import SCHEMES, kron_coarsen, same_generating_set_coarsen, spectral_reduce
from .errors import BezoutError, InvertibilityError, ModelMismatchError, PreconditionError
from .filterbanks import build_hcgeswt, build_hgeswt
from .spectral import dct_basis, dft_rows

__all__ = [
    "SpectralSamples",
    "SparseSignal",
    "GftFactorization",
    "sample_gft",
    "sample_dct",
    "prony_reconstruct",
    "prony_dct_reconstruct",
    "annihilating_filter",
    "toeplitz_rank",
    "max_levels",
    "factorize_gft",
    "sample_via_pipeline",
]

RANK_RTOL = 1e-6
MODULUS_TOL = 1e-6
GRID_TOL = 1e-4
CERTIFY_RTOL = 1e-9
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class SpectralSamples:
    """``y`` = first ``M`` rows of a unitary basis applied to a signal."""

    y: np.ndarray
    n: int
    basis: str = "DFT"

    @property
    def M(self) -> int:
        return self.y.size


@dataclass(frozen=True)
class SparseSignal:
    n: int
    support: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=int).reshape(-1)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if support.size != amps.size:
            raise PreconditionError("support and amplitudes differ in length")
        if support.size > self.n:
            raise PreconditionError("more support locations than vertices")
        if support.size and (support.min() < 0 or support.max() >= self.n):
            raise PreconditionError("support location out of range")
        order = np.argsort(support)
        support, amps = support[order], amps[order]
        if np.any(np.diff(support) == 0):
            raise PreconditionError("support locations must be distinct")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def K(self) -> int:
        return self.support.size

    def dense(self) -> np.ndarray:
        x = np.zeros(self.n, dtype=complex)
        x[self.support] = self.amplitudes
        return x

    @classmethod
    def from_dense(cls, x, atol: float = 0.0) -> "SparseSignal":
        x = np.asarray(x)
        support = np.flatnonzero(np.abs(x) > atol)
        return cls(x.size, support, x[support])

    @classmethod
    def random(cls, n: int, K: int, rng: np.random.Generator) -> "SparseSignal":
        support = np.sort(rng.choice(n, size=K, replace=False))
        amps = rng.standard_normal(K) + 1j * rng.standard_normal(K)
        return cls(n, support, amps)


def _dense(x, n: Optional[int] = None) -> np.ndarray:
    if isinstance(x, SparseSignal):
        return x.dense()
    x = np.asarray(x)
    if x.ndim != 1 or (n is not None and x.size != n):
        raise PreconditionError("signal must be a 1-D vector of the ambient dimension")
    return x


def sample_gft(x, M: int) -> SpectralSamples:
    v = _dense(x)
    return SpectralSamples(dft_rows(v.size, M) @ v, v.size, "DFT")


def sample_dct(x, M: int) -> SpectralSamples:
    v = _dense(x)
    return SpectralSamples(dct_basis(v.size).rows(M) @ v, v.size, "DCT-III")


def toeplitz_rank(y: np.ndarray, K: int, rank_rtol: float = RANK_RTOL) -> tuple:
    """Numerical rank and singular values of the order-``K`` Toeplitz matrix."""
    t = _toeplitz(np.asarray(y, dtype=complex), K)
    s = np.linalg.svd(t, compute_uv=False)
    rank = int(np.count_nonzero(s > rank_rtol * s[0])) if s[0] > 0 else 0
    return min(rank, K), s


def _toeplitz(y: np.ndarray, K: int) -> np.ndarray:
    if K < 1 or y.size < 2 * K:
        raise PreconditionError(f"need M >= 2K samples (M={y.size}, K={K})")
    return scipy.linalg.toeplitz(y[K:], y[K::-1])


def annihilating_filter(y: np.ndarray, K: int, forward_backward: bool = False) -> np.ndarray:
    """Annihilating filter ``h`` of order ``K`` (``h[0] = 1``).

    The Toeplitz matrix ``T[i, j] = y[K + i - j]`` (rows ``i = 0..M-K-1``)
    has a one-dimensional nullspace when ``y`` holds exactly ``K`` distinct
    exponentials ``u_k^m``; ``P(x) = sum_j h_j x^{K-j}`` vanishes at every ``u_k``.

    With ``forward_backward`` the Toeplitz matrix of the conjugated, reversed
    samples is stacked underneath. For unit-modulus ``u_k`` that sequence is
    a sum of the same exponentials, so the nullspace is unchanged while the
    system is far better conditioned.
    """
    y = np.asarray(y, dtype=complex)
    t = _toeplitz(y, K)
    if forward_backward:
        t = np.vstack([t, _toeplitz(np.conj(y[::-1]), K)])
    _, _, vh = np.linalg.svd(t)
    h = vh[-1].conj()
    return h / h[0] if abs(h[0]) > 0 else h


def _certify(n, support, rows, y):
    """Least-squares amplitudes on ``support``; ``None`` unless they explain ``y``."""
    if support.size == 0 or np.unique(support).size != support.size:
        return None
    amps, *_ = np.linalg.lstsq(rows[:, support], y, rcond=None)
    resid = np.max(np.abs(rows[:, support] @ amps - y), initial=0.0)
    if resid > CERTIFY_RTOL * max(1.0, np.max(np.abs(y))):
        return None
    return SparseSignal(n, support, amps)


def _snap(positions: np.ndarray, n: int, period: float) -> np.ndarray:
    nearest = np.round(positions)
    err = np.abs(positions - nearest) / period
    if np.any(err > GRID_TOL):
        raise ModelMismatchError(f"root phases miss the vertex grid by up to {err.max():.2e} cycles")
    return nearest.astype(int) % n


def _grid_search(h, nodes, rows, y, K):
    """Pick the support from ``|P|`` on the vertex grid.

    ``nodes[c]`` holds the exponential(s) that vertex ``c`` contributes. The
    ``K`` best-scoring vertices are tried first; failing that, ``K + r``
    candidates are pruned one at a time (smallest fitted amplitude first).
    Every answer is certified by its residual.
    """
    n = nodes.shape[0]
    score = np.abs(np.polyval(h, nodes)).sum(axis=1)
    order = np.argsort(score, kind="stable")
    limit = min(n, rows.shape[0]) - K
    for r in range(0, max(limit, 0) + 1):
        cand = order[: K + r]
        while cand.size > K:
            amps, *_ = np.linalg.lstsq(rows[:, cand], y, rcond=None)
            cand = np.delete(cand, np.argmin(np.abs(amps)))
        found = _certify(n, np.sort(cand), rows, y)
        if found is not None:
            return found
    return None


def _recover(y, K, order_of, roots_to_support, nodes, rows, n):
    """Shared driver over candidate model orders.

    A rank-deficient Toeplitz matrix proposes a lower order, but at large
    ``K`` with ``M = 2K`` exactly sparse data can look rank deficient too, so
    the declared order stays in play. Companion-matrix roots are tried for
    every order before falling back to the forward-backward grid scan.
    """
    rank, _ = toeplitz_rank(y, order_of(K))
    if rank == 0:
        return SparseSignal(n, [], [])
    orders = [K]
    if rank < order_of(K):
        reduced = max(rank // order_of(1), 1)
        if reduced < K:
            orders = [reduced, K]
    reason = "no candidate support explains the samples"
    for k in orders:
        roots = np.roots(annihilating_filter(y, order_of(k)))
        try:
            if np.any(np.abs(np.abs(roots) - 1.0) > MODULUS_TOL):
                raise ModelMismatchError("annihilating filter roots lie off the unit circle")
            found = _certify(n, roots_to_support(roots), rows, y)
            if found is not None:
                return found
        except ModelMismatchError as exc:
            reason = str(exc)
    for k in reversed(orders):
        h = annihilating_filter(y, order_of(k), forward_backward=True)
        found = _grid_search(h, nodes, rows, y, k)
        if found is not None:
            return found
    raise ModelMismatchError(f"samples are not explained by a {K}-sparse signal: {reason}")


def prony_reconstruct(samples: SpectralSamples, K: int) -> SparseSignal:
    """Recover a ``K``-sparse signal from ``M >= 2K`` DFT samples.

    Roots ``u_k = exp(-i 2 pi c_k / n)`` of the annihilating filter give the
    support; amplitudes follow from least squares on the sampled DFT columns.
    A rank-deficient Toeplitz matrix lowers the order. When root-finding is
    too ill-conditioned to land on the grid (large ``K`` at ``M = 2K``), the
    support is read from the magnitude of a forward-backward filter on the
    vertex grid instead; either way the answer must reproduce ``y``.

    Raises:
        ModelMismatchError: no ``K``-sparse signal on the grid explains ``y``.
    """
    if samples.basis != "DFT":
        raise PreconditionError("prony_reconstruct expects DFT samples")
    n, y = samples.n, np.asarray(samples.y, dtype=complex)
    if K < 1 or y.size < 2 * K:
        raise PreconditionError(f"need M >= 2K samples (M={y.size}, K={K})")

    def to_support(roots):
        return _snap(np.mod(-np.angle(roots) * n / (2 * np.pi), n), n, n)

    nodes = np.exp(-2j * np.pi * np.arange(n) / n)[:, None]
    return _recover(y, K, lambda k: k, to_support, nodes, dft_rows(n, y.size), n)


def prony_dct_reconstruct(samples: SpectralSamples, K: int) -> SparseSignal:
    """Recover a ``K``-sparse path-graph signal from ``M >= 4K`` DCT-III samples.

    After removing the row normalisation, sample ``m`` equals
    ``sum_k x_k cos(m theta_k)`` with ``theta_k = pi (c_k + 1/2) / n``: a sum
    of ``2K`` exponentials ``exp(+- i m theta_k)``, recovered with a
    ``2K``-order filter whose roots must pair up as conjugates.
    """
    if samples.basis != "DCT-III":
        raise PreconditionError("prony_dct_reconstruct expects DCT-III samples")
    n, y = samples.n, np.asarray(samples.y, dtype=complex)
    M = y.size
    if K < 1 or M < 4 * K:
        raise PreconditionError(f"need M >= 4K DCT samples (M={M}, K={K})")
    scale = np.full(M, np.sqrt(2.0 / n))
    scale[0] /= np.sqrt(2.0)

    def to_support(roots):
        upper = roots[roots.imag > 0]
        lower = roots[roots.imag <= 0]
        if 2 * upper.size != roots.size:
            raise ModelMismatchError("annihilating filter roots are not conjugate pairs")
        for u in upper:
            if np.min(np.abs(lower - u.conj())) > MODULUS_TOL:
                raise ModelMismatchError(f"root {u:.6g} has no conjugate partner")
        return _snap(np.angle(upper) * n / np.pi - 0.5, n, 2 * n)

    theta = np.pi * (np.arange(n) + 0.5) / n
    nodes = np.stack([np.exp(1j * theta), np.exp(-1j * theta)], axis=1)
    rows = dct_basis(n).rows(M)
    found = _recover(y / scale, K, lambda k: 2 * k, to_support, nodes, rows / scale[:, None], n)
    return _certify(n, found.support, rows, y) if found.K else found


def max_levels(n: int, M: int, bipartite_special: bool = False) -> tuple:
    """Deepest decomposition that still reproduces ``M`` consecutive DFT rows.

    With ``k = M - 1`` the largest ``J`` with ``k < n / 2^{J+1}``
    (``n / 2^{J+2}`` when the bipartite ``N/8`` restriction applies) and
    ``2^J | n``.

    Returns:
        ``(J, n / 2^J)``.
    """
    if M < 1 or M > n:
        raise PreconditionError(f"sample count {M} outside [1, {n}]")
    k = M - 1
    extra = 2 if bipartite_special else 1
    J = 0
    while n % (1 << (J + 1)) == 0 and k < n / 2 ** (J + 1 + extra):
        J += 1
    return J, n >> J


@dataclass(frozen=True)
class GftFactorization:
    """``U_M^H = C * prod_j (Psi_j E_j)`` with ``C = diag(c_hat) U~_M^H``.

    ``filters[j]`` is the level-``j`` low-pass (size ``n/2^j``); ``Psi_j``
    keeps even vertices. ``graphs`` has ``J + 1`` entries.
    """

    n: int
    M: int
    J: int
    C: np.ndarray
    c_hat: np.ndarray
    filters: tuple
    graphs: tuple
    alphas: tuple
    residual: float
    kinds: tuple = field(default=())

    @property
    def coarse_graph(self) -> CirculantGraph:
        return self.graphs[-1]

    def operator(self) -> np.ndarray:
        """``prod_j Psi_j E_j`` as an ``(n/2^J) x n`` matrix."""
        g = np.eye(self.n)
        for e in self.filters:
            g = (e @ g)[0::2]
        return g


def _coarser(g: CirculantGraph, scheme: str) -> CirculantGraph:
    if scheme == "spectral":
        return spectral_reduce(g, 1)
    if scheme == "same-generating-set":
        return same_generating_set_coarsen(g)
    if scheme == "kron":
        return kron_coarsen(g)
    raise PreconditionError(f"unknown coarsening scheme {scheme!r}; expected one of {SCHEMES}")


def _level_lowpass(g: CirculantGraph, alphas, k: int, level: int):
    if is_bipartite(g):
        fb = build_hgeswt(g, k, alphas)
        betas = np.asarray(fb.spec.betas)
        for i in range(betas.size):
            for j in range(i, betas.size):
                if abs(betas[i] + betas[j]) <= 1e-9:
                    pair = f"alpha[{i}]={alphas[i]:.6g}" + ("" if i == j else f", alpha[{j}]={alphas[j]:.6g}")
                    what = "zero e-degree" if i == j else "opposite e-degrees"
                    raise InvertibilityError(f"level {level}: {what} at {pair}", level, "opposite-e-degrees")
        return fb.lp_analysis, "HGESWT"
    try:
        fb = build_hcgeswt(g, k, alphas)
    except BezoutError as exc:
        raise BezoutError(f"level {level}: {exc}", exc.pairs) from None
    return fb.lp_analysis, "HCGESWT"


def factorize_gft(g: CirculantGraph, M: int, J: int, k: int = 1, scheme: str = "spectral",
                  tol: float = RESIDUAL_TOL) -> GftFactorization:
    """Factor the first ``M`` DFT rows through ``J`` low-pass/downsampling stages.

    Level ``j`` filters with e-spline parameters ``2^j * 2 pi m / n``,
    ``m = 0..M-1``: the HGESWT low-pass on bipartite levels, otherwise the
    complementary (HCGESWT) analysis low-pass. Both vanish at the mirrored
    frequencies ``pi +- alpha``, so the decimated rows remain DFT rows up to
    a scalar collected in ``c_hat``.

    Raises:
        PreconditionError: ``J`` too deep for ``M`` or the residual exceeds
            ``tol``.
        InvertibilityError / BezoutError: a level's filter is excluded.
    """
    n = g.n
    if not 1 <= M <= n:
        raise PreconditionError(f"sample count {M} outside [1, {n}]")
    if J < 0:
        raise PreconditionError("number of levels must be non-negative")
    if J > 0:
        j_max, _ = max_levels(n, M)
        if J > j_max:
            raise PreconditionError(f"J={J} exceeds the admissible depth {j_max} for n={n}, M={M}")
    alphas = tuple(2 * np.pi * m / n for m in range(M))
    graphs = [g]
    filters = []
    kinds = []
    for j in range(J):
        level_alphas = tuple((1 << j) * a for a in alphas)
        e, kind = _level_lowpass(graphs[-1], level_alphas, k, j)
        filters.append(e)
        kinds.append(kind)
        try:
            graphs.append(_coarser(graphs[-1], scheme))
        except PreconditionError as exc:
            raise PreconditionError(f"level {j}: {exc}") from None

    n_coarse = n >> J
    u = dft_rows(n, M)
    u_coarse = dft_rows(n_coarse, M)
    op = np.eye(n)
    for e in filters:
        op = (e @ op)[0::2]
    r = u_coarse @ op
    denom = np.sum(np.abs(r) ** 2, axis=1)
    if np.any(denom <= 1e-24):
        raise PreconditionError("a reduced DFT row is annihilated by the low-pass cascade")
    c_hat = np.sum(r.conj() * u, axis=1) / denom
    C = c_hat[:, None] * u_coarse
    residual = float(np.max(np.abs(u - C @ op)))
    if residual > tol:
        raise PreconditionError(f"factorization residual {residual:.3e} exceeds {tol:.1e}")
    return GftFactorization(n, M, J, C, c_hat, tuple(filters), tuple(graphs), alphas, residual, tuple(kinds))


def sample_via_pipeline(x, fact: GftFactorization):
    """Low-pass/decimate ``x`` to the coarse graph, then apply ``C``.

    Returns:
        ``(y_coarse, samples)`` where ``samples.y`` equals the direct
        ``sample_gft(x, M).y``.
    """
    current = _dense(x, fact.n)
    for e in fact.filters:
        current = (e @ current)[0::2]
    return current, SpectralSamples(fact.C @ current, fact.n, "DFT")
