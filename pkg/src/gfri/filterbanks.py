"""Graph (e-)spline wavelet filterbanks on circulant and path graphs.

Three constructions on circulant graphs, all polynomials in the normalised
adjacency ``A/d``:

* ``HGSWT``   low/high-pass ``((I +- A/d)/2)^k``
* ``HGESWT``  products over ``alphas`` of ``((beta_n I +- A/d)/2)^k`` with
  ``beta_n = d~(alpha_n)/d``
* ``HCGESWT`` keeps the e-spline high-pass and completes it with a
  spline-factor low-pass solving a half-band (Bezout) equation, giving a
  biorthogonal pair.

Plus the normalised-adjacency HGSWT on a path graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .circulant import (
    CirculantGraph,
    PathGraph,
    RepresenterPolynomial,
    adjacency_matrix,
    circulant_from_first_row,
    exponential_degree,
    is_bipartite,
)
from .errors import BezoutError, PreconditionError

__all__ = [
    "FilterBankSpec",
    "DownsamplePattern",
    "FilterBank",
    "Verdict",
    "build_hgswt",
    "build_hgeswt",
    "build_hcgeswt",
    "build_path_hgswt",
    "build_filterbank",
    "check_invertibility",
    "transform_matrix",
    "synthesis_matrix",
    "condition_number_bipartite",
    "opposing_roots",
    "dft_position_conflicts",
]

KINDS = ("HGSWT", "HGESWT", "HCGESWT", "NORMALIZED-PATH")

# |beta| vs |gamma| equality and root matching
SPECTRAL_TOL = 1e-9
ROOT_TOL = 1e-9
RANK_RTOL = 1e-9
DENSE_RANK_RTOL = 1e-10


@dataclass(frozen=True)
class FilterBankSpec:
    kind: str
    k: int
    alphas: tuple
    betas: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown filterbank kind {self.kind!r}")
        if self.k < 1:
            raise PreconditionError(f"order k must be a positive integer, got {self.k}")
        if len(self.alphas) != len(self.betas) or not self.alphas:
            raise PreconditionError("alphas and betas must be non-empty and of equal length")

    @property
    def T(self) -> int:
        return len(self.alphas)

    def dilated(self, factor: float, graph) -> "FilterBankSpec":
        """Same construction with every alpha scaled by ``factor`` on ``graph``."""
        alphas = tuple(factor * a for a in self.alphas)
        if self.kind == "HGSWT":
            return self
        return FilterBankSpec(self.kind, self.k, alphas, _betas(graph, alphas))


@dataclass(frozen=True)
class DownsamplePattern:
    """Vertices that keep the low-pass output; the complement keeps the high-pass."""

    n: int
    keep_lowpass: tuple

    def __post_init__(self):
        keep = tuple(sorted(set(int(v) for v in self.keep_lowpass)))
        if not keep:
            raise PreconditionError("at least one vertex must keep the low-pass output")
        if keep[0] < 0 or keep[-1] >= self.n:
            raise PreconditionError("pattern vertex out of range")
        object.__setattr__(self, "keep_lowpass", keep)

    @classmethod
    def standard(cls, n: int) -> "DownsamplePattern":
        return cls(n, tuple(range(0, n, 2)))

    @classmethod
    def minimum(cls, n: int, vertex: int = 0) -> "DownsamplePattern":
        return cls(n, (vertex,))

    @classmethod
    def all_lowpass(cls, n: int) -> "DownsamplePattern":
        return cls(n, tuple(range(n)))

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[list(self.keep_lowpass)] = True
        return m

    @property
    def keep_highpass(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(~self.mask))

    @property
    def K(self) -> np.ndarray:
        return np.diag(np.where(self.mask, 1.0, -1.0))

    @property
    def is_standard(self) -> bool:
        return self.n % 2 == 0 and self.keep_lowpass == tuple(range(0, self.n, 2))


@dataclass(frozen=True)
class FilterBank:
    """A matched low/high-pass pair (and synthesis pair for HCGESWT).

    ``representers`` holds the Laurent polynomials of the circulant filters
    (``lp``, ``hp`` and, for HCGESWT, ``lp_syn``, ``hp_syn``, ``remainder``);
    it is empty on path graphs.
    """

    graph: object
    spec: FilterBankSpec
    lp_analysis: np.ndarray
    hp_analysis: np.ndarray
    sampling: DownsamplePattern
    lp_synthesis: Optional[np.ndarray] = None
    hp_synthesis: Optional[np.ndarray] = None
    representers: dict = field(default_factory=dict)
    normalization: Optional[tuple] = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def kind(self) -> str:
        return self.spec.kind

    @property
    def is_circulant(self) -> bool:
        return isinstance(self.graph, CirculantGraph)

    def with_pattern(self, pattern: DownsamplePattern) -> "FilterBank":
        return FilterBank(
            self.graph, self.spec, self.lp_analysis, self.hp_analysis, pattern,
            self.lp_synthesis, self.hp_synthesis, self.representers, self.normalization,
        )

    def first_rows(self) -> dict:
        rows = {"lp_analysis": self.lp_analysis[0], "hp_analysis": self.hp_analysis[0]}
        if self.lp_synthesis is not None:
            rows["lp_synthesis"] = self.lp_synthesis[0]
            rows["hp_synthesis"] = self.hp_synthesis[0]
        return rows

    def coefficient_matrix(self) -> np.ndarray:
        """``C`` with ``H_LP,an = C (prod (beta I + A/d)^k / 2^k)`` (HCGESWT only)."""
        if self.kind != "HCGESWT":
            raise PreconditionError("coefficient matrix is defined for HCGESWT filterbanks")
        bar = _eswt_poly(self.graph, self.spec.k, self.spec.betas, +1)
        lam_bar = bar.eigenvalues(self.n)
        if np.min(np.abs(lam_bar)) <= SPECTRAL_TOL * np.max(np.abs(lam_bar)):
            raise PreconditionError("e-spline low-pass is singular; coefficient matrix undefined")
        lam = self.representers["lp"].eigenvalues(self.n)
        return circulant_from_first_row(np.fft.ifft(lam / lam_bar).real)


@dataclass(frozen=True)
class Verdict:
    """Outcome of :func:`check_invertibility`.

    ``condition`` names the rule that decided; ``conflicts`` lists DFT position
    pairs ``(p, p + n/2)`` whose eigenvectors collapse under even downsampling.
    """

    invertible: bool
    condition: str
    reason: str = ""
    conflicts: tuple = ()

    def __bool__(self):
        return self.invertible


def _normalized_adjacency(g: CirculantGraph) -> RepresenterPolynomial:
    return g.adjacency_representer() / g.degree


def _betas(g: CirculantGraph, alphas) -> tuple:
    return tuple(exponential_degree(g, a) / g.degree for a in alphas)


def _eswt_poly(g: CirculantGraph, k: int, betas, sign: int) -> RepresenterPolynomial:
    a = _normalized_adjacency(g)
    out = RepresenterPolynomial([1.0])
    for b in betas:
        out = out * ((b + sign * a) / 2.0) ** k
    return out


def _circulant_bank(g, spec, lp, hp, pattern, **extra) -> FilterBank:
    reps = {"lp": lp, "hp": hp}
    reps.update(extra.pop("representers", {}))
    return FilterBank(
        graph=g,
        spec=spec,
        lp_analysis=lp.matrix(g.n),
        hp_analysis=hp.matrix(g.n),
        sampling=pattern or DownsamplePattern.standard(g.n),
        representers=reps,
        **extra,
    )


def _require_circulant(g):
    if not isinstance(g, CirculantGraph):
        raise PreconditionError("this construction needs a circulant graph")


def build_hgswt(g: CirculantGraph, k: int, pattern: Optional[DownsamplePattern] = None) -> FilterBank:
    _require_circulant(g)
    spec = FilterBankSpec("HGSWT", k, (0.0,), (1.0,))
    lp = _eswt_poly(g, k, (1.0,), +1)
    hp = _eswt_poly(g, k, (1.0,), -1)
    return _circulant_bank(g, spec, lp, hp, pattern)


def build_hgeswt(g: CirculantGraph, k: int, alphas: Sequence[float],
                 pattern: Optional[DownsamplePattern] = None) -> FilterBank:
    _require_circulant(g)
    alphas = tuple(float(a) for a in alphas)
    spec = FilterBankSpec("HGESWT", k, alphas, _betas(g, alphas))
    lp = _eswt_poly(g, k, spec.betas, +1)
    hp = _eswt_poly(g, k, spec.betas, -1)
    return _circulant_bank(g, spec, lp, hp, pattern)


def _merge_clusters(roots: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    # a root of multiplicity m splits into m nearby roots; their mean is accurate
    merged = []
    used = np.zeros(roots.size, dtype=bool)
    for i, r in enumerate(roots):
        if used[i]:
            continue
        close = (~used) & (np.abs(roots - r) <= tol * max(1.0, abs(r)))
        merged.append(roots[close].mean())
        used |= close
    return np.array(merged, dtype=complex)


def opposing_roots(factors: Sequence[RepresenterPolynomial], tol: float = ROOT_TOL) -> list:
    """Opposing ``(r, -r)`` and zero roots across the distinct factors' roots.

    Roots are found per factor with companion-matrix eigenvalues; repeated
    roots are merged before matching.
    """
    roots = []
    seen = []
    for f in factors:
        if any(f.allclose(s, atol=0.0) for s in seen):
            continue
        seen.append(f)
        roots.extend(_merge_clusters(f.roots()))
    roots = _merge_clusters(np.array(roots, dtype=complex))
    pairs = []
    for r in roots:
        if abs(r) <= tol:
            pairs.append((0j, 0j))
    for i in range(roots.size):
        for j in range(i + 1, roots.size):
            if abs(roots[i] + roots[j]) <= tol * max(1.0, abs(roots[i])):
                pairs.append((complex(roots[i]), complex(roots[j])))
    return pairs


def _solve_half_band(q: RepresenterPolynomial, tol: float = 1e-10) -> RepresenterPolynomial:
    """Minimum-degree symmetric ``R`` with ``P = q R`` satisfying ``P(z) + P(-z) = 2``."""
    qb = q.bandwidth
    for rho in range(0, 2 * qb + 2):
        width = qb + rho
        even = np.arange(0, width + 1, 2)
        cols = []
        for j in range(rho + 1):
            basis = np.zeros(rho + 1)
            basis[j] = 1.0
            p = q * RepresenterPolynomial(basis) if basis.any() else None
            pc = np.zeros(width + 1)
            pc[: p.coeffs.size] = p.coeffs
            cols.append(pc[even])
        mat = np.array(cols).T
        rhs = np.zeros(even.size)
        rhs[0] = 1.0
        sol, *_ = np.linalg.lstsq(mat, rhs, rcond=None)
        if np.max(np.abs(mat @ sol - rhs)) <= tol:
            return RepresenterPolynomial(sol)
    raise BezoutError("half-band equation has no solution of admissible degree")


def build_hcgeswt(g: CirculantGraph, k: int, alphas: Sequence[float],
                  pattern: Optional[DownsamplePattern] = None) -> FilterBank:
    """Complementary e-spline filterbank (biorthogonal, standard even pattern).

    Analysis high-pass is the e-spline high-pass; synthesis low-pass is its
    modulation ``H_HP(-z)``; the analysis low-pass is
    ``prod (z + 2cos(alpha) + 1/z)^k R(z)`` with ``R`` the minimum-degree
    symmetric solution of ``P(z) + P(-z) = 2``.

    Raises:
        BezoutError: the high-pass representer has opposing or zero roots.
    """
    _require_circulant(g)
    if g.n % 2:
        raise PreconditionError("HCGESWT needs an even vertex count")
    pattern = pattern or DownsamplePattern.standard(g.n)
    if not pattern.is_standard:
        raise PreconditionError("HCGESWT is defined for the standard even pattern only")
    alphas = tuple(float(a) for a in alphas)
    betas = _betas(g, alphas)
    spec = FilterBankSpec("HCGESWT", k, alphas, betas)
    a = _normalized_adjacency(g)
    factors = [(b - a) / 2.0 for b in betas]
    pairs = opposing_roots(factors)
    if pairs:
        listing = ", ".join(f"({p[0]:.6g}, {p[1]:.6g})" for p in pairs[:6])
        raise BezoutError(f"high-pass representer has opposing/zero roots: {listing}", pairs)

    hp = _eswt_poly(g, k, betas, -1)
    lp_syn = hp.reflect()
    spline = RepresenterPolynomial([1.0])
    for al in alphas:
        spline = spline * RepresenterPolynomial([2.0 * np.cos(al), 1.0]) ** k
    remainder = _solve_half_band(spline * lp_syn)
    lp = spline * remainder
    hp_syn = lp.reflect()

    n = g.n
    mats = {name: p.matrix(n) for name, p in (("lp", lp), ("hp", hp), ("lp_syn", lp_syn), ("hp_syn", hp_syn))}
    even = pattern.mask.astype(float)
    x1 = mats["lp_syn"].T @ (even[:, None] * mats["lp"])
    x2 = mats["hp_syn"].T @ ((1.0 - even)[:, None] * mats["hp"])
    design = np.stack([x1.ravel(), x2.ravel()], axis=1)
    (c1, c2), *_ = np.linalg.lstsq(design, np.eye(n).ravel(), rcond=None)

    return FilterBank(
        graph=g,
        spec=spec,
        lp_analysis=mats["lp"],
        hp_analysis=mats["hp"],
        sampling=pattern,
        lp_synthesis=c1 * mats["lp_syn"],
        hp_synthesis=c2 * mats["hp_syn"],
        representers={"lp": lp, "hp": hp, "lp_syn": lp_syn * c1, "hp_syn": hp_syn * c2,
                      "remainder": remainder, "spline": spline},
        normalization=(float(c1), float(c2)),
    )


def build_path_hgswt(g: PathGraph, k: int, pattern: Optional[DownsamplePattern] = None) -> FilterBank:
    """HGSWT on a path with the symmetric normalised adjacency ``D^-1/2 A D^-1/2``."""
    if not isinstance(g, PathGraph):
        raise PreconditionError("build_path_hgswt needs a PathGraph")
    a = adjacency_matrix(g)
    dinv = 1.0 / np.sqrt(a.sum(axis=1))
    an = dinv[:, None] * a * dinv[None, :]
    eye = np.eye(g.n)
    lp = np.linalg.matrix_power((eye + an) / 2.0, k)
    hp = np.linalg.matrix_power((eye - an) / 2.0, k)
    spec = FilterBankSpec("NORMALIZED-PATH", k, (0.0,), (1.0,))
    return FilterBank(g, spec, lp, hp, pattern or DownsamplePattern.standard(g.n))


def build_filterbank(g, kind: str, k: int, alphas=(0.0,), pattern=None) -> FilterBank:
    kind = kind.upper()
    if kind == "HGSWT":
        return build_hgswt(g, k, pattern)
    if kind == "HGESWT":
        return build_hgeswt(g, k, alphas, pattern)
    if kind == "HCGESWT":
        return build_hcgeswt(g, k, alphas, pattern)
    if kind == "NORMALIZED-PATH":
        return build_path_hgswt(g, k, pattern)
    raise PreconditionError(f"unknown filterbank kind {kind!r}")


def transform_matrix(fb: FilterBank, pattern: Optional[DownsamplePattern] = None) -> np.ndarray:
    """``W = (I+K)/2 H_LP + (I-K)/2 H_HP``: low-pass rows on the kept set, high-pass elsewhere."""
    pattern = pattern or fb.sampling
    return np.where(pattern.mask[:, None], fb.lp_analysis, fb.hp_analysis)


def synthesis_matrix(fb: FilterBank, pattern: Optional[DownsamplePattern] = None) -> np.ndarray:
    """``W~`` with ``W~^T W = I`` (HCGESWT); the inverse transpose otherwise."""
    pattern = pattern or fb.sampling
    if fb.lp_synthesis is not None:
        return np.where(pattern.mask[:, None], fb.lp_synthesis, fb.hp_synthesis)
    return np.linalg.inv(transform_matrix(fb, pattern)).T


def _spectrum(fb: FilterBank):
    """Eigenvalues of the normalised adjacency and matching eigenvectors (columns)."""
    g = fb.graph
    if isinstance(g, CirculantGraph):
        gam = _normalized_adjacency(g).eigenvalues(g.n)
        k = np.arange(g.n)
        vecs = np.exp(2j * np.pi * np.outer(k, k) / g.n) / np.sqrt(g.n)
        return gam, vecs
    a = adjacency_matrix(g)
    dinv = 1.0 / np.sqrt(a.sum(axis=1))
    return np.linalg.eigh(dinv[:, None] * a * dinv[None, :])


def _full_column_rank(m: np.ndarray) -> bool:
    if m.shape[1] == 0:
        return True
    if m.shape[0] < m.shape[1]:
        return False
    s = np.linalg.svd(m, compute_uv=False)
    return bool(s[-1] > RANK_RTOL * max(s[0], 1e-300))


def dft_position_conflicts(fb: FilterBank) -> tuple:
    """DFT position pairs ``(p, p + n/2)`` inside one matched eigenvalue set.

    The matched sets are the positions whose eigenvalue of ``A/d`` equals some
    ``beta_n`` (kept on even vertices) or some ``-beta_n`` (kept on odd
    vertices). Under the standard even pattern each such pair becomes
    linearly dependent.
    """
    if not fb.is_circulant or fb.n % 2:
        return ()
    gam, _ = _spectrum(fb)
    plus, minus = _matched_positions(gam, fb.spec.betas)
    half = fb.n // 2
    out = []
    for group in (plus, minus):
        s = set(group)
        for p in sorted(s):
            q = p + half
            if q in s and (p, q) not in out:
                out.append((p, q))
    return tuple(out)


def _matched_positions(gam, betas):
    plus = sorted({int(p) for b in betas for p in np.flatnonzero(np.abs(gam - b) <= SPECTRAL_TOL)})
    minus = sorted({int(p) for b in betas for p in np.flatnonzero(np.abs(gam + b) <= SPECTRAL_TOL)})
    return plus, minus


def _dense_verdict(fb, pattern, conflicts) -> Verdict:
    s = np.linalg.svd(transform_matrix(fb, pattern), compute_uv=False)
    ok = bool(s[-1] > DENSE_RANK_RTOL * s[0])
    return Verdict(ok, "dense-rank", f"sigma_min/sigma_max = {s[-1] / s[0]:.3e}", conflicts)


def check_invertibility(fb: FilterBank, pattern: Optional[DownsamplePattern] = None) -> Verdict:
    """Decide invertibility of the one-level transform for a downsampling pattern.

    Order of tests:

    (a) two parameters with ``d~_i = -d~_j`` (or one ``d~ = 0``) whose value
        is a (signed) eigenvalue of ``A/d``: both filters share a null
        direction, never invertible;
    (b) no ``|beta_n|`` in ``|spectrum|``: invertible when ``k`` is even or
        ``prod (beta_n^2 - gamma^2)^k`` has one sign over the spectrum;
    (c) otherwise the eigenvectors for ``+beta_n`` restricted to the low-pass
        set, and for ``-beta_n`` restricted to the high-pass set, must be
        linearly independent (for the even pattern: no DFT positions
        ``p, p + n/2`` in one set), then the sign rule of (b) on the
        remaining spectrum.

    Mixed signs leave the rule indeterminate; the dense rank of ``W`` decides.
    """
    pattern = pattern or fb.sampling
    if pattern.n != fb.n:
        raise PreconditionError("pattern size does not match the filterbank")

    if fb.kind == "HCGESWT":
        w = transform_matrix(fb, pattern)
        resid = np.max(np.abs(synthesis_matrix(fb, pattern).T @ w - np.eye(fb.n)))
        ok = resid < 1e-8
        return Verdict(ok, "biorthogonal", f"max |W~^T W - I| = {resid:.3e}")

    gam, vecs = _spectrum(fb)
    betas = np.asarray(fb.spec.betas)
    k = fb.spec.k
    conflicts = dft_position_conflicts(fb) if pattern.is_standard else ()

    for i in range(betas.size):
        for j in range(i, betas.size):
            if abs(betas[i] + betas[j]) <= SPECTRAL_TOL:
                hit = np.abs(gam**2 - betas[i] ** 2) <= SPECTRAL_TOL
                if hit.any():
                    what = "d~ = 0" if i == j else f"d~[{i}] = -d~[{j}]"
                    return Verdict(False, "opposite-e-degrees",
                                   f"{what} with |beta| = {abs(betas[i]):.6g} in the spectrum", conflicts)

    plus, minus = _matched_positions(gam, betas)
    unmatched = np.ones(gam.size, dtype=bool)
    unmatched[plus] = False
    unmatched[minus] = False

    if plus or minus:
        lo = np.asarray(pattern.keep_lowpass)
        hi = np.asarray(pattern.keep_highpass, dtype=int)
        if not _full_column_rank(vecs[np.ix_(lo, plus)]):
            detail = f"; DFT positions {list(conflicts)}" if conflicts else ""
            return Verdict(False, "eigenvector-dependence",
                           f"eigenvectors for +beta collapse on the low-pass set{detail}", conflicts)
        if not _full_column_rank(vecs[np.ix_(hi, minus)]):
            detail = f"; DFT positions {list(conflicts)}" if conflicts else ""
            return Verdict(False, "eigenvector-dependence",
                           f"eigenvectors for -beta collapse on the high-pass set{detail}", conflicts)

    if k % 2 == 0:
        return Verdict(True, "even-order", "k even", conflicts)
    f = np.prod((betas[None, :] ** 2 - gam[unmatched, None] ** 2), axis=1)
    if f.size == 0 or np.all(f > 0) or np.all(f < 0):
        return Verdict(True, "uniform-sign", "prod (beta^2 - gamma^2)^k keeps one sign", conflicts)
    return _dense_verdict(fb, pattern, conflicts)


def condition_number_bipartite(fb: FilterBank) -> float:
    """Closed-form 2-norm condition number for bipartite graphs, even pattern.

    ``lambda(gamma) = (prod ((beta+gamma)/2)^{2k} + prod ((beta-gamma)/2)^{2k}) / 2``
    over the spectrum of ``A/d``; returns ``sqrt(max/min)``.
    """
    if not fb.is_circulant or not is_bipartite(fb.graph):
        raise PreconditionError("closed-form condition number needs a bipartite circulant graph")
    if fb.kind not in ("HGSWT", "HGESWT"):
        raise PreconditionError(f"closed-form condition number is not defined for {fb.kind}")
    if not fb.sampling.is_standard:
        raise PreconditionError("closed-form condition number assumes the standard even pattern")
    gam, _ = _spectrum(fb)
    betas = np.asarray(fb.spec.betas)
    k = fb.spec.k
    plus = np.prod(((betas[None, :] + gam[:, None]) / 2.0) ** (2 * k), axis=1)
    minus = np.prod(((betas[None, :] - gam[:, None]) / 2.0) ** (2 * k), axis=1)
    lam = 0.5 * (plus + minus)
    if lam.min() <= 0:
        return float("inf")
    return float(np.sqrt(lam.max() / lam.min()))
