"""Multilevel graph wavelet transforms on circulant graphs.

Each level filters with a two-channel filterbank, keeps the low-pass output on
even vertices (fed to the next, coarsened, level) and the high-pass output on
odd vertices. ``J`` counts analysis stages; ``J = 0`` is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .circulant import CirculantGraph, GraphSignal
from .coarsening import SCHEMES, kron_coarsen, same_generating_set_coarsen, spectral_reduce
from .errors import BezoutError, InvertibilityError, PreconditionError
from .filterbanks import (
    DownsamplePattern,
    FilterBank,
    build_filterbank,
    check_invertibility,
    synthesis_matrix,
    transform_matrix,
)

__all__ = [
    "MultilevelPlan",
    "WaveletCoefficients",
    "plan_mrt",
    "analyze",
    "synthesize",
    "predicted_sparsity",
    "measured_sparsity",
    "wrap_angle",
]

SPARSITY_RTOL = 1e-9


def wrap_angle(alpha: float) -> float:
    """Representative of ``alpha`` in ``(-pi, pi]``."""
    a = float(np.mod(alpha + np.pi, 2 * np.pi) - np.pi)
    return np.pi if a == -np.pi else a


@dataclass(frozen=True)
class MultilevelPlan:
    """A ``J``-stage transform.

    ``graphs`` holds ``J + 1`` graphs (the last is the coarse graph carrying
    the final low-pass band) and ``filterbanks`` the ``J`` per-level banks,
    level ``j`` using parameters ``2^j * alphas``.
    """

    graphs: tuple
    filterbanks: tuple
    kind: str
    k: int
    alphas: tuple
    scheme: str

    @property
    def J(self) -> int:
        return len(self.filterbanks)

    @property
    def n(self) -> int:
        return self.graphs[0].n

    @property
    def root(self) -> CirculantGraph:
        return self.graphs[0]

    def band_sizes(self) -> list:
        """Lengths in classic order: low-pass, then high-pass levels ``J-1 .. 0``."""
        return [self.n >> self.J] + [self.n >> (j + 1) for j in reversed(range(self.J))]

    def vertex_labels(self) -> np.ndarray:
        """Root-graph vertex of each stacked coefficient (the relabelling ``P``).

        Low-pass entry ``m`` sits at vertex ``m 2^J``; level-``j`` high-pass
        entry ``m`` at vertex ``(2m + 1) 2^j``.
        """
        parts = [np.arange(self.n >> self.J) << self.J]
        for j in reversed(range(self.J)):
            parts.append(((2 * np.arange(self.n >> (j + 1)) + 1) << j))
        return np.concatenate(parts)

    def permutation_matrix(self) -> np.ndarray:
        """``P`` with ``P @ stacked`` giving the coefficients in root vertex order."""
        p = np.zeros((self.n, self.n))
        p[self.vertex_labels(), np.arange(self.n)] = 1.0
        return p

    def matrix(self) -> np.ndarray:
        """Dense stacked transform (classic ordering)."""
        eye = np.eye(self.n)
        return np.stack([analyze(eye[:, i], self).stacked() for i in range(self.n)], axis=1)


@dataclass(frozen=True)
class WaveletCoefficients:
    lowpass: np.ndarray
    highpass: tuple
    plan: Optional[MultilevelPlan] = None

    def stacked(self) -> np.ndarray:
        """``[lowpass, highpass[J-1], ..., highpass[0]]``."""
        return np.concatenate([self.lowpass, *reversed(self.highpass)])

    def in_vertex_order(self) -> np.ndarray:
        labels = self.plan.vertex_labels()
        s = self.stacked()
        out = np.zeros_like(s)
        out[labels] = s
        return out

    def sparsity(self, rtol: float = SPARSITY_RTOL, scale: Optional[float] = None) -> int:
        s = self.stacked()
        if scale is None:
            scale = np.max(np.abs(s), initial=0.0)
        return int(np.count_nonzero(np.abs(s) > rtol * scale))

    @classmethod
    def from_vertex_order(cls, values, plan: MultilevelPlan) -> "WaveletCoefficients":
        values = np.asarray(values)
        if values.shape != (plan.n,):
            raise PreconditionError(f"expected {plan.n} coefficients, got {values.shape}")
        return cls.from_stacked(values[plan.vertex_labels()], plan)

    @classmethod
    def from_stacked(cls, values, plan: MultilevelPlan) -> "WaveletCoefficients":
        values = np.asarray(values)
        if values.shape != (plan.n,):
            raise PreconditionError(f"expected {plan.n} coefficients, got {values.shape}")
        sizes = plan.band_sizes()
        cuts = np.cumsum(sizes)[:-1]
        bands = np.split(values, cuts)
        return cls(bands[0], tuple(reversed(bands[1:])), plan)


def _next_graph(g: CirculantGraph, scheme: str) -> CirculantGraph:
    if scheme == "same-generating-set":
        return same_generating_set_coarsen(g)
    if scheme == "spectral":
        return spectral_reduce(g, 1)
    if scheme == "kron":
        return kron_coarsen(g)
    raise PreconditionError(f"unknown coarsening scheme {scheme!r}; expected one of {SCHEMES}")


def plan_mrt(g: CirculantGraph, kind: str, k: int, J: int, alphas: Sequence[float] = (0.0,),
             scheme: str = "same-generating-set") -> MultilevelPlan:
    """Build and validate a ``J``-stage plan.

    Level ``j`` uses parameters ``2^j alphas`` and every nonzero parameter must
    satisfy ``|2^j alpha| < pi/2`` (beyond that the low-pass cannot reproduce
    the exponential). Each level must pass :func:`check_invertibility`.

    Raises:
        PreconditionError: ``n`` not divisible by ``2^J``, bad scheme, or a
            dilated parameter out of range.
        InvertibilityError / BezoutError: a level's filterbank is unusable;
            the message names the level.
    """
    kind = kind.upper()
    if J < 0:
        raise PreconditionError("number of levels must be non-negative")
    if g.n % (1 << J):
        raise PreconditionError(f"n={g.n} is not divisible by 2^J={1 << J}")
    if scheme not in SCHEMES:
        raise PreconditionError(f"unknown coarsening scheme {scheme!r}")
    alphas = tuple(float(a) for a in alphas)
    uses_alpha = kind in ("HGESWT", "HCGESWT")
    graphs = [g]
    banks = []
    for j in range(J):
        gj = graphs[-1]
        level_alphas = tuple((1 << j) * a for a in alphas)
        if uses_alpha:
            for a0, a in zip(alphas, level_alphas):
                if a0 != 0.0 and not abs(wrap_angle(a)) < np.pi / 2:
                    raise PreconditionError(
                        f"level {j}: dilated parameter 2^{j}*{a0:.6g} = {a:.6g} is not below pi/2")
        try:
            fb = build_filterbank(gj, kind, k, level_alphas if uses_alpha else (0.0,))
        except BezoutError as exc:
            raise BezoutError(f"level {j}: {exc}", exc.pairs) from None
        verdict = check_invertibility(fb)
        if not verdict.invertible:
            raise InvertibilityError(f"level {j}: {verdict.condition}: {verdict.reason}", j, verdict.condition)
        banks.append(fb)
        try:
            graphs.append(_next_graph(gj, scheme))
        except PreconditionError as exc:
            raise PreconditionError(f"level {j}: {exc}") from None
    return MultilevelPlan(tuple(graphs), tuple(banks), kind, k, alphas, scheme)


def _values(x, n: int) -> np.ndarray:
    values = x.values if isinstance(x, GraphSignal) else np.asarray(x)
    if values.shape != (n,):
        raise PreconditionError(f"signal of shape {values.shape} does not match n={n}")
    return values


def analyze(x, plan: MultilevelPlan) -> WaveletCoefficients:
    current = _values(x, plan.n)
    highs = []
    for fb in plan.filterbanks:
        highs.append((fb.hp_analysis @ current)[1::2])
        current = (fb.lp_analysis @ current)[0::2]
    return WaveletCoefficients(current, tuple(highs), plan)


def _inverse_level(fb: FilterBank, z: np.ndarray) -> np.ndarray:
    if fb.lp_synthesis is not None:
        return synthesis_matrix(fb).T @ z
    return np.linalg.solve(transform_matrix(fb), z)


def synthesize(coeffs: WaveletCoefficients, plan: Optional[MultilevelPlan] = None) -> np.ndarray:
    plan = plan or coeffs.plan
    if len(coeffs.highpass) != plan.J:
        raise PreconditionError("coefficient bands do not match the plan depth")
    current = np.asarray(coeffs.lowpass)
    for j in reversed(range(plan.J)):
        hp = np.asarray(coeffs.highpass[j])
        z = np.empty(2 * current.size, dtype=np.result_type(current, hp))
        z[0::2] = current
        z[1::2] = hp
        current = _inverse_level(plan.filterbanks[j], z)
    return current


def measured_sparsity(x, plan: MultilevelPlan, rtol: float = SPARSITY_RTOL) -> int:
    """Count of wavelet coefficients above ``rtol * max|x|``."""
    values = _values(x, plan.n)
    return analyze(values, plan).sparsity(rtol, scale=np.max(np.abs(values)))


def predicted_sparsity(n: int, B: int, j: int, variant: str = "hgswt-i", T_lp: int = 0) -> tuple:
    """Closed-form wavelet sparsity of a one-piece polynomial signal.

    Variants:
        ``hgswt-i``     ``n/2^j + B (2(j-1) + 2^{1-j})`` (filter bandwidth ``B``)
        ``hcgswt-ii``   ``n/2^j + B j + T_lp (j + 2^{1-j} - 2)``
        ``minimum-iii`` ``2B`` (single low-pass vertex, ``j = 0``)

    Returns:
        ``(K, exact)``; ``exact`` is False when the divisibility or support
        hypotheses fail and the closed form only approximates the count.
    """
    if variant == "minimum-iii":
        return 2 * B, j == 0 and 2 * B <= n
    if j < 1:
        raise PreconditionError("variants (i) and (ii) need at least one level")
    if variant == "hgswt-i":
        k = n / 2**j + B * (2 * (j - 1) + 2.0 ** (1 - j))
        divisible = B % (1 << (j - 1)) == 0
        fits = all(sum(B / 2**m for m in range(l + 1)) <= n / 2 ** (l + 1) for l in range(j))
    elif variant == "hcgswt-ii":
        k = n / 2**j + B * j + T_lp * (j + 2.0 ** (1 - j) - 2)
        divisible = T_lp % (1 << (j - 1)) == 0
        fits = all(B + sum(T_lp / 2**m for m in range(1, l + 1)) <= n / 2 ** (l + 1) for l in range(j))
    else:
        raise PreconditionError(f"unknown sparsity variant {variant!r}")
    exact = divisible and fits and float(k).is_integer()
    return int(round(k)), exact
