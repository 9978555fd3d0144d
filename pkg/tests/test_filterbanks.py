import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import corpus
from gfri import (
    BezoutError,
    CirculantGraph,
    DownsamplePattern,
    PathGraph,
    PreconditionError,
    build_filterbank,
    check_invertibility,
)
from gfri.circulant import border_indices
from gfri.filterbanks import (
    condition_number_bipartite,
    dft_position_conflicts,
    opposing_roots,
    synthesis_matrix,
    transform_matrix,
)


def _cond(m):
    s = np.linalg.svd(m, compute_uv=False)
    return s[0] / s[-1]


def test_cycle4_condition_number_is_sqrt2():
    fb = build_filterbank(CirculantGraph.cycle(4), "HGSWT", 1)
    assert np.isclose(condition_number_bipartite(fb), np.sqrt(2), rtol=1e-12)
    assert np.isclose(_cond(transform_matrix(fb)), np.sqrt(2), rtol=1e-12)


def test_hgswt_filters_are_complementary_on_bipartite_graphs():
    g = CirculantGraph.unweighted(16, (1, 3))
    fb = build_filterbank(g, "HGSWT", 2)
    assert fb.representers["hp"].allclose(fb.representers["lp"].reflect())


def test_high_pass_annihilates_polynomials_outside_border():
    for g in corpus(64, min_n=16):
        for k in (1, 2):
            fb = build_filterbank(g, "HGSWT", k)
            t = np.arange(g.n, dtype=float)
            x = 1.0 + 0.5 * t + (0.02 * t**2 + 1e-3 * t**3 if k == 2 else 0.0)
            outside = np.setdiff1d(np.arange(g.n), border_indices(g.n, k * g.bandwidth))
            if outside.size == 0:
                continue
            y = fb.hp_analysis @ x
            assert np.max(np.abs(y[outside])) < 1e-8 * np.max(np.abs(x))


def test_e_spline_high_pass_annihilates_exponentials():
    g = CirculantGraph(32, [(1, 1.0), (2, 0.5)])
    alpha = 2 * np.pi * 3 / 32
    fb = build_filterbank(g, "HGESWT", 1, (alpha,))
    t = np.arange(32)
    for sign in (1, -1):
        assert np.max(np.abs(fb.hp_analysis @ np.exp(sign * 1j * alpha * t))) < 1e-10


def test_hcgeswt_is_biorthogonal():
    g = CirculantGraph.unweighted(16, (1, 2))
    fb = build_filterbank(g, "HCGESWT", 1, (0.0, 2 * np.pi / 16))
    w = transform_matrix(fb)
    assert np.allclose(synthesis_matrix(fb).T @ w, np.eye(16), atol=1e-9)
    assert check_invertibility(fb).condition == "biorthogonal"


def test_hcgeswt_bezout_failure_on_bipartite_quarter_band():
    g = CirculantGraph.cycle(8)
    with pytest.raises(BezoutError) as info:
        build_filterbank(g, "HCGESWT", 1, (np.pi / 4, 3 * np.pi / 4))
    assert info.value.pairs


def test_opposing_roots_detects_zero_roots():
    g = CirculantGraph.cycle(8)
    a = g.adjacency_representer() / g.degree
    assert opposing_roots([(0.0 - a) / 2.0])


def test_opposite_e_degree_conflict():
    g = CirculantGraph.unweighted(64, (1, 3, 5))
    fb = build_filterbank(g, "HGESWT", 1, (2 * np.pi * 15 / 64, 2 * np.pi * 17 / 64))
    verdict = check_invertibility(fb)
    assert not verdict and verdict.condition == "opposite-e-degrees"
    assert verdict.conflicts == ((15, 47), (17, 49))
    assert np.isclose(fb.spec.betas[0], 0.093, atol=5e-4)


def test_disconnected_graph_is_not_invertible():
    fb = build_filterbank(CirculantGraph.unweighted(16, (4,)), "HGSWT", 1)
    verdict = check_invertibility(fb)
    assert not verdict.invertible
    assert np.linalg.svd(transform_matrix(fb), compute_uv=False)[-1] < 1e-10


def test_even_order_is_invertible():
    fb = build_filterbank(CirculantGraph.unweighted(24, (1, 2, 5)), "HGSWT", 2)
    verdict = check_invertibility(fb)
    assert verdict.invertible and verdict.condition == "even-order"


@given(n=st.sampled_from([8, 12, 16, 20, 24, 32]), k=st.integers(1, 3),
       offsets=st.sets(st.integers(1, 3), min_size=1, max_size=3), m=st.integers(0, 7))
@settings(max_examples=80, deadline=None)
def test_verdict_matches_dense_rank(n, k, offsets, m):
    g = CirculantGraph.unweighted(n, sorted(offsets))
    fb = build_filterbank(g, "HGESWT", k, (2 * np.pi * m / n,))
    s = np.linalg.svd(transform_matrix(fb), compute_uv=False)
    assert check_invertibility(fb).invertible == bool(s[-1] > 1e-10 * s[0])


@pytest.mark.parametrize("pattern", ["minimum", "all"])
def test_non_standard_patterns_agree_with_dense_rank(pattern):
    g = CirculantGraph.unweighted(16, (1, 2))
    p = DownsamplePattern.minimum(16) if pattern == "minimum" else DownsamplePattern.all_lowpass(16)
    fb = build_filterbank(g, "HGSWT", 1, pattern=p)
    s = np.linalg.svd(transform_matrix(fb), compute_uv=False)
    assert check_invertibility(fb).invertible == bool(s[-1] > 1e-10 * s[0])


def test_pattern_validation():
    assert DownsamplePattern.standard(6).keep_lowpass == (0, 2, 4)
    assert DownsamplePattern.standard(6).is_standard
    with pytest.raises(PreconditionError):
        DownsamplePattern(4, ())
    with pytest.raises(PreconditionError):
        DownsamplePattern(4, (5,))


def test_path_filterbank():
    fb = build_filterbank(PathGraph(8), "NORMALIZED-PATH", 1)
    assert fb.lp_analysis.shape == (8, 8)
    assert np.allclose(fb.lp_analysis + fb.hp_analysis, np.eye(8))


def test_dft_position_conflicts_on_cycle():
    fb = build_filterbank(CirculantGraph.cycle(8), "HGESWT", 1, (np.pi / 2,))
    assert dft_position_conflicts(fb)


def test_unknown_kind():
    with pytest.raises(PreconditionError):
        build_filterbank(CirculantGraph.cycle(8), "XYZ", 1)
