import numpy as np
import pytest

from corpus import polynomial_signal
from gfri import (
    CirculantGraph,
    InvertibilityError,
    PreconditionError,
    analyze,
    plan_mrt,
    predicted_sparsity,
    synthesize,
)
from gfri.multires import WaveletCoefficients, measured_sparsity, wrap_angle


def test_round_trip_each_kind():
    rng = np.random.default_rng(0)
    g = CirculantGraph.unweighted(64, (1, 2))
    for kind, alphas in [("HGSWT", (0.0,)), ("HGESWT", (2 * np.pi / 64,)), ("HCGESWT", (2 * np.pi / 64,))]:
        plan = plan_mrt(g, kind, 1, 2, alphas)
        x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        assert np.max(np.abs(synthesize(analyze(x, plan)) - x)) < 1e-8


def test_zero_levels_is_identity():
    plan = plan_mrt(CirculantGraph.cycle(8), "HGSWT", 1, 0)
    x = np.arange(8.0)
    assert np.array_equal(analyze(x, plan).stacked(), x)


def test_band_layout_and_labels():
    plan = plan_mrt(CirculantGraph.cycle(16), "HGSWT", 1, 2)
    assert plan.band_sizes() == [4, 4, 8]
    labels = plan.vertex_labels()
    assert sorted(labels) == list(range(16))
    assert list(labels[:4]) == [0, 4, 8, 12]
    p = plan.permutation_matrix()
    coeffs = analyze(np.random.default_rng(1).standard_normal(16), plan)
    assert np.allclose(p @ coeffs.stacked(), coeffs.in_vertex_order())
    again = WaveletCoefficients.from_vertex_order(coeffs.in_vertex_order(), plan)
    assert np.allclose(again.stacked(), coeffs.stacked())


def test_matrix_matches_analyze():
    plan = plan_mrt(CirculantGraph.unweighted(32, (1, 3)), "HGSWT", 1, 2)
    x = np.random.default_rng(2).standard_normal(32)
    assert np.allclose(plan.matrix() @ x, analyze(x, plan).stacked())


def test_level_parameter_constraint():
    g = CirculantGraph.unweighted(64, (1, 2))
    with pytest.raises(PreconditionError, match="level 1"):
        plan_mrt(g, "HGESWT", 1, 2, (2 * np.pi * 10 / 64,))


def test_divisibility_and_invertibility_errors():
    with pytest.raises(PreconditionError):
        plan_mrt(CirculantGraph.cycle(12), "HGSWT", 1, 3)
    with pytest.raises(InvertibilityError) as info:
        plan_mrt(CirculantGraph.unweighted(32, (4,)), "HGSWT", 1, 1)
    assert info.value.level == 0


def test_wrap_angle():
    assert wrap_angle(np.pi) == np.pi
    assert wrap_angle(-np.pi) == np.pi
    assert np.isclose(wrap_angle(3 * np.pi / 2), -np.pi / 2)


def test_polynomial_sparsity_matches_closed_form():
    g = CirculantGraph.unweighted(64, (1, 2))
    for j in (1, 2):
        K, exact = predicted_sparsity(64, g.bandwidth, j)
        assert exact
        assert measured_sparsity(polynomial_signal(64, 1), plan_mrt(g, "HGSWT", 1, j)) == K


def test_predicted_sparsity_values():
    assert predicted_sparsity(64, 2, 1) == (34, True)
    assert predicted_sparsity(64, 2, 2) == (21, True)
    assert predicted_sparsity(64, 3, 2)[1] is False
    assert predicted_sparsity(32, 3, 0, "minimum-iii") == (6, True)
    assert predicted_sparsity(64, 2, 2, "hcgswt-ii", T_lp=2) == (21, True)
    with pytest.raises(PreconditionError):
        predicted_sparsity(64, 2, 0)
