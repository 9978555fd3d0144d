import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfri import (
    BezoutError,
    CirculantGraph,
    InvertibilityError,
    ModelMismatchError,
    PreconditionError,
    SparseSignal,
    SpectralSamples,
    factorize_gft,
    max_levels,
    prony_dct_reconstruct,
    prony_reconstruct,
    sample_dct,
    sample_gft,
    sample_via_pipeline,
)
from gfri.sampling import annihilating_filter, toeplitz_rank


def test_single_spike_closed_form():
    x = SparseSignal(16, [5], [2.0 - 1.0j])
    y = sample_gft(x, 2).y
    assert np.allclose(y, (2.0 - 1.0j) * np.exp(-2j * np.pi * 5 * np.arange(2) / 16) / 4)
    rec = prony_reconstruct(sample_gft(x, 2), 1)
    assert list(rec.support) == [5] and np.allclose(rec.amplitudes, [2.0 - 1.0j])


def test_annihilating_filter_roots_encode_support():
    x = SparseSignal(32, [3, 11, 20], [1.0, -2.0, 0.5j])
    h = annihilating_filter(sample_gft(x, 6).y, 3)
    found = np.sort(np.mod(np.round(-np.angle(np.roots(h)) * 32 / (2 * np.pi)), 32))
    assert list(found) == [3, 11, 20]


def test_toeplitz_rank_equals_sparsity():
    x = SparseSignal(64, [1, 9], [1.0, 1.0])
    rank, _ = toeplitz_rank(sample_gft(x, 8).y, 4)
    assert rank == 2


def test_over_estimated_order_still_recovers():
    x = SparseSignal(32, [4, 17], [1.0 + 1.0j, -0.5])
    rec = prony_reconstruct(sample_gft(x, 8), 4)
    assert np.allclose(rec.dense(), x.dense(), atol=1e-9)


def test_zero_signal():
    assert prony_reconstruct(SpectralSamples(np.zeros(4, complex), 16), 2).K == 0


@given(n=st.sampled_from([8, 16, 32, 64]), data=st.data())
@settings(max_examples=60, deadline=None)
def test_prony_recovery_property(n, data):
    K = data.draw(st.integers(1, n // 4))
    seed = data.draw(st.integers(0, 2**32 - 1))
    x = SparseSignal.random(n, K, np.random.default_rng(seed))
    rec = prony_reconstruct(sample_gft(x, 2 * K), K)
    assert np.array_equal(rec.support, x.support)
    assert np.max(np.abs(rec.amplitudes - x.amplitudes)) < 1e-8


@given(n=st.sampled_from([16, 32, 64]), data=st.data())
@settings(max_examples=40, deadline=None)
def test_dct_recovery_property(n, data):
    K = data.draw(st.integers(1, 4))
    x = SparseSignal.random(n, K, np.random.default_rng(data.draw(st.integers(0, 2**32 - 1))))
    rec = prony_dct_reconstruct(sample_dct(x, 4 * K), K)
    assert np.array_equal(rec.support, x.support)
    assert np.max(np.abs(rec.amplitudes - x.amplitudes)) < 1e-8


def test_model_mismatch():
    rng = np.random.default_rng(3)
    noise = SpectralSamples(rng.standard_normal(4) + 1j * rng.standard_normal(4), 32)
    with pytest.raises(ModelMismatchError):
        prony_reconstruct(noise, 2)


def test_sample_count_preconditions():
    x = SparseSignal(16, [1, 2], [1.0, 1.0])
    with pytest.raises(PreconditionError):
        prony_reconstruct(sample_gft(x, 3), 2)
    with pytest.raises(PreconditionError):
        prony_dct_reconstruct(sample_dct(x, 7), 2)
    with pytest.raises(PreconditionError):
        prony_dct_reconstruct(sample_gft(x, 8), 2)


def test_sparse_signal_validation():
    with pytest.raises(PreconditionError):
        SparseSignal(8, [1, 1], [1.0, 2.0])
    with pytest.raises(PreconditionError):
        SparseSignal(8, [9], [1.0])
    x = SparseSignal(8, [5, 2], [1.0, 2.0])
    assert list(x.support) == [2, 5] and list(x.amplitudes) == [2.0, 1.0]
    back = SparseSignal.from_dense(x.dense())
    assert np.array_equal(back.support, x.support) and np.array_equal(back.amplitudes, x.amplitudes)


@pytest.mark.parametrize("n,M,special,expected", [
    (128, 6, False, (3, 16)), (16, 9, False, (0, 16)), (128, 6, True, (2, 32)), (64, 2, False, (4, 4)),
])
def test_max_levels(n, M, special, expected):
    assert max_levels(n, M, special) == expected


def test_factorization_example():
    g = CirculantGraph.unweighted(128, (1, 3, 5))
    fact = factorize_gft(g, 6, 3)
    assert fact.residual < 1e-8
    assert fact.coarse_graph.n == 16 and fact.coarse_graph.offsets == (1, 3, 5)
    assert fact.operator().shape == (16, 128)
    x = SparseSignal.random(128, 3, np.random.default_rng(0))
    y_coarse, y = sample_via_pipeline(x, fact)
    assert y_coarse.shape == (16,)
    assert np.max(np.abs(y.y - sample_gft(x, 6).y)) < 1e-8
    assert np.allclose(prony_reconstruct(y, 3).dense(), x.dense(), atol=1e-8)


def test_factorization_failures():
    with pytest.raises(BezoutError):
        factorize_gft(CirculantGraph.unweighted(64, (1, 2, 3)), 6, 2)
    with pytest.raises(InvertibilityError):
        factorize_gft(CirculantGraph.unweighted(64, (1, 3)), 4, 3)
    with pytest.raises(PreconditionError):
        factorize_gft(CirculantGraph.unweighted(128, (1, 3, 5)), 6, 4)


def test_zero_level_factorization_is_dft():
    g = CirculantGraph.cycle(16)
    fact = factorize_gft(g, 4, 0)
    assert fact.residual < 1e-12 and np.allclose(fact.c_hat, 1.0)
