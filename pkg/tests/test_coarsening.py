import numpy as np
import pytest

from corpus import corpus
from gfri import CirculantGraph, PathGraph, PreconditionError, coarsen, kron_coarsen, kron_reduce, spectral_reduce
from gfri.circulant import is_circulant, laplacian


def test_kron_cycle4():
    assert np.allclose(kron_reduce(laplacian(CirculantGraph.cycle(4)), [0, 2]), [[1, -1], [-1, 1]])


def test_kron_path4_exact():
    out = kron_reduce(laplacian(PathGraph(4)), [0, 2])
    assert np.array_equal(out, [[0.5, -0.5], [-0.5, 0.5]])


def test_kron_cycle8_halves_weights():
    assert kron_coarsen(CirculantGraph.cycle(8)) == CirculantGraph(4, [(1, 0.5)])


def test_kron_preserves_zero_row_sums_and_circulance():
    for g in corpus(32):
        if g.n % 2:
            continue
        out = kron_reduce(laplacian(g), range(0, g.n, 2))
        assert np.allclose(out.sum(axis=1), 0, atol=1e-10)
        assert is_circulant(out, 1e-10)


def test_kron_bandwidth_may_grow_spectral_never_does():
    g = CirculantGraph.unweighted(32, (1, 2))
    assert kron_coarsen(g).bandwidth >= g.bandwidth
    for h in corpus(128):
        if h.n % 2 == 0 and 2 * h.bandwidth < h.n / 2:
            assert spectral_reduce(h, 1).bandwidth <= h.bandwidth


def test_spectral_reduce_levels():
    g = CirculantGraph(64, [(1, 1.0), (3, 0.25)])
    assert spectral_reduce(g, 0) is g
    h = spectral_reduce(g, 2)
    assert h.n == 16 and h.generators == g.generators
    with pytest.raises(PreconditionError):
        spectral_reduce(g, 4)


def test_coarsen_schemes():
    g = CirculantGraph.unweighted(32, (1, 3))
    for scheme in ("same-generating-set", "kron", "spectral"):
        res = coarsen(g, scheme)
        assert res.n == 16 and res.kept == tuple(range(0, 32, 2))
        assert res.laplacian.shape == (16, 16)
    with pytest.raises(PreconditionError):
        coarsen(g, "other")


def test_kron_rejects_bad_keep_sets():
    with pytest.raises(PreconditionError):
        kron_reduce(laplacian(CirculantGraph.cycle(4)), [])
    with pytest.raises(PreconditionError):
        kron_reduce(laplacian(CirculantGraph.cycle(4)), [7])
