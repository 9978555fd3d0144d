import numpy as np
import pytest

from gfri import CirculantGraph, PathGraph, PreconditionError, SparseSignal, graph_product, plan_mrt
from gfri.circulant import adjacency_matrix, is_circulant
from gfri.products import (
    TensorSignal,
    inverse_separable_gwt,
    multidim_sample_reconstruct,
    nearest_circulant,
    nearest_kronecker_circulant,
    nearest_symmetric_circulant,
    separable_gwt,
    tensor_decompose,
)


def _edge_oracle(a1, a2, kind):
    """Edge rule applied pair by pair on row-stacked vertices ``i1 * n2 + i2``."""
    n1, n2 = len(a1), len(a2)
    out = np.zeros((n1 * n2, n1 * n2))
    for u1 in range(n1):
        for u2 in range(n2):
            for v1 in range(n1):
                for v2 in range(n2):
                    same1, same2 = u1 == v1, u2 == v2
                    adj1, adj2 = a1[u1, v1], a2[u2, v2]
                    if kind == "kronecker":
                        w = adj1 * adj2
                    elif kind == "cartesian":
                        w = same1 * adj2 + adj1 * same2
                    elif kind == "strong":
                        w = same1 * adj2 + adj1 * same2 + adj1 * adj2
                    else:
                        w = (adj1 > 0) + same1 * adj2
                    out[u1 * n2 + u2, v1 * n2 + v2] = w
    return out


@pytest.mark.parametrize("kind", ["kronecker", "cartesian", "strong", "lexicographic"])
def test_products_match_edge_rules(kind):
    g1, g2 = CirculantGraph.cycle(5), CirculantGraph.unweighted(6, (1, 2))
    a = graph_product(g1, g2, kind).adjacency
    assert np.array_equal(a, _edge_oracle(adjacency_matrix(g1), adjacency_matrix(g2), kind))


@pytest.mark.parametrize("kind", ["kronecker", "cartesian", "strong"])
def test_circulant_products_are_block_circulant_and_symmetric(kind):
    p = graph_product(CirculantGraph.cycle(4), CirculantGraph.cycle(5), kind)
    assert np.allclose(p.adjacency, p.adjacency.T)
    assert p.shape == (4, 5) and p.n == 20
    assert np.allclose(p.laplacian().sum(axis=1), 0)


def test_lexicographic_circulant_after_relabel():
    p = graph_product(CirculantGraph.cycle(4), CirculantGraph.cycle(6), "lexicographic")
    assert not is_circulant(p.adjacency)
    q = p.circulant_labels()
    assert is_circulant(p.adjacency[np.ix_(q, q)])


def test_tensor_decompose_rank():
    rng = np.random.default_rng(0)
    x = np.kron(rng.standard_normal(4), rng.standard_normal(5)) + np.kron(rng.standard_normal(4), rng.standard_normal(5))
    t = tensor_decompose(x, 4, 5)
    assert t.rank == 2 and np.allclose(t.reassemble(), x)
    with pytest.raises(PreconditionError):
        tensor_decompose(x, 3, 5)


@pytest.mark.parametrize("g1,g2", [
    (CirculantGraph.cycle(16), CirculantGraph.unweighted(12, (1, 2))),
    (PathGraph(16), CirculantGraph.cycle(8)),
])
def test_multidim_recovery(g1, g2):
    rng = np.random.default_rng(1)
    x1 = SparseSignal.random(g1.n, 2, rng).dense()
    x2 = SparseSignal.random(g2.n, 2, rng).dense()
    x = TensorSignal.rank_one(x1, x2)
    rec, y = multidim_sample_reconstruct(x, g1, g2, 2, 2)
    assert np.max(np.abs(rec.reassemble() - x.reassemble())) < 1e-8


def test_nearest_circulant_is_projection():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((6, 6))
    c = nearest_circulant(a)
    assert is_circulant(c)
    assert np.allclose(nearest_circulant(c), c)
    assert np.isclose(np.sum((a - c) * c), 0, atol=1e-12)
    s = nearest_symmetric_circulant(a)
    assert np.allclose(s, s.T) and np.allclose(np.diag(s), 0)


def test_kronecker_exact_and_perturbed():
    g1, g2 = CirculantGraph(5, [(1, 1.0), (2, 0.3)]), CirculantGraph(4, [(1, 2.0)])
    a = np.kron(adjacency_matrix(g1), adjacency_matrix(g2))
    approx = nearest_kronecker_circulant(a, 5, 4)
    assert approx.residual < 1e-10
    h1, h2 = approx.graphs()
    assert h1.offsets == (1, 2) and h2.offsets == (1,)
    assert np.allclose(approx.product(), a)
    e = 0.05 * np.random.default_rng(3).standard_normal(a.shape)
    noisy = nearest_kronecker_circulant(a + e, 5, 4)
    assert noisy.residual <= np.linalg.norm(e) + 1e-12
    assert np.all(np.diff(noisy.history) <= 1e-12)


def test_separable_gwt_round_trip():
    p1 = plan_mrt(CirculantGraph.cycle(16), "HGSWT", 1, 2)
    p2 = plan_mrt(CirculantGraph.cycle(8), "HGSWT", 1, 1)
    rng = np.random.default_rng(4)
    x = TensorSignal.rank_one(rng.standard_normal(16), rng.standard_normal(8))
    w = separable_gwt(x, (p1, p2))
    assert np.allclose(inverse_separable_gwt(w, (p1, p2)).reassemble(), x.reassemble())
    const = TensorSignal.rank_one(np.ones(16), np.ones(8))
    nnz = np.count_nonzero(np.abs(separable_gwt(const, (p1, p2)).reassemble()) > 1e-12)
    assert nnz == (16 >> 2) * (8 >> 1)
