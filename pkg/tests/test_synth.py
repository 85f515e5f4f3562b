import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from sfcovsel.exceptions import (DegenerateCovarianceError,
                                 InvalidParameterError,
                                 NotPositiveDefiniteError)
from sfcovsel.regularizer import EdgeSet
from sfcovsel.synth import (DataMatrix, GroundTruthGraph, build_precision,
                            empirical_covariance, generate_ba,
                            generate_powerlaw_config, is_graphical,
                            powerlaw_degree_sequence, sample_gaussian)


def connected(es):
    A = es.adjacency() > 0
    seen, stack = {0}, [0]
    while stack:
        for j in np.flatnonzero(A[stack.pop()]):
            if j not in seen:
                seen.add(int(j))
                stack.append(int(j))
    return len(seen) == es.n


@given(st.integers(0, 2**32 - 1))
def test_ba_m1_is_tree(seed):
    g = generate_ba(5, 1, seed)
    assert len(g.edges) == 4 and connected(g.edges)


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(0, 40))
def test_ba_edge_count(seed, m, extra):
    n = m + 1 + extra
    g = generate_ba(n, m, seed)
    assert len(g.edges) == m * (n - m)
    assert g.model == "ba" and g.params == {"m": m}


def test_ba_n60():
    assert len(generate_ba(60, 2, 7).edges) == 116


def test_ba_deterministic():
    assert generate_ba(60, 2, 3).edges == generate_ba(60, 2, 3).edges
    assert generate_ba(60, 2, 3).edges != generate_ba(60, 2, 4).edges


@pytest.mark.parametrize("n,m", [(2, 2), (3, 0), (0, 1)])
def test_ba_invalid(n, m):
    with pytest.raises(InvalidParameterError):
        generate_ba(n, m, 0)


def test_ba_degree_tail():
    deg = np.concatenate([generate_ba(500, 2, s).edges.degrees()
                          for s in range(200)])
    d = np.arange(4, 51)
    surv = np.array([(deg >= k).mean() for k in d])
    slope = np.polyfit(np.log(d), np.log(surv), 1)[0]
    assert -3.6 <= slope <= -2.4


def test_powerlaw_simple_graph():
    for seed in range(20):
        g = generate_powerlaw_config(60, 2.0, seed)
        assert all(i < j for i, j in g.edges.edges)
        assert g.edges.n == 60


def test_powerlaw_steep_tail_is_matching():
    counts = [len(generate_powerlaw_config(60, 50.0, s).edges)
              for s in range(20)]
    assert abs(np.mean(counts) - 30) <= 1


def test_powerlaw_degree_sequence_chi_squared():
    rng = np.random.default_rng(5)
    n, a = 60, 2.0
    deg = np.concatenate([powerlaw_degree_sequence(n, a, rng)
                          for _ in range(200)])
    support = np.arange(1, n)
    p = support ** -a
    p /= p.sum()
    expected = p * deg.size
    observed = np.bincount(deg, minlength=n)[1:]
    # merge the sparse tail so every bin expects at least five draws
    cut = np.flatnonzero(expected < 5)[0]
    obs = np.append(observed[:cut], observed[cut:].sum())
    exp = np.append(expected[:cut], expected[cut:].sum())
    assert stats.chisquare(obs, exp).pvalue > 0.01


def test_powerlaw_deterministic_and_invalid():
    assert generate_powerlaw_config(30, 2.0, 1).edges == \
        generate_powerlaw_config(30, 2.0, 1).edges
    with pytest.raises(InvalidParameterError):
        generate_powerlaw_config(3, 2.0, 0)
    with pytest.raises(InvalidParameterError):
        generate_powerlaw_config(30, 1.0, 0)


def test_is_graphical():
    assert is_graphical([1, 1])
    assert is_graphical([2, 2, 2])
    assert not is_graphical([3, 1])
    assert not is_graphical([3, 3, 1, 1])
    assert not is_graphical([1, 1, 1])


def test_build_precision_examples():
    np.testing.assert_array_equal(build_precision(EdgeSet(3)),
                                  0.5 * np.eye(3))
    np.testing.assert_allclose(build_precision(EdgeSet(2, [(0, 1)])),
                               [[0.7, -0.2], [-0.2, 0.7]])
    g = generate_ba(30, 2, 0)
    P = build_precision(g)
    np.testing.assert_allclose(np.diag(P), 0.5 + 0.2 * g.edges.degrees())


def test_build_precision_not_pd():
    es = EdgeSet(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(NotPositiveDefiniteError):
        build_precision(es, edge_weight=1.0, base=-1.5)


def test_sampling_deterministic_and_covariance():
    P = build_precision(generate_ba(8, 2, 0))
    a = sample_gaussian(P, 1000, 11)
    b = sample_gaussian(P, 1000, 11)
    assert isinstance(a, DataMatrix)
    np.testing.assert_array_equal(a.samples, b.samples)
    big = sample_gaussian(P, 200000, 2).samples
    C = empirical_covariance(big, normalize=False)
    np.testing.assert_allclose(C, np.linalg.inv(P), atol=0.05)


def test_empirical_covariance_properties():
    x = np.random.default_rng(0).normal(size=(50, 6)) * [1, 2, 3, 4, 5, 6]
    C = empirical_covariance(x)
    assert np.all(np.diag(C) == 1.0)
    assert np.array_equal(C, C.T)
    assert np.linalg.eigvalsh(C).min() > -1e-12
    raw = empirical_covariance(x, normalize=False)
    np.testing.assert_allclose(raw, np.cov(x, rowvar=False, bias=True))


def test_empirical_covariance_errors():
    with pytest.raises(DegenerateCovarianceError):
        empirical_covariance(np.c_[np.arange(5.0), np.ones(5)])
    with pytest.raises(InvalidParameterError):
        empirical_covariance(np.ones((1, 3)))


def test_graph_roundtrip():
    g = generate_powerlaw_config(20, 2.0, 9)
    g2 = GroundTruthGraph.from_dict(g.to_dict())
    assert g2 == g
