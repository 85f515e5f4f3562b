import numpy as np
import pytest
from hypothesis import given, strategies as st

from sfcovsel.exceptions import InvalidParameterError, TractabilityError
from sfcovsel.weights import FAMILIES, make_weights, weight_diff

SQ2, SQ3 = np.sqrt(2.0), np.sqrt(3.0)


def test_sqrt_values_and_diffs():
    w = make_weights("sqrt", {"beta": 0.0}, 3)
    np.testing.assert_allclose(w.values, [0, SQ2 - 1, SQ3 - 1, 1], atol=1e-15)
    np.testing.assert_allclose(w.diffs, [0.41421, 0.31784, 0.26795],
                               atol=5e-6)
    assert weight_diff(w, 0) == pytest.approx(SQ2 - 1, abs=1e-15)


def test_linear_is_modular():
    w = make_weights("linear", {"scale": 2.5}, 3)
    assert list(w.diffs) == [2.5, 2.5, 2.5]
    assert all(weight_diff(w, k) == 2.5 for k in range(3))


def test_log_shifted_to_zero():
    w = make_weights("log", {"scale": 1, "eps": 1}, 2)
    np.testing.assert_allclose(w.values, [0, np.log(2), np.log(3)])
    np.testing.assert_allclose(w.diffs, [0.69315, 0.40546], atol=1e-5)


def test_geometric_diff():
    w = make_weights("geometric", {"ratio": 0.5, "scale": 1}, 4)
    assert weight_diff(w, 1) == pytest.approx(0.25, abs=1e-15)


def test_smoothed_log_adds_linear_term():
    base = make_weights("log", {"eps": 2.0}, 10)
    smooth = make_weights("smoothed-log", {"eps": 2.0, "beta": 0.3}, 10)
    np.testing.assert_allclose(smooth.diffs, base.diffs + 0.3)


@pytest.mark.parametrize("family,params", [
    ("log", {"eps": 0.0}),
    ("log", {"scale": -1.0}),
    ("geometric", {"ratio": 1.0}),
    ("geometric", {"ratio": 0.0}),
    ("sqrt", {"gamma": 1.0}),
    ("cubic", {}),
])
def test_invalid_parameters(family, params):
    with pytest.raises(InvalidParameterError):
        make_weights(family, params, 5)


def test_invalid_max_degree():
    with pytest.raises(InvalidParameterError):
        make_weights("sqrt", None, 0)


def test_negative_beta_breaks_monotonicity():
    with pytest.raises(TractabilityError):
        make_weights("sqrt", {"beta": -0.2}, 20)
    # small enough tables can still be tractable
    make_weights("sqrt", {"beta": -0.2}, 2)


def test_diff_index_out_of_range():
    w = make_weights("sqrt", None, 3)
    with pytest.raises(IndexError):
        weight_diff(w, 3)
    with pytest.raises(IndexError):
        weight_diff(w, -1)


def test_immutable():
    w = make_weights("sqrt", None, 3)
    with pytest.raises(ValueError):
        w.diffs[0] = 1.0
    with pytest.raises(TypeError):
        w.params["beta"] = 2.0


def test_roundtrip_dict():
    w = make_weights("smoothed-log", {"eps": 0.5, "beta": 0.1}, 7)
    w2 = type(w).from_dict(w.to_dict())
    assert w2 == w
    np.testing.assert_array_equal(w2.diffs, w.diffs)


family_params = st.sampled_from(FAMILIES).flatmap(lambda f: st.tuples(
    st.just(f),
    st.fixed_dictionaries({
        "log": {"eps": st.floats(1e-3, 10), "scale": st.floats(0.1, 5)},
        "smoothed-log": {"eps": st.floats(1e-3, 10),
                         "beta": st.floats(0, 3)},
        "sqrt": {"beta": st.floats(0, 3), "scale": st.floats(0.1, 5)},
        "linear": {"scale": st.floats(0.1, 5)},
        "geometric": {"ratio": st.floats(0.01, 0.99),
                      "scale": st.floats(0.1, 5)},
    }[f])))


@given(family_params, st.integers(1, 80))
def test_tractability_invariants(fp, max_degree):
    family, params = fp
    w = make_weights(family, params, max_degree)
    assert w.values[0] == 0.0
    assert np.all(w.diffs >= 0)
    assert np.all(np.diff(w.diffs) <= 1e-12 * max(1, w.diffs.max()))
    np.testing.assert_allclose(np.concatenate([[0], np.cumsum(w.diffs)]),
                               w.values, rtol=0, atol=1e-12 * max(
                                   1, abs(w.values[-1])))


@given(st.floats(1e-3, 10), st.floats(0.1, 3), st.integers(1, 40))
def test_log_shift_leaves_diffs(eps, scale, max_degree):
    w = make_weights("log", {"eps": eps, "scale": scale}, max_degree)
    raw = scale * np.log(np.arange(max_degree + 1) + eps)
    np.testing.assert_allclose(w.diffs, np.diff(raw), rtol=1e-9, atol=1e-12)
