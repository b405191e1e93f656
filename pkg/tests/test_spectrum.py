import numpy as np
import pytest
from hypothesis import given, strategies as st

from spectraledge import (
    InvalidConfigError,
    check_assumption3,
    load_spectrum,
    solve_edge,
    with_size,
)


def test_constant_spectrum():
    model = load_spectrum({"type": "constant", "d": 1, "M": 500, "N": 500})
    assert model.M == 500 and model.N == 500
    assert model.c_N == 1.0
    assert np.all(model.d == 1.0)


def test_explicit_zero_spectrum():
    model = load_spectrum({"type": "explicit", "d": [0, 0, 0], "M": 3, "N": 6})
    assert np.all(model.d == 0.0)
    assert model.c_N == 0.5


def test_uniform_sq_grid_matches_endpoints():
    model = load_spectrum({"type": "uniform_sq", "v_min": 1, "v_max": 2, "M": 11, "N": 11})
    dsq = model.d_sq
    assert dsq[0] == pytest.approx(2.0)
    assert dsq[-1] == pytest.approx(1.0)
    assert np.allclose(np.diff(dsq), -0.1)


def test_uniform_sq_single_atom():
    model = load_spectrum({"type": "uniform_sq", "v_min": 1, "v_max": 2, "M": 1, "N": 4})
    assert model.d_sq[0] == pytest.approx(2.0)


def test_entries_sorted_non_increasing():
    model = load_spectrum({"type": "explicit", "d": [0.5, 2.0, 1.0], "M": 3, "N": 3})
    assert np.all(np.diff(model.d) <= 0)
    assert model.d[0] == 2.0


def test_ties_are_allowed():
    model = load_spectrum({"type": "explicit", "d": [1.0, 1.0, 0.5], "M": 3, "N": 5})
    assert model.d[0] == model.d[1] == 1.0


@pytest.mark.parametrize(
    "config",
    [
        {"type": "explicit", "d": [1.0, -0.1], "M": 2, "N": 4},
        {"type": "constant", "d": 1.0, "M": 6, "N": 3},
        {"type": "explicit", "d": [], "M": 0, "N": 3},
        {"type": "explicit", "d": [1.0], "M": 2, "N": 4},
        {"type": "mystery", "d": [1.0], "M": 1, "N": 1},
        {"type": "uniform_sq", "v_min": -1, "v_max": 2, "M": 4, "N": 4},
        {"type": "constant", "d": "one", "M": 3, "N": 3},
        {"type": "constant", "d": 1.0, "M": 3.5, "N": 4},
    ],
)
def test_invalid_configs_rejected(config):
    with pytest.raises(InvalidConfigError):
        load_spectrum(config)


@given(
    st.lists(st.floats(min_value=0.0, max_value=50.0, allow_nan=False), min_size=1, max_size=20),
    st.integers(min_value=0, max_value=30),
)
def test_load_serialize_load_round_trip(entries, extra):
    M = len(entries)
    config = {"type": "explicit", "d": entries, "M": M, "N": M + extra}
    model = load_spectrum(config)
    again = load_spectrum(model.to_config())
    assert again.M == model.M and again.N == model.N
    assert np.array_equal(again.d, model.d)


def test_empirical_measure_total_mass():
    model = load_spectrum({"type": "explicit", "d": [2.0, 1.0, 0.5], "M": 3, "N": 12})
    atoms, weights = model.empirical_measure()
    assert atoms.shape == weights.shape == (3,)
    # the scaled measure c_N * (1/M) sum delta integrates to c_N
    assert model.c_N * weights.sum() == pytest.approx(model.c_N, abs=1e-15)


def test_assumption3_margin_constant_spectrum():
    model = load_spectrum({"type": "constant", "d": 1, "M": 100, "N": 100})
    margin = check_assumption3(model, solve_edge(model))
    assert margin == pytest.approx(2.0, abs=1e-10)


def test_assumption3_margin_zero_signal():
    model = load_spectrum({"type": "explicit", "d": [0.0] * 10, "M": 10, "N": 10})
    margin = check_assumption3(model, solve_edge(model))
    assert margin == pytest.approx(1.0, abs=1e-10)


def test_assumption3_margin_uniform_example():
    model = load_spectrum({"type": "uniform_sq", "v_min": 1, "v_max": 2, "M": 500, "N": 500})
    margin = check_assumption3(model, solve_edge(model))
    assert margin == pytest.approx(1.89, abs=0.01)


def test_with_size_regenerates_shape():
    model = load_spectrum({"type": "constant", "d": 1, "M": 50, "N": 100})
    resized = with_size(model, 300)
    assert resized.N == 300 and resized.M == 150
    assert resized.c_N == pytest.approx(model.c_N)


def test_with_size_rejects_explicit():
    model = load_spectrum({"type": "explicit", "d": [1.0, 0.5], "M": 2, "N": 4})
    with pytest.raises(InvalidConfigError):
        with_size(model, 8)


def test_model_is_immutable():
    model = load_spectrum({"type": "constant", "d": 1, "M": 4, "N": 4})
    with pytest.raises(ValueError):
        model.d[0] = 7.0
