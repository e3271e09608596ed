import math

import numpy as np
import pytest

import hypervar


def test_single_weight_tail_matches_chi_square():
    value, bound = hypervar.mixture_upper_tail([1.0], 3.841459)
    assert value == pytest.approx(0.04999999465319563, abs=1e-12)
    assert bound <= 1e-10


def test_one_dimensional_var_is_normal_quantile():
    rows = hypervar.compute_var([-1.0], 0.5, [0.05], tolerance=1e-12)
    assert rows[0]["method"] == "neg-only"
    assert rows[0]["R"] == pytest.approx(1.959963984540054, abs=1e-8)
    assert rows[0]["V"] == rows[0]["R"] ** 2 / 2 - 0.5


def test_mixed_tail_agrees_with_sampling():
    eig = [0.3, -0.5, -0.2]
    value, se, method = hypervar.tail_probability(0.5, eig, replicates=16, samples=20000)
    assert method == "spherical-radial-mc"
    rng = np.random.default_rng(3)
    z = rng.standard_normal((1_000_000, 3))
    gap = 0.5 * z[:, 1] ** 2 + 0.2 * z[:, 2] ** 2 - 0.3 * z[:, 0] ** 2
    p = np.mean(gap >= 0.25)
    ref_se = math.sqrt(p * (1 - p) / len(gap))
    assert abs(value - p) <= 3 * math.hypot(se, ref_se)


def test_signed_spectrum_of_diagonal_model():
    s = hypervar.signed_spectrum([[1.0, 0.0], [0.0, 1.0]], [[2.0, 0.0], [0.0, -3.0]])
    assert s["d_plus"] == pytest.approx([2.0])
    assert s["d_minus"] == pytest.approx([3.0])


def test_greeks_parity():
    c = hypervar.bs_greeks("call", 40.0, 42.0, 0.05, 0.5, 0.3)
    p = hypervar.bs_greeks("put", 40.0, 42.0, 0.05, 0.5, 0.3)
    assert c["price"] - p["price"] == pytest.approx(40.0 - 42.0 * math.exp(-0.025), abs=1e-10)


def test_ewma_last_observation_dominates_for_small_decay():
    cov = hypervar.ewma_covariance([[0.01, -0.02], [0.03, 0.005]], 1e-12)
    assert cov[0][1] == pytest.approx(1.5e-4, abs=1e-15)


def test_errors_are_typed():
    with pytest.raises(hypervar.InputError):
        hypervar.mixture_upper_tail([1.0, -1.0], 1.0)
    with pytest.raises(hypervar.NumericalError):
        hypervar.signed_spectrum([[1.0, 2.0], [2.0, 1.0]], [[1.0, 0.0], [0.0, 1.0]])
