import math

import numpy as np
import pytest

from esnbench.activations import (
    ActivationFn,
    REGISTRY_NAMES,
    get_activation,
    register,
    registry,
    registry_index,
)

EXPECTED_NAMES = {
    "tanh", "linear", "sinc", "gaussian", "mexican_hat",
    "morlet", "nmr", "laplace", "cos", "sin",
}


def test_registry_has_exactly_ten_distinct_names():
    acts = registry()
    assert len(acts) == 10
    assert {a.name for a in acts} == EXPECTED_NAMES


def test_registry_ordering_is_stable():
    assert [a.name for a in registry()] == [a.name for a in registry()]
    assert tuple(a.name for a in registry()) == REGISTRY_NAMES


def test_registry_contains_sinc_and_mexican_hat():
    names = [a.name for a in registry()]
    assert "sinc" in names
    assert "mexican_hat" in names


def test_laplace_is_flagged_even():
    assert get_activation("laplace").parity == "even"


def test_eval_examples():
    assert get_activation("tanh")(0.0) == 0.0
    assert get_activation("sinc")(0.0) == 1.0
    # (1 - 0^2) * exp(0) = 1
    assert get_activation("mexican_hat")(0.0) == 1.0
    # e^(-|-2|)
    assert get_activation("laplace")(-2.0) == pytest.approx(math.exp(-2.0), abs=1e-15)


def test_eval_vec_examples():
    linear = get_activation("linear")
    np.testing.assert_array_equal(linear.apply([1.0, -2.0, 0.5]), [1.0, -2.0, 0.5])
    gaussian = get_activation("gaussian")
    np.testing.assert_array_equal(gaussian.apply([0.0, 0.0]), [1.0, 1.0])
    # saturation to machine precision
    np.testing.assert_array_equal(get_activation("tanh").apply([1000.0]), [1.0])


@pytest.mark.parametrize("act", registry(), ids=lambda a: a.name)
def test_parity_flags_hold_numerically(act):
    rng = np.random.default_rng(11)
    xs = rng.uniform(-5.0, 5.0, 1000)
    left = act.apply(xs)
    right = act.apply(-xs)
    if act.parity == "even":
        assert np.max(np.abs(left - right)) <= 1e-12
    elif act.parity == "odd":
        assert np.max(np.abs(left + right)) <= 1e-12
    else:
        pytest.fail(f"builtin {act.name} should be odd or even")


@pytest.mark.parametrize("act", registry(), ids=lambda a: a.name)
def test_monotonic_flags_hold_numerically(act):
    xs = np.linspace(-6.0, 6.0, 4001)
    diffs = np.diff(act.apply(xs))
    if act.monotonic:
        assert np.all(diffs >= 0.0)
    else:
        assert np.any(diffs < 0.0)


@pytest.mark.parametrize("act", registry(), ids=lambda a: a.name)
def test_total_and_finite_on_wide_range(act):
    xs = np.concatenate([
        np.linspace(-1e8, 1e8, 101),
        [-1e300, -1e154, -745.0, 745.0, 1e154, 1e300, 0.0],
    ])
    out = act.apply(xs)
    assert np.all(np.isfinite(out))


@pytest.mark.parametrize("act", registry(), ids=lambda a: a.name)
def test_vector_eval_is_bit_identical_to_scalar_eval(act):
    rng = np.random.default_rng(7)
    xs = rng.uniform(-30.0, 30.0, 257)
    vec = act.apply(xs)
    scalar = np.array([act(x) for x in xs])
    np.testing.assert_array_equal(vec, scalar)


def test_sinc_continuity_at_origin():
    sinc = get_activation("sinc")
    assert abs(sinc(1e-8) - 1.0) <= 1e-10


def test_non_finite_scalar_input_rejected():
    tanh = get_activation("tanh")
    for bad in (math.nan, math.inf, -math.inf):
        with pytest.raises(ValueError):
            tanh(bad)


def test_non_finite_vector_input_names_offending_index():
    with pytest.raises(ValueError, match="index 2"):
        get_activation("gaussian").apply([0.0, 1.0, math.nan, 2.0])


def test_unknown_name_rejected_with_valid_names():
    with pytest.raises(ValueError) as exc:
        get_activation("relu")
    for name in EXPECTED_NAMES:
        assert name in str(exc.value)


def test_registry_is_extensible_and_swappable():
    original = get_activation("gaussian")
    try:
        with pytest.raises(ValueError, match="replace=True"):
            register(ActivationFn("gaussian", np.exp, "neither", False))
        # swap in an alternative definition, position preserved
        wide = ActivationFn("gaussian", lambda x: np.exp(-x * x), "even", False)
        register(wide, replace=True)
        assert get_activation("gaussian")(1.0) == pytest.approx(math.exp(-1.0))
        assert registry_index("gaussian") == registry_index(original.name)
        assert len(registry()) == 10
    finally:
        register(original, replace=True)
    assert get_activation("gaussian") is original
