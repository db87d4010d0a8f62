import numpy as np
import pytest
import scipy.linalg

from esnbench.activations import get_activation
from esnbench.reservoir import (
    DivergenceError,
    Reservoir,
    ReservoirConfig,
    build_reservoir,
    spectral_radius,
)


def gelfand_radius(m: np.ndarray, squarings: int = 18) -> float:
    """Independent spectral-radius oracle via ||M^(2^k)||^(1/2^k).

    Repeated squaring with norm accumulation; no eigenvalue code involved.
    """
    n = np.asarray(m, dtype=np.float64)
    log_scale = 0.0
    for _ in range(squarings):
        norm = np.linalg.norm(n)
        n = (n / norm) @ (n / norm)
        log_scale = 2.0 * (log_scale + np.log(norm))
    k = 2.0**squarings
    return float(np.exp((log_scale + np.log(np.linalg.norm(n))) / k))


class TestSpectralRadius:
    def test_identity(self):
        assert spectral_radius(np.eye(3)) == pytest.approx(1.0, rel=1e-12)

    def test_rotation_matrix_has_complex_pair(self):
        # eigenvalues +-i, modulus 1
        assert spectral_radius([[0.0, 1.0], [-1.0, 0.0]]) == pytest.approx(1.0, rel=1e-12)

    def test_zero_matrix(self):
        assert spectral_radius(np.zeros((4, 4))) == 0.0

    def test_non_square_rejected(self):
        with pytest.raises(ValueError, match="square"):
            spectral_radius(np.zeros((2, 3)))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            spectral_radius([[np.nan, 0.0], [0.0, 1.0]])

    def test_agrees_with_gelfand_oracle(self):
        rng = np.random.default_rng(5)
        m = rng.normal(0.0, 0.1, (60, 60))
        assert spectral_radius(m) == pytest.approx(gelfand_radius(m), rel=1e-4)


class TestBuild:
    def test_forced_diagonal_is_rescaled_exactly(self):
        cfg = ReservoirConfig(size=2, input_dim=1, sigma=1.0, seed=0)
        res = build_reservoir(cfg, w=np.diag([2.0, 1.0]))
        np.testing.assert_array_equal(res.w, np.diag([0.95, 0.475]))

    def test_construction_is_deterministic(self):
        cfg = ReservoirConfig(size=30, input_dim=2, sigma=0.5, seed=99)
        a, b = build_reservoir(cfg), build_reservoir(cfg)
        np.testing.assert_array_equal(a.w, b.w)
        np.testing.assert_array_equal(a.w_in, b.w_in)

    def test_radius_lands_on_target(self):
        cfg = ReservoirConfig(size=100, input_dim=1, sigma=0.01, seed=1)
        res = build_reservoir(cfg)
        rho = spectral_radius(res.w)
        assert 0.94905 <= rho <= 0.95095
        # cross-check with an independent eigenvalue routine and with the
        # eigenvalue-free Gelfand oracle
        rho_scipy = float(np.max(np.abs(scipy.linalg.eigvals(res.w))))
        assert rho == pytest.approx(rho_scipy, rel=1e-9)
        assert rho == pytest.approx(gelfand_radius(res.w), rel=1e-4)

    def test_radius_within_contract_across_seeds(self):
        for seed in range(5):
            cfg = ReservoirConfig(size=50, input_dim=1, sigma=0.2, seed=seed)
            rho = spectral_radius(build_reservoir(cfg).w)
            assert abs(rho - 0.95) / 0.95 <= 1e-3

    def test_state_zero_after_construction(self):
        res = build_reservoir(ReservoirConfig(size=10, input_dim=1, sigma=1.0, seed=3))
        np.testing.assert_array_equal(res.state, np.zeros(10))

    def test_zero_radius_matrix_rejected(self):
        cfg = ReservoirConfig(size=2, input_dim=1, sigma=1.0, seed=0)
        with pytest.raises(ValueError, match="different seed"):
            build_reservoir(cfg, w=np.zeros((2, 2)))

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(size=0, input_dim=1, sigma=1.0, seed=0),
            dict(size=4, input_dim=0, sigma=1.0, seed=0),
            dict(size=4, input_dim=1, sigma=0.0, seed=0),
            dict(size=4, input_dim=1, sigma=1.0, seed=0, spectral_radius_target=-1.0),
            dict(size=4, input_dim=1, sigma=1.0, seed=0, activation="nope"),
        ],
    )
    def test_config_validation(self, kwargs):
        with pytest.raises(ValueError):
            ReservoirConfig(**kwargs)


class TestStep:
    def test_zero_weights_tanh_gives_zero_state(self):
        res = Reservoir(np.zeros((3, 2)), np.zeros((3, 3)), get_activation("tanh"))
        np.testing.assert_array_equal(res.step([0.7]), np.zeros(3))

    def test_zero_weights_sinc_gives_ones(self):
        res = Reservoir(np.zeros((3, 2)), np.zeros((3, 3)), get_activation("sinc"))
        np.testing.assert_array_equal(res.step([-4.2]), np.ones(3))

    def test_hand_arithmetic_single_unit(self):
        # 0.5*1 + 0.25*2 + 0.1*0.4 = 1.04
        res = Reservoir(np.array([[0.5, 0.25]]), np.array([[0.1]]), get_activation("linear"))
        res.state = np.array([0.4])
        assert res.step([2.0])[0] == pytest.approx(1.04, abs=1e-12)

    def test_dimension_mismatch_rejected(self):
        res = Reservoir(np.zeros((3, 2)), np.zeros((3, 3)), get_activation("tanh"))
        with pytest.raises(ValueError, match="shape"):
            res.step([1.0, 2.0])

    def test_divergence_error_names_the_step(self):
        # linear gain 2 doubles the state every step until overflow
        res = Reservoir(np.array([[0.0, 1.0]]), np.array([[2.0]]), get_activation("linear"))
        res.state = np.array([1e308])
        with pytest.raises(DivergenceError, match="step 1"):
            res.step([0.0])


class TestHarvest:
    def make(self, seed=0, size=8):
        return build_reservoir(ReservoirConfig(size=size, input_dim=1, sigma=0.3, seed=seed))

    def test_boundary_washout_leaves_one_row(self):
        res = self.make()
        states = res.harvest(np.zeros((100, 1)), washout=99)
        assert states.shape == (1, res.size)

    def test_zero_inputs_tanh_stay_at_fixed_point(self):
        res = Reservoir(np.zeros((5, 2)), np.eye(5) * 0.5, get_activation("tanh"))
        states = res.harvest(np.zeros((50, 1)), washout=0)
        np.testing.assert_array_equal(states, np.zeros((50, 5)))

    def test_rows_replay_the_step_sequence(self):
        rng = np.random.default_rng(42)
        inputs = rng.uniform(-1.0, 1.0, (300, 1))
        res = self.make(seed=7)
        harvested = res.harvest(inputs, washout=100)
        assert harvested.shape == (200, res.size)

        replay = self.make(seed=7)
        replay.reset()
        states = [replay.step(u) for u in inputs]
        np.testing.assert_array_equal(harvested, np.array(states)[100:])

    def test_harvest_is_deterministic(self):
        rng = np.random.default_rng(1)
        inputs = rng.uniform(-1.0, 1.0, (120, 1))
        a = self.make(seed=3).harvest(inputs, washout=10)
        b = self.make(seed=3).harvest(inputs, washout=10)
        np.testing.assert_array_equal(a, b)

    def test_washout_bounds_checked(self):
        res = self.make()
        with pytest.raises(ValueError):
            res.harvest(np.zeros((10, 1)), washout=10)
        with pytest.raises(ValueError):
            res.harvest(np.zeros((0, 1)), washout=0)


def test_echo_state_convergence_for_tanh():
    """Initial conditions wash out: zero start vs random start converge."""
    cfg = ReservoirConfig(size=100, input_dim=1, sigma=0.01, seed=12, activation="tanh")
    a, b = build_reservoir(cfg), build_reservoir(cfg)
    b.state = np.random.default_rng(0).normal(0.0, 1.0, 100)
    inputs = np.random.default_rng(1).uniform(0.0, 1.0, (500, 1))
    for u in inputs:
        a.step(u)
        b.step(u)
    assert np.linalg.norm(a.state - b.state) < 1e-6
