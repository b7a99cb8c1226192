import numpy as np
import pytest

from nmteleport.errors import ContractViolation
from nmteleport.spectrum import DephasingEvent, JointSpectrum
from util import char_fn_quadrature

SPEC = JointSpectrum(omega0=2.0, variance=1.0, corr=-0.9)


class TestValidation:
    def test_rejects_bad_parameters(self):
        with pytest.raises(ContractViolation):
            JointSpectrum(variance=0.0)
        with pytest.raises(ContractViolation):
            JointSpectrum(corr=1.5)
        with pytest.raises(ContractViolation):
            JointSpectrum(omega0=-1.0)

    def test_event_validation(self):
        with pytest.raises(ContractViolation):
            DephasingEvent(1, 1.0, 1.0)
        with pytest.raises(ContractViolation):
            DephasingEvent(2, 1.0, -0.1)


class TestCharFn:
    def test_origin_is_one(self):
        assert SPEC.char_fn(0.0, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_anticorrelated_equal_args_has_unit_magnitude(self):
        spec = JointSpectrum(corr=-1.0)
        for lam in (0.3, 1.7, 4.0):
            assert abs(spec.char_fn(lam, lam)) == pytest.approx(1.0, abs=1e-12)

    def test_single_photon_magnitude_closed_form(self):
        lam = 1.3
        expected = np.exp(-0.5 * SPEC.variance * lam * lam)
        assert abs(SPEC.char_fn(lam, 0.0)) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("corr", [-1.0, -0.9, -0.3, 0.0, 0.5, 1.0])
    @pytest.mark.parametrize("lams", [(0.7, 0.0), (0.0, 1.1), (0.8, 0.8), (1.5, -0.6)])
    def test_matches_quadrature(self, corr, lams):
        spec = JointSpectrum(omega0=2.0, variance=1.0, corr=corr)
        got = spec.char_fn(*lams)
        ref = char_fn_quadrature(spec, *lams)
        assert abs(got - ref) <= 1e-8

    def test_magnitude_bounded_and_hermitian(self):
        rng = np.random.default_rng(20)
        for _ in range(1000):
            l2, l3 = rng.uniform(-4, 4, size=2)
            v = SPEC.char_fn(l2, l3)
            assert abs(v) <= 1.0 + 1e-14
            assert abs(SPEC.char_fn(-l2, -l3) - np.conj(v)) <= 1e-14

    def test_exponent_identity_with_anticorrelation_deviation(self):
        # with equal plates the joint factor magnitude is |kappa2|^(2 dK)
        for dk in (0.0, 0.05, 0.1, 0.3, 0.5):
            spec = JointSpectrum(corr=-1.0 + dk)
            for t in (0.2, 0.8, 1.7, 3.0):
                ev = DephasingEvent(2, 1.0, t)
                joint = abs(spec.char_fn(t, t))
                local = abs(spec.kappa2(ev))
                assert joint == pytest.approx(local ** (2 * dk), abs=1e-12)


class TestKappa2:
    def test_zero_duration(self):
        assert SPEC.kappa2(DephasingEvent(2, 1.0, 0.0)) == pytest.approx(1.0, abs=1e-15)

    def test_wrong_photon_rejected(self):
        with pytest.raises(ContractViolation):
            SPEC.kappa2(DephasingEvent(3, 1.0, 1.0))

    def test_magnitude_strictly_decreasing(self):
        ts = np.linspace(0.0, 4.0, 40)
        mags = [abs(SPEC.kappa2(DephasingEvent(2, 1.0, t))) for t in ts]
        assert all(b < a for a, b in zip(mags, mags[1:]))
        # quadrature agrees at a few interior points
        for t in (0.5, 1.5, 2.5):
            ref = char_fn_quadrature(SPEC, t, 0.0)
            assert abs(SPEC.kappa2(DephasingEvent(2, 1.0, t)) - ref) <= 1e-8

    def test_phase_is_minus_mean_times_accrual(self):
        for t in (0.3, 0.9, 1.4):
            ev = DephasingEvent(2, 1.0, t)
            assert np.angle(SPEC.kappa2(ev)) == pytest.approx(-SPEC.omega0 / 2 * t, abs=1e-12)

    def test_duration_for_kappa_inverts(self):
        for target in (0.05, 0.3, 0.9):
            t = SPEC.duration_for_kappa(target, 1.0)
            assert abs(SPEC.kappa2(DephasingEvent(2, 1.0, t))) == pytest.approx(target, rel=1e-12)


class TestSampling:
    def test_anticorrelated_pairs(self):
        spec = JointSpectrum(corr=-1.0)
        pairs = spec.sample_pairs(10_000, seed=5)
        dev = (pairs[:, 0] - spec.mean) + (pairs[:, 1] - spec.mean)
        assert np.max(np.abs(dev)) <= 1e-12

    def test_uncorrelated_sample_correlation(self):
        spec = JointSpectrum(corr=0.0)
        pairs = spec.sample_pairs(1_000_000, seed=6)
        r = np.corrcoef(pairs[:, 0], pairs[:, 1])[0, 1]
        assert abs(r) <= 0.005

    def test_sample_mean(self):
        n = 1_000_000
        pairs = SPEC.sample_pairs(n, seed=7)
        sigma = np.sqrt(SPEC.variance)
        assert abs(np.mean(pairs[:, 0]) - SPEC.mean) <= 5 * sigma / np.sqrt(n)

    def test_deterministic_per_seed(self):
        a = SPEC.sample_pairs(1000, seed=3)
        b = SPEC.sample_pairs(1000, seed=3)
        assert np.array_equal(a, b)

    def test_zero_count_rejected(self):
        with pytest.raises(ContractViolation):
            SPEC.sample_pairs(0, seed=1)

    def test_empirical_characteristic_function(self):
        n = 100_000
        pairs = SPEC.sample_pairs(n, seed=8)
        for l2, l3 in ((0.5, 0.3), (1.0, -0.7), (0.2, 0.9)):
            emp = np.mean(np.exp(-1j * (l2 * pairs[:, 0] + l3 * pairs[:, 1])))
            assert abs(emp - SPEC.char_fn(l2, l3)) <= 4.0 / np.sqrt(n)
