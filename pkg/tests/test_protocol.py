import numpy as np
import pytest

from nmteleport.analysis import f_memory, f_optimal, f_standard
from nmteleport.errors import ContractViolation
from nmteleport.protocol import (
    OUTCOME_ORDER,
    ProtocolConfig,
    Strategy,
    auto_phase,
    run,
    run_sampled,
    scan_worst_case,
)
from nmteleport.qlinalg import BellOutcome
from nmteleport.spectrum import DephasingEvent, JointSpectrum
from util import INPUT_STATES

R = 1 / np.sqrt(2)


def spec(corr, omega0=2.0, variance=1.0):
    return JointSpectrum(omega0=omega0, variance=variance, corr=corr)


class TestPerfectTeleportation:
    def test_anticorrelated_memory_is_exact_for_all_inputs(self):
        sp = spec(-1.0)
        for a, b in INPUT_STATES:
            for t2 in (0.3, 1.0, 3.0):
                rep = run(ProtocolConfig(alpha=a, beta=b, spectrum=sp, t2=t2))
                assert rep.worst_fidelity >= 1.0 - 1e-10
                for r in rep.outcomes.values():
                    assert abs(r.probability - 0.25) <= 1e-12

    def test_no_dephasing_makes_strategies_agree(self):
        for strat in Strategy:
            rep = run(ProtocolConfig(alpha=0.6, beta=0.8j, spectrum=spec(-0.5),
                                     t2=0.0, strategy=strat))
            assert rep.worst_fidelity == pytest.approx(1.0, abs=1e-12)


class TestFidelityFormulas:
    def test_memory_matches_closed_form(self):
        # F = 1 - 2 |a b|^2 (1 - |kappa2|^(2 dK)) at t3 = t2
        for dk in (0.0, 0.05, 0.1, 0.3, 0.5):
            sp = spec(-1.0 + dk)
            for a, b in INPUT_STATES:
                for t2 in (0.5, 1.5):
                    rep = run(ProtocolConfig(alpha=a, beta=b, spectrum=sp, t2=t2))
                    kabs = abs(sp.kappa2(DephasingEvent(2, 1.0, t2)))
                    want = f_memory(kabs, dk, alpha_sq=abs(a) ** 2)
                    for r in rep.outcomes.values():
                        assert abs(r.fidelity - want) <= 1e-10

    def test_standard_matches_closed_form(self):
        sp = spec(-0.9)
        for t2 in (0.5, 1.5, 2.5):
            rep = run(ProtocolConfig(spectrum=sp, t2=t2, strategy=Strategy.STANDARD))
            kabs = abs(sp.kappa2(DephasingEvent(2, 1.0, t2)))
            assert rep.worst_fidelity == pytest.approx(f_standard(kabs), abs=1e-10)

    def test_worst_case_is_equal_weight_input(self):
        sp = spec(-0.9)
        cfg = ProtocolConfig(spectrum=sp, t2=1.0)
        kabs = abs(sp.kappa2(DephasingEvent(2, 1.0, 1.0)))
        scanned = scan_worst_case(cfg, grid=100)
        want = f_memory(kabs, 0.1)
        # the scan grid need not contain the exact minimizer, but it must
        # come close from above and never undershoot the analytic bound
        assert want - 1e-12 <= scanned <= want + 5e-3

    def test_phase_off_leaves_mean_frequency_phase(self):
        # anticorrelated pair without the phase gate: residual cosine error
        sp = spec(-1.0)
        for t2 in (0.4, 1.1):
            rep = run(ProtocolConfig(spectrum=sp, t2=t2, phase="off"))
            want = 1.0 - 0.5 * (1.0 - np.cos(sp.omega0 * t2))
            r = rep.outcomes[BellOutcome.PHI_PLUS]
            assert r.fidelity == pytest.approx(want, abs=1e-10)


class TestOutcomeStructure:
    def test_probabilities_uniform_for_random_configs(self):
        rng = np.random.default_rng(40)
        for _ in range(50):
            v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            v = v / np.linalg.norm(v)
            cfg = ProtocolConfig(
                alpha=complex(v[0]), beta=complex(v[1]),
                spectrum=spec(rng.uniform(-1, 1), variance=rng.uniform(0.2, 2.0)),
                dn2=rng.uniform(0.5, 2.0), t2=rng.uniform(0, 2),
                strategy=Strategy.MEMORY if rng.random() < 0.5 else Strategy.STANDARD)
            rep = run(cfg)
            for r in rep.outcomes.values():
                assert abs(r.probability - 0.25) <= 1e-12

    def test_all_outcomes_share_one_fidelity_memory(self):
        rng = np.random.default_rng(41)
        for _ in range(25):
            v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            v = v / np.linalg.norm(v)
            cfg = ProtocolConfig(alpha=complex(v[0]), beta=complex(v[1]),
                                 spectrum=spec(rng.uniform(-1, 0)),
                                 t2=rng.uniform(0, 2))
            fids = [r.fidelity for r in run(cfg).outcomes.values()]
            assert max(fids) - min(fids) <= 1e-12

    def test_average_between_worst_and_one(self):
        rep = run(ProtocolConfig(spectrum=spec(-0.5), t2=1.2,
                                 strategy=Strategy.STANDARD))
        assert rep.worst_fidelity <= rep.average_fidelity + 1e-12
        assert rep.average_fidelity <= 1.0 + 1e-12


class TestAutoPhase:
    def test_zero_time_zero_angle(self):
        cfg = ProtocolConfig(spectrum=spec(-1.0), t2=0.0)
        assert auto_phase(cfg) == pytest.approx(0.0, abs=1e-14)

    def test_slope_is_carrier_frequency(self):
        # phi outcomes: theta = -omega0 dn2 t2 at t3 = t2; psi outcomes flip sign
        sp = spec(-1.0, omega0=2.0)
        for t2 in (0.3, 0.8):
            cfg = ProtocolConfig(spectrum=sp, dn2=1.3, t2=t2)
            th_phi = auto_phase(cfg, BellOutcome.PHI_PLUS)
            th_psi = auto_phase(cfg, BellOutcome.PSI_MINUS)
            assert th_phi == pytest.approx(-sp.omega0 * 1.3 * t2, abs=1e-12)
            assert th_psi == pytest.approx(-th_phi, abs=1e-12)

    def test_explicit_angle_reproduces_auto(self):
        cfg = ProtocolConfig(spectrum=spec(-1.0), t2=0.9)
        theta = auto_phase(cfg, BellOutcome.PHI_PLUS)
        manual = ProtocolConfig(spectrum=spec(-1.0), t2=0.9, phase=theta)
        got = run(manual).outcomes[BellOutcome.PHI_PLUS].fidelity
        want = run(cfg).outcomes[BellOutcome.PHI_PLUS].fidelity
        assert got == pytest.approx(want, abs=1e-12)


class TestSampling:
    def test_sampled_entry_matches_exact_report(self):
        cfg = ProtocolConfig(spectrum=spec(-0.9), t2=1.0)
        rep = run(cfg)
        outcome, result = run_sampled(cfg, seed=17)
        assert result == rep.outcomes[outcome]

    def test_outcome_frequencies(self):
        cfg = ProtocolConfig(spectrum=spec(-0.9), t2=1.0)
        counts = {o: 0 for o in OUTCOME_ORDER}
        n = 10_000
        for seed in range(n):
            outcome, _ = run_sampled(cfg, seed=seed)
            counts[outcome] += 1
        for o in OUTCOME_ORDER:
            assert abs(counts[o] / n - 0.25) <= 0.02

    def test_deterministic_per_seed(self):
        cfg = ProtocolConfig(spectrum=spec(-0.3), t2=0.7)
        assert run_sampled(cfg, seed=5) == run_sampled(cfg, seed=5)


class TestLocality:
    def test_no_operation_spans_the_parties(self):
        # Alice holds photons 1,2; Bob holds photon 3
        trace = []
        run(ProtocolConfig(spectrum=spec(-1.0), t2=1.0), trace=trace)
        assert trace  # pipeline recorded
        for op, photons in trace:
            alice = set(photons) <= {1, 2}
            bob = set(photons) <= {3}
            assert alice or bob, f"{op} spans both parties: {photons}"

    def test_memory_pipeline_contains_bobs_plate(self):
        trace = []
        run(ProtocolConfig(spectrum=spec(-1.0), t2=1.0), trace=trace)
        assert ("dephase", (3,)) in trace
        trace = []
        run(ProtocolConfig(spectrum=spec(-1.0), t2=1.0,
                           strategy=Strategy.STANDARD), trace=trace)
        assert ("dephase", (3,)) not in trace


class TestValidation:
    def test_unnormalized_input_rejected(self):
        with pytest.raises(ContractViolation):
            ProtocolConfig(alpha=1.0, beta=1.0)

    def test_negative_times_rejected(self):
        with pytest.raises(ContractViolation):
            ProtocolConfig(t2=-0.5)
        with pytest.raises(ContractViolation):
            ProtocolConfig(t2=1.0, t3=-0.1)

    def test_unknown_phase_mode_rejected(self):
        with pytest.raises(ContractViolation):
            ProtocolConfig(phase="maybe")

    def test_t3_defaults_to_t2(self):
        assert ProtocolConfig(t2=1.4).t3_effective == 1.4
        assert ProtocolConfig(t2=1.4, t3=0.2).t3_effective == 0.2
