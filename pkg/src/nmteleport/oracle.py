"""Monte Carlo cross-check of the analytic engine.

Dephasing is diagonal in frequency, so conditioning on a sampled
frequency pair makes the whole protocol a pure-state evolution: each
plate contributes a per-sample phase on the V component of its photon.
Sampling the joint Gaussian and averaging the per-sample results is
therefore an exact, independent realization of the frequency integrals
the engine evaluates in closed form.

Per-sample states are kept as (complex amplitude, accumulated phase)
pairs per basis component, with the phase held as a real number until a
reduced quantity is formed. Amplitudes stay sample-independent through
the whole pipeline (every gate in the protocol is monomial), which
makes the samplewise-exact cancellations at K = -1 visible as *bitwise*
zero variance instead of being buried in rounding noise.

All four outcomes are evaluated from each sample (the projection reuses
the sample), which costs nothing and quarters the variance.

Sampling is split into partitions with generator streams derived from
(seed, partition index); results are bit-reproducible for a fixed
partition count, and one partition equals plain sequential execution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import protocol as _protocol
from .errors import ContractViolation
from .qlinalg import PHI_PLUS, BellOutcome, BELL_STATES
from .protocol import OUTCOME_ORDER, CORRECTION_TABLE, ProtocolConfig, Strategy, TeleportationReport

_EXACT_DELTA = 1e-12


def _combine(contribs):
    """Merge contributions to one basis component.

    A single contribution keeps its (amp, phase) split exactly. Multiple
    contributions are collapsed onto the first one's phase reference
    (never reached by the protocol's monomial gates, but supported).
    """
    if len(contribs) == 1:
        return contribs[0]
    amp0, ref = contribs[0]
    total = amp0 + 0.0j
    for amp, ph in contribs[1:]:
        total = total + amp * np.exp(1j * (ph - ref))
    return [total, ref]


def _apply_1q(comps, bit, mat):
    out = {}
    for idx, (amp, ph) in comps.items():
        cur = (idx >> bit) & 1
        for new in (0, 1):
            c = mat[new, cur]
            if c != 0:
                tgt = (idx & ~(1 << bit)) | (new << bit)
                out.setdefault(tgt, []).append([c * amp, ph])
    return {idx: _combine(lst) for idx, lst in out.items()}


def _evolve_samples(config: ProtocolConfig, w2, w3):
    """Run the protocol on every sample; returns per-outcome arrays."""
    m = w2.size
    bell = PHI_PLUS.amps
    inp = (config.alpha, config.beta)
    comps = {}
    for p1 in (0, 1):
        for idx23 in range(4):
            amp = inp[p1] * bell[idx23]
            if amp != 0:
                comps[(p1 << 2) | idx23] = [complex(amp), 0.0]

    # Alice's plate: photon 2 is qubit 1 of 3 -> bit position 1
    ph2 = config.dn2 * config.t2 * w2
    for idx in list(comps):
        if (idx >> 1) & 1:
            amp, ph = comps[idx]
            comps[idx] = [amp, ph + ph2]

    phi = np.array([config.alpha, config.beta], dtype=complex)
    results = {}
    for outcome in OUTCOME_ORDER:
        bvec = BELL_STATES[outcome].amps
        rem = {}
        for idx, (amp, ph) in comps.items():
            c = np.conj(bvec[idx >> 1])
            if c != 0:
                rem.setdefault(idx & 1, []).append([c * amp, ph])
        rem = {k: _combine(v) for k, v in rem.items()}

        prob = sum(np.abs(amp) ** 2 for amp, _ in rem.values())

        rule = CORRECTION_TABLE[outcome]
        rem = _apply_1q(rem, 0, rule.unitary.entries)
        if config.strategy is Strategy.MEMORY:
            ph3 = (rule.dn3_sign * config.dn2) * config.t3_effective * w3
            if 1 in rem:
                amp, ph = rem[1]
                rem[1] = [amp, ph + ph3]
        theta = _protocol.auto_phase(config, outcome) if config.phase == "auto" else (
            None if config.phase == "off" else float(config.phase))
        if theta is not None and 1 in rem:
            amp, ph = rem[1]
            rem[1] = [amp, ph + theta]

        keys = sorted(rem)
        ref = rem[keys[0]][1]
        norm2 = sum(np.abs(amp) ** 2 for amp, _ in rem.values())
        z = 0.0j
        for k in keys:
            amp, ph = rem[k]
            z = z + np.conj(phi[k]) * amp * np.exp(1j * (ph - ref))
        fid = np.abs(z) ** 2 / norm2

        rho = {}
        for i in keys:
            ai, pi = rem[i]
            for j in keys:
                aj, pj = rem[j]
                rho[(i, j)] = ai * np.conj(aj) * np.exp(1j * (pi - pj)) / norm2

        full = np.zeros((m, 2, 2), dtype=complex)
        for (i, j), v in rho.items():
            full[:, i, j] = v
        results[outcome] = (
            np.broadcast_to(np.asarray(prob, dtype=float), (m,)),
            np.broadcast_to(np.asarray(fid, dtype=float), (m,)),
            full,
        )
    return results


def _stats(arr):
    """(mean, standard error, sample variance) with an exact-constant shortcut."""
    n = arr.size
    if np.all(arr == arr.flat[0]):
        return float(arr.flat[0]), 0.0, 0.0
    var = float(np.var(arr, ddof=1))
    return float(np.mean(arr)), float(np.sqrt(var / n)), var


@dataclass(frozen=True)
class OutcomeEstimate:
    probability: float
    probability_se: float
    probability_var: float
    rho: np.ndarray          # 2x2 mean density matrix
    rho_se: np.ndarray       # 2x2, se(real part) + 1j * se(imag part)
    fidelity: float
    fidelity_se: float
    fidelity_var: float


@dataclass(frozen=True)
class OracleReport:
    config: ProtocolConfig
    n_samples: int
    seed: int
    partitions: int
    outcomes: dict  # BellOutcome -> OutcomeEstimate


def oracle_run(config: ProtocolConfig, n_samples: int, seed: int,
               partitions: int = 1) -> OracleReport:
    """Estimate per-outcome probabilities, output states and fidelities."""
    if n_samples < 100:
        raise ContractViolation("need at least 100 samples")
    if partitions < 1:
        raise ContractViolation("need at least one partition")
    base, extra = divmod(n_samples, partitions)
    chunks = {o: {"prob": [], "fid": [], "rho": []} for o in OUTCOME_ORDER}
    for p in range(partitions):
        m = base + (1 if p < extra else 0)
        if m == 0:
            continue
        pairs = config.spectrum.sample_pairs(m, seed=[int(seed), p])
        per = _evolve_samples(config, pairs[:, 0], pairs[:, 1])
        for o, (prob, fid, rho) in per.items():
            chunks[o]["prob"].append(prob)
            chunks[o]["fid"].append(fid)
            chunks[o]["rho"].append(rho)

    outcomes = {}
    for o in OUTCOME_ORDER:
        prob = np.concatenate(chunks[o]["prob"])
        fid = np.concatenate(chunks[o]["fid"])
        rho = np.concatenate(chunks[o]["rho"])
        p_mean, p_se, p_var = _stats(prob)
        f_mean, f_se, f_var = _stats(fid)
        r_mean = np.zeros((2, 2), dtype=complex)
        r_se = np.zeros((2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                re_m, re_se, _ = _stats(rho[:, i, j].real)
                im_m, im_se, _ = _stats(rho[:, i, j].imag)
                r_mean[i, j] = re_m + 1j * im_m
                r_se[i, j] = re_se + 1j * im_se
        outcomes[o] = OutcomeEstimate(p_mean, p_se, p_var, r_mean, r_se,
                                      f_mean, f_se, f_var)
    return OracleReport(config, n_samples, int(seed), partitions, outcomes)


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    delta: float
    se: float
    normalized: float


@dataclass(frozen=True)
class ComparisonSummary:
    passed: bool
    sigma_budget: float
    rows: tuple
    worst: ComparisonRow


def _normalized(delta: float, se: float) -> float:
    if abs(delta) <= _EXACT_DELTA:
        return 0.0
    if se == 0.0:
        return float("inf")
    return abs(delta) / se


def compare(engine_report: TeleportationReport, oracle_report: OracleReport,
            sigma_budget: float) -> ComparisonSummary:
    """Normalize engine-vs-oracle deltas by standard errors and gate them."""
    if engine_report.config != oracle_report.config:
        raise ContractViolation("reports come from different configurations")
    rows = []
    for o in OUTCOME_ORDER:
        eng = engine_report.outcomes[o]
        orc = oracle_report.outcomes[o]
        rows.append(ComparisonRow(
            f"{o.value} probability", eng.probability - orc.probability,
            orc.probability_se,
            _normalized(eng.probability - orc.probability, orc.probability_se)))
        for i in range(2):
            for j in range(2):
                d = eng.state.entries[i, j] - orc.rho[i, j]
                rows.append(ComparisonRow(
                    f"{o.value} rho[{i},{j}].re", d.real, orc.rho_se[i, j].real,
                    _normalized(d.real, orc.rho_se[i, j].real)))
                rows.append(ComparisonRow(
                    f"{o.value} rho[{i},{j}].im", d.imag, orc.rho_se[i, j].imag,
                    _normalized(d.imag, orc.rho_se[i, j].imag)))
        rows.append(ComparisonRow(
            f"{o.value} fidelity", eng.fidelity - orc.fidelity, orc.fidelity_se,
            _normalized(eng.fidelity - orc.fidelity, orc.fidelity_se)))
    worst = max(rows, key=lambda r: r.normalized)
    passed = worst.normalized <= sigma_budget
    return ComparisonSummary(passed, sigma_budget, tuple(rows), worst)
