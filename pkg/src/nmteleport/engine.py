"""Exact system+environment evolution via phase-tagged branches.

Instead of carrying explicit (infinite-dimensional) frequency states,
every polarization basis branch carries the coefficients (lam2, lam3) of
the frequency phase exp(+i (lam2 w2 + lam3 w3)) it has accumulated.
Reducing to a polarization density matrix contracts tag differences
through the Gaussian characteristic function of the attached spectrum:

    rho[i, j] = sum over branches b in i, b' in j of
                amp_b * conj(amp_b') * char_fn(tag_b' - tag_b)

This is exact: no frequency grid, no discretization error. Dephasing a
photon adds ``delta_n * duration`` to the V-labelled branches' tag
component for that photon (the common-mode index acts on the
environment alone and never reaches a reduced quantity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, ZeroProbabilityError
from .qlinalg import BELL_STATES, BellOutcome, DensityMatrix, StateVector, Unitary
from .spectrum import DephasingEvent, JointSpectrum

TAG_MERGE_TOL = 1e-14
NORM_TOL = 1e-10

_DEFAULT_PHOTONS = {1: (3,), 2: (2, 3), 3: (1, 2, 3)}


@dataclass(frozen=True)
class PhaseTag:
    """Accumulated frequency-phase coefficients of one branch."""

    lam2: float = 0.0
    lam3: float = 0.0

    def __sub__(self, other: "PhaseTag") -> "PhaseTag":
        return PhaseTag(self.lam2 - other.lam2, self.lam3 - other.lam3)

    def close(self, other: "PhaseTag", tol: float = TAG_MERGE_TOL) -> bool:
        return abs(self.lam2 - other.lam2) <= tol and abs(self.lam3 - other.lam3) <= tol


@dataclass(frozen=True)
class Branch:
    basis: int
    amp: complex
    tag: PhaseTag


class PhaseTaggedState:
    """Immutable polarization state entangled with the frequency environment.

    Branches are kept canonical: sorted by (basis, lam2, lam3) with
    duplicate (basis, tag) keys merged by amplitude addition. The
    spectrum is attached at lift time and immutable thereafter; tags are
    meaningless across different spectra.
    """

    def __init__(self, qubit_count, branches, spec: JointSpectrum,
                 photons=None, check_norm: bool = True):
        if qubit_count not in (1, 2, 3):
            raise ContractViolation("supported qubit counts are 1-3")
        self.qubit_count = qubit_count
        self.spectrum = spec
        self.photons = tuple(photons) if photons is not None else _DEFAULT_PHOTONS[qubit_count]
        if len(self.photons) != qubit_count:
            raise ContractViolation("one photon label per qubit required")
        self.branches = self._canonicalize(branches)
        if check_norm and abs(self.physical_norm_sq() - 1.0) > NORM_TOL:
            raise ContractViolation(f"physical norm {self.physical_norm_sq()} != 1")

    def _canonicalize(self, branches):
        dim = 2**self.qubit_count
        ordered = sorted(branches, key=lambda b: (b.basis, b.tag.lam2, b.tag.lam3))
        merged: list[Branch] = []
        for b in ordered:
            if not 0 <= b.basis < dim:
                raise ContractViolation(f"basis index {b.basis} out of range")
            if merged and merged[-1].basis == b.basis and merged[-1].tag.close(b.tag):
                last = merged[-1]
                merged[-1] = Branch(last.basis, last.amp + b.amp, last.tag)
            else:
                merged.append(b)
        return tuple(b for b in merged if b.amp != 0)

    def physical_norm_sq(self) -> float:
        """Norm including environment overlaps between equal-basis branches."""
        total = 0.0 + 0.0j
        for b in self.branches:
            for bp in self.branches:
                if b.basis == bp.basis:
                    d = bp.tag - b.tag
                    total += b.amp * np.conj(bp.amp) * self.spectrum.char_fn(d.lam2, d.lam3)
        return float(total.real)

    def _replace(self, branches, check_norm=True):
        return PhaseTaggedState(self.qubit_count, branches, self.spectrum,
                                self.photons, check_norm=check_norm)

    def __repr__(self):
        return f"PhaseTaggedState(qubits={self.qubit_count}, branches={self.branches!r})"


def lift(psi: StateVector, spec: JointSpectrum, photons=None) -> PhaseTaggedState:
    """Embed a bare polarization state with zero accumulated phases."""
    branches = [Branch(k, amp, PhaseTag()) for k, amp in enumerate(psi.amps) if amp != 0]
    return PhaseTaggedState(psi.qubit_count, branches, spec, photons)


def dephase(state: PhaseTaggedState, event: DephasingEvent, target: int) -> PhaseTaggedState:
    """Pass the target photon through a birefringent plate.

    V-labelled branches accrue ``delta_n * duration`` on the tag
    component of the event's photon; amplitudes are untouched, so the
    physical norm is invariant.
    """
    if target < 0 or target >= state.qubit_count:
        raise ContractViolation(f"target {target} out of range")
    if state.photons[target] != event.photon:
        raise ContractViolation(
            f"qubit {target} is photon {state.photons[target]}, event is for photon {event.photon}")
    bit = state.qubit_count - 1 - target
    out = []
    for b in state.branches:
        if (b.basis >> bit) & 1:
            if event.photon == 2:
                tag = PhaseTag(b.tag.lam2 + event.accrual, b.tag.lam3)
            else:
                tag = PhaseTag(b.tag.lam2, b.tag.lam3 + event.accrual)
            out.append(Branch(b.basis, b.amp, tag))
        else:
            out.append(b)
    return state._replace(out)


def apply_local_unitary(state: PhaseTaggedState, u: Unitary, target: int) -> PhaseTaggedState:
    """Apply a 2x2 unitary to one qubit; tags ride along unchanged."""
    if u.dim != 2:
        raise ContractViolation("expected a single-qubit unitary")
    if target < 0 or target >= state.qubit_count:
        raise ContractViolation(f"target {target} out of range")
    bit = state.qubit_count - 1 - target
    mat = u.entries
    out = []
    for b in state.branches:
        cur = (b.basis >> bit) & 1
        for new in (0, 1):
            coeff = mat[new, cur]
            if coeff != 0:
                basis = (b.basis & ~(1 << bit)) | (new << bit)
                out.append(Branch(basis, coeff * b.amp, b.tag))
    return state._replace(out)


def project_bell(state: PhaseTaggedState, outcome: BellOutcome):
    """Project qubits 0 and 1 of a 3-qubit state onto a Bell outcome.

    Returns ``(probability, remnant)`` where the remnant is the
    renormalized single-qubit state of photon 3. The probability uses
    the physical (tag-contracted) norm: environment overlap is part of
    the outcome statistics.
    """
    if state.qubit_count != 3:
        raise ContractViolation("Bell projection requires a 3-qubit state")
    bell = BELL_STATES[outcome].amps
    collected = []
    for b in state.branches:
        pair = b.basis >> 1
        rest = b.basis & 1
        coeff = np.conj(bell[pair])
        if coeff != 0:
            collected.append(Branch(rest, coeff * b.amp, b.tag))
    remnant = PhaseTaggedState(1, collected, state.spectrum,
                               photons=(state.photons[2],), check_norm=False)
    prob = remnant.physical_norm_sq()
    if prob <= 1e-14:
        raise ZeroProbabilityError(f"outcome {outcome} has zero probability")
    scale = 1.0 / np.sqrt(prob)
    normalized = [Branch(b.basis, b.amp * scale, b.tag) for b in remnant.branches]
    return prob, remnant._replace(normalized)


def reduce(state: PhaseTaggedState) -> DensityMatrix:
    """Trace out the frequency environment."""
    dim = 2**state.qubit_count
    rho = np.zeros((dim, dim), dtype=complex)
    for b in state.branches:
        for bp in state.branches:
            d = bp.tag - b.tag
            rho[b.basis, bp.basis] += (
                b.amp * np.conj(bp.amp) * state.spectrum.char_fn(d.lam2, d.lam3))
    # scrub rounding residue so the DensityMatrix invariants hold exactly
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho)
