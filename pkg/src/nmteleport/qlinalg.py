"""Dense complex linear algebra for 1-3 polarization qubits.

Conventions fixed repo-wide:

* |H> is basis index 0, |V> is basis index 1.
* In tensor products the *left* operand is the most significant qubit
  block, i.e. qubit 0 is the leftmost factor and carries the highest
  bit of the basis index.

Everything here is a pure function on immutable values; matrices are
tiny (dim <= 8) so all storage is dense.
"""

from __future__ import annotations

from enum import Enum
from functools import reduce as _fold

import numpy as np

from .errors import ContractViolation

ATOL = 1e-12
PSD_FLOOR = -1e-10


def _as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=complex)


def _check_dim(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise ContractViolation(f"dimension {dim} is not a power of two")
    return n


class StateVector:
    """Pure state of one or more qubits."""

    def __init__(self, amps, normalized: bool = True):
        amps = _as_complex(amps).reshape(-1)
        _check_dim(amps.size)
        if normalized:
            nrm = np.linalg.norm(amps)
            if abs(nrm - 1.0) > ATOL:
                raise ContractViolation(f"state vector norm {nrm} != 1")
        self.amps = amps
        self.amps.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def qubit_count(self) -> int:
        return _check_dim(self.dim)

    def normalize(self) -> "StateVector":
        return StateVector(self.amps / np.linalg.norm(self.amps))

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amps, self.amps.conj()))

    def __repr__(self):
        return f"StateVector({self.amps.tolist()!r})"


class DensityMatrix:
    """Hermitian, unit-trace matrix. Positivity is checked on demand."""

    def __init__(self, entries):
        m = _as_complex(entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ContractViolation("density matrix must be square")
        _check_dim(m.shape[0])
        if np.max(np.abs(m - m.conj().T)) > ATOL:
            raise ContractViolation("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > ATOL:
            raise ContractViolation(f"trace {np.trace(m)} != 1")
        self.entries = m
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def qubit_count(self) -> int:
        return _check_dim(self.dim)

    def validate_psd(self) -> "DensityMatrix":
        lo = np.linalg.eigvalsh(self.entries)[0]
        if lo < PSD_FLOOR:
            raise ContractViolation(f"minimum eigenvalue {lo} below floor")
        return self

    def __repr__(self):
        return f"DensityMatrix({self.entries.tolist()!r})"


class Unitary:
    def __init__(self, entries):
        m = _as_complex(entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ContractViolation("unitary must be square")
        _check_dim(m.shape[0])
        if np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))) > ATOL:
            raise ContractViolation("matrix is not unitary")
        self.entries = m
        self.entries.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __repr__(self):
        return f"Unitary({self.entries.tolist()!r})"


def tensor(a, b):
    """Kronecker product of two values of the same kind.

    The left operand supplies the most significant qubits of the result.
    """
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amps, b.amps))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.entries, b.entries))
    if isinstance(a, Unitary) and isinstance(b, Unitary):
        return Unitary(np.kron(a.entries, b.entries))
    raise ContractViolation(f"cannot tensor {type(a).__name__} with {type(b).__name__}")


def partial_trace(rho: DensityMatrix, qubit_count: int, keep) -> DensityMatrix:
    """Reduced density matrix on the kept qubits (repo qubit ordering)."""
    keep = sorted(set(int(q) for q in keep))
    n = qubit_count
    if rho.dim != 2**n:
        raise ContractViolation("qubit_count does not match matrix dimension")
    if not keep or any(q < 0 or q >= n for q in keep):
        raise ContractViolation(f"invalid keep set {keep} for {n} qubits")
    arr = rho.entries.reshape((2,) * (2 * n))
    row = list(range(n))
    col = [n + q if q in keep else q for q in range(n)]
    out = [q for q in keep] + [n + q for q in keep]
    red = np.einsum(arr, row + col, out)
    k = len(keep)
    return DensityMatrix(red.reshape(2**k, 2**k))


def fidelity_pure(phi: StateVector, rho: DensityMatrix) -> float:
    """<phi|rho|phi> for a pure reference state."""
    if phi.dim != rho.dim:
        raise ContractViolation("dimension mismatch in fidelity")
    val = phi.amps.conj() @ rho.entries @ phi.amps
    if abs(val.imag) > ATOL:
        raise ContractViolation(f"fidelity has imaginary residue {val.imag}")
    return float(min(1.0, max(0.0, val.real)))


def apply_unitary(rho: DensityMatrix, u: Unitary, target: int, qubit_count: int) -> DensityMatrix:
    """Conjugate rho by a single-qubit unitary at the target position."""
    if u.dim != 2:
        raise ContractViolation("apply_unitary expects a 2x2 unitary")
    if target < 0 or target >= qubit_count or rho.dim != 2**qubit_count:
        raise ContractViolation("bad target or qubit count")
    ops = [np.eye(2, dtype=complex)] * qubit_count
    ops[target] = u.entries
    full = _fold(np.kron, ops)
    return DensityMatrix(full @ rho.entries @ full.conj().T)


class BellOutcome(Enum):
    """The four Bell-measurement outcomes, in the fixed protocol order."""

    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


_R = 1.0 / np.sqrt(2.0)

KET_H = StateVector([1.0, 0.0])
KET_V = StateVector([0.0, 1.0])
KET_PLUS = StateVector([_R, _R])
KET_MINUS = StateVector([_R, -_R])

PHI_PLUS = StateVector([_R, 0.0, 0.0, _R])
PHI_MINUS = StateVector([_R, 0.0, 0.0, -_R])
PSI_PLUS = StateVector([0.0, _R, _R, 0.0])
PSI_MINUS = StateVector([0.0, _R, -_R, 0.0])

BELL_STATES = {
    BellOutcome.PHI_PLUS: PHI_PLUS,
    BellOutcome.PHI_MINUS: PHI_MINUS,
    BellOutcome.PSI_PLUS: PSI_PLUS,
    BellOutcome.PSI_MINUS: PSI_MINUS,
}

IDENTITY2 = Unitary(np.eye(2))
SIGMA_X = Unitary([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = Unitary([[1.0, 0.0], [0.0, -1.0]])
# literal i*sigma_y; the global phase is irrelevant to fidelities
I_SIGMA_Y = Unitary([[0.0, 1.0], [-1.0, 0.0]])


def phase_gate(theta: float) -> Unitary:
    """diag(1, e^{i theta})."""
    return Unitary([[1.0, 0.0], [0.0, np.exp(1j * theta)]])
