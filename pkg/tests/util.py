"""Shared helpers for the test suite."""

import numpy as np

from nmteleport.qlinalg import DensityMatrix, StateVector, Unitary


def random_state(rng, qubits=1) -> StateVector:
    dim = 2**qubits
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(v / np.linalg.norm(v))


def random_density(rng, qubits=1) -> DensityMatrix:
    dim = 2**qubits
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = a @ a.conj().T
    return DensityMatrix(m / np.trace(m))


def random_unitary(rng, qubits=1) -> Unitary:
    dim = 2**qubits
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    return Unitary(q * (np.diag(r) / np.abs(np.diag(r))))


def char_fn_quadrature(spec, lam2, lam3, order=120) -> complex:
    """Gauss-Hermite evaluation of E[exp(-i (lam2 w2 + lam3 w3))].

    Integrates the phase factor against the joint Gaussian density
    directly; shares no code with the closed form it checks.
    """
    x, w = np.polynomial.hermite.hermgauss(order)
    mu = spec.omega0 / 2.0
    sigma = np.sqrt(spec.variance)
    k = spec.corr
    if abs(k) == 1.0:
        w2 = mu + np.sqrt(2.0) * sigma * x
        w3 = mu + np.sign(k) * np.sqrt(2.0) * sigma * x
        vals = np.exp(-1j * (lam2 * w2 + lam3 * w3))
        return complex(np.sum(w * vals) / np.sqrt(np.pi))
    xx, yy = np.meshgrid(x, x, indexing="ij")
    ww = np.outer(w, w)
    w2 = mu + np.sqrt(2.0) * sigma * xx
    w3 = mu + np.sqrt(2.0) * sigma * (k * xx + np.sqrt(1.0 - k * k) * yy)
    vals = np.exp(-1j * (lam2 * w2 + lam3 * w3))
    return complex(np.sum(ww * vals) / np.pi)


# ten input states spread over weight and relative phase, first one the
# equal-weight worst case
INPUT_STATES = [
    (1 / np.sqrt(2), 1 / np.sqrt(2)),
    (1.0, 0.0),
    (0.0, 1.0),
    (np.sqrt(0.3), np.sqrt(0.7)),
    (np.sqrt(0.9), np.sqrt(0.1)),
    (1 / np.sqrt(2), 1j / np.sqrt(2)),
    (np.sqrt(0.6), np.sqrt(0.4) * np.exp(1j * 0.8)),
    (np.sqrt(0.2), np.sqrt(0.8) * np.exp(-1j * 2.1)),
    (np.sqrt(0.5), np.sqrt(0.5) * np.exp(1j * np.pi / 3)),
    (np.sqrt(0.75), np.sqrt(0.25) * np.exp(1j * 2.9)),
]
