"""Correlated photon-frequency environment model.

The two photon frequencies are jointly Gaussian with equal means
(omega0 / 2 each), equal variances and correlation coefficient K. Every
reduced polarization quantity in the protocol depends on the environment
only through the characteristic function

    E[exp(-i (lam2 w2 + lam3 w3))]

which is evaluated in closed form here. A quartz plate is summarized by
its birefringence ``delta_n`` and effective interaction time
``duration``; only the product ``delta_n * duration`` ever enters a
reduced quantity, so intermediate-time dynamics inside a plate is not
modelled. Likewise only the refraction-index *difference* is stored: the
common-mode part acts on the environment alone and drops out of every
reduced observable.

Units are dimensionless model numbers with frequency * time a phase in
radians. Defaults: omega0 = 2, variance = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation


@dataclass(frozen=True)
class DephasingEvent:
    """One pass of a photon through a birefringent plate."""

    photon: int          # 2 (Alice's half of the pair) or 3 (Bob's)
    delta_n: float       # n_V - n_H
    duration: float      # effective interaction time, >= 0

    def __post_init__(self):
        if self.photon not in (2, 3):
            raise ContractViolation(f"photon index must be 2 or 3, got {self.photon}")
        if self.duration < 0:
            raise ContractViolation("duration must be nonnegative")

    @property
    def accrual(self) -> float:
        return self.delta_n * self.duration


@dataclass(frozen=True)
class JointSpectrum:
    """Bivariate Gaussian joint spectral density of the photon pair."""

    omega0: float = 2.0     # sum of the two mean frequencies
    variance: float = 1.0   # common marginal variance C11 = C22
    corr: float = -1.0      # correlation coefficient K in [-1, 1]

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ContractViolation("omega0 must be positive")
        if self.variance <= 0:
            raise ContractViolation("variance must be positive")
        if abs(self.corr) > 1:
            raise ContractViolation(f"|corr| must be <= 1, got {self.corr}")

    @property
    def mean(self) -> float:
        """Mean frequency of each photon."""
        return self.omega0 / 2.0

    def char_fn(self, lam2: float, lam3: float) -> complex:
        """E[exp(-i (lam2 w2 + lam3 w3))]; magnitude never exceeds 1."""
        quad = self.variance * (lam2 * lam2 + 2.0 * self.corr * lam2 * lam3 + lam3 * lam3)
        return np.exp(-1j * (lam2 + lam3) * self.mean - 0.5 * quad)

    def kappa2(self, event: DephasingEvent) -> complex:
        """Local decoherence factor for Alice's photon."""
        if event.photon != 2:
            raise ContractViolation("kappa2 takes a photon-2 event")
        return self.char_fn(event.accrual, 0.0)

    def kappa_joint(self, event2: DephasingEvent, event3: DephasingEvent) -> complex:
        """Joint decoherence factor after both plates."""
        if event2.photon != 2 or event3.photon != 3:
            raise ContractViolation("kappa_joint takes a photon-2 and a photon-3 event")
        return self.char_fn(event2.accrual, event3.accrual)

    def duration_for_kappa(self, kappa_abs: float, delta_n: float) -> float:
        """Invert |kappa2| = exp(-variance * (delta_n * t)^2 / 2) for t."""
        if not 0.0 < kappa_abs <= 1.0:
            raise ContractViolation("kappa_abs must be in (0, 1]")
        if delta_n == 0:
            raise ContractViolation("delta_n must be nonzero")
        return math.sqrt(-2.0 * math.log(kappa_abs) / self.variance) / abs(delta_n)

    def sample_pairs(self, n: int, seed) -> np.ndarray:
        """Draw ``n`` correlated frequency pairs, deterministic per seed.

        Returns an (n, 2) array. For |K| = 1 the degenerate case is
        built directly from a single normal deviate instead of a
        Cholesky factor of the singular covariance.
        """
        if n < 1:
            raise ContractViolation("need at least one sample")
        rng = np.random.default_rng(seed)
        sigma = math.sqrt(self.variance)
        mu = self.mean
        z1 = rng.standard_normal(n)
        if abs(self.corr) == 1.0:
            d = sigma * z1
            w2 = mu + d
            w3 = mu + math.copysign(1.0, self.corr) * d
        else:
            z2 = rng.standard_normal(n)
            w2 = mu + sigma * z1
            w3 = mu + sigma * (self.corr * z1 + math.sqrt(1.0 - self.corr**2) * z2)
        return np.column_stack([w2, w3])
