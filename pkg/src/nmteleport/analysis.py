"""Closed-form fidelity curves and their crossings.

Three fidelities as a function of the local decoherence magnitude
``kappa_abs`` of the shared pair:

* standard scheme:        1 - (1 - kappa_abs) / 2
* optimal memoryless:     (kappa_abs + 2) / 3
* memory-assisted:        1 - 2 a (1-a) (1 - kappa_abs^(2 dk))
                          with a = |alpha|^2 and dk the deviation of the
                          frequency correlation from perfect
                          anticorrelation (K = -1 + dk).

At (kappa_abs=0, dk=0) the memory formula is defined as 1 by continuity:
the perfectly anticorrelated protocol is exact at every finite
interaction time, so the limit along the physical path is 1 (and Python
evaluates 0.0**0.0 that way too).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolation, NoCrossoverError

_BRACKET_EPS = 1e-12


def _check_kappa(kappa_abs: float):
    if not 0.0 <= kappa_abs <= 1.0:
        raise ContractViolation(f"kappa_abs {kappa_abs} outside [0, 1]")


def f_memory(kappa_abs: float, delta_k: float, alpha_sq: float = 0.5) -> float:
    """Memory-assisted teleportation fidelity."""
    _check_kappa(kappa_abs)
    if not 0.0 <= delta_k <= 2.0:
        raise ContractViolation(f"delta_k {delta_k} outside [0, 2]")
    if not 0.0 <= alpha_sq <= 1.0:
        raise ContractViolation(f"alpha_sq {alpha_sq} outside [0, 1]")
    return 1.0 - 2.0 * alpha_sq * (1.0 - alpha_sq) * (1.0 - kappa_abs ** (2.0 * delta_k))


def f_standard(kappa_abs: float) -> float:
    """Worst-case fidelity of the standard scheme on the decohered pair."""
    _check_kappa(kappa_abs)
    return 1.0 - 0.5 * (1.0 - kappa_abs)


def f_optimal(kappa_abs: float) -> float:
    """Best memoryless protocol on the decohered pair; 2/3 at full decoherence."""
    _check_kappa(kappa_abs)
    return (kappa_abs + 2.0) / 3.0


@dataclass(frozen=True)
class FidelityCurvePoint:
    kappa_abs: float
    f_standard: float
    f_optimal: float
    f_memory: dict  # delta_k -> worst-case memory fidelity


def figure2_sweep(kappa_grid, delta_k_list) -> list[FidelityCurvePoint]:
    """Tabulate all three curves over a kappa grid, one memory column per dk."""
    kappa_grid = list(kappa_grid)
    delta_k_list = list(delta_k_list)
    if not kappa_grid or not delta_k_list:
        raise ContractViolation("grids must be nonempty")
    points = []
    for k in kappa_grid:
        mem = {dk: f_memory(k, dk) for dk in delta_k_list}
        points.append(FidelityCurvePoint(k, f_standard(k), f_optimal(k), mem))
    return points


def crossover(delta_k: float) -> float:
    """Decoherence level where the memory curve meets the optimal bound.

    Bisection to 1e-10 on (eps, 1 - eps); the sign change at the bracket
    ends is asserted, which also pins uniqueness on this interval
    (the difference is monotone between its endpoint signs).
    """
    if not 0.0 < delta_k < 0.5:
        raise ContractViolation("delta_k must be in (0, 0.5)")

    def gap(k):
        return f_memory(k, delta_k) - f_optimal(k)

    lo, hi = _BRACKET_EPS, 1.0 - _BRACKET_EPS
    glo, ghi = gap(lo), gap(hi)
    if not (glo < 0.0 < ghi):
        raise NoCrossoverError(f"no sign change on ({lo}, {hi}) for delta_k={delta_k}")
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
