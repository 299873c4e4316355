"""Concurrence, coherence, predictability and the purity-limited concurrence bound.

For any two-qubit state the per-qubit sum ``V_k^2 + P_k^2 + C^2`` equals one
when the state is pure and drops below one as the state becomes mixed.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import linalg
from .states import (
    DensityMatrix,
    PrepParams,
    PureTwoQubitState,
    density_from_pure,
    partial_trace,
    purity,
)

SPIN_FLIP = linalg.kron(linalg.SIGMA_Y, linalg.SIGMA_Y)

# Wootters / C_max combinations this close to zero are reported as exactly zero
ZERO_SNAP = 1e-12

CSV_FIELDS = ("alpha", "theta", "v_a", "p_a", "v_b", "p_b", "c", "c_max", "purity", "sum_a", "sum_b")


@dataclass(frozen=True)
class TrialityRecord:
    v_a: float
    v_b: float
    p_a: float
    p_b: float
    c: float
    c_max: float
    purity: float
    sum_a: float
    sum_b: float
    alpha: Optional[float] = None
    theta: Optional[float] = None

    @property
    def locality_a(self) -> float:
        """Squared local share ``P_A^2 + V_A^2`` of qubit A."""
        return self.sum_a - self.c**2

    @property
    def locality_b(self) -> float:
        return self.sum_b - self.c**2

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_row(self) -> list[str]:
        out = []
        for name in CSV_FIELDS:
            value = getattr(self, name)
            out.append("" if value is None else repr(float(value)))
        return out


def concurrence_pure(s: PureTwoQubitState) -> float:
    a00, a01, a10, a11 = s.amplitudes
    return min(2.0 * abs(a00 * a11 - a01 * a10), 1.0)


def spin_flipped(rho: DensityMatrix) -> np.ndarray:
    """The time-reversed state ``Sigma rho^* Sigma`` (conjugate in the computational basis)."""
    return SPIN_FLIP @ rho.matrix.conj() @ SPIN_FLIP


def wootters_eigenvalues(rho: DensityMatrix) -> np.ndarray:
    """Eigenvalues of ``rho Sigma rho^* Sigma``, descending, clipped at zero.

    Computed from the Hermitian matrix ``sqrt(rho) Sigma rho^* Sigma sqrt(rho)``,
    which is similar to the non-Hermitian product and has the same spectrum.
    """
    root = linalg.sqrt_psd(rho.matrix)
    m = root @ spin_flipped(rho) @ root
    evals = linalg.eigvalsh_desc(0.5 * (m + m.conj().T))
    if evals[-1] < -linalg.CLIP_TOL:
        raise linalg.NotPSD(f"negative Wootters eigenvalue {evals[-1]:.3e}")
    return np.clip(linalg.snap_roundoff(evals), 0.0, None)


def concurrence_mixed(rho: DensityMatrix) -> float:
    r = np.sqrt(wootters_eigenvalues(rho))
    value = r[0] - r[1] - r[2] - r[3]
    if value <= ZERO_SNAP:
        return 0.0
    return min(float(value), 1.0)


def coherence(rho_k: DensityMatrix) -> float:
    """Sum of the magnitudes of the two off-diagonal entries of a qubit state."""
    m = rho_k.matrix
    return min(float(abs(m[0, 1]) + abs(m[1, 0])), 1.0)


def predictability(rho_k: DensityMatrix) -> float:
    m = rho_k.matrix
    return min(float(abs(m[1, 1].real - m[0, 0].real)), 1.0)


def c_max_from_spectrum(evals) -> float:
    snapped = linalg.snap_roundoff(evals)
    l1, l2, l3, l4 = sorted((max(float(x), 0.0) for x in snapped), reverse=True)
    value = l1 - l3 - 2.0 * math.sqrt(l2 * l4)
    if value <= ZERO_SNAP:
        return 0.0
    return min(value, 1.0)


def c_max(rho: DensityMatrix) -> float:
    """Largest concurrence reachable by any state with the spectrum of ``rho``."""
    return c_max_from_spectrum(rho.eigenvalues)


def _record(rho_a, rho_b, c, cmax, pur, params):
    v_a, v_b = coherence(rho_a), coherence(rho_b)
    p_a, p_b = predictability(rho_a), predictability(rho_b)
    return TrialityRecord(
        v_a=v_a,
        v_b=v_b,
        p_a=p_a,
        p_b=p_b,
        c=c,
        c_max=cmax,
        purity=pur,
        sum_a=v_a**2 + p_a**2 + c**2,
        sum_b=v_b**2 + p_b**2 + c**2,
        alpha=None if params is None else params.alpha,
        theta=None if params is None else params.theta,
    )


def evaluate(rho: DensityMatrix, params: Optional[PrepParams] = None) -> TrialityRecord:
    """All metrics of a two-qubit density matrix.

    ``params`` only tags the record with the preparation angles.
    """
    rho_a = partial_trace(rho, "A")
    rho_b = partial_trace(rho, "B")
    return _record(rho_a, rho_b, concurrence_mixed(rho), c_max(rho), purity(rho), params)


def evaluate_pure(s: PureTwoQubitState, params: Optional[PrepParams] = None) -> TrialityRecord:
    """Pure-state fast path: concurrence from the amplitudes, C_max = 1."""
    rho = density_from_pure(s)
    rho_a = partial_trace(rho, "A")
    rho_b = partial_trace(rho, "B")
    return _record(rho_a, rho_b, concurrence_pure(s), c_max(rho), purity(rho), params)


def fidelity_with_pure(rho: DensityMatrix, s: PureTwoQubitState) -> float:
    psi = s.amplitudes
    return float(np.real(psi.conj() @ rho.matrix @ psi))
