"""Two-qubit pure and mixed states and the Ry / controlled-rotation preparation circuit.

Basis order is |00>, |01>, |10>, |11> with qubit A as the most significant bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import InvalidState

NORM_TOL = 1e-10
STATE_TOL = 1e-10

LABELS = ("AB", "A", "B")


@dataclass(frozen=True)
class PrepParams:
    """Circuit angles in radians, both restricted to [0, pi]."""

    alpha: float
    theta: float

    def __post_init__(self):
        for name in ("alpha", "theta"):
            value = getattr(self, name)
            if not (0.0 <= value <= math.pi + 1e-12) or math.isnan(value):
                raise InvalidState(f"{name}={value!r} outside [0, pi]")

    @classmethod
    def from_pi_units(cls, alpha: float, theta: float) -> "PrepParams":
        """Build from angles given as multiples of pi (0.5 -> pi/2)."""
        def scale(x):
            # absorb round-off at the upper end only
            return math.pi if 1.0 < x <= 1.0 + 1e-12 else x * math.pi

        return cls(scale(alpha), scale(theta))


BELL_PARAMS = PrepParams(math.pi / 2, math.pi)


@dataclass(frozen=True)
class PureTwoQubitState:
    """Amplitudes ``(a00, a01, a10, a11)`` of a normalized two-qubit ket."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (4,):
            raise InvalidState(f"expected 4 amplitudes, got {amps.shape}")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidState(f"state norm^2 = {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes) -> "PureTwoQubitState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(amps / np.linalg.norm(amps))

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix for the pair (4x4) or one qubit (2x2).

    Construction checks Hermiticity, unit trace and positivity (all within
    1e-10). Eigenvalues in ``[-1e-10, 0)`` are clipped to zero and the trace
    renormalized; larger violations raise :class:`InvalidState`. The sorted
    spectrum is kept on the instance as ``eigenvalues``.
    """

    matrix: np.ndarray
    label: str = "AB"
    eigenvalues: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape not in ((4, 4), (2, 2)):
            raise InvalidState(f"density matrix must be 4x4 or 2x2, got {m.shape}")
        if self.label not in LABELS:
            raise InvalidState(f"unknown label {self.label!r}")
        if (m.shape == (4, 4)) != (self.label == "AB"):
            raise InvalidState(f"label {self.label!r} does not match shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidState("density matrix has non-finite entries")
        herr = linalg.hermiticity_error(m)
        if herr > STATE_TOL:
            raise InvalidState(f"not Hermitian: max |rho - rho^H| = {herr:.3e}")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > STATE_TOL:
            raise InvalidState(f"trace = {tr!r}, expected 1")
        evals = self.eigenvalues
        if evals is None:
            evals, vecs = linalg.hermitian_eigen(m)
            if evals[-1] < -linalg.CLIP_TOL:
                raise InvalidState(f"not positive semidefinite: eigenvalue {evals[-1]:.3e}")
            if evals[-1] < 0.0:
                evals = np.clip(evals, 0.0, None)
                evals = evals / evals.sum()
                m = (vecs * evals) @ vecs.conj().T
                m = 0.5 * (m + m.conj().T)
        evals = np.asarray(evals, dtype=float)
        m.setflags(write=False)
        evals.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "eigenvalues", evals)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dict(self) -> dict:
        flat = self.matrix.reshape(-1)
        return {
            "label": self.label,
            "entries": [[float(z.real), float(z.imag)] for z in flat],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DensityMatrix":
        try:
            entries = np.array([complex(re, im) for re, im in data["entries"]])
            label = data.get("label", "AB")
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidState(f"malformed density-matrix JSON: {exc}") from None
        d = int(round(math.sqrt(entries.size)))
        if d * d != entries.size:
            raise InvalidState(f"{entries.size} entries do not form a square matrix")
        return cls(entries.reshape(d, d), label)

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        return cls.from_dict(json.loads(text))


def ry(alpha: float) -> np.ndarray:
    c, s = math.cos(alpha / 2), math.sin(alpha / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def cu3_theta(theta: float) -> np.ndarray:
    """Controlled rotation CU3(theta, 0, 0) with qubit A as control."""
    u = np.eye(4, dtype=complex)
    u[2:, 2:] = ry(theta)
    return u


def preparation_unitary(p: PrepParams) -> np.ndarray:
    return cu3_theta(p.theta) @ linalg.kron(ry(p.alpha), linalg.I2)


def prepare_state(p: PrepParams) -> PureTwoQubitState:
    ca, sa = math.cos(p.alpha / 2), math.sin(p.alpha / 2)
    ct, st = math.cos(p.theta / 2), math.sin(p.theta / 2)
    return PureTwoQubitState(np.array([ca, 0.0, ct * sa, st * sa], dtype=complex))


def prepare_state_circuit(p: PrepParams) -> PureTwoQubitState:
    """Same state as :func:`prepare_state`, obtained by applying the gates to |00>."""
    ket00 = np.array([1, 0, 0, 0], dtype=complex)
    return PureTwoQubitState(preparation_unitary(p) @ ket00)


def density_from_pure(s: PureTwoQubitState) -> DensityMatrix:
    psi = s.amplitudes
    rho = np.outer(psi, psi.conj())
    # rank one by construction, so the spectrum is known
    return DensityMatrix(rho, "AB", eigenvalues=np.array([1.0, 0.0, 0.0, 0.0]))


def partial_trace(rho: DensityMatrix, keep: str) -> DensityMatrix:
    """Reduced state of qubit ``keep`` ('A' or 'B') from a 4x4 density matrix."""
    if rho.dim != 4:
        raise InvalidState("partial_trace needs a two-qubit density matrix")
    t = rho.matrix.reshape(2, 2, 2, 2)  # indices a, b, a', b'
    if keep == "A":
        red = np.einsum("ijkj->ik", t)
    elif keep == "B":
        red = np.einsum("jijk->ik", t)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    # a partial trace of a valid state is valid; its 2x2 spectrum is closed-form
    a, d = red[0, 0].real, red[1, 1].real
    half_gap = math.hypot(0.5 * (a - d), abs(red[0, 1]))
    mid = 0.5 * (a + d)
    evals = np.array([mid + half_gap, max(mid - half_gap, 0.0)])
    return DensityMatrix(red, keep, eigenvalues=evals)


def purity(rho: DensityMatrix) -> float:
    m = rho.matrix
    value = float(np.real(np.sum(m * m.T)))  # Tr(rho^2) without the full product
    return min(max(value, 0.0), 1.0)


def werner_state(p: float) -> DensityMatrix:
    """``p |Phi+><Phi+| + (1 - p) I/4``."""
    bell = density_from_pure(prepare_state(BELL_PARAMS)).matrix
    return DensityMatrix(p * bell + (1 - p) * np.eye(4) / 4)


def maximally_mixed(d: int = 4) -> DensityMatrix:
    return DensityMatrix(np.eye(d, dtype=complex) / d, "AB" if d == 4 else "A")
