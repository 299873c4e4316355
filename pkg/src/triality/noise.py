"""Parametric noise channels and shot sampling with readout error.

Channels act on density matrices exactly (Kraus / affine maps); randomness
only enters in :func:`sample_counts`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Union

import numpy as np

from . import linalg
from .bases import OUTCOMES, BasisSetting
from .errors import InvalidNoiseModel, InvalidProbabilities
from .states import DensityMatrix, PrepParams, cu3_theta, ry

PROB_TOL = 1e-9
PRESETS = ("ibmqx2-like",)


def _ideal_confusion():
    return np.stack([np.eye(2), np.eye(2)])


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Gate-level noise strengths plus per-qubit readout confusion.

    ``readout_confusion[k][t][r]`` is the probability of reading ``r`` on qubit
    ``k`` (0 = A, 1 = B) when its true value is ``t``.
    """

    depol_1q: float = 0.0
    depol_2q: float = 0.0
    amp_damping_gamma: float = 0.0
    phase_damping_gamma: float = 0.0
    readout_confusion: np.ndarray = field(default_factory=_ideal_confusion)

    def __post_init__(self):
        for name in ("depol_1q", "depol_2q", "amp_damping_gamma", "phase_damping_gamma"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InvalidNoiseModel(f"{name} must be a number, got {value!r}")
            if not 0.0 <= value <= 1.0:
                raise InvalidNoiseModel(f"{name}={value} outside [0, 1]")
            object.__setattr__(self, name, float(value))
        try:
            conf = np.array(self.readout_confusion, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidNoiseModel(f"readout_confusion: {exc}") from None
        if conf.shape != (2, 2, 2):
            raise InvalidNoiseModel(f"readout_confusion must have shape (2, 2, 2), got {conf.shape}")
        if np.any(conf < 0.0) or np.any(conf > 1.0):
            raise InvalidNoiseModel("readout_confusion entries must lie in [0, 1]")
        if np.max(np.abs(conf.sum(axis=2) - 1.0)) > 1e-12:
            raise InvalidNoiseModel("readout_confusion rows must sum to 1")
        conf.setflags(write=False)
        object.__setattr__(self, "readout_confusion", conf)

    @classmethod
    def ideal(cls) -> "NoiseModel":
        return cls()

    @classmethod
    def from_readout_flip(cls, flip_a: float, flip_b: float = None, **kwargs) -> "NoiseModel":
        flip_b = flip_a if flip_b is None else flip_b
        conf = [[[1 - f, f], [f, 1 - f]] for f in (flip_a, flip_b)]
        return cls(readout_confusion=conf, **kwargs)

    def to_dict(self) -> dict:
        return {
            "depol_1q": self.depol_1q,
            "depol_2q": self.depol_2q,
            "amp_damping_gamma": self.amp_damping_gamma,
            "phase_damping_gamma": self.phase_damping_gamma,
            "readout_confusion": self.readout_confusion.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseModel":
        if not isinstance(data, dict):
            raise InvalidNoiseModel("noise model JSON must be an object")
        known = {"depol_1q", "depol_2q", "amp_damping_gamma", "phase_damping_gamma", "readout_confusion"}
        unknown = set(data) - known
        if unknown:
            raise InvalidNoiseModel(f"unknown noise-model fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "NoiseModel":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidNoiseModel(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    @property
    def is_ideal(self) -> bool:
        return (
            self.depol_1q == self.depol_2q == self.amp_damping_gamma == self.phase_damping_gamma == 0.0
            and np.array_equal(self.readout_confusion, _ideal_confusion())
        )


def load_noise_model(source: Union[str, Path]) -> NoiseModel:
    """Load a noise model from a JSON file or a bundled preset name."""
    name = str(source)
    if name in PRESETS:
        text = resources.files("triality.presets").joinpath(name + ".json").read_text()
        return NoiseModel.from_json(text)
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise InvalidNoiseModel(f"cannot read noise model {name!r}: {exc}") from None
    return NoiseModel.from_json(text)


def preset(name: str = "ibmqx2-like") -> NoiseModel:
    return load_noise_model(name)


# -- channels on raw 4x4 arrays ---------------------------------------------

def _embed(op: np.ndarray, qubit: str) -> np.ndarray:
    if qubit == "A":
        return linalg.kron(op, linalg.I2)
    if qubit == "B":
        return linalg.kron(linalg.I2, op)
    raise ValueError(f"qubit must be 'A' or 'B', got {qubit!r}")


def _apply_kraus(m: np.ndarray, ops) -> np.ndarray:
    out = np.zeros_like(m)
    for k in ops:
        out += k @ m @ k.conj().T
    return out


def _reduce(m: np.ndarray, keep: str) -> np.ndarray:
    t = m.reshape(2, 2, 2, 2)
    return np.einsum("ijkj->ik", t) if keep == "A" else np.einsum("jijk->ik", t)


def _depolarize(m: np.ndarray, p: float, target: str) -> np.ndarray:
    if p == 0.0:
        return m
    if m.shape == (2, 2):
        return (1 - p) * m + p * np.trace(m) * linalg.I2 / 2
    if target == "both":
        mixed = np.trace(m) * np.eye(4) / 4
    elif target == "A":
        mixed = linalg.kron(linalg.I2 / 2, _reduce(m, "B"))
    elif target == "B":
        mixed = linalg.kron(_reduce(m, "A"), linalg.I2 / 2)
    else:
        raise ValueError(f"target must be 'A', 'B' or 'both', got {target!r}")
    return (1 - p) * m + p * mixed


def amplitude_damping_kraus(gamma: float) -> list[np.ndarray]:
    return [
        np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex),
        np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex),
    ]


def phase_damping_kraus(gamma: float) -> list[np.ndarray]:
    return [
        np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex),
        np.array([[0, 0], [0, math.sqrt(gamma)]], dtype=complex),
    ]


def _damp(m: np.ndarray, gamma_amp: float, gamma_phase: float, qubit: str) -> np.ndarray:
    lift = (lambda k: k) if m.shape == (2, 2) else (lambda k: _embed(k, qubit))
    if gamma_amp > 0.0:
        m = _apply_kraus(m, [lift(k) for k in amplitude_damping_kraus(gamma_amp)])
    if gamma_phase > 0.0:
        m = _apply_kraus(m, [lift(k) for k in phase_damping_kraus(gamma_phase)])
    return m


def _check_prob(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name}={value} outside [0, 1]")


def depolarize(rho: DensityMatrix, p: float, target: str = "both") -> DensityMatrix:
    """Replace the ``target`` subsystem by the maximally mixed state with probability ``p``."""
    _check_prob("p", p)
    return DensityMatrix(_depolarize(rho.matrix, p, target), rho.label)


def damp(rho: DensityMatrix, gamma_amp: float, gamma_phase: float, qubit: str = "A") -> DensityMatrix:
    """Amplitude damping followed by phase damping on one qubit."""
    _check_prob("gamma_amp", gamma_amp)
    _check_prob("gamma_phase", gamma_phase)
    return DensityMatrix(_damp(rho.matrix, gamma_amp, gamma_phase, qubit), rho.label)


def run_noisy_prep(p: PrepParams, nm: NoiseModel) -> DensityMatrix:
    """Channel-exact output of the preparation circuit under ``nm``.

    Layer order: Ry on A, then depol_1q on A and damping on both qubits;
    controlled rotation, then depol_2q on the pair and damping on both.
    """
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 1.0
    u1 = linalg.kron(ry(p.alpha), linalg.I2)
    m = u1 @ m @ u1.conj().T
    m = _depolarize(m, nm.depol_1q, "A")
    for q in ("A", "B"):
        m = _damp(m, nm.amp_damping_gamma, nm.phase_damping_gamma, q)
    u2 = cu3_theta(p.theta)
    m = u2 @ m @ u2.conj().T
    m = _depolarize(m, nm.depol_2q, "both")
    for q in ("A", "B"):
        m = _damp(m, nm.amp_damping_gamma, nm.phase_damping_gamma, q)
    return DensityMatrix(m)


# -- sampling ----------------------------------------------------------------

@dataclass(frozen=True)
class CountsTable:
    setting: BasisSetting
    counts: dict
    shots: int

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be positive")
        counts = {o: int(self.counts.get(o, 0)) for o in OUTCOMES}
        extra = set(self.counts) - set(OUTCOMES)
        if extra:
            raise ValueError(f"unknown outcomes {sorted(extra)}")
        if any(v < 0 for v in counts.values()):
            raise ValueError("counts must be non-negative")
        if sum(counts.values()) != self.shots:
            raise ValueError(f"counts sum to {sum(counts.values())}, expected {self.shots}")
        object.__setattr__(self, "counts", counts)

    def frequencies(self) -> np.ndarray:
        return np.array([self.counts[o] for o in OUTCOMES], dtype=float) / self.shots


def outcome_probabilities(rho: DensityMatrix, setting: BasisSetting, nm: NoiseModel = None) -> np.ndarray:
    """Probabilities of outcomes 00, 01, 10, 11 after rotation and readout error.

    Raises:
        InvalidProbabilities: if a Born probability falls outside [-1e-9, 1 + 1e-9].
    """
    u = setting.rotation()
    rotated = u @ rho.matrix @ u.conj().T
    probs = np.real(np.diag(rotated))
    if np.any(probs < -PROB_TOL) or np.any(probs > 1 + PROB_TOL):
        raise InvalidProbabilities(f"Born probabilities out of range: {probs}")
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    if nm is not None:
        conf = nm.readout_confusion
        joint = conf[0].T @ probs.reshape(2, 2) @ conf[1]
        probs = np.clip(joint.reshape(-1), 0.0, None)
        probs = probs / probs.sum()
    return probs


def sample_counts(
    rho: DensityMatrix,
    setting: BasisSetting,
    shots: int,
    nm: NoiseModel = None,
    seed: int = 0,
) -> CountsTable:
    """Draw ``shots`` measurement outcomes in ``setting`` with a generator seeded by ``seed``."""
    if shots < 1:
        raise ValueError("shots must be positive")
    probs = outcome_probabilities(rho, setting, nm)
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs)
    return CountsTable(setting, dict(zip(OUTCOMES, (int(x) for x in draws))), shots)


def derive_seed(*entropy: int) -> int:
    """Deterministic 63-bit seed from a tuple of non-negative integers."""
    state = np.random.SeedSequence([int(e) for e in entropy]).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 31 | int(state[1]) >> 1
