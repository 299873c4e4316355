"""Two-qubit state tomography from nine local Pauli settings.

Counts -> Pauli expectations -> linear inversion -> nearest physical state.
Readout error is deliberately left in the reconstructed state.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .bases import ALL_SETTINGS, OUTCOMES, PAULI_AXES, BasisSetting
from .errors import InvalidState, MissingSetting, NotHermitian
from .noise import CountsTable, NoiseModel, derive_seed, run_noisy_prep, sample_counts
from .states import DensityMatrix, PrepParams

PAULI_PAIRS = tuple(p for p in itertools.product("IXYZ", repeat=2) if p != ("I", "I"))

# eigenvalue (+1 / -1) of each outcome bit
_SIGN = {"0": 1.0, "1": -1.0}


@dataclass(frozen=True)
class ExpectationSet:
    """The 15 non-trivial two-qubit Pauli expectations, keyed like ``("X", "I")``."""

    values: dict

    def __post_init__(self):
        missing = set(PAULI_PAIRS) - set(self.values)
        if missing:
            raise ValueError(f"missing Pauli expectations {sorted(missing)}")
        for key, value in self.values.items():
            if not -1 - 1e-9 <= value <= 1 + 1e-9:
                raise ValueError(f"expectation {key} = {value} outside [-1, 1]")

    def __getitem__(self, key) -> float:
        if isinstance(key, str):
            key = (key[0], key[1])
        return self.values[key]

    @classmethod
    def from_density(cls, rho) -> "ExpectationSet":
        """Exact expectations ``Tr(rho sigma_i x sigma_j)`` of a state."""
        m = rho.matrix if isinstance(rho, DensityMatrix) else linalg.as_matrix(rho)
        vals = {}
        for i, j in PAULI_PAIRS:
            op = linalg.kron(linalg.PAULI[i], linalg.PAULI[j])
            vals[(i, j)] = float(np.real(np.trace(m @ op)))
        return cls(vals)


def estimate_expectations(tables: Iterable[CountsTable]) -> ExpectationSet:
    """Pauli expectations from one counts table per basis setting.

    Correlators come from their own setting; single-qubit terms are averaged
    over the three settings that share the local basis.
    """
    by_setting = {}
    for t in tables:
        by_setting[t.setting] = t
    missing = [str(s) for s in ALL_SETTINGS if s not in by_setting]
    if missing:
        raise MissingSetting(f"no counts for settings {missing}")

    corr, local_a, local_b = {}, {}, {}
    for s in ALL_SETTINGS:
        freqs = dict(zip(OUTCOMES, by_setting[s].frequencies()))
        corr[(s.basis_a, s.basis_b)] = sum(_SIGN[o[0]] * _SIGN[o[1]] * f for o, f in freqs.items())
        local_a.setdefault(s.basis_a, []).append(sum(_SIGN[o[0]] * f for o, f in freqs.items()))
        local_b.setdefault(s.basis_b, []).append(sum(_SIGN[o[1]] * f for o, f in freqs.items()))

    vals = dict(corr)
    for axis in PAULI_AXES:
        vals[(axis, "I")] = float(np.mean(local_a[axis]))
        vals[("I", axis)] = float(np.mean(local_b[axis]))
    return ExpectationSet({k: float(v) for k, v in vals.items()})


def linear_inversion(e: ExpectationSet) -> np.ndarray:
    """``(1/4) [I x I + sum e_ij sigma_i x sigma_j]``; Hermitian, unit trace, maybe not PSD."""
    rho = np.eye(4, dtype=complex)
    for i, j in PAULI_PAIRS:
        rho = rho + e.values[(i, j)] * linalg.kron(linalg.PAULI[i], linalg.PAULI[j])
    rho = rho / 4
    return 0.5 * (rho + rho.conj().T)


def project_eigenvalues(evals: Sequence[float]) -> np.ndarray:
    """Zero negative eigenvalues, spreading their deficit evenly over the rest.

    ``evals`` must be sorted in descending order and sum to one.
    """
    lam = np.asarray(evals, dtype=float)
    n = lam.size
    keep = n
    deficit = 0.0
    while keep > 0 and lam[keep - 1] + deficit / keep < 0:
        deficit += lam[keep - 1]
        keep -= 1
    out = np.zeros(n)
    out[:keep] = lam[:keep] + deficit / keep
    return out


def project_to_physical(raw: np.ndarray) -> DensityMatrix:
    """Closest (Frobenius) positive semidefinite unit-trace matrix to ``raw``."""
    raw = linalg.as_matrix(raw)
    if linalg.hermiticity_error(raw) > linalg.HERMITIAN_TOL:
        raise NotHermitian("tomography estimate is not Hermitian")
    tr = float(np.real(np.trace(raw)))
    if abs(tr - 1.0) > 1e-6:
        raise InvalidState(f"tomography estimate has trace {tr}, expected 1")
    evals, vecs = linalg.hermitian_eigen(raw / tr)
    if evals[-1] >= 0.0:
        return DensityMatrix(raw / tr, eigenvalues=evals)
    lam = project_eigenvalues(evals)
    rho = (vecs * lam) @ vecs.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T), eigenvalues=lam)


def measure_all_settings(
    rho: DensityMatrix, shots: int, nm: NoiseModel = None, seed: int = 0
) -> list[CountsTable]:
    """Sample every basis setting; setting ``k`` uses a seed derived from ``(seed, k)``."""
    return [
        sample_counts(rho, s, shots, nm, setting_seed(seed, k))
        for k, s in enumerate(ALL_SETTINGS)
    ]


def setting_seed(seed: int, setting_index: int) -> int:
    return derive_seed(seed, setting_index)


def reconstruct(tables: Iterable[CountsTable]) -> DensityMatrix:
    return project_to_physical(linear_inversion(estimate_expectations(tables)))


def tomography_pipeline(p: PrepParams, nm: NoiseModel, shots: int, seed: int) -> DensityMatrix:
    """Noisy preparation, nine-setting sampling and physical reconstruction."""
    rho = run_noisy_prep(p, nm)
    return reconstruct(measure_all_settings(rho, shots, nm, seed))


def write_counts_csv(path, tables: Sequence[CountsTable], seed: int) -> None:
    """One row per (setting, outcome): ``setting,outcome,count,shots,seed``.

    ``seed`` is the run seed; each setting's own seed follows from it.
    """
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["setting", "outcome", "count", "shots", "seed"])
        for t in tables:
            for o in OUTCOMES:
                writer.writerow([str(t.setting), o, t.counts[o], t.shots, seed])


def read_counts_csv(path) -> tuple[list[CountsTable], int]:
    rows = {}
    shots = {}
    seed = None
    with open(Path(path), newline="") as fh:
        for row in csv.DictReader(fh):
            s = BasisSetting.parse(row["setting"])
            rows.setdefault(s, {})[row["outcome"]] = int(row["count"])
            shots[s] = int(row["shots"])
            seed = int(row["seed"])
    tables = [CountsTable(s, counts, shots[s]) for s, counts in rows.items()]
    return tables, seed
