"""Local Pauli measurement settings for two-qubit tomography."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg

PAULI_AXES = ("X", "Y", "Z")
OUTCOMES = ("00", "01", "10", "11")

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S_DAG = np.array([[1, 0], [0, -1j]], dtype=complex)

# unitary mapping the +1 eigenvector of each Pauli onto |0>
ROTATIONS = {
    "X": _H,
    "Y": _H @ _S_DAG,
    "Z": np.eye(2, dtype=complex),
}


@dataclass(frozen=True, order=True)
class BasisSetting:
    basis_a: str
    basis_b: str

    def __post_init__(self):
        if self.basis_a not in PAULI_AXES or self.basis_b not in PAULI_AXES:
            raise ValueError(f"invalid basis setting {self.basis_a}{self.basis_b}")

    def __str__(self) -> str:
        return self.basis_a + self.basis_b

    @classmethod
    def parse(cls, text: str) -> "BasisSetting":
        text = text.strip().upper()
        if len(text) != 2:
            raise ValueError(f"basis setting must be two letters, got {text!r}")
        return cls(text[0], text[1])

    def rotation(self) -> np.ndarray:
        return linalg.kron(ROTATIONS[self.basis_a], ROTATIONS[self.basis_b])


ALL_SETTINGS = tuple(BasisSetting(a, b) for a, b in itertools.product(PAULI_AXES, repeat=2))
