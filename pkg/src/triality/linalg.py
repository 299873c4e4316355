"""Small dense complex linear algebra for 2x2 and 4x4 states and gates.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Only the
Hermitian eigenproblem is solved here (cyclic Jacobi); no routine in the
package needs a general non-Hermitian eigensolver.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NotHermitian, NotPSD

ComplexMatrix = np.ndarray

HERMITIAN_TOL = 1e-10
CLIP_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
# eigenvalues within this many ulps of the spectral radius are indistinguishable from 0
ROUNDOFF_FLOOR = 16 * np.finfo(float).eps

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}


def as_matrix(a) -> ComplexMatrix:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; the first factor is the most significant qubit."""
    return np.kron(as_matrix(a), as_matrix(b))


def adjoint(a: ComplexMatrix) -> ComplexMatrix:
    return as_matrix(a).conj().T


def conj(a: ComplexMatrix) -> ComplexMatrix:
    return as_matrix(a).conj()


def trace(a: ComplexMatrix) -> complex:
    return complex(np.trace(as_matrix(a)))


def hermiticity_error(h: ComplexMatrix) -> float:
    h = as_matrix(h)
    return float(np.max(np.abs(h - h.conj().T)))


def _off_norm(a: list) -> float:
    n = len(a)
    total = 0.0
    for i in range(n):
        row = a[i]
        for j in range(n):
            if i != j:
                z = row[j]
                total += z.real * z.real + z.imag * z.imag
    return math.sqrt(total)


def _jacobi_rotate(a: list, v: list, p: int, q: int) -> None:
    """Zero a[p][q] in place with one complex Jacobi rotation; accumulate into v."""
    apq = a[p][q]
    mag = abs(apq)
    if mag == 0.0:
        return
    phase_c = (apq / mag).conjugate()
    # U = diag(1, conj(phase)) on (p, q), then a real rotation
    theta = (a[q][q].real - a[p][p].real) / (2.0 * mag)
    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
    c = 1.0 / math.hypot(t, 1.0)
    s = t * c
    up_p, up_q = c, -s * phase_c
    uq_p, uq_q = s, c * phase_c
    n = len(a)
    for k in range(n):
        row = a[k]
        x, y = row[p], row[q]
        row[p] = x * up_p + y * up_q
        row[q] = x * uq_p + y * uq_q
    cup_q, cuq_q = up_q.conjugate(), uq_q.conjugate()
    row_p, row_q = a[p], a[q]
    for k in range(n):
        x, y = row_p[k], row_q[k]
        row_p[k] = up_p * x + cup_q * y
        row_q[k] = uq_p * x + cuq_q * y
    row_p[q] = 0j
    row_q[p] = 0j
    row_p[p] = complex(row_p[p].real, 0.0)
    row_q[q] = complex(row_q[q].real, 0.0)
    for k in range(n):
        row = v[k]
        x, y = row[p], row[q]
        row[p] = x * up_p + y * up_q
        row[q] = x * uq_p + y * uq_q


def hermitian_eigen(h: ComplexMatrix) -> tuple[np.ndarray, ComplexMatrix]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues sorted in
    descending order (stable for ties) and eigenvectors as matching columns.

    Raises:
        NotHermitian: if ``max|h - h^H|`` exceeds 1e-10.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise NotHermitian(f"matrix is not square: {h.shape}")
    err = hermiticity_error(h)
    if err > HERMITIAN_TOL:
        raise NotHermitian(f"max |h - h^H| = {err:.3e}")
    n = h.shape[0]
    # small matrices: plain Python complex arithmetic beats numpy call overhead
    a = (0.5 * (h + h.conj().T)).tolist()
    v = np.eye(n, dtype=complex).tolist()
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) < JACOBI_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(a, v, p, q)
    evals = np.array([a[i][i].real for i in range(n)])
    order = np.argsort(-evals, kind="stable")
    return evals[order], np.array(v, dtype=complex)[:, order]


def eigvalsh_desc(h: ComplexMatrix) -> np.ndarray:
    return hermitian_eigen(h)[0]


def snap_roundoff(evals: np.ndarray) -> np.ndarray:
    """Zero eigenvalues below the round-off floor before taking square roots.

    A zero eigenvalue computed as 1e-17 would otherwise contribute ~3e-9
    after the square root.
    """
    evals = np.asarray(evals, dtype=float).copy()
    if evals.size:
        floor = ROUNDOFF_FLOOR * float(np.max(np.abs(evals)))
        evals[np.abs(evals) <= floor] = 0.0
    return evals


def sqrt_psd(h: ComplexMatrix) -> ComplexMatrix:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-1e-10, 0)`` are treated as zero; anything more
    negative raises :class:`NotPSD`.
    """
    evals, vecs = hermitian_eigen(h)
    if evals.size and evals[-1] < -CLIP_TOL:
        raise NotPSD(f"smallest eigenvalue {evals[-1]:.3e} < -{CLIP_TOL}")
    roots = np.sqrt(np.clip(snap_roundoff(evals), 0.0, None))
    s = (vecs * roots) @ vecs.conj().T
    return 0.5 * (s + s.conj().T)
