# core/englert.py

"""
Which-way detector (WWD) quantities for a two-arm interferometer.

A detector starts in ``rho_i`` and is touched by ``u0`` or ``u1`` depending on
the arm. The detector states left behind are ρ⁰ = u0†·rho_i·u0 and
ρ¹ = u1†·rho_i·u1 (the conjugation order is u†ρu, not uρu†). From them:

* distinguishability D = ½ Tr|ρ⁰ − ρ¹| (trace distance);
* visibility V = |Tr(u0†·rho_i·u1)|;

and V² + D² ≤ 1, with equality for a pure initial detector state.

All 2×2 eigenvalue problems are solved in closed form.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .exceptions import OperatorError

logger = logging.getLogger(__name__)

DEFAULT_TOL_OPERATOR = 1e-12


def _as_matrix2(values, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.shape != (2, 2):
        raise OperatorError(f"{what} must be 2×2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise OperatorError(f"{what} contains NaN or Inf")
    return arr


def hermitian_eigenvalues2(matrix) -> Tuple[float, float]:
    """
    Eigenvalues (low, high) of a 2×2 Hermitian matrix [[a, b], [b*, d]]:
    mean ± √(((a − d)/2)² + |b|²).
    """
    m = np.asarray(matrix)
    a = float(np.real(m[0, 0]))
    d = float(np.real(m[1, 1]))
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), abs(complex(m[0, 1])))
    return mean - radius, mean + radius


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    """A qubit density matrix: Hermitian, unit trace, positive semidefinite."""
    matrix: np.ndarray
    tol: float = DEFAULT_TOL_OPERATOR

    def __post_init__(self):
        m = _as_matrix2(self.matrix, "density matrix")
        hermiticity = float(np.max(np.abs(m - m.conj().T)))
        if hermiticity > self.tol:
            raise OperatorError(f"density matrix is not Hermitian (deviation {hermiticity:.3g})")
        # drop the anti-Hermitian rounding noise
        m = 0.5 * (m + m.conj().T)
        trace = float(np.real(np.trace(m)))
        if abs(trace - 1.0) > self.tol:
            raise OperatorError(f"density matrix trace is {trace!r}, expected 1 (tolerance {self.tol:g})")
        low, _ = hermitian_eigenvalues2(m)
        if low < -self.tol:
            raise OperatorError(f"density matrix has negative eigenvalue {low:.3g}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_ket(cls, ket) -> "DensityMatrix2":
        """|χ⟩⟨χ| for a ket, normalized first."""
        vec = np.array(ket, dtype=np.complex128).reshape(-1)
        if vec.shape != (2,):
            raise OperatorError(f"ket must have 2 components, got shape {vec.shape}")
        norm = float(np.linalg.norm(vec))
        if norm == 0.0 or not math.isfinite(norm):
            raise OperatorError("cannot build a density matrix from a zero or non-finite ket")
        vec = vec / norm
        return cls(np.outer(vec, vec.conj()))

    @classmethod
    def mixture(cls, weights: Sequence[float], kets: Sequence) -> "DensityMatrix2":
        """Σ_k w_k |χ_k⟩⟨χ_k| with non-negative weights summing to 1."""
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0.0) or abs(float(w.sum()) - 1.0) > DEFAULT_TOL_OPERATOR:
            raise OperatorError(f"mixture weights must be non-negative and sum to 1, got {w.tolist()}")
        m = sum(wk * cls.from_ket(k).matrix for wk, k in zip(w, kets))
        return cls(m)

    def eigenvalues(self) -> Tuple[float, float]:
        """(low, high), with values above −tol clipped at 0."""
        low, high = hermitian_eigenvalues2(self.matrix)
        return max(0.0, low), max(0.0, high)

    def purity(self) -> float:
        """Tr ρ²."""
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def is_pure(self, tol: float = 1e-12) -> bool:
        return self.eigenvalues()[0] < tol


@dataclass(frozen=True, eq=False)
class Unitary2:
    """A 2×2 unitary operator."""
    matrix: np.ndarray
    tol: float = DEFAULT_TOL_OPERATOR

    def __post_init__(self):
        m = _as_matrix2(self.matrix, "unitary")
        deviation = float(np.max(np.abs(m.conj().T @ m - np.eye(2))))
        if deviation > self.tol:
            raise OperatorError(f"operator is not unitary (max |U†U − I| = {deviation:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dagger(self) -> np.ndarray:
        return self.matrix.conj().T


IDENTITY = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0)


def _require(value, cls, what: str):
    if not isinstance(value, cls):
        raise OperatorError(f"{what} must be a {cls.__name__}, got {type(value).__name__}")


def conjugate(u: Unitary2, rho: DensityMatrix2) -> DensityMatrix2:
    """u†·rho·u, the detector state left behind in one arm."""
    _require(u, Unitary2, "u")
    _require(rho, DensityMatrix2, "rho")
    return DensityMatrix2(u.dagger @ rho.matrix @ u.matrix)


def trace_distance(rho0: DensityMatrix2, rho1: DensityMatrix2) -> float:
    """
    ½ Σ|λ_k| over the eigenvalues of rho0 − rho1, a value in [0, 1].

    For pure states |a⟩, |b⟩ this equals √(1 − |⟨a|b⟩|²).

    Raises:
        OperatorError: If either argument is not a DensityMatrix2.
    """
    _require(rho0, DensityMatrix2, "rho0")
    _require(rho1, DensityMatrix2, "rho1")
    low, high = hermitian_eigenvalues2(rho0.matrix - rho1.matrix)
    return min(1.0, 0.5 * (abs(low) + abs(high)))


def englert_visibility(u0: Unitary2, u1: Unitary2, rho_i: DensityMatrix2) -> float:
    """|Tr(u0†·rho_i·u1)|, the fringe visibility left by the detector."""
    _require(u0, Unitary2, "u0")
    _require(u1, Unitary2, "u1")
    _require(rho_i, DensityMatrix2, "rho_i")
    return min(1.0, abs(complex(np.trace(u0.dagger @ rho_i.matrix @ u1.matrix))))


def wwd_duality_pair(u0: Unitary2, u1: Unitary2, rho_i: DensityMatrix2) -> Tuple[float, float]:
    """
    Returns (V, D) for one which-way detector setup.

    Args:
        u0 (Unitary2): Coupling in arm 0.
        u1 (Unitary2): Coupling in arm 1.
        rho_i (DensityMatrix2): Initial detector state.

    Returns:
        Tuple[float, float]: Visibility and distinguishability, V² + D² ≤ 1.
    """
    V = englert_visibility(u0, u1, rho_i)
    D = trace_distance(conjugate(u0, rho_i), conjugate(u1, rho_i))
    logger.debug("wwd_duality_pair: V=%.6g D=%.6g", V, D)
    return V, D
