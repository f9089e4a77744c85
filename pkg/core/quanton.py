# core/quanton.py

"""
Single-photon quanton states over path ⊗ polarization.

A state is stored as four complex amplitudes in the basis order
``[path0⊗pol0, path0⊗pol1, path1⊗pol0, path1⊗pol1]``. States are built from
the parameters (D, V, C, α, β),

    |ψ⟩ = √((1+D)/2) |0⟩|φ0⟩ + √((1−D)/2) e^{iα} |1⟩|φ1⟩,
    |φ1⟩ = (V |φ0⟩ + C e^{iβ} |φ0⊥⟩) / √(1−D²),

and the same parameters are recovered from arbitrary pure states. D here is
the population imbalance between the arms, which for pure states coincides
with the predictability P; the trace-distance distinguishability of a
which-way detector lives in ``core.englert``.

Conventions used by :func:`extract_params`:

* the more populated path is relabeled as path 0 (``paths_swapped`` records it);
* the global phase is fixed by making the largest-magnitude component of the
  path-0 polarization real and positive;
* φ0⊥ is always the canonical complement (−conj(y), conj(x)) of φ0 = (x, y),
  so β is measured against that vector;
* for D = 1 the values V, C, α, β are reported as 0.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .exceptions import BasisError, ConstraintError, NormalizationError, QuantonError, RangeError
from .utils import wrap_phase

logger = logging.getLogger(__name__)

DEFAULT_TOL_NORM = 1e-12
DEFAULT_TOL_TRIALITY = 1e-10
BASIS_TOL = 1e-12

# amplitudes below this magnitude carry no usable phase
_PHASE_EPS = 1e-15


def _as_complex_vector(values, size: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128).reshape(-1)
    if arr.shape != (size,):
        raise QuantonError(f"{what} needs {size} complex amplitudes, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise QuantonError(f"{what} contains NaN or Inf")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector4:
    """
    Pure state of one photon over path ⊗ polarization.

    The amplitudes are stored as a read-only complex128 array of length 4.
    Normalization is checked by the operations that require it (see
    :meth:`check_normalized`), so a slightly unnormalized vector can still be
    held and repaired with :meth:`normalized`.
    """
    amp: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amp", _as_complex_vector(self.amp, 4, "StateVector4"))

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amp, self.amp).real)

    def check_normalized(self, tol: float = DEFAULT_TOL_NORM) -> "StateVector4":
        """Returns self, or raises NormalizationError if |‖ψ‖² − 1| > tol."""
        deviation = abs(self.norm_squared - 1.0)
        if deviation > tol:
            raise NormalizationError(
                f"state norm deviates from 1 by {deviation:.3g} (tolerance {tol:g})"
            )
        return self

    def normalized(self) -> "StateVector4":
        """Returns the state divided by its norm."""
        norm = math.sqrt(self.norm_squared)
        if norm == 0.0:
            raise NormalizationError("cannot normalize the zero vector")
        return StateVector4(self.amp / norm)

    def inner(self, other: "StateVector4") -> complex:
        """⟨self|other⟩."""
        return complex(np.vdot(self.amp, other.amp))

    @property
    def path0(self) -> np.ndarray:
        """Unnormalized polarization amplitudes conditional on path 0."""
        return self.amp[:2]

    @property
    def path1(self) -> np.ndarray:
        """Unnormalized polarization amplitudes conditional on path 1."""
        return self.amp[2:]


def canonical_complement(phi0: np.ndarray) -> np.ndarray:
    """The vector (−conj(y), conj(x)) orthogonal to φ0 = (x, y)."""
    return np.array([-np.conj(phi0[1]), np.conj(phi0[0])], dtype=np.complex128)


def _fix_gauge(vec: np.ndarray) -> Tuple[np.ndarray, complex]:
    """
    Rotates ``vec`` so that its largest-magnitude component (first one on ties)
    is real and positive. Returns the rotated vector and the phase applied.
    """
    k = int(np.argmax(np.abs(vec)))
    pivot = vec[k]
    if abs(pivot) == 0.0:
        return vec, 1.0 + 0.0j
    g = complex(np.conj(pivot) / abs(pivot))
    rotated = vec * g
    # exact zero imaginary part on the pivot
    rotated[k] = abs(pivot)
    return rotated, g


@dataclass(frozen=True, eq=False)
class PolarizationBasis:
    """An orthonormal polarization basis {|φ0⟩, |φ0⊥⟩}."""
    phi0: np.ndarray
    phi0perp: np.ndarray

    def __post_init__(self):
        try:
            phi0 = _as_complex_vector(self.phi0, 2, "phi0")
            phi0perp = _as_complex_vector(self.phi0perp, 2, "phi0perp")
        except QuantonError as e:
            raise BasisError(str(e)) from e
        for name, vec in (("phi0", phi0), ("phi0perp", phi0perp)):
            deviation = abs(float(np.vdot(vec, vec).real) - 1.0)
            if deviation > BASIS_TOL:
                raise BasisError(f"{name} is not unit norm (deviation {deviation:.3g})")
        overlap = abs(complex(np.vdot(phi0, phi0perp)))
        if overlap >= BASIS_TOL:
            raise BasisError(f"basis vectors are not orthogonal (|⟨φ0|φ0⊥⟩| = {overlap:.3g})")
        object.__setattr__(self, "phi0", phi0)
        object.__setattr__(self, "phi0perp", phi0perp)

    @classmethod
    def from_vector(cls, phi0) -> "PolarizationBasis":
        """
        Builds the canonical basis containing the direction of ``phi0``.

        ``phi0`` is normalized, its gauge is fixed (largest-magnitude component
        real positive) and it is completed with :func:`canonical_complement`.

        Raises:
            BasisError: If ``phi0`` is the zero vector.
        """
        vec = np.array(phi0, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(vec)) if vec.shape == (2,) else 0.0
        if norm == 0.0 or not math.isfinite(norm):
            raise BasisError("cannot build a basis from a zero or non-finite polarization vector")
        vec, _ = _fix_gauge(vec / norm)
        return cls(vec, canonical_complement(vec))

    def matrix(self) -> np.ndarray:
        """Columns φ0 and φ0⊥, i.e. the unitary mapping the standard basis onto this one."""
        return np.column_stack([self.phi0, self.phi0perp])


def standard_basis() -> PolarizationBasis:
    """The computational polarization basis (1, 0), (0, 1)."""
    return PolarizationBasis(np.array([1.0, 0.0]), np.array([0.0, 1.0]))


@dataclass(frozen=True)
class QuantonParams:
    """
    The quintuple (D, V, C, α, β).

    D, V and C must lie in [0, 1] and satisfy D² + V² + C² = 1 within
    ``tol_triality``. Phases are wrapped onto [0, 2π). For D = 1 the phases
    are unobservable; they are accepted and ignored.
    """
    D: float
    V: float
    C: float
    alpha: float = 0.0
    beta: float = 0.0
    tol_triality: float = field(default=DEFAULT_TOL_TRIALITY, repr=False, compare=False)

    def __post_init__(self):
        for name in ("D", "V", "C", "alpha", "beta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ConstraintError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        for name in ("D", "V", "C"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConstraintError(f"{name} must lie in [0, 1], got {value}")
        residual = abs(self.D ** 2 + self.V ** 2 + self.C ** 2 - 1.0)
        if residual > self.tol_triality:
            raise ConstraintError(
                f"D² + V² + C² deviates from 1 by {residual:.3g} (tolerance {self.tol_triality:g})"
            )
        object.__setattr__(self, "alpha", wrap_phase(self.alpha))
        object.__setattr__(self, "beta", wrap_phase(self.beta))

    @classmethod
    def from_angle(cls, D: float, theta: float, alpha: float = 0.0, beta: float = 0.0) -> "QuantonParams":
        """
        Parametrizes the quarter circle of fixed D: V = √(1−D²) cos θ, C = √(1−D²) sin θ.
        """
        radius = math.sqrt(max(0.0, 1.0 - D * D))
        return cls(D, radius * math.cos(theta), radius * math.sin(theta), alpha, beta)

    def as_dict(self) -> Dict[str, float]:
        return {"D": self.D, "V": self.V, "C": self.C, "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True, eq=False)
class ExtractionResult:
    """
    Parameters recovered from a state.

    ``paths_swapped`` is True when path 1 carried more population than path 0
    and the labels were exchanged before extraction.
    """
    params: QuantonParams
    basis: PolarizationBasis
    predictability: float
    paths_swapped: bool = False

    def rebuild(self) -> StateVector4:
        """Rebuilds the state in the original path labeling (up to a global phase)."""
        state = build_state(self.params, self.basis)
        return swap_paths(state) if self.paths_swapped else state


def build_state(params: QuantonParams, basis: PolarizationBasis, tol_norm: float = DEFAULT_TOL_NORM) -> StateVector4:
    """
    Builds √((1+D)/2)|0⟩|φ0⟩ + √((1−D)/2) e^{iα}|1⟩|φ1⟩.

    The path-1 branch is evaluated as e^{iα}(V|φ0⟩ + C e^{iβ}|φ0⊥⟩)/√(2(1+D)),
    which is algebraically the same and never divides by √(1−D²). For D = 1
    the branch is exactly zero. The result is renormalized so that a
    triality violation within tolerance does not leak into the norm.

    Args:
        params (QuantonParams): Validated parameters.
        basis (PolarizationBasis): Validated basis {φ0, φ0⊥}.
        tol_norm (float): Accepted norm deviation of the result.

    Returns:
        StateVector4: The normalized state.
    """
    if not isinstance(params, QuantonParams):
        raise ConstraintError(f"expected QuantonParams, got {type(params).__name__}")
    if not isinstance(basis, PolarizationBasis):
        raise BasisError(f"expected PolarizationBasis, got {type(basis).__name__}")

    D = params.D
    head = math.sqrt((1.0 + D) / 2.0) * basis.phi0
    if D == 1.0:
        logger.debug("build_state: D = 1, path-1 branch set to zero")
        tail = np.zeros(2, dtype=np.complex128)
    else:
        tail = (params.V * basis.phi0 + params.C * cmath.exp(1j * params.beta) * basis.phi0perp)
        tail = cmath.exp(1j * params.alpha) * tail / math.sqrt(2.0 * (1.0 + D))

    state = StateVector4(np.concatenate([head, tail]))
    return state.normalized().check_normalized(tol_norm)


def swap_paths(state: StateVector4) -> StateVector4:
    """Exchanges the path labels 0 ↔ 1."""
    return StateVector4(state.amp[[2, 3, 0, 1]])


def path_measures(amplitudes) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorized (P, V, C) for an array of states with shape (..., 4).

    P = |p0 − p1|, V = 2|ρ01| of the reduced path operator, and
    C = 2|a00·a11 − a01·a10|, each divided by the total population so that
    tiny normalization errors do not bias the identity P² + V² + C² = 1.
    """
    a = np.asarray(amplitudes, dtype=np.complex128)
    p0 = np.abs(a[..., 0]) ** 2 + np.abs(a[..., 1]) ** 2
    p1 = np.abs(a[..., 2]) ** 2 + np.abs(a[..., 3]) ** 2
    total = p0 + p1
    rho01 = a[..., 0] * np.conj(a[..., 2]) + a[..., 1] * np.conj(a[..., 3])
    det = a[..., 0] * a[..., 3] - a[..., 1] * a[..., 2]
    P = np.abs(p0 - p1) / total
    V = 2.0 * np.abs(rho01) / total
    C = 2.0 * np.abs(det) / total
    return P, V, C


def reduced_path_operator(state: StateVector4, tol_norm: float = DEFAULT_TOL_NORM) -> np.ndarray:
    """Partial trace over polarization: [[p0, ρ01], [ρ01*, p1]]."""
    state.check_normalized(tol_norm)
    u0, u1 = state.path0, state.path1
    rho01 = complex(np.vdot(u1, u0))
    return np.array(
        [[np.vdot(u0, u0).real, rho01], [np.conj(rho01), np.vdot(u1, u1).real]],
        dtype=np.complex128,
    )


def predictability(state: StateVector4, tol_norm: float = DEFAULT_TOL_NORM) -> float:
    """P = |p0 − p1|, the which-way knowledge available without a detector."""
    state.check_normalized(tol_norm)
    return float(path_measures(state.amp)[0])


def visibility(state: StateVector4, tol_norm: float = DEFAULT_TOL_NORM) -> float:
    """V = 2|ρ01|, twice the path coherence of the reduced path operator."""
    state.check_normalized(tol_norm)
    return float(path_measures(state.amp)[1])


def concurrence(state: StateVector4, tol_norm: float = DEFAULT_TOL_NORM) -> float:
    """
    Path/polarization entanglement 2|a00·a11 − a01·a10| ∈ [0, 1].

    Invariant under local unitaries on either factor (the determinant of the
    2×2 amplitude matrix only picks up a unit-modulus factor).
    """
    state.check_normalized(tol_norm)
    return float(min(1.0, path_measures(state.amp)[2]))


def extract_params(state: StateVector4, tol_norm: float = DEFAULT_TOL_NORM) -> ExtractionResult:
    """
    Recovers (D, V, C, α, β) and the polarization basis from a pure state.

    Args:
        state (StateVector4): A normalized state.
        tol_norm (float): Accepted norm deviation of the input.

    Returns:
        ExtractionResult: ``rebuild()`` reproduces ``state`` up to a global phase.

    Raises:
        NormalizationError: If the input is not normalized within ``tol_norm``.
    """
    state.check_normalized(tol_norm)
    u0 = np.array(state.path0)
    u1 = np.array(state.path1)
    p0 = float(np.vdot(u0, u0).real)
    p1 = float(np.vdot(u1, u1).real)

    # ties within tol_norm keep the input labeling
    swapped = (p1 - p0) > tol_norm
    if swapped:
        u0, u1 = u1, u0
        p0, p1 = p1, p0
    total = p0 + p1
    D = min(1.0, max(0.0, (p0 - p1) / total))
    P = D

    phi0, g = _fix_gauge(u0 / math.sqrt(p0))
    basis = PolarizationBasis(phi0, canonical_complement(phi0))

    if D == 1.0:
        logger.debug("extract_params: D = 1, reporting V = C = 0 and zero phases")
        params = QuantonParams(1.0, 0.0, 0.0, 0.0, 0.0)
        return ExtractionResult(params, basis, P, swapped)

    u1 = g * u1
    c0 = complex(np.vdot(basis.phi0, u1))
    c1 = complex(np.vdot(basis.phi0perp, u1))
    _, V, C = (float(x) for x in path_measures(np.concatenate([u0, u1])))
    V = min(1.0, V)
    C = min(1.0, C)

    if abs(c0) > _PHASE_EPS:
        alpha = cmath.phase(c0)
        beta = cmath.phase(c1) - alpha if abs(c1) > _PHASE_EPS else 0.0
    else:
        # no φ0 component: only α + β is defined, put it all on α
        alpha = cmath.phase(c1) if abs(c1) > _PHASE_EPS else 0.0
        beta = 0.0

    # extraction noise grows with the input norm error
    params = QuantonParams(D, V, C, alpha, beta, tol_triality=max(DEFAULT_TOL_TRIALITY, 10 * tol_norm))
    return ExtractionResult(params, basis, P, swapped)


def triality_residual(state: StateVector4, tol_norm: float = DEFAULT_TOL_NORM) -> float:
    """|D² + V² + C² − 1| from :func:`extract_params`; zero for every pure state."""
    p = extract_params(state, tol_norm).params
    return abs(p.D ** 2 + p.V ** 2 + p.C ** 2 - 1.0)


def triality_residuals(amplitudes) -> np.ndarray:
    """Vectorized |P² + V² + C² − 1| for an array of states with shape (..., 4)."""
    P, V, C = path_measures(amplitudes)
    return np.abs(P ** 2 + V ** 2 + C ** 2 - 1.0)


def canonical_states() -> Dict[str, StateVector4]:
    """
    The particle, wave and entanglon exemplars sharing φ0 = (1, 0):
    P = |0⟩|H⟩, W = (|0⟩ + |1⟩)|H⟩/√2, E = (|0⟩|H⟩ + |1⟩|V⟩)/√2.
    """
    basis = standard_basis()
    return {
        "particle": build_state(QuantonParams(1.0, 0.0, 0.0), basis),
        "wave": build_state(QuantonParams(0.0, 1.0, 0.0), basis),
        "entanglon": build_state(QuantonParams(0.0, 0.0, 1.0), basis),
    }


def conditional_basis(state: StateVector4, path: int = 0) -> PolarizationBasis:
    """
    Canonical basis built on the polarization conditional on ``path``.

    Unlike :func:`extract_params` this never relabels paths, which matters
    for balanced states where rounding decides which arm looks dominant.
    """
    if path not in (0, 1):
        raise RangeError(f"path must be 0 or 1, got {path}")
    return PolarizationBasis.from_vector(state.path0 if path == 0 else state.path1)
