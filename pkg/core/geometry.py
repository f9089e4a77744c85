# core/geometry.py

"""
Fidelity and Bures distance between quanton states.

Two states are related through their polarization bases. With
φ0 = (1, 0), φ0⊥ = (0, 1) for the first state, the second state's basis is
pinned to

    φ̄0  = (γ, √(1−γ²) e^{iμ})
    φ̄0⊥ = e^{iξ} (−√(1−γ²) e^{−iμ}, γ)

so that ⟨φ̄0|φ0⟩ = γ and ⟨φ̄0⊥|φ0⊥⟩ = γ e^{−iξ}. Unitarity of the overlap
matrix leaves exactly one more phase, μ, which is carried explicitly. With
this convention the overlap of two quantons is

    |⟨ψ̄|ψ⟩| = |γ(1+D)(1+D̄) + γVV̄e^{iλ1} + γCC̄e^{iλ2}
               + √(1−γ²)(CV̄e^{i(λ3+ξ−μ)} − VC̄e^{i(λ4+μ−ξ)})| / (2√((1+D)(1+D̄)))

with λ1 = α − ᾱ, λ2 = λ1 + β − β̄ − ξ, λ3 = λ1 + β − ξ, λ4 = λ1 − β̄.
For a particle (D = 1) it collapses to γ√((1+D̄)/2), which is why the Bures
distance from a particle depends on nothing but γ and D̄.

The particle set used by :func:`min_particle_distance` holds particles on the
dominant path only (path 0 after canonical relabeling); the other arm is
strictly farther whenever D̄ > 0.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .exceptions import RangeError
from .quanton import (
    DEFAULT_TOL_NORM,
    PolarizationBasis,
    QuantonParams,
    StateVector4,
    build_state,
    standard_basis,
)
from .utils import wrap_phase

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)

# overlaps below this carry no usable phase
_GAMMA_EPS = 1e-12


@dataclass(frozen=True)
class OverlapParams:
    """(γ, ξ, μ) relating two polarization bases; phases wrapped onto [0, 2π)."""
    gamma: float
    xi: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        gamma = float(self.gamma)
        if not 0.0 <= gamma <= 1.0:
            raise RangeError(f"gamma must lie in [0, 1], got {gamma}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "xi", wrap_phase(self.xi))
        object.__setattr__(self, "mu", wrap_phase(self.mu))


@dataclass(frozen=True)
class DerivedPhases:
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float


@dataclass(frozen=True, eq=False)
class ParticleWitness:
    """
    The particle |path⟩⊗|polarization⟩ closest to a state, and its distance.

    ``path`` refers to the labeling of the state that was searched; it is 1
    only when that state carried more population on path 1.
    """
    polarization: np.ndarray
    distance: float
    path: int = 0

    def state(self) -> StateVector4:
        amp = np.zeros(4, dtype=np.complex128)
        amp[2 * self.path:2 * self.path + 2] = self.polarization
        return StateVector4(amp)


def overlap_bruteforce(s1: StateVector4, s2: StateVector4, tol_norm: float = DEFAULT_TOL_NORM) -> float:
    """|⟨s1|s2⟩| from the four amplitudes of each state."""
    s1.check_normalized(tol_norm)
    s2.check_normalized(tol_norm)
    return min(1.0, abs(s1.inner(s2)))


def fidelity(s1: StateVector4, s2: StateVector4, tol_norm: float = DEFAULT_TOL_NORM) -> float:
    """|⟨s1|s2⟩|²."""
    return overlap_bruteforce(s1, s2, tol_norm) ** 2


def bures_distance(s1: StateVector4, s2: StateVector4, tol_norm: float = DEFAULT_TOL_NORM) -> float:
    """
    √2·√(1 − |⟨s1|s2⟩|), a value in [0, √2].

    Raises:
        NormalizationError: If either state is not normalized within ``tol_norm``.
    """
    return SQRT2 * math.sqrt(max(0.0, 1.0 - overlap_bruteforce(s1, s2, tol_norm)))


def overlap_basis(ov: OverlapParams) -> PolarizationBasis:
    """The basis {φ̄0, φ̄0⊥} whose overlaps with the standard basis are set by ``ov``."""
    g = ov.gamma
    s = math.sqrt(max(0.0, 1.0 - g * g))
    phi0 = np.array([g, s * cmath.exp(1j * ov.mu)], dtype=np.complex128)
    phi0perp = cmath.exp(1j * ov.xi) * np.array([-s * cmath.exp(-1j * ov.mu), g], dtype=np.complex128)
    return PolarizationBasis(phi0, phi0perp)


def realize_pair(p1: QuantonParams, p2: QuantonParams, ov: OverlapParams) -> Tuple[StateVector4, StateVector4]:
    """
    Builds explicit states |ψ⟩ (from p1, standard basis) and |ψ̄⟩ (from p2, basis
    pinned by ``ov``) whose bases overlap as ⟨φ̄0|φ0⟩ = γ, ⟨φ̄0⊥|φ0⊥⟩ = γe^{−iξ}.

    Returns:
        Tuple[StateVector4, StateVector4]: (|ψ⟩, |ψ̄⟩).
    """
    return build_state(p1, standard_basis()), build_state(p2, overlap_basis(ov))


def relative_overlap_params(b1: PolarizationBasis, b2: PolarizationBasis) -> OverlapParams:
    """
    Recovers (γ, ξ, μ) relating basis ``b1`` (unbarred) and ``b2`` (barred).

    The overlap matrix M_ij = ⟨b2_i|b1_j⟩ is unitary; after removing its global
    phase it has the form realized by :func:`realize_pair`, so
    γ = |M00|, ξ = −arg(M11/M00), μ = −arg(M01/M00). For γ = 1, μ is undefined
    and returned as 0. For γ = 0, ξ is undefined and returned as 0, and μ is
    taken from the remaining relative phase of the off-diagonal entries so that
    the overlap formula stays exact.
    """
    m00 = complex(np.vdot(b2.phi0, b1.phi0))
    m01 = complex(np.vdot(b2.phi0, b1.phi0perp))
    m10 = complex(np.vdot(b2.phi0perp, b1.phi0))
    m11 = complex(np.vdot(b2.phi0perp, b1.phi0perp))

    gamma = min(1.0, abs(m00))

    if gamma < _GAMMA_EPS:
        # M ∝ [[0, e^{−iμ}], [−e^{iμ}, 0]] with ξ = 0
        return OverlapParams(0.0, 0.0, -0.5 * cmath.phase(-m01 / m10))
    xi = -cmath.phase(m11 / m00)
    mu = -cmath.phase(m01 / m00) if abs(m01) > _GAMMA_EPS else 0.0
    return OverlapParams(gamma, xi, mu)


def derived_phases(p1: QuantonParams, p2: QuantonParams, ov: OverlapParams) -> DerivedPhases:
    """λ1 = α − ᾱ, λ2 = λ1 + β − β̄ − ξ, λ3 = λ1 + β − ξ, λ4 = λ1 − β̄ (mod 2π)."""
    l1 = p1.alpha - p2.alpha
    return DerivedPhases(
        wrap_phase(l1),
        wrap_phase(l1 + p1.beta - p2.beta - ov.xi),
        wrap_phase(l1 + p1.beta - ov.xi),
        wrap_phase(l1 - p2.beta),
    )


def overlap_closed_form(p1: QuantonParams, p2: QuantonParams, ov: OverlapParams) -> float:
    """
    |⟨ψ̄|ψ⟩| evaluated from the parameters alone (see the module docstring).

    Equals ``overlap_bruteforce(*realize_pair(p1, p2, ov))``. When either state
    is a particle the particle expression γ√((1+D̄)/2) is returned directly.
    """
    if p1.D == 1.0:
        return ov.gamma * math.sqrt((1.0 + p2.D) / 2.0)
    if p2.D == 1.0:
        return ov.gamma * math.sqrt((1.0 + p1.D) / 2.0)

    lam = derived_phases(p1, p2, ov)
    g = ov.gamma
    s = math.sqrt(max(0.0, 1.0 - g * g))
    a = 1.0 + p1.D
    b = 1.0 + p2.D

    total = (
        g * a * b
        + g * p1.V * p2.V * cmath.exp(1j * lam.lambda1)
        + g * p1.C * p2.C * cmath.exp(1j * lam.lambda2)
        + s * p1.C * p2.V * cmath.exp(1j * (lam.lambda3 + ov.xi - ov.mu))
        - s * p1.V * p2.C * cmath.exp(1j * (lam.lambda4 + ov.mu - ov.xi))
    )
    return min(1.0, abs(total) / (2.0 * math.sqrt(a * b)))


def particle_distance(gamma: float, dbar: float) -> float:
    """
    Bures distance √2·√(1 − γ√((1+D̄)/2)) from a particle to any state of
    distinguishability D̄ whose path-0 polarization overlaps the particle's by γ.

    Raises:
        RangeError: If gamma or dbar lies outside [0, 1].
    """
    if not 0.0 <= gamma <= 1.0:
        raise RangeError(f"gamma must lie in [0, 1], got {gamma}")
    if not 0.0 <= dbar <= 1.0:
        raise RangeError(f"dbar must lie in [0, 1], got {dbar}")
    return SQRT2 * math.sqrt(max(0.0, 1.0 - gamma * math.sqrt((1.0 + dbar) / 2.0)))


def _dominant_branch(state: StateVector4) -> Tuple[int, np.ndarray]:
    u0, u1 = state.path0, state.path1
    p0 = float(np.vdot(u0, u0).real)
    p1 = float(np.vdot(u1, u1).real)
    return (1, np.array(u1)) if p1 - p0 > DEFAULT_TOL_NORM else (0, np.array(u0))


def min_particle_distance(state: StateVector4, tol_norm: float = DEFAULT_TOL_NORM) -> ParticleWitness:
    """
    The nearest particle state and its distance √2·√(1 − √((1+D̄)/2)).

    The minimizer sits on the dominant path with the polarization that path
    carries (γ = 1). The distance is measured on the witness itself, so
    ``bures_distance(witness.state(), state)`` equals it exactly.

    Raises:
        NormalizationError: If the state is not normalized within ``tol_norm``.
    """
    state.check_normalized(tol_norm)
    path, branch = _dominant_branch(state)
    chi = PolarizationBasis.from_vector(branch).phi0
    witness = ParticleWitness(chi, 0.0, path)
    distance = bures_distance(witness.state(), state, tol_norm)
    return ParticleWitness(chi, distance, path)


def grid_min_particle_distance(
    state: StateVector4,
    n_polar: int = 200,
    n_azimuthal: int = 400,
    tol_norm: float = DEFAULT_TOL_NORM,
) -> ParticleWitness:
    """
    Brute-force oracle for :func:`min_particle_distance`.

    Scans particle polarizations χ = (cos θ/2, e^{iφ} sin θ/2) on an
    ``n_polar`` × ``n_azimuthal`` Bloch-sphere grid (θ ∈ [0, π] inclusive,
    φ ∈ [0, 2π) exclusive) on the dominant path and keeps the best one.
    """
    state.check_normalized(tol_norm)
    if n_polar < 2 or n_azimuthal < 1:
        raise RangeError(f"grid too small: {n_polar} × {n_azimuthal}")
    path, branch = _dominant_branch(state)

    theta = np.linspace(0.0, math.pi, n_polar)
    phi = np.linspace(0.0, 2.0 * math.pi, n_azimuthal, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    c0 = np.cos(tt / 2.0)
    c1 = np.exp(1j * pp) * np.sin(tt / 2.0)
    # ⟨χ|branch⟩ for every grid point
    overlaps = np.abs(c0 * branch[0] + np.conj(c1) * branch[1])
    i, j = np.unravel_index(int(np.argmax(overlaps)), overlaps.shape)
    chi = np.array([c0[i, j], c1[i, j]], dtype=np.complex128)
    best = min(1.0, float(overlaps[i, j]))
    logger.debug("grid search %d×%d: best overlap %.12g at θ=%.6g φ=%.6g", n_polar, n_azimuthal, best, theta[i], phi[j])
    return ParticleWitness(chi, SQRT2 * math.sqrt(max(0.0, 1.0 - best)), path)


def distance_spread(reference: StateVector4, states: Iterable[StateVector4]) -> Tuple[float, float]:
    """(min, max) Bures distance from ``reference`` to each of ``states``."""
    distances = [bures_distance(reference, s) for s in states]
    if not distances:
        raise RangeError("distance_spread needs at least one state")
    return min(distances), max(distances)
