# core/sampler.py

"""
Seeded random inputs: Haar-random states and unitaries, states of fixed
distinguishability, and random which-way detector setups.

Every draw is keyed by a ``SampleSeed(seed, stream)``. The generator is numpy's
counter-based ``Philox`` bit generator seeded through
``SeedSequence(seed, spawn_key=(stream,))``, so sample ``k`` of a sweep only
depends on ``(seed, k)`` and never on the order or thread it was drawn in.
There is no module-level generator.

Draw order inside each function is fixed and part of the reproducibility
contract; changing it changes every recorded output.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import qr

from .englert import DensityMatrix2, Unitary2
from .exceptions import RangeError
from .geometry import OverlapParams
from .quanton import PolarizationBasis, QuantonParams, StateVector4, build_state
from .utils import TWO_PI

logger = logging.getLogger(__name__)

_U64 = 2 ** 64


@dataclass(frozen=True)
class SampleSeed:
    """A (seed, stream) pair; both are unsigned 64-bit integers."""
    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise RangeError(f"{name} must be an integer, got {type(value).__name__}")
            if not 0 <= int(value) < _U64:
                raise RangeError(f"{name} must be an unsigned 64-bit integer, got {value}")
            object.__setattr__(self, name, int(value))


def make_generator(seed: SampleSeed) -> np.random.Generator:
    """Philox generator for one (seed, stream) pair."""
    sequence = np.random.SeedSequence(seed.seed, spawn_key=(seed.stream,))
    return np.random.Generator(np.random.Philox(sequence))


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def _haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = _complex_gaussian(rng, (dim, dim))
    q, r = qr(z)
    d = np.diag(r)
    # QR is unique only up to phases on the diagonal of R
    return q * (d / np.abs(d))


def haar_random_state(seed: SampleSeed) -> StateVector4:
    """Four standard complex Gaussian amplitudes, normalized."""
    amp = _complex_gaussian(make_generator(seed), 4)
    return StateVector4(amp / np.linalg.norm(amp))


def haar_random_amplitudes(seed: int, count: int, stream: int = 0) -> np.ndarray:
    """
    ``count`` Haar-random states as a (count, 4) array from a single stream.

    Meant for large batches fed to the vectorized helpers
    (:func:`core.quanton.path_measures`); row ``k`` is not the same state as
    ``haar_random_state(SampleSeed(seed, k))``.
    """
    if count < 1:
        raise RangeError(f"count must be at least 1, got {count}")
    amp = _complex_gaussian(make_generator(SampleSeed(seed, stream)), (count, 4))
    return amp / np.linalg.norm(amp, axis=1, keepdims=True)


def haar_random_unitary(seed: SampleSeed, dim: int = 2) -> np.ndarray:
    """
    A ``dim`` × ``dim`` unitary drawn from the Haar measure (Ginibre matrix,
    QR decomposition, diagonal phase fix).
    """
    if dim < 1:
        raise RangeError(f"dim must be positive, got {dim}")
    return _haar_unitary(make_generator(seed), dim)


def haar_random_basis(seed: SampleSeed) -> PolarizationBasis:
    """Canonical polarization basis on the first column of a Haar unitary."""
    return PolarizationBasis.from_vector(haar_random_unitary(seed)[:, 0])


def random_state_fixed_D(dbar: float, seed: SampleSeed, basis: Optional[PolarizationBasis] = None) -> StateVector4:
    """
    A state with distinguishability exactly ``dbar``.

    Draws, in order: a Haar polarization basis (skipped when ``basis`` is
    given), θ uniform on [0, π/2), and ᾱ, β̄ uniform on [0, 2π). Then
    V̄ = √(1−D̄²) cos θ, C̄ = √(1−D̄²) sin θ. The angle is uniform, not V̄ itself.

    Raises:
        RangeError: If dbar lies outside [0, 1].
    """
    dbar = float(dbar)
    if not 0.0 <= dbar <= 1.0:
        raise RangeError(f"dbar must lie in [0, 1], got {dbar}")
    rng = make_generator(seed)
    if basis is None:
        basis = PolarizationBasis.from_vector(_haar_unitary(rng, 2)[:, 0])
    theta = rng.uniform(0.0, math.pi / 2.0)
    alpha, beta = rng.uniform(0.0, TWO_PI, size=2)
    return build_state(QuantonParams.from_angle(dbar, theta, alpha, beta), basis)


def random_wwd_instance(seed: SampleSeed, pure: bool = True) -> Tuple[Unitary2, Unitary2, DensityMatrix2]:
    """
    Two Haar-random couplings and a random initial detector state.

    With ``pure`` the detector state is |χ⟩⟨χ| for a Haar-random ket. Otherwise
    it is λ|e0⟩⟨e0| + (1−λ)|e1⟩⟨e1| over a Haar-random orthonormal pair with
    λ uniform on (0, 1), which is full rank.

    Returns:
        Tuple[Unitary2, Unitary2, DensityMatrix2]: (u0, u1, rho_i).
    """
    rng = make_generator(seed)
    u0 = Unitary2(_haar_unitary(rng, 2))
    u1 = Unitary2(_haar_unitary(rng, 2))
    if pure:
        rho = DensityMatrix2.from_ket(_complex_gaussian(rng, 2))
    else:
        frame = _haar_unitary(rng, 2)
        lam = float(rng.uniform(0.0, 1.0))
        rho = DensityMatrix2.mixture([lam, 1.0 - lam], [frame[:, 0], frame[:, 1]])
    return u0, u1, rho


def random_quanton_params(seed: SampleSeed) -> QuantonParams:
    """(D, V, C) uniform on the positive octant of the unit sphere, phases uniform."""
    rng = make_generator(seed)
    triple = np.abs(rng.standard_normal(3))
    triple = np.minimum(1.0, triple / np.linalg.norm(triple))
    alpha, beta = rng.uniform(0.0, TWO_PI, size=2)
    return QuantonParams(float(triple[0]), float(triple[1]), float(triple[2]), alpha, beta)


def random_overlap_params(seed: SampleSeed) -> OverlapParams:
    """γ uniform on [0, 1), ξ and μ uniform on [0, 2π)."""
    rng = make_generator(seed)
    gamma = float(rng.uniform(0.0, 1.0))
    xi, mu = rng.uniform(0.0, TWO_PI, size=2)
    return OverlapParams(gamma, xi, mu)
