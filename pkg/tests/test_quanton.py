import cmath
import math

import numpy as np
import pytest

from core.exceptions import BasisError, ConstraintError, NormalizationError, RangeError
from core.quanton import (
    PolarizationBasis,
    QuantonParams,
    StateVector4,
    build_state,
    canonical_states,
    concurrence,
    conditional_basis,
    extract_params,
    path_measures,
    predictability,
    reduced_path_operator,
    standard_basis,
    swap_paths,
    triality_residual,
    triality_residuals,
    visibility,
)
from core.sampler import SampleSeed, haar_random_amplitudes, haar_random_basis, haar_random_state
from core.utils import phase_distance

INV_SQRT2 = 1 / math.sqrt(2)


@pytest.fixture
def bell():
    return StateVector4([INV_SQRT2, 0, 0, INV_SQRT2])


@pytest.fixture
def wave():
    return StateVector4([INV_SQRT2, 0, INV_SQRT2, 0])


class TestQuantonParams:

    def test_phases_are_wrapped(self):
        p = QuantonParams(0.0, 1.0, 0.0, alpha=-math.pi / 2, beta=5 * math.pi)
        assert p.alpha == pytest.approx(3 * math.pi / 2)
        assert p.beta == pytest.approx(math.pi)

    def test_triality_violation_raises(self):
        with pytest.raises(ConstraintError, match="deviates from 1"):
            QuantonParams(0.5, 0.5, 0.5)

    @pytest.mark.parametrize("values", [(1.1, 0.0, 0.0), (-0.0001, 1.0, 0.0), (0.0, float("nan"), 1.0)])
    def test_out_of_range_raises(self, values):
        with pytest.raises(ConstraintError):
            QuantonParams(*values)

    def test_from_angle_stays_on_the_sphere(self):
        p = QuantonParams.from_angle(0.5, 0.3, 1.0, 2.0)
        assert p.D ** 2 + p.V ** 2 + p.C ** 2 == pytest.approx(1.0, abs=1e-15)
        assert p.V == pytest.approx(math.sqrt(0.75) * math.cos(0.3))


class TestBasis:

    def test_non_orthogonal_basis_raises(self):
        with pytest.raises(BasisError, match="not orthogonal"):
            PolarizationBasis([1, 0], [INV_SQRT2, INV_SQRT2])

    def test_non_unit_vector_raises(self):
        with pytest.raises(BasisError, match="unit norm"):
            PolarizationBasis([2, 0], [0, 1])

    def test_from_vector_fixes_gauge(self):
        basis = PolarizationBasis.from_vector([0.3j, -0.4j])
        # largest component made real positive, the rest follows
        assert basis.phi0[1] == pytest.approx(0.8)
        assert basis.phi0[0] == pytest.approx(-0.6)
        assert abs(np.vdot(basis.phi0, basis.phi0perp)) < 1e-15

    def test_from_vector_zero_raises(self):
        with pytest.raises(BasisError):
            PolarizationBasis.from_vector([0, 0])


class TestBuildAndExtract:

    def test_canonical_states(self):
        states = canonical_states()
        np.testing.assert_allclose(states["particle"].amp, [1, 0, 0, 0], atol=1e-15)
        np.testing.assert_allclose(states["wave"].amp, [INV_SQRT2, 0, INV_SQRT2, 0], atol=1e-15)
        np.testing.assert_allclose(states["entanglon"].amp, [INV_SQRT2, 0, 0, INV_SQRT2], atol=1e-15)

    def test_particle_ignores_phases(self):
        state = build_state(QuantonParams(1.0, 0.0, 0.0, alpha=1.0, beta=2.0), standard_basis())
        np.testing.assert_array_equal(state.amp, [1, 0, 0, 0])

    def test_build_partially_distinguishable_state(self):
        state = build_state(QuantonParams(0.6, 0.8, 0.0), standard_basis())
        np.testing.assert_allclose(state.amp, [0.894427, 0, 0.447214, 0], atol=1e-6)

    def test_extract_unbalanced_entangled_state(self):
        state = StateVector4([math.sqrt(0.9), 0, 0, math.sqrt(0.1)])
        p = extract_params(state).params
        assert (p.D, p.V, p.C) == pytest.approx((0.8, 0.0, 0.6), abs=1e-12)
        assert concurrence(state) == pytest.approx(0.6, abs=1e-12)

    def test_bell_state(self, bell):
        p = extract_params(bell).params
        assert (p.D, p.V, p.C) == pytest.approx((0.0, 0.0, 1.0), abs=1e-12)

    def test_wave_state(self, wave):
        p = extract_params(wave).params
        assert (p.D, p.V, p.C) == pytest.approx((0.0, 1.0, 0.0), abs=1e-12)

    def test_particle_reports_zero_phases(self):
        result = extract_params(StateVector4([0, 1j, 0, 0]))
        assert result.params.as_dict() == {"D": 1.0, "V": 0.0, "C": 0.0, "alpha": 0.0, "beta": 0.0}
        np.testing.assert_allclose(result.basis.phi0, [0, 1])

    def test_extract_recovers_parameters(self):
        basis = haar_random_basis(SampleSeed(11))
        params = QuantonParams.from_angle(0.3, 0.7, alpha=1.2, beta=4.0)
        p = extract_params(build_state(params, basis)).params
        assert (p.D, p.V, p.C) == pytest.approx((params.D, params.V, params.C), abs=1e-12)
        assert phase_distance(p.alpha, params.alpha) < 1e-10
        assert phase_distance(p.beta, params.beta) < 1e-10

    def test_no_phi0_component_puts_phase_on_alpha(self):
        params = QuantonParams(0.0, 0.0, 1.0, alpha=1.0, beta=0.5)
        p = extract_params(build_state(params, standard_basis())).params
        assert p.alpha == pytest.approx(1.5, abs=1e-12)
        assert p.beta == 0.0

    def test_more_populated_path_is_relabeled(self):
        inner = build_state(QuantonParams(0.6, 0.8, 0.0, alpha=0.3), standard_basis())
        state = swap_paths(inner)
        result = extract_params(state)
        assert result.paths_swapped
        assert result.params.D == pytest.approx(0.6, abs=1e-12)
        assert abs(result.rebuild().inner(state)) == pytest.approx(1.0, abs=1e-12)

    def test_balanced_paths_keep_their_labels(self, wave):
        assert not extract_params(wave).paths_swapped

    def test_unnormalized_state_raises(self):
        with pytest.raises(NormalizationError, match="tolerance"):
            extract_params(StateVector4([1, 1, 0, 0]))

    def test_round_trip_on_haar_samples(self):
        worst = 1.0
        for k in range(10_000):
            state = haar_random_state(SampleSeed(2024, k))
            worst = min(worst, abs(extract_params(state).rebuild().inner(state)))
        assert worst >= 1 - 1e-10


class TestMeasures:

    def test_scalar_measures_match_vectorized(self):
        state = haar_random_state(SampleSeed(5))
        P, V, C = path_measures(state.amp)
        assert predictability(state) == pytest.approx(float(P))
        assert visibility(state) == pytest.approx(float(V))
        assert concurrence(state) == pytest.approx(float(C))

    def test_concurrence_invariant_under_local_unitaries(self):
        state = haar_random_state(SampleSeed(9))
        u = haar_random_basis(SampleSeed(10)).matrix()
        local = StateVector4(np.kron(np.eye(2), u) @ state.amp)
        assert concurrence(local) == pytest.approx(concurrence(state), abs=1e-12)

    def test_reduced_path_operator(self, wave):
        rho = reduced_path_operator(wave)
        np.testing.assert_allclose(rho, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)

    def test_visibility_is_twice_the_path_coherence(self):
        for k in range(50):
            state = haar_random_state(SampleSeed(60, k))
            assert visibility(state) == pytest.approx(2 * abs(reduced_path_operator(state)[0, 1]), abs=1e-12)

    def test_triality_on_haar_batch(self):
        amps = haar_random_amplitudes(seed=1, count=100_000)
        assert float(np.max(triality_residuals(amps))) < 1e-10

    def test_complementarity_bound_on_haar_batch(self):
        amps = haar_random_amplitudes(seed=2, count=100_000)
        P, V, C = path_measures(amps)
        assert float(np.max(P ** 2 + V ** 2)) <= 1 + 1e-12
        # the gap to 1 is carried entirely by the entanglement
        np.testing.assert_allclose(1 - (P ** 2 + V ** 2), C ** 2, atol=1e-10)

    def test_complementarity_saturates_for_product_states(self):
        for k in range(200):
            seed = SampleSeed(3, k)
            basis = haar_random_basis(seed)
            params = QuantonParams.from_angle(k / 199, 0.0, alpha=0.1 * k)
            state = build_state(params, basis)
            assert concurrence(state) < 1e-10
            assert predictability(state) ** 2 + visibility(state) ** 2 == pytest.approx(1.0, abs=1e-10)

    def test_triality_residual_of_state(self, bell):
        assert triality_residual(bell) < 1e-12

    def test_triality_residual_of_particle(self):
        assert triality_residual(StateVector4([0, 0, 0, 1j])) < 1e-12

    def test_triality_residual_through_extraction_on_haar_samples(self):
        worst = max(triality_residual(haar_random_state(SampleSeed(77, k))) for k in range(2000))
        assert worst < 1e-10


def test_conditional_basis_rejects_bad_path(bell):
    with pytest.raises(RangeError, match="path must be 0 or 1"):
        conditional_basis(bell, 2)


def test_conditional_basis_follows_requested_path():
    state = StateVector4([0.6, 0, 0, 0.8 * cmath.exp(0.4j)])
    np.testing.assert_allclose(conditional_basis(state, 1).phi0, [0, 1], atol=1e-15)
