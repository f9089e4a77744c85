import math

import numpy as np
import pytest

from core.exceptions import NormalizationError, RangeError
from core.geometry import (
    OverlapParams,
    bures_distance,
    derived_phases,
    distance_spread,
    fidelity,
    grid_min_particle_distance,
    min_particle_distance,
    overlap_basis,
    overlap_bruteforce,
    overlap_closed_form,
    particle_distance,
    realize_pair,
    relative_overlap_params,
)
from core.quanton import (
    PolarizationBasis,
    QuantonParams,
    StateVector4,
    build_state,
    canonical_states,
    standard_basis,
    swap_paths,
)
from core.sampler import (
    SampleSeed,
    haar_random_basis,
    haar_random_state,
    random_overlap_params,
    random_quanton_params,
    random_state_fixed_D,
)
from core.utils import phase_distance

SQRT2 = math.sqrt(2)
PARTICLE_TO_BALANCED = math.sqrt(2 - math.sqrt(2))  # 0.765367


@pytest.fixture
def exemplars():
    return canonical_states()


class TestBuresDistance:

    def test_triangle_of_exemplars(self, exemplars):
        p, w, e = exemplars["particle"], exemplars["wave"], exemplars["entanglon"]
        assert bures_distance(p, w) == pytest.approx(PARTICLE_TO_BALANCED, abs=1e-12)
        assert bures_distance(p, e) == pytest.approx(bures_distance(p, w), abs=1e-12)
        assert bures_distance(e, w) == pytest.approx(1.0, abs=1e-9)
        assert bures_distance(w, e) == bures_distance(e, w)

    def test_range_and_identity(self, exemplars):
        p = exemplars["particle"]
        assert bures_distance(p, p) == 0.0
        assert bures_distance(p, StateVector4([0, 0, 1j, 0])) == pytest.approx(SQRT2)

    def test_fidelity_is_squared_overlap(self, exemplars):
        assert fidelity(exemplars["particle"], exemplars["wave"]) == pytest.approx(0.5)

    def test_global_phase_does_not_matter(self):
        s = haar_random_state(SampleSeed(1))
        assert bures_distance(s, StateVector4(np.exp(0.7j) * s.amp)) == pytest.approx(0.0, abs=1e-7)

    def test_unnormalized_input_raises(self, exemplars):
        with pytest.raises(NormalizationError):
            overlap_bruteforce(exemplars["particle"], StateVector4([1, 1, 0, 0]))


class TestClosedForm:

    def test_matches_bruteforce_on_random_tuples(self):
        worst = 0.0
        for k in range(10_000):
            p1 = random_quanton_params(SampleSeed(100, k))
            p2 = random_quanton_params(SampleSeed(101, k))
            ov = random_overlap_params(SampleSeed(102, k))
            brute = overlap_bruteforce(*realize_pair(p1, p2, ov))
            worst = max(worst, abs(overlap_closed_form(p1, p2, ov) - brute))
        assert worst < 1e-9

    @pytest.mark.parametrize("gamma", [0.0, 1.0])
    def test_extreme_gammas(self, gamma):
        for k in range(200):
            p1 = random_quanton_params(SampleSeed(110, k))
            p2 = random_quanton_params(SampleSeed(111, k))
            ov = OverlapParams(gamma, xi=0.1 * k, mu=0.05 * k)
            brute = overlap_bruteforce(*realize_pair(p1, p2, ov))
            assert overlap_closed_form(p1, p2, ov) == pytest.approx(brute, abs=1e-9)

    def test_self_overlap_is_one(self):
        for k in range(200):
            p = random_quanton_params(SampleSeed(120, k))
            assert overlap_closed_form(p, p, OverlapParams(1.0)) == pytest.approx(1.0, abs=1e-12)

    def test_particle_branch(self):
        particle = QuantonParams(1.0, 0.0, 0.0)
        for k in range(100):
            p2 = random_quanton_params(SampleSeed(130, k))
            ov = random_overlap_params(SampleSeed(131, k))
            expected = ov.gamma * math.sqrt((1 + p2.D) / 2)
            assert abs(overlap_closed_form(particle, p2, ov) - expected) <= 1e-12
            assert abs(overlap_closed_form(p2, particle, ov) - expected) <= 1e-12
            assert overlap_bruteforce(*realize_pair(particle, p2, ov)) == pytest.approx(expected, abs=1e-12)

    def test_particle_shortcut_skips_phases(self, mocker):
        import core.geometry

        spy = mocker.spy(core.geometry, "derived_phases")
        p2 = QuantonParams.from_angle(0.3, 0.5)
        overlap_closed_form(QuantonParams(1.0, 0.0, 0.0), p2, OverlapParams(0.8))
        assert spy.call_count == 0
        overlap_closed_form(p2, p2, OverlapParams(0.8))
        assert spy.call_count == 1

    def test_derived_phases(self):
        p1 = QuantonParams(0.0, 1.0, 0.0, alpha=1.0, beta=0.5)
        p2 = QuantonParams(0.0, 0.0, 1.0, alpha=0.25, beta=2.0)
        lam = derived_phases(p1, p2, OverlapParams(0.5, xi=0.125))
        assert lam.lambda1 == pytest.approx(0.75)
        assert phase_distance(lam.lambda2, 0.75 + 0.5 - 2.0 - 0.125) < 1e-12
        assert lam.lambda3 == pytest.approx(0.75 + 0.5 - 0.125)
        assert phase_distance(lam.lambda4, 0.75 - 2.0) < 1e-12


class TestRelativeOverlap:

    def test_recovers_realized_parameters(self):
        for k in range(100):
            ov = random_overlap_params(SampleSeed(140, k))
            got = relative_overlap_params(standard_basis(), overlap_basis(ov))
            assert got.gamma == pytest.approx(ov.gamma, abs=1e-12)
            assert phase_distance(got.xi, ov.xi) < 1e-9
            assert phase_distance(got.mu, ov.mu) < 1e-9

    def test_realized_pair_uses_overlap_basis(self):
        ov = OverlapParams(0.6, xi=1.0, mu=2.0)
        particle = QuantonParams(1.0, 0.0, 0.0)
        _, barred = realize_pair(particle, particle, ov)
        np.testing.assert_allclose(barred.amp[:2], overlap_basis(ov).phi0, atol=1e-15)

    def test_closed_form_on_arbitrary_bases(self):
        for k in range(300):
            b1 = haar_random_basis(SampleSeed(150, k))
            b2 = haar_random_basis(SampleSeed(151, k))
            p1 = random_quanton_params(SampleSeed(152, k))
            p2 = random_quanton_params(SampleSeed(153, k))
            ov = relative_overlap_params(b1, b2)
            brute = overlap_bruteforce(build_state(p1, b1), build_state(p2, b2))
            assert overlap_closed_form(p1, p2, ov) == pytest.approx(brute, abs=1e-9)

    @pytest.mark.parametrize("a, b", [(0.0, 0.0), (0.3, 2.0), (math.pi, 0.5), (5.0, 4.0)])
    def test_orthogonal_bases(self, a, b):
        b1 = standard_basis()
        b2 = PolarizationBasis(np.exp(1j * a) * np.array([0, 1]), np.exp(1j * b) * np.array([1, 0]))
        ov = relative_overlap_params(b1, b2)
        assert ov.gamma == 0.0
        assert ov.xi == 0.0
        for k in range(50):
            p1 = random_quanton_params(SampleSeed(160, k))
            p2 = random_quanton_params(SampleSeed(161, k))
            brute = overlap_bruteforce(build_state(p1, b1), build_state(p2, b2))
            assert overlap_closed_form(p1, p2, ov) == pytest.approx(brute, abs=1e-12)


class TestParticleDistance:

    def test_endpoints(self):
        assert particle_distance(1.0, 0.0) == pytest.approx(0.765367, abs=1e-6)
        assert particle_distance(1.0, 1.0) == 0.0
        for dbar in np.linspace(0, 1, 11):
            assert particle_distance(0.0, dbar) == pytest.approx(1.414214, abs=1e-6)

    def test_strictly_decreasing_in_dbar(self):
        grid = np.linspace(0, 1, 101)
        for gamma in (0.25, 0.5, 0.75, 1.0):
            values = [particle_distance(gamma, d) for d in grid]
            assert all(a > b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("gamma, dbar", [(-0.1, 0.5), (1.1, 0.5), (0.5, -0.01), (0.5, 1.5)])
    def test_out_of_range(self, gamma, dbar):
        with pytest.raises(RangeError):
            particle_distance(gamma, dbar)

    def test_equidistance_on_fixed_dbar_states(self):
        particle = StateVector4([1, 0, 0, 0])
        for dbar in (0.0, 0.25, 0.5, 0.75, 1.0):
            for k in range(300):
                state = random_state_fixed_D(dbar, SampleSeed(170, k))
                gamma = min(1.0, abs(state.amp[0]) / math.sqrt((1 + dbar) / 2))
                assert bures_distance(particle, state) == pytest.approx(particle_distance(gamma, dbar), abs=1e-10)


class TestMinParticleDistance:

    def test_bell_state(self):
        witness = min_particle_distance(StateVector4([1 / SQRT2, 0, 0, 1 / SQRT2]))
        assert witness.distance == pytest.approx(0.765367, abs=1e-6)
        assert witness.path == 0
        np.testing.assert_allclose(witness.polarization, [1, 0], atol=1e-15)

    def test_particle_state(self):
        witness = min_particle_distance(StateVector4([0, 0, 0, 1j]))
        assert witness.distance == 0.0
        assert witness.path == 1

    def test_witness_realizes_the_distance(self):
        for k in range(100):
            state = haar_random_state(SampleSeed(180, k))
            witness = min_particle_distance(state)
            assert bures_distance(witness.state(), state) == witness.distance

    def test_dominant_path_is_used(self):
        inner = build_state(QuantonParams(0.6, 0.8, 0.0), standard_basis())
        witness = min_particle_distance(swap_paths(inner))
        assert witness.path == 1
        assert witness.distance == pytest.approx(particle_distance(1.0, 0.6), abs=1e-12)

    def test_matches_grid_search(self):
        for k in range(100):
            state = haar_random_state(SampleSeed(190, k))
            analytic = min_particle_distance(state)
            grid = grid_min_particle_distance(state)
            assert grid.path == analytic.path
            assert grid.distance >= analytic.distance - 1e-12
            assert grid.distance - analytic.distance < 1e-3

    def test_grid_rejects_degenerate_grid(self):
        with pytest.raises(RangeError, match="grid too small"):
            grid_min_particle_distance(haar_random_state(SampleSeed(0)), n_polar=1)


class TestDistanceSpread:

    def test_particle_is_equidistant_and_others_are_not(self, exemplars):
        states = [random_state_fixed_D(0.5, SampleSeed(200, k), basis=standard_basis()) for k in range(200)]
        low, high = distance_spread(exemplars["particle"], states)
        assert high - low < 1e-10
        assert low == pytest.approx(particle_distance(1.0, 0.5), abs=1e-12)
        for name in ("wave", "entanglon"):
            low, high = distance_spread(exemplars[name], states)
            assert high - low > 1e-3

    def test_empty_set_raises(self, exemplars):
        with pytest.raises(RangeError):
            distance_spread(exemplars["particle"], [])


class TestWorkedValues:

    def test_particle_against_balanced_wave(self, exemplars):
        assert overlap_bruteforce(exemplars["particle"], exemplars["wave"]) == pytest.approx(0.707107, abs=1e-6)

    def test_closed_form_particle_against_partial_state(self):
        p2 = QuantonParams.from_angle(0.28, 0.4, alpha=1.1, beta=0.3)
        value = overlap_closed_form(QuantonParams(1.0, 0.0, 0.0), p2, OverlapParams(0.5))
        assert value == pytest.approx(0.4, abs=1e-12)

    @pytest.mark.parametrize("theta", [0.0, 0.7, math.pi / 2])
    def test_min_distance_at_fixed_dbar(self, theta):
        basis = haar_random_basis(SampleSeed(210))
        state = build_state(QuantonParams.from_angle(0.28, theta, alpha=0.9), basis)
        assert min_particle_distance(state).distance == pytest.approx(0.632456, abs=1e-6)

    def test_overlap_basis_round_trip(self):
        got = relative_overlap_params(standard_basis(), overlap_basis(OverlapParams(0.5, math.pi / 3, 0.2)))
        assert got.gamma == pytest.approx(0.5, abs=1e-12)
        assert phase_distance(got.xi, math.pi / 3) < 1e-12
        assert phase_distance(got.mu, 0.2) < 1e-12

    def test_identical_bases(self):
        for k in range(20):
            basis = haar_random_basis(SampleSeed(220, k))
            got = relative_overlap_params(basis, basis)
            assert got.gamma == pytest.approx(1.0, abs=1e-12)
            assert phase_distance(got.xi, 0.0) < 1e-12
            assert got.mu == 0.0

    def test_swapped_basis_vectors(self):
        basis = haar_random_basis(SampleSeed(230))
        got = relative_overlap_params(basis, PolarizationBasis(basis.phi0perp, basis.phi0))
        assert got.gamma == 0.0

    def test_wave_reference_separates_equal_dbar_states(self, exemplars):
        wave, entanglon = exemplars["wave"], exemplars["entanglon"]
        particle = exemplars["particle"]
        assert bures_distance(particle, wave) == pytest.approx(bures_distance(particle, entanglon), abs=1e-12)
        assert bures_distance(wave, wave) == 0.0
        assert bures_distance(wave, entanglon) == pytest.approx(1.0, abs=1e-9)


def test_min_particle_distance_determines_dbar():
    basis = haar_random_basis(SampleSeed(240))
    distances = [
        min_particle_distance(build_state(QuantonParams.from_angle(float(d), 0.7, alpha=0.3, beta=1.9), basis)).distance
        for d in np.linspace(0.0, 1.0, 101)
    ]
    assert all(a > b for a, b in zip(distances, distances[1:]))
    assert distances[0] == pytest.approx(PARTICLE_TO_BALANCED, abs=1e-12)
    assert distances[-1] == pytest.approx(0.0, abs=1e-7)
