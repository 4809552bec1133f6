from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equirot.bipartite import local_operator, overlap, schmidt_delta
from equirot.conditions import (
    ConditionResidual,
    build_chi,
    chi_schmidt_eigs,
    circle_set_predicate,
    display_sides,
    not_t_vectors,
    not_twosided_condition,
    one_sided_amount,
    one_sided_condition,
    rotated_axis,
    sample_circle_point,
    sample_not_twosided_set,
    sample_one_sided_set,
    sample_two_sided_set,
    single_qubit_amount,
    solve_one_sided_angle,
    t1_vector,
    two_sided_overlap_condition,
)
from equirot.errors import NotNormalized, NotOnCircle, NotOrthonormal
from equirot.su2 import NOT_ELEMENT, SU2Element, bloch_state, haar_sample, su2_to_matrix

from oracles import I2, expectation, psi0, reduced_first

SCHMIDT = [(np.sqrt(0.8), np.sqrt(0.2)), (0.99, np.sqrt(1 - 0.99**2)), (1 / np.sqrt(2), 1 / np.sqrt(2))]


def _moved_overlap(u, v, w1, w2, l0, l1) -> complex:
    psi = np.kron(su2_to_matrix(u), su2_to_matrix(v)) @ psi0(l0, l1)
    return expectation(psi, np.kron(su2_to_matrix(w1), su2_to_matrix(w2)))


def test_residual_validation():
    with pytest.raises(ValueError):
        ConditionResidual(-1.0)
    assert ConditionResidual(1e-12).holds
    assert not ConditionResidual(1e-3).holds


@pytest.mark.parametrize("l0, l1", SCHMIDT)
def test_one_sided_amount_matches_oracle(l0, l1, rng):
    for _ in range(20):
        w = haar_sample(rng)
        direct = expectation(psi0(l0, l1), np.kron(su2_to_matrix(w), I2))
        assert one_sided_amount(w, l0, l1) == pytest.approx(direct, abs=1e-14)


@pytest.mark.parametrize("l0, l1", SCHMIDT)
def test_one_sided_residual_tracks_overlap_shift(l0, l1, rng):
    # moved - fixed = i * delta * (z-part of rotated axis - r_z), so |.| is the residual
    for _ in range(50):
        u, v, w = haar_sample(rng), haar_sample(rng), haar_sample(rng)
        shift = _moved_overlap(u, v, w, SU2Element(1.0, (0, 0, 0)), l0, l1) - one_sided_amount(w, l0, l1)
        assert one_sided_condition(u, w, l0, l1).value == pytest.approx(abs(shift), abs=1e-13)


def test_rotated_axis_is_conjugated_vector(rng):
    u, w = haar_sample(rng), haar_sample(rng)
    um, wm = su2_to_matrix(u), su2_to_matrix(w)
    conj = um.conj().T @ wm @ um
    assert rotated_axis(u, w)[2] == pytest.approx((conj[0, 0].imag), abs=1e-14)


@pytest.mark.parametrize("l0, l1", SCHMIDT[:2])
def test_one_sided_sampler_solves_condition(l0, l1, rng):
    delta = schmidt_delta(l0, l1)
    for _ in range(200):
        w = haar_sample(rng)
        u = sample_one_sided_set(w, rng, delta)
        assert one_sided_condition(u, w, l0, l1).value < 1e-13
        moved = _moved_overlap(u, haar_sample(rng), w, SU2Element(1.0, (0, 0, 0)), l0, l1)
        assert moved == pytest.approx(one_sided_amount(w, l0, l1), abs=1e-13)


@pytest.mark.parametrize("axis", [(1, 0, 0), (0, 1, 0), (1, 1, 1)])
def test_solve_one_sided_angle(axis, rng):
    w = haar_sample(rng)
    u = solve_one_sided_angle(w, axis)
    assert one_sided_condition(u, w, 0.9, np.sqrt(0.19)).value < 1e-12
    assert abs(u.r0) < 1 - 1e-6


@given(
    st.floats(0.0, 2 * np.pi),
    st.floats(0.0, 2 * np.pi),
    st.floats(0.0, 2 * np.pi),
    st.sampled_from(SCHMIDT),
)
@settings(max_examples=60, deadline=None)
def test_two_sided_sampler_property(a, b, c, pair):
    rng = np.random.default_rng(int(1e6 * (a + b + c)))
    w1, w2 = haar_sample(rng), haar_sample(rng)
    u, v = sample_two_sided_set(w1, w2, rng)
    res = two_sided_overlap_condition(u, v, w1, w2, *pair)
    assert res.holds and res.value < 1e-12


@pytest.mark.parametrize("l0, l1", SCHMIDT)
def test_two_sided_residual_is_semantic(l0, l1, rng):
    for _ in range(30):
        u, v, w1, w2 = (haar_sample(rng) for _ in range(4))
        moved = _moved_overlap(u, v, w1, w2, l0, l1)
        fixed = expectation(psi0(l0, l1), np.kron(su2_to_matrix(w1), su2_to_matrix(w2)))
        assert two_sided_overlap_condition(u, v, w1, w2, l0, l1).value == pytest.approx(
            abs(moved - fixed), abs=1e-13
        )


@pytest.mark.parametrize("l0, l1", SCHMIDT[:2])
def test_literal_two_sided_sides_agree_on_constrained_draws(l0, l1, rng):
    for _ in range(100):
        w1, w2 = haar_sample(rng), haar_sample(rng)
        u, v = sample_two_sided_set(w1, w2, rng)
        lhs, rhs = display_sides(u, v, w1, w2, l0, l1)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_unconstrained_two_sided_usually_fails(rng):
    fails = sum(
        not two_sided_overlap_condition(*(haar_sample(rng) for _ in range(4)), 0.9, np.sqrt(0.19)).holds
        for _ in range(300)
    )
    assert fails >= 297


def test_single_qubit_amount_on_circle(rng):
    for _ in range(100):
        w = haar_sample(rng)
        theta, phi = sample_circle_point(w, rng)
        assert circle_set_predicate(theta, phi, w).value < 1e-12
        state, _ = bloch_state(theta, phi)
        assert np.vdot(state, su2_to_matrix(w) @ state) == pytest.approx(single_qubit_amount(w), abs=1e-12)


def test_circle_contains_north_pole(rng):
    w = haar_sample(rng)
    assert circle_set_predicate(0.0, 0.0, w).holds


def _circle_state(w, rng):
    theta, phi = sample_circle_point(w, rng)
    return bloch_state(theta, phi)[0]


def test_chi_family_constant_overlap(rng):
    for _ in range(100):
        w = haar_sample(rng)
        e, e_perp = bloch_state(*rng.uniform(0, np.pi, 2))[0], None
        e_perp = np.array([-np.conj(e[1]), np.conj(e[0])])
        chi = build_chi(rng.uniform(), _circle_state(w, rng), _circle_state(w, rng), (e, e_perp), w1=w)
        assert overlap(chi, local_operator(w, I2)) == pytest.approx(single_qubit_amount(w), abs=1e-12)


def test_build_chi_validation(rng):
    w = haar_sample(rng)
    e = (np.array([1, 0]), np.array([0, 1]))
    good = _circle_state(w, rng)
    off = bloch_state(np.pi, 0.0)[0]
    with pytest.raises(NotOnCircle):
        build_chi(0.5, good, off, e, w1=SU2Element(0.0, (1.0, 0.0, 0.0)))
    with pytest.raises(NotOrthonormal):
        build_chi(0.5, good, good, (np.array([1, 0]), np.array([1, 1]) / np.sqrt(2)))
    with pytest.raises(NotNormalized):
        build_chi(0.5, np.array([1, 1]), good, e)


def test_chi_eigs_frozen_value():
    # oracle: direct diagonalization for lam=0.3, |0> and |+> (Bloch dot 0)
    hi, lo = chi_schmidt_eigs(0.3, 0.0)
    assert hi == pytest.approx(0.8807886552931954, abs=1e-12)
    assert lo == pytest.approx(0.11921134470680461, abs=1e-12)


def test_chi_eigs_match_reduced_state(rng):
    e = (np.array([1, 0]), np.array([0, 1]))
    for _ in range(50):
        lam = rng.uniform()
        s1 = bloch_state(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        s2 = bloch_state(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        chi = build_chi(lam, s1[0], s2[0], e)
        direct = np.sort(np.linalg.eigvalsh(reduced_first(chi.amp)))[::-1]
        assert np.allclose(chi_schmidt_eigs(lam, s1[1] @ s2[1]), direct, atol=1e-12)


def test_t1_vector_identity(rng):
    for _ in range(50):
        u, w = haar_sample(rng), haar_sample(rng)
        assert np.allclose(t1_vector(u, w), (w.vec - rotated_axis(u, w)) / 2, atol=1e-13)


@pytest.mark.parametrize("l0, l1", SCHMIDT)
def test_not_overlap_is_minus_t_dot(l0, l1, rng):
    for _ in range(30):
        u, v = haar_sample(rng), haar_sample(rng)
        t1, t2 = not_t_vectors(u, v, l0, l1)
        moved = _moved_overlap(u, v, NOT_ELEMENT, NOT_ELEMENT, l0, l1)
        assert moved == pytest.approx(-(t1 @ t2), abs=1e-13)


@pytest.mark.parametrize("l0, l1", SCHMIDT)
def test_not_sampler(l0, l1, rng):
    for _ in range(100):
        u, v = sample_not_twosided_set(l0, l1, rng)
        assert not_twosided_condition(u, v, l0, l1).value < 1e-12
        assert abs(_moved_overlap(u, v, NOT_ELEMENT, NOT_ELEMENT, l0, l1)) < 1e-12
