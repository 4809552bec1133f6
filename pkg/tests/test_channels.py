from __future__ import annotations

import numpy as np
import pytest

from equirot.bipartite import schmidt_delta
from equirot.channels import (
    UnitalQubitChannel,
    apply_channel,
    bitflip_channel,
    channel_condition,
    channel_condition_sum,
    density_level_condition,
    depolarizing_channel,
    depolarizing_fidelity,
    depolarizing_p_for_amount,
    one_sided_channel_fidelity,
    solve_channel_angle,
)
from equirot.conditions import rotated_axis
from equirot.errors import AmountOutOfRange, BadProbability, NotUnitalMixture
from equirot.su2 import IDENTITY_ELEMENT, axis_rotation, haar_sample, su2_to_matrix

from oracles import SX, SY, SZ, I2, channel_fidelity, psi0


def _state(u, v, l0, l1):
    return np.kron(su2_to_matrix(u), su2_to_matrix(v)) @ psi0(l0, l1)


def test_channel_validation():
    with pytest.raises(BadProbability):
        UnitalQubitChannel(((0.7, IDENTITY_ELEMENT), (0.7, IDENTITY_ELEMENT)))
    with pytest.raises(NotUnitalMixture):
        UnitalQubitChannel(())
    with pytest.raises(BadProbability):
        depolarizing_channel(1.5)
    with pytest.raises(NotUnitalMixture):
        UnitalQubitChannel.from_kraus([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])


def test_from_kraus_round_trip(rng):
    ch = depolarizing_channel(0.4)
    back = UnitalQubitChannel.from_kraus(ch.kraus())
    rho = np.array([[0.7, 0.2 - 0.1j], [0.2 + 0.1j, 0.3]])
    assert np.allclose(apply_channel(back, rho), apply_channel(ch, rho), atol=1e-13)
    assert np.allclose(sum(k.conj().T @ k for k in ch.kraus()), np.eye(2))


def test_apply_channel_is_unital():
    ch = bitflip_channel(0.3)
    assert np.allclose(apply_channel(ch, np.eye(2) / 2), np.eye(2) / 2)
    rho = np.diag([1.0, 0.0])
    assert np.allclose(apply_channel(ch, rho), np.diag([0.3, 0.7]))
    with pytest.raises(ValueError):
        apply_channel(ch, np.diag([2.0, -1.0]))


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
@pytest.mark.parametrize("l0", [1.0, 0.9, 1 / np.sqrt(2)])
def test_fidelity_matches_oracle(p, l0, rng):
    l1 = np.sqrt(max(0.0, 1 - l0 * l0))
    ch = depolarizing_channel(p)
    kraus = [np.sqrt(p) * I2] + [np.sqrt((1 - p) / 3) * s for s in (SX, SY, SZ)]
    for _ in range(10):
        u, v = haar_sample(rng), haar_sample(rng)
        value = one_sided_channel_fidelity(ch, u, v, l0, l1)
        assert value == pytest.approx(channel_fidelity(kraus, _state(u, v, l0, l1)), abs=1e-13)
        assert value == pytest.approx(depolarizing_fidelity(p, schmidt_delta(l0, l1)), abs=1e-12)


def test_depolarizing_inverse_frozen_value():
    # oracle: root of the brute-force fidelity at delta=0.6, amount 0.5
    assert depolarizing_p_for_amount(0.5, 0.6) == pytest.approx(0.43181818181818193, abs=1e-12)
    with pytest.raises(AmountOutOfRange):
        depolarizing_p_for_amount(0.1, 0.6)
    with pytest.raises(AmountOutOfRange):
        depolarizing_p_for_amount(1.1, 0.6)


def test_bitflip_condition_closed_form(rng):
    p, l0 = 0.35, 0.9
    l1 = np.sqrt(1 - l0 * l0)
    ch = bitflip_channel(p)
    base = one_sided_channel_fidelity(ch, IDENTITY_ELEMENT, IDENTITY_ELEMENT, l0, l1)
    for _ in range(50):
        u, v = haar_sample(rng), haar_sample(rng)
        shift = abs(one_sided_channel_fidelity(ch, u, v, l0, l1) - base)
        assert channel_condition(ch, u, l0, l1).value == pytest.approx(shift, abs=1e-13)


def test_channel_condition_sum_is_weighted():
    ch = bitflip_channel(0.2)
    u = axis_rotation([1, 0, 0], np.pi / 2).adjoint()
    x_axis = rotated_axis(u, ch.terms[1][1])
    assert channel_condition_sum(ch, u) == pytest.approx(0.8 * x_axis[2] ** 2, abs=1e-14)


def test_solve_channel_angle():
    ch = UnitalQubitChannel(
        ((0.5, axis_rotation([1, 0, 1], 0.7)), (0.5, axis_rotation([0, 1, 2], 1.9)))
    )
    u = solve_channel_angle(ch, [1, 0, 0])
    assert abs(channel_condition_sum(ch, u)) < 1e-12
    assert abs(u.r0) < 1 - 1e-6


def test_density_level_condition(rng):
    w1, w2 = haar_sample(rng), haar_sample(rng)
    l0, l1 = 0.9, np.sqrt(0.19)
    z = axis_rotation([0, 0, 1], 0.8)
    # Z(b) x Z(-b) fixes psi0 exactly, so every operator keeps its overlap
    assert density_level_condition(z, z.adjoint(), w1, w2, l0, l1).value < 1e-13
    fails = sum(
        not density_level_condition(haar_sample(rng), haar_sample(rng), w1, w2, l0, l1).holds
        for _ in range(50)
    )
    assert fails >= 45
