"""One-sided unital qubit channels acting on two-qubit pure states.

A unital trace-preserving qubit channel is stored as a convex mixture of at
most four special unitaries, ``T(rho) = sum_j lam_j W_j rho W_j^dagger``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bipartite import apply_local, check_schmidt_pair, local_operator, make_psi0, overlap, schmidt_delta
from .conditions import ConditionResidual, nontrivial_root, rotated_axis
from .errors import AmountOutOfRange, BadProbability, NotUnitalMixture
from .su2 import (
    ALGEBRA_TOL,
    IDENTITY,
    IDENTITY_ELEMENT,
    PREDICATE_TOL,
    SU2Element,
    axis_rotation,
    pauli_element,
    su2_from_matrix,
    su2_to_matrix,
)

__all__ = [
    "UnitalQubitChannel",
    "check_density",
    "apply_channel",
    "one_sided_channel_fidelity",
    "channel_condition_sum",
    "channel_condition",
    "solve_channel_angle",
    "bitflip_channel",
    "depolarizing_channel",
    "depolarizing_fidelity",
    "depolarizing_p_for_amount",
    "density_level_condition",
]


@dataclass(frozen=True)
class UnitalQubitChannel:
    terms: tuple[tuple[float, SU2Element], ...]

    def __post_init__(self) -> None:
        terms = tuple((float(lam), w) for lam, w in self.terms)
        if not 1 <= len(terms) <= 4:
            raise NotUnitalMixture(f"need 1 to 4 unitary terms, got {len(terms)}")
        weights = np.array([lam for lam, _ in terms])
        if np.any(weights < -ALGEBRA_TOL) or abs(weights.sum() - 1.0) > ALGEBRA_TOL:
            raise BadProbability(f"mixture weights {weights.tolist()} are not a distribution")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_kraus(cls, kraus_ops, tol: float = PREDICATE_TOL) -> UnitalQubitChannel:
        """Convert Kraus operators that are each a multiple of a unitary.

        Raises:
            NotUnitalMixture: if some operator is not proportional to a unitary.
        """
        terms = []
        for k in kraus_ops:
            k = np.asarray(k, dtype=complex)
            lam = float(np.trace(k.conj().T @ k).real) / 2.0
            if lam <= tol:
                continue
            m = k / np.sqrt(lam)
            if np.max(np.abs(m.conj().T @ m - IDENTITY)) > tol:
                raise NotUnitalMixture("Kraus operator is not proportional to a unitary")
            m = m / np.sqrt(np.linalg.det(m))
            terms.append((lam, su2_from_matrix(m, tol)))
        return cls(tuple(terms))

    def kraus(self) -> list[np.ndarray]:
        return [np.sqrt(lam) * su2_to_matrix(w) for lam, w in self.terms]


def check_density(rho, tol: float = ALGEBRA_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 density matrix, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol or abs(np.trace(rho) - 1.0) > tol:
        raise ValueError("density matrix must be Hermitian with unit trace")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def apply_channel(ch: UnitalQubitChannel, rho) -> np.ndarray:
    rho = check_density(rho)
    out = np.zeros((2, 2), dtype=complex)
    for lam, w in ch.terms:
        m = su2_to_matrix(w)
        out += lam * (m @ rho @ m.conj().T)
    return out


def one_sided_channel_fidelity(
    ch: UnitalQubitChannel, u: SU2Element, v: SU2Element, l0: float, l1: float
) -> float:
    """``<psi|(T x I)(|psi><psi|)|psi>`` for ``psi = (u x v) psi0``, via the 4x4 density matrix."""
    psi = apply_local(u, v, make_psi0(l0, l1)).amp
    rho = np.outer(psi, psi.conj())
    out = np.zeros((4, 4), dtype=complex)
    for lam, w in ch.terms:
        k = local_operator(w, IDENTITY)
        out += lam * (k @ rho @ k.conj().T)
    return float(np.vdot(psi, out @ psi).real)


def channel_condition_sum(ch: UnitalQubitChannel, u: SU2Element) -> float:
    """``sum_j lam_j [((R_{U^dagger} r^{W_j})_z)^2 - (r_z^{W_j})^2]``."""
    return float(sum(lam * (rotated_axis(u, w)[2] ** 2 - w.z**2) for lam, w in ch.terms))


def channel_condition(
    ch: UnitalQubitChannel, u: SU2Element, l0: float, l1: float, tol: float = PREDICATE_TOL
) -> ConditionResidual:
    check_schmidt_pair(l0, l1)
    delta = schmidt_delta(l0, l1)
    return ConditionResidual(abs(delta * delta * channel_condition_sum(ch, u)), tol)


def solve_channel_angle(ch: UnitalQubitChannel, axis) -> SU2Element:
    """Nontrivial ``u`` (``U^dagger`` a turn about ``axis``) zeroing :func:`channel_condition_sum`.

    Only explores one-parameter families; raises ``ValueError`` if the scan
    finds no sign change.
    """

    def f(t: float) -> float:
        return channel_condition_sum(ch, axis_rotation(axis, t).adjoint())

    return axis_rotation(axis, nontrivial_root(f)).adjoint()


def _check_probability(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise BadProbability(f"p must lie in [0, 1], got {p}")
    return p


def bitflip_channel(p: float) -> UnitalQubitChannel:
    """``p rho + (1 - p) sigma_x rho sigma_x``."""
    p = _check_probability(p)
    return UnitalQubitChannel(((p, IDENTITY_ELEMENT), (1.0 - p, pauli_element("x"))))


def depolarizing_channel(p: float) -> UnitalQubitChannel:
    """``p rho + ((1 - p)/3) sum_k sigma_k rho sigma_k``."""
    p = _check_probability(p)
    q = (1.0 - p) / 3.0
    return UnitalQubitChannel(
        ((p, IDENTITY_ELEMENT), (q, pauli_element("x")), (q, pauli_element("y")), (q, pauli_element("z")))
    )


def depolarizing_fidelity(p: float, delta: float) -> float:
    """Fidelity ``p + (1 - p) delta^2 / 3`` of the one-sided depolarizing channel.

    The reduced Bloch vector of a state with Schmidt pair (l0, l1) has length
    ``delta``; summing ``|<sigma_k x I>|^2`` over k gives ``delta^2``.
    """
    return p + (1.0 - p) * delta * delta / 3.0


def depolarizing_p_for_amount(r: float, delta: float) -> float:
    """Depolarizing parameter whose one-sided fidelity is ``r`` on every state with this ``delta``.

    Raises:
        AmountOutOfRange: unless ``delta^2/3 <= r <= 1``.
    """
    d2 = delta * delta
    if not d2 / 3.0 - ALGEBRA_TOL <= r <= 1.0 + ALGEBRA_TOL:
        raise AmountOutOfRange(f"amount {r} outside [{d2 / 3.0}, 1] for delta={delta}")
    p = (3.0 * r - d2) / (3.0 - d2)
    return min(1.0, max(0.0, p))


def density_level_condition(
    u: SU2Element,
    v: SU2Element,
    w1: SU2Element,
    w2: SU2Element,
    l0: float,
    l1: float,
    tol: float = PREDICATE_TOL,
) -> ConditionResidual:
    """Phase-insensitive version of the two-sided condition: compares ``|overlap|^2``."""
    psi0 = make_psi0(l0, l1)
    op = local_operator(w1, w2)
    moved = abs(overlap(apply_local(u, v, psi0), op)) ** 2
    return ConditionResidual(abs(moved - abs(overlap(psi0, op)) ** 2), tol)
