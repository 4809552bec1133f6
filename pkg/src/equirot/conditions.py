"""Residual-valued predicates for constant-amount rotation under local unitaries.

"Rotation by the same amount" means equality of the complex overlap
``<psi|W|psi>`` across a set of states. Each predicate returns a
:class:`ConditionResidual`; the constrained samplers build solutions
constructively because every solution set has Haar measure zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .bipartite import (
    PureState2Q,
    apply_local,
    check_schmidt_pair,
    local_operator,
    make_psi0,
    overlap,
    schmidt_delta,
)
from .errors import NotNormalized, NotOnCircle, NotOrthonormal
from .su2 import (
    ALGEBRA_TOL,
    NOT_ELEMENT,
    PREDICATE_TOL,
    SU2Element,
    aligning_rotation,
    axis_rotation,
    bloch_state,
    bloch_vector,
    haar_sample,
    rotation_of,
    su2_compose,
)

__all__ = [
    "ConditionResidual",
    "TwoSidedResidual",
    "one_sided_amount",
    "one_sided_condition",
    "sample_one_sided_set",
    "solve_one_sided_angle",
    "rotated_axis",
    "display_sides",
    "two_sided_overlap_condition",
    "sample_two_sided_set",
    "single_qubit_amount",
    "circle_set_predicate",
    "sample_circle_point",
    "build_chi",
    "chi_schmidt_eigs",
    "t1_vector",
    "not_t_vectors",
    "not_twosided_condition",
    "sample_not_twosided_set",
    "nontrivial_root",
]

_Z = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class ConditionResidual:
    value: float
    tolerance: float = PREDICATE_TOL

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", float(self.value))
        if not self.value >= 0.0:
            raise ValueError(f"residual must be a non-negative number, got {self.value!r}")

    @property
    def holds(self) -> bool:
        return self.value <= self.tolerance


@dataclass(frozen=True)
class TwoSidedResidual(ConditionResidual):
    """Overlap residual plus ``display_residual`` from :func:`display_sides`.

    The real-valued identity mixes the real part of the overlap with its
    imaginary part divided by ``l0^2 - l1^2``. For maximally entangled
    states the imaginary part vanishes identically while the identity still
    carries those terms, so the two residuals can disagree there.
    """

    display_residual: float = 0.0

    def __post_init__(self) -> None:
        super().__post_init__()
        object.__setattr__(self, "display_residual", float(self.display_residual))


def rotated_axis(u: SU2Element, w: SU2Element) -> np.ndarray:
    """``R_{U^dagger} r^W``: the vector part of ``U^dagger W U``."""
    return rotation_of(u.adjoint()) @ w.vec


def one_sided_amount(w1: SU2Element, l0: float, l1: float) -> complex:
    """``<psi0|W1 x I|psi0> = r0 + i r_z (l0^2 - l1^2)``."""
    check_schmidt_pair(l0, l1)
    return complex(w1.r0, w1.z * schmidt_delta(l0, l1))


def one_sided_condition(
    u: SU2Element, w1: SU2Element, l0: float, l1: float, tol: float = PREDICATE_TOL
) -> ConditionResidual:
    check_schmidt_pair(l0, l1)
    delta = schmidt_delta(l0, l1)
    return ConditionResidual(abs(delta * (rotated_axis(u, w1)[2] - w1.z)), tol)


def sample_one_sided_set(
    w1: SU2Element, rng: np.random.Generator, delta: float | None = None
) -> SU2Element:
    """Draw ``u`` solving the one-sided condition for ``w1``.

    ``U^dagger`` is built as a turn about ``r^{W1}`` followed by a turn about
    ``z``; both keep the z-component of ``R_{U^dagger} r^{W1}`` fixed. When
    every ``u`` is a solution (``r^{W1} = 0`` or ``delta == 0``) a Haar
    sample is returned.
    """
    if (delta is not None and abs(delta) < ALGEBRA_TOL) or np.linalg.norm(w1.vec) < ALGEBRA_TOL:
        return haar_sample(rng)
    a, b = rng.uniform(0.0, 2 * np.pi, size=2)
    u_dag = su2_compose(axis_rotation(_Z, b), axis_rotation(w1.vec, a))
    return u_dag.adjoint()


def nontrivial_root(f: Callable[[float], float], n_grid: int = 1440, margin: float = 1e-3) -> float:
    """A root of ``f`` in ``(margin, 2 pi - margin)`` located by grid scan and Brent's method."""
    ts = np.linspace(margin, 2 * np.pi - margin, n_grid)
    fs = np.array([f(t) for t in ts])
    for k in range(n_grid - 1):
        if fs[k] == 0.0:
            return float(ts[k])
        if fs[k] * fs[k + 1] < 0:
            return float(brentq(f, ts[k], ts[k + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    raise ValueError("no sign change found away from the trivial root")


def solve_one_sided_angle(w1: SU2Element, axis) -> SU2Element:
    """Numerically find a nontrivial ``u`` with ``U^dagger`` a turn about ``axis``
    such that the z-component of ``R_{U^dagger} r^{W1}`` equals ``r_z^{W1}``."""
    r = w1.vec

    def f(t: float) -> float:
        return (rotation_of(axis_rotation(axis, t)) @ r)[2] - r[2]

    return axis_rotation(axis, nontrivial_root(f)).adjoint()


def display_sides(
    u: SU2Element, v: SU2Element, w1: SU2Element, w2: SU2Element, l0: float, l1: float
) -> tuple[float, float]:
    """Both sides of the real-valued two-sided identity on rotated axes.

    Their difference vanishes with the overlap residual on constrained draws when
    ``l0 > l1``; see :class:`TwoSidedResidual` for the ``l0 == l1`` case.
    """
    s = 2.0 * l0 * l1

    def side(t1: np.ndarray, t2: np.ndarray) -> float:
        return (
            w1.r0 * t2[2]
            + w2.r0 * t1[2]
            + s * (t1[0] * t2[0] - t1[1] * t2[1])
            + t1[2] * t2[2]
        )

    lhs = side(rotated_axis(u, w1), rotated_axis(v, w2))
    rhs = side(w1.vec, w2.vec)
    return lhs, rhs


def two_sided_overlap_condition(
    u: SU2Element,
    v: SU2Element,
    w1: SU2Element,
    w2: SU2Element,
    l0: float,
    l1: float,
    tol: float = PREDICATE_TOL,
) -> TwoSidedResidual:
    """``|<(u x v)psi0| W1 x W2 |(u x v)psi0> - <psi0| W1 x W2 |psi0>|``."""
    psi0 = make_psi0(l0, l1)
    op = local_operator(w1, w2)
    moved = overlap(apply_local(u, v, psi0), op)
    target = overlap(psi0, op)
    lhs, rhs = display_sides(u, v, w1, w2, l0, l1)
    return TwoSidedResidual(abs(moved - target), tol, display_residual=abs(lhs - rhs))


def sample_two_sided_set(
    w1: SU2Element, w2: SU2Element, rng: np.random.Generator
) -> tuple[SU2Element, SU2Element]:
    """Draw ``(u, v)`` with ``u = C1 Z(b)``, ``v = C2 Z(-b)``.

    ``C_k`` commutes with ``W_k`` and ``Z(b) x Z(-b)`` fixes ``psi0``, so the
    two-sided overlap is unchanged for every Schmidt pair.
    """
    a1, a2, b = rng.uniform(0.0, 2 * np.pi, size=3)

    def commuting(w: SU2Element, angle: float) -> SU2Element:
        if np.linalg.norm(w.vec) < ALGEBRA_TOL:
            return haar_sample(rng)
        return axis_rotation(w.vec, angle)

    u = su2_compose(commuting(w1, a1), axis_rotation(_Z, b))
    v = su2_compose(commuting(w2, a2), axis_rotation(_Z, -b))
    return u, v


def single_qubit_amount(w1: SU2Element) -> complex:
    """``<0|W1|0> = r0 + i r_z``, shared by every state on the circle of ``w1``."""
    return complex(w1.r0, w1.z)


def circle_set_predicate(
    theta: float, phi: float, w1: SU2Element, tol: float = PREDICATE_TOL
) -> ConditionResidual:
    _, v = bloch_state(theta, phi)
    return ConditionResidual(abs(v @ w1.vec - w1.z), tol)


def sample_circle_point(w1: SU2Element, rng: np.random.Generator) -> tuple[float, float]:
    """Uniform angle on the circle ``v . r^{W1} = r_z^{W1}``, as ``(theta, phi)``."""
    r = w1.vec
    n = np.linalg.norm(r)
    if n < ALGEBRA_TOL:
        v = rng.standard_normal(3)
        v /= np.linalg.norm(v)
    else:
        axis = r / n
        height = w1.z / n
        radius = np.sqrt(max(0.0, 1.0 - height * height))
        e1 = np.cross(axis, _Z if abs(axis[2]) < 0.9 else np.array([1.0, 0.0, 0.0]))
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(axis, e1)
        t = rng.uniform(0.0, 2 * np.pi)
        v = height * axis + radius * (np.cos(t) * e1 + np.sin(t) * e2)
    theta = float(np.arccos(np.clip(v[2], -1.0, 1.0)))
    phi = float(np.arctan2(v[1], v[0]))
    return theta, phi


def _unit(state, name: str, tol: float) -> np.ndarray:
    state = np.asarray(state, dtype=complex).reshape(2)
    if abs(np.linalg.norm(state) - 1.0) > tol:
        raise NotNormalized(f"{name} is not normalized")
    return state


def build_chi(
    lam: float,
    psi1,
    psi2,
    e_basis,
    w1: SU2Element | None = None,
    tol: float = 1e-10,
) -> PureState2Q:
    """``sqrt(lam) psi1 x e + sqrt(1 - lam) psi2 x e_perp``.

    With ``psi1``, ``psi2`` on the circle of ``w1`` every such state has
    ``<chi|W1 x I|chi> = <0|W1|0>``.

    Raises:
        NotOnCircle: if ``w1`` is given and a single-qubit state misses its circle.
        NotOrthonormal: if ``e_basis`` is not an orthonormal pair.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    psi1 = _unit(psi1, "psi1", tol)
    psi2 = _unit(psi2, "psi2", tol)
    e, e_perp = (np.asarray(x, dtype=complex).reshape(2) for x in e_basis)
    gram = np.array([[np.vdot(a, b) for b in (e, e_perp)] for a in (e, e_perp)])
    if np.max(np.abs(gram - np.eye(2))) > tol:
        raise NotOrthonormal("e_basis is not orthonormal")
    if w1 is not None:
        for name, psi in (("psi1", psi1), ("psi2", psi2)):
            miss = abs(bloch_vector(psi) @ w1.vec - w1.z)
            if miss > tol:
                raise NotOnCircle(f"{name} is off the circle of w1 by {miss:.3g}")
    amp = np.sqrt(lam) * np.kron(psi1, e) + np.sqrt(1.0 - lam) * np.kron(psi2, e_perp)
    return PureState2Q(amp / np.linalg.norm(amp))


def chi_schmidt_eigs(lam: float, dot: float) -> tuple[float, float]:
    """Eigenvalues ``(1 +- |R|)/2`` of the reduced state, ``|R|^2 = 1 - 2 lam(1-lam)(1-dot)``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if not -1.0 - ALGEBRA_TOL <= dot <= 1.0 + ALGEBRA_TOL:
        raise ValueError(f"dot must lie in [-1, 1], got {dot}")
    r = np.sqrt(max(0.0, 1.0 - 2.0 * lam * (1.0 - lam) * (1.0 - dot)))
    return (1.0 + r) / 2.0, (1.0 - r) / 2.0


def t1_vector(u: SU2Element, w1: SU2Element) -> np.ndarray:
    """``|r^U|^2 r^W - (r^U . r^W) r^U - r0^U (r^U x r^W)``; equals ``(r^W - R_{U^dagger} r^W)/2``."""
    ru, rw = u.vec, w1.vec
    return (ru @ ru) * rw - (ru @ rw) * ru - u.r0 * np.cross(ru, rw)


def not_t_vectors(
    u: SU2Element, v: SU2Element, l0: float, l1: float
) -> tuple[np.ndarray, np.ndarray]:
    """The pair ``(T1(u; l0, l1), T2(v))`` whose orthogonality makes ``NOT x NOT`` a NOT."""
    s = 2.0 * l0 * l1
    t = rotated_axis(u, NOT_ELEMENT)
    t1 = np.array([s * t[0], -s * t[1], t[2]])
    t2 = rotated_axis(v, NOT_ELEMENT)
    return t1, t2


def not_twosided_condition(
    u: SU2Element, v: SU2Element, l0: float, l1: float, tol: float = PREDICATE_TOL
) -> ConditionResidual:
    check_schmidt_pair(l0, l1)
    t1, t2 = not_t_vectors(u, v, l0, l1)
    return ConditionResidual(abs(t1 @ t2), tol)


def sample_not_twosided_set(
    l0: float, l1: float, rng: np.random.Generator
) -> tuple[SU2Element, SU2Element]:
    """Draw ``(u, v)`` with ``T1(u) . T2(v) = 0``: Haar ``v``, then ``u`` placing
    ``R_{U^dagger} r`` uniformly on the great circle orthogonal to ``M T2(v)``."""
    check_schmidt_pair(l0, l1)
    v = haar_sample(rng)
    s = 2.0 * l0 * l1
    t2 = rotated_axis(v, NOT_ELEMENT)
    normal = np.array([s * t2[0], -s * t2[1], t2[2]])
    if np.linalg.norm(normal) < ALGEBRA_TOL:
        return haar_sample(rng), v
    normal /= np.linalg.norm(normal)
    g = rng.standard_normal(3)
    g -= (g @ normal) * normal
    r = NOT_ELEMENT.vec
    spin = axis_rotation(r, rng.uniform(0.0, 2 * np.pi))
    u_dag = su2_compose(aligning_rotation(r, g), spin)
    return u_dag.adjoint(), v
