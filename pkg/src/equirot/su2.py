"""Qubit algebra: Pauli matrices, quaternion-parametrized SU(2) and its SO(3) image.

Every special unitary is written ``W = r0*I + i*(r . sigma)`` with
``r0**2 + |r|**2 = 1``. The rotation attached to ``W`` is the one realised by
conjugation on the left, ``W (a . sigma) W^dagger = (R_W a) . sigma``; the
rotation of ``U^dagger W U`` is obtained by passing ``u.adjoint()``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AxisUndefined, NotSpecialUnitary

__all__ = [
    "IDENTITY",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "PAULIS",
    "ALGEBRA_TOL",
    "PREDICATE_TOL",
    "SU2Element",
    "IDENTITY_ELEMENT",
    "NOT_ELEMENT",
    "pauli_element",
    "su2_to_matrix",
    "su2_from_matrix",
    "su2_compose",
    "rotation_of",
    "conjugate_su2",
    "haar_sample",
    "axis_rotation",
    "aligning_rotation",
    "bloch_state",
    "bloch_vector",
    "pauli_dot",
]

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

# algebraic identities hold to ALGEBRA_TOL; predicates default to PREDICATE_TOL
ALGEBRA_TOL = 1e-12
PREDICATE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SU2Element:
    """Unit quaternion ``(r0, rvec)`` standing for ``r0*I + i*rvec.sigma``.

    ``q`` and ``-q`` give matrices differing by a sign and the same rotation.
    ``==`` compares the matrices to within ``ALGEBRA_TOL``;
    :meth:`same_rotation` also identifies ``q`` with ``-q``.
    """

    r0: float
    rvec: tuple[float, float, float]

    def __post_init__(self) -> None:
        r0 = float(self.r0)
        rvec = tuple(float(c) for c in self.rvec)
        if len(rvec) != 3:
            raise NotSpecialUnitary(f"rvec must have 3 components, got {len(rvec)}")
        norm2 = r0 * r0 + sum(c * c for c in rvec)
        if not np.isfinite(norm2) or abs(norm2 - 1.0) > ALGEBRA_TOL:
            raise NotSpecialUnitary(f"quaternion norm^2 = {norm2!r}, expected 1")
        object.__setattr__(self, "r0", r0)
        object.__setattr__(self, "rvec", rvec)

    @classmethod
    def from_quaternion(cls, q, normalize: bool = False) -> SU2Element:
        q = np.asarray(q, dtype=float).reshape(4)
        if normalize:
            n = np.linalg.norm(q)
            if not np.isfinite(n) or n == 0.0:
                raise NotSpecialUnitary("cannot normalize a zero quaternion")
            q = q / n
        return cls(q[0], (q[1], q[2], q[3]))

    @property
    def quaternion(self) -> np.ndarray:
        return np.array((self.r0, *self.rvec))

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.rvec)

    @property
    def x(self) -> float:
        return self.rvec[0]

    @property
    def y(self) -> float:
        return self.rvec[1]

    @property
    def z(self) -> float:
        return self.rvec[2]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SU2Element):
            return NotImplemented
        return bool(np.max(np.abs(self.matrix() - other.matrix())) <= ALGEBRA_TOL)

    __hash__ = None  # tolerance-based equality has no consistent hash

    def same_rotation(self, other: SU2Element, tol: float = ALGEBRA_TOL) -> bool:
        """True when both elements induce the same rotation of the Bloch sphere."""
        return bool(np.max(np.abs(rotation_of(self) - rotation_of(other))) <= tol)

    def adjoint(self) -> SU2Element:
        return SU2Element(self.r0, tuple(-c for c in self.rvec))

    def matrix(self) -> np.ndarray:
        return su2_to_matrix(self)


IDENTITY_ELEMENT = SU2Element(1.0, (0.0, 0.0, 0.0))
# (i/sqrt 2)(sigma_x + sigma_y): maps every state on the great circle v_x + v_y = 0 to its orthogonal
NOT_ELEMENT = SU2Element(0.0, (1 / np.sqrt(2), 1 / np.sqrt(2), 0.0))


def pauli_element(axis: str) -> SU2Element:
    """Return ``i*sigma_axis`` for axis in ``'x'``, ``'y'``, ``'z'``."""
    try:
        k = "xyz".index(axis)
    except ValueError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None
    rvec = [0.0, 0.0, 0.0]
    rvec[k] = 1.0
    return SU2Element(0.0, tuple(rvec))


def su2_to_matrix(w: SU2Element) -> np.ndarray:
    r0 = w.r0
    rx, ry, rz = w.rvec
    return np.array(
        [[r0 + 1j * rz, ry + 1j * rx], [-ry + 1j * rx, r0 - 1j * rz]],
        dtype=complex,
    )


def su2_from_matrix(m, tol: float = PREDICATE_TOL) -> SU2Element:
    """Recover the quaternion of a 2x2 special unitary.

    Raises:
        NotSpecialUnitary: if ``m`` is not unitary or ``det(m) != 1`` within ``tol``.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise NotSpecialUnitary(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotSpecialUnitary("matrix has non-finite entries")
    unitarity = np.max(np.abs(m.conj().T @ m - IDENTITY))
    det_err = abs(np.linalg.det(m) - 1.0)
    if unitarity > tol or det_err > tol:
        raise NotSpecialUnitary(
            f"not in SU(2): unitarity error {unitarity:.3g}, det error {det_err:.3g}"
        )
    q = np.array(
        [
            0.5 * (m[0, 0] + m[1, 1]).real,
            0.5 * (m[0, 1] + m[1, 0]).imag,
            0.5 * (m[0, 1] - m[1, 0]).real,
            0.5 * (m[0, 0] - m[1, 1]).imag,
        ]
    )
    return SU2Element.from_quaternion(q, normalize=True)


def su2_compose(a: SU2Element, b: SU2Element) -> SU2Element:
    """Quaternion product matching the matrix product ``A @ B``."""
    av, bv = a.vec, b.vec
    r0 = a.r0 * b.r0 - av @ bv
    rvec = a.r0 * bv + b.r0 * av - np.cross(av, bv)
    # re-normalize to absorb rounding drift over long products
    return SU2Element.from_quaternion(np.concatenate(([r0], rvec)), normalize=True)


def _cross_matrix(v: np.ndarray) -> np.ndarray:
    return np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])


def rotation_of(w: SU2Element) -> np.ndarray:
    """3x3 rotation ``R`` with ``R a = 2(r.a)r + (1 - 2|r|^2)a - 2 r0 (r x a)``."""
    r = w.vec
    return (
        2.0 * np.outer(r, r)
        + (1.0 - 2.0 * (r @ r)) * np.eye(3)
        - 2.0 * w.r0 * _cross_matrix(r)
    )


def conjugate_su2(u: SU2Element, w: SU2Element) -> SU2Element:
    """Quaternion of ``U^dagger W U``: scalar part kept, vector rotated by ``R_{U^dagger}``."""
    rvec = rotation_of(u.adjoint()) @ w.vec
    return SU2Element.from_quaternion(np.concatenate(([w.r0], rvec)), normalize=True)


def haar_sample(rng: np.random.Generator) -> SU2Element:
    """Haar-uniform element: four standard normals projected onto S^3."""
    q = rng.standard_normal(4)
    return SU2Element.from_quaternion(q, normalize=True)


def axis_rotation(axis, angle: float) -> SU2Element:
    """Element whose rotation turns vectors by ``angle`` (right-handed) about ``axis``.

    Raises:
        AxisUndefined: for a zero axis.
    """
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n < ALGEBRA_TOL:
        raise AxisUndefined("rotation axis is the zero vector")
    axis = axis / n
    half = 0.5 * angle
    return SU2Element.from_quaternion(
        np.concatenate(([np.cos(half)], -np.sin(half) * axis)), normalize=True
    )


def aligning_rotation(a, b) -> SU2Element:
    """Some element ``w`` with ``rotation_of(w) @ a`` parallel to ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < ALGEBRA_TOL or nb < ALGEBRA_TOL:
        raise AxisUndefined("cannot align a zero vector")
    a, b = a / na, b / nb
    axis = np.cross(a, b)
    s = np.linalg.norm(axis)
    c = float(a @ b)
    if s < 1e-14:
        if c > 0:
            return IDENTITY_ELEMENT
        # antiparallel: half turn about any axis perpendicular to a
        trial = np.eye(3)[np.argmin(np.abs(a))]
        return axis_rotation(np.cross(a, trial), np.pi)
    return axis_rotation(axis, np.arctan2(s, c))


def bloch_state(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Return ``cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`` and its Bloch vector."""
    state = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], dtype=complex)
    v = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    return state, v


def bloch_vector(state) -> np.ndarray:
    """Bloch vector ``<psi|sigma|psi>`` of a normalized single-qubit state."""
    state = np.asarray(state, dtype=complex).reshape(2)
    return np.array([np.vdot(state, s @ state).real for s in PAULIS])


def pauli_dot(a) -> np.ndarray:
    """``a . sigma`` for a real 3-vector."""
    a = np.asarray(a, dtype=float)
    return a[0] * PAULI_X + a[1] * PAULI_Y + a[2] * PAULI_Z
