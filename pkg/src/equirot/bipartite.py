"""Two-qubit and d x d pure states: construction, Schmidt form, local action.

Basis order is row-major everywhere: the first tensor factor is the slower
index, so ``|ij>`` sits at position ``i*d + j`` and the coefficient matrix of
a state is ``amp.reshape(d, d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from .errors import BadSchmidtPair, DimensionMismatch, NotNormalized
from .su2 import ALGEBRA_TOL, PREDICATE_TOL, SU2Element, su2_from_matrix, su2_to_matrix

__all__ = [
    "PureState",
    "PureState2Q",
    "PureState3Q",
    "SchmidtForm",
    "MatrixState",
    "check_schmidt_pair",
    "schmidt_delta",
    "make_psi0",
    "entanglement",
    "apply_local",
    "local_operator",
    "schmidt_decompose",
    "overlap",
    "vectorize",
    "devectorize",
    "apply_local_matrices",
    "reduced_density_matrix",
    "entropy_bits",
]


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector of ``n_qubits`` qubits (read-only amplitudes)."""

    amp: np.ndarray
    n_qubits: ClassVar[int | None] = None

    def __post_init__(self) -> None:
        amp = np.array(self.amp, dtype=complex).ravel()
        expected = None if self.n_qubits is None else 2**self.n_qubits
        if expected is not None and amp.size != expected:
            raise DimensionMismatch(f"expected {expected} amplitudes, got {amp.size}")
        norm2 = float(np.vdot(amp, amp).real)
        if not np.isfinite(norm2) or abs(norm2 - 1.0) > ALGEBRA_TOL:
            raise NotNormalized(f"sum |amp|^2 = {norm2!r}")
        amp.setflags(write=False)
        object.__setattr__(self, "amp", amp)

    @classmethod
    def normalized(cls, amp):
        amp = np.asarray(amp, dtype=complex).ravel()
        return cls(amp / np.linalg.norm(amp))

    def fidelity(self, other: PureState) -> float:
        """``|<self|other>|`` (global-phase insensitive comparison)."""
        return float(abs(np.vdot(self.amp, other.amp)))


class PureState2Q(PureState):
    n_qubits = 2


class PureState3Q(PureState):
    n_qubits = 3


def check_schmidt_pair(l0: float, l1: float, tol: float = PREDICATE_TOL) -> None:
    """Raise :class:`BadSchmidtPair` unless ``0 <= l1 <= l0`` and ``l0^2 + l1^2 = 1``."""
    if not (np.isfinite(l0) and np.isfinite(l1)):
        raise BadSchmidtPair(f"non-finite Schmidt pair ({l0}, {l1})")
    if l1 < -tol or l1 > l0 + tol:
        raise BadSchmidtPair(f"need 0 <= l1 <= l0, got ({l0}, {l1})")
    if abs(l0 * l0 + l1 * l1 - 1.0) > tol:
        raise BadSchmidtPair(f"l0^2 + l1^2 = {l0 * l0 + l1 * l1!r}, expected 1")


def schmidt_delta(l0: float, l1: float) -> float:
    """``l0^2 - l1^2``; zero exactly for maximally entangled pairs."""
    return l0 * l0 - l1 * l1


def make_psi0(l0: float, l1: float) -> PureState2Q:
    check_schmidt_pair(l0, l1)
    amp = np.array([l0, 0.0, 0.0, l1], dtype=complex)
    return PureState2Q(amp / np.linalg.norm(amp))


def entanglement(l0: float, l1: float) -> float:
    """Entropy of entanglement in bits, with ``0 log 0 = 0``."""
    check_schmidt_pair(l0, l1)
    return entropy_bits([l0 * l0, l1 * l1])


def entropy_bits(probs) -> float:
    p = np.asarray(probs, dtype=float)
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log2(p))))


def _as_matrix(op) -> np.ndarray:
    if isinstance(op, SU2Element):
        return su2_to_matrix(op)
    return np.asarray(op, dtype=complex)


def local_operator(a, b) -> np.ndarray:
    """``A kron B`` for SU2Elements or plain matrices."""
    return np.kron(_as_matrix(a), _as_matrix(b))


def apply_local(u, v, s: PureState2Q) -> PureState2Q:
    amp = local_operator(u, v) @ s.amp
    # unitary action; renormalize only to absorb rounding
    return PureState2Q(amp / np.linalg.norm(amp))


@dataclass(frozen=True)
class SchmidtForm:
    """``(u kron v)(l0|00> + l1|11>)`` reproduces the source state up to global phase."""

    l0: float
    l1: float
    u: SU2Element
    v: SU2Element

    def __post_init__(self) -> None:
        if not (-ALGEBRA_TOL <= self.l1 <= self.l0 + ALGEBRA_TOL and self.l0 <= 1 + ALGEBRA_TOL):
            raise BadSchmidtPair(f"unordered Schmidt pair ({self.l0}, {self.l1})")
        if abs(self.l0**2 + self.l1**2 - 1.0) > ALGEBRA_TOL:
            raise BadSchmidtPair(f"l0^2 + l1^2 = {self.l0**2 + self.l1**2!r}")

    @property
    def delta(self) -> float:
        return schmidt_delta(self.l0, self.l1)

    def state(self) -> PureState2Q:
        return apply_local(self.u, self.v, make_psi0(self.l0, self.l1))


def _to_su2(m: np.ndarray) -> np.ndarray:
    # strip the determinant phase, then pick the square-root branch with Re m[0,0] >= 0
    m = m / np.sqrt(np.linalg.det(m))
    if m[0, 0].real < 0:
        m = -m
    return m


def schmidt_decompose(s: PureState2Q) -> SchmidtForm:
    """Schmidt coefficients and local special unitaries of a two-qubit state.

    The coefficient matrix ``C = amp.reshape(2, 2)`` is factored by SVD as
    ``C = U diag(l0, l1) V^T`` up to a global phase. For ``l0 == l1`` the
    factorization is not unique; the SVD routine's choice is kept, with each
    local matrix scaled to determinant one and ``Re U[0, 0] >= 0``.
    """
    c = s.amp.reshape(2, 2)
    a, sv, bh = np.linalg.svd(c)
    l0, l1 = float(sv[0]), float(max(sv[1], 0.0))
    norm = np.hypot(l0, l1)
    l0, l1 = l0 / norm, l1 / norm
    u = su2_from_matrix(_to_su2(a))
    v = su2_from_matrix(_to_su2(bh.T))
    return SchmidtForm(l0, l1, u, v)


def overlap(s: PureState, op) -> complex:
    """``<s|op|s>``."""
    op = _as_matrix(op)
    if op.shape != (s.amp.size, s.amp.size):
        raise DimensionMismatch(f"operator {op.shape} vs state of size {s.amp.size}")
    return complex(np.vdot(s.amp, op @ s.amp))


@dataclass(frozen=True, eq=False)
class MatrixState:
    """Coefficient matrix ``C`` of ``|C>> = sum_ij c_ij |ij>`` with ``Tr[C C^dagger] = 1``."""

    c: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.c, dtype=complex)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise DimensionMismatch(f"coefficient matrix must be square, got {c.shape}")
        norm2 = float(np.trace(c @ c.conj().T).real)
        if abs(norm2 - 1.0) > ALGEBRA_TOL:
            raise NotNormalized(f"Tr[C C^dagger] = {norm2!r}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.c.shape[0]


def vectorize(c) -> np.ndarray:
    if not isinstance(c, MatrixState):
        c = MatrixState(c)
    return c.c.reshape(-1).copy()


def devectorize(vec) -> MatrixState:
    vec = np.asarray(vec, dtype=complex).ravel()
    d = int(round(np.sqrt(vec.size)))
    if d * d != vec.size:
        raise DimensionMismatch(f"{vec.size} amplitudes is not a d x d system")
    return MatrixState(vec.reshape(d, d))


def apply_local_matrices(u, v, amp) -> np.ndarray:
    """``(U kron V) amp`` for d x d systems; equals ``vec(U C V^T)``."""
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    amp = np.asarray(amp, dtype=complex).ravel()
    if u.shape[0] * v.shape[0] != amp.size:
        raise DimensionMismatch(f"operators {u.shape}, {v.shape} vs {amp.size} amplitudes")
    return np.kron(u, v) @ amp


def reduced_density_matrix(amp, keep, n_qubits: int | None = None) -> np.ndarray:
    """Partial trace of ``|amp><amp|`` onto the qubits listed in ``keep``."""
    amp = np.asarray(amp, dtype=complex).ravel()
    if n_qubits is None:
        n_qubits = int(round(np.log2(amp.size)))
    if 2**n_qubits != amp.size:
        raise DimensionMismatch(f"{amp.size} amplitudes is not a {n_qubits}-qubit state")
    keep = sorted(keep)
    traced = [k for k in range(n_qubits) if k not in keep]
    psi = amp.reshape([2] * n_qubits)
    rho = np.tensordot(psi, psi.conj(), axes=(traced, traced))
    dim = 2 ** len(keep)
    return rho.reshape(dim, dim)
