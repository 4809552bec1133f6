"""GHZ-orbit invariance, the non-local swap rotator, and the d x d trace condition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .bipartite import PureState3Q, apply_local, check_schmidt_pair, make_psi0
from .conditions import ConditionResidual
from .errors import BadSchmidtPair, DimensionMismatch, NotSpecialUnitary
from .su2 import (
    IDENTITY,
    PAULIS,
    PREDICATE_TOL,
    SU2Element,
    axis_rotation,
    haar_sample,
    su2_compose,
    su2_to_matrix,
)

__all__ = [
    "EulerSU2",
    "ghz",
    "euler_unitary",
    "ghz_orbit_state",
    "eta_pair",
    "v23_columns",
    "v23_matrix",
    "ghz_via_v23",
    "ghz_rotation_amount",
    "verify_ghz_invariance",
    "solve_ghz_angles",
    "SWAP",
    "SWAP_SU4",
    "PHI_PLUS",
    "PSI_PLUS",
    "PSI_MINUS",
    "SwapBracket",
    "swap_amount",
    "swap_bracket",
    "swap_condition",
    "swap_symmetry_condition",
    "sample_swap_matched_pair",
    "sample_swap_symmetric_pair",
    "haar_special_unitary",
    "commuting_special_unitary",
    "dxd_condition",
    "DEFAULT_MAX_DIM",
]

DEFAULT_MAX_DIM = 8


@dataclass(frozen=True)
class EulerSU2:
    alpha: float
    gamma: float
    delta: float

    @classmethod
    def random(cls, rng: np.random.Generator) -> EulerSU2:
        return cls(*rng.uniform(0.0, 2 * np.pi, size=3))

    def matrix(self) -> np.ndarray:
        return euler_unitary(self)


def euler_unitary(e: EulerSU2) -> np.ndarray:
    """``[[e^{i d} cos a, e^{i g} sin a], [-e^{-i g} sin a, e^{-i d} cos a]]``."""
    ca, sa = np.cos(e.alpha), np.sin(e.alpha)
    return np.array(
        [
            [np.exp(1j * e.delta) * ca, np.exp(1j * e.gamma) * sa],
            [-np.exp(-1j * e.gamma) * sa, np.exp(-1j * e.delta) * ca],
        ],
        dtype=complex,
    )


def ghz() -> PureState3Q:
    amp = np.zeros(8, dtype=complex)
    amp[0] = amp[7] = 1 / np.sqrt(2)
    return PureState3Q(amp)


def ghz_orbit_state(e1: EulerSU2, e2: EulerSU2, e3: EulerSU2) -> PureState3Q:
    op = np.kron(np.kron(euler_unitary(e1), euler_unitary(e2)), euler_unitary(e3))
    amp = op @ ghz().amp
    return PureState3Q(amp / np.linalg.norm(amp))


def eta_pair(e: EulerSU2) -> tuple[np.ndarray, np.ndarray]:
    """``(|eta>, |eta_bar>)``: the two columns of :func:`euler_unitary`."""
    ca, sa = np.cos(e.alpha), np.sin(e.alpha)
    eta = np.array([np.exp(1j * e.delta) * ca, -np.exp(-1j * e.gamma) * sa])
    eta_bar = np.array([np.exp(1j * e.gamma) * sa, np.exp(-1j * e.delta) * ca])
    return eta, eta_bar


def v23_columns(e1: EulerSU2, e2: EulerSU2, e3: EulerSU2) -> tuple[np.ndarray, np.ndarray]:
    """Images ``V23|00>`` and ``V23|11>`` of the two-qubit unitary carrying the orbit."""
    eta2, bar2 = eta_pair(e2)
    eta3, bar3 = eta_pair(e3)
    same, flipped = np.kron(eta2, eta3), np.kron(bar2, bar3)
    ca, sa = np.cos(e1.alpha), np.sin(e1.alpha)
    col00 = np.exp(1j * e1.delta) * ca * same + np.exp(1j * e1.gamma) * sa * flipped
    col11 = -np.exp(-1j * e1.gamma) * sa * same + np.exp(-1j * e1.delta) * ca * flipped
    return col00, col11


def v23_matrix(e1: EulerSU2, e2: EulerSU2, e3: EulerSU2) -> np.ndarray:
    """A 4x4 unitary with the prescribed ``|00>``, ``|11>`` columns (others: any orthonormal completion)."""
    col00, col11 = v23_columns(e1, e2, e3)
    q, _ = np.linalg.qr(np.column_stack([col00, col11]), mode="complete")
    return np.column_stack([col00, q[:, 2], q[:, 3], col11])


def ghz_via_v23(e1: EulerSU2, e2: EulerSU2, e3: EulerSU2) -> PureState3Q:
    """``(I x V23)|GHZ>``."""
    amp = np.kron(IDENTITY, v23_matrix(e1, e2, e3)) @ ghz().amp
    return PureState3Q(amp / np.linalg.norm(amp))


def ghz_rotation_amount(alpha_p: float, delta_p: float, phi: float) -> complex:
    """``e^{i phi} cos(alpha') cos(delta')``."""
    return complex(np.exp(1j * phi) * np.cos(alpha_p) * np.cos(delta_p))


def verify_ghz_invariance(
    e1: EulerSU2,
    e2: EulerSU2,
    e3: EulerSU2,
    alpha_p: float,
    gamma_p: float,
    delta_p: float,
    phi: float,
    tol: float = PREDICATE_TOL,
) -> ConditionResidual:
    psi = ghz_orbit_state(e1, e2, e3).amp
    a = np.exp(1j * phi) * euler_unitary(EulerSU2(alpha_p, gamma_p, delta_p))
    op = np.kron(a, np.eye(4))
    value = np.vdot(psi, op @ psi)
    return ConditionResidual(abs(value - ghz_rotation_amount(alpha_p, delta_p, phi)), tol)


def solve_ghz_angles(theta: float) -> tuple[float, float]:
    """Canonical ``(alpha', delta') = (theta, 0)`` with ``cos alpha' cos delta' = cos theta``."""
    return float(theta), 0.0


SWAP = 0.5 * (np.eye(4, dtype=complex) + sum(np.kron(s, s) for s in PAULIS))
SWAP_SU4 = np.exp(1j * np.pi / 4) * SWAP
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
_KET00 = np.array([1, 0, 0, 0], dtype=complex)
_KET11 = np.array([0, 0, 0, 1], dtype=complex)


def swap_amount(u: SU2Element, v: SU2Element, l0: float, l1: float) -> complex:
    """``<psi|e^{i pi/4} SWAP|psi>`` for ``psi = (u x v) psi0``, by direct 4x4 evaluation."""
    psi = apply_local(u, v, make_psi0(l0, l1)).amp
    return complex(np.vdot(psi, SWAP_SU4 @ psi))


@dataclass(frozen=True)
class SwapBracket:
    """Weighted overlaps ``|<phi+|(U x B)|b>|^2`` for ``b`` in ``|00>, |11>, |psi+>, |psi->``.

    ``partner`` names ``B``: ``"transpose"`` uses ``V^T``, ``"conjugate"``
    uses ``V^*``. Only the conjugate partner satisfies
    ``swap_amount == 2 e^{i pi/4} value`` in general.
    """

    l0: float
    l1: float
    t00: float
    t11: float
    t_psi_plus: float
    t_psi_minus: float
    partner: str

    @property
    def value(self) -> float:
        cross = self.l0 * self.l1
        return (
            self.l0**2 * self.t00
            + self.l1**2 * self.t11
            + cross * self.t_psi_plus
            - cross * self.t_psi_minus
        )


def swap_bracket(
    u: SU2Element, v: SU2Element, l0: float, l1: float, partner: str = "transpose"
) -> SwapBracket:
    check_schmidt_pair(l0, l1)
    vm = su2_to_matrix(v)
    if partner == "transpose":
        second = vm.T
    elif partner == "conjugate":
        second = vm.conj()
    else:
        raise ValueError(f"partner must be 'transpose' or 'conjugate', got {partner!r}")
    row = PHI_PLUS.conj() @ np.kron(su2_to_matrix(u), second)
    t = [float(abs(row @ b) ** 2) for b in (_KET00, _KET11, PSI_PLUS, PSI_MINUS)]
    return SwapBracket(l0, l1, *t, partner=partner)


def swap_condition(u: SU2Element, v: SU2Element, tol: float = PREDICATE_TOL) -> ConditionResidual:
    """``max(|r^U_x - r^V_x|, |r^U_y - r^V_y|)``."""
    return ConditionResidual(max(abs(u.x - v.x), abs(u.y - v.y)), tol)


def swap_symmetry_condition(
    u: SU2Element,
    v: SU2Element,
    l0: float | None = None,
    l1: float | None = None,
    tol: float = PREDICATE_TOL,
) -> ConditionResidual:
    """Residual for ``(u x v) psi0`` being swap-symmetric, i.e. amount ``e^{i pi/4}``.

    Symmetry of ``U D V^T`` holds iff ``M = V^dagger U`` satisfies
    ``M D = D M^T``: ``M`` must be a z-rotation (``m_x = m_y = 0``) when
    ``l0 > l1``, while ``m_y = 0`` suffices at ``l0 = l1``.
    """
    m = su2_compose(v.adjoint(), u)
    maximal = l0 is not None and l1 is not None and abs(l0 - l1) <= PREDICATE_TOL
    value = abs(m.y) if maximal else max(abs(m.x), abs(m.y))
    return ConditionResidual(value, tol)


def sample_swap_matched_pair(rng: np.random.Generator) -> tuple[SU2Element, SU2Element]:
    """Haar ``v`` and a ``u`` sharing its x and y quaternion components (random ``r0``/``r_z`` split)."""
    v = haar_sample(rng)
    rest = np.sqrt(max(0.0, 1.0 - v.x**2 - v.y**2))
    a = rng.uniform(0.0, 2 * np.pi)
    u = SU2Element.from_quaternion([rest * np.cos(a), v.x, v.y, rest * np.sin(a)], normalize=True)
    return u, v


def sample_swap_symmetric_pair(rng: np.random.Generator) -> tuple[SU2Element, SU2Element]:
    """Haar ``v`` and ``u = V Z(a)``, which makes ``(u x v) psi0`` swap-symmetric for every Schmidt pair."""
    v = haar_sample(rng)
    u = su2_compose(v, axis_rotation([0.0, 0.0, 1.0], rng.uniform(0.0, 2 * np.pi)))
    return u, v


def haar_special_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed element of SU(d): QR of a complex Ginibre matrix, phase-fixed."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))
    return q / np.linalg.det(q) ** (1.0 / d)


def commuting_special_unitary(w, rng: np.random.Generator) -> np.ndarray:
    """Random element of SU(d) diagonal in an eigenbasis of the unitary ``w``."""
    w = np.asarray(w, dtype=complex)
    _, z = schur(w, output="complex")
    d = w.shape[0]
    angles = rng.uniform(0.0, 2 * np.pi, size=d)
    angles[-1] = -angles[:-1].sum()
    return z @ np.diag(np.exp(1j * angles)) @ z.conj().T


def _check_special_unitary(m, d: int, name: str, tol: float) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (d, d):
        raise DimensionMismatch(f"{name} has shape {m.shape}, expected ({d}, {d})")
    err = np.max(np.abs(m.conj().T @ m - np.eye(d)))
    det_err = abs(np.linalg.det(m) - 1.0)
    if err > tol or det_err > tol:
        raise NotSpecialUnitary(f"{name} not in SU({d}): unitarity {err:.3g}, det {det_err:.3g}")
    return m


def dxd_condition(
    w1,
    w2,
    u,
    v,
    dvals,
    tol: float = PREDICATE_TOL,
    max_dim: int = DEFAULT_MAX_DIM,
) -> ConditionResidual:
    """``|Tr[W1 C W2^T C^dagger] - Tr[W1 D W2^T D]|`` with ``C = U D V^T``."""
    dvals = np.asarray(dvals, dtype=float).ravel()
    d = dvals.size
    if d < 2 or d > max_dim:
        raise DimensionMismatch(f"dimension {d} outside [2, {max_dim}]")
    if np.any(dvals < -PREDICATE_TOL) or np.any(np.diff(dvals) > PREDICATE_TOL):
        raise BadSchmidtPair("Schmidt values must be non-negative and descending")
    if abs(dvals @ dvals - 1.0) > PREDICATE_TOL:
        raise BadSchmidtPair(f"sum of squared Schmidt values is {dvals @ dvals!r}")
    w1, w2, u, v = (
        _check_special_unitary(m, d, name, PREDICATE_TOL)
        for m, name in ((w1, "w1"), (w2, "w2"), (u, "u"), (v, "v"))
    )
    dm = np.diag(dvals).astype(complex)
    c = u @ dm @ v.T
    moved = np.trace(w1 @ c @ w2.T @ c.conj().T)
    target = np.trace(w1 @ dm @ w2.T @ dm)
    return ConditionResidual(abs(moved - target), tol)
