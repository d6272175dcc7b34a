"""Analytic edge modes and symmetry operators of the driven chain.

Every construction here is an explicit dense matrix, and every defining
relation (conjugation phase, square, fourth power, exchange algebra) is a
matrix identity that the test suite checks to 1e-9 or better.

Conventions
-----------
A mode with quasienergy phase ``x`` (= epsilon*T) satisfies
``U† psi U = exp(-i x) psi``; modes are labelled by this property, so the
``+pi/2`` member always conjugates to ``-i`` times itself.  Main-line
(ideal-point) modes live in the rotated frame of
:func:`z4chain.chain_model.build_rotated_floquet`; the solvable-case modes
(zero Zeeman field, noninteracting, zero pairing) live in the lab frame of
:func:`z4chain.chain_model.build_floquet`.  Cross-frame comparisons must
conjugate by :func:`z4chain.chain_model.rotation_R` explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import FockOperator, dagger, fnorm, majorana_product

PHASE_ZERO = 0.0
PHASE_PI = math.pi
PHASE_PLUS = math.pi / 2
PHASE_MINUS = -math.pi / 2

_PREF = np.exp(1j * math.pi / 4) / math.sqrt(2)


@dataclass(frozen=True)
class ModeCandidate:
    """An operator claimed to shift quasienergy by ``target_phase``.

    ``claimed_order`` is 4 for a parafermion (unitary square, fourth power
    one) and 2 for an ordinary fermion (nilpotent square).
    """

    operator: FockOperator
    target_phase: float
    claimed_order: int
    side: str

    def __post_init__(self):
        allowed = (PHASE_ZERO, PHASE_PI, PHASE_PLUS, PHASE_MINUS)
        if not any(abs(self.target_phase - a) < 1e-12 for a in allowed):
            raise ValueError(f"target phase must be one of 0, +-pi/2, pi; got {self.target_phase}")
        if self.claimed_order not in (0, 2, 4):
            raise ValueError("claimed_order must be 2, 4, or 0 (no order claim)")
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")


@dataclass(frozen=True)
class ModeReport:
    """Residuals of the defining relations of a mode candidate."""

    conjugation_residual: float
    square_norm: float
    fourth_power_residual: float
    unitarity_defect: float


@dataclass(frozen=True)
class LogicalQubitSet:
    """Edge Majorana quartet and the two nonlocal logical qubits built on it."""

    gamma_left: tuple[FockOperator, FockOperator]
    gamma_right: tuple[FockOperator, FockOperator]
    x1: FockOperator
    z1: FockOperator
    x2: FockOperator
    z2: FockOperator


# ---------------------------------------------------------------------------
# Edge Majorana building blocks
# ---------------------------------------------------------------------------

def edge_majoranas(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(gamma1_left, gamma2_left, gamma1_right, gamma2_right): the four
    operators that the bond factor of the rotated Floquet operator leaves
    invariant.  Each is Hermitian and squares to one."""
    g1l = majorana_product([("A", 1, +1)], N)
    g2l = majorana_product([("A", 1, +1), ("B", 1, +1), ("A", 1, -1)], N, coeff=1j)
    g1r = majorana_product([("B", N, -1)], N)
    g2r = majorana_product([("B", N, +1), ("A", N, -1), ("B", N, -1)], N, coeff=1j)
    return g1l, g2l, g1r, g2r


def ideal_left_modes(N: int) -> tuple[ModeCandidate, ModeCandidate]:
    """Left-edge parafermion pair at the ideal point (rotated frame).

    Returns the (+pi/2, -pi/2) pair.  The +pi/2 member squares to
    ``i gamma_B(1,+1) gamma_A(1,-1)`` and the -pi/2 member to its adjoint;
    both have fourth power one.
    """
    g1l, g2l, _, _ = edge_majoranas(N)
    plus = _PREF * (g1l + 1j * g2l)
    minus = _PREF * (g1l - 1j * g2l)
    return (
        ModeCandidate(FockOperator(plus, "psiL(+pi/2)"), PHASE_PLUS, 4, "left"),
        ModeCandidate(FockOperator(minus, "psiL(-pi/2)"), PHASE_MINUS, 4, "left"),
    )


def ideal_right_modes(N: int) -> tuple[ModeCandidate, ModeCandidate]:
    """Right-edge parafermion pair at the ideal point (rotated frame).

    The +pi/2 member squares to ``i gamma_B(N,+1) gamma_A(N,-1)``.
    """
    _, _, g1r, g2r = edge_majoranas(N)
    plus = _PREF * (g1r + 1j * g2r)
    minus = _PREF * (g1r - 1j * g2r)
    return (
        ModeCandidate(FockOperator(plus, "psiR(+pi/2)"), PHASE_PLUS, 4, "right"),
        ModeCandidate(FockOperator(minus, "psiR(-pi/2)"), PHASE_MINUS, 4, "right"),
    )


# ---------------------------------------------------------------------------
# Symmetry operators
# ---------------------------------------------------------------------------

def global_z2_operator(N: int) -> FockOperator:
    """Product of all four Majorana partners on every site; equals total
    fermion parity up to the sign ``(-1)^N``.  Hermitian, squares to one."""
    dim = 4**N
    out = np.eye(dim, dtype=complex)
    for j in range(1, N + 1):
        out = out @ majorana_product(
            [("A", j, +1), ("B", j, +1), ("A", j, -1), ("B", j, -1)], N
        )
    return FockOperator(out, label="Q2")


def _spin_up_parity_string(N: int) -> np.ndarray:
    out = np.eye(4**N, dtype=complex)
    for j in range(1, N + 1):
        out = out @ majorana_product([("A", j, +1), ("B", j, +1)], N, coeff=1j)
    return out


def _sector_flip(j: int, b: float, N: int) -> np.ndarray:
    # -1 phase on the joint eigenspace  i*gB(j,+)gA(j,-) = -1,  i*gB(j,-)gA(j,+) = b
    dim = 4**N
    eye = np.eye(dim)
    p1 = majorana_product([("B", j, +1), ("A", j, -1)], N, coeff=1j)
    p2 = majorana_product([("B", j, -1), ("A", j, +1)], N, coeff=1j)
    pa = (eye - p1) / 2.0
    pb = (eye + b * p2) / 2.0
    return eye - 2.0 * (pa @ pb)


def z4_symmetry(N: int, k: int) -> FockOperator:
    """The k-th Z4 symmetry of the rotated ideal-case Floquet operator.

    Built from on-site spin-mixing sector phase flips times the spin-up
    Majorana parity string.  The flipped sector sits at site k for odd N
    and at the adjacent pair (k, k+1 mod N) for even N; the number of
    flipped sites must be even (odd) for even (odd) N for the product to
    commute with the Floquet operator.  Squares to +-``Q2``; fourth power
    is the identity.
    """
    if not (1 <= k <= N):
        raise ValueError(f"k must lie in [1, {N}]")
    flips = {k} if N % 2 == 1 else {k, (k % N) + 1}
    out = np.eye(4**N, dtype=complex)
    for j in range(1, N + 1):
        out = out @ _sector_flip(j, -1.0 if j in flips else +1.0, N)
    return FockOperator(out @ _spin_up_parity_string(N), label=f"Q4[{k}]")


def symmetry_operators(N: int) -> tuple[FockOperator, list[FockOperator]]:
    """The global Z2 operator and the N-member Z4 family."""
    return global_z2_operator(N), [z4_symmetry(N, k) for k in range(1, N + 1)]


def partner_right_modes(N: int) -> tuple[ModeCandidate, ModeCandidate]:
    """Right modes dressed by ``Q4[1] Q2``; these obey the Z4 exchange
    algebra ``psiL(+-) tilde(+-) = (-+i) tilde(+-) psiL(+-)`` with the left
    modes while remaining exact +-pi/2 modes."""
    q2 = global_z2_operator(N).matrix
    q41 = z4_symmetry(N, 1).matrix
    rp, rm = ideal_right_modes(N)
    return (
        ModeCandidate(FockOperator(q41 @ q2 @ rp.operator.matrix, "tilde_psiR(+pi/2)"), PHASE_PLUS, 4, "right"),
        ModeCandidate(FockOperator(q41 @ q2 @ rm.operator.matrix, "tilde_psiR(-pi/2)"), PHASE_MINUS, 4, "right"),
    )


def qudit_operators(N: int) -> tuple[FockOperator, FockOperator]:
    """Nonlocal four-state observables ``psiL(+-pi/2) tilde_psiR(-+pi/2)``.

    Each commutes with the Floquet operator and with every Z4 symmetry
    member, and its eigenvalues lie in {1, -1, i, -i}.
    """
    lp, lm = ideal_left_modes(N)
    tp, tm = partner_right_modes(N)
    d_plus = lp.operator.matrix @ tm.operator.matrix
    d_minus = lm.operator.matrix @ tp.operator.matrix
    return (
        FockOperator(d_plus, label="qudit(+)"),
        FockOperator(d_minus, label="qudit(-)"),
    )


def logical_qubits(N: int) -> LogicalQubitSet:
    """Edge-Majorana logical operators of the two decoupled dressed chains."""
    g1l, g2l, g1r, g2r = edge_majoranas(N)
    return LogicalQubitSet(
        gamma_left=(FockOperator(g1l, "gamma1_L"), FockOperator(g2l, "gamma2_L")),
        gamma_right=(FockOperator(g1r, "gamma1_R"), FockOperator(g2r, "gamma2_R")),
        x1=FockOperator(1j * g1l @ g1r, "X1"),
        z1=FockOperator(g1l @ g2l, "Z1"),
        x2=FockOperator(g1l @ g2l @ g1r @ g2r, "X2"),
        z2=FockOperator(g2l, "Z2"),
    )


# ---------------------------------------------------------------------------
# Solvable-case modes (lab frame)
# ---------------------------------------------------------------------------

def zero_field_modes(N: int) -> tuple[ModeCandidate, ModeCandidate, ModeCandidate, ModeCandidate]:
    """Zero, pi and nilpotent +-pi/2 modes at the zero-Zeeman-field point.

    Returns (zero, pi, +pi/2, -pi/2).  The four Majorana strings entering
    the superpositions are the orbit of gamma_A(1,+1) under one-period
    conjugation; the +-pi/2 members square to zero (ordinary fermions).
    """
    xa = majorana_product([("A", 1, +1)], N)
    xb = majorana_product([("B", 2, +1), ("A", 2, -1), ("B", 1, -1)], N)
    xc = majorana_product([("B", 2, +1), ("A", 2, -1), ("A", 1, +1), ("B", 1, +1), ("A", 1, -1)], N)
    xd = majorana_product([("A", 1, -1), ("B", 1, +1), ("B", 1, -1)], N)
    zero = 0.5 * (xa + 1j * xb + xc + 1j * xd)
    pi_m = 0.5 * (xa - 1j * xb + xc - 1j * xd)
    plus = 0.5 * (-xa - xb + xc + xd)
    minus = 0.5 * (xa - xb - xc + xd)
    return (
        ModeCandidate(FockOperator(zero, "gamma0(zero-field)"), PHASE_ZERO, 2, "left"),
        ModeCandidate(FockOperator(pi_m, "gamma_pi(zero-field)"), PHASE_PI, 2, "left"),
        ModeCandidate(FockOperator(plus, "gamma(+pi/2, zero-field)"), PHASE_PLUS, 2, "left"),
        ModeCandidate(FockOperator(minus, "gamma(-pi/2, zero-field)"), PHASE_MINUS, 2, "left"),
    )


def cycle_matrix_zero_field() -> np.ndarray:
    """Companion matrix of the four-string conjugation cycle underlying the
    zero-field modes; its eigenvalues are the four mode phases."""
    return np.array(
        [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]], dtype=complex
    )


def noninteracting_modes(N: int) -> tuple[ModeCandidate, ModeCandidate]:
    """Nilpotent +-pi/2 modes of the noninteracting point:
    ``gamma_A(1,+1) +- i gamma_A(1,-1)``."""
    xa = majorana_product([("A", 1, +1)], N)
    xam = majorana_product([("A", 1, -1)], N)
    return (
        ModeCandidate(FockOperator(xa + 1j * xam, "gammaNI(+pi/2)"), PHASE_PLUS, 2, "left"),
        ModeCandidate(FockOperator(xa - 1j * xam, "gammaNI(-pi/2)"), PHASE_MINUS, 2, "left"),
    )


def zero_pairing_modes(N: int):
    """Zero and pi modes at the hopping-only (zero-pairing) point.

    Returns (alpha_zero, alpha_pi, beta_zero, beta_pi, c_zero, c_pi).  The
    alpha/beta members are projected Majoranas whose square is twice a
    single Majorana times themselves (not proportional to themselves); the
    complex combinations c are genuinely nilpotent zero and pi modes.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    a11 = majorana_product([("A", 1, +1)], N)
    abb = majorana_product([("A", 1, +1), ("B", 1, +1), ("B", 2, +1)], N, coeff=1j)
    a21 = majorana_product([("A", 2, +1)], N)
    bab = majorana_product([("B", 1, +1), ("A", 2, +1), ("B", 2, +1)], N, coeff=1j)
    alpha_zero = a11 - abb
    alpha_pi = a11 + abb
    beta_zero = a21 + bab
    beta_pi = a21 - bab
    c_zero = alpha_zero + 1j * beta_zero
    c_pi = alpha_pi + 1j * beta_pi
    mk = lambda m, lbl, ph, order: ModeCandidate(FockOperator(m, lbl), ph, order, "left")
    return (
        mk(alpha_zero, "gamma_alpha(0)", PHASE_ZERO, 0),
        mk(alpha_pi, "gamma_alpha(pi)", PHASE_PI, 0),
        mk(beta_zero, "gamma_beta(0)", PHASE_ZERO, 0),
        mk(beta_pi, "gamma_beta(pi)", PHASE_PI, 0),
        mk(c_zero, "c(0)", PHASE_ZERO, 2),
        mk(c_pi, "c(pi)", PHASE_PI, 2),
    )


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

def verify_mode(U: FockOperator, cand: ModeCandidate) -> ModeReport:
    """Residuals of the defining relations of ``cand`` against ``U``.

    The conjugation residual is ``|U† psi U - exp(-i x) psi| / |psi|``.
    ``square_norm`` is ``|psi^2|`` scaled so a unitary square reports 1;
    ``fourth_power_residual`` is meaningful for claimed order 4.
    """
    u = U.matrix if isinstance(U, FockOperator) else np.asarray(U)
    psi = cand.operator.matrix
    if u.shape != psi.shape:
        raise ValueError("operator and unitary dimensions differ")
    dim = u.shape[0]
    conj = dagger(u) @ psi @ u
    conj_res = fnorm(conj - np.exp(-1j * cand.target_phase) * psi) / max(fnorm(psi), 1e-300)
    sq = psi @ psi
    square_norm = fnorm(sq) / math.sqrt(dim)
    fourth = fnorm(sq @ sq - np.eye(dim)) / math.sqrt(dim)
    unit = fnorm(psi @ dagger(psi) - np.eye(dim)) / math.sqrt(dim)
    return ModeReport(
        conjugation_residual=conj_res,
        square_norm=square_norm,
        fourth_power_residual=fourth,
        unitarity_defect=unit,
    )
