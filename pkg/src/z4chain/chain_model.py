"""Five-step driven spinful p-wave chain: Hamiltonians and Floquet operators.

One driving period of length ``T`` is split into five equal steps.  With
sites labelled 1..N and spins s = +-1:

* step 1: on-site potentials ``s*mu*n`` on even sites, minus spin-flip
  (Zeeman) terms ``J1 (c†_{j,+} c_{j,-} + h.c.)`` on odd sites,
* step 2: Kitaev couplings (hopping -J2 and pairing Delta on bond
  ``j -> j+1``) for spin +1 on odd bonds and spin -1 on even bonds,
* step 3: Hubbard interaction ``U n_{j,+} n_{j,-}`` on every site,
* step 4: step 2 with the two spin assignments exchanged,
* step 5: on-site potentials on odd sites plus Zeeman terms on even sites.

A bond is odd/even according to its left site; open boundaries.  Identity
(constant) parts of every term are dropped, so quasienergies are defined up
to a global phase and all mode/spectral checks downstream are built from
phase-insensitive quantities.

The ideal point ``U = 2 mu = 2 J1 = 5 pi/T``, ``J2 = Delta = J`` admits a
rotated frame in which the Floquet operator factorizes into an on-site
gate unitary times two commuting dressed Kitaev chains; the rotation and
both factorizations are constructed here and verified exactly in the test
suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .algebra import (
    SPIN_DOWN,
    SPIN_UP,
    SPINS,
    FockOperator,
    ModeIndex,
    dagger,
    exp_of_antihermitian,
    fermion_annihilation,
    fnorm,
    majorana_product,
    number_operator,
    parity_operator,
    unitary_exponential,
)

PARAMETER_FAMILIES = ("mu", "J1", "J2", "Delta", "U")

#: Sweep axes understood by :func:`with_axis_value`.
SWEEP_AXES = ("J1", "mu", "U", "delta")

_SPIN_COL = {SPIN_UP: 0, SPIN_DOWN: 1}


@dataclass(frozen=True, eq=False)
class DriveParameters:
    """All per-site couplings of one drive configuration.

    ``mu``, ``J2`` and ``Delta`` are (N, 2) arrays over (site, spin) with
    spin +1 in column 0; ``J1`` and ``U`` are (N,) arrays.
    """

    N: int
    T: float
    mu: np.ndarray
    J1: np.ndarray
    J2: np.ndarray
    Delta: np.ndarray
    U: np.ndarray

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ValueError("T must be positive and finite")
        coerce = lambda a, shape: np.ascontiguousarray(np.broadcast_to(np.asarray(a, dtype=float), shape))
        object.__setattr__(self, "mu", coerce(self.mu, (self.N, 2)))
        object.__setattr__(self, "J1", coerce(self.J1, (self.N,)))
        object.__setattr__(self, "J2", coerce(self.J2, (self.N, 2)))
        object.__setattr__(self, "Delta", coerce(self.Delta, (self.N, 2)))
        object.__setattr__(self, "U", coerce(self.U, (self.N,)))
        for name in PARAMETER_FAMILIES:
            if not np.isfinite(getattr(self, name)).all():
                raise ValueError(f"non-finite entries in {name}")
        for arr in (self.mu, self.J1, self.J2, self.Delta, self.U):
            arr.flags.writeable = False

    @classmethod
    def uniform(cls, N, T, mu=0.0, J1=0.0, J2=0.0, Delta=0.0, U=0.0):
        return cls(N=N, T=T, mu=mu, J1=J1, J2=J2, Delta=Delta, U=U)

    def family(self, name: str) -> np.ndarray:
        if name not in PARAMETER_FAMILIES:
            raise ValueError(f"unknown parameter family {name!r}")
        return getattr(self, name)

    def replace_families(self, **families) -> "DriveParameters":
        return replace(self, **families)


@dataclass(frozen=True)
class DisorderSpec:
    """Uniform box disorder around a clean parameter point.

    ``widths`` maps parameter-family names to half-widths; every per-site
    (and per-spin) entry is drawn independently from
    ``[p - width, p + width]``.  Sampling is deterministic given
    ``(seed, realization_index)`` and independent of evaluation order.
    """

    widths: Mapping[str, float]
    seed: int = 0
    realizations: int = 1

    def __post_init__(self):
        object.__setattr__(self, "widths", dict(self.widths))
        for name, w in self.widths.items():
            if name not in PARAMETER_FAMILIES:
                raise ValueError(f"unknown parameter family {name!r}")
            if w < 0:
                raise ValueError("half-widths must be >= 0")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")

    @classmethod
    def isotropic(cls, w: float, seed: int = 0, realizations: int = 1) -> "DisorderSpec":
        return cls(widths={name: w for name in PARAMETER_FAMILIES}, seed=seed, realizations=realizations)


# ---------------------------------------------------------------------------
# Canonical parameter points
# ---------------------------------------------------------------------------

def ideal_parameters(N: int, J: float, T: float) -> DriveParameters:
    """The exactly solvable interacting point ``U = 2 mu = 2 J1 = 5 pi/T``,
    ``J2 = Delta = J``."""
    if N < 2:
        raise ValueError("N must be >= 2")
    u = 5.0 * math.pi / T
    return DriveParameters.uniform(N, T, mu=u / 2, J1=u / 2, J2=J, Delta=J, U=u)


SOLVABLE_CASES = ("zero_field", "noninteracting", "zero_pairing")


def solvable_parameters(case: str, N: int, T: float, J: float | None = None) -> DriveParameters:
    """One of the three additional solvable points.

    ``zero_field``:     J1 = 0,  U = 2 mu = 4 J2 = 4 Delta = 5 pi/T.
    ``noninteracting``: U = 0,   mu = J1 = 5 pi/(2T), J2 = Delta = J.
    ``zero_pairing``:   Delta = 0, J2 = mu = J1 = 5 pi/(2T), U = 5 pi/T.

    ``J`` is only meaningful for the noninteracting case and defaults to
    ``5 pi/(4T)`` (the same bond strength the other two cases carry).
    """
    u = 5.0 * math.pi / T
    if case == "zero_field":
        return DriveParameters.uniform(N, T, mu=u / 2, J1=0.0, J2=u / 4, Delta=u / 4, U=u)
    if case == "noninteracting":
        j = u / 4 if J is None else J
        return DriveParameters.uniform(N, T, mu=u / 2, J1=u / 2, J2=j, Delta=j, U=0.0)
    if case == "zero_pairing":
        return DriveParameters.uniform(N, T, mu=u / 2, J1=u / 2, J2=u / 2, Delta=0.0, U=u)
    raise ValueError(f"unknown solvable case {case!r}; expected one of {SOLVABLE_CASES}")


def with_axis_value(params: DriveParameters, axis: str, value: float) -> DriveParameters:
    """Return a copy of ``params`` with one sweep axis set to ``value``.

    ``delta`` sets the hopping/pairing imbalance ``(J2 - Delta)/2`` while
    preserving the mean ``(J2 + Delta)/2`` per site and spin.
    """
    if axis == "J1":
        return params.replace_families(J1=np.full(params.N, value))
    if axis == "mu":
        return params.replace_families(mu=np.full((params.N, 2), value))
    if axis == "U":
        return params.replace_families(U=np.full(params.N, value))
    if axis == "delta":
        center = (params.J2 + params.Delta) / 2.0
        return params.replace_families(J2=center + value, Delta=center - value)
    raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def interpolate_parameters(a: DriveParameters, b: DriveParameters, t: float) -> DriveParameters:
    """Linear interpolation ``(1-t) a + t b`` of every coupling family."""
    if a.N != b.N or a.T != b.T:
        raise ValueError("endpoints must share N and T")
    fams = {
        name: (1.0 - t) * a.family(name) + t * b.family(name)
        for name in PARAMETER_FAMILIES
    }
    return a.replace_families(**fams)


def sample_disorder(spec: DisorderSpec, base: DriveParameters, realization_index: int) -> DriveParameters:
    """Draw one disorder realization around ``base``.

    The random stream is derived from ``(spec.seed, realization_index)``, so
    realizations are reproducible and order-independent.
    """
    if realization_index < 0:
        raise ValueError("realization_index must be >= 0")
    rng = np.random.default_rng([int(spec.seed) & 0xFFFFFFFFFFFFFFFF, int(realization_index)])
    fams = {}
    for name in PARAMETER_FAMILIES:
        arr = base.family(name)
        w = float(spec.widths.get(name, 0.0))
        # Draw even when w == 0 to keep the stream layout independent of widths.
        noise = rng.uniform(-1.0, 1.0, size=arr.shape)
        fams[name] = arr + w * noise
    return base.replace_families(**fams)


# ---------------------------------------------------------------------------
# Step Hamiltonians and the Floquet operator
# ---------------------------------------------------------------------------

def _onsite_term(params: DriveParameters, site: int, N: int) -> np.ndarray:
    """sum_s s*mu[site,s]*(n - 1/2), identity part dropped."""
    dim = 4**N
    out = np.zeros((dim, dim), dtype=complex)
    half = 0.5 * np.eye(dim)
    for s in SPINS:
        n = number_operator(ModeIndex(site, s), N).matrix
        out += s * params.mu[site - 1, _SPIN_COL[s]] * (n - half)
    return out


def _zeeman_term(params: DriveParameters, site: int, N: int) -> np.ndarray:
    """J1[site] * (c†_{site,+} c_{site,-} + h.c.)."""
    c_up = fermion_annihilation(ModeIndex(site, SPIN_UP), N).matrix
    c_dn = fermion_annihilation(ModeIndex(site, SPIN_DOWN), N).matrix
    hop = dagger(c_up) @ c_dn
    return params.J1[site - 1] * (hop + dagger(hop))


def _kitaev_term(params: DriveParameters, bond: int, spin: int, N: int) -> np.ndarray:
    """-J2 c†_{b+1,s} c_{b,s} + Delta c†_{b+1,s} c†_{b,s} + h.c. on bond b."""
    col = _SPIN_COL[spin]
    c_l = fermion_annihilation(ModeIndex(bond, spin), N).matrix
    c_r = fermion_annihilation(ModeIndex(bond + 1, spin), N).matrix
    hop = -params.J2[bond - 1, col] * (dagger(c_r) @ c_l)
    pair = params.Delta[bond - 1, col] * (dagger(c_r) @ dagger(c_l))
    return hop + pair + dagger(hop) + dagger(pair)


def _hubbard_term(params: DriveParameters, site: int, N: int) -> np.ndarray:
    """U[site] * (n_+ n_-  - 1/4), identity part dropped."""
    dim = 4**N
    n_up = number_operator(ModeIndex(site, SPIN_UP), N).matrix
    n_dn = number_operator(ModeIndex(site, SPIN_DOWN), N).matrix
    return params.U[site - 1] * (n_up @ n_dn - 0.25 * np.eye(dim))


def build_step_hamiltonians(params: DriveParameters) -> list[FockOperator]:
    """The five step Hamiltonians as dense Hermitian matrices.

    Step 1 carries on-site terms on even sites and minus-sign Zeeman terms
    on odd sites; step 5 the reverse with a plus sign.  Steps 2 and 4 carry
    each Kitaev bond once, assigned by the parity of the bond's left site.
    """
    N = params.N
    dim = 4**N
    zeros = lambda: np.zeros((dim, dim), dtype=complex)

    h1, h2, h3, h4, h5 = zeros(), zeros(), zeros(), zeros(), zeros()
    for site in range(1, N + 1):
        if site % 2 == 0:
            h1 += _onsite_term(params, site, N)
            h5 += _zeeman_term(params, site, N)
        else:
            h1 -= _zeeman_term(params, site, N)
            h5 += _onsite_term(params, site, N)
        h3 += _hubbard_term(params, site, N)
    for bond in range(1, N):
        if bond % 2 == 1:
            h2 += _kitaev_term(params, bond, SPIN_UP, N)
            h4 += _kitaev_term(params, bond, SPIN_DOWN, N)
        else:
            h2 += _kitaev_term(params, bond, SPIN_DOWN, N)
            h4 += _kitaev_term(params, bond, SPIN_UP, N)
    return [
        FockOperator(h, label=f"H{k}")
        for k, h in enumerate((h1, h2, h3, h4, h5), start=1)
    ]


def build_floquet(params: DriveParameters) -> FockOperator:
    """One-period evolution operator: the ordered product of the five step
    exponentials, each evolved for T/5 (step 1 applied first)."""
    steps = build_step_hamiltonians(params)
    dt = params.T / 5.0
    u = np.eye(4**params.N, dtype=complex)
    for h in steps:
        u = unitary_exponential(h, dt).matrix @ u
    return FockOperator(u, label="U_T")


def floquet_via_substeps(params: DriveParameters, n_substeps: int = 10_000) -> FockOperator:
    """Time-ordered integration of the piecewise-constant drive on a uniform
    grid; an independent oracle for the step structure of the period."""
    steps = [h.matrix for h in build_step_hamiltonians(params)]
    dt = params.T / n_substeps
    u = np.eye(4**params.N, dtype=complex)
    for k in range(n_substeps):
        t_mid = (k + 0.5) * dt
        h = steps[min(int(5 * t_mid / params.T), 4)]
        u = unitary_exponential(h, dt).matrix @ u
    return FockOperator(u, label="U_T(substeps)")


# ---------------------------------------------------------------------------
# Rotated frame at the ideal point
# ---------------------------------------------------------------------------

def _site_quartic(j: int) -> list[tuple[str, int, int]]:
    return [("A", j, +1), ("B", j, +1), ("A", j, -1), ("B", j, -1)]


def rotation_R(N: int) -> FockOperator:
    """The frame rotation mapping the lab-frame ideal-case Floquet operator
    onto its factorized form.

    Acts site-locally: a quartic phase and both spin-flip rotations on odd
    sites, a half-turn on the spin-up Majorana pair of even sites.  Defined
    for any N >= 2 (the construction is site-wise; even N recovers the
    paired layout).
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    dim = 4**N
    x1 = np.zeros((dim, dim), dtype=complex)
    x2 = np.zeros((dim, dim), dtype=complex)
    x3 = np.zeros((dim, dim), dtype=complex)
    for j in range(1, N + 1):
        if j % 2 == 1:
            x1 += 1j * (math.pi / 4) * majorana_product(_site_quartic(j), N)
            for s in SPINS:
                x2 += (math.pi / 4) * majorana_product([("B", j, s), ("A", j, -s)], N)
        else:
            x3 += (math.pi / 2) * majorana_product([("A", j, +1), ("B", j, +1)], N)
    mat = exp_of_antihermitian(x1) @ exp_of_antihermitian(x2) @ exp_of_antihermitian(x3)
    return FockOperator(mat, label="R")


def gate_factor(N: int) -> FockOperator:
    """On-site gate part of the rotated ideal-case Floquet operator: quartic
    phases, both spin-flip rotations and a spin-up half-turn on every site."""
    dim = 4**N
    x1 = np.zeros((dim, dim), dtype=complex)
    x2 = np.zeros((dim, dim), dtype=complex)
    x3 = np.zeros((dim, dim), dtype=complex)
    for j in range(1, N + 1):
        x1 += 1j * (math.pi / 4) * majorana_product(_site_quartic(j), N)
        for s in SPINS:
            x2 += (math.pi / 4) * majorana_product([("B", j, s), ("A", j, -s)], N)
        x3 += (math.pi / 2) * majorana_product([("A", j, +1), ("B", j, +1)], N)
    mat = exp_of_antihermitian(x1) @ exp_of_antihermitian(x2) @ exp_of_antihermitian(x3)
    return FockOperator(mat, label="Gbar")


def _bond_quartic_up(j: int) -> list[tuple[str, int, int]]:
    # dressed spin-up bond j -> j+1
    return [("B", j, +1), ("A", j + 1, +1), ("A", j, -1), ("B", j, -1)]


def _bond_quartic_down(j: int) -> list[tuple[str, int, int]]:
    # dressed spin-down bond j -> j+1
    return [("B", j, -1), ("A", j + 1, -1), ("A", j + 1, +1), ("B", j + 1, +1)]


def bond_factor(N: int, J: float, T: float) -> FockOperator:
    """Two commuting dressed Kitaev chains: the bond part of the rotated
    ideal-case Floquet operator."""
    dim = 4**N
    theta = J * T / 5.0
    xa = np.zeros((dim, dim), dtype=complex)
    xb = np.zeros((dim, dim), dtype=complex)
    for j in range(1, N):
        xa += 1j * theta * majorana_product(_bond_quartic_up(j), N)
        xb += 1j * theta * majorana_product(_bond_quartic_down(j), N)
    mat = exp_of_antihermitian(xa) @ exp_of_antihermitian(xb)
    return FockOperator(mat, label="S")


def build_rotated_floquet(N: int, J: float, T: float) -> FockOperator:
    """Factorized ideal-case Floquet operator: gate factor times bond factor.

    Equals ``R U_T R†`` with ``U_T`` from :func:`build_floquet` at
    :func:`ideal_parameters` (verified to 1e-9 in the tests).
    """
    mat = gate_factor(N).matrix @ bond_factor(N, J, T).matrix
    return FockOperator(mat, label="U_T(rotated)")


def gate_decomposition(N: int, J: float, T: float) -> tuple[FockOperator, FockOperator, FockOperator]:
    """Three-factor split ``U = G3 G2 G1`` of the rotated Floquet operator:
    G1 the dressed bonds, G2 the spin-up half-turns, G3 the remaining
    on-site rotations.  Used by the edge-mode conjugation chains."""
    dim = 4**N
    g1 = bond_factor(N, J, T).matrix
    x2 = np.zeros((dim, dim), dtype=complex)
    x3a = np.zeros((dim, dim), dtype=complex)
    x3b = np.zeros((dim, dim), dtype=complex)
    x3c = np.zeros((dim, dim), dtype=complex)
    for j in range(1, N + 1):
        x2 += (math.pi / 2) * majorana_product([("A", j, +1), ("B", j, +1)], N)
        x3a += 1j * (math.pi / 4) * majorana_product(_site_quartic(j), N)
        x3b += (math.pi / 4) * majorana_product([("B", j, +1), ("A", j, -1)], N)
        x3c += (math.pi / 4) * majorana_product([("B", j, -1), ("A", j, +1)], N)
    g2 = exp_of_antihermitian(x2)
    g3 = exp_of_antihermitian(x3a) @ exp_of_antihermitian(x3b) @ exp_of_antihermitian(x3c)
    return (
        FockOperator(g1, label="G1"),
        FockOperator(g2, label="G2"),
        FockOperator(g3, label="G3"),
    )


def conjugated_bond_step(N: int, J: float, T: float, step: int, collapsed: bool) -> FockOperator:
    """Image of one Kitaev step under the on-site parts of the rotation.

    ``step`` is 4 or 2 (which drive step's bonds get dressed).  With
    ``collapsed=False`` the five-factor sandwich is built literally: the
    step-4 bonds conjugated by even-site quartics and odd-site on-site
    rotations (daggered factors on the left), or the step-2 bonds
    conjugated by odd-site quartics and even-site rotations (daggered
    factors on the right).  With ``collapsed=True`` the equivalent
    single-exponential of dressed four-Majorana bond terms is built.  Both
    forms agree (tested to 1e-9); N must be even.
    """
    if N % 2 != 0:
        raise ValueError("the sandwich construction pairs sites; N must be even")
    if step not in (2, 4):
        raise ValueError("step must be 2 or 4")
    dim = 4**N
    theta = J * T / 5.0
    zeros = lambda: np.zeros((dim, dim), dtype=complex)

    odd_bonds = range(1, N, 2)
    even_bonds = range(2, N, 2)
    if step == 4:
        quart_sites = range(2, N + 1, 2)
        turn_sites = range(1, N + 1, 2)
        bonds = [[("B", b + 1, -1), ("A", b, -1)] for b in odd_bonds]
        bonds += [[("B", b + 1, +1), ("A", b, +1)] for b in even_bonds]
        dressed = [_bond_quartic_down(b) for b in odd_bonds]
        dressed += [_bond_quartic_up(b) for b in even_bonds]
        dagger_side = "left"
    else:
        quart_sites = range(1, N + 1, 2)
        turn_sites = range(2, N + 1, 2)
        bonds = [[("B", b + 1, +1), ("A", b, +1)] for b in odd_bonds]
        bonds += [[("B", b + 1, -1), ("A", b, -1)] for b in even_bonds]
        dressed = [_bond_quartic_down(b) for b in even_bonds]
        dressed += [_bond_quartic_up(b) for b in odd_bonds]
        dagger_side = "right"

    if collapsed:
        xd = zeros()
        for term in dressed:
            xd += 1j * theta * majorana_product(term, N)
        return FockOperator(exp_of_antihermitian(xd), label=f"dressed_step{step}_collapsed")

    xq = zeros()
    for j in quart_sites:
        xq += 1j * (math.pi / 4) * majorana_product(_site_quartic(j), N)
    xt = zeros()
    for j in turn_sites:
        for s in SPINS:
            xt += (math.pi / 4) * majorana_product([("A", j, s), ("B", j, s)], N)
    xb = zeros()
    for b in bonds:
        xb += theta * majorana_product(b, N)

    uq, ut, ub = exp_of_antihermitian(xq), exp_of_antihermitian(xt), exp_of_antihermitian(xb)
    if dagger_side == "left":
        mat = dagger(uq) @ dagger(ut) @ ub @ ut @ uq
    else:
        mat = uq @ ut @ ub @ dagger(ut) @ dagger(uq)
    return FockOperator(mat, label=f"dressed_step{step}")


def parity_residual(params: DriveParameters) -> float:
    """Max commutator norm of the step Hamiltonians and Floquet operator with
    total fermion parity."""
    p = parity_operator(params.N).matrix
    res = 0.0
    for h in build_step_hamiltonians(params):
        res = max(res, fnorm(h.matrix @ p - p @ h.matrix))
    u = build_floquet(params).matrix
    res = max(res, fnorm(u @ p - p @ u))
    return res
