"""Single-particle (Bogoliubov-de Gennes) layer of the noninteracting drive.

With the Hubbard coupling switched off every step Hamiltonian is quadratic,
so the one-period evolution is fully described by a 4N x 4N unitary acting
on the doubled mode vector.  The doubled basis follows the cell layout:
for each two-site unit cell j and spin s (+1 before -1) the four entries
are ``(c_{2j-1,s}, c_{2j,s}, c†_{2j-1,s}, c†_{2j,s})``; an odd final site
contributes ``(c_{N,s}, c†_{N,s})``.

The momentum-space operator is 8 x 8 per quasimomentum ``k`` in the
(spin x sublattice x particle-hole) ordering (particle-hole index fastest),
obtained by attaching ``exp(+-ik)`` to the intercell couplings.

Particle-hole symmetry: all couplings are real, so the one-period unitary
is real in the Majorana single-particle basis.  In the complex-fermion
basis used here the antiunitary particle-hole operation is complex
conjugation composed with the particle/hole block swap; applying it at
``k`` reproduces the operator at ``-k`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import dagger, fnorm
from .chain_model import DriveParameters

_SPIN_COL = {+1: 0, -1: 1}


@dataclass(frozen=True)
class BdGUnitary:
    """One-period single-particle unitary on the doubled chain basis."""

    N: int
    matrix: np.ndarray
    boundary: str
    T: float

    def __post_init__(self):
        if self.boundary not in ("open", "periodic"):
            raise ValueError("boundary must be 'open' or 'periodic'")
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4 * self.N, 4 * self.N):
            raise ValueError(f"matrix must be {4*self.N}x{4*self.N}")
        defect = fnorm(m @ dagger(m) - np.eye(4 * self.N))
        if defect > 1e-10:
            raise ValueError(f"matrix is not unitary (defect {defect:.2e})")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class BlochUnitary:
    """8x8 one-period unitary at fixed quasimomentum."""

    k: float
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (8, 8):
            raise ValueError("matrix must be 8x8")
        defect = fnorm(m @ dagger(m) - np.eye(8))
        if defect > 1e-12:
            raise ValueError(f"matrix is not unitary (defect {defect:.2e})")
        object.__setattr__(self, "matrix", m)


def nambu_index(site: int, spin: int, hole: bool, N: int) -> int:
    """Position of ``c`` (hole=False) or ``c†`` (hole=True) for a mode in
    the doubled cell-major basis."""
    if not (1 <= site <= N):
        raise ValueError(f"site {site} outside chain")
    cell = (site - 1) // 2
    sites_in_cell = 2 if (2 * cell + 2) <= N else 1
    block = 8 * cell + 2 * sites_in_cell * _SPIN_COL[spin]
    return block + int(hole) * sites_in_cell + ((site - 1) % 2)


def _step_quadratic_terms(params: DriveParameters, boundary: str):
    """Per-step lists of hopping terms (a, b, t): t c†_a c_b + h.c. with
    a != b recorded once, plus diagonal (a, a, e), and pairing terms
    (a, b, d): d c†_a c†_b + h.c."""
    N = params.N
    steps_hop = [[] for _ in range(5)]
    steps_pair = [[] for _ in range(5)]

    def add_onsite(step, site):
        for s in (+1, -1):
            steps_hop[step].append(((site, s), (site, s), s * params.mu[site - 1, _SPIN_COL[s]]))

    def add_zeeman(step, site, sign):
        j1 = params.J1[site - 1]
        steps_hop[step].append(((site, +1), (site, -1), sign * j1))

    def add_kitaev(step, bond, spin, right):
        col = _SPIN_COL[spin]
        steps_hop[step].append(((right, spin), (bond, spin), -params.J2[bond - 1, col]))
        steps_pair[step].append(((right, spin), (bond, spin), params.Delta[bond - 1, col]))

    for site in range(1, N + 1):
        if site % 2 == 0:
            add_onsite(0, site)
            add_zeeman(4, site, +1.0)
        else:
            add_zeeman(0, site, -1.0)
            add_onsite(4, site)
    bonds = list(range(1, N)) + ([N] if boundary == "periodic" else [])
    for bond in bonds:
        right = bond + 1 if bond < N else 1
        if bond % 2 == 1:
            add_kitaev(1, bond, +1, right)
            add_kitaev(3, bond, -1, right)
        else:
            add_kitaev(1, bond, -1, right)
            add_kitaev(3, bond, +1, right)
    return steps_hop, steps_pair


def _assemble_nambu(hops, pairs, N: int) -> np.ndarray:
    h = np.zeros((4 * N, 4 * N), dtype=complex)

    def idx(site, spin, hole):
        return nambu_index(site, spin, hole, N)

    for (a, sa), (b, sb), t in hops:
        # t c†_a c_b + h.c.
        pa, pb = idx(a, sa, False), idx(b, sb, False)
        ha, hb = idx(a, sa, True), idx(b, sb, True)
        h[pa, pb] += t
        h[hb, ha] += -t
        if (a, sa) != (b, sb):
            h[pb, pa] += np.conj(t)
            h[ha, hb] += -np.conj(t)
    for (a, sa), (b, sb), d in pairs:
        # d c†_a c†_b + h.c., antisymmetrized
        pa, pb = idx(a, sa, False), idx(b, sb, False)
        ha, hb = idx(a, sa, True), idx(b, sb, True)
        h[pa, hb] += d
        h[pb, ha] += -d
        h[hb, pa] += np.conj(d)
        h[ha, pb] += -np.conj(d)
    return h


def build_bdg_floquet(params: DriveParameters, boundary: str = "open") -> BdGUnitary:
    """One-period single-particle unitary (product of the five step
    exponentials).  The interaction must vanish; the middle step is then
    the identity.  Periodic boundaries require translation-invariant
    parameters and even N."""
    if np.max(np.abs(params.U)) > 1e-14:
        raise ValueError("single-particle layer requires U = 0 everywhere")
    if boundary == "periodic":
        if params.N % 2 != 0:
            raise ValueError("periodic boundaries need an even number of sites")
        for fam in ("mu", "J1", "J2", "Delta"):
            arr = params.family(fam)
            if np.ptp(arr, axis=0).max() > 1e-14:
                raise ValueError("periodic boundaries require uniform parameters")
    hops, pairs = _step_quadratic_terms(params, boundary)
    dt = params.T / 5.0
    u = np.eye(4 * params.N, dtype=complex)
    for step in range(5):
        h = _assemble_nambu(hops[step], pairs[step], params.N)
        w, v = np.linalg.eigh(h)
        u = (v * np.exp(-1j * dt * w)) @ dagger(v) @ u
    return BdGUnitary(N=params.N, matrix=u, boundary=boundary, T=params.T)


# ---------------------------------------------------------------------------
# Momentum space
# ---------------------------------------------------------------------------

def _bloch_index(spin: int, subl: int, hole: bool) -> int:
    # (spin x sublattice x particle-hole), particle-hole fastest
    return 4 * _SPIN_COL[spin] + 2 * subl + int(hole)


def _bloch_step(hops, pairs, k: float) -> np.ndarray:
    """8x8 generator at momentum k from the uniform-cell term lists.

    Term site indices are interpreted on the two-site cell: sites 1, 2 are
    sublattices 0, 1 of the home cell; site 3 = sublattice 0 of the
    neighbour cell (phase e^{ik})."""
    h = np.zeros((8, 8), dtype=complex)

    for (a, sa), (b, sb), t in hops:
        sub_a, off_a = (a - 1) % 2, (a - 1) // 2
        sub_b, off_b = (b - 1) % 2, (b - 1) // 2
        phase = np.exp(1j * k * (off_a - off_b))
        ia, ib = _bloch_index(sa, sub_a, False), _bloch_index(sb, sub_b, False)
        ja, jb = _bloch_index(sa, sub_a, True), _bloch_index(sb, sub_b, True)
        if (a, sa) == (b, sb):
            h[ia, ia] += t
            h[ja, ja] += -t
            continue
        # particle block A(k): t exp(ik delta) plus its Hermitian partner
        h[ia, ib] += t * phase
        h[ib, ia] += np.conj(t) * np.conj(phase)
        # hole block -A(-k)^T: transposition without phase conjugation
        h[jb, ja] += -t * np.conj(phase)
        h[ja, jb] += -np.conj(t) * phase
    for (a, sa), (b, sb), d in pairs:
        sub_a, off_a = (a - 1) % 2, (a - 1) // 2
        sub_b, off_b = (b - 1) % 2, (b - 1) // 2
        phase = np.exp(1j * k * (off_a - off_b))
        ia = _bloch_index(sa, sub_a, False)
        jb = _bloch_index(sb, sub_b, True)
        ib = _bloch_index(sb, sub_b, False)
        ja = _bloch_index(sa, sub_a, True)
        # upper-right block B(k), antisymmetric under (m, k) -> (m', -k)
        h[ia, jb] += d * phase
        h[ib, ja] += -d * np.conj(phase)
        # lower-left block B(k)†
        h[jb, ia] += np.conj(d) * np.conj(phase)
        h[ja, ib] += -np.conj(d) * phase
    return h


def _uniform_cell_terms(params: DriveParameters):
    """Term lists of one unit cell (sites 1, 2) with the intercell bond
    written as site 2 -> 3."""
    for fam in ("mu", "J1", "J2", "Delta"):
        if np.ptp(params.family(fam), axis=0).max() > 1e-14:
            raise ValueError("momentum space requires uniform parameters")
    if np.max(np.abs(params.U)) > 1e-14:
        raise ValueError("single-particle layer requires U = 0")
    mu_u, j1_u = params.mu[0], params.J1[0]
    j2_u, delta_u = params.J2[0], params.Delta[0]
    hops = [[] for _ in range(5)]
    pairs = [[] for _ in range(5)]

    def add_onsite(step, site):
        for s in (+1, -1):
            hops[step].append(((site, s), (site, s), s * mu_u[_SPIN_COL[s]]))

    def add_zeeman(step, site, sign):
        hops[step].append(((site, +1), (site, -1), sign * j1_u))

    def add_kitaev(step, bond, spin):
        col = _SPIN_COL[spin]
        hops[step].append(((bond + 1, spin), (bond, spin), -j2_u[col]))
        pairs[step].append(((bond + 1, spin), (bond, spin), delta_u[col]))

    add_onsite(0, 2)
    add_zeeman(0, 1, -1.0)
    add_onsite(4, 1)
    add_zeeman(4, 2, +1.0)
    add_kitaev(1, 1, +1)   # intracell bond, odd left site
    add_kitaev(3, 1, -1)
    add_kitaev(1, 2, -1)   # intercell bond, even left site
    add_kitaev(3, 2, +1)
    return hops, pairs


def bloch_floquet(k: float, params: DriveParameters) -> BlochUnitary:
    """8x8 one-period unitary at quasimomentum ``k``."""
    hops, pairs = _uniform_cell_terms(params)
    dt = params.T / 5.0
    u = np.eye(8, dtype=complex)
    for step in range(5):
        h = _bloch_step(hops[step], pairs[step], k)
        w, v = np.linalg.eigh(h)
        u = (v * np.exp(-1j * dt * w)) @ dagger(v) @ u
    return BlochUnitary(k=k, matrix=u)


PH_SWAP = np.kron(np.eye(4), np.array([[0.0, 1.0], [1.0, 0.0]]))


def particle_hole_image(u: np.ndarray) -> np.ndarray:
    """Antiunitary particle-hole operation in the complex-fermion Bloch
    basis: conjugation composed with the particle/hole swap."""
    return PH_SWAP @ np.conj(u) @ PH_SWAP


def default_k_grid(n_points: int = 201) -> np.ndarray:
    """Uniform quasimomentum grid over (-pi, pi] containing 0 and pi."""
    if n_points % 2 == 0:
        raise ValueError("use an odd point count so k = 0 and k = pi are on the grid")
    return np.linspace(-math.pi, math.pi, n_points + 1)[1:]


def check_phs(params: DriveParameters, k_samples=None) -> float:
    """Max over sampled k of the particle-hole residual
    ``| PH(u(k)) - u(-k) |``."""
    if k_samples is None:
        k_samples = default_k_grid()
    worst = 0.0
    for k in np.asarray(k_samples, dtype=float):
        u_k = bloch_floquet(float(k), params).matrix
        u_mk = bloch_floquet(float(-k), params).matrix
        worst = max(worst, fnorm(particle_hole_image(u_k) - u_mk))
    return worst


# ---------------------------------------------------------------------------
# Spectra and locality
# ---------------------------------------------------------------------------

def fold_phase(phi):
    """Fold a phase array to (-pi, pi], ties at the cut mapped to +pi."""
    out = np.mod(np.asarray(phi, dtype=float) + math.pi, 2 * math.pi) - math.pi
    out[np.isclose(out, -math.pi)] = math.pi
    return out


def unitary_eigensystem(u: np.ndarray):
    """Orthonormal eigenbasis of a unitary matrix via the Schur form.

    Returns (phases, vectors) with ``u v_n = exp(i phase_n) v_n``; the
    basis is exactly unitary even inside degenerate clusters.
    """
    t, q = scipy.linalg.schur(u, output="complex")
    phases = np.angle(np.diag(t))
    order = np.argsort(phases, kind="stable")
    return phases[order], q[:, order]


def quasienergy_spectrum(U, T: float) -> np.ndarray:
    """Sorted quasienergy phases ``epsilon*T`` in (-pi, pi] of a one-period
    unitary (eigenvalues ``exp(-i epsilon T)``)."""
    mat = getattr(U, "matrix", U)
    mat = np.asarray(mat, dtype=complex)
    defect = fnorm(mat @ dagger(mat) - np.eye(mat.shape[0]))
    if defect > 1e-8:
        raise ValueError(f"input is not unitary (defect {defect:.2e})")
    phases, _ = unitary_eigensystem(mat)
    return np.sort(fold_phase(-phases))


def _cluster_indices(values: np.ndarray, tol: float = 1e-8):
    """Group sorted phase values into degenerate clusters (circular)."""
    order = np.argsort(values)
    clusters = [[order[0]]]
    for idx in order[1:]:
        if values[idx] - values[clusters[-1][-1]] < tol:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    if len(clusters) > 1:
        first, last = clusters[0], clusters[-1]
        if (values[first[0]] + 2 * math.pi) - values[last[-1]] < tol:
            clusters[0] = last + first
            clusters.pop()
    return clusters


def edge_locality(U: BdGUnitary, eigenphase_window: tuple[float, float]):
    """Outer-cell weights of eigenvectors with folded eigenphase in the
    window (phase units epsilon*T).

    Inside each degenerate cluster the basis is rotated to extremize the
    weight on the leftmost cell, so edge modes appear as localized rows.
    Returns a list of ``(phase, weight_left, weight_right, is_edge)``.
    """
    if U.boundary != "open":
        raise ValueError("edge locality is defined for open boundaries")
    lo, hi = eigenphase_window
    phases, vecs = unitary_eigensystem(U.matrix)
    eps = fold_phase(-phases)
    sel = np.where((eps >= lo) & (eps <= hi))[0]
    if sel.size == 0:
        return []
    n_entries = U.matrix.shape[0]
    left_idx = [i for i in range(n_entries) if i < 8] if U.N >= 2 else list(range(n_entries))
    right_idx = [i for i in range(n_entries) if i >= n_entries - (8 if U.N % 2 == 0 else 4)]
    report = []
    for cluster in _cluster_indices(eps[sel]):
        cols = vecs[:, sel[np.asarray(cluster)]]
        proj = np.zeros((n_entries, n_entries))
        proj[left_idx, left_idx] = 1.0
        block = dagger(cols) @ proj @ cols
        _, rot = np.linalg.eigh(block)
        cols = cols @ rot
        for col_i in range(cols.shape[1]):
            v = cols[:, col_i]
            w_left = float(np.sum(np.abs(v[left_idx]) ** 2))
            w_right = float(np.sum(np.abs(v[right_idx]) ** 2))
            phase = float(eps[sel[cluster[0]]])
            report.append((phase, w_left, w_right, max(w_left, w_right) > 0.5))
    return report


SWEEP_AXES_BDG = ("mu", "J1", "J2", "Delta", "J1_2J2")


def _apply_bdg_axis(params: DriveParameters, vary: str, value: float) -> DriveParameters:
    if vary == "mu":
        return params.replace_families(mu=np.full((params.N, 2), value))
    if vary == "J1":
        return params.replace_families(J1=np.full(params.N, value))
    if vary == "J2":
        return params.replace_families(J2=np.full((params.N, 2), value))
    if vary == "Delta":
        return params.replace_families(Delta=np.full((params.N, 2), value))
    if vary == "J1_2J2":
        # tied axis: J1 = value, J2 = Delta = value / 2
        return params.replace_families(
            J1=np.full(params.N, value),
            J2=np.full((params.N, 2), value / 2),
            Delta=np.full((params.N, 2), value / 2),
        )
    raise ValueError(f"unknown sweep axis {vary!r}; expected one of {SWEEP_AXES_BDG}")


def sweep_spectrum(params: DriveParameters, vary: str, values, boundary: str = "open"):
    """Quasienergy spectrum (and outer-cell weights) versus one parameter.

    Returns rows ``(axis_value, band_index, epsT, weight_left,
    weight_right)`` for every eigenvector at every sweep point.
    """
    rows = []
    for value in values:
        p = _apply_bdg_axis(params, vary, float(value))
        u = build_bdg_floquet(p, boundary=boundary)
        phases, vecs = unitary_eigensystem(u.matrix)
        eps = fold_phase(-phases)
        order = np.argsort(eps)
        n_entries = u.matrix.shape[0]
        left_idx = list(range(min(8, n_entries)))
        right_n = 8 if u.N % 2 == 0 else 4
        right_idx = list(range(n_entries - min(right_n, n_entries), n_entries))
        for band, idx in enumerate(order):
            v = vecs[:, idx]
            rows.append((
                float(value),
                band,
                float(eps[idx]),
                float(np.sum(np.abs(v[left_idx]) ** 2)),
                float(np.sum(np.abs(v[right_idx]) ** 2)),
            ))
    return rows
