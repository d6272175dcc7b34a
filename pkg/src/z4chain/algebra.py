"""Dense operator algebras on small Fock and spin-1/2 Hilbert spaces.

Everything downstream (drive builders, mode constructions, spectral
diagnostics) consumes the matrices produced here.  Three families of
operators are provided:

* complex fermion modes ``c``/``c†`` on a spinful chain, built in the
  occupation-number basis with Jordan-Wigner phase strings,
* Majorana partners ``gamma_A = i(c - c†)`` and ``gamma_B = c + c†``,
* Pauli operators and generalized Jordan-Wigner strings on a rectangular
  spin-1/2 lattice of ``n_rows x n_chains`` sites.

All matrices are dense ``complex128`` arrays; the largest space used in
practice is 4096-dimensional, where eigendecompositions dominate the cost
anyway.  Operators are pure values: nothing here mutates shared state, so
results can be freely cached and shared across workers.

Conventions
-----------
Chain modes are ordered lexicographically, site ascending and spin +1
before spin -1; Jordan-Wigner strings follow this order.  Fock basis index
``b`` stores the occupation of mode ``m`` in bit ``(M-1-m)`` of ``b``
(mode 0 is the outermost Kronecker factor).  Spin-lattice qubits are
ordered row-major: ``(row, chain)`` -> ``(row-1)*n_chains + (chain-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np

SPIN_UP = +1
SPIN_DOWN = -1
SPINS = (SPIN_UP, SPIN_DOWN)

SPECIES_A = "A"
SPECIES_B = "B"

#: Hermiticity tolerance accepted by :func:`unitary_exponential`.
HERMITICITY_TOL = 1e-10

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


# ---------------------------------------------------------------------------
# Index types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeIndex:
    """A fermionic mode ``(site, spin)``, optionally one of its Majorana halves.

    ``site`` is 1-based, ``spin`` is +1 or -1, and ``species`` is ``"A"``,
    ``"B"`` or ``None`` (complex fermion).
    """

    site: int
    spin: int
    species: str | None = None

    def __post_init__(self):
        if self.site < 1:
            raise ValueError(f"site must be >= 1, got {self.site}")
        if self.spin not in SPINS:
            raise ValueError(f"spin must be +1 or -1, got {self.spin}")
        if self.species not in (None, SPECIES_A, SPECIES_B):
            raise ValueError(f"species must be 'A', 'B' or None, got {self.species!r}")


@dataclass(frozen=True)
class PauliSite:
    """A single-qubit Pauli on a rectangular lattice: ``(row, chain, axis)``."""

    row: int
    chain: int
    axis: str

    def __post_init__(self):
        if self.axis not in ("X", "Y", "Z"):
            raise ValueError(f"axis must be one of X, Y, Z, got {self.axis!r}")
        if self.row < 1 or self.chain < 1:
            raise ValueError("row and chain indices are 1-based")


class FockOperator:
    """A dense operator on a 2^k-dimensional Hilbert space, with a label.

    Entries must be finite; the dimension must be a power of two.
    """

    __slots__ = ("matrix", "label")

    def __init__(self, matrix, label=""):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"operator must be a square matrix, got shape {matrix.shape}")
        dim = matrix.shape[0]
        if dim & (dim - 1) != 0 or dim == 0:
            raise ValueError(f"dimension must be a power of two, got {dim}")
        if not np.isfinite(matrix).all():
            raise ValueError("operator entries must be finite")
        self.matrix = matrix
        self.label = label

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"FockOperator(dim={self.dimension}, label={self.label!r})"


# ---------------------------------------------------------------------------
# Small matrix helpers
# ---------------------------------------------------------------------------

def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def fnorm(a: np.ndarray) -> float:
    """Frobenius norm, the residual metric used throughout."""
    return float(np.linalg.norm(a))


def kron_chain(factors: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, factors)


# ---------------------------------------------------------------------------
# Fermionic chain operators
# ---------------------------------------------------------------------------

def mode_position(mode: ModeIndex, N: int) -> int:
    """Flat position of a chain mode under the global (site, spin) ordering."""
    if not (1 <= mode.site <= N):
        raise ValueError(f"site {mode.site} outside chain of length {N}")
    return 2 * (mode.site - 1) + (0 if mode.spin == SPIN_UP else 1)


@lru_cache(maxsize=None)
def _annihilation_at(pos: int, n_modes: int) -> np.ndarray:
    # Jordan-Wigner: parity string on all earlier modes, lowering on `pos`.
    lower = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |0><1|
    factors = [PAULI_MATRICES["Z"]] * pos + [lower] + [PAULI_MATRICES["I"]] * (n_modes - pos - 1)
    mat = kron_chain(factors)
    mat.flags.writeable = False
    return mat


@lru_cache(maxsize=None)
def _majorana_at(pos: int, species: str, n_modes: int) -> np.ndarray:
    c = _annihilation_at(pos, n_modes)
    cd = dagger(c)
    mat = c + cd if species == SPECIES_B else 1j * (c - cd)
    mat.flags.writeable = False
    return mat


def fermion_annihilation(mode: ModeIndex, N: int) -> FockOperator:
    """Annihilation operator ``c_{site,spin}`` on the 4^N-dimensional chain space."""
    pos = mode_position(mode, N)
    return FockOperator(_annihilation_at(pos, 2 * N), label=f"c({mode.site},{mode.spin:+d})")


def fermion_creation(mode: ModeIndex, N: int) -> FockOperator:
    pos = mode_position(mode, N)
    return FockOperator(dagger(_annihilation_at(pos, 2 * N)), label=f"cdag({mode.site},{mode.spin:+d})")


def number_operator(mode: ModeIndex, N: int) -> FockOperator:
    c = _annihilation_at(mode_position(mode, N), 2 * N)
    return FockOperator(dagger(c) @ c, label=f"n({mode.site},{mode.spin:+d})")


def majorana(mode: ModeIndex, N: int) -> FockOperator:
    """Majorana partner of a chain mode: A = i(c - c†), B = c + c†."""
    if mode.species not in (SPECIES_A, SPECIES_B):
        raise ValueError("majorana() requires a mode with species 'A' or 'B'")
    pos = mode_position(mode, N)
    return FockOperator(
        _majorana_at(pos, mode.species, 2 * N),
        label=f"gamma_{mode.species}({mode.site},{mode.spin:+d})",
    )


def majorana_matrix(species: str, site: int, spin: int, N: int) -> np.ndarray:
    """Raw ndarray version of :func:`majorana`, for hot construction paths."""
    return _majorana_at(mode_position(ModeIndex(site, spin), N), species, 2 * N)


def majorana_product(factors: Iterable[tuple[str, int, int]], N: int, coeff: complex = 1.0) -> np.ndarray:
    """Product ``coeff * prod_k gamma_{species_k}(site_k, spin_k)`` as an ndarray."""
    dim = 4**N
    out = np.eye(dim, dtype=complex) * coeff
    for species, site, spin in factors:
        out = out @ majorana_matrix(species, site, spin, N)
    return out


def parity_operator(N: int) -> FockOperator:
    """Total fermion parity ``prod_modes (1 - 2 n)``; diagonal, unitary, involutive."""
    if N < 1:
        raise ValueError("N must be >= 1")
    n_modes = 2 * N
    dim = 2**n_modes
    occ = np.arange(dim)
    # popcount over the occupation bits of each basis index
    signs = np.array([(-1) ** bin(b).count("1") for b in occ], dtype=complex)
    return FockOperator(np.diag(signs), label="parity")


# ---------------------------------------------------------------------------
# Unitary exponentials
# ---------------------------------------------------------------------------

def unitary_exponential(H, angle_scale: float = 1.0) -> FockOperator:
    """exp(-i * angle_scale * H) for Hermitian H, via eigendecomposition.

    Rejects inputs whose anti-Hermitian part exceeds ``HERMITICITY_TOL``
    relative to the matrix scale.
    """
    mat = H.matrix if isinstance(H, FockOperator) else np.asarray(H, dtype=complex)
    scale = max(fnorm(mat), 1.0)
    herm_defect = fnorm(mat - dagger(mat)) / scale
    if herm_defect > HERMITICITY_TOL:
        raise ValueError(f"input is not Hermitian (defect {herm_defect:.2e})")
    sym = (mat + dagger(mat)) / 2.0
    w, v = np.linalg.eigh(sym)
    phases = np.exp(-1j * angle_scale * w)
    out = (v * phases) @ dagger(v)
    label = getattr(H, "label", "")
    return FockOperator(out, label=f"exp(-i*{angle_scale:g}*{label})" if label else "exp")


def exp_of_antihermitian(X: np.ndarray) -> np.ndarray:
    """exp(X) for anti-Hermitian X (the form every drive exponent takes here)."""
    return unitary_exponential(1j * X, 1.0).matrix


# ---------------------------------------------------------------------------
# Spin-1/2 rectangular lattice
# ---------------------------------------------------------------------------

def _qubit_index(row: int, chain: int, n_chains: int) -> int:
    return (row - 1) * n_chains + (chain - 1)


@lru_cache(maxsize=None)
def _pauli_at(qubit: int, axis: str, n_qubits: int) -> np.ndarray:
    factors = [PAULI_MATRICES["I"]] * n_qubits
    factors[qubit] = PAULI_MATRICES[axis]
    mat = kron_chain(factors)
    mat.flags.writeable = False
    return mat


def pauli(site: PauliSite, lattice) -> FockOperator:
    """Single-site Pauli on a rectangular lattice (``lattice`` needs
    ``n_rows``/``n_chains`` attributes)."""
    n_rows, n_chains = lattice.n_rows, lattice.n_chains
    if not (1 <= site.row <= n_rows and 1 <= site.chain <= n_chains):
        raise ValueError(f"site ({site.row},{site.chain}) outside {n_rows}x{n_chains} lattice")
    mat = _pauli_at(_qubit_index(site.row, site.chain, n_chains), site.axis, n_rows * n_chains)
    return FockOperator(mat, label=f"{site.axis}({site.row},{site.chain})")


def pauli_string(ops: Iterable[tuple[int, int, str]], lattice, coeff: complex = 1.0) -> np.ndarray:
    """Product ``coeff * prod_k P_axis(row_k, chain_k)`` as an ndarray."""
    n_rows, n_chains = lattice.n_rows, lattice.n_chains
    n_qubits = n_rows * n_chains
    out = np.eye(2**n_qubits, dtype=complex) * coeff
    for row, chain, axis in ops:
        if not (1 <= row <= n_rows and 1 <= chain <= n_chains):
            raise ValueError(f"site ({row},{chain}) outside {n_rows}x{n_chains} lattice")
        out = out @ _pauli_at(_qubit_index(row, chain, n_chains), axis, n_qubits)
    return out


def jw_majorana_from_pauli(species: str, row: int, chain: int, lattice) -> FockOperator:
    """String-operator Majorana on the spin lattice.

    The string multiplies X on every full row above ``row``, then X on the
    chains left of ``chain`` within the row, ending in Z (species A) or
    Y (species B) at ``(row, chain)``.
    """
    if species not in (SPECIES_A, SPECIES_B):
        raise ValueError("species must be 'A' or 'B'")
    n_rows, n_chains = lattice.n_rows, lattice.n_chains
    if not (1 <= row <= n_rows and 1 <= chain <= n_chains):
        raise ValueError(f"site ({row},{chain}) outside {n_rows}x{n_chains} lattice")
    ops = [(k, a, "X") for k in range(1, row) for a in range(1, n_chains + 1)]
    ops += [(row, b, "X") for b in range(1, chain)]
    ops.append((row, chain, "Z" if species == SPECIES_A else "Y"))
    return FockOperator(pauli_string(ops, lattice), label=f"gamma_{species}[{row},{chain}]")
