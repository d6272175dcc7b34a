"""Windowed spectral functions: the fraction of an operator's weight that
shifts quasienergy by a target amount.

For a one-period unitary with eigenpairs ``U |n> = exp(i phi_n) |n>`` and
an operator ``psi``, the estimate at target phase ``x`` is

    s =  sum_{n in X} sum_{m : dist(phi_n - phi_m - x) <= delta} |<n|psi|m>|^2
        -------------------------------------------------------------------
                 sum_{n in X} sum_m |<n|psi|m>|^2

with ``dist`` the distance on the phase circle; zone folding is automatic.
An operator satisfying ``U† psi U = exp(-i x) psi`` exactly scores 1 at
target ``x`` for any window half-width and any sample set.

Eigenphases are clustered (tolerance 1e-8) before windowing, so the value
is invariant under re-mixing inside degenerate eigenspaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import FockOperator, dagger, fnorm
from .bdg import unitary_eigensystem
from .chain_model import (
    DriveParameters,
    build_floquet,
    ideal_parameters,
    rotation_R,
    with_axis_value,
)
from .exact_modes import ideal_left_modes

DEGENERACY_TOL = 1e-8

#: Targets probed by :func:`spectral_quadruple` (phase units epsilon*T).
QUADRUPLE_TARGETS = (0.0, math.pi / 2, -math.pi / 2, math.pi)


class DegenerateWeightError(ValueError):
    """The probe annihilates every sampled eigenstate; the estimate is 0/0."""


@dataclass(frozen=True)
class SpectralConfig:
    """Window half-width, eigenstate sample size and RNG seed.

    ``sample_size=None`` uses every eigenstate when the dimension is at
    most 1024 and 64 seeded random rows otherwise.
    """

    delta: float = 0.05 * math.pi
    sample_size: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.delta < math.pi / 4):
            raise ValueError("delta must lie in (0, pi/4)")
        if self.sample_size is not None and self.sample_size < 1:
            raise ValueError("sample_size must be >= 1")

    def resolve_rows(self, dim: int) -> np.ndarray:
        if self.sample_size is None:
            if dim <= 1024:
                return np.arange(dim)
            n = 64
        else:
            n = min(self.sample_size, dim)
        rng = np.random.default_rng(self.seed)
        return np.sort(rng.choice(dim, size=n, replace=False))


@dataclass(frozen=True)
class SpectralEstimate:
    """One spectral-function value with the context that produced it."""

    value: float
    epsilon: float
    operator_label: str
    delta: float
    sample_size: int
    seed: int
    eigenpair_count: int

    def __post_init__(self):
        if not (-1e-12 <= self.value <= 1.0 + 1e-12):
            raise ValueError(f"spectral weight outside [0, 1]: {self.value}")


def circle_distance(x) -> np.ndarray:
    """Distance on the phase circle of circumference 2 pi."""
    return np.abs(np.mod(np.asarray(x, dtype=float) + math.pi, 2.0 * math.pi) - math.pi)


def _cluster_phases(phases: np.ndarray, tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Replace each phase by its degenerate-cluster representative."""
    order = np.argsort(phases)
    rep = phases.copy()
    start = 0
    sorted_ph = phases[order]
    for i in range(1, len(sorted_ph) + 1):
        if i == len(sorted_ph) or sorted_ph[i] - sorted_ph[i - 1] > tol:
            rep_val = sorted_ph[start:i].mean()
            rep[order[start:i]] = rep_val
            start = i
    # circular wrap: merge the first and last clusters if they touch
    if len(sorted_ph) > 1 and (sorted_ph[0] + 2 * math.pi) - sorted_ph[-1] <= tol:
        lo = rep == rep[order[0]]
        hi = rep == rep[order[-1]]
        rep_val = np.angle(np.mean(np.exp(1j * phases[lo | hi])))
        rep[lo | hi] = rep_val
    return rep


def _spectral_core(U, psi, targets, config: SpectralConfig):
    u = getattr(U, "matrix", U)
    u = np.asarray(u, dtype=complex)
    psi_m = getattr(psi, "matrix", psi)
    psi_m = np.asarray(psi_m, dtype=complex)
    if fnorm(psi_m) < 1e-300:
        raise ValueError("probe operator is zero")
    if u.shape != psi_m.shape:
        raise ValueError("unitary and probe dimensions differ")
    dim = u.shape[0]
    defect = fnorm(u @ dagger(u) - np.eye(dim))
    if defect > 1e-8:
        raise ValueError(f"input is not unitary (defect {defect:.2e})")

    phases, vecs = unitary_eigensystem(u)
    phases = _cluster_phases(phases)
    weights = np.abs(dagger(vecs) @ psi_m @ vecs) ** 2

    rows = config.resolve_rows(dim)
    w = weights[rows, :]
    denom = float(w.sum())
    if denom <= 1e-300:
        raise DegenerateWeightError(
            "probe annihilates every sampled eigenstate (denominator vanishes)"
        )
    diff = phases[rows][:, None] - phases[None, :]
    label = getattr(psi, "label", "")
    out = []
    for x in targets:
        mask = circle_distance(diff - x) <= config.delta
        value = float(w[mask].sum()) / denom
        out.append(
            SpectralEstimate(
                value=min(max(value, 0.0), 1.0),
                epsilon=float(x),
                operator_label=label,
                delta=config.delta,
                sample_size=len(rows),
                seed=config.seed,
                eigenpair_count=dim,
            )
        )
    return out


def spectral_function(U, psi, epsilon: float, config: SpectralConfig | None = None) -> SpectralEstimate:
    """Spectral weight of ``psi`` at target phase ``epsilon`` (= eps*T)."""
    config = config or SpectralConfig()
    return _spectral_core(U, psi, [epsilon], config)[0]


def spectral_quadruple(U, psi, config: SpectralConfig | None = None) -> list[SpectralEstimate]:
    """Spectral weights at the four canonical targets 0, +pi/2, -pi/2, pi."""
    config = config or SpectralConfig()
    return _spectral_core(U, psi, list(QUADRUPLE_TARGETS), config)


# ---------------------------------------------------------------------------
# Interacting-sweep presets
# ---------------------------------------------------------------------------

SWEEP_AXES = ("J1", "mu", "U", "delta")


def sweep_base_parameters(N: int = 4, T: float = 1.0) -> DriveParameters:
    """Fixed parameter point of the interacting sweeps: bond mean
    ``(J2 + Delta)/2 = 1.1875 pi/T`` at zero imbalance, with
    ``U = 2 mu = 2 J1 = 5 pi/T``."""
    u = 5.0 * math.pi / T
    j = 1.1875 * math.pi / T
    return DriveParameters.uniform(N, T, mu=u / 2, J1=u / 2, J2=j, Delta=j, U=u)


def lab_frame_probes(N: int) -> dict[float, FockOperator]:
    """Left-edge parafermion probes rotated into the lab frame, keyed by
    their target phase (+pi/2 and -pi/2)."""
    r = rotation_R(N).matrix
    plus, minus = ideal_left_modes(N)
    out = {}
    for cand in (plus, minus):
        mat = dagger(r) @ cand.operator.matrix @ r
        out[cand.target_phase] = FockOperator(mat, label=f"lab:{cand.operator.label}")
    return out


def fig2_sweep(vary: str, values, config: SpectralConfig | None = None,
               N: int = 4, T: float = 1.0):
    """Spectral quadruple of both lab-frame parafermion probes along one
    sweep axis.

    Returns rows ``(axis_value, probe_phase, s_0, s_plus, s_minus, s_pi)``.
    """
    if vary not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {vary!r}; expected one of {SWEEP_AXES}")
    config = config or SpectralConfig()
    base = sweep_base_parameters(N, T)
    probes = lab_frame_probes(N)
    rows = []
    for value in values:
        params = with_axis_value(base, vary, float(value))
        u = build_floquet(params)
        for phase in (math.pi / 2, -math.pi / 2):
            est = spectral_quadruple(u, probes[phase], config)
            rows.append((float(value), phase) + tuple(e.value for e in est))
    return rows
