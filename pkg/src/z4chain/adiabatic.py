"""Adiabatic transport of mode operators along parameter paths.

The effective Hamiltonian of a one-period unitary is the principal-branch
logarithm ``H = i log(U)/T``; transporting a mode along a slow parameter
path conjugates it with the ordered product of ``exp(-i H(s_k) ds)`` over
midpoint nodes ``s_k``.  Unitary conjugation preserves the operator's
singular values and its entire algebra, so a parafermion stays a
parafermion along the way; what degrades at a topological transition is
only its quasienergy-shift quality, which the spectral functions measure.

Transport for ideal-point seeds runs in the rotated frame (the lab Floquet
operator conjugated once by the frame rotation); the solvable-case
cross-deformations run directly in the lab frame.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import FockOperator, dagger, fnorm
from .bdg import fold_phase, unitary_eigensystem
from .chain_model import (
    DisorderSpec,
    DriveParameters,
    build_floquet,
    ideal_parameters,
    interpolate_parameters,
    rotation_R,
    sample_disorder,
    solvable_parameters,
    with_axis_value,
)
from .exact_modes import ModeCandidate, verify_mode
from .spectral import SpectralConfig, spectral_function, sweep_base_parameters

#: Eigenphase proximity to the log branch cut that raises a warning.
BRANCH_CUT_TOL = 1e-12

#: Transport nodes per unit of per-step drive angle (|dp| T / 5).
NODES_PER_UNIT = 64


class BranchCutWarning(UserWarning):
    """An eigenphase sits on the principal-branch cut of the logarithm."""


@dataclass(frozen=True)
class ParameterPath:
    """A straight path in parameter space.

    Either a named sweep axis from ``start`` to ``end`` on top of ``base``,
    or (axis="interpolate") the straight line from ``base`` to ``target``.
    """

    axis: str
    start: float
    end: float
    steps: int
    base: DriveParameters
    target: DriveParameters | None = None

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("need at least 2 path steps")
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise ValueError("endpoints must be finite")
        if self.axis == "interpolate" and self.target is None:
            raise ValueError("interpolation paths need a target parameter set")

    def at(self, s: float) -> DriveParameters:
        if self.axis == "interpolate":
            return interpolate_parameters(self.base, self.target, s)
        return with_axis_value(self.base, self.axis, s)

    def nodes(self) -> np.ndarray:
        """Midpoint nodes of the discretized path."""
        ds = (self.end - self.start) / self.steps
        return self.start + (np.arange(self.steps) + 0.5) * ds

    def endpoint_parameters(self) -> DriveParameters:
        return self.at(self.end)


@dataclass
class DeformedMode:
    """A transported mode operator with per-path diagnostics."""

    operator: FockOperator
    path: ParameterPath
    branch_flags: int
    singular_value_drift: float
    transport: np.ndarray


def effective_hamiltonian(U, T: float) -> FockOperator:
    """Hermitian ``H`` with ``exp(-i H T) = U``, eigenphases on the
    principal branch (-pi, pi].  Warns when an eigenphase lies within
    ``BRANCH_CUT_TOL`` of the cut."""
    mat = getattr(U, "matrix", U)
    mat = np.asarray(mat, dtype=complex)
    defect = fnorm(mat @ dagger(mat) - np.eye(mat.shape[0]))
    if defect > 1e-8:
        raise ValueError(f"input is not unitary (defect {defect:.2e})")
    phases, vecs = unitary_eigensystem(mat)
    if np.min(np.abs(np.abs(phases) - math.pi)) < BRANCH_CUT_TOL:
        warnings.warn(
            "eigenphase on the principal-branch cut; the logarithm branch is ambiguous",
            BranchCutWarning,
            stacklevel=2,
        )
    energies = fold_phase(-phases) / T
    h = (vecs * energies) @ dagger(vecs)
    h = (h + dagger(h)) / 2.0
    return FockOperator(h, label="H_eff")


def default_steps(base: DriveParameters, target: DriveParameters) -> int:
    """Node count for a straight path: NODES_PER_UNIT per unit of the
    largest per-step drive-angle change ``|dp| T / 5``."""
    span = 0.0
    for fam in ("mu", "J1", "J2", "Delta", "U"):
        span = max(span, float(np.max(np.abs(target.family(fam) - base.family(fam)))))
    angle = span * base.T / 5.0
    return max(8, int(math.ceil(NODES_PER_UNIT * angle)))


def _frame(params: DriveParameters, rotation: np.ndarray | None) -> np.ndarray:
    u = build_floquet(params).matrix
    if rotation is None:
        return u
    return rotation @ u @ dagger(rotation)


def transport_unitary(path: ParameterPath, rotation: np.ndarray | None = None):
    """Ordered product of midpoint-node exponentials along the path.

    Returns ``(W, branch_flags)``; later nodes multiply from the left, so
    a seed transports as ``W† psi W``.
    """
    ds = (path.end - path.start) / path.steps
    dim = 4**path.base.N
    w = np.eye(dim, dtype=complex)
    flags = 0
    for s in path.nodes():
        u = _frame(path.at(float(s)), rotation)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", BranchCutWarning)
            h = effective_hamiltonian(u, path.base.T).matrix
            flags += sum(1 for c in caught if issubclass(c.category, BranchCutWarning))
        ww, vv = np.linalg.eigh(h)
        w = ((vv * np.exp(-1j * ds * ww)) @ dagger(vv)) @ w
    return w, flags


def evolve_mode(seed: ModeCandidate, path: ParameterPath,
                rotation: np.ndarray | None = None,
                verify_seed: bool = True) -> DeformedMode:
    """Transport ``seed`` along ``path``; the seed must be a verified mode
    of the starting-point Floquet operator (residual < 1e-6)."""
    if verify_seed:
        u0 = _frame(path.at(path.start), rotation)
        rep = verify_mode(FockOperator(u0), seed)
        if rep.conjugation_residual > 1e-6:
            raise ValueError(
                f"seed is not a mode at the path start (residual {rep.conjugation_residual:.2e})"
            )
    w, flags = transport_unitary(path, rotation)
    psi0 = seed.operator.matrix
    psi1 = dagger(w) @ psi0 @ w
    sv0 = np.linalg.svd(psi0, compute_uv=False)
    sv1 = np.linalg.svd(psi1, compute_uv=False)
    drift = float(np.max(np.abs(np.sort(sv0) - np.sort(sv1))))
    return DeformedMode(
        operator=FockOperator(psi1, label=f"transported:{seed.operator.label}"),
        path=path,
        branch_flags=flags,
        singular_value_drift=drift,
        transport=w,
    )


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

IDEAL_AXIS_VALUES = {
    "J1": lambda T: 2.5 * math.pi / T,
    "mu": lambda T: 2.5 * math.pi / T,
    "U": lambda T: 5.0 * math.pi / T,
    "delta": lambda T: 0.0,
}


def _order_residual(psi: np.ndarray) -> float:
    dim = psi.shape[0]
    fourth = np.linalg.matrix_power(psi, 4)
    return fnorm(fourth - np.eye(dim)) / math.sqrt(dim)


def fig3_sweep(axis: str, values, config: SpectralConfig | None = None,
               N: int = 4, T: float = 1.0, seeds=None):
    """Spectral weight of adiabatically transported parafermion probes
    along one sweep axis, accumulated outward from the ideal point.

    Returns rows ``(axis_value, probe_phase, s_value, order_residual,
    branch_flags)`` for both +-pi/2 probes.
    """
    from .exact_modes import ideal_left_modes

    if axis not in IDEAL_AXIS_VALUES:
        raise ValueError(f"unknown sweep axis {axis!r}")
    config = config or SpectralConfig()
    base = sweep_base_parameters(N, T)
    rot = rotation_R(N).matrix
    anchor = IDEAL_AXIS_VALUES[axis](T)
    seeds = seeds or ideal_left_modes(N)

    rows = []
    values = sorted(float(v) for v in values)
    for direction in (+1, -1):
        leg = [v for v in values if (v >= anchor if direction > 0 else v < anchor)]
        leg.sort(reverse=(direction < 0))
        w = np.eye(4**N, dtype=complex)
        flags = 0
        prev = anchor
        for v in leg:
            if abs(v - prev) > 1e-15:
                pa, pb = with_axis_value(base, axis, prev), with_axis_value(base, axis, v)
                seg = ParameterPath(axis=axis, start=prev, end=v,
                                    steps=default_steps(pa, pb), base=base)
                w_seg, f_seg = transport_unitary(seg, rotation=rot)
                w = w_seg @ w
                flags += f_seg
            prev = v
            u_here = _frame(with_axis_value(base, axis, v), rot)
            for seed in seeds:
                psi = dagger(w) @ seed.operator.matrix @ w
                est = spectral_function(u_here, FockOperator(psi), seed.target_phase, config)
                rows.append((v, seed.target_phase, est.value, _order_residual(psi), flags))
    rows.sort(key=lambda r: (r[0], -r[1]))
    return rows


def disorder_clean_point(N: int, T: float = 1.0) -> DriveParameters:
    """Clean anchor of the disorder study: the ideal point with bond
    strength ``5 pi / (4 T)``."""
    return ideal_parameters(N, J=5.0 * math.pi / (4.0 * T), T=T)


def disorder_study(N: int, w_values, realizations: int,
                   config: SpectralConfig | None = None, seed: int = 0,
                   T: float = 1.0, transport: bool = True):
    """Disorder-averaged spectral weight of the transported probes.

    For each half-width ``w`` and realization index the couplings are drawn
    uniformly around the clean point, the probes are carried from the clean
    point to the realization along a straight interpolation (unless
    ``transport`` is false, in which case the clean seeds are used
    directly), and the +-pi/2 weights of the two transported probes are
    evaluated.  Returns (per_realization_rows, aggregate_rows):
    per-realization rows are ``(w, N, realization, probe_phase, s,
    order_residual, branch_flags)``; aggregates are
    ``(w, N, mean_s, std_s, count)`` over both probes.
    """
    from .exact_modes import ideal_left_modes

    config = config or SpectralConfig()
    clean = disorder_clean_point(N, T)
    rot = rotation_R(N).matrix
    seeds = ideal_left_modes(N)
    rows = []
    aggregates = []
    for w in w_values:
        spec = DisorderSpec.isotropic(float(w), seed=seed, realizations=realizations)
        values = []
        for r in range(realizations):
            params = sample_disorder(spec, clean, r)
            u_here = _frame(params, rot)
            if transport and w > 0:
                path = ParameterPath(
                    axis="interpolate", start=0.0, end=1.0,
                    steps=default_steps(clean, params), base=clean, target=params,
                )
                w_tr, flags = transport_unitary(path, rotation=rot)
            else:
                w_tr, flags = np.eye(4**N, dtype=complex), 0
            for seed_mode in seeds:
                psi = dagger(w_tr) @ seed_mode.operator.matrix @ w_tr
                est = spectral_function(u_here, FockOperator(psi), seed_mode.target_phase, config)
                rows.append((float(w), N, r, seed_mode.target_phase, est.value,
                             _order_residual(psi), flags))
                values.append(est.value)
        values = np.asarray(values)
        aggregates.append((float(w), N, float(values.mean()), float(values.std()), len(values)))
    return rows, aggregates


CROSS_DEFORMATION_CASES = ("zero_field_J1", "zero_field_to_noninteracting",
                           "noninteracting_to_zero_field", "zero_pairing_delta")


def cross_deformation(case: str, values, config: SpectralConfig | None = None,
                      N: int = 4, T: float = 1.0):
    """Transported solvable-case modes along the four canonical paths.

    ``zero_field_J1``: zero-field seeds, Zeeman field swept up from zero.
    ``zero_field_to_noninteracting`` / reverse: the straight path trading
    interaction strength for Zeeman field between the two solvable points
    (parametrized by the fraction 0 -> 1 of the way).
    ``zero_pairing_delta``: nilpotent zero/pi seeds against the
    hopping/pairing imbalance.

    Rows: ``(case, axis_value, mode_label, target_phase, s_value)``.
    """
    from .exact_modes import noninteracting_modes, zero_field_modes, zero_pairing_modes

    config = config or SpectralConfig()
    u5 = 5.0 * math.pi / T
    rows = []

    if case == "zero_field_J1":
        base = solvable_parameters("zero_field", N, T)
        seeds = zero_field_modes(N)
        anchor, axis = 0.0, "J1"
    elif case == "zero_field_to_noninteracting":
        base = solvable_parameters("zero_field", N, T)
        target = base.replace_families(J1=np.full(N, u5 / 2), U=np.zeros(N))
        seeds = zero_field_modes(N)
        anchor, axis = 0.0, "interpolate"
    elif case == "noninteracting_to_zero_field":
        base = solvable_parameters("noninteracting", N, T)
        target = base.replace_families(J1=np.zeros(N), U=np.full(N, u5))
        seeds = noninteracting_modes(N)
        anchor, axis = 0.0, "interpolate"
    elif case == "zero_pairing_delta":
        base = solvable_parameters("zero_pairing", N, T)
        all_modes = zero_pairing_modes(N)
        seeds = (all_modes[4], all_modes[5])  # the nilpotent pair
        anchor, axis = u5 / 4, "delta"
    else:
        raise ValueError(f"unknown case {case!r}; expected one of {CROSS_DEFORMATION_CASES}")

    values = sorted(float(v) for v in values)
    for direction in (+1, -1):
        leg = [v for v in values if (v >= anchor if direction > 0 else v < anchor)]
        leg.sort(reverse=(direction < 0))
        w = np.eye(4**N, dtype=complex)
        prev = anchor
        for v in leg:
            if axis == "interpolate":
                pa = interpolate_parameters(base, target, prev)
                pb = interpolate_parameters(base, target, v)
                seg = ParameterPath(axis="interpolate", start=prev, end=v,
                                    steps=default_steps(pa, pb), base=base, target=target)
                params_here = pb
            else:
                pa, pb = with_axis_value(base, axis, prev), with_axis_value(base, axis, v)
                seg = ParameterPath(axis=axis, start=prev, end=v,
                                    steps=default_steps(pa, pb), base=base)
                params_here = pb
            if abs(v - prev) > 1e-15:
                w_seg, _ = transport_unitary(seg, rotation=None)
                w = w_seg @ w
            prev = v
            u_here = build_floquet(params_here).matrix
            for seed in seeds:
                psi = dagger(w) @ seed.operator.matrix @ w
                est = spectral_function(u_here, FockOperator(psi), seed.target_phase, config)
                rows.append((case, v, seed.operator.label, seed.target_phase, est.value))
    rows.sort(key=lambda r: (r[1], r[2]))
    return rows
