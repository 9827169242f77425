"""Plane-wave dispersion of the Cosserat medium.

For propagation along ``e1`` the six amplitudes split into two decoupled
3x3 generalized eigenproblems ``Q(k) w = omega^2 M w``.  Block 1 couples
``(u1, u2, theta3)``, block 2 couples ``(u3, theta1, theta2)``.  Isotropy
makes this direction representative; :func:`isotropy_deviation` checks that
claim against the full 6x6 operator for an arbitrary direction.

All inputs are SI: Pa, m, kg/m^3 and kg/m for the rotational inertia.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .constitutive import acoustic_blocks, check_conditions
from .errors import EvanescentBranch, InvalidInput, MissingDynamicData, Unavailable
from .params import DislocationParams, TaggedParams, UnitSystem, convert_units, to_dislocation
from .tensor import anti, as_vector3, gen_eigen_diag

BLOCK_LABELS = (
    ("longitudinal-acoustic", "shear-acoustic-xy", "shear-rotational-optical-xy"),
    ("compressional-rotational-optical", "shear-acoustic-xz", "shear-rotational-optical-xz"),
)
LABELS = BLOCK_LABELS[0] + BLOCK_LABELS[1]
# index of the amplitude that is decoupled in each block
_DECOUPLED = (0, 1)
SCAN_RTOL = 1e-12


@dataclass(frozen=True)
class WaveMedium:
    """Dislocation-format parameters in SI units with density and inertia."""

    d: DislocationParams
    rho: float
    rot_inertia: float

    def __post_init__(self):
        if self.d.has_infinite:
            raise Unavailable("waves need finite moduli")
        for name in ("rho", "rot_inertia"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidInput(f"{name} must be positive and finite, got {v}")

    @classmethod
    def from_params(cls, p: TaggedParams | DislocationParams) -> WaveMedium:
        if isinstance(p, DislocationParams):
            p = TaggedParams.wrap(p, UnitSystem.SI)
        d = to_dislocation(convert_units(p, UnitSystem.SI))
        if d.rho is None or d.rot_inertia is None:
            raise MissingDynamicData("dynamic data required: rho and rot_inertia")
        return cls(d, d.rho, d.rot_inertia)

    @property
    def curvature_scale(self) -> float:
        return self.d.curvature_scale


def _check_k(k: float) -> float:
    k = float(k)
    if not math.isfinite(k) or k < 0:
        raise InvalidInput(f"wavenumber must be finite and non-negative, got {k}")
    return k


def propagation_matrices(w: WaveMedium, k: float):
    """``(Q1, M1, Q2, M2)`` for propagation along ``e1``."""
    k = _check_k(k)
    d = w.d
    c = w.curvature_scale
    mc = d.mu_c
    rot_t = k * k * c * (d.alpha1 + d.alpha2) + 4.0 * mc
    q1 = np.array(
        [
            [k * k * (2.0 * d.mu_e + d.lambda_e), 0.0, 0.0],
            [0.0, k * k * (d.mu_e + mc), -2.0 * k * mc],
            [0.0, -2.0 * k * mc, rot_t],
        ]
    )
    q2 = np.array(
        [
            [k * k * (d.mu_e + mc), 0.0, 2.0 * k * mc],
            [0.0, k * k * c * (2.0 * d.alpha1 + d.alpha3) + 4.0 * mc, 0.0],
            [2.0 * k * mc, 0.0, rot_t],
        ]
    )
    m1 = np.diag([w.rho, w.rho, w.rot_inertia])
    m2 = np.diag([w.rho, w.rot_inertia, w.rot_inertia])
    return q1, m1, q2, m2


def propagation_derivatives(w: WaveMedium, k: float):
    """Exact ``dQ1/dk`` and ``dQ2/dk``."""
    k = _check_k(k)
    d = w.d
    c = w.curvature_scale
    mc = d.mu_c
    rot_t = 2.0 * k * c * (d.alpha1 + d.alpha2)
    dq1 = np.array(
        [
            [2.0 * k * (2.0 * d.mu_e + d.lambda_e), 0.0, 0.0],
            [0.0, 2.0 * k * (d.mu_e + mc), -2.0 * mc],
            [0.0, -2.0 * mc, rot_t],
        ]
    )
    dq2 = np.array(
        [
            [2.0 * k * (d.mu_e + mc), 0.0, 2.0 * mc],
            [0.0, 2.0 * k * c * (2.0 * d.alpha1 + d.alpha3), 0.0],
            [2.0 * mc, 0.0, rot_t],
        ]
    )
    return dq1, dq2


@dataclass(frozen=True)
class BlockSolution:
    omega_sq: np.ndarray  # (3,)
    vectors: np.ndarray  # columns, M-orthonormal
    labels: tuple[str, ...]


def _label_block(block: int, omega_sq: np.ndarray, vectors: np.ndarray) -> tuple[str, ...]:
    """Structural labels: the decoupled amplitude, then acoustic below optical."""
    idx = _DECOUPLED[block]
    weight = np.abs(vectors[idx, :]) / np.linalg.norm(vectors, axis=0)
    dec = int(np.argmax(weight))
    rest = [i for i in range(3) if i != dec]
    rest.sort(key=lambda i: omega_sq[i])
    names = BLOCK_LABELS[block]
    labels = [""] * 3
    labels[dec] = names[0]
    labels[rest[0]] = names[1]
    labels[rest[1]] = names[2]
    return tuple(labels)


def solve_blocks(w: WaveMedium, k: float) -> tuple[BlockSolution, BlockSolution]:
    q1, m1, q2, m2 = propagation_matrices(w, k)
    out = []
    for b, (q, m) in enumerate(((q1, m1), (q2, m2))):
        vals, vecs = gen_eigen_diag(q, m, vectors=True)
        out.append(BlockSolution(vals, vecs, _label_block(b, vals, vecs)))
    return out[0], out[1]


def branch_frequencies(w: WaveMedium, k: float) -> dict[str, float]:
    """Squared frequencies of the six branches at one wavenumber."""
    res = {}
    for sol in solve_blocks(w, k):
        for lab, om2 in zip(sol.labels, sol.omega_sq):
            res[lab] = float(om2)
    return res


def _group(dq: np.ndarray, m: np.ndarray, vec: np.ndarray, omega_sq: float) -> float:
    if omega_sq <= 0:
        return math.nan
    dom2 = float(vec @ dq @ vec) / float(vec @ m @ vec)
    return dom2 / (2.0 * math.sqrt(omega_sq))


def velocities(w: WaveMedium, k: float, branch: str) -> tuple[float, float]:
    """Phase velocity ``omega/k`` and group velocity ``d omega/d k``.

    The group velocity uses the exact derivative of ``Q`` projected on the
    eigenvector, so no finite differencing is involved.
    """
    k = _check_k(k)
    if k == 0:
        raise InvalidInput("velocities need k > 0")
    if branch not in LABELS:
        raise InvalidInput(f"unknown branch {branch!r}")
    sols = solve_blocks(w, k)
    _, m1, _, m2 = propagation_matrices(w, k)
    dqs = propagation_derivatives(w, k)
    for sol, m, dq in zip(sols, (m1, m2), dqs):
        if branch in sol.labels:
            i = sol.labels.index(branch)
            om2 = float(sol.omega_sq[i])
            if om2 <= 0:
                raise EvanescentBranch(f"{branch} has omega^2 = {om2} at k = {k}")
            return math.sqrt(om2) / k, _group(dq, m, sol.vectors[:, i], om2)
    raise AssertionError("unreachable")


def _sqrt_nan(x: float) -> float:
    return math.sqrt(x) if x >= 0 else math.nan


def asymptotic_velocities(w: WaveMedium) -> dict[str, float]:
    """Large-k speeds and the cut-off frequency; NaN where imaginary."""
    d = w.d
    c = w.curvature_scale
    return {
        "c_p": _sqrt_nan((d.lambda_e + 2.0 * d.mu_e) / w.rho),
        "c_t": _sqrt_nan(d.mu_e / w.rho),
        "c_s": _sqrt_nan((d.mu_e + d.mu_c) / w.rho),
        "c_mp": _sqrt_nan(c * (2.0 * d.alpha1 + d.alpha3) / w.rot_inertia),
        "c_ms": _sqrt_nan(c * (d.alpha1 + d.alpha2) / w.rot_inertia),
        "cutoff": 2.0 * _sqrt_nan(d.mu_c / w.rot_inertia),
    }


@dataclass
class BranchSeries:
    label: str
    omega: np.ndarray
    omega_sq: np.ndarray
    phase_velocity: np.ndarray
    group_velocity: np.ndarray
    real: np.ndarray


@dataclass
class DispersionResult:
    k_grid: np.ndarray
    branches: dict[str, BranchSeries]
    cutoff_frequency: float
    asymptotic: dict[str, float]
    real_plane_waves: bool = field(default=True)

    def rows(self):
        """``(k, label, omega, omega_sq, phase, group, real)`` in grid order."""
        for i, k in enumerate(self.k_grid):
            for lab in LABELS:
                s = self.branches[lab]
                yield (
                    float(k),
                    lab,
                    float(s.omega[i]),
                    float(s.omega_sq[i]),
                    float(s.phase_velocity[i]),
                    float(s.group_velocity[i]),
                    bool(s.real[i]),
                )


def _check_grid(k_grid) -> np.ndarray:
    ks = np.asarray(k_grid, dtype=float).ravel()
    if ks.size == 0:
        raise InvalidInput("empty wavenumber grid")
    if not np.all(np.isfinite(ks)) or np.any(ks < 0):
        raise InvalidInput("wavenumbers must be finite and non-negative")
    if np.any(np.diff(ks) <= 0):
        raise InvalidInput("wavenumber grid must be strictly increasing")
    return ks


def _match(prev: np.ndarray, new: np.ndarray, m: np.ndarray) -> tuple[int, ...]:
    """Permutation of ``new`` columns maximizing M-overlap with ``prev``."""
    overlap = np.abs(prev.T @ m @ new)
    best, best_perm = -1.0, (0, 1, 2)
    for perm in permutations(range(3)):
        s = overlap[0, perm[0]] + overlap[1, perm[1]] + overlap[2, perm[2]]
        if s > best:
            best, best_perm = s, perm
    return best_perm


def dispersion_sweep(w: WaveMedium, k_grid) -> DispersionResult:
    """Six branches over a grid, labels carried by eigenvector overlap."""
    ks = _check_grid(k_grid)
    n = ks.size
    data = {lab: {key: np.empty(n) for key in ("omega", "omega_sq", "phase", "group", "real")} for lab in LABELS}
    prev: list[np.ndarray | None] = [None, None]
    labels: list[tuple[str, ...]] = [(), ()]
    for i, k in enumerate(ks):
        q1, m1, q2, m2 = propagation_matrices(w, k)
        dqs = propagation_derivatives(w, k)
        for b, (q, m) in enumerate(((q1, m1), (q2, m2))):
            vals, vecs = gen_eigen_diag(q, m, vectors=True)
            if prev[b] is None:
                labels[b] = _label_block(b, vals, vecs)
                order = (0, 1, 2)
            else:
                order = _match(prev[b], vecs, m)
                vals = vals[list(order)]
                vecs = vecs[:, list(order)]
            # keep a consistent sign for the next overlap
            prev[b] = vecs
            for j, lab in enumerate(labels[b]):
                om2 = float(vals[j])
                real = om2 >= 0.0
                om = math.sqrt(abs(om2))
                rec = data[lab]
                rec["omega"][i] = om
                rec["omega_sq"][i] = om2
                rec["real"][i] = real
                if real and k > 0:
                    rec["phase"][i] = om / k
                else:
                    rec["phase"][i] = math.nan
                rec["group"][i] = _group(dqs[b], m, vecs[:, j], om2) if real else math.nan
    branches = {
        lab: BranchSeries(
            lab, r["omega"], r["omega_sq"], r["phase"], r["group"], r["real"].astype(bool)
        )
        for lab, r in data.items()
    }
    asym = asymptotic_velocities(w)
    return DispersionResult(
        ks, branches, asym["cutoff"], asym, bool(all(b.real.all() for b in branches.values()))
    )


def real_wave_scan(w: WaveMedium, k_grid) -> bool:
    """True iff no squared frequency is negative beyond rounding on the grid."""
    ks = _check_grid(k_grid)
    for k in ks:
        q1, m1, q2, m2 = propagation_matrices(w, k)
        for q, m in ((q1, m1), (q2, m2)):
            vals = gen_eigen_diag(q, m)
            tol = SCAN_RTOL * np.linalg.norm(q) / np.linalg.norm(m)
            if np.any(vals < -tol):
                return False
    return True


def closed_form_real_waves(w: WaveMedium) -> bool:
    return check_conditions(w.d).real_plane_waves


def default_k_grid(L_c: float, n: int = 200) -> np.ndarray:
    """Log-spaced grid over ``[1e-3, 1e4] / L_c``."""
    return np.logspace(-3.0, 4.0, n) / L_c


def full_propagation_matrix(w: WaveMedium, direction, k: float) -> tuple[np.ndarray, np.ndarray]:
    """6x6 operator for an arbitrary unit direction, built from the acoustic blocks."""
    k = _check_k(k)
    n = as_vector3(direction, "direction")
    q1h, q2h = acoustic_blocks(w.d, n, n)
    c = w.curvature_scale
    mc = w.d.mu_c
    cross = -2.0 * k * mc * anti(n)
    q = np.zeros((6, 6))
    q[:3, :3] = 2.0 * k * k * q1h
    q[3:, 3:] = 2.0 * k * k * c * q2h + 4.0 * mc * np.eye(3)
    q[3:, :3] = cross
    q[:3, 3:] = cross.T
    m = np.diag([w.rho] * 3 + [w.rot_inertia] * 3)
    return q, m


def isotropy_deviation(w: WaveMedium, direction, k: float) -> float:
    """Relative gap between the 6x6 spectrum along ``direction`` and along ``e1``."""
    q, m = full_propagation_matrix(w, direction, k)
    s = 1.0 / np.sqrt(np.diag(m))
    full = np.sort(np.linalg.eigvalsh(s[:, None] * q * s[None, :]))
    q1, m1, q2, m2 = propagation_matrices(w, k)
    ref = np.sort(np.concatenate([gen_eigen_diag(q1, m1), gen_eigen_diag(q2, m2)]))
    return float(np.max(np.abs(full - ref)) / max(np.max(np.abs(ref)), 1e-300))
