"""Small 3x3 tensor algebra.

Matrices are plain ``numpy`` arrays of shape ``(3, 3)``; vectors have shape
``(3,)``.  The helpers here validate finiteness, split a matrix into its
orthogonal Cartan parts, map between skew matrices and axial vectors, and
solve the small symmetric (generalized) eigenproblems used by the wave and
ellipticity code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, InvalidMass

IDENTITY = np.eye(3)

# Levi-Civita symbol, LEVI_CIVITA[i, j, k] = eps_ijk
LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_j, _i, _k] = -1.0

SKEW_TOL = 1e-12
JACOBI_TOL = 1e-14
SYMMETRY_TOL = 1e-12


def as_matrix3(x, name: str = "matrix") -> np.ndarray:
    """Return ``x`` as a finite float ``(3, 3)`` array or raise InvalidInput."""
    a = np.asarray(x, dtype=float)
    if a.shape != (3, 3):
        raise InvalidInput(f"{name} must have shape (3, 3), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def as_vector3(x, name: str = "vector") -> np.ndarray:
    """Return ``x`` as a finite float ``(3,)`` array or raise InvalidInput."""
    a = np.asarray(x, dtype=float)
    if a.shape != (3,):
        raise InvalidInput(f"{name} must have shape (3,), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def sym(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x + x.T)


def skew(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x - x.T)


def dev(x: np.ndarray) -> np.ndarray:
    return x - (np.trace(x) / 3.0) * IDENTITY


def dev_sym(x: np.ndarray) -> np.ndarray:
    return dev(sym(x))


def inner(x: np.ndarray, y: np.ndarray) -> float:
    """Frobenius product ``tr(x y^T)``."""
    return float(np.sum(x * y))


def norm_sq(x: np.ndarray) -> float:
    return float(np.sum(x * x))


@dataclass(frozen=True)
class CartanParts:
    """Orthogonal split ``X = dev_sym + skew + (trace / 3) Id``."""

    dev_sym: np.ndarray
    skew: np.ndarray
    trace: float

    def recompose(self) -> np.ndarray:
        return self.dev_sym + self.skew + (self.trace / 3.0) * IDENTITY


def decompose(x) -> CartanParts:
    """Split a matrix into traceless symmetric, skew and spherical parts."""
    x = as_matrix3(x, "X")
    return CartanParts(dev_sym=dev_sym(x), skew=skew(x), trace=float(np.trace(x)))


def anti(v) -> np.ndarray:
    """Skew matrix with ``anti(v) @ w == cross(v, w)``."""
    v = as_vector3(v, "v")
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


def axl(a) -> np.ndarray:
    """Axial vector of a skew matrix, ``axl(A)_k = -1/2 eps_ijk A_ij``.

    Raises InvalidInput if the symmetric part of ``a`` exceeds ``1e-12``
    relative to ``|a|``.
    """
    a = as_matrix3(a, "A")
    scale = np.linalg.norm(a)
    if np.linalg.norm(sym(a)) > SKEW_TOL * max(scale, 1.0):
        raise InvalidInput("axl expects a skew-symmetric matrix")
    return np.array([a[2, 1], a[0, 2], a[1, 0]])


def _jacobi_rotation(app: float, aqq: float, apq: float) -> tuple[float, float]:
    theta = (aqq - app) / (2.0 * apq)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c, t * c


def sym_eigen(s) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi sweeps.

    Returns ``(w, V)`` with ascending eigenvalues ``w`` and orthonormal
    eigenvectors in the columns of ``V``.  Exact zero off-diagonal entries are
    never rotated, so a block-decoupled input keeps block-supported
    eigenvectors even when eigenvalues from different blocks coincide.
    """
    s = as_matrix3(s, "S")
    scale = float(np.linalg.norm(s))
    if np.linalg.norm(s - s.T) > SYMMETRY_TOL * scale:
        raise InvalidInput("sym_eigen expects a symmetric matrix")
    a = sym(s)
    v = np.eye(3)
    if scale == 0.0:
        return np.zeros(3), v
    for _ in range(64):
        off = np.sqrt(2.0 * (a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2))
        if off <= JACOBI_TOL * scale:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            if a[p, q] == 0.0:
                continue
            c, sn = _jacobi_rotation(a[p, p], a[q, q], a[p, q])
            j = np.eye(3)
            j[p, p] = j[q, q] = c
            j[p, q] = sn
            j[q, p] = -sn
            a = j.T @ a @ j
            a[p, q] = a[q, p] = 0.0
            v = v @ j
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _mass_diagonal(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.shape == (3,):
        d = m
    else:
        m = as_matrix3(m, "M")
        if np.any(m[~np.eye(3, dtype=bool)] != 0.0):
            raise InvalidInput("mass matrix must be diagonal")
        d = np.diag(m)
    if not np.all(np.isfinite(d)) or np.any(d <= 0.0):
        raise InvalidMass(f"mass entries must be finite and positive, got {d}")
    return d


def gen_eigen_diag(q, m, *, vectors: bool = False):
    """Generalized eigenvalues of ``Q w = omega^2 M w`` for diagonal ``M > 0``.

    The pencil is reduced by the congruence ``M^{-1/2} Q M^{-1/2}``.  With
    ``vectors=True`` also returns ``W`` whose columns are M-orthonormal
    eigenvectors of the original pencil.
    """
    scale = 1.0 / np.sqrt(_mass_diagonal(m))
    q = as_matrix3(q, "Q")
    w, y = sym_eigen(scale[:, None] * q * scale[None, :])
    if vectors:
        return w, scale[:, None] * y
    return w


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation about ``axis`` by ``angle`` radians."""
    n = as_vector3(axis, "axis")
    n = n / np.linalg.norm(n)
    k = anti(n)
    return IDENTITY + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniformly distributed rotation from a random unit quaternion."""
    qw, qx, qy, qz = rng.normal(size=4)
    n = np.sqrt(qw * qw + qx * qx + qy * qy + qz * qz)
    qw, qx, qy, qz = qw / n, qx / n, qy / n, qz / n
    return np.array(
        [
            [1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qz * qw), 2 * (qx * qz + qy * qw)],
            [2 * (qx * qy + qz * qw), 1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qx * qw)],
            [2 * (qx * qz - qy * qw), 2 * (qy * qz + qx * qw), 1 - 2 * (qx * qx + qy * qy)],
        ]
    )
