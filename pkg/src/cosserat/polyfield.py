"""Exact calculus on polynomial fields over R^3.

A scalar field is a map from multi-degree ``(i, j, k)`` to a coefficient of
``x1^i x2^j x3^k``.  Coefficients are kept as exact rationals (any float
converts exactly), so differential identities such as ``Div Curl P = 0``
hold exactly on coefficients.  Evaluation at points is done in floating
point, which is what the Nye checks measure.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidInput
from .tensor import LEVI_CIVITA

MAX_DEGREE = 6

Monomial = tuple[int, int, int]


class PolyScalarField:
    """Polynomial scalar field with at most degree ``MAX_DEGREE``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[Monomial, float] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (coeffs or {}).items():
            mono = tuple(int(p) for p in mono)
            if len(mono) != 3 or min(mono) < 0:
                raise InvalidInput(f"bad monomial {mono}")
            if sum(mono) > MAX_DEGREE:
                raise InvalidInput(f"monomial {mono} exceeds degree {MAX_DEGREE}")
            if not isinstance(c, Fraction):
                if not np.isfinite(float(c)):
                    raise InvalidInput("non-finite coefficient")
                c = Fraction(c)
            if c != 0:
                clean[mono] = clean.get(mono, 0) + c
        self._coeffs = {m: c for m, c in clean.items() if c != 0}

    @classmethod
    def constant(cls, c: float) -> PolyScalarField:
        return cls({(0, 0, 0): c})

    @classmethod
    def coordinate(cls, axis: int) -> PolyScalarField:
        mono = [0, 0, 0]
        mono[axis] = 1
        return cls({tuple(mono): 1.0})

    @property
    def coeffs(self) -> dict[Monomial, float]:
        return {m: float(c) for m, c in self._coeffs.items()}

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self._coeffs), default=0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float)):
            other = PolyScalarField.constant(other)
        return isinstance(other, PolyScalarField) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        return f"PolyScalarField({self._coeffs})"

    def __add__(self, other) -> PolyScalarField:
        if isinstance(other, (int, float)):
            other = PolyScalarField.constant(other)
        if not isinstance(other, PolyScalarField):
            return NotImplemented
        out = dict(self._coeffs)
        for m, c in other._coeffs.items():
            out[m] = out.get(m, 0) + c
        return PolyScalarField(out)

    __radd__ = __add__

    def __neg__(self) -> PolyScalarField:
        return PolyScalarField({m: -c for m, c in self._coeffs.items()})

    def __sub__(self, other) -> PolyScalarField:
        return self + (-other)

    def __rsub__(self, other) -> PolyScalarField:
        return (-self) + other

    def __mul__(self, other) -> PolyScalarField:
        if isinstance(other, (int, float, np.floating, Fraction)):
            f = Fraction(other) if not isinstance(other, Fraction) else other
            return PolyScalarField({m: f * c for m, c in self._coeffs.items()})
        if not isinstance(other, PolyScalarField):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for (m1, c1), (m2, c2) in product(self._coeffs.items(), other._coeffs.items()):
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            out[m] = out.get(m, 0) + c1 * c2
        return PolyScalarField(out)

    __rmul__ = __mul__

    def diff(self, axis: int) -> PolyScalarField:
        """Exact partial derivative with respect to ``x_{axis+1}``."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self._coeffs.items():
            p = m[axis]
            if p == 0:
                continue
            mm = list(m)
            mm[axis] = p - 1
            out[tuple(mm)] = c * p
        return PolyScalarField(out)

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        x = pts[..., 0]
        y = pts[..., 1]
        z = pts[..., 2]
        out = np.zeros(pts.shape[:-1])
        for (i, j, k), c in self._coeffs.items():
            out = out + float(c) * x**i * y**j * z**k
        return out


def _zero() -> PolyScalarField:
    return PolyScalarField()


class PolyVectorField:
    """Three polynomial components."""

    __slots__ = ("comps",)

    def __init__(self, comps: Iterable[PolyScalarField]):
        comps = tuple(comps)
        if len(comps) != 3 or not all(isinstance(c, PolyScalarField) for c in comps):
            raise InvalidInput("a vector field needs three PolyScalarField components")
        self.comps = comps

    @classmethod
    def zero(cls) -> PolyVectorField:
        return cls((_zero(), _zero(), _zero()))

    @classmethod
    def position(cls) -> PolyVectorField:
        """The identity map ``x -> x``."""
        return cls(PolyScalarField.coordinate(a) for a in range(3))

    @classmethod
    def constant(cls, v) -> PolyVectorField:
        return cls(PolyScalarField.constant(c) for c in np.asarray(v, dtype=float))

    def __getitem__(self, i: int) -> PolyScalarField:
        return self.comps[i]

    def __add__(self, other: PolyVectorField) -> PolyVectorField:
        return PolyVectorField(a + b for a, b in zip(self.comps, other.comps))

    def __sub__(self, other: PolyVectorField) -> PolyVectorField:
        return PolyVectorField(a - b for a, b in zip(self.comps, other.comps))

    def __neg__(self) -> PolyVectorField:
        return PolyVectorField(-a for a in self.comps)

    def __mul__(self, s: float) -> PolyVectorField:
        return PolyVectorField(a * s for a in self.comps)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyVectorField) and self.comps == other.comps

    __hash__ = None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __call__(self, points) -> np.ndarray:
        return np.stack([c(points) for c in self.comps], axis=-1)


class PolyMatrixField:
    """3x3 polynomial components, ``entries[i][j]``."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        rows = tuple(tuple(r) for r in entries)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise InvalidInput("a matrix field needs 3x3 components")
        if not all(isinstance(c, PolyScalarField) for r in rows for c in r):
            raise InvalidInput("matrix field entries must be PolyScalarField")
        self.entries = rows

    @classmethod
    def zero(cls) -> PolyMatrixField:
        return cls([[_zero() for _ in range(3)] for _ in range(3)])

    @classmethod
    def constant(cls, m) -> PolyMatrixField:
        m = np.asarray(m, dtype=float)
        return cls([[PolyScalarField.constant(m[i, j]) for j in range(3)] for i in range(3)])

    @classmethod
    def identity_times(cls, f: PolyScalarField) -> PolyMatrixField:
        return cls([[f if i == j else _zero() for j in range(3)] for i in range(3)])

    def __getitem__(self, ij) -> PolyScalarField:
        i, j = ij
        return self.entries[i][j]

    def _map2(self, other, op) -> PolyMatrixField:
        return PolyMatrixField(
            [[op(self.entries[i][j], other.entries[i][j]) for j in range(3)] for i in range(3)]
        )

    def __add__(self, other: PolyMatrixField) -> PolyMatrixField:
        return self._map2(other, lambda a, b: a + b)

    def __sub__(self, other: PolyMatrixField) -> PolyMatrixField:
        return self._map2(other, lambda a, b: a - b)

    def __neg__(self) -> PolyMatrixField:
        return PolyMatrixField([[-c for c in r] for r in self.entries])

    def __mul__(self, s: float) -> PolyMatrixField:
        return PolyMatrixField([[c * s for c in r] for r in self.entries])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrixField) and self.entries == other.entries

    __hash__ = None

    @property
    def T(self) -> PolyMatrixField:
        return PolyMatrixField([[self.entries[j][i] for j in range(3)] for i in range(3)])

    def trace(self) -> PolyScalarField:
        return self.entries[0][0] + self.entries[1][1] + self.entries[2][2]

    def sym(self) -> PolyMatrixField:
        return (self + self.T) * 0.5

    def skew(self) -> PolyMatrixField:
        return (self - self.T) * 0.5

    def dev(self) -> PolyMatrixField:
        return self - PolyMatrixField.identity_times(self.trace() * (1.0 / 3.0))

    def is_skew(self) -> bool:
        """Structural skew-symmetry: ``P + P^T`` vanishes on coefficients."""
        return all((self.entries[i][j] + self.entries[j][i]).is_zero() for i in range(3) for j in range(3))

    def is_zero(self) -> bool:
        return all(c.is_zero() for r in self.entries for c in r)

    def row(self, i: int) -> PolyVectorField:
        return PolyVectorField(self.entries[i])

    def __call__(self, points) -> np.ndarray:
        return np.stack([np.stack([c(points) for c in r], axis=-1) for r in self.entries], axis=-2)


def anti_field(v: PolyVectorField) -> PolyMatrixField:
    """Skew matrix field with axial vector ``v``."""
    z = _zero()
    return PolyMatrixField(
        [
            [z, -v[2], v[1]],
            [v[2], z, -v[0]],
            [-v[1], v[0], z],
        ]
    )


def axl_field(a: PolyMatrixField) -> PolyVectorField:
    if not a.is_skew():
        raise InvalidInput("axl_field expects a structurally skew field")
    return PolyVectorField((a[2, 1], a[0, 2], a[1, 0]))


def scalar_grad(f: PolyScalarField) -> PolyVectorField:
    return PolyVectorField(f.diff(a) for a in range(3))


def vector_grad(v: PolyVectorField) -> PolyMatrixField:
    """``(Dv)_ij = d v_i / d x_j``."""
    return PolyMatrixField([[v[i].diff(j) for j in range(3)] for i in range(3)])


def vector_div(v: PolyVectorField) -> PolyScalarField:
    return v[0].diff(0) + v[1].diff(1) + v[2].diff(2)


def vector_curl(v: PolyVectorField) -> PolyVectorField:
    """``(curl v)_i = eps_ijk v_k,j``."""
    comps = []
    for i in range(3):
        acc = _zero()
        for j, k in product(range(3), range(3)):
            e = LEVI_CIVITA[i, j, k]
            if e != 0.0:
                acc = acc + v[k].diff(j) * e
        comps.append(acc)
    return PolyVectorField(comps)


def matrix_curl(p: PolyMatrixField) -> PolyMatrixField:
    """Row-wise curl, ``(Curl P)_ij = eps_jmn P_in,m``."""
    return PolyMatrixField([vector_curl(p.row(i)).comps for i in range(3)])


def matrix_div(p: PolyMatrixField) -> PolyVectorField:
    """Row-wise divergence, ``(Div P)_i = P_ij,j``."""
    return PolyVectorField(vector_div(p.row(i)) for i in range(3))


def random_scalar(rng: np.random.Generator, degree: int, low: float = -1.0, high: float = 1.0) -> PolyScalarField:
    """All monomials up to ``degree`` with uniform coefficients."""
    if not 0 <= degree <= MAX_DEGREE:
        raise InvalidInput(f"degree must be in [0, {MAX_DEGREE}]")
    monos = [m for m in product(range(degree + 1), repeat=3) if sum(m) <= degree]
    return PolyScalarField({m: rng.uniform(low, high) for m in monos})


def random_vector(rng: np.random.Generator, degree: int) -> PolyVectorField:
    return PolyVectorField(random_scalar(rng, degree) for _ in range(3))


def random_skew(rng: np.random.Generator, degree: int) -> PolyMatrixField:
    return anti_field(random_vector(rng, degree))


def random_matrix(rng: np.random.Generator, degree: int) -> PolyMatrixField:
    return PolyMatrixField([[random_scalar(rng, degree) for _ in range(3)] for _ in range(3)])


def nye_forward(k) -> np.ndarray:
    """Pointwise dislocation density from the curvature, ``K^T - tr(K) Id``."""
    k = np.asarray(k, dtype=float)
    return np.swapaxes(k, -1, -2) - np.trace(k, axis1=-2, axis2=-1)[..., None, None] * np.eye(3)


def nye_inverse(alpha) -> np.ndarray:
    """Pointwise curvature from the dislocation density, ``alpha^T - tr(alpha)/2 Id``."""
    a = np.asarray(alpha, dtype=float)
    return np.swapaxes(a, -1, -2) - 0.5 * np.trace(a, axis1=-2, axis2=-1)[..., None, None] * np.eye(3)


def curvature_field(a: PolyMatrixField) -> PolyMatrixField:
    """``D axl A`` for a skew field."""
    return vector_grad(axl_field(a))


def dislocation_field(a: PolyMatrixField) -> PolyMatrixField:
    """``-Curl A``."""
    return -matrix_curl(a)


def _sym(x):
    return 0.5 * (x + np.swapaxes(x, -1, -2))


def _skew(x):
    return 0.5 * (x - np.swapaxes(x, -1, -2))


def _dev(x):
    return x - (np.trace(x, axis1=-2, axis2=-1) / 3.0)[..., None, None] * np.eye(3)


def nye_discrepancies(a: PolyMatrixField, sample_points) -> dict[str, float]:
    """Max absolute violation of Nye's formula and its consequences.

    Both curvature measures are computed by exact field calculus and then
    evaluated independently at the sample points, so the comparison is a
    genuine floating-point check rather than a symbolic tautology.
    """
    if not a.is_skew():
        raise InvalidInput("Nye verification needs a skew matrix field")
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))
    if pts.shape[-1] != 3:
        raise InvalidInput("sample points must be 3-vectors")
    curl_a = matrix_curl(a)(pts)
    kk = curvature_field(a)(pts)
    alpha = -curl_a
    eye = np.eye(3)
    tr_k = np.trace(kk, axis1=-2, axis2=-1)
    tr_a = np.trace(alpha, axis1=-2, axis2=-1)
    curl_t = np.swapaxes(curl_a, -1, -2)
    checks = {
        "nye": kk - (-curl_t + 0.5 * np.trace(curl_t, axis1=-2, axis2=-1)[..., None, None] * eye),
        "forward": alpha - (np.swapaxes(kk, -1, -2) - tr_k[..., None, None] * eye),
        "dev_sym": _dev(_sym(alpha)) - _dev(_sym(kk)),
        "skew": _skew(alpha) + _skew(kk),
        "sym": _sym(alpha) - (_sym(kk) - tr_k[..., None, None] * eye),
        "trace": tr_a + 2.0 * tr_k,
    }
    return {name: float(np.max(np.abs(v))) if v.size else 0.0 for name, v in checks.items()}


def verify_nye(a: PolyMatrixField, sample_points) -> float:
    """Largest discrepancy over Nye's formula and its four consequences."""
    return max(nye_discrepancies(a, sample_points).values())
