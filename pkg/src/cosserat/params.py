"""Material parameter records, notation conversions and unit handling.

Every notation is a frozen dataclass.  :class:`TaggedParams` wraps one of
them together with its unit system and an optional characteristic length.
Conversions always pass through the dislocation format, whose couple weights
are dimensionless once a length ``L_c`` is fixed.  Only the products
``mu_e * L_c**2 * alpha_i`` are physical, so targets with dimensional couple
moduli do not depend on that choice.

Units: ``MPa_mm`` stores moduli in MPa, lengths in mm and couple moduli in N;
``SI`` uses Pa, m and N.  Density and rotational inertia are always SI.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Union

from .errors import InvalidInput, MissingLengthScale, SchemaError, OutOfRange, Unavailable, UnsupportedNotation

INF = math.inf


class Notation(enum.Enum):
    DISLOCATION = "Dislocation"
    ERINGEN = "Eringen"
    NOWACKI = "Nowacki"
    MINDLIN = "MindlinMicropolar"
    LAKES = "Lakes"
    RELAXED = "RelaxedMicromorphic"

    @classmethod
    def parse(cls, text: str) -> Notation:
        key = text.replace("-", "").replace("_", "").replace(" ", "").lower()
        aliases = {"mindlin": cls.MINDLIN, "relaxed": cls.RELAXED}
        if key in aliases:
            return aliases[key]
        for member in cls:
            if member.value.lower() == key:
                return member
        raise SchemaError(f"unknown notation {text!r}")


class UnitSystem(enum.Enum):
    MPA_MM = "MPa_mm"
    SI = "SI"

    @classmethod
    def parse(cls, text: str) -> UnitSystem:
        for member in cls:
            if member.value.lower() == text.strip().lower():
                return member
        raise SchemaError(f"unknown unit system {text!r}")


# unit kinds: scale factor from MPa_mm to SI
_SCALE = {"modulus": 1e6, "length": 1e-3, "couple": 1.0, "none": 1.0, "si": 1.0}


def _check_value(name: str, value, allow_inf: bool = False, optional: bool = False):
    if value is None:
        if optional:
            return None
        raise InvalidInput(f"{name} is required")
    if isinstance(value, bool):
        raise SchemaError(f"{name} must be a number")
    try:
        v = float(value)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{name} must be a number, got {value!r}") from exc
    if math.isnan(v):
        raise InvalidInput(f"{name} is NaN")
    if math.isinf(v) and not (allow_inf and v > 0):
        raise InvalidInput(f"{name} may not be infinite")
    return v


class _Record:
    """Shared validation driven by field metadata."""

    def __post_init__(self):
        for f in fields(self):
            meta = f.metadata
            v = _check_value(
                f.name,
                getattr(self, f.name),
                allow_inf=meta.get("inf", False),
                optional=meta.get("optional", False),
            )
            object.__setattr__(self, f.name, v)

    @classmethod
    def unit_kinds(cls) -> dict[str, str]:
        return {f.name: f.metadata["unit"] for f in fields(cls)}

    @classmethod
    def json_keys(cls) -> dict[str, str]:
        """Map from JSON key to attribute name."""
        return {f.metadata.get("key", f.name): f.name for f in fields(cls)}


def _f(unit: str, *, inf: bool = False, optional: bool = False, key: str | None = None):
    meta = {"unit": unit, "inf": inf, "optional": optional}
    if key:
        meta["key"] = key
    if optional:
        return field(default=None, metadata=meta)
    return field(metadata=meta)


@dataclass(frozen=True)
class DislocationParams(_Record):
    """Moduli, characteristic length and dimensionless curvature weights."""

    lambda_e: float = _f("modulus", inf=True)
    mu_e: float = _f("modulus")
    mu_c: float = _f("modulus", inf=True)
    L_c: float = _f("length")
    alpha1: float = _f("none")
    alpha2: float = _f("none")
    alpha3: float = _f("none")
    rho: float | None = _f("si", optional=True)
    rot_inertia: float | None = _f("si", optional=True)

    def __post_init__(self):
        super().__post_init__()
        if not self.L_c > 0:
            raise InvalidInput(f"L_c must be positive, got {self.L_c}")

    @property
    def a_weights(self) -> tuple[float, float, float]:
        return alpha_to_a(self.alpha1, self.alpha2, self.alpha3)

    @property
    def curvature_scale(self) -> float:
        """``mu_e * L_c**2``."""
        return self.mu_e * self.L_c**2

    @property
    def gauge_products(self) -> tuple[float, float, float]:
        """``mu_e L_c^2 alpha_i``, independent of the choice of ``L_c``."""
        c = self.curvature_scale
        return (c * self.alpha1, c * self.alpha2, c * self.alpha3)

    @property
    def has_infinite(self) -> bool:
        return math.isinf(self.lambda_e) or math.isinf(self.mu_c)


@dataclass(frozen=True)
class EringenParams(_Record):
    lam: float = _f("modulus", inf=True, key="lambda")
    mu_star: float = _f("modulus")
    varkappa: float = _f("modulus")
    alpha: float = _f("couple")
    beta: float = _f("couple")
    gamma: float = _f("couple")
    j: float | None = _f("si", optional=True)
    rho: float | None = _f("si", optional=True)


@dataclass(frozen=True)
class NowackiParams(_Record):
    lambda_N: float = _f("modulus", inf=True)
    mu_N: float = _f("modulus")
    varkappa_N: float = _f("modulus", inf=True)
    alpha_N: float = _f("couple")
    beta_N: float = _f("couple")
    gamma_N: float = _f("couple")


@dataclass(frozen=True)
class MindlinMicropolarParams(_Record):
    lambda_M: float = _f("modulus", inf=True)
    mu_M: float = _f("modulus")
    mu_c_M: float = _f("modulus", inf=True)
    beta1_M: float = _f("couple")
    beta2_M: float = _f("couple")
    beta3_M: float = _f("couple")


@dataclass(frozen=True)
class LakesConstants(_Record):
    """Engineering (technical) constants of a micropolar solid.

    ``N = 1`` encodes an infinite couple modulus and ``nu = 1/2`` an infinite
    Lame modulus.  ``Psi`` may be ``None`` when it is undefined for the
    source parameters.
    """

    E: float = _f("modulus")
    G: float = _f("modulus")
    nu: float = _f("none")
    N: float = _f("none")
    ell_t: float = _f("length")
    ell_b: float = _f("length")
    Psi: float | None = _f("none", optional=True)

    @property
    def kappa_bulk(self) -> float:
        if self.nu == 0.5:
            return INF
        lam = self.lame_lambda
        return lam + 2.0 * self.G / 3.0

    @property
    def lame_lambda(self) -> float:
        d = self.E - 3.0 * self.G
        if d == 0.0:
            return INF
        return -self.G * (self.E - 2.0 * self.G) / d

    def _a1_a3(self) -> tuple[float, float] | None:
        if self.Psi is None or self.Psi == 0.0:
            return None
        a1 = 2.0 * self.G * self.ell_t**2
        return a1, a1 * 2.0 * (1.0 - self.Psi) / self.Psi

    @property
    def xi(self) -> float | None:
        """Micropolar twist Poisson ratio ``alpha3 / (2 (alpha1 + alpha3))``."""
        pair = self._a1_a3()
        if pair is None or pair[0] + pair[1] == 0.0:
            return None
        return pair[1] / (2.0 * (pair[0] + pair[1]))

    @property
    def curly_E(self) -> float | None:
        """Torsional modulus in N."""
        pair = self._a1_a3()
        if pair is None or pair[0] + pair[1] == 0.0:
            return None
        a1, a3 = pair
        return 0.5 * a1 * (2.0 * a1 + 3.0 * a3) / (a1 + a3)

    @property
    def curly_B(self) -> float | None:
        """Torsional bulk modulus in N."""
        pair = self._a1_a3()
        if pair is None:
            return None
        a1, a3 = pair
        return (2.0 * a1 + 3.0 * a3) / 6.0

    def validate(self) -> None:
        """Raise OutOfRange unless the constants describe a usable solid."""
        if self.Psi is None or not 0.0 < self.Psi <= 1.5:
            raise OutOfRange(f"Psi must lie in (0, 3/2], got {self.Psi}")
        if not 0.0 <= self.N <= 1.0:
            raise OutOfRange(f"N must lie in [0, 1], got {self.N}")
        if not self.G > 0:
            raise OutOfRange(f"G must be positive, got {self.G}")
        if self.ell_t < 0 or self.ell_b < 0:
            raise OutOfRange("characteristic lengths must be non-negative")


@dataclass(frozen=True)
class RelaxedMicromorphicParams(_Record):
    mu_e: float = _f("modulus")
    lambda_e: float = _f("modulus")
    mu_c: float = _f("modulus")
    mu_micro: float = _f("modulus")
    lambda_micro: float = _f("modulus")
    mu: float = _f("modulus")
    L_c: float = _f("length")
    a1: float = _f("none")
    a2: float = _f("none")
    a3: float = _f("none")


@dataclass(frozen=True)
class Mindlin22Coefficients:
    """Coefficients of the isotropic Mindlin micromorphic energy.

    ``a`` holds the fifteen curvature coefficients ``a1 .. a15`` in order.
    """

    b1: float
    b2: float
    b3: float
    g1: float
    g2: float
    a: tuple[float, ...]

    def a_coeff(self, i: int) -> float:
        return self.a[i - 1]


Payload = Union[
    DislocationParams,
    EringenParams,
    NowackiParams,
    MindlinMicropolarParams,
    LakesConstants,
    RelaxedMicromorphicParams,
]

PAYLOAD_TYPES: dict[Notation, type] = {
    Notation.DISLOCATION: DislocationParams,
    Notation.ERINGEN: EringenParams,
    Notation.NOWACKI: NowackiParams,
    Notation.MINDLIN: MindlinMicropolarParams,
    Notation.LAKES: LakesConstants,
    Notation.RELAXED: RelaxedMicromorphicParams,
}


@dataclass(frozen=True)
class TaggedParams:
    """A parameter record together with its notation and units.

    ``L_c`` is the gauge length used when entering the dislocation format
    from a notation that does not carry one.
    """

    notation: Notation
    payload: Payload
    unit_system: UnitSystem = UnitSystem.MPA_MM
    L_c: float | None = None

    def __post_init__(self):
        expected = PAYLOAD_TYPES[self.notation]
        if not isinstance(self.payload, expected):
            raise InvalidInput(
                f"{self.notation.value} expects {expected.__name__}, got {type(self.payload).__name__}"
            )
        if self.L_c is not None and not (math.isfinite(self.L_c) and self.L_c > 0):
            raise InvalidInput("L_c must be positive and finite")

    @classmethod
    def wrap(cls, payload: Payload, unit_system: UnitSystem = UnitSystem.MPA_MM, L_c: float | None = None):
        for notation, typ in PAYLOAD_TYPES.items():
            if isinstance(payload, typ):
                return cls(notation, payload, unit_system, L_c)
        raise InvalidInput(f"unsupported payload {type(payload).__name__}")


# ---------------------------------------------------------------- weights


def alpha_to_a(alpha1: float, alpha2: float, alpha3: float) -> tuple[float, float, float]:
    return (alpha1, alpha2, (2.0 * alpha1 + 3.0 * alpha3) / 8.0)


def a_to_alpha(a1: float, a2: float, a3: float) -> tuple[float, float, float]:
    return (a1, a2, (2.0 / 3.0) * (4.0 * a3 - a1))


def weight_convert(a1: float, a2: float, a3: float) -> tuple[float, float, float]:
    """Alias of :func:`a_to_alpha`."""
    return a_to_alpha(a1, a2, a3)


# ------------------------------------------------------------ conversions


def _require_finite(d: DislocationParams, what: str, names=("lambda_e", "mu_c")) -> None:
    for n in names:
        if math.isinf(getattr(d, n)):
            raise Unavailable(f"{what} is unavailable with {n} = inf")


def eringen_to_dislocation(er: EringenParams, L_c: float) -> DislocationParams:
    mu_e = er.mu_star + 0.5 * er.varkappa
    if mu_e == 0.0:
        raise InvalidInput("mu_e = mu_star + varkappa/2 vanishes")
    c = L_c**2 * mu_e
    return DislocationParams(
        lambda_e=er.lam,
        mu_e=mu_e,
        mu_c=0.5 * er.varkappa,
        L_c=L_c,
        alpha1=(er.gamma + er.beta) / c,
        alpha2=(er.gamma - er.beta) / c,
        alpha3=2.0 * er.alpha / c,
        rho=er.rho,
        rot_inertia=None if er.j is None or er.rho is None else er.rho * er.j,
    )


def dislocation_to_eringen(d: DislocationParams) -> EringenParams:
    _require_finite(d, "Eringen notation", ("mu_c",))
    c = d.curvature_scale
    j = None
    if d.rot_inertia is not None and d.rho is not None:
        j = d.rot_inertia / d.rho
    return EringenParams(
        lam=d.lambda_e,
        mu_star=d.mu_e - d.mu_c,
        varkappa=2.0 * d.mu_c,
        alpha=0.5 * c * d.alpha3,
        beta=0.5 * c * (d.alpha1 - d.alpha2),
        gamma=0.5 * c * (d.alpha1 + d.alpha2),
        j=j,
        rho=d.rho,
    )


def nowacki_to_dislocation(nw: NowackiParams, L_c: float) -> DislocationParams:
    if nw.mu_N == 0.0:
        raise InvalidInput("mu_N vanishes")
    c = L_c**2 * nw.mu_N
    return DislocationParams(
        lambda_e=nw.lambda_N,
        mu_e=nw.mu_N,
        mu_c=nw.varkappa_N,
        L_c=L_c,
        alpha1=2.0 * nw.gamma_N / c,
        alpha2=2.0 * nw.beta_N / c,
        alpha3=2.0 * nw.alpha_N / c,
    )


def dislocation_to_nowacki(d: DislocationParams) -> NowackiParams:
    c = d.curvature_scale
    return NowackiParams(
        lambda_N=d.lambda_e,
        mu_N=d.mu_e,
        varkappa_N=d.mu_c,
        alpha_N=0.5 * c * d.alpha3,
        beta_N=0.5 * c * d.alpha2,
        gamma_N=0.5 * c * d.alpha1,
    )


def mindlin_to_dislocation(m: MindlinMicropolarParams, L_c: float) -> DislocationParams:
    # energy matching of the dev-sym, skew and trace parts of the curvature
    if m.mu_M == 0.0:
        raise InvalidInput("mu_M vanishes")
    c = m.mu_M * L_c**2
    return DislocationParams(
        lambda_e=m.lambda_M,
        mu_e=m.mu_M,
        mu_c=m.mu_c_M,
        L_c=L_c,
        alpha1=2.0 * (2.0 * m.beta2_M + m.beta3_M) / c,
        alpha2=2.0 * (2.0 * m.beta1_M + 2.0 * m.beta2_M + m.beta3_M) / c,
        alpha3=-4.0 * m.beta3_M / c,
    )


def dislocation_to_mindlin(d: DislocationParams) -> MindlinMicropolarParams:
    c = d.curvature_scale
    return MindlinMicropolarParams(
        lambda_M=d.lambda_e,
        mu_M=d.mu_e,
        mu_c_M=d.mu_c,
        beta1_M=0.25 * c * (d.alpha2 - d.alpha1),
        beta2_M=0.125 * c * (2.0 * d.alpha1 + d.alpha3),
        beta3_M=-0.25 * c * d.alpha3,
    )


def lakes_to_dislocation(lk: LakesConstants, L_c: float) -> DislocationParams:
    lk.validate()
    G = lk.G
    lam = lk.lame_lambda
    if lk.N == 1.0:
        mu_c = INF
    else:
        n2 = lk.N**2
        mu_c = G * n2 / (1.0 - n2)
    L2 = L_c**2
    return DislocationParams(
        lambda_e=lam,
        mu_e=G,
        mu_c=mu_c,
        L_c=L_c,
        alpha1=2.0 * lk.ell_t**2 / L2,
        alpha2=(8.0 * lk.ell_b**2 - 2.0 * lk.ell_t**2) / L2,
        alpha3=4.0 * lk.ell_t**2 * (1.0 - lk.Psi) / (lk.Psi * L2),
    )


def lakes_to_eringen(lk: LakesConstants) -> EringenParams:
    """Direct identification without passing through a gauge length."""
    lk.validate()
    G = lk.G
    if lk.N == 1.0:
        raise Unavailable("Eringen notation is unavailable for N = 1")
    n2 = lk.N**2
    varkappa = 2.0 * G * n2 / (1.0 - n2)
    bg = 2.0 * G * lk.ell_t**2
    gamma = 4.0 * G * lk.ell_b**2
    return EringenParams(
        lam=lk.lame_lambda,
        mu_star=G - 0.5 * varkappa,
        varkappa=varkappa,
        alpha=bg * (1.0 - lk.Psi) / lk.Psi,
        beta=bg - gamma,
        gamma=gamma,
    )


def _sqrt_or_none(x: float) -> float | None:
    return math.sqrt(x) if x >= 0 else None


def technical_constants(d: DislocationParams) -> LakesConstants:
    """Engineering constants of a dislocation-format parameter set.

    Infinite ``lambda_e`` gives ``nu = 1/2`` and ``E = 3 mu_e``; infinite
    ``mu_c`` gives ``N = 1``.  ``Psi`` is ``None`` when ``2 alpha1 + alpha3``
    vanishes.
    """
    mu, lam = d.mu_e, d.lambda_e
    if not mu > 0:
        raise InvalidInput("technical constants need mu_e > 0")
    if math.isinf(lam):
        E, nu = 3.0 * mu, 0.5
    else:
        E = mu * (2.0 * mu + 3.0 * lam) / (mu + lam)
        nu = lam / (2.0 * (mu + lam))
    if math.isinf(d.mu_c):
        N = 1.0
    else:
        ratio = d.mu_c / (mu + d.mu_c)
        if ratio < 0:
            raise OutOfRange("coupling number is imaginary for this mu_c")
        N = math.sqrt(ratio)
    a1, a2, a3 = d.alpha1, d.alpha2, d.alpha3
    ell_t = _sqrt_or_none(a1 / 2.0)
    ell_b = _sqrt_or_none((a1 + a2) / 8.0)
    if ell_t is None or ell_b is None:
        raise OutOfRange("characteristic lengths are imaginary (alpha1 < 0 or alpha1 + alpha2 < 0)")
    den = a3 + 2.0 * a1
    return LakesConstants(
        E=E,
        G=mu,
        nu=nu,
        N=N,
        ell_t=d.L_c * ell_t,
        ell_b=d.L_c * ell_b,
        Psi=None if den == 0.0 else 2.0 * a1 / den,
    )


def technical_block(d: DislocationParams) -> dict[str, float | None]:
    """Flat dictionary of every derived engineering constant."""
    lk = technical_constants(d)
    c = d.curvature_scale
    a1, a3 = d.alpha1, d.alpha3
    xi = None if a1 + a3 == 0 else a3 / (2.0 * (a1 + a3))
    curly_e = None if a1 + a3 == 0 else 0.5 * c * a1 * (2 * a1 + 3 * a3) / (a1 + a3)
    return {
        "E": lk.E,
        "G": lk.G,
        "nu": lk.nu,
        "kappa_bulk": INF if math.isinf(d.lambda_e) else d.lambda_e + 2.0 * d.mu_e / 3.0,
        "N": lk.N,
        "N2": lk.N**2,
        "ell_t": lk.ell_t,
        "ell_b": lk.ell_b,
        "Psi": lk.Psi,
        "xi": xi,
        "curly_E": curly_e,
        "curly_B": 0.5 * c * (2 * a1 + 3 * a3) / 3.0,
    }


def relaxed_to_dislocation(rm: RelaxedMicromorphicParams) -> DislocationParams:
    """Cosserat limit of the relaxed micromorphic model (skew microdistortion)."""
    if rm.mu_e == 0.0:
        raise InvalidInput("mu_e vanishes")
    s = rm.mu / rm.mu_e
    al = a_to_alpha(s * rm.a1, s * rm.a2, s * rm.a3)
    return DislocationParams(
        lambda_e=rm.lambda_e,
        mu_e=rm.mu_e,
        mu_c=rm.mu_c,
        L_c=rm.L_c,
        alpha1=al[0],
        alpha2=al[1],
        alpha3=al[2],
    )


def micromorphic_to_mindlin(rm: RelaxedMicromorphicParams) -> Mindlin22Coefficients:
    """Identify the relaxed model inside the general isotropic Mindlin energy."""
    c = rm.mu * rm.L_c**2
    a = [0.0] * 15
    a[3] = c * (2.0 * rm.a3 - rm.a1) / 3.0
    a[9] = c * (rm.a1 + rm.a2) / 2.0
    a[12] = c * (rm.a1 - rm.a2) / 2.0
    return Mindlin22Coefficients(
        b1=rm.lambda_e + rm.lambda_micro,
        b2=rm.mu_e + rm.mu_micro + rm.mu_c,
        b3=rm.mu_e + rm.mu_micro - rm.mu_c,
        g1=-rm.lambda_micro,
        g2=-2.0 * rm.mu_micro,
        a=tuple(a),
    )


def to_dislocation(p: TaggedParams, L_c: float | None = None) -> DislocationParams:
    """Dislocation-format payload of any tagged record."""
    src = p.payload
    if isinstance(src, DislocationParams):
        return src if L_c is None else rescale_length(src, L_c)
    if isinstance(src, RelaxedMicromorphicParams):
        d = relaxed_to_dislocation(src)
        return d if L_c is None else rescale_length(d, L_c)
    lc = L_c if L_c is not None else p.L_c
    if lc is None:
        raise MissingLengthScale(
            f"converting {p.notation.value} to the dislocation format needs a characteristic length"
        )
    if isinstance(src, EringenParams):
        return eringen_to_dislocation(src, lc)
    if isinstance(src, NowackiParams):
        return nowacki_to_dislocation(src, lc)
    if isinstance(src, MindlinMicropolarParams):
        return mindlin_to_dislocation(src, lc)
    return lakes_to_dislocation(src, lc)


def rescale_length(d: DislocationParams, L_c: float) -> DislocationParams:
    """Same material with a different gauge length (products preserved)."""
    if not L_c > 0:
        raise InvalidInput("L_c must be positive")
    r = (d.L_c / L_c) ** 2
    return replace(d, L_c=L_c, alpha1=d.alpha1 * r, alpha2=d.alpha2 * r, alpha3=d.alpha3 * r)


def convert(p: TaggedParams, target: Notation, L_c: float | None = None) -> TaggedParams:
    """Convert a tagged record into another notation.

    ``L_c`` is the gauge length used when the dislocation format is entered
    from a record without one; it falls back to ``p.L_c``.
    """
    target = Notation.parse(target) if isinstance(target, str) else target
    if target is p.notation and (L_c is None or target is not Notation.DISLOCATION):
        return p
    d = to_dislocation(p, L_c)
    keep_lc = d.L_c
    if target is Notation.DISLOCATION:
        payload: Payload = d
    elif target is Notation.ERINGEN:
        payload = dislocation_to_eringen(d)
    elif target is Notation.NOWACKI:
        payload = dislocation_to_nowacki(d)
    elif target is Notation.MINDLIN:
        payload = dislocation_to_mindlin(d)
    elif target is Notation.LAKES:
        payload = technical_constants(d)
    else:
        raise UnsupportedNotation("the relaxed micromorphic model cannot be recovered from Cosserat data")
    return TaggedParams(target, payload, p.unit_system, keep_lc)


# ------------------------------------------------------------------ units


def convert_units(p: TaggedParams, target: UnitSystem) -> TaggedParams:
    if p.unit_system is target:
        return p
    up = p.unit_system is UnitSystem.MPA_MM
    kinds = type(p.payload).unit_kinds()
    values = {}
    for name, kind in kinds.items():
        v = getattr(p.payload, name)
        if v is None:
            values[name] = None
            continue
        s = _SCALE[kind]
        values[name] = v * s if up else v / s
    lscale = _SCALE["length"]
    lc = None if p.L_c is None else (p.L_c * lscale if up else p.L_c / lscale)
    return TaggedParams(p.notation, type(p.payload)(**values), target, lc)


# ------------------------------------------------------------ comparison


_GROUPS: dict[type, tuple[tuple[str, ...], ...]] = {
    DislocationParams: (("lambda_e", "mu_e", "mu_c"), ("L_c",), ("alpha1", "alpha2", "alpha3"), ("rho",), ("rot_inertia",)),
    EringenParams: (("lam", "mu_star", "varkappa"), ("alpha", "beta", "gamma"), ("j",), ("rho",)),
    NowackiParams: (("lambda_N", "mu_N", "varkappa_N"), ("alpha_N", "beta_N", "gamma_N")),
    MindlinMicropolarParams: (("lambda_M", "mu_M", "mu_c_M"), ("beta1_M", "beta2_M", "beta3_M")),
    LakesConstants: (("E", "G"), ("nu",), ("N",), ("ell_t", "ell_b"), ("Psi",)),
    RelaxedMicromorphicParams: (
        ("mu_e", "lambda_e", "mu_c", "mu_micro", "lambda_micro", "mu"),
        ("L_c",),
        ("a1", "a2", "a3"),
    ),
}


def max_relative_deviation(a: Payload, b: Payload) -> float:
    """Largest per-field deviation, each scaled by the magnitude of its group.

    Fields are grouped by physical kind (moduli, lengths, weights ...) so a
    weight that is zero up to rounding is compared against its siblings
    rather than against itself.  Matching infinities count as equal.
    """
    if type(a) is not type(b):
        raise InvalidInput("cannot compare records of different notations")
    worst = 0.0
    for group in _GROUPS[type(a)]:
        va = [getattr(a, n) for n in group]
        vb = [getattr(b, n) for n in group]
        finite = [abs(x) for x in va + vb if x is not None and math.isfinite(x)]
        scale = max(finite, default=0.0)
        for x, y in zip(va, vb):
            if x is None or y is None:
                if x is not y:
                    return INF
                continue
            if math.isinf(x) or math.isinf(y):
                if x != y:
                    return INF
                continue
            if scale == 0.0:
                continue
            worst = max(worst, abs(x - y) / scale)
    return worst


# ------------------------------------------------------------------- JSON


_DYNAMIC_KEYS = {"j", "tau_c", "eta"}


def _encode(v):
    if v is None:
        return None
    if math.isinf(v):
        return "inf"
    return v


def _decode(name: str, v):
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "+inf", "infinity"):
            return INF
        raise SchemaError(f"{name}: expected a number or \"inf\", got {v!r}")
    return v


def from_dict(doc: dict[str, Any], default_units: UnitSystem = UnitSystem.MPA_MM) -> TaggedParams:
    """Build a tagged record from a decoded material document.

    Unknown keys are rejected.  A dislocation record may give its rotational
    inertia directly (``rot_inertia``) or through ``j`` and ``tau_c``
    (``rho j mu_e tau_c^2``) or ``eta`` and ``tau_c``
    (``2 rho eta mu_e tau_c^2``), all in SI.
    """
    if not isinstance(doc, dict):
        raise SchemaError("material document must be a JSON object")
    extra = set(doc) - {"notation", "units", "values", "L_c"}
    if extra:
        raise SchemaError(f"unknown top-level keys: {sorted(extra)}")
    if "notation" not in doc or "values" not in doc:
        raise SchemaError("material document needs 'notation' and 'values'")
    notation = Notation.parse(str(doc["notation"]))
    units = UnitSystem.parse(str(doc["units"])) if "units" in doc else default_units
    raw = doc["values"]
    if not isinstance(raw, dict):
        raise SchemaError("'values' must be an object")
    typ = PAYLOAD_TYPES[notation]
    keymap = typ.json_keys()
    values: dict[str, Any] = {}
    dyn: dict[str, float] = {}
    for key, v in raw.items():
        if key == "N2" and notation is Notation.LAKES and "N" not in raw:
            n2 = _check_value("N2", _decode(key, v))
            if n2 < 0:
                raise OutOfRange("N2 must be non-negative")
            values["N"] = math.sqrt(n2)
        elif key in keymap:
            values[keymap[key]] = _decode(key, v)
        elif notation is Notation.DISLOCATION and key in _DYNAMIC_KEYS:
            dyn[key] = _check_value(key, _decode(key, v))
        else:
            raise SchemaError(f"unknown key {key!r} for {notation.value}")
    missing = [f.name for f in fields(typ) if not f.metadata.get("optional") and f.name not in values]
    if missing:
        raise SchemaError(f"missing values for {notation.value}: {missing}")
    lc = doc.get("L_c")
    if lc is not None:
        lc = _check_value("L_c", lc)
    if dyn:
        values["rot_inertia"] = _fold_inertia(values, dyn, units)
    payload = typ(**values)
    return TaggedParams(notation, payload, units, lc)


def _fold_inertia(values: dict[str, Any], dyn: dict[str, float], units: UnitSystem) -> float:
    if values.get("rot_inertia") is not None:
        raise InvalidInput("give either rot_inertia or (j | eta, tau_c), not both")
    rho = values.get("rho")
    if rho is None or "tau_c" not in dyn or ("j" in dyn) == ("eta" in dyn):
        raise InvalidInput("folding inertia needs rho, tau_c and exactly one of j, eta")
    mu_e = float(values["mu_e"]) * (_SCALE["modulus"] if units is UnitSystem.MPA_MM else 1.0)
    tau2 = dyn["tau_c"] ** 2
    if "j" in dyn:
        return float(rho) * dyn["j"] * mu_e * tau2
    return 2.0 * float(rho) * dyn["eta"] * mu_e * tau2


def to_dict(p: TaggedParams) -> dict[str, Any]:
    keys = {v: k for k, v in type(p.payload).json_keys().items()}
    values = {keys[n]: _encode(v) for n, v in asdict(p.payload).items() if v is not None}
    doc: dict[str, Any] = {"notation": p.notation.value, "units": p.unit_system.value, "values": values}
    if p.L_c is not None and p.notation is not Notation.DISLOCATION:
        doc["L_c"] = p.L_c
    return doc


def loads(text: str, default_units: UnitSystem = UnitSystem.MPA_MM) -> TaggedParams:
    """Parse a material document; JSON syntax errors propagate unchanged."""
    return from_dict(json.loads(text), default_units)


def dumps(p: TaggedParams, **kw) -> str:
    return json.dumps(to_dict(p), **kw)
