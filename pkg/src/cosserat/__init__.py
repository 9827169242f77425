"""Linear isotropic Cosserat elasticity in the microrotation and dislocation formats."""

from __future__ import annotations

from .constitutive import (
    ConditionReport,
    acoustic_blocks,
    balance_residuals,
    check_conditions,
    couple_stress,
    energy,
    energy_dislocation,
    energy_eringen,
    energy_mindlin,
    energy_relaxed,
    energy_split,
    rank_one_second_derivative,
    stress,
)
from .errors import (
    CosseratError,
    EvanescentBranch,
    InvalidDirection,
    InvalidInput,
    InvalidMass,
    MissingDynamicData,
    MissingLengthScale,
    OutOfRange,
    SchemaError,
    Unavailable,
    UnsupportedNotation,
)
from .params import (
    DislocationParams,
    EringenParams,
    LakesConstants,
    MindlinMicropolarParams,
    Notation,
    NowackiParams,
    RelaxedMicromorphicParams,
    TaggedParams,
    UnitSystem,
    convert,
    micromorphic_to_mindlin,
    technical_constants,
    weight_convert,
)
from .polyfield import nye_forward, nye_inverse, verify_nye
from .tensor import anti, axl, decompose, gen_eigen_diag, sym_eigen
from .waves import WaveMedium, dispersion_sweep, real_wave_scan

__version__ = "0.1.0"
