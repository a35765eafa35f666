"""Word metrics, dead-end depth and retreat depth in the discrete Heisenberg group."""

__version__ = "0.1.0"

from .group import (
    IDENTITY,
    GroupElement,
    Word,
    center_exponent,
    commutator,
    eval_word,
    inv,
    mul,
)
from .genset import (
    GenSet,
    GenSetConstants,
    GenSetError,
    Generator,
    HullPolygon,
    constants,
    hull,
    load_genset,
    make_genset,
    norm_b,
    parse_validate,
    standard_genset,
)
from .metric import (
    DepthRecord,
    InsufficientRadius,
    LengthTable,
    MemoryCapExceeded,
    OutOfRange,
    RetreatRecord,
    depth,
    enumerate_ball,
    geodesic,
    i_a_profile,
    k_extremes,
    length,
    retreat_depth,
)
from .construct import (
    Apportionment,
    IsoperimetrixSolution,
    apportion,
    cyclic_permute,
    fattest_word,
    interpolate,
    invert_letters,
    isoperimetrix,
    reorder_extremes,
    spread_words,
)
from .verify import CheckReport, Verdict

__all__ = [name for name in dir() if not name.startswith("_")]
