"""Homology-growth invariants of metabelian pro-p groups A x| Q, Q = Z_p^n.

Modules over Z_p[[Q]] are given by integer Laurent-polynomial relations;
the library reduces them to the finite level rings Z[Q/Q^(p^s)] or to
one-variable power series and computes ranks and F_p-dimensions exactly.
"""

from .errors import InputError, InvariantViolation, PrecisionError, SizeCapError, TowerError
from .extint import AtLeast
from .groupring import (
    LaurentPoly,
    LevelMatrix,
    ModulePresentation,
    expand_level,
    parse_presentation,
    substitute_character,
)
from .kernels import BACKEND, available_backends, use_backend
from .linalg import (
    DvrSnfResult,
    IntegerMatrix,
    SeriesMatrix,
    cokernel_fp_dim,
    dvr_snf,
    integer_snf,
    rank_over_Fp,
    rank_over_Q,
)
from .padic import DigitSplit, PadicInt, digit_split, padic_binomial, padic_valuation
from .series import TruncatedSeries, one_plus_t_pow, series_inverse, series_mul, series_valuation

__version__ = "0.1.0"
