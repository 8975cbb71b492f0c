"""Cyclic decompositions of finite F_p[[t]]-modules and generator-count bounds.

For a split extension U = H x| <q^(p^j)> with H/H'H^p finite over F_p[[t]]
(q acting as 1 + t), d(U) is the dimension of the coinvariants under
(1+t)^(p^j) plus one for the generator q^(p^j).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import InputError
from .extint import AtLeast
from .linalg import SeriesMatrix, cokernel_fp_dim, dvr_snf
from .series import TruncatedSeries


@dataclass(frozen=True)
class CyclicDecomposition:
    exponents: tuple

    def __post_init__(self):
        exps = tuple(sorted(int(i) for i in self.exponents))
        if any(i < 1 for i in exps):
            raise InputError("cyclic exponents must be >= 1")
        object.__setattr__(self, "exponents", exps)

    @property
    def m(self) -> int:
        return max(self.exponents, default=0)

    @property
    def d_H(self) -> int:
        return sum(self.exponents)

    def to_json(self):
        return {"exponents": list(self.exponents), "m": self.m, "d_H": self.d_H}


@dataclass(frozen=True)
class WilsonBoundParams:
    k: Fraction
    index: int

    def __post_init__(self):
        k = Fraction(self.k)
        if k <= 0:
            raise InputError("Wilson constant k must be positive")
        if self.index < 1:
            raise InputError("index must be a positive integer")
        object.__setattr__(self, "k", k)


@dataclass(frozen=True)
class FiveTermInput:
    dim_H0: int
    dim_H1Q: int
    dim_H2Q: int
    n: int | None = None

    def __post_init__(self):
        if min(self.dim_H0, self.dim_H1Q, self.dim_H2Q) < 0:
            raise InputError("dimensions must be non-negative")

    @classmethod
    def for_free_abelian(cls, dim_H0: int, n: int) -> "FiveTermInput":
        """Quotient Z_p^(n-1): H1 has dimension n-1, H2 has C(n-1, 2)."""
        return cls(dim_H0, n - 1, comb(n - 1, 2), n)


def decompose_finite_module(M: SeriesMatrix) -> CyclicDecomposition:
    res = dvr_snf(M)
    if not res.certified or res.free_rank:
        raise InputError(
            "module is not certified finite at this truncation "
            f"(divisors {[str(v) for v in res.divisor_valuations]}, free rank {res.free_rank})"
        )
    return CyclicDecomposition(tuple(v for v in res.divisor_valuations if v > 0))


def minimal_level(m: int, p: int) -> int:
    """Least j with p^j > m."""
    j = 0
    while p**j <= m:
        j += 1
    return j


def d_of_U(dec: CyclicDecomposition, p: int, j: int) -> int:
    if p**j <= dec.m:
        raise InputError(f"need p^j > m, got {p}^{j} = {p**j} <= {dec.m}")
    return dec.d_H + 1


def d_of_U_direct(M: SeriesMatrix, p: int, j: int) -> int:
    """dim of M's cokernel tensored down to <q^(p^j)>, plus one."""
    if M.p != p:
        raise InputError(f"matrix is over F_{M.p}, not F_{p}")
    D = M.D
    act = TruncatedSeries.one_plus_t(p, D) ** (p**j) - 1
    zero = TruncatedSeries(p, 1, D, (0,))
    extra = [[act if c == k else zero for c in range(M.ncols)] for k in range(M.ncols)]
    dim = cokernel_fp_dim(M.stack(extra))
    if isinstance(dim, AtLeast):
        raise InputError("module is not certified finite at this truncation")
    return dim + 1


def wilson_check(d_U: int, params: WilsonBoundParams) -> bool:
    """d_U <= k * sqrt(index), decided exactly: d_U^2 <= k^2 * index."""
    if d_U <= 0:
        return True
    return d_U * d_U <= params.k * params.k * params.index


def wilson_chain_holds(dec: CyclicDecomposition, p: int, k) -> bool | None:
    """If d(U) passes the Wilson check at index p^j (p^j > m >= p^(j-1)),
    return whether sum(i) < k^2 p; None when the check itself fails."""
    j = minimal_level(dec.m, p)
    params = WilsonBoundParams(Fraction(k), p**j)
    if not wilson_check(d_of_U(dec, p, j), params):
        return None
    return dec.d_H < params.k * params.k * p


def five_term_bounds(inp: FiveTermInput) -> tuple[int, int]:
    upper = inp.dim_H0 + inp.dim_H1Q
    lower = max(0, upper - inp.dim_H2Q)
    return lower, upper


def coinvariant_dim_bound(d_H: int, n: int) -> int:
    if n < 1:
        raise InputError("n must be >= 1")
    return max(0, d_H + comb(n - 1, 2) - n + 1)

