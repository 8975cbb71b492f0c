"""Truncated power series over Z/p^K, known modulo t^D.

K = 1 gives F_p[[t]]. Binary operations require identical (p, K, D).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .errors import InputError, ParameterMismatch, PrecisionError
from .extint import AtLeast
from .padic import PadicInt, is_prime


def _ilog(n: int, p: int) -> int:
    """floor(log_p n) for n >= 1."""
    e, q = 0, p
    while q <= n:
        q *= p
        e += 1
    return e


@dataclass(frozen=True)
class TruncatedSeries:
    p: int
    K: int
    D: int
    coeffs: tuple

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"p={self.p} is not prime")
        if self.K < 1 or self.D < 1:
            raise InputError("K and D must be >= 1")
        m = self.p**self.K
        c = [int(x) % m for x in self.coeffs[: self.D]]
        c += [0] * (self.D - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    # constructors

    @classmethod
    def from_coeffs(cls, coeffs, p, D, K=1):
        return cls(p, K, D, tuple(coeffs))

    @classmethod
    def constant(cls, c, p, D, K=1):
        return cls(p, K, D, (c,))

    @classmethod
    def one_plus_t(cls, p, D, K=1):
        return cls(p, K, D, (1, 1))

    @classmethod
    def monomial(cls, j, p, D, K=1, c=1):
        coeffs = [0] * D
        if j < D:
            coeffs[j] = c
        return cls(p, K, D, tuple(coeffs))

    @property
    def modulus(self) -> int:
        return self.p**self.K

    @property
    def params(self):
        return (self.p, self.K, self.D)

    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            raise TypeError(f"expected TruncatedSeries, got {type(other).__name__}")
        if other.params != self.params:
            raise ParameterMismatch(
                f"series parameters differ: (p, K, D) = {self.params} vs {other.params}"
            )

    def _lift(self, other):
        if isinstance(other, int):
            return TruncatedSeries(self.p, self.K, self.D, (other,))
        self._check(other)
        return other

    # ring operations

    def __add__(self, other):
        o = self._lift(other)
        return TruncatedSeries(
            self.p, self.K, self.D, tuple(a + b for a, b in zip(self.coeffs, o.coeffs))
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return TruncatedSeries(
            self.p, self.K, self.D, tuple(a - b for a, b in zip(self.coeffs, o.coeffs))
        )

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return TruncatedSeries(self.p, self.K, self.D, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries(
                self.p, self.K, self.D, tuple(other * a for a in self.coeffs)
            )
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return series_inverse(self) ** (-e)
        result = TruncatedSeries(self.p, self.K, self.D, (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def reduce(self, K: int) -> "TruncatedSeries":
        """Reduce coefficients to Z/p^K (K <= self.K)."""
        if K > self.K:
            raise PrecisionError(f"cannot lift coefficients from K={self.K} to K={K}")
        return TruncatedSeries(self.p, K, self.D, self.coeffs)

    def truncate(self, D: int) -> "TruncatedSeries":
        if D > self.D:
            raise PrecisionError(f"series known only mod t^{self.D}, not t^{D}")
        return TruncatedSeries(self.p, self.K, D, self.coeffs[:D])

    def shift_down(self, v: int) -> "TruncatedSeries":
        """Divide by t^v; the result is known only mod t^(D - v), padded with zeros."""
        return TruncatedSeries(self.p, self.K, self.D, self.coeffs[v:])

    # output

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if j == 0:
                terms.append(str(c))
            elif j == 1:
                terms.append(f"{c}*t")
            else:
                terms.append(f"{c}*t^{j}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(t^{self.D})"

    def to_json(self):
        return {"p": self.p, "K": self.K, "D": self.D, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["p"], obj["K"], obj["D"], tuple(obj["coeffs"]))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    a._check(b)
    coeffs = kernels.series_mul_mod(a.coeffs, b.coeffs, a.D, a.modulus)
    return TruncatedSeries(a.p, a.K, a.D, tuple(coeffs))


def series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    c0 = a.coeffs[0]
    if c0 % a.p == 0:
        raise InputError(f"constant term {c0} is not a unit mod {a.p}")
    m = a.modulus
    inv0 = pow(c0, -1, m)
    out = [0] * a.D
    out[0] = inv0
    # b_k = -inv0 * sum_{i=1..k} a_i b_{k-i}
    for k in range(1, a.D):
        s = 0
        for i in range(1, k + 1):
            ai = a.coeffs[i]
            if ai:
                s += ai * out[k - i]
        out[k] = (-inv0 * s) % m
    return TruncatedSeries(a.p, a.K, a.D, tuple(out))


def series_valuation(a: TruncatedSeries):
    for j, c in enumerate(a.coeffs):
        if c:
            return j
    return AtLeast(a.D)


def required_lambda_precision(p: int, D: int, K_out: int = 1) -> int:
    """Digits of lam needed for the coefficients of (1+t)^lam below t^D mod p^K_out.

    Also enforces p^K > D*p.
    """
    k = K_out + (_ilog(D - 1, p) if D > 1 else 0)
    while p**k <= D * p:
        k += 1
    return k


def one_plus_t_pow(lam: PadicInt, D: int, K_out: int = 1) -> TruncatedSeries:
    """(1+t)^lam mod (t^D, p^K_out).

    The coefficient of t^j is C(lam, j). Changing lam by p^N moves C(lam, j)
    by a multiple of p^(N - floor(log_p j)), so K_out + floor(log_p(D-1))
    digits of lam determine every coefficient.
    """
    p = lam.p
    need = required_lambda_precision(p, D, K_out)
    if lam.precision < need:
        raise PrecisionError(
            f"(1+t)^lam mod t^{D} over Z/{p}^{K_out} needs lam to precision "
            f"{need}, got {lam.precision}"
        )
    m = p**K_out
    r = lam.residue
    coeffs = [1 % m]
    c = 1
    for j in range(1, D):
        c = c * (r - j + 1) // j
        coeffs.append(c % m)
    return TruncatedSeries(p, K_out, D, tuple(coeffs))
