"""p-adic integers known modulo p^K.

>>> lam = PadicInt(3, 4, 7)
>>> digit_split(lam).z0, digit_split(lam).a0
(1, 2)
>>> padic_valuation(PadicInt(3, 4, 18))
2
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import InputError, PrecisionError
from .extint import AtLeast


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def vp_int(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_factorial(j: int, p: int) -> int:
    # Legendre
    v = 0
    q = p
    while q <= j:
        v += j // q
        q *= p
    return v


@dataclass(frozen=True)
class PadicInt:
    p: int
    precision: int
    residue: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"p={self.p} is not prime")
        if self.precision < 1:
            raise InputError("precision must be >= 1")
        object.__setattr__(self, "residue", self.residue % self.p**self.precision)

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    @classmethod
    def from_digits(cls, p: int, digits) -> "PadicInt":
        """Build from base-p digits, least significant first."""
        digits = list(digits)
        if not digits:
            raise InputError("empty digit string")
        for d in digits:
            if not 0 <= d < p:
                raise InputError(f"digit {d} out of range for p={p}")
        r = sum(d * p**i for i, d in enumerate(digits))
        return cls(p, len(digits), r)

    def digits(self) -> list[int]:
        r, out = self.residue, []
        for _ in range(self.precision):
            r, d = divmod(r, self.p)
            out.append(d)
        return out

    def _coerce(self, other) -> "PadicInt":
        if isinstance(other, int):
            return PadicInt(self.p, self.precision, other)
        if not isinstance(other, PadicInt):
            return NotImplemented
        if other.p != self.p:
            raise InputError(f"mixed primes {self.p} and {other.p}")
        return other

    def _make(self, other: "PadicInt", value: int) -> "PadicInt":
        return PadicInt(self.p, min(self.precision, other.precision), value)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(o, self.residue + o.residue)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(o, self.residue - o.residue)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(o, o.residue - self.residue)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._make(o, self.residue * o.residue)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(self.p, self.precision, -self.residue)

    def reduce(self, precision: int) -> "PadicInt":
        if precision > self.precision:
            raise PrecisionError(
                f"cannot raise precision from {self.precision} to {precision}"
            )
        return PadicInt(self.p, precision, self.residue)

    def __str__(self) -> str:
        return f"{self.residue} + O({self.p}^{self.precision})"


@dataclass(frozen=True)
class DigitSplit:
    """lam = z0 + p*lambda1 and -lam = a0 + p*lambda2."""

    z0: int
    a0: int
    lambda1: PadicInt
    lambda2: PadicInt


def padic_valuation(x: PadicInt):
    if x.residue == 0:
        return AtLeast(x.precision)
    return vp_int(x.residue, x.p)


def padic_binomial(lam: PadicInt, j: int) -> PadicInt:
    """C(lam, j) with precision K - v_p(j!).

    The falling factorial of the residue equals j! * C(lam, j) mod p^K, so
    dividing out j! loses exactly v_p(j!) digits.
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    loss = vp_factorial(j, lam.p)
    if loss >= lam.precision:
        raise PrecisionError(
            f"C(lam, {j}) needs more than {lam.precision} digits of lam "
            f"(v_p({j}!) = {loss})"
        )
    return PadicInt(lam.p, lam.precision - loss, comb(lam.residue, j))


def digit_split(lam: PadicInt) -> DigitSplit:
    if lam.precision < 2:
        raise PrecisionError("digit_split needs precision >= 2")
    p = lam.p
    z0 = lam.residue % p
    neg = (-lam).residue
    a0 = neg % p
    k = lam.precision - 1
    return DigitSplit(
        z0=z0,
        a0=a0,
        lambda1=PadicInt(p, k, (lam.residue - z0) // p),
        lambda2=PadicInt(p, k, (neg - a0) // p),
    )


def parse_lambda(text: str, p: int, precision: int) -> PadicInt:
    """Decimal integer (possibly negative) or comma-separated base-p digits.

    A digit string fixes the precision to its length.
    """
    text = text.strip()
    if "," in text:
        try:
            digits = [int(d) for d in text.split(",")]
        except ValueError:
            raise InputError(f"bad digit string {text!r}") from None
        return PadicInt.from_digits(p, digits)
    try:
        value = int(text)
    except ValueError:
        raise InputError(f"bad lambda {text!r}") from None
    return PadicInt(p, precision, value)
