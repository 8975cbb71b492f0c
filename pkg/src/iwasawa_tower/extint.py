"""Extended integers: exact values or lower bounds certified by truncation."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class AtLeast:
    """A quantity known only to be >= ``bound``.

    Returned wherever finite precision cannot certify an exact answer
    (zero residues, vanishing truncated series, free cokernel parts).
    """

    bound: int
    possibly_infinite: bool = False

    def __str__(self) -> str:
        s = f">= {self.bound}"
        return s + " (possibly infinite)" if self.possibly_infinite else s

    def to_json(self):
        return {"lower_bound": self.bound}


def is_exact(v) -> bool:
    return not isinstance(v, AtLeast)


def ext_to_json(v):
    return v.to_json() if isinstance(v, AtLeast) else v


def ext_str(v) -> str:
    return str(v)
