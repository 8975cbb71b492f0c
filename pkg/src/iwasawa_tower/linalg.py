"""Exact ranks and normal forms.

Integer matrices use Python ints throughout. Ranks over F_p go through the
compiled kernel when available. ``dvr_snf`` works over F_p[[t]] truncated
at t^D and tracks, for every entry, the degree up to which it is known.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd

from . import kernels
from .errors import InputError, ParameterMismatch, SizeCapError
from .extint import AtLeast, ext_to_json
from .series import TruncatedSeries

DEFAULT_SNF_CAP = 400


class IntegerMatrix:
    """Rows stored sparsely as {column: nonzero int}."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows, ncols):
        self.rows = [dict(r) for r in rows]
        self.ncols = ncols
        for r in self.rows:
            for j in r:
                if not 0 <= j < ncols:
                    raise InputError(f"column index {j} out of range")

    @classmethod
    def from_dense(cls, data, ncols=None):
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise InputError("ragged matrix")
        return cls([{j: int(v) for j, v in enumerate(r) if v} for r in data], ncols)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def dense(self):
        out = []
        for r in self.rows:
            row = [0] * self.ncols
            for j, v in r.items():
                row[j] = v
            out.append(row)
        return out

    def mod_array(self, p):
        import numpy as np

        a = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                a[i, j] = v % p
        return a

    def to_json(self):
        return self.dense()

    def to_text(self):
        d = self.dense()
        if not d:
            return f"[{self.nrows} x {self.ncols} matrix]"
        w = max(len(str(v)) for r in d for v in r)
        return "\n".join(" ".join(str(v).rjust(w) for v in r) for r in d)


def as_integer_matrix(M) -> IntegerMatrix:
    if isinstance(M, IntegerMatrix):
        return M
    if hasattr(M, "matrix") and isinstance(M.matrix, IntegerMatrix):
        return M.matrix
    return IntegerMatrix.from_dense(M)


# ranks


def _primitive(row):
    g = gcd(*row.values())
    if row[min(row)] < 0:
        g = -g
    if g != 1:
        row = {j: v // g for j, v in row.items()}
    return row


def rank_over_Q(M, method: str = "exact", seed: int = 0) -> int:
    """Rank over Q.

    ``method="exact"`` does fraction-free sparse elimination, keeping each
    row primitive (content divided out) to limit coefficient growth.
    ``method="modular"`` is a probabilistic shortcut: max rank modulo three
    random primes near 2^31, never larger than the true rank.
    """
    A = as_integer_matrix(M)
    if method == "modular":
        rng = random.Random(seed)
        return max(rank_over_Fp(A, q) for q in random_primes(rng, 3))
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    pivots = {}
    for r in A.rows:
        row = dict(r)
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = _primitive(row)
                break
            a, b = row[c], prow[c]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {}
            for j in row.keys() | prow.keys():
                if j == c:
                    continue
                v = fa * row.get(j, 0) - fb * prow.get(j, 0)
                if v:
                    new[j] = v
            row = _primitive(new) if new else new
    return len(pivots)


def rank_over_Fp(M, p: int) -> int:
    A = as_integer_matrix(M)
    if A.nrows == 0 or A.ncols == 0:
        return 0
    if p < 2**31:
        return kernels.rank_mod_p(A.mod_array(p), p)
    return kernels.rank_mod_p(A.dense(), p)


def random_primes(rng, count, lo=2**30, hi=2**31):
    from .padic import is_prime

    out = []
    while len(out) < count:
        q = rng.randrange(lo, hi) | 1
        if q not in out and is_prime(q):
            out.append(q)
    return out


# Smith normal form over Z


def integer_snf(M, size_cap: int = DEFAULT_SNF_CAP):
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix.

    Dense gcd-driven reduction, cubic in size with coefficient growth;
    meant for small matrices.
    """
    A = as_integer_matrix(M)
    if A.nrows > size_cap or A.ncols > size_cap:
        raise SizeCapError(
            f"integer SNF of a {A.nrows} x {A.ncols} matrix exceeds cap {size_cap}",
            required=max(A.nrows, A.ncols),
        )
    a = A.dense()
    m, n = A.nrows, A.ncols
    divisors = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            piv = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // piv
                    for j in range(t, n):
                        a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        done = False
                        break
            if not done:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // piv
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        done = False
                        break
            if not done:
                continue
            # divisibility of the rest by the pivot
            for i in range(t + 1, m):
                if any(a[i][j] % piv for j in range(t + 1, n)):
                    for j in range(t, n):
                        a[t][j] += a[i][j]
                    done = False
                    break
        divisors.append(abs(a[t][t]))
        t += 1
    return divisors


# SNF over the truncated DVR F_p[[t]]


class SeriesMatrix:
    """Matrix over F_p[[t]] / t^D; rows are relations, cokernel = F_p[[t]]^cols / rowspace."""

    def __init__(self, rows, p: int, D: int, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise InputError("empty SeriesMatrix needs explicit ncols")
            ncols = len(rows[0])
        self.p, self.D, self.ncols = p, D, ncols
        self.rows = []
        for r in rows:
            if len(r) != ncols:
                raise InputError("ragged SeriesMatrix")
            out = []
            for x in r:
                if x.K != 1:
                    x = x.reduce(1)
                if (x.p, x.D) != (p, D):
                    raise ParameterMismatch(
                        f"entry has (p, D) = {(x.p, x.D)}, matrix has {(p, D)}"
                    )
                out.append(x)
            self.rows.append(out)

    @classmethod
    def from_coeff_lists(cls, rows, p, D, ncols=None):
        return cls(
            [[TruncatedSeries(p, 1, D, tuple(c)) for c in r] for r in rows], p, D, ncols
        )

    @classmethod
    def diagonal(cls, valuations, p, D):
        k = len(valuations)
        rows = [
            [TruncatedSeries.monomial(v, p, D) if i == j else TruncatedSeries(p, 1, D, (0,)) for j in range(k)]
            for i, v in enumerate(valuations)
        ]
        return cls(rows, p, D, k)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def stack(self, extra_rows):
        return SeriesMatrix(self.rows + [list(r) for r in extra_rows], self.p, self.D, self.ncols)

    def permuted(self, row_perm, col_perm):
        return SeriesMatrix(
            [[self.rows[i][j] for j in col_perm] for i in row_perm], self.p, self.D, self.ncols
        )

    def to_json(self):
        return [[list(x.coeffs) for x in r] for r in self.rows]


@dataclass
class DvrSnfResult:
    divisor_valuations: list
    certified: bool
    free_rank: int = 0
    D: int = 0

    def to_json(self):
        return {
            "divisors": [ext_to_json(v) for v in self.divisor_valuations],
            "certified": self.certified,
            "free_rank": self.free_rank,
        }


def _lv(entry):
    """(lower valuation, certified) of a (coeffs, prec) entry."""
    coeffs, prec = entry
    for j in range(prec):
        if coeffs[j]:
            return j, True
    return prec, False


def _inverse_list(c, p, D):
    inv0 = pow(c[0], -1, p)
    out = [0] * D
    out[0] = inv0
    for k in range(1, D):
        s = 0
        for i in range(1, k + 1):
            if c[i]:
                s += c[i] * out[k - i]
        out[k] = (-inv0 * s) % p
    return out


def dvr_snf(M: SeriesMatrix) -> DvrSnfResult:
    """Divisor valuations by minimal-valuation pivoting (ties row-major).

    Each entry carries the degree below which it is known. An entry that
    vanishes below that degree has only a lower-bound valuation; if such an
    entry is smaller than every certified one, elimination stops and the
    remaining divisors are reported as lower bounds.
    """
    p, D = M.p, M.D
    rows, cols = M.nrows, M.ncols
    a = [[[list(x.coeffs), D] for x in r] for r in M.rows]
    divisors = []
    k = 0
    while k < min(rows, cols):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                v, cert = _lv(a[i][j])
                # certified entries win ties against uncertain ones
                key = (v, not cert)
                if best is None or key < best[0]:
                    best = (key, i, j)
        (v, uncertain), i, j = best
        if uncertain:
            break
        a[k], a[i] = a[i], a[k]
        for r in a:
            r[k], r[j] = r[j], r[k]
        piv, P = a[k][k]
        unit_inv = _inverse_list(piv[v:] + [0] * v, p, D)
        for i in range(k + 1, rows):
            x, px = a[i][k]
            lx, cx = _lv(a[i][k])
            if not cx and lx >= P:
                # known to vanish as far as the pivot is known
                newp = min(px, P)
                for j in range(k + 1, cols):
                    a[i][j][1] = min(a[i][j][1], newp)
                continue
            c = kernels.series_mul_mod(x[v:] + [0] * v, unit_inv, D, p)
            newp = min(px, P)
            for j in range(k + 1, cols):
                y, py = a[k][j]
                prod = kernels.series_mul_mod(c, y, D, p)
                z, pz = a[i][j]
                q = min(pz, newp, py)
                a[i][j] = [[(z[d] - prod[d]) % p if d < q else 0 for d in range(D)], q]
            a[i][k] = [[0] * D, D]
        divisors.append(v)
        k += 1
    certified = True
    remaining = min(rows, cols) - k
    if remaining:
        certified = False
        bound = min(a[i][j][1] for i in range(k, rows) for j in range(k, cols))
        divisors.extend(AtLeast(bound) for _ in range(remaining))
    free = max(0, cols - rows)
    return DvrSnfResult(divisors, certified, free, D)


def cokernel_fp_dim(M: SeriesMatrix):
    res = dvr_snf(M)
    if res.certified and res.free_rank == 0:
        return sum(res.divisor_valuations)
    total = sum(v.bound if isinstance(v, AtLeast) else v for v in res.divisor_valuations)
    total += res.free_rank * M.D
    return AtLeast(max(total, M.D), possibly_infinite=True)
