"""Laurent polynomials over Z and finitely presented modules over Z_p[[Q]], Q = Z_p^n.

A presentation is stored through its dense subring Z[x1^+-1, ..., xn^+-1]
with xi = 1 + ti. Two reductions are provided: the finite level ring
Z[Q/Q^(p^s)] (``expand_level``) and substitution along a corank-one
character into one-variable series (``substitute_character``).

Presentation text format::

    # comments run to end of line
    p=5; n=2; gens=1;
    rel: p
    rel: x + x^-1 + y + y^-1 - 4

Statements are separated by ``;`` or newlines. Entries of a multi-generator
relation row are separated by ``|``. Variables are ``x, y`` (n = 2), ``x``
(n = 1) or ``x1 .. xn``; ``p`` denotes the prime as a scalar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product

from .errors import InputError, ParseError, SizeCapError
from .padic import PadicInt, is_prime
from .series import TruncatedSeries, one_plus_t_pow, series_inverse

DEFAULT_SIZE_CAP = 20000
MAX_EXPONENT = 2**20


class LaurentPoly:
    """Finitely supported element of Z[Q], exponent vector -> nonzero int."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        t = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has wrong length for n={n}")
            c = t.get(e, 0) + int(c)
            if c:
                t[e] = c
            else:
                t.pop(e, None)
        self.terms = t

    @classmethod
    def const(cls, n, c):
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, n, exps, c=1):
        return cls(n, {tuple(exps): c})

    @classmethod
    def var(cls, n, i):
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1})

    def is_zero(self):
        return not self.terms

    def _same(self, other):
        if isinstance(other, int):
            return LaurentPoly.const(self.n, other)
        if other.n != self.n:
            raise InputError("Laurent polynomials in different ranks")
        return other

    def __add__(self, other):
        o = self._same(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return LaurentPoly(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        o = self._same(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentPoly(self.n, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise InputError("negative power of a non-monomial")
            (e, c), = self.terms.items()
            if c not in (1, -1):
                raise InputError("negative power of a non-unit monomial")
            return LaurentPoly(self.n, {tuple(k * a for a in e): c ** (-k)})
        result = LaurentPoly.const(self.n, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.n, other)
        return isinstance(other, LaurentPoly) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def var_names(self):
        return default_var_names(self.n)

    def __str__(self):
        return format_poly(self, self.var_names())

    def __repr__(self):
        return f"LaurentPoly({self})"


def default_var_names(n):
    if n == 1:
        return ["x"]
    if n == 2:
        return ["x", "y"]
    return [f"x{i + 1}" for i in range(n)]


def format_poly(poly, names):
    if poly.is_zero():
        return "0"
    out = []
    for e in sorted(poly.terms, reverse=True):
        c = poly.terms[e]
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        mono = "*".join(factors)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


@dataclass(frozen=True)
class ModulePresentation:
    """A = Z_p[[Q]]^gens / closure of the relation rows."""

    p: int
    n: int
    gens: int
    relations: tuple = ()
    coeff_mode: str = "integral"
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"p={self.p} is not prime")
        if self.n < 1:
            raise InputError("n must be >= 1")
        if self.gens < 1:
            raise InputError("gens must be >= 1")
        rels = []
        for row in self.relations:
            row = tuple(row)
            if len(row) != self.gens:
                raise InputError(
                    f"relation row has {len(row)} entries, expected {self.gens}"
                )
            for entry in row:
                if entry.n != self.n:
                    raise InputError("relation entry has wrong rank")
            rels.append(row)
        object.__setattr__(self, "relations", tuple(rels))

    def with_relations(self, relations):
        return ModulePresentation(self.p, self.n, self.gens, tuple(relations))

    def to_text(self) -> str:
        names = default_var_names(self.n)
        lines = [f"p={self.p}; n={self.n}; gens={self.gens};"]
        for row in self.relations:
            lines.append("rel: " + " | ".join(format_poly(e, names) for e in row))
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "p": self.p,
            "n": self.n,
            "gens": self.gens,
            "relations": [[str(e) for e in row] for row in self.relations],
        }


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|\+|-|\(|\)))")


class _ExprParser:
    def __init__(self, text, n, names, p, line, col0):
        self.text, self.n, self.names, self.p = text, n, names, p
        self.line, self.col0 = line, col0
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                col = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[col]!r}", line, col0 + col)
            start = m.start(m.lastindex)
            self.toks.append((m.group(m.lastindex), m.lastindex, col0 + start))
            pos = m.end()
        self.i = 0

    def err(self, msg):
        col = self.toks[self.i][2] if self.i < len(self.toks) else self.col0 + len(self.text)
        raise ParseError(msg, self.line, col)

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            self.err("empty expression")
        e = self.expr()
        if self.i != len(self.toks):
            self.err(f"unexpected token {self.peek()!r}")
        return e

    def expr(self):
        acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.unary()
        while self.peek() == "*":
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def signed_int(self):
        sign = 1
        if self.peek() in ("-", "+"):
            sign = -1 if self.take()[0] == "-" else 1
        if self.i >= len(self.toks) or self.toks[self.i][1] != 1:
            self.err("expected integer exponent")
        value = sign * int(self.take()[0])
        if abs(value) > MAX_EXPONENT:
            self.i -= 1
            self.err(f"exponent {value} exceeds limit {MAX_EXPONENT}")
        return value

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            k = self.signed_int()
            try:
                return base**k
            except InputError as exc:
                self.i -= 1
                self.err(str(exc))
        return base

    def atom(self):
        if self.i >= len(self.toks):
            self.err("unexpected end of expression")
        tok, kind, col = self.take()
        if kind == 1:
            return LaurentPoly.const(self.n, int(tok))
        if kind == 2:
            if tok == "p":
                return LaurentPoly.const(self.n, self.p)
            if tok in self.names:
                return LaurentPoly.var(self.n, self.names[tok])
            raise ParseError(f"unknown symbol {tok!r}", self.line, col)
        if tok == "(":
            e = self.expr()
            if self.peek() != ")":
                self.err("expected ')'")
            self.take()
            return e
        raise ParseError(f"unexpected token {tok!r}", self.line, col)


def _var_table(n):
    names = {f"x{i + 1}": i for i in range(n)}
    for i, name in enumerate(default_var_names(n)):
        names[name] = i
    return names


def parse_presentation(text: str) -> ModulePresentation:
    header = {}
    pending = []  # (line, col, body)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        for seg in line.split(";"):
            seg_col = col + 1
            col += len(seg) + 1
            stripped = seg.strip()
            if not stripped:
                continue
            lead = seg_col + len(seg) - len(seg.lstrip())
            if stripped.startswith("rel:") or stripped.startswith("rel :"):
                body_off = seg.index(":") + 1
                pending.append((lineno, seg_col + body_off, seg[body_off:]))
                continue
            if "=" not in stripped:
                raise ParseError(f"expected 'key=value' or 'rel:', got {stripped!r}", lineno, lead)
            key, value = (s.strip() for s in stripped.split("=", 1))
            if key not in ("p", "n", "gens"):
                raise ParseError(f"unknown header key {key!r}", lineno, lead)
            if pending:
                raise ParseError("header after relations", lineno, lead)
            try:
                header[key] = int(value)
            except ValueError:
                raise ParseError(f"{key} must be an integer, got {value!r}", lineno, lead) from None
    for key in ("p", "n", "gens"):
        if key not in header:
            raise ParseError(f"missing header '{key}='")
    p, n, g = header["p"], header["n"], header["gens"]
    if not is_prime(p):
        raise ParseError(f"p={p} is not prime")
    if n < 1 or g < 1:
        raise ParseError("n and gens must be >= 1")
    names = _var_table(n)
    rows = []
    for lineno, col, body in pending:
        entries = []
        offset = 0
        parts = body.split("|")
        if len(parts) != g:
            raise ParseError(f"relation has {len(parts)} entries, expected gens={g}", lineno, col)
        for part in parts:
            entries.append(_ExprParser(part, n, names, p, lineno, col + offset).parse())
            offset += len(part) + 1
        rows.append(tuple(entries))
    return ModulePresentation(p, n, g, tuple(rows), source=text)


# level expansion


@dataclass
class LevelMatrix:
    """Relation matrix of A/A Omega_(p^s) over Z as a sparse integer matrix.

    Columns are (generator, group element) with generator-major order and
    group elements of (Z/p^s)^n in lexicographic order.
    """

    p: int
    s: int
    n: int
    gens: int
    matrix: "IntegerMatrix"

    @property
    def shape(self):
        return (self.matrix.nrows, self.matrix.ncols)


def level_group(p, n, s):
    N = p**s
    return list(product(range(N), repeat=n))


def expand_level(pres: ModulePresentation, s: int, size_cap: int = DEFAULT_SIZE_CAP) -> LevelMatrix:
    from .linalg import IntegerMatrix

    if s < 0:
        raise InputError("level must be >= 0")
    N = pres.p**s
    order = N**pres.n
    cols = pres.gens * order
    if cols > size_cap:
        raise SizeCapError(
            f"level s={s} needs {cols} columns, above the size cap {size_cap}; "
            f"rerun with --size-cap {cols} or lower s",
            required=cols,
        )
    weights = [N ** (pres.n - 1 - i) for i in range(pres.n)]

    def index(e):
        return sum((a % N) * w for a, w in zip(e, weights))

    rows = []
    elements = level_group(pres.p, pres.n, s)
    for rel in pres.relations:
        # reduce each entry's exponents once, then translate by h
        reduced = []
        for k, entry in enumerate(rel):
            base = k * order
            for e, c in entry.terms.items():
                reduced.append((base, tuple(a % N for a in e), c))
        for h in elements:
            row = {}
            for base, e, c in reduced:
                j = base + index(tuple(a + b for a, b in zip(e, h)))
                v = row.get(j, 0) + c
                if v:
                    row[j] = v
                else:
                    row.pop(j, None)
            rows.append(row)
    return LevelMatrix(pres.p, s, pres.n, pres.gens, IntegerMatrix(rows, cols))


# substitution into one-variable series


def evaluate_at_series(poly: LaurentPoly, images) -> TruncatedSeries:
    """Substitute variable i -> images[i]; images must be units."""
    ref = images[0]
    total = TruncatedSeries(ref.p, ref.K, ref.D, (0,))
    cache = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            if k < 0:
                cache[key] = series_inverse(power(i, -k))
            elif k == 0:
                cache[key] = TruncatedSeries(ref.p, ref.K, ref.D, (1,))
            else:
                cache[key] = images[i] ** k
        return cache[key]

    for e, c in poly.terms.items():
        term = TruncatedSeries(ref.p, ref.K, ref.D, (c,))
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        total = total + term
    return total


def character_images(lam: PadicInt, axis_swap: bool, D: int, K_out: int = 1):
    """Images of (x, y) under the character killing <x y^-lam> (or <y x^-lam>)."""
    t1 = TruncatedSeries.one_plus_t(lam.p, D, K_out)
    tl = one_plus_t_pow(lam, D, K_out)
    return (t1, tl) if axis_swap else (tl, t1)


def substitute_character(pres: ModulePresentation, lam: PadicInt, axis_swap: bool = False, D: int | None = None, K_out: int = 1):
    """Rows of A (x)_{Z_p[[H]]} - as vectors over Z/p^K_out[[t]] mod t^D.

    H = <x y^-lam>, x -> (1+t)^lam, y -> 1+t; with ``axis_swap`` the roles
    of x and y are exchanged, H = <y x^-lam>.
    """
    if pres.n != 2:
        raise InputError(f"corank-one substitution needs n = 2, got n = {pres.n}")
    if lam.p != pres.p:
        raise InputError(f"lambda is {lam.p}-adic but the module has p = {pres.p}")
    if D is None:
        D = 2 * pres.p
    images = character_images(lam, axis_swap, D, K_out)
    return [tuple(evaluate_at_series(entry, images) for entry in row) for row in pres.relations]


def subgroup_from_generator(i: int, j: int, p: int, precision: int):
    """Normalize H = <x^i y^j> to (lam, axis_swap).

    i a unit: H = <x y^-lam> with lam = -j/i. Otherwise j must be a unit and
    H = <y x^-mu> with mu = -i/j. Both divisible by p is rejected.
    """
    m = p**precision
    if i % p:
        return PadicInt(p, precision, -j * pow(i, -1, m)), False
    if j % p:
        return PadicInt(p, precision, -i * pow(j, -1, m)), True
    raise InputError(
        f"<x^{i} y^{j}>: both exponents divisible by p={p}; Q/H is not Z_p"
    )
