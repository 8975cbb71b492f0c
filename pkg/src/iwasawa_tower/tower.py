"""Tower sweeps, corank-one scans and the King valuation analysis."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import InputError, InvariantViolation, SizeCapError
from .extint import AtLeast, ext_to_json
from .groupring import (
    DEFAULT_SIZE_CAP,
    LaurentPoly,
    ModulePresentation,
    evaluate_at_series,
    expand_level,
    substitute_character,
)
from .linalg import SeriesMatrix, cokernel_fp_dim, integer_snf, rank_over_Fp, rank_over_Q
from .padic import DigitSplit, PadicInt, digit_split, vp_int
from .series import (
    TruncatedSeries,
    one_plus_t_pow,
    required_lambda_precision,
    series_valuation,
)

BOUNDED = "bounded-on-range"
UNBOUNDED = "unbounded-growth-detected"
INCONCLUSIVE = "inconclusive"


@dataclass
class LevelRecord:
    s: int
    rank: int | None = None
    fpdim: object = None
    torsion_exponents: list | None = None
    h1_rank_bound: int | None = None
    h1_fpdim_split: object = None
    columns: int | None = None

    def to_json(self):
        out = {"s": self.s}
        for key in ("rank", "fpdim", "torsion_exponents", "h1_rank_bound", "h1_fpdim_split", "columns"):
            v = getattr(self, key)
            if v is not None:
                out[key] = ext_to_json(v)
        return out


@dataclass
class TowerReport:
    p: int
    n: int
    levels: list = field(default_factory=list)
    route: str | None = None
    verdict: str | None = None

    def to_json(self):
        out = {
            "quantity": "coinvariants of A along Q > Q^p > Q^(p^2) > ...",
            "p": self.p,
            "n": self.n,
            "levels": [lv.to_json() for lv in self.levels],
        }
        if self.route:
            out["route"] = self.route
        if self.verdict:
            out["verdict"] = self.verdict
        return out

    def csv_rows(self):
        header = ["s", "rank", "fpdim", "h1_bound"]
        rows = []
        for lv in self.levels:
            rows.append([
                lv.s,
                "" if lv.rank is None else lv.rank,
                "" if lv.fpdim is None else str(lv.fpdim),
                "" if lv.h1_rank_bound is None else lv.h1_rank_bound,
            ])
        return header, rows


def _check_levels(s_max):
    if s_max < 1:
        raise InputError("levels start at s = 1")


def rank_at_level(pres, s, size_cap=DEFAULT_SIZE_CAP, torsion=False):
    lm = expand_level(pres, s, size_cap)
    rank = lm.matrix.ncols - rank_over_Q(lm.matrix)
    tors = None
    if torsion:
        tors = sorted(vp_int(d, pres.p) for d in integer_snf(lm.matrix, size_cap) if d % pres.p == 0)
    return rank, tors, lm.matrix.ncols


def rank_sequence_verdict(ranks):
    if len(ranks) >= 2 and all(b > a for a, b in zip(ranks, ranks[1:])):
        return UNBOUNDED
    if len(ranks) >= 2 and ranks[-1] == ranks[-2]:
        return BOUNDED
    return INCONCLUSIVE


def rank_tower(pres: ModulePresentation, s_max: int, size_cap=DEFAULT_SIZE_CAP, torsion=False) -> TowerReport:
    """rank(A (x)_{Z_p[[Q^(p^s)]]} Z_p) for s = 1..s_max, with n + rank as the H1 bound."""
    _check_levels(s_max)
    report = TowerReport(pres.p, pres.n)
    for s in range(1, s_max + 1):
        try:
            rank, tors, cols = rank_at_level(pres, s, size_cap, torsion)
        except SizeCapError as exc:
            raise SizeCapError(
                f"{exc} (largest feasible level: s={s - 1})", required=exc.required
            ) from None
        report.levels.append(
            LevelRecord(s=s, rank=rank, torsion_exponents=tors, h1_rank_bound=pres.n + rank, columns=cols)
        )
    report.verdict = rank_sequence_verdict([lv.rank for lv in report.levels])
    return report


# F_p dimensions


def _find_elimination(pres: ModulePresentation):
    """(variable index, phi) with a relation u*x_i - psi, u a unit mod p and psi free of x_i."""
    p = pres.p
    for row in pres.relations:
        entry = row[0]
        for i in range(pres.n):
            unit = tuple(1 if k == i else 0 for k in range(pres.n))
            touching = [e for e in entry.terms if e[i] != 0]
            if touching != [unit] or entry.terms[unit] % p == 0:
                continue
            u = entry.terms[unit]
            rest = LaurentPoly(pres.n, {e: c for e, c in entry.terms.items() if e != unit})
            return i, rest, u
    return None


def fpdim_series_route(pres: ModulePresentation, s: int):
    """dim_Fp of A/A_(p^s) (x) F_p through one-variable series.

    Needs gens = 1 and either n = 1 or n = 2 with a relation that solves
    for one variable.
    """
    if pres.gens != 1:
        raise InputError("series route needs a cyclic module (gens = 1)")
    p, N = pres.p, pres.p**s
    D = N + 1
    t1 = TruncatedSeries.one_plus_t(p, D)
    if pres.n == 1:
        images = [t1]
    elif pres.n == 2:
        found = _find_elimination(pres)
        if found is None:
            raise InputError(
                "series route inapplicable: no relation solves for x or y with a unit coefficient"
            )
        i, rest, u = found
        other = [k for k in range(2) if k != i][0]
        # x_i = -rest / u, evaluated with the remaining variable at 1 + t;
        # rest does not involve x_i, so its slot gets a dummy unit
        sub = [None, None]
        sub[other] = t1
        sub[i] = TruncatedSeries(p, 1, D, (1,))
        phi = evaluate_at_series(rest, sub) * (-pow(u, -1, p))
        if phi.coeffs[0] % p == 0:
            # x_i would be a non-unit: the relation is a unit and kills A
            return 0
        images = [None, None]
        images[other] = t1
        images[i] = phi
    else:
        raise InputError("series route supports n <= 2")
    rows = [[evaluate_at_series(row[0], images)] for row in pres.relations]
    rows += [[img**N - 1] for img in images]
    return cokernel_fp_dim(SeriesMatrix(rows, p, D, 1))


def fpdim_block_route(pres, s, size_cap=DEFAULT_SIZE_CAP):
    lm = expand_level(pres, s, size_cap)
    return lm.matrix.ncols - rank_over_Fp(lm.matrix, pres.p), lm.matrix.ncols


def fpdim_tower(pres: ModulePresentation, s_max: int, route: str = "block", size_cap=DEFAULT_SIZE_CAP) -> TowerReport:
    _check_levels(s_max)
    if route not in ("block", "series"):
        raise InputError(f"unknown route {route!r}")
    report = TowerReport(pres.p, pres.n, route=route)
    for s in range(1, s_max + 1):
        cols = None
        if route == "block":
            try:
                dim, cols = fpdim_block_route(pres, s, size_cap)
            except SizeCapError as exc:
                raise SizeCapError(
                    f"{exc} (largest feasible level: s={s - 1})", required=exc.required
                ) from None
        else:
            dim = fpdim_series_route(pres, s)
        split = dim if isinstance(dim, AtLeast) else pres.n + dim
        report.levels.append(LevelRecord(s=s, fpdim=dim, h1_fpdim_split=split, columns=cols))
    return report


def h1_fpdim_split(pres: ModulePresentation, s: int, route: str = "block", size_cap=DEFAULT_SIZE_CAP):
    """d(A x| Q^(p^s)) = n + dim_Fp(A (x)_{Q^(p^s)} F_p) for the split extension."""
    _check_levels(s)
    if route == "series":
        dim = fpdim_series_route(pres, s)
    else:
        dim, _ = fpdim_block_route(pres, s, size_cap)
    if isinstance(dim, AtLeast):
        return dim
    return pres.n + dim


def h1_rank_bound(pres: ModulePresentation, s: int, size_cap=DEFAULT_SIZE_CAP) -> int:
    _check_levels(s)
    rank, _, _ = rank_at_level(pres, s, size_cap)
    return pres.n + rank


# corank-one subgroups


@dataclass
class ScanEntry:
    lam: PadicInt
    axis_swap: bool
    fp_dim: object

    def to_json(self):
        a, b = ("y", "x") if self.axis_swap else ("x", "y")
        r = self.lam.residue
        return {
            "subgroup": f"<{a}>" if r == 0 else f"<{a} {b}^-{r}>",
            "lambda": self.lam.residue,
            "precision": self.lam.precision,
            "axis_swap": self.axis_swap,
            "fp_dim": ext_to_json(self.fp_dim),
        }


@dataclass
class HypothesisReport:
    entries: list
    D: int
    seed: int | None = None

    @property
    def sup_observed(self):
        bounds = [e.fp_dim for e in self.entries if isinstance(e.fp_dim, AtLeast)]
        if bounds:
            return max(bounds)
        return max((e.fp_dim for e in self.entries), default=0)

    @property
    def hypothesis_plausible(self) -> bool:
        return not any(isinstance(e.fp_dim, AtLeast) for e in self.entries)

    @property
    def verdict(self):
        return BOUNDED if self.hypothesis_plausible else INCONCLUSIVE

    def to_json(self):
        return {
            "quantity": "dim_Fp(A (x)_{Z_p[[H]]} F_p) over corank-one H",
            "D": self.D,
            "seed": self.seed,
            "entries": [e.to_json() for e in self.entries],
            "sup_observed": ext_to_json(self.sup_observed),
            "hypothesis_plausible": self.hypothesis_plausible,
            "verdict": self.verdict,
        }

    def csv_rows(self):
        header = ["lambda", "axis_swap", "fp_dim"]
        return header, [[e.lam.residue, int(e.axis_swap), str(e.fp_dim)] for e in self.entries]


def default_lambda_grid(p: int, D: int | None = None, seed: int = 0, n_random: int = 20, K: int = 4):
    """All residues mod p^2 plus ``n_random`` seeded random lam with K digits."""
    if D is None:
        D = 2 * p
    K = max(K, required_lambda_precision(p, D))
    grid = [PadicInt(p, K, r) for r in range(p * p)]
    rng = random.Random(seed)
    grid += [PadicInt(p, K, rng.randrange(p**K)) for _ in range(n_random)]
    return grid


def subgroup_fp_dim(pres, lam, axis_swap, D):
    rows = substitute_character(pres, lam, axis_swap, D, K_out=1)
    return cokernel_fp_dim(SeriesMatrix(rows, pres.p, D, pres.gens))


def corank1_scan(pres: ModulePresentation, lambda_set, D: int | None = None, both_axes: bool = True, seed=None) -> HypothesisReport:
    if pres.n != 2:
        raise InputError("corank-one scans are implemented for n = 2 only")
    if D is None:
        D = 2 * pres.p
    entries = []
    for lam in lambda_set:
        for swap in ((False, True) if both_axes else (False,)):
            entries.append(ScanEntry(lam, swap, subgroup_fp_dim(pres, lam, swap, D)))
    return HypothesisReport(entries, D, seed)


# King's module


@dataclass
class KingReport:
    lam: PadicInt
    split: DigitSplit
    valuation: object
    f_series: TruncatedSeries
    g_poly: TruncatedSeries
    congruent: bool
    bound_ok: bool

    def to_json(self):
        return {
            "quantity": "t-adic valuation of f_lambda = dim_Fp F_p[[t]]/(f_lambda)",
            "lambda": self.lam.residue,
            "precision": self.lam.precision,
            "z0": self.split.z0,
            "a0": self.split.a0,
            "valuation": ext_to_json(self.valuation),
            "f_series": self.f_series.to_json(),
            "g_poly": self.g_poly.to_json(),
            "f_congruent_g_mod_t^p": self.congruent,
            "bound_ok": self.bound_ok,
        }

    def csv_row(self):
        return [self.lam.residue, self.split.z0, self.split.a0, str(self.valuation)]


KING_CSV_HEADER = ["lambda", "z0", "a0", "valuation"]


def king_f(lam: PadicInt, D: int) -> TruncatedSeries:
    """(1+t)^lam + (1+t)^-lam + (1+t) + (1+t)^-1 - 4 over F_p mod t^D."""
    p = lam.p
    one_t = TruncatedSeries.one_plus_t(p, D)
    return one_plus_t_pow(lam, D) + one_plus_t_pow(-lam, D) + one_t + one_t ** (-1) - 4


def king_g(split: DigitSplit, p: int, D: int) -> TruncatedSeries:
    one_t = TruncatedSeries.one_plus_t(p, D)
    return one_t**split.z0 + one_t**split.a0 + one_t + one_t ** (p - 1) - 4


def king_valuation(lam: PadicInt, p: int | None = None, D: int | None = None, strict: bool = True) -> KingReport:
    p = lam.p if p is None else p
    if p != lam.p:
        raise InputError(f"lambda is {lam.p}-adic, asked for p = {p}")
    if p == 2:
        raise InputError("King's module needs an odd prime p")
    if D is None:
        D = 2 * p
    if D < p + 1:
        raise InputError(f"D must be at least p + 1 = {p + 1}")
    f = king_f(lam, D)
    split = digit_split(lam)
    g = king_g(split, p, D)
    val = series_valuation(f)
    congruent = f.coeffs[:p] == g.coeffs[:p]
    bound_ok = not isinstance(val, AtLeast) and val < p
    if strict and not congruent:
        raise InvariantViolation(f"f_lambda and g_lambda differ below t^{p} for lambda={lam}")
    if strict and not bound_ok:
        raise InvariantViolation(f"valuation {val} of f_lambda is not below p={p} for lambda={lam}")
    return KingReport(lam, split, val, f, g, congruent, bound_ok)


def king_presentation(p: int) -> ModulePresentation:
    from .groupring import parse_presentation

    return parse_presentation(f"p={p}; n=2; gens=1;\nrel: p\nrel: x + x^-1 + y + y^-1 - 4\n")


# stabilization


@dataclass
class StabilizationReport:
    ranks: list
    from_level: int | None

    @property
    def stabilized(self):
        return self.from_level is not None

    @property
    def verdict(self):
        if self.stabilized:
            return BOUNDED
        return rank_sequence_verdict(self.ranks)

    def to_json(self):
        return {
            "quantity": "rank(A (x)_{Z_p[[Q^(p^s)]]} Z_p) stabilization",
            "ranks": self.ranks,
            "stabilized": self.stabilized,
            "from_level": self.from_level,
            "verdict": self.verdict,
            "message": (
                f"constant from s={self.from_level}" if self.stabilized else "not stabilized within range"
            ),
        }


def stabilization_probe(pres: ModulePresentation, s_max: int, size_cap=DEFAULT_SIZE_CAP) -> StabilizationReport:
    """Least s with rank_s = ... = rank_(s_max); at least two levels must agree."""
    if s_max < 2:
        raise InputError("stabilization needs s_max >= 2")
    return stabilization_from_ranks([lv.rank for lv in rank_tower(pres, s_max, size_cap).levels])


def stabilization_from_ranks(ranks) -> StabilizationReport:
    start = len(ranks) - 1
    while start > 0 and ranks[start - 1] == ranks[-1]:
        start -= 1
    from_level = start + 1 if start < len(ranks) - 1 else None
    return StabilizationReport(ranks, from_level)
