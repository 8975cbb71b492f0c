"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 resource cap exceeded,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .bounds import (
    CyclicDecomposition,
    FiveTermInput,
    WilsonBoundParams,
    coinvariant_dim_bound,
    d_of_U,
    d_of_U_direct,
    decompose_finite_module,
    five_term_bounds,
    minimal_level,
    wilson_check,
)
from .errors import InputError, TowerError
from .groupring import DEFAULT_SIZE_CAP, parse_presentation
from .linalg import SeriesMatrix
from .padic import PadicInt, is_prime, parse_lambda
from .series import required_lambda_precision
from .tower import (
    KING_CSV_HEADER,
    corank1_scan,
    default_lambda_grid,
    fpdim_tower,
    king_valuation,
    rank_tower,
    stabilization_from_ranks,
)

SCHEMA = 1


def _add_common(sp, presentation=True):
    if presentation:
        src = sp.add_argument_group("input")
        src.add_argument("--file", help="presentation file")
        src.add_argument("--presentation", help="inline presentation text")
    sp.add_argument("--format", choices=["json", "csv", "text"], default="json")
    sp.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP,
                    help="max columns of a level matrix (default %(default)s)")


def _add_lambda_grid(sp):
    g = sp.add_argument_group("lambda grid")
    g.add_argument("--lambda", dest="lambdas", action="append", default=[],
                   help="lambda as a decimal integer or base-p digits 'd0,d1,...' (repeatable)")
    g.add_argument("--all-residues-mod", type=int, help="every residue 0..M-1")
    g.add_argument("--random", type=int, default=None, help="number of seeded random lambda")
    g.add_argument("--K", type=int, default=4, help="p-adic precision of lambda (digits)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--D", type=int, default=None, help="truncation degree (default 2p)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="iwasawa-tower",
        description="Homology growth of metabelian pro-p groups A x| Z_p^n.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("tower", help="ranks of coinvariants along Q^(p^s)")
    _add_common(sp)
    sp.add_argument("--s-max", type=int, default=3)
    sp.add_argument("--torsion", action="store_true", help="also report p-torsion exponents (integer SNF)")

    sp = sub.add_parser("fpdim", help="F_p-dimensions of coinvariants along Q^(p^s)")
    _add_common(sp)
    sp.add_argument("--s-max", type=int, default=3)
    sp.add_argument("--route", choices=["block", "series"], default="block")

    sp = sub.add_parser("scan", help="coinvariants over corank-one subgroups (n = 2)")
    _add_common(sp)
    _add_lambda_grid(sp)
    sp.add_argument("--one-axis", action="store_true", help="skip the axis-swapped family")

    sp = sub.add_parser("king", help="valuation of f_lambda for A = F_p[[Q]]/(x+1/x+y+1/y-4)")
    _add_common(sp, presentation=False)
    sp.add_argument("--p", type=int, required=True)
    _add_lambda_grid(sp)

    sp = sub.add_parser("bounds", help="generator-count bound calculators")
    sp.add_argument("--format", choices=["json", "text"], default="json")
    bsub = sp.add_subparsers(dest="kind", required=True)
    b = bsub.add_parser("five-term", help="sandwich for d(G) from H0(Q, H1(N)), H1(Q), H2(Q)")
    b.add_argument("--dim-h0", type=int, required=True)
    b.add_argument("--dim-h1q", type=int)
    b.add_argument("--dim-h2q", type=int)
    b.add_argument("--n", type=int, help="use Q = Z_p^(n-1): H1 = n-1, H2 = C(n-1, 2)")
    b = bsub.add_parser("coinvariant", help="d(H) + C(n-1, 2) - n + 1")
    b.add_argument("--d-h", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b = bsub.add_parser("wilson", help="d(U) <= k [G:U]^(1/2)")
    b.add_argument("--d-u", type=int, required=True)
    b.add_argument("--k", type=Fraction, required=True)
    b.add_argument("--index", type=int, required=True)
    b = bsub.add_parser("d-of-u", help="d(U) = i_1 + ... + i_s + 1 for p^j > max i")
    b.add_argument("--exponents", required=True, help="comma-separated i_1,...,i_s")
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--j", type=int)

    sp = sub.add_parser("decompose", help="cyclic decomposition of a finite F_p[[t]]-module")
    sp.add_argument("--format", choices=["json", "text"], default="json")
    sp.add_argument("--matrix-file", help="JSON {p, D, rows: [[coeffs, ...], ...]}")
    sp.add_argument("--diag", help="comma-separated valuations of a diagonal matrix")
    sp.add_argument("--p", type=int)
    sp.add_argument("--D", type=int, default=None)
    sp.add_argument("--j", type=int, help="also compute d(U) at index p^j (both routes)")
    return ap


# helpers


def _load_presentation(args):
    if bool(args.file) == bool(args.presentation):
        raise InputError("give exactly one of --file or --presentation")
    if args.file:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    else:
        text = args.presentation.replace("\\n", "\n")
    return parse_presentation(text)


def _lambda_grid(args, p):
    D = args.D if args.D is not None else 2 * p
    K = max(args.K, required_lambda_precision(p, D))
    lams = [parse_lambda(s, p, K) for s in args.lambdas]
    if args.all_residues_mod is not None:
        if args.all_residues_mod < 1:
            raise InputError("--all-residues-mod must be positive")
        lams += [PadicInt(p, K, r) for r in range(args.all_residues_mod)]
    if args.random is not None:
        import random

        rng = random.Random(args.seed)
        lams += [PadicInt(p, K, rng.randrange(p**K)) for _ in range(args.random)]
    if not lams:
        lams = default_lambda_grid(p, D, seed=args.seed, K=K)
    args.D, args.K = D, K
    return lams, D, K


def _config(args):
    cfg = {k: v for k, v in sorted(vars(args).items()) if v is not None and k != "presentation"}
    if args.__dict__.get("presentation"):
        cfg["presentation"] = args.presentation
    for k, v in cfg.items():
        if isinstance(v, Fraction):
            cfg[k] = str(v)
    return cfg


def _emit(args, report_json, csv_table=None, text=None, out=None):
    out = out or sys.stdout
    fmt = args.format
    if fmt == "json":
        doc = {"schema": SCHEMA, "config": _config(args), "report": report_json}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        if csv_table is None:
            raise InputError("csv output is not available for this command")
        header, rows = csv_table
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(_config(args), sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write("# config: " + json.dumps(_config(args), sort_keys=True) + "\n")
        out.write(text if text is not None else json.dumps(report_json, indent=2, sort_keys=True) + "\n")


def _table(header, rows):
    cells = [[str(c) for c in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) + "\n" for r in cells)


# commands


def cmd_tower(args):
    pres = _load_presentation(args)
    rep = rank_tower(pres, args.s_max, args.size_cap, torsion=args.torsion)
    doc = rep.to_json()
    if args.s_max >= 2:
        doc["stabilization"] = stabilization_from_ranks([lv.rank for lv in rep.levels]).to_json()
    return doc, rep.csv_rows(), _table(*rep.csv_rows())


def cmd_fpdim(args):
    pres = _load_presentation(args)
    rep = fpdim_tower(pres, args.s_max, args.route, args.size_cap)
    header = ["s", "fpdim", "h1_fpdim_split"]
    rows = [[lv.s, str(lv.fpdim), str(lv.h1_fpdim_split)] for lv in rep.levels]
    return rep.to_json(), (header, rows), _table(header, rows)


def cmd_scan(args):
    pres = _load_presentation(args)
    lams, D, _ = _lambda_grid(args, pres.p)
    rep = corank1_scan(pres, lams, D, both_axes=not args.one_axis, seed=args.seed)
    table = rep.csv_rows()
    text = _table(*table) + f"sup_observed: {rep.sup_observed}\nverdict: {rep.verdict}\n"
    return rep.to_json(), table, text


def cmd_king(args):
    p = args.p
    if not is_prime(p):
        raise InputError(f"p={p} is not prime")
    if p == 2:
        raise InputError("King's module needs an odd prime p")
    lams, D, _ = _lambda_grid(args, p)
    reports = [king_valuation(lam, p, D) for lam in lams]
    rows = [r.csv_row() for r in reports]
    doc = {
        "quantity": "t-adic valuation of f_lambda = dim_Fp F_p[[t]]/(f_lambda)",
        "p": p,
        "D": D,
        "rows": [r.to_json() for r in reports],
        "max_valuation": max(r.valuation for r in reports),
        "all_below_p": all(r.bound_ok for r in reports),
        "all_congruent": all(r.congruent for r in reports),
    }
    return doc, (KING_CSV_HEADER, rows), _table(KING_CSV_HEADER, rows)


def cmd_bounds(args):
    if args.kind == "five-term":
        if args.n is not None:
            inp = FiveTermInput.for_free_abelian(args.dim_h0, args.n)
        else:
            if args.dim_h1q is None or args.dim_h2q is None:
                raise InputError("give --n or both --dim-h1q and --dim-h2q")
            inp = FiveTermInput(args.dim_h0, args.dim_h1q, args.dim_h2q)
        lo, hi = five_term_bounds(inp)
        doc = {"quantity": "d(G) sandwich from the five-term exact sequence", "lower": lo, "upper": hi}
        return doc, None, f"{lo} <= d(G) <= {hi}\n"
    if args.kind == "coinvariant":
        v = coinvariant_dim_bound(args.d_h, args.n)
        return {"quantity": "dim_Fp(A (x)_{Z_p[[H]]} F_p) upper bound", "value": v}, None, f"{v}\n"
    if args.kind == "wilson":
        ok = wilson_check(args.d_u, WilsonBoundParams(args.k, args.index))
        return {"quantity": "d(U) <= k [G:U]^(1/2)", "value": ok}, None, f"{ok}\n"
    exps = [int(x) for x in args.exponents.split(",") if x.strip()]
    dec = CyclicDecomposition(tuple(exps))
    j = args.j if args.j is not None else minimal_level(dec.m, args.p)
    v = d_of_U(dec, args.p, j)
    return {"quantity": "d(U), U = <H, q^(p^j)>", "j": j, "value": v}, None, f"{v}\n"


def _load_series_matrix(args):
    if args.matrix_file:
        try:
            with open(args.matrix_file, encoding="utf-8") as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {args.matrix_file}: {exc}") from None
        return SeriesMatrix.from_coeff_lists(obj["rows"], obj["p"], obj["D"])
    if args.diag is None or args.p is None:
        raise InputError("give --matrix-file, or --diag with --p")
    vals = [int(x) for x in args.diag.split(",")]
    D = args.D if args.D is not None else max(vals + [0]) + 4
    return SeriesMatrix.diagonal(vals, args.p, D)


def cmd_decompose(args):
    M = _load_series_matrix(args)
    dec = decompose_finite_module(M)
    doc = {"quantity": "cyclic decomposition of a finite F_p[[t]]-module", **dec.to_json()}
    if args.j is not None:
        doc["j"] = args.j
        doc["d_of_U_direct"] = d_of_U_direct(M, M.p, args.j)
        if M.p**args.j > dec.m:
            doc["d_of_U"] = d_of_U(dec, M.p, args.j)
    text = f"exponents: {list(dec.exponents)}  m = {dec.m}  d(H) = {dec.d_H}\n"
    for key in ("d_of_U", "d_of_U_direct"):
        if key in doc:
            text += f"{key} (j = {args.j}): {doc[key]}\n"
    return doc, None, text


COMMANDS = {
    "tower": cmd_tower,
    "fpdim": cmd_fpdim,
    "scan": cmd_scan,
    "king": cmd_king,
    "bounds": cmd_bounds,
    "decompose": cmd_decompose,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        doc, table, text = COMMANDS[args.command](args)
        _emit(args, doc, table, text, out)
    except TowerError as exc:
        err.write(f"error: {exc}\n")
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        err.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return 3
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
