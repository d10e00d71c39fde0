"""Command-line front end.

Subcommands ``eval``, ``table``, ``verify``, ``solve`` and ``bound``; global
flags may appear before or after the subcommand.  Exit status is 0 on
success, 1 when a verification case fails, 2 on bad arguments and 3 on a
numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

from . import bounds, ffunc, mfunc, solver, specfun, verification
from .mfunc import MnConfig
from .quadrature import QuadratureBudgetError, QuadratureOptions

MAX_DIMENSION = 2000
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

EVAL_FUNCTIONS = ("Fn", "F3", "Mn", "Mn-oracle", "Sn", "basmajian", "Kn", "gn", "hn")
TABLE_QUANTITIES = ("gn", "hn", "Kn", "odd-floor", "even-floor", "comparators")
VERIFY_SUITES = tuple(verification.SUITES) + ("all",)

_ENV = {
    "abs_tol": ("ORTHOBOUND_ABS_TOL", float),
    "rel_tol": ("ORTHOBOUND_REL_TOL", float),
    "max_evals": ("ORTHOBOUND_MAX_EVALS", int),
    "near_one_delta": ("ORTHOBOUND_NEAR_ONE_DELTA", float),
    "large_b": ("ORTHOBOUND_LARGE_B", float),
}


class UsageError(Exception):
    pass


def parse_dims(text: str) -> List[int]:
    """Parse ``"7"`` or ``"3..9"`` into a list of dimensions."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}; use N or A..B")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty dimension range {text!r}")
    if hi > MAX_DIMENSION:
        raise argparse.ArgumentTypeError(f"dimensions are capped at {MAX_DIMENSION}")
    return list(range(lo, hi + 1))


def _global_parser() -> argparse.ArgumentParser:
    # SUPPRESS defaults so a flag given before the subcommand is not
    # overwritten by the subparser's copy of the same flag
    g = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    g.add_argument("--format", choices=("csv", "json", "plain"), default=S)
    g.add_argument("--precision", type=int, default=S, help="significant digits")
    g.add_argument("--abs-tol", type=float, default=S)
    g.add_argument("--rel-tol", type=float, default=S)
    g.add_argument("--max-evals", type=int, default=S)
    g.add_argument("--near-one-delta", type=float, default=S)
    g.add_argument("--large-b", type=float, default=S)
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_parser()
    parser = argparse.ArgumentParser(
        prog="orthobound",
        description="Volume kernels and ortholength/volume bounds for hyperbolic "
        "manifolds with totally geodesic boundary.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate one function")
    p.add_argument("function", choices=EVAL_FUNCTIONS)
    p.add_argument("--n", type=int)
    p.add_argument("--b", type=float)
    p.add_argument("--l", type=float)
    p.add_argument("--x", type=float, help="argument of Sn")
    p.add_argument("--with-oracle", action="store_true", help="Mn: also run the oracle")

    p = sub.add_parser("table", parents=[common], help="tabulate a quantity over dimensions")
    p.add_argument("quantity", choices=TABLE_QUANTITIES)
    p.add_argument("--n", type=parse_dims, default=parse_dims("3..10"))

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=VERIFY_SUITES)
    p.add_argument("--n", type=parse_dims, default=None)

    p = sub.add_parser("solve", parents=[common], help="solve a balance equation")
    p.add_argument("problem", choices=("dim3-bound", "collar", "l0", "volume-bound"))
    p.add_argument("--n", type=int)
    p.add_argument("--area", type=float)

    p = sub.add_parser("bound", parents=[common], help="ortholength and volume bounds")
    p.add_argument("kind", choices=("ortholength", "volume-from-boundary", "bt", "dichotomy"))
    p.add_argument("--n", type=int)
    p.add_argument("--volume", type=float)
    p.add_argument("--area", type=float)
    p.add_argument("--systole", type=float)
    return parser


def _setting(args: argparse.Namespace, key: str):
    # flag beats environment; None means "use the operation's own default"
    if hasattr(args, key):
        return getattr(args, key)
    env, cast = _ENV[key]
    raw = os.environ.get(env)
    if raw:
        try:
            return cast(raw)
        except ValueError:
            raise UsageError(f"{env}={raw!r} is not a valid number") from None
    return None


def _quad_opts(args, base: QuadratureOptions) -> QuadratureOptions:
    changes = {}
    for key in ("abs_tol", "rel_tol", "max_evals"):
        val = _setting(args, key)
        if val is not None:
            changes[key] = val
    return replace(base, **changes) if changes else base


def _mn_config(args) -> MnConfig:
    kwargs = {}
    for key in ("near_one_delta", "large_b"):
        val = _setting(args, key)
        if val is not None:
            kwargs[key] = val
    return MnConfig(**kwargs)


def _need(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


# ---- commands ----------------------------------------------------------


def cmd_eval(args) -> List[Dict]:
    fn = args.function
    row: Dict = {"function": fn}
    if fn in ("Fn", "Mn", "Mn-oracle", "Sn", "basmajian", "Kn", "gn", "hn"):
        _need(args, "n")
        row["n"] = args.n
    if fn == "F3":
        _need(args, "l")
        row.update(l=args.l, value=ffunc.f3_closed(args.l))
    elif fn == "Fn":
        _need(args, "l")
        opts = _quad_opts(args, ffunc.KERNEL_OPTIONS)
        res = ffunc.fn_integral(args.n, args.l, opts, _mn_config(args))
        row.update(l=args.l, value=res.value, abs_error=res.abs_error_estimate, converged=res.converged)
    elif fn == "Mn":
        _need(args, "b")
        v = mfunc.mn(args.n, args.b, _mn_config(args))
        row.update(b=args.b, value=v.value, regime=v.regime.value)
        if args.with_oracle:
            res = mfunc.mn_oracle(args.n, args.b, _quad_opts(args, mfunc.ORACLE_OPTIONS))
            row.update(
                oracle_value=res.value,
                oracle_abs_error=res.abs_error_estimate,
                oracle_converged=res.converged,
                rel_gap=abs(v.value - res.value) / abs(res.value),
            )
    elif fn == "Mn-oracle":
        _need(args, "b")
        res = mfunc.mn_oracle(args.n, args.b, _quad_opts(args, mfunc.ORACLE_OPTIONS))
        row.update(b=args.b, value=res.value, abs_error=res.abs_error_estimate,
                   n_evals=res.n_evals, converged=res.converged)
    elif fn == "Sn":
        _need(args, "x")
        row.update(x=args.x, value=specfun.cosh_power_integral(args.n, args.x))
    elif fn == "basmajian":
        _need(args, "l")
        row.update(l=args.l, value=bounds.basmajian_term(args.n, args.l))
    elif fn == "Kn":
        kc = ffunc.kernel_constants(args.n)
        row.update(value=kc.K_n, K_n_floor=kc.K_n_floor, A_n=kc.A_n, log_K_n=kc.log_K_n)
    else:
        c = bounds.constants_bundle(args.n)
        row["value"] = c.g_n if fn == "gn" else c.h_n
    return [row]


def cmd_table(args) -> List[Dict]:
    rows = []
    q = args.quantity
    for n in args.n:
        if q in ("gn", "hn", "Kn") and n < 3:
            continue
        if q == "gn":
            rows.append({"n": n, "g_n": bounds.constants_bundle(n).g_n})
        elif q == "hn":
            rows.append({"n": n, "h_n": bounds.constants_bundle(n).h_n})
        elif q == "Kn":
            kc = ffunc.kernel_constants(n)
            rows.append({"n": n, "A_n": kc.A_n, "K_n": kc.K_n, "K_n_floor": kc.K_n_floor,
                         "log_K_n": kc.log_K_n, "log_K_n_floor": kc.log_K_n_floor})
        elif q == "odd-floor":
            if n % 2 and n >= 3:
                h = bounds.constants_bundle(n).h_n
                rows.append({"n": n, "coefficient": min(bounds.EIGHTH_LOG_5_2, h / 6.0),
                             "floor": bounds.odd_dim_volume_floor(n)})
        elif q == "even-floor":
            if n % 2 == 0 and n >= 2:
                rows.append({"n": n, "floor": bounds.even_dim_volume_floor(n)})
        else:
            if n < 3:
                continue
            odd = n % 2 == 1
            rows.append({
                "n": n,
                "odd_floor": bounds.odd_dim_volume_floor(n) if odd else None,
                "even_floor": None if odd else bounds.even_dim_volume_floor(n),
                "miyamoto_kellerhals": bounds.miyamoto_kellerhals_floor(n) if odd else None,
                "adeboye_wei": bounds.adeboye_wei_comparator(n),
                "adeboye_wei_is_asymptotic": True,
            })
    if not rows:
        raise UsageError(f"no dimensions in range apply to {q}")
    return rows


def cmd_verify(args):
    config = _mn_config(args)
    opts = None
    if any(_setting(args, k) is not None for k in ("abs_tol", "rel_tol", "max_evals")):
        opts = _quad_opts(args, QuadratureOptions())
    if args.suite == "all":
        if args.n is not None:
            raise UsageError("--n cannot be combined with 'verify all'")
        return verification.run_all(config, opts)
    return [verification.run_suite(args.suite, args.n, config, opts)]


def cmd_solve(args) -> List[Dict]:
    p = args.problem
    if p == "dim3-bound":
        sol = solver.volume_balance(3, 4.0 * math.pi, kernel=ffunc.f3_closed)
        res, value = sol.root, sol.value
        row = {"problem": p}
    else:
        _need(args, "n", "area")
        row = {"problem": p, "n": args.n, "area": args.area}
        opts = _quad_opts(args, ffunc.KERNEL_OPTIONS)
        if p == "collar":
            res = solver.solve_collar_balance(args.n, args.area, opts)
            value = 0.5 * args.area * res.root
        elif p == "l0":
            res = solver.solve_l0(args.n, args.area)
            value = 0.5 * args.area * res.root
        else:
            sol = solver.volume_balance(args.n, args.area, opts=opts)
            res, value = sol.root, sol.value
    row.update(root=res.root, residual=res.residual, iterations=res.iterations,
               bracket_lo=res.bracket[0], bracket_hi=res.bracket[1], bound=value)
    return [row]


def cmd_bound(args) -> List[Dict]:
    k = args.kind
    _need(args, "n")
    if k == "dichotomy":
        c = bounds.constants_bundle(args.n)
        return [{"kind": k, "n": args.n, "bound_value": bounds.dichotomy_bound(args.n),
                 "g_n": c.g_n, "volume_threshold": 1.0}]
    if k == "bt":
        _need(args, "systole")
        return [{"kind": k, "n": args.n, "systole": args.systole,
                 "bound_value": bounds.bt_volume_bound(args.n, args.systole)}]
    if k == "ortholength":
        _need(args, "volume")
        rep = bounds.ortholength_bound(args.n, args.volume)
    else:
        _need(args, "area")
        rep = bounds.volume_vs_boundary(args.n, args.area)
    row = {
        "kind": k,
        "n": rep.n,
        "input_kind": rep.input_kind.value,
        "input_value": rep.input_value,
        "branch": rep.branch.value,
        "bound_value": rep.bound_value,
        "length_threshold": rep.threshold,
        "g_n": rep.constants.g_n,
        "h_n": rep.constants.h_n,
        "a": rep.constants.a,
    }
    for name, val in rep.branch_values.items():
        row[f"branch_{name}"] = val
    return [row]


# ---- output ------------------------------------------------------------


def _fmt_num(x, digits: int) -> str:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return "" if x is None else str(x).lower() if isinstance(x, bool) else str(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return f"{x:.{digits}g}"


def _json_value(x, digits: int):
    if isinstance(x, float) and math.isfinite(x):
        return float(f"{x:.{digits}g}")
    if isinstance(x, float):
        return str(x)
    if isinstance(x, dict):
        return {k: _json_value(v, digits) for k, v in x.items()}
    if isinstance(x, list):
        return [_json_value(v, digits) for v in x]
    return x


def render_rows(rows: Sequence[Dict], fmt: str, digits: int) -> str:
    if fmt == "json":
        data = [_json_value(r, digits) for r in rows]
        return json.dumps(data[0] if len(data) == 1 else data, ensure_ascii=False)
    columns: List[str] = []
    for r in rows:
        columns += [k for k in r if k not in columns]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt_num(r.get(c), digits) for c in columns])
        return buf.getvalue().rstrip("\r\n")
    if len(rows) == 1:
        width = max(len(c) for c in columns)
        return "\n".join(f"{c:<{width}}  {_fmt_num(rows[0][c], digits)}" for c in columns)
    table = [columns] + [[_fmt_num(r.get(c), digits) for c in columns] for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(columns))]
    return "\n".join("  ".join(v.rjust(w) for v, w in zip(line, widths)) for line in table)


def render_reports(reports: Sequence[verification.VerifyReport], fmt: str, digits: int) -> str:
    all_pass = all(r.all_pass for r in reports)
    if fmt == "json":
        body = {"all_pass": all_pass, "suites": [_json_value(r.to_dict(), digits) for r in reports]}
        return json.dumps(body, ensure_ascii=False)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["suite", "case", "inputs", "lhs", "rhs", "margin", "pass"])
        for rep in reports:
            for c in rep.cases:
                w.writerow([rep.suite, c.name, json.dumps(c.inputs, sort_keys=True),
                            _fmt_num(c.lhs, digits), _fmt_num(c.rhs, digits),
                            _fmt_num(c.margin, digits), _fmt_num(c.passed, digits)])
        return buf.getvalue().rstrip("\r\n")
    lines = []
    for rep in reports:
        status = "PASS" if rep.all_pass else "FAIL"
        lines.append(f"{status}  {rep.suite:<15} cases={len(rep.cases):<5} "
                     f"min_margin={_fmt_num(rep.min_margin(), digits)}")
        for c in rep.cases:
            if not c.passed:
                lines.append(f"      {c.name} {json.dumps(c.inputs, sort_keys=True)} "
                             f"lhs={_fmt_num(c.lhs, digits)} rhs={_fmt_num(c.rhs, digits)} "
                             f"margin={_fmt_num(c.margin, digits)}")
    lines.append(f"all_pass={str(all_pass).lower()}")
    return "\n".join(lines)


COMMANDS = {
    "eval": cmd_eval,
    "table": cmd_table,
    "solve": cmd_solve,
    "bound": cmd_bound,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = getattr(args, "format", "plain")
    digits = getattr(args, "precision", None) or (6 if fmt == "plain" else 17)
    if not 1 <= digits <= 17:
        parser.print_usage(sys.stderr)
        print("orthobound: error: --precision must be between 1 and 17", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "verify":
            reports = cmd_verify(args)
            print(render_reports(reports, fmt, digits))
            return EXIT_OK if all(r.all_pass for r in reports) else EXIT_FAIL
        rows = COMMANDS[args.command](args)
        print(render_rows(rows, fmt, digits))
        return EXIT_OK
    except (QuadratureBudgetError, solver.NoSignChangeError, solver.RootNotConvergedError,
            OverflowError, ArithmeticError) as exc:
        print(f"orthobound: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, TypeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"orthobound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
