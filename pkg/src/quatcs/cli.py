"""Command-line front end: ``quatcs {verify,table,state,ci,resolution}``.

Quaternion literals use the form ``a+bi+cj+dk`` with optional terms and no
spaces, e.g. ``1``, ``0.5i``, ``1-2j+k``.  JSON reports carry
``"schema": 1`` and are written with sorted keys so identical inputs give
byte-identical output.

CSV columns
-----------
verify      name,max_dev,tol,pass
table mandel      p_abs,mean_n,mean_n_closed,mean_n_diff,mandel_q,mandel_q_closed,mandel_q_diff
table variances   p_abs,theta,product,product_closed,product_diff,uv_product,uv_product_closed,uv_product_diff
table two_photon  p_abs,theta,mean_a,mean_a_closed,mean_a_diff,conj_max_dev
state       n,q0,q1,q2,q3
ci          q0,q1,q2,q3,r,terms_used
resolution  m,n,dev
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .errors import BadGrid, ParseError, QuatcsError
from .observables import (ci_series, expectation, photon_stats, photon_stats_closed,
                          rotated_quadrature_product, squeeze_variance_product,
                          squeeze_variance_product_closed)
from .operators import ladder_a
from .quadrature import STATED_GRID, QuadratureGrid, is_self_adjoint_defect, resolution_of_identity
from .quaternion import I_UNIT, Quaternion, check_axis, format_quaternion, parse_quaternion
from .slices import SlicePair, two_photon_conjugation
from .states import coherent, fermionic, pure_squeezed, squeezed_DS, squeezed_SD
from .verify import DEFAULT_TOL, run_checks

SCHEMA = 1
MIN_TRUNCATION = 8
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

MANDEL_COLUMNS = ["p_abs", "mean_n", "mean_n_closed", "mean_n_diff",
                  "mandel_q", "mandel_q_closed", "mandel_q_diff"]
VARIANCE_COLUMNS = ["p_abs", "theta", "product", "product_closed", "product_diff",
                    "uv_product", "uv_product_closed", "uv_product_diff"]
TWO_PHOTON_COLUMNS = ["p_abs", "theta", "mean_a", "mean_a_closed", "mean_a_diff", "conj_max_dev"]
DEFAULT_THETAS = (0.0, math.pi / 4, math.pi / 2)
DEFAULT_P = (0.25, 0.5, 1.0)
TWO_PHOTON_Q = (0.6, 0.7)  # |q| and its slice angle


def _clean(x):
    """Make a value JSON-safe: non-finite floats become strings."""
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "item"):
        return _clean(x.item())
    return x


def dump_json(obj) -> str:
    obj = dict(obj)
    obj["schema"] = SCHEMA
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def dump_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt_cell(row[c]) for c in columns])
    return buf.getvalue()


def _fmt_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Quaternion):
        return format_quaternion(v)
    return v


def _qjson(q: Quaternion) -> list:
    return [float(x) for x in q.array]


# -- grid parsing --------------------------------------------------------------------

def _floats(text: str, what: str) -> list[float]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise BadGrid(f"empty {what} grid")
    try:
        return [float(t) for t in items]
    except ValueError as exc:
        raise BadGrid(f"bad {what} grid value: {exc}") from None


def parse_sweep_grid(text: str | None, sweep: str):
    """``"0.25,0.5"`` or ``"p=0.25,0.5;theta=0,1.57"`` into ``(p_values, thetas)``."""
    if text is None:
        return list(DEFAULT_P), list(DEFAULT_THETAS)
    p_vals, thetas = None, list(DEFAULT_THETAS)
    for part in text.split(";"):
        key, sep, val = part.partition("=")
        if not sep:
            key, val = "p", part
        key = key.strip()
        if key == "p":
            p_vals = _floats(val, "p")
        elif key == "theta":
            thetas = _floats(val, "theta")
        else:
            raise BadGrid(f"unknown grid key {key!r}; use p= and theta=")
    if not p_vals:
        raise BadGrid("empty p grid")
    if any(v < 0 for v in p_vals):
        raise BadGrid("|p| values must be non-negative")
    return p_vals, thetas


def parse_quadrature_grid(text: str | None):
    if text is None:
        return STATED_GRID
    vals = [t for t in text.split(",") if t.strip()]
    if len(vals) != 4:
        raise BadGrid("resolution grid needs four counts n_r,n_theta,n_phi,n_psi")
    try:
        counts = tuple(int(v) for v in vals)
    except ValueError as exc:
        raise BadGrid(str(exc)) from None
    return counts


# -- subcommands ------------------------------------------------------------------------------

def cmd_verify(args) -> tuple[str, int]:
    results = run_checks(N=args.truncation, tol=args.tol, seed=args.seed)
    ok = all(r.passed for r in results)
    if args.format == "csv":
        rows = [{"name": r.name, "max_dev": r.max_dev, "tol": r.tol, "pass": r.passed}
                for r in results]
        return dump_csv(["name", "max_dev", "tol", "pass"], rows), EXIT_OK if ok else EXIT_FAIL
    report = {"command": "verify", "truncation": args.truncation, "tol": args.tol,
              "seed": args.seed, "all_pass": ok,
              "failed": [r.name for r in results if not r.passed],
              "checks": [r.to_json() for r in results]}
    return dump_json(report), EXIT_OK if ok else EXIT_FAIL


def _on_axis(r: float, theta: float, axis: Quaternion) -> Quaternion:
    return Quaternion(r * math.cos(theta)) + axis * (r * math.sin(theta))


def table_rows(sweep: str, p_vals, thetas, N: int, axis: Quaternion = I_UNIT):
    rows = []
    if sweep == "mandel":
        for r in p_vals:
            p = axis * r
            st = photon_stats(p, N)
            cl = photon_stats_closed(p)
            mq = st.mandel_q if st.mean_n > 0 else math.nan
            mq_closed = cl["mandel_q"]
            rows.append({"p_abs": r, "mean_n": st.mean_n, "mean_n_closed": cl["mean_n"],
                         "mean_n_diff": st.mean_n - cl["mean_n"], "mandel_q": mq,
                         "mandel_q_closed": mq_closed, "mandel_q_diff": mq - mq_closed})
        return MANDEL_COLUMNS, rows
    if sweep == "variances":
        for r in p_vals:
            for t in thetas:
                p = _on_axis(r, t, axis)
                prod = squeeze_variance_product(p, N, axis)
                closed = squeeze_variance_product_closed(p)
                uv = rotated_quadrature_product(p, N)
                rows.append({"p_abs": r, "theta": t, "product": prod, "product_closed": closed,
                             "product_diff": prod - closed, "uv_product": uv,
                             "uv_product_closed": 0.25, "uv_product_diff": uv - 0.25})
        return VARIANCE_COLUMNS, rows
    if sweep == "two_photon":
        qa, qt = TWO_PHOTON_Q
        a = ladder_a(N)
        for r in p_vals:
            for t in thetas:
                sp = SlicePair.from_polar(axis, r, t, qa, qt)
                state = squeezed_SD(sp.q, sp.p, N)
                measured = expectation(state, a)
                c, s = math.cosh(r), math.sinh(r)
                closed = sp.q * c + sp.I_p * s * sp.q.conj()
                conj = two_photon_conjugation(sp, "a", N)
                rows.append({"p_abs": r, "theta": t, "mean_a": measured, "mean_a_closed": closed,
                             "mean_a_diff": (measured - closed).norm(),
                             "conj_max_dev": conj.max_dev})
        return TWO_PHOTON_COLUMNS, rows
    raise BadGrid(f"unknown sweep {sweep!r}")


def cmd_table(args) -> tuple[str, int]:
    p_vals, thetas = parse_sweep_grid(args.grid, args.sweep)
    axis = check_axis(parse_quaternion(args.axis))
    columns, rows = table_rows(args.sweep, p_vals, thetas, args.truncation, axis)
    if args.format == "csv":
        return dump_csv(columns, rows), EXIT_OK
    out = [{k: (_qjson(v) if isinstance(v, Quaternion) else v) for k, v in row.items()}
           for row in rows]
    return dump_json({"command": "table", "sweep": args.sweep, "truncation": args.truncation,
                      "axis": _qjson(axis), "columns": columns, "rows": out}), EXIT_OK


STATE_FAMILIES = {
    "coherent": ("q",),
    "pure_squeezed": ("p",),
    "squeezed_SD": ("q", "p"),
    "squeezed_DS": ("q", "p"),
    "fermionic": ("q",),
}


def build_state(family: str, params, N: int):
    need = STATE_FAMILIES[family]
    if len(params) != len(need):
        raise ParseError(f"{family} takes {len(need)} parameter(s) ({', '.join(need)}), "
                         f"got {len(params)}", " ".join(params), 0)
    vals = dict(zip(need, (parse_quaternion(t) for t in params)))
    if family == "coherent":
        return [coherent(vals["q"], N).vector]
    if family == "pure_squeezed":
        return [pure_squeezed(vals["p"], N)]
    if family == "squeezed_SD":
        return [squeezed_SD(vals["q"], vals["p"], N)]
    if family == "squeezed_DS":
        return [squeezed_DS(vals["q"], vals["p"], N)]
    pair = fermionic(vals["q"])
    return [pair.eta0, pair.eta1]


def cmd_state(args) -> tuple[str, int]:
    vecs = build_state(args.family, args.params, args.truncation)
    if args.format == "csv":
        rows = []
        for v in vecs:
            rows += [{"n": n, "q0": c[0], "q1": c[1], "q2": c[2], "q3": c[3]}
                     for n, c in enumerate(v.coeffs.tolist())]
        return dump_csv(["n", "q0", "q1", "q2", "q3"], rows), EXIT_OK
    if len(vecs) == 1:
        body = {"coefficients": vecs[0].to_json(), "norm": vecs[0].norm()}
    else:
        body = {"eta0": {"coefficients": vecs[0].to_json(), "norm": vecs[0].norm()},
                "eta1": {"coefficients": vecs[1].to_json(), "norm": vecs[1].norm()}}
    return dump_json(body), EXIT_OK


def cmd_ci(args) -> tuple[str, int]:
    q = parse_quaternion(args.q)
    axis = check_axis(parse_quaternion(args.axis))
    ci = ci_series(q, axis, tol=min(args.tol, 1e-16))
    checks = ci.checks()
    if args.format == "csv":
        row = dict(zip(("q0", "q1", "q2", "q3"), ci.value.array.tolist()))
        row.update(r=ci.r, terms_used=ci.terms_used)
        return dump_csv(["q0", "q1", "q2", "q3", "r", "terms_used"], [row]), EXIT_OK
    body = {"command": "ci", "q": _qjson(q), "series_axis": _qjson(axis),
            "value": _qjson(ci.value), "r": ci.r, "axis": _qjson(ci.axis),
            "terms_used": ci.terms_used, "checks": checks}
    return dump_json(body), EXIT_OK if all(checks.values()) else EXIT_FAIL


def cmd_resolution(args) -> tuple[str, int]:
    n_r, n_t, n_ph, n_ps = parse_quadrature_grid(args.grid)
    grid = QuadratureGrid(n_r, n_t, n_ph, n_ps, "plain")
    # only levels 0..nmax are reported, so accumulate exactly those
    res = resolution_of_identity(args.nmax, grid, args.nmax + 1)
    ok = res.max_dev <= args.tol
    if args.format == "csv":
        rows = [{"m": m, "n": n, "dev": float(res.entry_dev[m, n])}
                for m in range(args.nmax + 1) for n in range(args.nmax + 1)]
        return dump_csv(["m", "n", "dev"], rows), EXIT_OK if ok else EXIT_FAIL
    body = res.to_json()
    body.update({"command": "resolution", "tol": args.tol, "pass": ok})
    body["self_adjoint_defect"] = is_self_adjoint_defect(res.operator)
    return dump_json(body), EXIT_OK if ok else EXIT_FAIL


# -- argument parsing -------------------------------------------------------------------------

def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return v


def _truncation(text):
    v = int(text)
    if v < MIN_TRUNCATION:
        raise argparse.ArgumentTypeError(f"truncation must be >= {MIN_TRUNCATION}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--truncation", type=_truncation, default=64,
                        help="Fock truncation order N (>= 8, default 64)")
    common.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL,
                        help="pass/fail tolerance (default 1e-7)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--grid", default=None, help="grid specification (see subcommand help)")

    parser = argparse.ArgumentParser(
        prog="quatcs", description=__doc__.split("\n\n")[0],
        epilog="CSV columns per subcommand are listed in each subcommand's --help.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the named identity suite",
                       description="Run every named identity; exit 0 iff all pass. "
                                   "CSV columns: name,max_dev,tol,pass.")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", parents=[common], help="parameter-sweep tables",
                       formatter_class=argparse.RawDescriptionHelpFormatter,
                       description="Sweep tables with measured and closed-form columns.\n\n"
                       "--grid: '0.25,0.5,1.0' (|p| values) or 'p=0.25,0.5;theta=0,1.5708'.\n"
                       "CSV columns:\n"
                       f"  mandel:     {','.join(MANDEL_COLUMNS)}\n"
                       f"  variances:  {','.join(VARIANCE_COLUMNS)}\n"
                       f"  two_photon: {','.join(TWO_PHOTON_COLUMNS)}")
    p.add_argument("sweep", choices=("mandel", "variances", "two_photon"))
    p.add_argument("--axis", default="i", help="slice axis for p (default i)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("state", parents=[common], help="emit a state's coefficient vector",
                       description="Parameters are quaternion literals a+bi+cj+dk. "
                                   "coherent Q | pure_squeezed P | squeezed_SD Q P | "
                                   "squeezed_DS Q P | fermionic Q. CSV columns: n,q0,q1,q2,q3.")
    p.add_argument("family", choices=tuple(STATE_FAMILIES))
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("ci", parents=[common], help="evaluate the Ci series",
                       description="exp(-|q|^2) sum conj(q)^n I q^n / n!. "
                                   "CSV columns: q0,q1,q2,q3,r,terms_used.")
    p.add_argument("q")
    p.add_argument("--axis", default="i", help="imaginary unit I in the series (default i)")
    p.set_defaults(func=cmd_ci)

    p = sub.add_parser("resolution", parents=[common],
                       help="coherent-state resolution of the identity by quadrature",
                       description="--grid: n_r,n_theta,n_phi,n_psi (default 48,16,12,16). "
                                   "Uses the plain measure with normalized coherent states and "
                                   "accumulates levels 0..nmax (--truncation is not used). "
                                   "CSV columns: m,n,dev.")
    p.add_argument("--nmax", type=int, default=6)
    p.set_defaults(func=cmd_resolution)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = args.func(args)
    except ParseError as exc:
        print(f"quatcs: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BadGrid as exc:
        print(f"quatcs: bad grid: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuatcsError as exc:
        print(f"quatcs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
