"""Command-line front end.

    divbounds price  --spot 110 --strike 100 --rate 0.03 --vol 0.2 \\
                     --maturity 1 --dividend 5 --div-time 0.5
    divbounds oracle --params-file params.json --method both
    divbounds approx --params-file params.json
    divbounds table1
    divbounds sweep  --variable Sstar --range 110:260:50 --m 100

Exit status: 0 on success, 1 on invalid input, 2 when ``price`` did not
converge (the best interval is still printed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .approximations import black_approx
from .bounds import BoundConfig, bound_pair
from .model import JSON_KEYS, DomainError, PricingProblem, ValidationError, validate
from .oracle import McConfig, QuadConfig, QuadratureError, monte_carlo_price, quadrature_price
from .refine import RefineConfig, default_s_star, price_to_tolerance

EXIT_OK, EXIT_INVALID, EXIT_NOT_CONVERGED = 0, 1, 2

TABLE1_PARAMS = {
    "spot": 110.0,
    "rate": 0.03,
    "volatility": 0.2,
    "drift": 0.01,
    "strike": 100.0,
    "maturity": 1.0,
    "dividend_amount": 5.0,
    "dividend_time": 0.5,
}
# (S*, M) rows as printed; S* values are the printed, rounded figures.
# The published lower bounds use forward tangent points.
TABLE1_ROWS = [
    (103.5, 10), (103.5, 50), (103.5, 400),
    (155.3, 10), (155.3, 50), (155.3, 200), (155.3, 400),
    (207.0, 10), (207.0, 50), (207.0, 200), (207.0, 400),
]

# flag dest -> params-file key
_FLAG_KEYS = {
    "spot": "spot",
    "strike": "strike",
    "rate": "rate",
    "vol": "volatility",
    "drift": "drift",
    "maturity": "maturity",
    "dividend": "dividend_amount",
    "div_time": "dividend_time",
}

METHODS = ("bounds", "quadrature", "monte_carlo", "black_approx")


class CliError(Exception):
    pass


@dataclass
class OutputRecord:
    method: str
    inputs: dict
    result: dict
    timing_ms: float
    extra: dict = field(default_factory=dict)  # non-numeric diagnostics

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if ("epsilon" in self.result) != (self.method == "bounds"):
            raise ValueError("epsilon is reported exactly for the bounds method")
        for key, value in {**self.inputs, **self.result}.items():
            if not math.isfinite(value):
                raise ValueError(f"non-finite output {key}={value}")

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "inputs": self.inputs,
            "result": self.result,
            "timing_ms": self.timing_ms,
            **self.extra,
        }


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("contract and market (flags override --params-file)")
    g.add_argument("--params-file", help="JSON file with keys " + ", ".join(JSON_KEYS))
    g.add_argument("--spot", type=float)
    g.add_argument("--strike", type=float)
    g.add_argument("--rate", type=float)
    g.add_argument("--vol", type=float)
    g.add_argument("--drift", type=float, help="recorded only; never affects prices")
    g.add_argument("--maturity", type=float)
    g.add_argument("--dividend", type=float, help="cash dividend amount D")
    g.add_argument("--div-time", type=float, help="dividend payment time tau")


def _add_output(p: argparse.ArgumentParser, default: str = "text") -> None:
    p.add_argument("--format", choices=("text", "json", "csv"), default=default)
    p.add_argument("--decimals", type=int, default=2, help="decimals for monetary output")


def _problem(args, base: dict | None = None) -> PricingProblem:
    data = dict(base or {})
    if getattr(args, "params_file", None):
        try:
            with open(args.params_file, encoding="utf-8") as fh:
                data.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read params file: {exc}") from None
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            data[key] = value
    return validate(PricingProblem.from_dict(data))


def _money(value: float, decimals: int) -> str:
    return f"{value:.{decimals}f}"


def _emit_records(records: list[OutputRecord], fmt: str, decimals: int, out) -> None:
    if fmt == "json":
        json.dump([r.to_json() for r in records], out, indent=2)
        out.write("\n")
        return
    if fmt == "csv":
        result_keys: list[str] = []
        extra_keys: list[str] = []
        for r in records:
            result_keys += [k for k in r.result if k not in result_keys]
            extra_keys += [k for k in r.extra if k not in extra_keys]
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["method", *JSON_KEYS, *result_keys, *extra_keys, "timing_ms"])
        for r in records:
            writer.writerow([
                r.method,
                *(repr(float(r.inputs[k])) for k in JSON_KEYS),
                *(_fmt_result(k, r.result[k], decimals) if k in r.result else "" for k in result_keys),
                *(r.extra.get(k, "") for k in extra_keys),
                f"{r.timing_ms:.3f}",
            ])
        return
    for r in records:
        out.write(f"[{r.method}]\n")
        for k, v in r.result.items():
            out.write(f"  {k:<14} {_fmt_result(k, v, decimals)}\n")
        for k, v in r.extra.items():
            out.write(f"  {k:<14} {v}\n")
        out.write(f"  {'time':<14} {r.timing_ms:.3f} ms\n")


def _fmt_result(key: str, value: float, decimals: int) -> str:
    if key in ("m", "iterations", "paths", "panels"):
        return str(int(value))
    if key == "epsilon":
        return _money(value, decimals + 1)
    if key in ("std_error", "error", "rel_error"):
        return f"{value:.6g}"
    return _money(value, decimals)


def _timed(fn, *a, **kw):
    t0 = time.perf_counter()
    out = fn(*a, **kw)
    return out, 1e3 * (time.perf_counter() - t0)


def cmd_price(args, out) -> int:
    problem = _problem(args)
    config = RefineConfig(
        tolerance=args.tolerance,
        m_initial=args.m_initial,
        m_max=args.m_max,
        s_star_initial=args.s_star,
        grow_s_star=not args.fixed_s_star,
        decimals=args.decimals,
        tangent=args.tangent,
    )
    res, ms = _timed(price_to_tolerance, problem, config)
    record = OutputRecord(
        "bounds",
        problem.to_dict(),
        {
            "lower": res.lower,
            "upper": res.upper,
            "epsilon": res.epsilon,
            "price": res.price,
            "s_star": res.s_star_used,
            "m": res.m_used,
            "iterations": res.iterations,
        },
        ms,
        {"converged": res.converged},
    )
    _emit_records([record], args.format, args.decimals, out)
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_oracle(args, out) -> int:
    problem = _problem(args)
    records = []
    if args.method in ("quadrature", "both"):
        value, ms = _timed(quadrature_price, problem, QuadConfig(target_abs_error=args.quad_tol))
        records.append(OutputRecord("quadrature", problem.to_dict(), {"price": value}, ms))
    if args.method in ("monte_carlo", "both"):
        if args.paths < 2:
            raise CliError("--paths must be at least 2 for a standard error")
        (value, se), ms = _timed(monte_carlo_price, problem, McConfig(paths=args.paths, seed=args.seed))
        records.append(
            OutputRecord("monte_carlo", problem.to_dict(), {"price": value, "std_error": se, "paths": args.paths}, ms)
        )
    _emit_records(records, args.format, args.decimals, out)
    return EXIT_OK


def cmd_approx(args, out) -> int:
    problem = _problem(args)
    approx, ms = _timed(black_approx, problem)
    exact = quadrature_price(problem)
    # signed error approx - exact; the sign is reported, not assumed
    result = {"price": approx, "exact": exact, "error": approx - exact}
    if exact > 0:
        result["rel_error"] = (approx - exact) / exact
    _emit_records([OutputRecord("black_approx", problem.to_dict(), result, ms)], args.format, args.decimals, out)
    return EXIT_OK


def table1_rows(decimals: int | None = None) -> list[dict]:
    """Table rows as dicts of floats (unrounded unless ``decimals`` given)."""
    problem = validate(PricingProblem.from_dict(TABLE1_PARAMS))
    exact = quadrature_price(problem)
    rows = []
    for s_star, m in TABLE1_ROWS:
        pair = bound_pair(problem, BoundConfig(s_star, m, "forward"))
        rows.append({
            "S": problem.spot,
            "S_star": s_star,
            "M": m,
            "lower": pair.lower,
            "exact": exact,
            "upper": pair.upper,
            "epsilon": pair.epsilon,
        })
    return rows


def _emit_table(rows: list[dict], fmt: str, decimals: int, out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
        return
    cols = list(rows[0]) if rows else []
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        cells = []
        for c in cols:
            v = row[c]
            if c == "M":
                cells.append(str(int(v)))
            elif c == "epsilon":
                cells.append(_money(v, decimals + 1))
            elif c in ("S", "S_star"):
                cells.append(repr(float(v)))
            else:
                cells.append(_money(v, decimals))
        writer.writerow(cells)


def cmd_table1(args, out) -> int:
    rows, ms = _timed(table1_rows)
    _emit_table(rows, args.format, args.decimals, out)
    print(f"table1: {len(rows)} rows in {ms:.1f} ms", file=sys.stderr)
    return EXIT_OK


def parse_range(text: str) -> np.ndarray:
    """``a:b:n`` -> n evenly spaced points from a to b inclusive."""
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError(f"malformed range {text!r}; expected a:b:n")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise CliError(f"malformed range {text!r}; expected a:b:n") from None
    if n < 1 or not (math.isfinite(a) and math.isfinite(b)):
        raise CliError(f"malformed range {text!r}; need finite ends and n >= 1")
    if n == 1:
        return np.array([a])
    return np.linspace(a, b, n)


def sweep_rows(problem: PricingProblem, variable: str, grid, m: int, s_star: float | None, exact: bool,
               tangent: str = "centered") -> list[dict]:
    rows = []
    for v in grid:
        v = float(v)
        p = problem.replace(spot=v) if variable == "S" else problem
        if variable == "S":
            validate(p)
        ss = v if variable == "Sstar" else (s_star if s_star is not None else default_s_star(p))
        pair = bound_pair(p, BoundConfig(ss, m, tangent))
        row = {"S": p.spot, "S_star": ss, "M": m, "lower": pair.lower, "upper": pair.upper, "epsilon": pair.epsilon}
        if exact:
            row["exact"] = quadrature_price(p)
        rows.append(row)
    return rows


def cmd_sweep(args, out) -> int:
    problem = _problem(args, TABLE1_PARAMS)
    grid = parse_range(args.range)
    if args.variable == "Sstar" and np.any(grid <= problem.div_amount):
        raise CliError("every S* in the range must exceed the dividend amount")
    rows, ms = _timed(sweep_rows, problem, args.variable, grid, args.m, args.s_star, args.exact, args.tangent)
    _emit_table(rows, args.format, args.decimals, out)
    print(f"sweep: {len(rows)} rows in {ms:.1f} ms", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="divbounds", description="Certified bounds for calls on a stock paying a discrete dividend.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("price", help="price to a monetary tolerance")
    _add_params(p)
    _add_output(p)
    p.add_argument("--tolerance", type=float, default=0.01)
    p.add_argument("--m-initial", type=int, default=16)
    p.add_argument("--m-max", type=int, default=1 << 20)
    p.add_argument("--s-star", type=float, default=None, help="initial S* (default 2(D + K exp(-r(T-tau))))")
    p.add_argument("--fixed-s-star", action="store_true", help="never grow S*")
    p.add_argument("--tangent", choices=("centered", "forward"), default="centered")
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("oracle", help="reference prices by quadrature and/or Monte Carlo")
    _add_params(p)
    _add_output(p)
    p.add_argument("--method", choices=("quadrature", "monte_carlo", "both"), default="both")
    p.add_argument("--quad-tol", type=float, default=1e-8)
    p.add_argument("--paths", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=McConfig().seed)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("approx", help="escrowed-dividend approximation against the exact price")
    _add_params(p)
    _add_output(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("table1", help="bounds for the reference parameter set, several S* and M")
    _add_output(p, default="csv")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("sweep", help="bounds over a range of spot or S* values (CSV)")
    _add_params(p)
    _add_output(p, default="csv")
    p.add_argument("--variable", choices=("S", "Sstar"), required=True)
    p.add_argument("--range", required=True, help="a:b:n")
    p.add_argument("--m", type=int, default=200)
    p.add_argument("--s-star", type=float, default=None, help="fixed S* when sweeping S")
    p.add_argument("--exact", action="store_true", help="add the quadrature price column")
    p.add_argument("--tangent", choices=("centered", "forward"), default="centered",
                   help="forward reproduces the published figures")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    if args.format == "text" and args.command in ("table1", "sweep"):
        args.format = "csv"
    try:
        return args.func(args, out)
    except (ValidationError, DomainError, CliError, QuadratureError, ValueError) as exc:
        print(f"divbounds {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Run the CLI in-process and capture standard output (used by tests)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
