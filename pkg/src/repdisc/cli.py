"""Command-line front end: curve data, single points and verification reports.

Exit codes: 0 success, 1 invalid input, 2 a verification check failed.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .closedform import NARY_MAX_ROUNDS, closed_form_binary, closed_form_nary
from .core import DiscriminationEnsemble, check_lambda, TOL_LAMBDA
from .discrimination import DEFAULT_BUDGET, optimal_success_probability
from .errors import DiscriminationError, InvalidGrid, UnsupportedRounds
from .verify import check_custom, run_default_suite

MODES = ("binary-curve", "binary-vs-n", "nary-curve", "point", "verify")
DEFAULT_STEPS = 201
DIGITS = 12


def lambda_grid(lo: float, hi: float, steps: int) -> tuple[float, ...]:
    if steps < 2:
        raise InvalidGrid(f"need at least 2 lambda steps, got {steps}")
    if hi < lo:
        raise InvalidGrid(f"lambda range {lo}:{hi} is empty")
    vals = [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]
    vals[-1] = hi
    return tuple(vals)


@dataclass(frozen=True)
class CurveRequest:
    mode: str
    n_outcomes: int = 2
    n_list: tuple[int, ...] = (1,)
    lambda_min: float | None = None
    lambda_max: float = 1.0
    lambda_steps: int = DEFAULT_STEPS
    lambdas: tuple[float, ...] | None = None
    format: str = "csv"
    output: str | None = None
    budget: int = DEFAULT_BUDGET
    explicit: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidGrid(f"unknown mode {self.mode!r}")
        if self.n_outcomes < 2:
            raise InvalidGrid("--n-outcomes must be >= 2")
        if not self.n_list or min(self.n_list) < 1:
            raise InvalidGrid("rounds must be a nonempty list of integers >= 1")
        if self.format not in ("csv", "json"):
            raise InvalidGrid(f"unknown format {self.format!r}")
        if self.lambdas is None:
            lo = 1.0 / self.n_outcomes if self.lambda_min is None else self.lambda_min
            if lo < 1.0 / self.n_outcomes - TOL_LAMBDA or self.lambda_max > 1.0 + TOL_LAMBDA:
                raise InvalidGrid(
                    f"lambda range must lie within [1/{self.n_outcomes}, 1], got {lo}:{self.lambda_max}"
                )
            object.__setattr__(self, "lambda_min", lo)
            object.__setattr__(self, "lambdas", lambda_grid(lo, self.lambda_max, self.lambda_steps))
        else:
            if not self.lambdas:
                raise InvalidGrid("empty lambda list")
            for v in self.lambdas:
                check_lambda(v, self.n_outcomes)


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[tuple]


def run_binary_curve(req: CurveRequest) -> Table:
    if req.n_outcomes != 2:
        raise InvalidGrid("binary-curve requires --n-outcomes 2")
    rows = [
        (lam, n, closed_form_binary(n, lam))
        for lam in sorted(req.lambdas)
        for n in sorted(set(req.n_list))
    ]
    return Table(("lambda", "n", "p_succ"), rows)


def run_binary_vs_n(req: CurveRequest) -> Table:
    if req.n_outcomes != 2:
        raise InvalidGrid("binary-vs-n requires --n-outcomes 2")
    rows = [
        (n, lam, closed_form_binary(n, lam))
        for n in sorted(set(req.n_list))
        for lam in sorted(req.lambdas)
    ]
    return Table(("n", "lambda", "p_succ"), rows)


def run_nary_curve(req: CurveRequest) -> Table:
    bad = [n for n in req.n_list if n > NARY_MAX_ROUNDS]
    if bad:
        raise UnsupportedRounds(f"nary-curve supports rounds 1..{NARY_MAX_ROUNDS}, got {bad}")
    rows = [
        (lam, n, closed_form_nary(n, req.n_outcomes, lam))
        for lam in sorted(req.lambdas)
        for n in sorted(set(req.n_list))
    ]
    return Table(("lambda", "n", "p_succ"), rows)


def point_value(n_outcomes: int, n: int, lam: float) -> tuple[float, str]:
    """Optimal success probability and the route used to get it."""
    if n_outcomes == 2:
        return closed_form_binary(n, lam), "closed-form"
    if n <= NARY_MAX_ROUNDS:
        return closed_form_nary(n, n_outcomes, lam), "closed-form"
    E = DiscriminationEnsemble(n_outcomes, n_outcomes, lam)
    return optimal_success_probability(E, n), "multiplicity-classes"


def run_point(req: CurveRequest) -> Table:
    rows = []
    for lam in sorted(req.lambdas):
        for n in sorted(set(req.n_list)):
            p, method = point_value(req.n_outcomes, n, lam)
            rows.append((req.n_outcomes, lam, n, p, method))
    return Table(("n_outcomes", "lambda", "n", "p_succ", "method"), rows)


def run_verify(req: CurveRequest) -> Table:
    if req.explicit & {"rounds", "lambda", "n_outcomes"}:
        results = check_custom(req.n_outcomes, sorted(set(req.n_list)), req.lambdas, req.budget)
    else:
        results = run_default_suite(req.budget)
    rows = [
        (r.check, r.parameters, r.worst_deviation, r.tolerance, "pass" if r.passed else "fail")
        for r in results
    ]
    return Table(("check", "parameters", "worst_deviation", "tolerance", "status"), rows)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.{DIGITS}g}"
    return str(v)


def _json_value(v):
    if isinstance(v, float):
        return float(f"{v:.{DIGITS}g}")
    return v


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        objs = [dict(zip(table.columns, map(_json_value, row))) for row in table.rows]
        return json.dumps(objs, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(_csv_cell(_fmt(v)) for v in row) + "\n")
    return buf.getvalue()


def _csv_cell(s: str) -> str:
    if any(c in s for c in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def _int_list(text: str) -> tuple[int, ...]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return tuple(out)


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.split(",") if p.strip())


def _lambda_range(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, steps = text.split(":")
        return float(lo), float(hi), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX:STEPS, got {text!r}") from None


DEFAULTS = {
    "binary-curve": dict(n_outcomes=2, rounds=(1, 21, 41), lambdas=None),
    "binary-vs-n": dict(n_outcomes=2, rounds=tuple(range(1, 51)), lambdas=(0.6, 0.7, 0.8)),
    "nary-curve": dict(n_outcomes=10, rounds=(1, 3, 4), lambdas=None),
    "point": dict(n_outcomes=2, rounds=(3,), lambdas=(0.75,)),
    "verify": dict(n_outcomes=2, rounds=(1,), lambdas=None),
}

RUNNERS = {
    "binary-curve": run_binary_curve,
    "binary-vs-n": run_binary_vs_n,
    "nary-curve": run_nary_curve,
    "point": run_point,
    "verify": run_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-outcomes", type=int, help="number of states/outcomes N")
    common.add_argument("--rounds", type=_int_list, help="comma list of rounds, ranges like 1-50 allowed")
    grid = common.add_mutually_exclusive_group()
    grid.add_argument("--lambda", dest="lambdas", type=_float_list, help="comma list of lambda values")
    grid.add_argument("--lambda-range", type=_lambda_range, metavar="MIN:MAX:STEPS")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default: standard output)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max enumerated outcome arrays")

    parser = argparse.ArgumentParser(
        prog="repdisc",
        description="Success probabilities for state discrimination with repeated unsharp measurements.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    helps = {
        "binary-curve": "success probability against lambda for several rounds (N=2)",
        "binary-vs-n": "success probability against rounds for fixed lambdas (N=2)",
        "nary-curve": "N-outcome success probability against lambda, rounds 1..4",
        "point": "optimal success probability at given (N, n, lambda)",
        "verify": "cross-check closed forms against enumeration and oracles",
    }
    for mode in MODES:
        sub.add_parser(mode, parents=[common], help=helps[mode])
    return parser


def request_from_args(args: argparse.Namespace) -> CurveRequest:
    d = DEFAULTS[args.mode]
    explicit = {
        name
        for name, val in (("n_outcomes", args.n_outcomes), ("rounds", args.rounds),
                          ("lambda", args.lambdas or args.lambda_range))
        if val is not None
    }
    kw = dict(
        mode=args.mode,
        n_outcomes=args.n_outcomes if args.n_outcomes is not None else d["n_outcomes"],
        n_list=args.rounds if args.rounds is not None else d["rounds"],
        format=args.format,
        output=args.out,
        budget=args.budget,
        explicit=frozenset(explicit),
    )
    if args.lambda_range is not None:
        lo, hi, steps = args.lambda_range
        kw.update(lambda_min=lo, lambda_max=hi, lambda_steps=steps)
    elif args.lambdas is not None:
        kw["lambdas"] = args.lambdas
    elif d["lambdas"] is not None:
        kw["lambdas"] = d["lambdas"]
    if args.mode == "verify" and "lambda" not in explicit and explicit:
        # custom verification without a grid: 11 points over [1/N, 1]
        kw.update(lambdas=None, lambda_steps=11)
    return CurveRequest(**kw)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        req = request_from_args(args)
        table = RUNNERS[req.mode](req)
    except DiscriminationError as exc:
        print(f"repdisc: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = render(table, req.format)
    if req.output:
        with open(req.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if req.mode == "verify" and any(row[-1] != "pass" for row in table.rows):
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
