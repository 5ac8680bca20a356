"""Command line front end: solve single files and run batch statistics.

``subtropical solve FILE`` prints the outcome for one polynomial;
``subtropical batch DIR`` runs every file in a directory and prints a
table plus a summary block.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import engine
from .lp import DEFAULT_MAX_EXPONENT
from .parser import PolynomialSyntaxError, parse_file
from .poly import INF, DyadicPower, MultiPoly, difference_transform, orthant_transform, range_transform
from .realroot import RealAlgebraicNumber, affine_image, approximate, refine

ERROR = "error"
STATUSES = (engine.ZERO, engine.ALL_ONES, engine.DEFINITE, engine.POSITIVE_VALUE, engine.FAILED, ERROR)

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2

# dyadic witness coordinates with larger exponents are printed as powers of two
_MAX_EXPANDED_EXPONENT = 4096


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    mode: str = engine.POSITIVE
    existence_only: bool = False
    orthant: Optional[tuple[int, ...]] = None
    # (variable name, "lower" | "upper", bound) applied in order
    range_transforms: tuple[tuple[str, str, Fraction], ...] = ()
    difference: bool = False
    approx_digits: int = 6
    max_exponent: Optional[int] = DEFAULT_MAX_EXPONENT
    output: str = "text"

    def __post_init__(self):
        if self.mode not in (engine.POSITIVE, engine.GENERAL):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.output not in ("text", "json"):
            raise UsageError(f"unknown output format {self.output!r}")
        if self.approx_digits < 0:
            raise UsageError("approx_digits must be non-negative")
        if self.max_exponent is not None and self.max_exponent <= 0:
            raise UsageError("max_exponent must be positive")
        if self.orthant is not None and any(s not in (1, -1) for s in self.orthant):
            raise UsageError("orthant entries must be +1 or -1")
        names = [name for name, _, _ in self.range_transforms]
        for name, kind, _ in self.range_transforms:
            if kind not in ("lower", "upper"):
                raise UsageError(f"unknown range kind {kind!r}")
            if names.count(name) > 1:
                # a two-sided range is not a polynomial substitution
                raise UsageError(f"variable {name!r} has more than one range bound")


@dataclass
class InstanceReport:
    name: str
    status: str
    num_terms: int = 0
    dimension: int = 0
    max_degree: int = 0
    lp_solves: int = 0
    candidates_tried: int = 0
    doubling_steps: int = 0
    time_ms: int = 0
    message: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")


def exit_code(status: str) -> int:
    if status == ERROR:
        return EXIT_ERROR
    return EXIT_FAILED if status == engine.FAILED else EXIT_OK


# ---------------------------------------------------------------------------
# transformations and the map back to the input coordinates


@dataclass
class _AffineMap:
    """``x_orig[i] = const[i] + sum(coef * x_cur[j] for j, coef in lin[i].items())``."""

    const: list[Fraction]
    lin: list[dict[int, Fraction]]

    @classmethod
    def identity(cls, d: int) -> "_AffineMap":
        return cls([Fraction(0)] * d, [{i: Fraction(1)} for i in range(d)])

    def compose(self, inner_const: list[Fraction], inner_lin: list[dict[int, Fraction]]):
        # x_cur = inner_const + inner_lin * x_new
        const, lin = [], []
        for c0, row in zip(self.const, self.lin):
            c = c0
            out: dict[int, Fraction] = {}
            for j, a in row.items():
                c += a * inner_const[j]
                for k, b in inner_lin[j].items():
                    out[k] = out.get(k, 0) + a * b
            const.append(c)
            lin.append({k: v for k, v in out.items() if v})
        self.const, self.lin = const, lin

    def apply(self, x: Sequence[Fraction]) -> list[Fraction]:
        return [c + sum((a * x[j] for j, a in row.items()), Fraction(0)) for c, row in zip(self.const, self.lin)]


def apply_transforms(f: MultiPoly, config: RunConfig) -> tuple[MultiPoly, _AffineMap]:
    """Transformed polynomial and the affine map from its coordinates back to ``f``'s."""
    amap = _AffineMap.identity(f.dimension)
    g = f
    signs = [1] * f.dimension
    if config.orthant is not None:
        if len(config.orthant) != f.dimension:
            raise UsageError(f"orthant has {len(config.orthant)} signs but the polynomial has {f.dimension} variables")
        g = orthant_transform(g, config.orthant)
        signs = list(config.orthant)
        d = g.dimension
        amap.compose([Fraction(0)] * d, [{i: Fraction(s)} for i, s in enumerate(config.orthant)])
    for name, kind, bound in config.range_transforms:
        if name not in g.variables:
            raise UsageError(f"unknown variable {name!r} in range bound")
        i = g.variables.index(name)
        d = g.dimension
        const = [Fraction(0)] * d
        lin = [{j: Fraction(1)} for j in range(d)]
        # bounds refer to the input variable x_i = signs[i] * y_i
        bound = signs[i] * Fraction(bound)
        if signs[i] < 0:
            kind = "upper" if kind == "lower" else "lower"
        if kind == "lower":
            g = range_transform(g, i, "lower", bound)
            const[i] = Fraction(bound)
        else:
            # x < bound  <=>  x = bound - x_new with x_new > 0
            g = range_transform(g, i, "upper", -Fraction(bound))
            const[i] = Fraction(bound)
            lin[i] = {i: Fraction(-1)}
        amap.compose(const, lin)
    if config.difference:
        d = g.dimension
        g = difference_transform(g)
        amap.compose([Fraction(0)] * (2 * d), [{i: Fraction(1), d + i: Fraction(-1)} for i in range(d)])
    return g, amap


def map_certificate(cert: engine.ZeroCertificate, amap: _AffineMap) -> list[RealAlgebraicNumber]:
    """Zero coordinates in the input variables; each is affine in the root ``r``."""
    p = cert.p.to_fractions()
    direction = [b - a for a, b in zip(p, cert.q)]
    base = amap.apply(p)
    slope = [sum((a * direction[j] for j, a in row.items()), Fraction(0)) for row in amap.lin]
    return [affine_image(cert.r, a, b) for a, b in zip(base, slope)]


# ---------------------------------------------------------------------------
# rendering


def _q(x) -> str:
    return str(Fraction(x))


def _dyadic_str(c) -> str:
    if isinstance(c, DyadicPower):
        if abs(c.exp) > _MAX_EXPANDED_EXPONENT:
            return f"{'-' if c.sign < 0 else ''}2^{c.exp}"
        return _q(c.to_fraction())
    return _q(c)


def _coordinate_json(z: RealAlgebraicNumber, digits: int) -> dict:
    z = refine(z, Fraction(1, 10**digits))
    return {
        "defining": [str(c) for c in z.defining.coeffs],
        "interval": None if z.is_exact else [_q(z.interval[0]), _q(z.interval[1])],
        "exact": _q(z.exact) if z.is_exact else None,
        "approx": approximate(z, digits),
    }


def _payload(name: str, f: MultiPoly, outcome: engine.Outcome, zero: Optional[list[RealAlgebraicNumber]],
             config: RunConfig, time_ms: int) -> dict:
    w = outcome.witness
    witness = None
    if w is not None:
        witness = {
            "n": list(w.n),
            "t": None if w.t is None else str(w.t),
            "mu": None if w.mu == INF else int(w.mu),
            "point": None if w.point is None else [_dyadic_str(c) for c in w.point.coords],
        }
    cert = outcome.certificate
    return {
        "name": name,
        "status": outcome.status,
        "dimension": f.dimension,
        "num_terms": len(f),
        "max_degree": f.max_degree,
        "witness": witness,
        "zero": None if zero is None else [_coordinate_json(z, config.approx_digits) for z in zero],
        "gbar": None if cert is None or outcome.status != engine.ZERO else [str(c) for c in cert.gbar.coeffs],
        "stats": {
            "lp_solves": outcome.stats.lp_solves,
            "candidates_tried": outcome.stats.candidates_tried,
            "doubling_steps": outcome.stats.doubling_steps,
            "time_ms": time_ms,
        },
    }


def _error_payload(name: str, message: str, time_ms: int) -> dict:
    return {
        "name": name, "status": ERROR, "dimension": 0, "num_terms": 0, "max_degree": 0,
        "witness": None, "zero": None, "gbar": None,
        "stats": {"lp_solves": 0, "candidates_tried": 0, "doubling_steps": 0, "time_ms": time_ms},
        "error": message,
    }


def render_text(payload: dict, variables: Sequence[str] = ()) -> str:
    lines = [f"{payload['name']}: {payload['status']}"]
    if payload["status"] == ERROR:
        lines.append(f"  error: {payload.get('error', '')}")
        return "\n".join(lines)
    lines.append(f"  terms {payload['num_terms']}, dimension {payload['dimension']}, max degree {payload['max_degree']}")
    w = payload["witness"]
    if w is not None:
        lines.append(f"  witness normal n = ({', '.join(map(str, w['n']))})"
                     + (f", t = {w['t']}" if w["t"] is not None else "")
                     + (f", negated coordinate {w['mu']}" if w["mu"] is not None else ""))
    if payload["gbar"] is not None:
        lines.append(f"  gbar (lowest degree first): [{', '.join(payload['gbar'])}]")
    if payload["zero"] is not None:
        names = list(variables) or [f"x{i + 1}" for i in range(len(payload["zero"]))]
        for v, z in zip(names, payload["zero"]):
            if z["exact"] is not None:
                lines.append(f"  {v} = {z['exact']}")
            else:
                lines.append(f"  {v} ~ {z['approx']}  root of [{', '.join(z['defining'])}] in ]{z['interval'][0]}, {z['interval'][1]}[")
    s = payload["stats"]
    lines.append(f"  lp solves {s['lp_solves']}, candidates {s['candidates_tried']}, doublings {s['doubling_steps']}, {s['time_ms']} ms")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# single instance


def solve_polynomial(f: MultiPoly, config: RunConfig, name: str = "<input>") -> tuple[InstanceReport, dict]:
    """Run the search on an already parsed polynomial; returns the report and the JSON payload."""
    start = time.perf_counter()
    g, amap = apply_transforms(f, config)
    outcome = engine.find_zero(g, config.mode, config.existence_only, max_exponent=config.max_exponent)
    zero = None
    if outcome.status == engine.ZERO:
        zero = map_certificate(outcome.certificate, amap)
    elif outcome.status == engine.ALL_ONES:
        zero = [RealAlgebraicNumber.rational(x) for x in amap.apply([Fraction(1)] * g.dimension)]
    time_ms = int((time.perf_counter() - start) * 1000)
    payload = _payload(name, f, outcome, zero, config, time_ms)
    report = InstanceReport(name, outcome.status, len(f), f.dimension, f.max_degree,
                            outcome.stats.lp_solves, outcome.stats.candidates_tried,
                            outcome.stats.doubling_steps, time_ms)
    return report, payload


def _solve_path(path, config: RunConfig) -> tuple[InstanceReport, dict, tuple[str, ...]]:
    name = os.path.basename(os.fspath(path))
    start = time.perf_counter()
    try:
        f = parse_file(path)
        report, payload = solve_polynomial(f, config, name)
    except (OSError, UnicodeDecodeError, PolynomialSyntaxError, UsageError) as exc:
        ms = int((time.perf_counter() - start) * 1000)
        msg = f"{type(exc).__name__}: {exc}"
        return InstanceReport(name, ERROR, time_ms=ms, message=msg), _error_payload(name, msg, ms), ()
    ms = int((time.perf_counter() - start) * 1000)
    report.time_ms = ms
    payload["stats"]["time_ms"] = ms
    return report, payload, f.variables


def solve_file(path, config: RunConfig = RunConfig()) -> tuple[InstanceReport, str]:
    """Parse, transform and solve one file; returns the report and the rendered outcome."""
    report, payload, variables = _solve_path(path, config)
    if config.output == "json":
        return report, json.dumps(payload)
    return report, render_text(payload, variables)


# ---------------------------------------------------------------------------
# batch


TABLE_FIELDS = ("name", "status", "num_terms", "dimension", "max_degree",
                "lp_solves", "candidates_tried", "doubling_steps", "time_ms")


@dataclass
class BatchSummary:
    instances: int = 0
    definite: int = 0
    remaining: int = 0
    found: int = 0
    failed: int = 0
    errors: int = 0
    largest_size: int = 0
    largest_dimension: int = 0
    largest_degree: int = 0
    max_time_s: float = 0.0
    total_time_s: float = 0.0

    @property
    def failed_percent(self) -> float:
        return 100.0 * self.failed / self.remaining if self.remaining else 0.0

    def rows(self) -> list[tuple[str, str]]:
        return [
            ("number of instances", str(self.instances)),
            ("number of definite instances", str(self.definite)),
            ("number of remaining instances", str(self.remaining)),
            ("found zero in", str(self.found)),
            ("failed on", str(self.failed)),
            ("failed on (% of remaining)", f"{self.failed_percent:.1f}"),
            ("size of largest instance", str(self.largest_size)),
            ("dimension of largest instance", str(self.largest_dimension)),
            ("degree of largest instance", str(self.largest_degree)),
            ("maximal time (s)", f"{self.max_time_s:.2f}"),
            ("total time (s)", f"{self.total_time_s:.2f}"),
            ("errors (not counted above)", str(self.errors)),
        ]


def summarize(reports: Sequence[InstanceReport]) -> BatchSummary:
    s = BatchSummary()
    largest = None
    for r in reports:
        if r.status == ERROR:
            s.errors += 1
            continue
        s.instances += 1
        if r.status == engine.DEFINITE:
            s.definite += 1
        else:
            s.remaining += 1
            if r.status == engine.FAILED:
                s.failed += 1
            else:
                s.found += 1
        if largest is None or r.num_terms > largest.num_terms:
            largest = r
        t = r.time_ms / 1000
        s.max_time_s = max(s.max_time_s, t)
        s.total_time_s += t
    if largest is not None:
        s.largest_size, s.largest_dimension, s.largest_degree = largest.num_terms, largest.dimension, largest.max_degree
    return s


@dataclass
class BatchResult:
    reports: list[InstanceReport] = field(default_factory=list)
    summary: BatchSummary = field(default_factory=BatchSummary)


def _batch_worker(args) -> InstanceReport:
    path, config = args
    return _solve_path(path, config)[0]


def batch_run(directory, config: RunConfig = RunConfig(), jobs: Optional[int] = None) -> BatchResult:
    """Solve every regular file in ``directory`` in lexicographic name order."""
    if not os.path.isdir(directory):
        raise UsageError(f"not a directory: {directory}")
    names = sorted(n for n in os.listdir(directory) if os.path.isfile(os.path.join(directory, n)))
    work = [(os.path.join(directory, n), config) for n in names]
    jobs = jobs or os.cpu_count() or 1
    if jobs == 1 or len(work) <= 1:
        reports = [_batch_worker(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_batch_worker, work))
    return BatchResult(reports, summarize(reports))


def format_batch(result: BatchResult, fmt: str = "table") -> str:
    out = io.StringIO()
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(TABLE_FIELDS)
        for r in result.reports:
            w.writerow([getattr(r, k) for k in TABLE_FIELDS])
        w.writerow([])
        for row in result.summary.rows():
            w.writerow(row)
    elif fmt == "table":
        out.write("\t".join(TABLE_FIELDS) + "\n")
        for r in result.reports:
            out.write("\t".join(str(getattr(r, k)) for k in TABLE_FIELDS) + "\n")
        out.write("\n")
        width = max(len(k) for k, _ in result.summary.rows())
        for k, v in result.summary.rows():
            out.write(f"{k.ljust(width)}\t{v}\n")
        errors = [r for r in result.reports if r.status == ERROR]
        if errors:
            out.write("\n")
            for r in errors:
                out.write(f"error\t{r.name}\t{r.message}\n")
    else:
        raise UsageError(f"unknown batch format {fmt!r}")
    return out.getvalue()


# ---------------------------------------------------------------------------
# argument handling


def _parse_bound(text: str, kind: str) -> tuple[str, str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise UsageError(f"expected VAR=Q, got {text!r}")
    try:
        q = Fraction(value.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad rational bound {value!r}") from None
    return name.strip(), kind, q


def _parse_orthant(text: str) -> tuple[int, ...]:
    if not text or any(ch not in "+-" for ch in text):
        raise UsageError(f"orthant must be a string of '+' and '-', got {text!r}")
    return tuple(1 if ch == "+" else -1 for ch in text)


class _Bound(argparse.Action):
    # keeps --lower and --upper in command line order
    def __call__(self, parser, namespace, values, option_string=None):
        items = list(getattr(namespace, "ranges", None) or [])
        items.append((self.dest, values))
        namespace.ranges = items


def _add_solve_flags(p: argparse.ArgumentParser):
    p.add_argument("--mode", choices=(engine.POSITIVE, engine.GENERAL), default=engine.POSITIVE)
    p.add_argument("--existence-only", action="store_true", help="stop once a positive point is known to exist")
    p.add_argument("--orthant", metavar="SIGNS", help="search the orthant given by a +/- string, one sign per variable")
    p.add_argument("--lower", metavar="VAR=Q", dest="lower", action=_Bound, help="look for VAR > Q (repeatable)")
    p.add_argument("--upper", metavar="VAR=Q", dest="upper", action=_Bound, help="look for VAR < Q (repeatable)")
    p.add_argument("--difference", action="store_true", help="substitute x - x' for every variable")
    p.add_argument("--approx-digits", type=int, default=6, metavar="N")
    p.add_argument("--max-exponent", type=int, default=DEFAULT_MAX_EXPONENT, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subtropical", description="Find real zeros of multivariate integer polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="solve one polynomial file")
    s.add_argument("file")
    _add_solve_flags(s)
    s.add_argument("--json", action="store_true", help="print one JSON object")
    b = sub.add_parser("batch", help="solve every file in a directory and summarize")
    b.add_argument("dir")
    b.add_argument("--format", choices=("table", "csv"), default="table")
    b.add_argument("--jobs", type=int, default=None, metavar="N")
    _add_solve_flags(b)
    return ap


def config_from_args(args) -> RunConfig:
    ranges = tuple(_parse_bound(v, kind) for kind, v in (getattr(args, "ranges", None) or []))
    return RunConfig(
        mode=args.mode,
        existence_only=args.existence_only,
        orthant=_parse_orthant(args.orthant) if args.orthant is not None else None,
        range_transforms=ranges,
        difference=args.difference,
        approx_digits=args.approx_digits,
        max_exponent=args.max_exponent,
        output="json" if getattr(args, "json", False) else "text",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        config = config_from_args(args)
        if args.command == "solve":
            report, text = solve_file(args.file, config)
            print(text)
            return exit_code(report.status)
        if args.jobs is not None and args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        result = batch_run(args.dir, config, args.jobs)
        sys.stdout.write(format_batch(result, args.format))
        return EXIT_OK
    except UsageError as exc:
        print(f"subtropical: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
