"""Command-line interface: CSV tables, SVG line charts, validation suites."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__, exact, hardedge, montecarlo, svgplot, validate
from .errors import (DomainError, NumericalQualityError, OracleScaleError,
                     StatisticalPowerError, UnsupportedBranchError)
from .exact import DistributionQuery, EnsembleParams

_METHOD_FLAGS = {
    "legendre": "exact-legendre",
    "jacobi": "exact-jacobi",
    "asymptotic": "asymptotic",
    "corrected": "corrected",
}
_EDGE_FLAGS = {"min": "smallest", "max": "largest"}


@dataclass
class OutputTable:
    """Rectangular numeric table with '#'-comment metadata lines."""

    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def render(self):
        lines = [f"# {key}={value}" for key, value in self.metadata.items()]
        lines.append(",".join(self.columns))
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row width does not match columns")
            lines.append(",".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"

    def write(self, path):
        text = self.render()
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _metadata(args, extra=None):
    md = {
        "command": "jacobi-edge " + " ".join(map(str, args._argv)),
        "version": __version__,
        "numpy": np.__version__,
    }
    if extra:
        md.update(extra)
    return md


def _parse_grid(text):
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError as exc:
        raise DomainError(f"grid must be start:stop:count, got {text!r}") from exc
    if count < 1:
        raise DomainError("grid count must be >= 1")
    return np.linspace(start, stop, count)


def _params(args):
    return EnsembleParams(args.n, args.alpha1, args.alpha2)


def cmd_cdf(args):
    query = DistributionQuery(_params(args), args.model, _EDGE_FLAGS[args.edge],
                              _METHOD_FLAGS[args.method])
    grid = _parse_grid(args.grid)
    columns = ["point", "cdf"]
    flagged = args.method == "corrected"
    if flagged:
        columns.append("conjectured")
        proven = hardedge.correction_is_proven(
            args.alpha1, args.alpha2, _EDGE_FLAGS[args.edge])
    rows = []
    for point in grid:
        value = exact.model_cdf(query, float(point))
        rows.append((point, value, 0.0 if proven else 1.0) if flagged else (point, value))
    table = OutputTable(columns, rows, _metadata(args))
    table.write(args.out)
    if args.svg:
        svgplot.line_chart(args.svg, f"{args.model} {args.edge} {args.method}",
                           "point", "cdf", [("cdf", grid, [r[1] for r in rows])])
    return 0


def cmd_correction(args):
    params = _params(args)
    cfg = montecarlo.MCConfig(params, args.samples, args.seed, args.workers)
    grid = _parse_grid(args.grid)
    values, stderr = montecarlo.empirical_scaled_correction(cfg, grid)
    theory = np.array([hardedge.scaled_correction_density(args.alpha1, args.alpha2, float(x))
                       for x in grid])
    rows = list(zip(grid, values, stderr, theory))
    table = OutputTable(["x", "empirical_scaled_correction", "stderr", "theory"],
                        rows, _metadata(args, {"seed": args.seed, "samples": args.samples}))
    table.write(args.out)
    if args.svg:
        svgplot.line_chart(args.svg, "scaled first-order correction", "x", "n e^x (f_n - f)",
                           [("empirical", grid, values), ("theory", grid, theory)])
    return 0


def cmd_mc(args):
    params = _params(args)
    cfg = montecarlo.MCConfig(params, args.samples, args.seed, args.workers)
    cov = (montecarlo.CovarianceSpec.random_positive_definite(args.seed + 1)
           if args.sigma == "random" else montecarlo.CovarianceSpec.identity())
    small, large = montecarlo.sample_extremes(cfg, cov)
    samples = small if args.edge == "min" else large
    ecdf = montecarlo.EmpiricalCDF(samples)
    qs = np.linspace(0.0, 1.0, 101)
    points = np.quantile(samples, qs)
    edge = _EDGE_FLAGS[args.edge]
    theory = exact.smallest_cdf if edge == "smallest" else exact.largest_cdf
    ks = montecarlo.ks_distance(ecdf, lambda t: theory(params, min(max(t, 0.0), 1.0)))
    meta = _metadata(args, {
        "seed": args.seed,
        "samples": args.samples,
        "mean": f"{float(np.mean(samples)):.17g}",
        "std": f"{float(np.std(samples, ddof=1)):.17g}",
        "ks_vs_exact": f"{ks:.17g}",
    })
    rows = [(p, ecdf.evaluate(p)) for p in points]
    table = OutputTable(["point", "ecdf"], rows, meta)
    table.write(args.out)
    if args.svg:
        svgplot.line_chart(args.svg, f"empirical CDF ({args.edge})", "point", "ecdf",
                           [("ecdf", points, [r[1] for r in rows])])
    return 0


def cmd_validate(args):
    results = validate.SUITES[args.suite](args.fast)
    width = max(len(r.name) for r in results)
    all_ok = True
    for r in results:
        state = "PASS" if r.passed else "FAIL"
        print(f"{state}  {r.name:<{width}}  {r.detail}")
        all_ok &= r.passed
    return 0 if all_ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jacobi-edge",
        description="Extreme-eigenvalue distributions of double-Wishart matrices: "
                    "exact, asymptotic, corrected, and Monte Carlo validation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--alpha1", type=int, required=True)
        p.add_argument("--alpha2", type=int, required=True)
        p.add_argument("--out", default=None, help="CSV output file (default stdout)")
        p.add_argument("--svg", default=None, help="optional SVG line chart")

    p = sub.add_parser("cdf", help="distribution tables for any model/edge/method")
    add_common(p)
    p.add_argument("--model", choices=("w", "jue", "f"), required=True)
    p.add_argument("--edge", choices=("min", "max"), required=True)
    p.add_argument("--method", choices=tuple(_METHOD_FLAGS), required=True)
    p.add_argument("--grid", required=True, help="start:stop:count (inclusive)")
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("correction", help="empirical vs theoretical scaled correction")
    add_common(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", required=True, help="start:stop:count (inclusive)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_correction)

    p = sub.add_parser("mc", help="Monte Carlo empirical CDF and summary statistics")
    add_common(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--edge", choices=("min", "max"), required=True)
    p.add_argument("--sigma", choices=("identity", "random"), default="identity")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("validate", help="run an invariant suite; exit 0 iff all pass")
    p.add_argument("--suite", choices=tuple(validate.SUITES), required=True)
    p.add_argument("--fast", action="store_true")
    p.set_defaults(func=cmd_validate)
    return parser


def _fold_negative_grids(argv):
    """Join `--grid -1:0:5` into `--grid=-1:0:5` so argparse accepts it."""
    out = []
    skip = False
    for i, arg in enumerate(argv):
        if skip:
            skip = False
            continue
        if arg == "--grid" and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and ":" in argv[i + 1]:
            out.append(f"--grid={argv[i + 1]}")
            skip = True
        else:
            out.append(arg)
    return out


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_fold_negative_grids(argv))
    args._argv = argv
    try:
        return args.func(args)
    except (NumericalQualityError, StatisticalPowerError) as exc:
        print(f"numerical quality error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, UnsupportedBranchError, OracleScaleError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
