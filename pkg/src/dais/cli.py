"""Command-line front end: ``detect``, ``simulate``, ``bench`` and ``schedule``.

All locations are 1-based. Exit status: 0 success, 2 usage or input error,
3 degenerate data (the noise scale could not be estimated).
"""

import argparse
import json
import math
import sys

import numpy as np

from .bench import BenchPlan, run_bench
from .detect import dais, fit_signal
from .estimate import DegenerateScaleError
from .metrics import rows_to_csv, rows_to_markdown
from .multivar import mdais
from .robust import RobustConfig, dais_dependent, dais_heavy
from .schedule import build_schedule
from .simgen import catalog, catalog_names, generate
from .types import DetectionConfig, SpecError

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE = 0, 2, 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_USAGE):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"{self.prog}: {message}")


def _num(v):
    return format(v, ".17g")


def _jsonable(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(_num(obj))
    if isinstance(obj, (np.floating,)):
        return _jsonable(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dumps(doc):
    """Byte-stable JSON: sorted keys, floats rounded through 17 significant digits."""
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def _emit(text, out):
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise CliError(f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def read_series(path):
    """Parse a numeric CSV (optional header row). A leading column headed ``t`` is dropped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    rows, header, width = [], None, None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split(",")]
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            if header is None and not rows:
                header = cells
                continue
            raise CliError(f"{path}:{lineno}: cannot parse {line.strip()!r} as numbers") from None
        if not all(math.isfinite(v) for v in vals):
            raise CliError(f"{path}:{lineno}: non-finite value")
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise CliError(f"{path}:{lineno}: expected {width} columns, got {len(vals)}")
        rows.append(vals)
    if not rows:
        raise CliError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=float)
    if header is not None and len(header) != data.shape[1]:
        raise CliError(f"{path}: header has {len(header)} columns, data has {data.shape[1]}")
    if header is not None and header[0].lower() == "t" and data.shape[1] > 1:
        data = data[:, 1:]
    return data


def _cmd_detect(args):
    try:
        config = DetectionConfig(
            model=args.model,
            lam=args.lam,
            threshold_const=args.threshold_const,
            sigma=args.sigma,
            norm=args.norm,
            restart_mode=args.restart,
        )
        robust = None
        if args.robust != "none":
            robust = RobustConfig(args.factor, args.eta, args.cluster_tol)
    except SpecError as exc:
        raise CliError(str(exc)) from None
    data = read_series(args.input)
    T, d = data.shape
    if d > 1 and args.robust != "none":
        raise CliError("--robust applies to univariate input only")
    if d > 1 and args.fit:
        raise CliError("--fit applies to univariate input only")
    try:
        if d > 1:
            res = mdais(data, config)
        elif args.robust == "preavg":
            res = dais_heavy(data[:, 0], config, robust)
        elif args.robust == "subsample":
            res = dais_dependent(data[:, 0], config, robust)
        else:
            res = dais(data[:, 0], config)
    except DegenerateScaleError as exc:
        raise CliError(f"{exc} (use --sigma VALUE)", EXIT_DEGENERATE) from None
    except SpecError as exc:
        raise CliError(str(exc)) from None
    doc = {
        "model": config.model.value,
        "T": T,
        "d": d,
        "sigma_used": res.sigma_used,
        "threshold": res.threshold_used,
        "change_points": [c.to_dict() for c in res.change_points],
        "intervals_checked": res.intervals_checked,
    }
    if args.robust != "none":
        doc["robust"] = {"kind": args.robust, "factor": robust.factor}
    if args.fit:
        doc["fitted"] = fit_signal(data[:, 0], res.locations, config.model).fitted
    _emit(dumps(doc), args.out)


def _cmd_simulate(args):
    try:
        spec = catalog(args.signal)
        if args.dims < 1:
            raise SpecError("--dims must be >= 1")
        ts = generate(spec, args.seed, d=args.dims)
    except SpecError as exc:
        raise CliError(str(exc)) from None
    cols = ["x"] if ts.d == 1 else [f"x{j}" for j in range(1, ts.d + 1)]
    lines = [",".join(["t", *cols])]
    for t, row in enumerate(ts.values, start=1):
        lines.append(",".join([str(t), *(_num(float(v)) for v in row)]))
    _emit("\n".join(lines) + "\n", args.out)


def _cmd_bench(args):
    try:
        with open(args.plan, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {args.plan}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.plan}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    try:
        plan = BenchPlan.from_dict(doc)
    except (SpecError, KeyError, TypeError, ValueError) as exc:
        raise CliError(f"invalid plan: {exc}") from None
    rows = run_bench(plan, workers=args.workers)
    _emit(rows_to_csv(rows), args.out)
    if args.markdown:
        if args.markdown == "-":
            sys.stdout.write(rows_to_markdown(rows))
        else:
            _emit(rows_to_markdown(rows), args.markdown)


def _cmd_schedule(args):
    try:
        sched = build_schedule(args.s, args.e, args.anchor, args.lam)
    except SpecError as exc:
        raise CliError(str(exc)) from None
    _emit(dumps({"s": args.s, "e": args.e, "anchor": args.anchor, "lambda": args.lam,
                 "intervals": sched.as_lists()}), args.out)


def build_parser():
    p = _Parser(prog="dais", description="Change-point detection by data-adaptive isolation. "
                "All reported locations are 1-based.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("detect", help="detect change-points in a CSV series",
                       description="Detect change-points in a CSV file (one column per dimension, "
                       "optional header; a leading 't' column is ignored). Prints JSON; "
                       "locations are 1-based.")
    d.add_argument("input", help="CSV file")
    d.add_argument("--model", required=True, choices=["constant", "linear"],
                   help="piecewise-constant mean or continuous piecewise-linear trend")
    d.add_argument("--lambda", dest="lam", type=int, default=3, help="expansion step (default 3)")
    d.add_argument("--threshold-const", type=float, default=None,
                   help="threshold constant C (default 1.7 constant, 2.1 linear)")
    d.add_argument("--sigma", type=float, default=None, help="noise scale; skips the MAD estimate")
    d.add_argument("--norm", choices=["l2", "linf"], default="l2",
                   help="aggregation across columns for d > 1 (default l2)")
    d.add_argument("--restart", choices=["ends", "point"], default="point",
                   help="restart after a detection from the interval ends or the detected point (default point)")
    d.add_argument("--robust", choices=["none", "preavg", "subsample"], default="none",
                   help="pre-averaging for heavy tails, subsampling for serial dependence")
    d.add_argument("--factor", type=int, default=5, help="block / subsampling factor s (default 5)")
    d.add_argument("--eta", type=int, default=None, help="minimum votes for subsampling (default ceil(s/2))")
    d.add_argument("--cluster-tol", type=float, default=None,
                   help="distance that merges sub-series detections (default s)")
    d.add_argument("--fit", action="store_true", help="include the fitted signal")
    d.add_argument("--out", help="write JSON here instead of stdout")
    d.set_defaults(func=_cmd_detect)

    s = sub.add_parser("simulate", help="draw a catalog signal with noise",
                       description=f"Write a noisy catalog signal as CSV. Signals: {', '.join(catalog_names())}.")
    s.add_argument("--signal", required=True, help="catalog id (S1..S18) or alias")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--dims", type=int, default=1, help="independent-noise columns (default 1)")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(func=_cmd_simulate)

    b = sub.add_parser("bench", help="run a Monte-Carlo plan",
                       description="Run a JSON benchmark plan and write one CSV row per signal and method. "
                       "DAIS_THREADS caps the worker processes.")
    b.add_argument("--plan", required=True, help="JSON plan file")
    b.add_argument("--out", help="CSV path (default stdout)")
    b.add_argument("--markdown", help="also write a markdown table here ('-' for stdout)")
    b.add_argument("--workers", type=int, default=None, help="worker processes (default: CPU count)")
    b.set_defaults(func=_cmd_bench)

    c = sub.add_parser("schedule", help="print the expanding-interval schedule",
                       description="Print the expansion schedule around an anchor as JSON (1-based, inclusive).")
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--e", type=int, required=True)
    c.add_argument("--anchor", type=int, required=True)
    c.add_argument("--lambda", dest="lam", type=int, default=3)
    c.add_argument("--out")
    c.set_defaults(func=_cmd_schedule)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
