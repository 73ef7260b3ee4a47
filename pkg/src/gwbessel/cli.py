"""Command-line front end: ``eval``, ``scan``, ``bench`` and ``gw``.

Exit codes: 0 success, 2 bad input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import platform
import statistics
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import mpmath
import numpy as np

from . import __version__
from .core import BesselError, BesselQuery, InvalidInput, PrecisionConfig
from .evaluator import DispatchPolicy, METHOD_NAMES, eval_J, parse_method, run_method
from .gw_signal import ft_signal, load_params, preset, write_terms_csv
from .oracle import exact_J, oracle_feasible

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
# aliases that pick the below- or above-transition variant from the side of x
_SIDED = {"watson": ("watson1", "watson2"), "debye": ("debye1", "debye2")}


def _resolve(name: str, nu: float, x: float):
    if name in _SIDED:
        name = _SIDED[name][0 if x < nu else 1]
    return parse_method(name)


@dataclass(frozen=True)
class ScanSpec:
    nu: float
    x_start: float
    x_stop: float
    x_step: float
    methods: List[str] = field(default_factory=lambda: ["auto"])
    oracle: bool = False
    output: Optional[str] = None

    def __post_init__(self):
        if not self.x_step > 0:
            raise InvalidInput("x_step must be positive")
        if not self.x_stop > self.x_start:
            raise InvalidInput("x_stop must exceed x_start")

    def grid(self) -> np.ndarray:
        return make_grid(self.x_start, self.x_stop, self.x_step)


def make_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid start, start+step, ..., <= stop; empty when stop < start."""
    if not step > 0:
        raise InvalidInput("step must be positive")
    if stop < start:
        return np.empty(0)
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 10)


def parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidInput(f"expected start:stop:step, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise InvalidInput(f"expected numbers in {text!r}") from None


def _read_policy(path: Optional[str]) -> DispatchPolicy:
    if not path:
        return DispatchPolicy()
    items = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise InvalidInput(f"policy file line {raw.strip()!r} is not key = value")
                k, v = (s.strip() for s in line.split("=", 1))
                items[k] = v
    except OSError as exc:
        raise InvalidInput(f"cannot read policy file: {exc}") from None
    try:
        return DispatchPolicy.from_mapping(items)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None


def _precision(args) -> PrecisionConfig:
    digits = "auto" if args.oracle_digits is None else args.oracle_digits
    return PrecisionConfig(target_rel_error=args.precision, oracle_digits=digits)


def _number(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _metadata(policy: DispatchPolicy, precision: PrecisionConfig, extra: Sequence[str] = ()) -> List[str]:
    lines = [
        f"# gwbessel {__version__}",
        f"# policy transition_halfwidth={policy.transition_halfwidth} epsilon_radius={policy.epsilon_radius} "
        f"small_arg_factor={policy.small_arg_factor} require_error_target={policy.require_error_target}",
        f"# precision target_rel_error={precision.target_rel_error} phase_digits={precision.phase_digits}",
        f"# machine {platform.machine()} {platform.system()} python {platform.python_version()}",
    ]
    return lines + [f"# {e}" for e in extra]


def cmd_eval(args) -> int:
    precision = _precision(args)
    policy = _read_policy(args.policy_file)
    q = BesselQuery(args.nu, args.x, precision)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.method and args.method != "auto":
            r = run_method(_resolve(args.method.lower(), args.nu, args.x), q, policy)
        else:
            r = eval_J(q, policy)
    out = [
        f"nu          {args.nu!r}",
        f"x           {args.x!r}",
        f"value       {r.value!r}",
        f"method      {r.method}",
        f"terms       {r.terms_used}",
        f"est_error   {'unknown' if r.est_error is None else repr(r.est_error)}"
        f"{' (rigorous)' if r.rigorous else ' (heuristic)'}",
        f"elapsed_ms  {r.elapsed * 1e3:.4f}",
    ]
    if args.oracle_digits is not None:
        if oracle_feasible(args.x, args.oracle_digits):
            ov = exact_J(args.nu, args.x, args.oracle_digits)
            ref = float(ov.value)
            err = abs(r.value - ref) / abs(ref) if ref else abs(r.value)
            out += [f"oracle      {mpmath.nstr(ov.value, args.oracle_digits)}", f"rel_error   {err:.3e}"]
        else:
            out.append("oracle      out of range (argument too large for the oracle cap)")
    for w in caught:
        print(f"warning: {w.category.__name__}: {w.message}", file=sys.stderr)
    print("\n".join(out))
    return EXIT_OK


def _scan_row(job):
    x, nu, methods, oracle_digits, precision, policy, timing = job
    q = BesselQuery(nu, x, precision)
    row = {"x": repr(float(x))}
    failures = []
    values = {}
    for name in methods:
        if name == "auto":
            continue
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                values[name] = run_method(_resolve(name, nu, x), q, policy).value
        except BesselError as exc:
            values[name] = None
            failures.append(f"{name}:{type(exc).__name__}")
    auto = None
    if "auto" in methods:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                auto = eval_J(q, policy)
        except BesselError as exc:
            failures.append(f"auto:{type(exc).__name__}")
    ref = float(exact_J(nu, x, oracle_digits).value) if oracle_digits else None
    for name in methods:
        if name == "auto":
            continue
        v = values[name]
        row[f"value_{name}"] = "" if v is None else repr(v)
    if ref is not None:
        row["oracle"] = repr(ref)
        for name in methods:
            v = auto.value if name == "auto" and auto is not None else values.get(name)
            row[f"relerr_{name}"] = "" if v is None else repr(abs(v - ref) / abs(ref) if ref else abs(v))
    if "auto" in methods:
        row["auto_method"] = "" if auto is None else str(auto.method)
        row["auto_value"] = "" if auto is None else repr(auto.value)
        if timing:
            row["elapsed_ms"] = "" if auto is None else f"{auto.elapsed * 1e3:.4f}"
    row["status"] = "ok" if not failures else "partial;" + ";".join(failures)
    return row


def _columns(methods, oracle, timing):
    cols = ["x"] + [f"value_{m}" for m in methods if m != "auto"]
    if oracle:
        cols += ["oracle"] + [f"relerr_{m}" for m in methods]
    if "auto" in methods:
        cols += ["auto_method", "auto_value"] + (["elapsed_ms"] if timing else [])
    return cols + ["status"]


def _normalise_methods(text: str) -> List[str]:
    names = [s.strip().lower() for s in text.split(",") if s.strip()]
    for n in names:
        if n != "auto" and n not in METHOD_NAMES and n not in _SIDED:
            raise InvalidInput(f"unknown method {n!r}; choose from auto, watson, debye, {', '.join(METHOD_NAMES)}")
    return names


def cmd_scan(args) -> int:
    start, stop, step = parse_range(args.x)
    spec = ScanSpec(args.nu, start, stop, step, _normalise_methods(args.methods), args.oracle == "on", args.output)
    precision = _precision(args)
    policy = _read_policy(args.policy_file)
    grid = spec.grid()
    odig = args.oracle_digits or 20
    if spec.oracle:
        bad = [x for x in grid if not oracle_feasible(float(x), odig)]
        if bad:
            print(f"error: oracle requested but x={float(bad[0])!r} exceeds the oracle cap; rerun with --oracle off",
                  file=sys.stderr)
            return EXIT_INPUT
    jobs = [(float(x), spec.nu, spec.methods, odig if spec.oracle else None, precision, policy, args.timing)
            for x in grid]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_scan_row, jobs, chunksize=8))
    else:
        rows = [_scan_row(j) for j in jobs]
    cols = _columns(spec.methods, spec.oracle, args.timing)
    buf = io.StringIO()
    for line in _metadata(policy, precision, [f"scan nu={spec.nu!r} x={args.x} methods={','.join(spec.methods)} "
                                              f"oracle={args.oracle}"]):
        buf.write(line + "\n")
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _emit(buf.getvalue(), spec.output)
    return EXIT_OK


def _emit(text: str, path: Optional[str]) -> None:
    if path and path != "-":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _percentile(values, q):
    return float(np.percentile(np.asarray(values), q)) if values else float("nan")


def cmd_bench(args) -> int:
    start, stop, step = parse_range(args.x)
    grid = make_grid(start, stop, step)
    methods = _normalise_methods(args.methods)
    precision = _precision(args)
    policy = _read_policy(args.policy_file)
    lines = _metadata(policy, precision, [f"bench nu={args.nu!r} x={args.x} repeat={args.repeat}",
                                          f"processor {platform.processor() or 'unknown'}"])
    rows = []
    medians = {}
    targets = list(methods) + (["oracle%d" % args.oracle_digits] if args.oracle_digits else [])
    for name in targets:
        times = []
        for x in grid:
            q = BesselQuery(args.nu, float(x), precision)
            if name.startswith("oracle") and args.oracle_digits:
                def call():
                    return exact_J(args.nu, float(x), args.oracle_digits)
            elif name == "auto":
                def call():
                    return eval_J(q, policy)
            else:
                m = _resolve(name, args.nu, float(x))

                def call():
                    return run_method(m, q, policy)
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    call()  # warm-up, excluded
                    for _ in range(args.repeat):
                        t0 = time.perf_counter()
                        call()
                        times.append(time.perf_counter() - t0)
            except BesselError:
                continue
        if times:
            medians[name] = statistics.median(times)
            rows.append((name, len(times), statistics.median(times) * 1e3, _percentile(times, 99) * 1e3))
    buf = io.StringIO()
    for line in lines:
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "samples", "median_ms", "p99_ms"])
    for name, n, med, p99 in rows:
        w.writerow([name, n, f"{med:.4f}", f"{p99:.4f}"])
    oracle_key = "oracle%d" % args.oracle_digits if args.oracle_digits else None
    if oracle_key in medians:
        for name in methods:
            if name in medians and medians[name] > 0:
                buf.write(f"# ratio {oracle_key}/{name} = {medians[oracle_key] / medians[name]:.2f}\n")
    _emit(buf.getvalue(), args.output)
    return EXIT_OK


def cmd_gw(args) -> int:
    if args.param_file:
        params = load_params(args.param_file)
    else:
        params = preset(args.preset)
    precision = _precision(args)
    policy = _read_policy(args.policy_file)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = ft_signal(params, policy, precision, keep_terms=bool(args.csv))
    for w in caught:
        print(f"warning: {w.category.__name__}: {w.message}", file=sys.stderr)
    used = sorted({str(m) for m in res.bessel_methods.values()})
    lo, hi = params.n_bounds()
    print(f"total_re      {res.total.real!r}")
    print(f"total_im      {res.total.imag!r}")
    print(f"|total|       {abs(res.total)!r}")
    print(f"tail_estimate {res.tail_estimate:.3e}")
    print(f"n_range       {lo}:{hi}")
    print(f"l_max         {params.l_max}")
    print(f"bessel_X      {params.X!r}")
    print(f"k             {params.k!r}")
    print(f"bessel_paths  {','.join(used)}")
    if args.csv:
        if args.csv == "-":
            write_terms_csv(res, sys.stdout)
        else:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                write_terms_csv(res, fh)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gwbessel", description="Large-order Bessel J evaluation and GW signal sums.")
    p.add_argument("--version", action="version", version=f"gwbessel {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_number, default=1e-10, help="target relative error (default 1e-10)")
    common.add_argument("--policy-file", help="key = value overrides for the dispatch policy")
    common.add_argument("--oracle-digits", type=int, default=None, help="oracle digits; also enables comparison")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate J_nu(x) once")
    e.add_argument("nu", type=_number)
    e.add_argument("x", type=_number)
    e.add_argument("--method", default="auto", help="auto or one of " + ", ".join(METHOD_NAMES))
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("scan", parents=[common], help="CSV over an x grid at fixed nu")
    s.add_argument("--nu", type=_number, required=True)
    s.add_argument("--x", required=True, help="start:stop:step (inclusive)")
    s.add_argument("--methods", default="auto", help="comma list of method aliases and/or auto")
    s.add_argument("--oracle", choices=("on", "off"), default="off")
    s.add_argument("--output", "-o", help="output path (default stdout)")
    s.add_argument("--jobs", type=int, default=1, help="worker processes; row order is unaffected")
    s.add_argument("--timing", action="store_true", help="add an elapsed_ms column (not byte-stable)")
    s.set_defaults(func=cmd_scan)

    b = sub.add_parser("bench", parents=[common], help="median and p99 latency per method")
    b.add_argument("--nu", type=_number, required=True)
    b.add_argument("--x", required=True, help="start:stop:step (inclusive; may be empty)")
    b.add_argument("--methods", default="auto")
    b.add_argument("--repeat", type=int, default=5)
    b.add_argument("--output", "-o")
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gw", parents=[common], help="pulsar GW Fourier-transform sum")
    g.add_argument("param_file", nargs="?", help="key = value parameter file")
    g.add_argument("--preset", default="desk", help="desk, theta0 or physical when no file is given")
    g.add_argument("--csv", help="write the per-term breakdown here ('-' for stdout)")
    g.set_defaults(func=cmd_gw)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BesselError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ArithmeticError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
