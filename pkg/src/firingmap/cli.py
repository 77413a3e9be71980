"""Command-line front end.

Usage: ``firingmap <command> STIMULUS.json [options]``. Exit codes: 0 on
success, 2 when no firing is found within the horizon, 3 for an undefined
firing map, 4 for parse or validation errors.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import serialize
from .almostperiod import (
    CannotCertifyPositivity,
    compare_with_periodic_approximant,
    scan_displacement_almost_periods,
    scan_stepanov_almost_periods,
    scan_sup_almost_periods,
    sequence_almost_periods,
    verify_displacement_theorem,
)
from .firing import (
    DEFAULT_ROOT_TOLERANCE,
    DEFAULT_SEARCH_HORIZON,
    FiringEngine,
    NoFiringWithinHorizon,
    UndefinedFiringMap,
    UnsupportedStimulus,
    Verdict,
    check_well_defined,
    discontinuities,
)
from .oracle import NoCrossingWithinSpan, OracleConfig, brute_first_crossing, brute_mean, \
    random_stimulus
from .stimulus import (
    StimulusParseError,
    Window,
    certified_lower_bound,
    load_stimulus,
    mean,
    sup_bound,
)

EXIT_OK = 0
EXIT_NO_FIRING = 2
EXIT_UNDEFINED = 3
EXIT_INVALID = 4


_PUBLIC = ("check", "spikes", "rate", "displacement", "discont", "ap-scan", "verify-ap",
           "approx-compare", "isi")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which is reserved for horizon failures
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _positive(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return val


def _count(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return val


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("stimulus", help="stimulus description (JSON)")
    common.add_argument("--tol", type=_positive, default=DEFAULT_ROOT_TOLERANCE,
                        help="root tolerance (time units)")
    common.add_argument("--horizon", type=_positive, default=DEFAULT_SEARCH_HORIZON,
                        help="search horizon (time units)")
    common.add_argument("--allow-unknown", action="store_true",
                        help="accept stimuli whose well-definedness is undecided")
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--output", "-o", default="-", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    window = _Parser(add_help=False)
    window.add_argument("--lo", type=float, required=True)
    window.add_argument("--hi", type=float, required=True)
    window.add_argument("--step", type=_positive, default=0.1, help="window grid step")

    taus = _Parser(add_help=False)
    taus.add_argument("--epsilon", type=_positive, required=True)
    taus.add_argument("--tau-lo", type=float, default=0.0)
    taus.add_argument("--tau-hi", type=float, required=True)
    taus.add_argument("--tau-step", type=_positive, default=1e-2)
    taus.add_argument("--no-refine", action="store_true", help="skip golden-section polishing")

    parser = _Parser(prog="firingmap", description="Firing map analysis for x' = f(t).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser,
                                metavar="{" + ",".join(_PUBLIC) + "}")

    sub.add_parser("check", parents=[common], help="well-definedness verdict")

    p = sub.add_parser("spikes", parents=[common], help="spike train from t0")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--n", type=_count, required=True)

    p = sub.add_parser("rate", parents=[common], help="empirical firing rate")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--n", type=_count, required=True)

    sub.add_parser("displacement", parents=[common, window], help="displacement profile")
    sub.add_parser("discont", parents=[common, window], help="discontinuities of phi")

    p = sub.add_parser("ap-scan", parents=[common, window, taus], help="almost-period scan")
    p.add_argument("--target", choices=["stimulus-sup", "stimulus-stepanov", "displacement"],
                   required=True)

    sub.add_parser("verify-ap", parents=[common, window, taus],
                   help="check Stepanov candidates against the displacement criterion")

    p = sub.add_parser("approx-compare", parents=[common, window],
                       help="compare with an approximating stimulus")
    p.add_argument("--approximant", required=True)
    p.add_argument("--epsilon", type=_positive, required=True)

    p = sub.add_parser("isi", parents=[common], help="interspike-interval almost periods")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--n", type=_count, required=True)
    p.add_argument("--epsilon", type=_positive, required=True)
    p.add_argument("--k-max", type=_count, required=True)
    p.add_argument("--tail-offset", type=int, default=0)

    # spot checks against the brute-force reference; not listed in --help
    p = sub.add_parser("oracle", parents=[common])
    p.add_argument("--op", choices=["crossing", "mean", "selfcheck"], required=True)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--level", type=_positive, default=1.0)
    p.add_argument("--T", type=_positive, default=1e3)
    p.add_argument("--grid-step", type=_positive, default=1e-5)
    p.add_argument("--max-span", type=_positive, default=1e3)
    p.add_argument("--cases", type=_count, default=20)
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]
    return parser


def _config(args, **extra) -> dict:
    cfg = {
        "command": args.command,
        "stimulus": args.stimulus,
        "root_tolerance": args.tol,
        "search_horizon": args.horizon,
        "allow_unknown": args.allow_unknown,
        "seed": args.seed,
    }
    for key in ("t0", "n", "lo", "hi", "step", "epsilon", "tau_lo", "tau_hi", "tau_step",
                "target", "approximant", "k_max", "tail_offset", "op", "t", "level", "T",
                "grid_step", "max_span", "cases", "no_refine"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    cfg.update(extra)
    return cfg


def _engine(args, stimulus=None) -> FiringEngine:
    return FiringEngine(stimulus if stimulus is not None else load_stimulus(args.stimulus),
                        root_tolerance=args.tol, search_horizon=args.horizon,
                        allow_unknown=args.allow_unknown)


def _window(args) -> Window:
    return Window(args.lo, args.hi, args.step)


def _emit(args, text: str) -> None:
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _document(args, default: str, result, csv_writer=None) -> str:
    cfg = _config(args)
    fmt = args.format or default
    if fmt == "json":
        return serialize.json_document(cfg, result)
    if csv_writer is not None:
        return csv_writer(result, cfg)
    return serialize.record_csv(serialize.to_plain(result), cfg)


# -- commands -----------------------------------------------------------------


def _cmd_check(args) -> int:
    f = load_stimulus(args.stimulus)
    verdict = check_well_defined(f)
    result = {"verdict": verdict.value, "mean": mean(f),
              "certified_lower_bound": certified_lower_bound(f), "sup_bound": sup_bound(f)}
    _emit(args, _document(args, "json", result))
    if verdict is Verdict.UNDEFINED:
        print("firingmap: the firing map is undefined for this stimulus "
              "(limsup of the integral of f is finite)", file=sys.stderr)
        return EXIT_UNDEFINED
    return EXIT_OK


def _cmd_spikes(args) -> int:
    train = _engine(args).spike_train(args.t0, args.n)
    _emit(args, _document(args, "csv", train, serialize.spike_train_csv))
    if train.truncated:
        print(f"firingmap: spike train truncated after {len(train)} of {args.n} spikes "
              f"(horizon {args.horizon:g})", file=sys.stderr)
        return EXIT_NO_FIRING
    return EXIT_OK


def _cmd_rate(args) -> int:
    _emit(args, _document(args, "json", _engine(args).firing_rate(args.t0, args.n)))
    return EXIT_OK


def _cmd_displacement(args) -> int:
    profile = _engine(args).displacement(_window(args))
    _emit(args, _document(args, "csv", profile, serialize.displacement_csv))
    return EXIT_OK


def _cmd_discont(args) -> int:
    report = discontinuities(_engine(args), _window(args))
    _emit(args, _document(args, "json", report))
    return EXIT_OK


def _cmd_ap_scan(args) -> int:
    w = _window(args)
    rng = (args.tau_lo, args.tau_hi)
    refine = not args.no_refine
    if args.target == "displacement":
        scan = scan_displacement_almost_periods(_engine(args), args.epsilon, rng, args.tau_step,
                                                w, refine)
    else:
        f = load_stimulus(args.stimulus)
        fn = scan_sup_almost_periods if args.target == "stimulus-sup" \
            else scan_stepanov_almost_periods
        scan = fn(f, args.epsilon, rng, args.tau_step, w, refine)
    _emit(args, _document(args, "csv", scan, serialize.scan_csv))
    return EXIT_OK


def _cmd_verify_ap(args) -> int:
    report = verify_displacement_theorem(_engine(args), args.epsilon, (args.tau_lo, args.tau_hi),
                                         args.tau_step, _window(args), not args.no_refine)
    _emit(args, _document(args, "json", report))
    return EXIT_OK


def _cmd_approx_compare(args) -> int:
    report = compare_with_periodic_approximant(_engine(args),
                                               _engine(args, load_stimulus(args.approximant)),
                                               args.epsilon, _window(args))
    _emit(args, _document(args, "json", report))
    return EXIT_OK


def _cmd_isi(args) -> int:
    train = _engine(args).spike_train(args.t0, args.n)
    if train.truncated:
        print(f"firingmap: spike train truncated after {len(train)} of {args.n} spikes",
              file=sys.stderr)
        return EXIT_NO_FIRING
    eta = train.intervals()
    shifts = sequence_almost_periods(eta, args.epsilon, (1, args.k_max), args.tail_offset)
    result = {"intervals": eta, "accepted_shifts": shifts}
    _emit(args, _document(args, "json", result))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    cfg = OracleConfig(args.grid_step, args.max_span)
    if args.op == "selfcheck":
        rng = np.random.default_rng(args.seed)
        rows = []
        for _ in range(args.cases):
            f = random_stimulus(rng)
            t0 = float(rng.uniform(-5, 5))
            engine = _engine(args, f)
            rows.append({"t0": t0, "phi": engine.phi(t0),
                         "oracle": brute_first_crossing(f, t0, 1.0, cfg)})
        for row in rows:
            row["difference"] = abs(row["phi"] - row["oracle"])
        result = {"cases": rows, "max_difference": max(r["difference"] for r in rows)}
    else:
        f = load_stimulus(args.stimulus)
        if args.op == "crossing":
            result = {"crossing": brute_first_crossing(f, args.t, args.level, cfg)}
        else:
            result = {"mean": brute_mean(f, args.T, cfg)}
    _emit(args, _document(args, "json", result))
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "spikes": _cmd_spikes,
    "rate": _cmd_rate,
    "displacement": _cmd_displacement,
    "discont": _cmd_discont,
    "ap-scan": _cmd_ap_scan,
    "verify-ap": _cmd_verify_ap,
    "approx-compare": _cmd_approx_compare,
    "isi": _cmd_isi,
    "oracle": _cmd_oracle,
}


def run(argv=None) -> int:
    """Run one command; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except UndefinedFiringMap as exc:
        print(f"firingmap: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except (NoFiringWithinHorizon, NoCrossingWithinSpan) as exc:
        print(f"firingmap: {exc}", file=sys.stderr)
        return EXIT_NO_FIRING
    except StimulusParseError as exc:
        print(f"firingmap: {args.stimulus}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (UnsupportedStimulus, CannotCertifyPositivity, ValueError, OSError) as exc:
        print(f"firingmap: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())
