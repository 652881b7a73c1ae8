"""Command-line front end: ``rmmsim <command> [options]``.

Commands: verify, convergence, phase-sweep, moments, oracle, sample.
Exit codes: 0 success, 1 a check failed, 2 usage or domain error.
"""

import argparse
import json
import sys

import numpy as np

from . import experiments, io
from .checks import CHECKS, run_checks
from .errors import CapacityError, DomainError
from .field import parse_u64, trial_stream
from .oracle import enumerate_law
from .parallel import default_threads
from .relations import parse_relation
from .sbm import SbmParams, fast_many, zeta_many

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _seed(text):
    try:
        return parse_u64(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


GLOBAL_DEFAULTS = {"seed": 0, "threads": None, "out": "-", "format": "csv"}


def _common():
    # defaults are filled in after parsing, so the flags work on either side
    # of the command name
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    p.add_argument("--seed", type=_seed, help="master seed, decimal or 0x-hex (default 0)")
    p.add_argument("--threads", type=int, help="worker threads (default: logical cores)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    return p


def build_parser():
    parser = _Parser(prog="rmmsim", description=__doc__.splitlines()[0], parents=[_common()])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()

    p = sub.add_parser("verify", parents=[common], help="run the property suite")
    p.add_argument("--only", action="append", default=[], help="run only these checks (repeatable or comma list)")
    p.add_argument("--list", action="store_true", help="list check names and exit")

    p = sub.add_parser("convergence", parents=[common], help="KS distances of rescaled largest components")
    p.add_argument("--n-list", type=_int_list, default=[100, 400, 1600])
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--u", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--mode", choices=("fast", "coupled"), default="fast")

    p = sub.add_parser("phase-sweep", parents=[common], help="largest component across a regime schedule")
    p.add_argument("--regime", choices=experiments.REGIMES, required=True)
    p.add_argument("--n-list", type=_int_list, default=[200, 800, 3200])
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--M", type=float, default=1.0, help="threshold on n^(-2/3) C")
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--u", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.5, help="supercritical intra weight")
    p.add_argument("--d", type=float, default=1.0, help="supercritical inter weight")

    p = sub.add_parser("moments", parents=[common], help="fourth moments of the coalescent")
    p.add_argument("--x", type=_float_list, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--trials", type=int, default=20000)

    p = sub.add_parser("oracle", parents=[common], help="exact law by enumeration")
    p.add_argument("--x", type=_float_list, required=True)
    p.add_argument("--relation", default="maximal")
    p.add_argument("--t", type=float, required=True)

    p = sub.add_parser("sample", parents=[common], help="sample the block model")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--t", type=float)
    p.add_argument("--u", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--mode", choices=("fast", "coupled"), default="fast")
    return parser


def _cmd_verify(args):
    if args.list:
        return [{"check": name} for name in CHECKS], EXIT_OK
    only = [n.strip() for item in args.only for n in item.split(",") if n.strip()]
    unknown = [n for n in only if n not in CHECKS]
    if unknown:
        raise DomainError(f"unknown checks: {', '.join(unknown)}")
    rows = run_checks(args.seed, only or None, args.threads)
    failed = [r for r in rows if not r.satisfied]
    for r in failed:
        print(f"FAILED {r.name}: lhs={r.lhs!r} rhs={r.rhs!r}", file=sys.stderr)
    return [r.as_dict() for r in rows], EXIT_FAIL if failed else EXIT_OK


def _cmd_convergence(args):
    rows = experiments.convergence(args.n_list, args.classes, args.t, args.u, args.trials, args.seed, args.mode, args.threads)
    return rows, EXIT_OK


def _cmd_phase_sweep(args):
    rows = experiments.phase_sweep(
        args.regime, args.n_list, args.trials, args.seed, args.M, args.classes, args.t, args.u, args.c, args.d, args.threads
    )
    label = experiments.trend_label(rows)
    for row in rows:
        row["trend"] = label
    return rows, EXIT_OK


def _cmd_moments(args):
    return experiments.moments(args.x, args.t, args.trials, args.seed, args.threads), EXIT_OK


def _cmd_oracle(args):
    law = enumerate_law(args.x, parse_relation(args.relation), args.t)
    blob = law.to_json()
    rows = [
        {"masses": masses, "probability": prob, "checksum": blob["checksum"], "seed": args.seed, "stream_id": 0, "trials": 0}
        for masses, prob in blob["outcomes"]
    ]
    if args.format == "json":
        return blob, EXIT_OK
    return rows, EXIT_OK


def _cmd_sample(args):
    if args.trials < 1:
        raise DomainError("trials must be a positive integer")
    critical = args.t is not None or args.u is not None
    raw = args.p is not None or args.q is not None
    if critical == raw:
        raise DomainError("give either --t/--u (critical) or --p/--q (raw)")
    if critical:
        t = args.t or 0.0
        u = args.u or 0.0
        params = SbmParams.critical(args.n, args.classes, t, u)
    else:
        if args.mode == "coupled":
            raise DomainError("coupled mode needs the critical parameters --t/--u")
        params = SbmParams.raw(args.n, args.classes, args.p or 0.0, args.q or 0.0)
    scale = args.n ** (-2.0 / 3.0)
    if args.mode == "coupled":
        comps = zeta_many(args.n, args.classes, t, u, args.seed, 0, args.trials, threads=args.threads)
        copy = 0
    else:
        comps = fast_many(params, args.seed, 0, args.trials, threads=args.threads) * (scale if critical else 1.0)
        copy = 4
    rows = []
    for k, row in enumerate(comps):
        rows.append(
            {
                "trial": k,
                "largest": float(row[0]),
                "norm_sq": float(np.dot(row, row)),
                "block_count": int(np.count_nonzero(row)),
                "p": params.p,
                "q": params.q,
                "mode": args.mode,
                "trials": args.trials,
                "seed": args.seed,
                "stream_id": trial_stream(0, k, copy),
            }
        )
    return rows, EXIT_OK


COMMANDS = {
    "verify": _cmd_verify,
    "convergence": _cmd_convergence,
    "phase-sweep": _cmd_phase_sweep,
    "moments": _cmd_moments,
    "oracle": _cmd_oracle,
    "sample": _cmd_sample,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    if args.threads is None:
        args.threads = default_threads()
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        result, code = COMMANDS[args.command](args)
    except (DomainError, CapacityError, ValueError) as exc:
        print(f"rmmsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, dict):
        text = json.dumps(result, indent=1) + "\n"
    else:
        text = io.render(result, args.format)
    io.write_output(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
