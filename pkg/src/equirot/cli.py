"""``equirot <command> [options]``: run a seeded verification campaign and emit its report.

Exit status is 0 when every sample passes, 3 when some fail, 2 on
configuration errors and 1 when the report cannot be written.
"""

from __future__ import annotations

import argparse
import sys

from .campaign import COMMANDS, CampaignConfig, emit_report, run_campaign
from .errors import ConfigError

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_FAILURES = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="equirot", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--l0", type=float, help="larger Schmidt coefficient (l1 derived if omitted)")
    parser.add_argument("--l1", type=float, help="smaller Schmidt coefficient")
    parser.add_argument("--w1", help="operator: 'r0,rx,ry,rz', 'preset:not|sx|sy|sz|id' or 'haar'")
    parser.add_argument("--w2", help="second-party operator (twosided)")
    parser.add_argument("--p", type=float, help="channel mixing parameter")
    parser.add_argument("--kind", choices=("depolarizing", "bitflip"), help="channel kind")
    parser.add_argument("--family", choices=("matched", "symmetric"), help="constrained swap family")
    parser.add_argument("--dim", type=int, help="local dimension for dxd")
    parser.add_argument("--dvals", help="comma-separated Schmidt values for dxd (default: maximal)")
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--seed", type=_u64, default=0)
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--constrained", default="true", help="sample from the solution family (true/false)")
    parser.add_argument("--format", dest="fmt", choices=("json", "csv-row"), default="json")
    parser.add_argument("--out", help="report path (default: standard output)")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        params = {
            key: getattr(args, key)
            for key in ("l0", "l1", "w1", "w2", "p", "kind", "family", "dim", "dvals", "constrained")
        }
        cfg = CampaignConfig(
            command=args.command,
            params=params,
            samples=args.samples,
            seed=args.seed,
            tol=args.tol,
            out=args.out,
        )
        report = run_campaign(cfg)
        payload = emit_report(report, args.fmt)
    except ConfigError as exc:
        print(f"equirot: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if cfg.out is None or cfg.out == "-":
            sys.stdout.buffer.write(payload)
            sys.stdout.flush()
        else:
            with open(cfg.out, "wb") as fh:
                fh.write(payload)
    except OSError as exc:
        print(f"equirot: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO

    return EXIT_OK if report.n_pass == report.n_samples else EXIT_FAILURES


if __name__ == "__main__":
    sys.exit(main())
