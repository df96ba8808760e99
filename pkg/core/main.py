#!/usr/bin/env python3
"""
Orbit IQ command line

Computes fundamental groups of function orbits from decomposition files and
runs the exact verification suites behind them.

Usage:
    python -m core.main [global options] <command> [arguments]

Commands:
    pi1 FILE                          π₁O(f) of a Möbius or surface decomposition
    validate FILE                     full validation report of a decomposition
    bieberbach FILE                   stabilizer 3x3 diagram (disks must carry delta)
    verify wreath --g G --m M         θ characterization of G wr_m Z
    verify twisted --g G --h H --gamma GAMMA --m M
    verify 3x3 --b Zn --a kZn --l lZn 3x3 diagram of two subgroups of Zn
    verify mul-oracle [--samples N]   closed-form twisted law against the step oracle
    verify cw [--count N]             Lefschetz / KerSAct / sphere lift on random models
    poly squarefree|milnor|equivalences POLY
    poly certificate [x|y] POLY
    group mul|inv|order EXPR ELEMENT...
    group quotient EXPR [--leaf-modulus K]

Options:
    --format {text,json,latex}   Output format (default: text)
    --seed N                     Seed for randomized checks (default: ORBITS_SEED)
    --depth N                    Period multiplier for finite quotients (default: ORBITS_QUOTIENT_LEVEL)
    --cap N                      Maximal group order (default: ORBITS_ORDER_CAP)
    --verbose                    Log at DEBUG

Exit codes: 0 success, 1 usage or I/O error, 2 validation or verification failure.
"""

import argparse
import json
import logging
import sys

from pydantic import ValidationError

from core import config
from core.orchestrator import (
    EXIT_FAILED,
    EXIT_USAGE,
    CommandOutcome,
    RunConfig,
    run_bieberbach,
    run_group,
    run_pi1,
    run_poly,
    run_validate,
    run_verify,
)

logger = logging.getLogger("orbits")

VERIFY_TARGETS = ("wreath", "twisted", "3x3", "mul-oracle", "cw")
POLY_ACTIONS = ("squarefree", "certificate", "milnor", "equivalences")
GROUP_ACTIONS = ("mul", "inv", "order", "quotient")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so usage errors map to exit code 1."""

    def error(self, message):
        raise UsageError(message)


def setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="[%(asctime)s] [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="orbits",
        description="Orbit IQ: exact π₁ of function orbits and their verification suites",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--format", dest="output_format", choices=("text", "json", "latex"), default="text",
                        help="Output format")
    parser.add_argument("--seed", type=int, default=config.SEED, help="Seed for randomized checks")
    parser.add_argument("--depth", type=int, default=config.QUOTIENT_LEVEL, help="Period multiplier N for finite quotients")
    parser.add_argument("--cap", type=int, default=config.ORDER_CAP, help="Maximal group order")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG")

    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, text in (
        ("pi1", "Fundamental group of the orbit"),
        ("validate", "Validation report of a decomposition"),
        ("bieberbach", "Stabilizer 3x3 diagram"),
    ):
        sub = commands.add_parser(name, help=text)
        sub.add_argument("file", help="Decomposition JSON file")

    verify = commands.add_parser("verify", help="Run a verification suite")
    verify.add_argument("target", choices=VERIFY_TARGETS)
    verify.add_argument("--g", help="Group G (wreath, twisted)")
    verify.add_argument("--h", help="Group H (twisted)")
    verify.add_argument("--gamma", default="id", help="Involution of H (twisted)")
    verify.add_argument("--m", type=int, help="Multiplicity m (wreath, twisted)")
    verify.add_argument("--b", help="Ambient cyclic group Zn (3x3)")
    verify.add_argument("--a", help="Subgroup kZn (3x3)")
    verify.add_argument("--l", help="Subgroup kZn (3x3)")
    verify.add_argument("--samples", type=int, help="Random pairs per group (mul-oracle)")
    verify.add_argument("--count", type=int, default=20, help="Random decompositions (cw)")

    poly = commands.add_parser("poly", help="Homogeneous polynomial tools")
    poly.add_argument("action", choices=POLY_ACTIONS)
    poly.add_argument("args", nargs="+", help="[x|y] for certificate, then the polynomial")

    group = commands.add_parser("group", help="Element arithmetic and finite quotients")
    group.add_argument("action", choices=GROUP_ACTIONS)
    group.add_argument("expression", help="Group expression, e.g. 'TwWr(Z2, Z3, id, 1)'")
    group.add_argument("elements", nargs="*", help="Elements as JSON arrays")
    group.add_argument("--leaf-modulus", type=int, help="Reduce bare Z leaves mod K (quotient)")
    return parser


def _verify_params(args) -> dict:
    target = args.target
    if target in ("wreath", "twisted"):
        required = ["g", "m"] + (["h"] if target == "twisted" else [])
    elif target == "3x3":
        required = ["b", "a", "l"]
    else:
        required = []
    missing = [name for name in required if getattr(args, name) is None]
    if missing:
        raise UsageError(f"verify {target} needs " + ", ".join(f"--{name}" for name in missing))
    if args.m is not None and args.m < 1:
        raise UsageError("--m must be at least 1")
    return {
        "g": args.g, "h": args.h, "gamma": args.gamma, "m": args.m,
        "b": args.b, "a": args.a, "l": args.l,
        "samples": args.samples, "count": args.count,
    }


def _poly_args(args):
    if args.action == "certificate":
        if len(args.args) == 2 and args.args[0] in ("x", "y"):
            return args.args[0], args.args[1]
        if len(args.args) == 1:
            return "x", args.args[0]
        raise UsageError("poly certificate takes [x|y] POLY")
    if len(args.args) != 1:
        raise UsageError(f"poly {args.action} takes one polynomial")
    return "x", args.args[0]


def dispatch(args, cfg: RunConfig) -> CommandOutcome:
    """Route parsed arguments to their runner."""
    if args.command == "pi1":
        return run_pi1(cfg, args.file)
    if args.command == "validate":
        return run_validate(cfg, args.file)
    if args.command == "bieberbach":
        return run_bieberbach(cfg, args.file)
    if args.command == "verify":
        return run_verify(cfg, args.target, _verify_params(args))
    if args.command == "poly":
        variable, text = _poly_args(args)
        return run_poly(cfg, args.action, text, variable)
    needed = {"mul": 2, "inv": 1, "order": 1, "quotient": 0}[args.action]
    if len(args.elements) != needed:
        raise UsageError(f"group {args.action} takes {needed} element(s)")
    return run_group(cfg, args.action, args.expression, args.elements, args.leaf_modulus)


def run(argv=None) -> int:
    """Parse argv, run the command, print its result; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        setup_logging(args.verbose)
        cfg = RunConfig(
            command=args.command,
            inputs=[getattr(args, "file", "")] if hasattr(args, "file") else [],
            output_format=args.output_format,
            depth=args.depth,
            seed=args.seed,
            cap=args.cap,
        )
        outcome = dispatch(args, cfg)
    except (UsageError, ValidationError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_USAGE

    print(outcome.render(cfg.output_format))
    if outcome.exit_code == EXIT_FAILED:
        logger.warning("%s: failed", outcome.command)
    return outcome.exit_code


def main():
    """Main entry point"""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print("\n[INTERRUPTED] cancelled by user", file=sys.stderr)
        sys.exit(130)
    except Exception as e:
        print(f"[FATAL] {e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    main()
