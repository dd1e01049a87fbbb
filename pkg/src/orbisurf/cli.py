"""Command line interface.

Exit status: 0 for any computed verdict (negative ones included), 2 for
input errors, 64 for an unknown command.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import discrepancy, mmp
from .contraction import artin_test, classify_negative_curve
from .errors import OrbisurfError
from .fixtures import FIXTURES, fixture
from .io import ProblemBundle, boundary_to_json, config_to_json, dumps, load_bundle
from .lattice import format_rational
from .surface import validate

COMMANDS = ("validate", "classify-curve", "artin-test", "discrep", "b-discrep", "classify-pair", "mmp-run")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNKNOWN_COMMAND = 64


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbisurf", description="Exact computations on orbifold surface pairs.")
    p.add_argument("command", nargs="?", help="one of: " + ", ".join(COMMANDS))
    p.add_argument("--fixtures", action="store_true", help="list built-in configurations and exit")
    p.add_argument("--surface", help="surface configuration file (JSON)")
    p.add_argument("--boundary", help="boundary divisor file (JSON)")
    p.add_argument("--bdiv", help="b-divisor ramification file (JSON)")
    p.add_argument("--fixture", help="use a built-in configuration instead of --surface/--boundary")
    p.add_argument("--curve", help="curve label for classify-curve")
    p.add_argument("--support", help="comma-separated curves for artin-test (default: all)")
    p.add_argument("--depth", type=int, default=discrepancy.DEFAULT_DEPTH)
    p.add_argument("--epsilon", default="1/2")
    p.add_argument("--bound-multiplier", type=int, default=2)
    p.add_argument("--max-steps", type=int, default=50)
    p.add_argument("--tower", action="store_true", help="discrep/b-discrep: emit the tower as JSONL")
    return p


def _bundle(args) -> ProblemBundle:
    kw = dict(
        depth=args.depth,
        epsilon=args.epsilon,
        bound_multiplier=args.bound_multiplier,
        max_steps=args.max_steps,
        config_invariants=args.command != "validate",
    )
    if args.fixture:
        try:
            config, delta = fixture(args.fixture)
        except KeyError as exc:
            raise OrbisurfError(str(exc.args[0])) from None
        return load_bundle(
            config_to_json(config),
            boundary_to_json(delta),
            args.bdiv,
            **kw,
        )
    if not args.surface:
        raise OrbisurfError("--surface or --fixture is required")
    return load_bundle(args.surface, args.boundary, args.bdiv, **kw)


def run_command(bundle: ProblemBundle, command: str, *, curve: Optional[str] = None, support=None, tower: bool = False) -> list[dict]:
    """Run one command; returns the JSON records to print (one per output line for JSONL)."""
    config, delta = bundle.config, bundle.boundary
    if command == "validate":
        return [validate(config).to_json()]
    if command == "classify-curve":
        if not curve:
            raise OrbisurfError("classify-curve needs --curve")
        return [classify_negative_curve(config, delta, curve).to_json()]
    if command == "artin-test":
        return [artin_test(config, support or config.curves, bundle.bound_multiplier).to_json()]
    if command == "discrep":
        nodes = discrepancy.tower_discrepancies(config, delta, bundle.depth)
        if tower:
            return [n.to_json() for n in nodes]
        inf = discrepancy.infimum(n.a_disc for n in nodes)
        return [{
            "inf": format_rational(inf),
            "depth": bundle.depth,
            "nodes": len(nodes),
            "snc_closed_form": format_rational(discrepancy.snc_closed_form(config, delta)),
        }]
    if command == "b-discrep":
        if bundle.bdiv is None:
            raise OrbisurfError("b-discrep needs --bdiv")
        nodes = discrepancy.b_tower(config, bundle.bdiv, bundle.depth)
        if tower:
            return [n.to_json() for n in nodes]
        out = discrepancy.classify_b_pair(config, bundle.bdiv, bundle.depth).to_json()
        out["b_orbifold"] = bundle.bdiv.is_b_orbifold
        return [out]
    if command == "classify-pair":
        return [discrepancy.classify_pair(config, delta, bundle.epsilon, bundle.depth).to_json()]
    if command == "mmp-run":
        return [step.to_json() for step in mmp.mmp_run(config, delta, bundle.max_steps)]
    raise ValueError(f"unknown command {command!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.fixtures:
        for name in FIXTURES:
            print(name)
        return EXIT_OK
    if args.command not in COMMANDS:
        print(f"orbisurf: unknown command {args.command!r}; expected one of {', '.join(COMMANDS)}", file=sys.stderr)
        return EXIT_UNKNOWN_COMMAND
    try:
        bundle = _bundle(args)
        support = args.support.split(",") if args.support else None
        records = run_command(bundle, args.command, curve=args.curve, support=support, tower=args.tower)
    except (OrbisurfError, KeyError) as exc:
        print(f"orbisurf: {exc}", file=sys.stderr)
        return EXIT_INPUT
    jsonl = args.command == "mmp-run" or (args.tower and args.command in ("discrep", "b-discrep"))
    if jsonl:
        for rec in records:
            sys.stdout.write(json.dumps(rec, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(dumps(records[0]))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
