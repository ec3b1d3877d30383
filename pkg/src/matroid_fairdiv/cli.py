"""Command-line front end.

Exit codes: 0 success, 1 unreadable input, 2 invalid instance or rule,
3 over an enumeration budget, 4 a check ran and failed (solver/oracle
mismatch, audit violation, counterexample not reproduced).
"""
from __future__ import annotations

import argparse
import json
import platform
import sys
from pathlib import Path

from . import __version__
from .audits import SPACES, GeneratorConfig, audit_sweep, run_counterexamples
from .errors import CapacityError, FairDivError
from .exchange import build as build_graph
from .formats import allocation_to_json, instance_from_json, parse_rule
from .oracle import DEFAULT_BUDGET, brute_force_mnw, brute_force_opt
from .solver import solve
from .valuations import MATROID_KINDS, MAX_VALIDATION_GOODS, validate_matroid_rank, validate_restricted_additive

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_CAPACITY, EXIT_FAILED = 0, 1, 2, 3, 4


class _IOFailure(Exception):
    pass


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise _IOFailure(f"{path} is not valid JSON: {exc}") from None


def _emit(args, payload):
    if getattr(args, "meta", False):
        import numpy
        payload = dict(payload, meta={"package": __version__, "python": platform.python_version(),
                                      "numpy": numpy.__version__})
    text = json.dumps(payload, indent=2) + "\n"
    if getattr(args, "out", None):
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise _IOFailure(f"cannot write {args.out}: {exc.strerror or exc}") from None
    else:
        sys.stdout.write(text)


def _load(args):
    inst = instance_from_json(_read_json(args.instance))
    return inst, parse_rule(args.rule, inst.m)


# -- subcommands -----------------------------------------------------------------

def cmd_solve(args) -> int:
    inst, rule = _load(args)
    alloc, trace = solve(inst, rule)
    if args.trace:
        lines = "".join(json.dumps(it.to_json()) + "\n" for it in trace)
        if args.trace == "-":
            sys.stdout.write(lines)
        else:
            Path(args.trace).write_text(lines)
    payload = {"rule": rule.to_spec(), "allocation": allocation_to_json(alloc, inst.goods),
               "utilities": list(alloc.sizes())}
    if args.graph:
        payload["exchange_graph"] = build_graph(inst, alloc).to_json()
    _emit(args, payload)
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst, rule = _load(args)
    if args.mnw:
        _emit(args, brute_force_mnw(inst, args.budget).to_json())
    else:
        res = brute_force_opt(inst, rule, args.budget)
        _emit(args, dict(res.to_json(), rule=rule.to_spec()))
    return EXIT_OK


def cmd_verify(args) -> int:
    inst, rule = _load(args)
    res = brute_force_opt(inst, rule, args.budget)     # budget first: fail fast on oversized input
    alloc, _ = solve(inst, rule)
    ours = list(alloc.sizes())
    same = ours == list(res.vector)
    payload = {"rule": rule.to_spec(), "solver": ours, "oracle": list(res.vector), "equal": same}
    if not same:
        payload["diff"] = [{"agent": i + 1, "solver": a, "oracle": b}
                           for i, (a, b) in enumerate(zip(ours, res.vector)) if a != b]
    _emit(args, payload)
    return EXIT_OK if same else EXIT_FAILED


def cmd_audit(args) -> int:
    obj = _read_json(args.config) if args.config else {}
    if args.seed is not None:
        obj["seed"] = args.seed
    if args.rule is not None:
        obj["rule"] = parse_rule(args.rule).to_spec()
    cfg = GeneratorConfig.from_json(obj)
    count = args.count if args.count is not None else int(obj.get("count", 100))
    engine = args.engine or obj.get("engine", "solver")
    space = args.space or obj.get("space", "matroid_all")
    verdict = audit_sweep(args.kind, cfg, count, engine, space)
    _emit(args, dict(verdict.to_json(), config=cfg.to_json(), engine=engine))
    return EXIT_OK if verdict.passed else EXIT_FAILED


def cmd_counterexamples(args) -> int:
    reports = run_counterexamples()
    ok = all(r.reproduced for r in reports)
    _emit(args, {"reproduced": ok, "propositions": [r.to_json() for r in reports]})
    return EXIT_OK if ok else EXIT_FAILED


def cmd_validate(args) -> int:
    inst = instance_from_json(_read_json(args.instance))
    agents, ok = [], True
    for agent in inst.agents:
        v = agent.valuation
        entry = {"agent": agent.index, "kind": v.kind}
        if v.kind in MATROID_KINDS and inst.m > MAX_VALIDATION_GOODS:
            entry.update(matroid_rank=True, checked="by construction")
        else:
            report = validate_matroid_rank(v)
            entry.update(matroid_rank=report.valid, violations=[x.to_json() for x in report.violations])
            ok = ok and report.valid
        agents.append(entry)
    payload = {"agents": agents, "matroid_rank": ok}
    if inst.n and all(v.kind == "additive" for v in inst.valuations):
        restricted, good = validate_restricted_additive(inst.valuations)
        payload["restricted_additive"] = {"holds": restricted, "good": good}
    _emit(args, payload)
    return EXIT_OK if ok else EXIT_INVALID


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matroid-fairdiv", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, rule=True, instance=True):
        if instance:
            sp.add_argument("instance", help="instance JSON file")
        if rule:
            sp.add_argument("--rule", default="mwnw",
                            help="mwnw, mwhw, inline JSON such as '{\"rule\":\"custom\",\"f\":[0,1,2]}', or @file")
        sp.add_argument("--out", help="write the result here instead of stdout")
        sp.add_argument("--meta", action="store_true", help="add package and interpreter versions to the output")

    sp = sub.add_parser("solve", help="compute an allocation with the incremental solver")
    common(sp)
    sp.add_argument("--trace", metavar="PATH", help="write one JSON line per added good ('-' for stdout)")
    sp.add_argument("--graph", action="store_true", help="include the final exchange graph as an edge list")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("oracle", help="exhaustive optimum")
    common(sp)
    sp.add_argument("--mnw", action="store_true", help="list every maximum Nash welfare allocation instead")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("verify", help="compare solver and oracle utility vectors")
    common(sp)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("audit", help="randomised monotonicity or group-manipulation audit")
    sp.add_argument("kind", choices=["resource", "population", "weight", "gsp"])
    sp.add_argument("config", nargs="?", help="generator config JSON (seed, n, m, kinds, weights, rule, count)")
    sp.add_argument("--rule", default=None)
    sp.add_argument("--engine", choices=["solver", "oracle"], default=None)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--count", type=int, default=None)
    sp.add_argument("--space", choices=SPACES, default=None, help="misreport catalog for gsp")
    sp.add_argument("--out")
    sp.add_argument("--meta", action="store_true")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("counterexamples", help="replay the maximum Nash welfare counterexamples")
    common(sp, rule=False, instance=False)
    sp.set_defaults(func=cmd_counterexamples)

    sp = sub.add_parser("validate", help="check every valuation against the matroid-rank axioms")
    common(sp, rule=False)
    sp.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (_IOFailure, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CapacityError as exc:
        bound = f" (bound {exc.bound})" if exc.bound is not None else ""
        print(f"error: {exc}{bound}", file=sys.stderr)
        return EXIT_CAPACITY
    except FairDivError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
