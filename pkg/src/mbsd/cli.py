"""Command-line front end.

Exit status: 0 realizable / accepted / true, 1 unrealizable / rejected /
false, 2 usage or input error, 3 resource cap exceeded.  JSON goes to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import automata, domains, ltlf, oracle, qbf
from .mapping import GENERAL, MappingError
from .reductions import (
    DEFAULT_K_CAP, MODES, InstanceError, MbsdInstance, MbsdStrategy, NotTreeLikeError,
    SimulationError, StrategyError, TargetCapError, VerificationBudgetExceeded,
    dumps_instance, load_instance, simulate, solve_mbsd, verify_mbsd,
)

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

INPUT_ERRORS = (InstanceError, domains.DomainError, MappingError, ltlf.LtlfSyntaxError,
                ltlf.UnknownAtomError, qbf.QbfError, StrategyError, SimulationError,
                NotTreeLikeError, OSError, json.JSONDecodeError, ValueError, KeyError)
CAP_ERRORS = (TargetCapError, automata.PropositionCapError, automata.StateExplosionError,
              VerificationBudgetExceeded, oracle.OracleCapError)


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        self.code = code
        super().__init__(message)


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def _guard(flag: str, path: str, fn, *args):
    """Run a loader, naming the flag and file in any error."""
    try:
        return fn(*args)
    except CAP_ERRORS as exc:
        raise CliError(f"{flag} {path}: {exc}", EXIT_CAP) from exc
    except INPUT_ERRORS as exc:
        raise CliError(f"{flag} {path}: {exc}") from exc


def _load_strategy(path: str) -> MbsdStrategy:
    with open(path, encoding="utf-8") as fh:
        return MbsdStrategy.from_json(json.load(fh))


# --------------------------------------------------------------------------
# subcommands

def cmd_solve(args) -> int:
    p = _guard("--instance", args.instance, load_instance, args.instance)
    res = _guard("--instance", args.instance, solve_mbsd, p, args.mode, args.k_cap)
    if args.strategy_out and res.strategy is not None:
        _write(args.strategy_out, res.strategy.dumps())
    _emit(res.to_json(with_time=args.stats))
    return EXIT_TRUE if res.realizable else EXIT_FALSE


def cmd_verify(args) -> int:
    p = _guard("--instance", args.instance, load_instance, args.instance)
    s = _guard("--strategy", args.strategy, _load_strategy, args.strategy)
    ok = _guard("--strategy", args.strategy, verify_mbsd, p, s, args.budget)
    _emit({"verified": ok})
    return EXIT_TRUE if ok else EXIT_FALSE


def _load_script(path: str, p: MbsdInstance) -> list[int]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict):
        doc = doc.get("moves")
    if not isinstance(doc, list):
        raise ValueError("script must be a JSON list of D_A state ids")
    index = {x: i for i, x in enumerate(p.domain_a.ids)}
    out = []
    for step, x in enumerate(doc, start=1):
        if x not in index:
            raise SimulationError(f"unknown D_A state {x!r}", step)
        out.append(index[x])
    return out


def cmd_simulate(args) -> int:
    p = _guard("--instance", args.instance, load_instance, args.instance)
    s = _guard("--strategy", args.strategy, _load_strategy, args.strategy)
    if args.script:
        adversary = _guard("--script", args.script, _load_script, args.script, p)
        flag, where = "--script", args.script
    else:
        if args.seed is None:
            raise CliError("simulate needs --script or --seed")
        adversary, flag, where = args.seed, "--seed", str(args.seed)
    res = _guard(flag, where, simulate, p, s, adversary, args.steps)
    _emit(res.to_json(p))
    return EXIT_TRUE if res.verdict else EXIT_FALSE


def cmd_ltlf2dfa(args) -> int:
    props = [x.strip() for x in args.props.split(",") if x.strip()] if args.props else None
    f = _guard("--formula", repr(args.formula), ltlf.parse, args.formula, props)
    if props is None:
        props = ltlf.propositions(f)
    d = _guard("--props", repr(args.props), automata.build_dfa, f, sorted(set(props)))
    if args.minimize:
        d = automata.minimize(d)
    if args.dot:
        _write(args.dot, automata.to_dot(d))
    _emit(automata.to_json(d))
    return EXIT_TRUE


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_gen_qbf(args) -> int:
    text = _guard("--input", args.input, _read, args.input)
    q = _guard("--input", args.input, qbf.parse_qdimacs, text)
    if args.to_cnf1:
        q = qbf.cnf_to_cnf1(q)
    p = _guard("--input", args.input, qbf.qbf1_to_mbsd, q)
    _write(args.out, dumps_instance(p))
    _emit({"out": args.out, "variables": q.n_vars, "conjuncts": p.mapping.k,
           "states_a": p.domain_a.n_states, "states_b": p.domain_b.n_states})
    return EXIT_TRUE


def _load_walls(path: str) -> list[tuple[int, int]]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return [tuple(map(int, c)) for c in doc]


def cmd_gen_pacman(args) -> int:
    walls = _guard("--walls", args.walls, _load_walls, args.walls) if args.walls else ()
    g, pm, m = _guard("--n", str(args.n), domains.gen_pacman, args.n, args.ghosts, walls,
                      args.seed, args.max_states)
    prefix = args.out_prefix
    ga, pa = prefix + "_ghosts.json", prefix + "_pacman.json"
    _write(ga, domains.dumps(g))
    _write(pa, domains.dumps(pm))
    inst = {"domain_a": os.path.basename(ga), "domain_b": os.path.basename(pa),
            "mapping": m.to_json(), "stop_agent": "A"}
    _write(prefix + ".json", json.dumps(inst, indent=1, sort_keys=True))
    _emit({"instance": prefix + ".json", "ghost_states": g.n_states,
           "pacman_states": pm.n_states, "conjuncts": m.k})
    return EXIT_TRUE


def cmd_gen_random(args) -> int:
    d = domains.gen_random(args.states, args.branching, args.props, args.tree, args.seed, args.prefix)
    _write(args.out, domains.dumps(d))
    _emit({"out": args.out, "states": d.n_states, "tree_like": domains.is_tree_like(d)})
    return EXIT_TRUE


def cmd_oracle(args) -> int:
    p = _guard("--instance", args.instance, load_instance, args.instance)
    dfa_states = None
    if args.horizon is None and p.kind == GENERAL:
        props = sorted(ltlf.propositions(p.formula))
        d = _guard("--instance", args.instance, automata.build_dfa, p.formula, props)
        dfa_states = automata.minimize(d).n_states
    ok = _guard("--instance", args.instance, oracle.oracle_mbsd, p, args.horizon, dfa_states)
    _emit({"realizable": ok})
    return EXIT_TRUE if ok else EXIT_FALSE


# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mbsd", description="Synthesis of strategies that mimic behaviours across domains.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide an instance and optionally save a strategy")
    s.add_argument("--instance", required=True)
    s.add_argument("--mode", default="auto", choices=MODES)
    s.add_argument("--strategy-out")
    s.add_argument("--stats", action="store_true", help="also report wall-clock time")
    s.add_argument("--k-cap", type=int, default=DEFAULT_K_CAP)
    s.set_defaults(fn=cmd_solve)

    s = sub.add_parser("verify", help="check a strategy against every behaviour of A")
    s.add_argument("--instance", required=True)
    s.add_argument("--strategy", required=True)
    s.add_argument("--budget", type=int, default=10 ** 6)
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("simulate", help="run a strategy against a scripted or random adversary")
    s.add_argument("--instance", required=True)
    s.add_argument("--strategy", required=True)
    s.add_argument("--script")
    s.add_argument("--seed", type=int)
    s.add_argument("--steps", type=int, default=30)
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("ltlf2dfa", help="translate a formula into an explicit automaton")
    s.add_argument("--formula", required=True)
    s.add_argument("--props", default="")
    s.add_argument("--minimize", action="store_true")
    s.add_argument("--dot")
    s.set_defaults(fn=cmd_ltlf2dfa)

    g = sub.add_parser("gen", help="generate instances").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    s = g.add_parser("qbf")
    s.add_argument("--input", required=True)
    s.add_argument("--to-cnf1", action="store_true")
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_gen_qbf)
    s = g.add_parser("pacman")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--ghosts", type=int, default=1)
    s.add_argument("--walls")
    s.add_argument("--seed", type=int)
    s.add_argument("--max-states", type=int, default=domains.DEFAULT_STATE_CEILING)
    s.add_argument("--out-prefix", required=True)
    s.set_defaults(fn=cmd_gen_pacman)
    s = g.add_parser("random")
    s.add_argument("--states", type=int, required=True)
    s.add_argument("--props", type=int, required=True)
    s.add_argument("--branching", type=int, default=2)
    s.add_argument("--tree", action="store_true")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--prefix", default="p")
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_gen_random)

    s = sub.add_parser("oracle", help="decide an instance by brute-force history search")
    s.add_argument("--instance", required=True)
    s.add_argument("--horizon", type=int)
    s.set_defaults(fn=cmd_oracle)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except CliError as exc:
        print(f"mbsd: {exc}", file=sys.stderr)
        return exc.code
    except CAP_ERRORS as exc:
        print(f"mbsd: {exc}", file=sys.stderr)
        return EXIT_CAP
    except INPUT_ERRORS as exc:
        print(f"mbsd: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
