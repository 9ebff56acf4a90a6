"""Command-line front end.

Subcommands: ``solve`` (winning regions), ``value`` (optimal mean-payoff
values), ``gadget`` (dump the fairness reduction arena), ``strategy``
(synthesize and print a machine), ``simulate`` (run both synthesized
machines to a lasso), ``gen`` (seeded random arena), ``oracle``
(brute-force cross-check on tiny arenas).

Exit codes: 0 success, 1 input parse/validation error, 2 internal
invariant violation (e.g. oracle disagreement), 64 usage error.  Output
depends only on the input and flags: iteration orders are fixed, so the
same invocation is byte-identical.  The fairness side is always inferred
from the arena, never passed as a flag.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arena import (
    Arena,
    ArenaError,
    Owner,
    export_dot,
    format_rational,
    parse_arena,
    parse_rational,
    serialize_arena,
    shift_and_scale,
    validate,
)
from .energy import WinRegions, solve_energy
from .fair import (
    FairnessSideError,
    FairObjectiveSpec,
    Game,
    ValueRecoveryError,
    fair_mp_optimal_values,
)
from .fair import solve as solve_fair
from .gadgets import GadgetError, GadgetKind, build_gadget
from .generate import random_arena
from .meanpayoff import optimal_values, solve_mp_threshold
from .oracle import (
    BudgetError,
    OracleError,
    oracle_fair,
    oracle_regular,
)
from .report import write_report
from .strategies import (
    EscalatingSchedule,
    StrategyError,
    finitize,
    serialize_machine,
    simulate,
    synthesize,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401 - argparse hook
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fairgames", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def game_flags(p, threshold_default="0"):
        p.add_argument("--game", choices=("mp", "energy"), default="mp")
        p.add_argument(
            "--threshold",
            default=threshold_default,
            help="mean-payoff threshold as <int> or <int>/<posint>",
        )

    solve = sub.add_parser("solve", help="winning regions of an arena file")
    game_flags(solve)
    solve.add_argument("--json", action="store_true")
    solve.add_argument("--dot", action="store_true", help="append DOT output")
    solve.add_argument("--report", metavar="DIR", help="write regions.csv and arena.png")
    solve.add_argument("arena")

    value = sub.add_parser("value", help="optimal mean-payoff values")
    value.add_argument("--json", action="store_true")
    value.add_argument("--dot", action="store_true")
    value.add_argument("--report", metavar="DIR")
    value.add_argument("arena")

    gadget = sub.add_parser("gadget", help="dump the fairness-reduction arena")
    gadget.add_argument("--game", choices=("mp", "energy"), default="mp")
    gadget.add_argument(
        "--threshold",
        default=None,
        help="shift mean-payoff weights to this threshold before reducing",
    )
    gadget.add_argument("--dot", action="store_true")
    gadget.add_argument("arena")

    strategy = sub.add_parser("strategy", help="synthesize a strategy machine")
    game_flags(strategy)
    strategy.add_argument("--player", choices=("1", "2"), required=True)
    strategy.add_argument(
        "--epsilon",
        default=None,
        help="truncation slack when the exact strategy needs unbounded memory",
    )
    strategy.add_argument("arena")

    sim = sub.add_parser("simulate", help="run synthesized machines to a lasso")
    game_flags(sim)
    sim.add_argument("--start", required=True, metavar="NODE")
    sim.add_argument("--steps", type=int, default=None, help="step budget")
    sim.add_argument("--epsilon", default=None)
    sim.add_argument("arena")

    gen = sub.add_parser("gen", help="print a seeded random arena")
    gen.add_argument("--nodes", type=int, required=True)
    gen.add_argument("--max-weight", type=int, required=True)
    gen.add_argument("--fair", choices=("p1", "p2", "none"), default="none")
    gen.add_argument("--density", type=float, default=0.35)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--dot", action="store_true")

    oracle = sub.add_parser("oracle", help="cross-check the solver on a tiny arena")
    game_flags(oracle)
    oracle.add_argument("--json", action="store_true")
    oracle.add_argument("arena")

    return parser


# -- shared helpers ------------------------------------------------------


def _load(path: str) -> Arena:
    try:
        with open(path) as handle:
            text = handle.read()
    except OSError as err:
        raise ArenaError(str(err)) from None
    a = parse_arena(text)
    violations = validate(a)
    if violations:
        raise ArenaError("; ".join(v.detail for v in violations))
    return a


def _threshold(args) -> Fraction:
    try:
        return parse_rational(args.threshold)
    except ValueError as err:
        raise UsageError(str(err)) from None


def _spec(a: Arena, game: Game, threshold: Fraction | None) -> FairObjectiveSpec:
    side = a.fairness_side or Owner.P1
    return FairObjectiveSpec(
        game, side, threshold if game is Game.MEAN_PAYOFF else None
    )


def _names(a: Arena, nodes) -> str:
    return " ".join(a.names[q] for q in sorted(nodes)) or "-"


def _pairs(a: Arena, mapping, fmt) -> str:
    return (
        " ".join(f"{a.names[q]}={fmt(mapping[q])}" for q in sorted(mapping))
        or "-"
    )


def _print_report(
    a: Arena,
    regions: WinRegions,
    values: dict[int, Fraction],
    route: str,
    determinacy: str,
    as_json: bool,
) -> None:
    if as_json:
        payload = {
            "regions": {
                "win1": [a.names[q] for q in sorted(regions.win1)],
                "win2": [a.names[q] for q in sorted(regions.win2)],
                "undetermined": [
                    a.names[q] for q in sorted(regions.undetermined)
                ],
            },
            "credits": {
                a.names[q]: regions.credit[q] for q in sorted(regions.credit)
            },
            "values": {
                a.names[q]: format_rational(values[q]) for q in sorted(values)
            },
            "route": route,
            "determinacy": determinacy,
        }
        print(json.dumps(payload, indent=2))
        return
    print(f"route: {route}")
    print(f"determinacy: {determinacy}")
    print(f"win1: {_names(a, regions.win1)}")
    print(f"win2: {_names(a, regions.win2)}")
    print(f"undetermined: {_names(a, regions.undetermined)}")
    print(f"credits: {_pairs(a, regions.credit, str)}")
    print(f"values: {_pairs(a, values, format_rational)}")


def _solve_any(a: Arena, game: Game, threshold: Fraction):
    """Regions/route/determinacy with the regular or fair route chosen
    by the arena's (inferred) fairness side."""
    side = a.fairness_side
    if side is None:
        if game is Game.MEAN_PAYOFF:
            regions = solve_mp_threshold(a, threshold).regions
            route = "regular-mp:shift+energy"
        else:
            regions = solve_energy(a).regions
            route = "regular-energy:progress-measure"
        return regions, route, "determined"
    report = solve_fair(a, _spec(a, game, threshold))
    verdict = "determined" if report.determinacy.determined else "not-determined"
    return report.regions, report.route, verdict


# -- subcommands ---------------------------------------------------------


def _cmd_solve(args) -> int:
    a = _load(args.arena)
    game = Game.MEAN_PAYOFF if args.game == "mp" else Game.ENERGY
    regions, route, determinacy = _solve_any(a, game, _threshold(args))
    _print_report(a, regions, {}, route, determinacy, args.json)
    if args.report:
        csv_path, png_path = write_report(args.report, a, regions)
        print(f"report: {csv_path} {png_path}")
    if args.dot:
        print(export_dot(a))
    return 0


def _cmd_value(args) -> int:
    a = _load(args.arena)
    side = a.fairness_side
    if side is None:
        table = optimal_values(a)
        route = "regular-mp:refinement"
    else:
        table = fair_mp_optimal_values(a, side)
        route = f"fair-mp-{1 if side is Owner.P1 else 2}:refinement"
    regions, _, determinacy = _solve_any(a, Game.MEAN_PAYOFF, Fraction(0))
    _print_report(a, regions, table.values, route, determinacy, args.json)
    if args.report:
        csv_path, png_path = write_report(args.report, a, regions, table.values)
        print(f"report: {csv_path} {png_path}")
    if args.dot:
        print(export_dot(a))
    return 0


def _cmd_gadget(args) -> int:
    a = _load(args.arena)
    side = a.fairness_side
    if args.game == "mp":
        if args.threshold is not None:
            try:
                a = shift_and_scale(a, parse_rational(args.threshold))
            except ValueError as err:
                raise UsageError(str(err)) from None
        kind = (
            GadgetKind.FAIR_MP2 if side is Owner.P2 else GadgetKind.FAIR_MP1
        )
    else:
        if args.threshold is not None:
            raise UsageError("energy gadgets take no threshold")
        if side is Owner.P2:
            raise GadgetError(
                "player-2-fair energy is solved by decomposition, not a gadget"
            )
        kind = GadgetKind.FAIR_ENERGY1
    gadget, _ = build_gadget(a, kind)
    print(serialize_arena(gadget))
    if args.dot:
        print(export_dot(gadget))
    return 0


def _finitized(result, epsilon: str | None):
    if not isinstance(result, EscalatingSchedule):
        return result
    if epsilon is None:
        raise UsageError(
            "the exact strategy needs unbounded memory; pass --epsilon a/b"
        )
    try:
        eps = parse_rational(epsilon)
    except ValueError as err:
        raise UsageError(str(err)) from None
    return finitize(result, eps)


def _cmd_strategy(args) -> int:
    a = _load(args.arena)
    game = Game.MEAN_PAYOFF if args.game == "mp" else Game.ENERGY
    player = Owner.P1 if args.player == "1" else Owner.P2
    machine = _finitized(
        synthesize(a, _spec(a, game, _threshold(args)), player), args.epsilon
    )
    print(serialize_machine(machine, a))
    return 0


def _cmd_simulate(args) -> int:
    a = _load(args.arena)
    game = Game.MEAN_PAYOFF if args.game == "mp" else Game.ENERGY
    spec = _spec(a, game, _threshold(args))
    s1 = _finitized(synthesize(a, spec, Owner.P1), args.epsilon)
    s2 = _finitized(synthesize(a, spec, Owner.P2), args.epsilon)
    start = a.index(args.start)
    lasso = simulate(a, s1, s2, start, max_steps=args.steps)
    print(f"prefix: {' '.join(a.names[q] for q in lasso.prefix) or '-'}")
    print(f"cycle: {' '.join(a.names[q] for q in lasso.cycle)}")
    print(f"fair: {'yes' if lasso.fair_on_cycle else 'no'}")
    print(f"cycle-mean: {format_rational(lasso.cycle_mean)}")
    print(f"cycle-weight: {lasso.cycle_weight}")
    print(f"min-prefix-weight: {lasso.min_prefix_weight}")
    return 0


def _cmd_gen(args) -> int:
    fair = {"p1": Owner.P1, "p2": Owner.P2, "none": None}[args.fair]
    try:
        a = random_arena(
            args.nodes, args.max_weight, fair, args.density, args.seed
        )
    except ValueError as err:
        raise UsageError(str(err)) from None
    print(serialize_arena(a))
    if args.dot:
        print(export_dot(a))
    return 0


def _cmd_oracle(args) -> int:
    a = _load(args.arena)
    game = Game.MEAN_PAYOFF if args.game == "mp" else Game.ENERGY
    threshold = _threshold(args)
    side = a.fairness_side
    if side is None:
        reference = oracle_regular(
            a, game, threshold if game is Game.MEAN_PAYOFF else None
        )
    else:
        reference = oracle_fair(a, _spec(a, game, threshold))
    regions, route, determinacy = _solve_any(a, game, threshold)
    agree = (
        regions.win1 == reference.win1
        and regions.win2 == reference.win2
        and regions.undetermined == reference.undetermined
        and (not reference.credit or regions.credit == reference.credit)
    )
    if args.json:
        payload = {
            "solver": {
                "win1": [a.names[q] for q in sorted(regions.win1)],
                "win2": [a.names[q] for q in sorted(regions.win2)],
                "undetermined": [
                    a.names[q] for q in sorted(regions.undetermined)
                ],
            },
            "oracle": {
                "win1": [a.names[q] for q in sorted(reference.win1)],
                "win2": [a.names[q] for q in sorted(reference.win2)],
                "undetermined": [
                    a.names[q] for q in sorted(reference.undetermined)
                ],
            },
            "route": route,
            "determinacy": determinacy,
            "agreement": agree,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"route: {route}")
        print(
            f"solver: win1={_names(a, regions.win1)} "
            f"win2={_names(a, regions.win2)} "
            f"undetermined={_names(a, regions.undetermined)}"
        )
        print(
            f"oracle: win1={_names(a, reference.win1)} "
            f"win2={_names(a, reference.win2)} "
            f"undetermined={_names(a, reference.undetermined)}"
        )
        print(f"agreement: {'yes' if agree else 'no'}")
    return 0 if agree else 2


_COMMANDS = {
    "solve": _cmd_solve,
    "value": _cmd_value,
    "gadget": _cmd_gadget,
    "strategy": _cmd_strategy,
    "simulate": _cmd_simulate,
    "gen": _cmd_gen,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as err:
        print(f"fairgames: {err}", file=sys.stderr)
        return 64
    except ValueRecoveryError as err:
        print(f"fairgames: internal: {err}", file=sys.stderr)
        return 2
    except (
        ArenaError,
        FairnessSideError,
        GadgetError,
        StrategyError,
        BudgetError,
        OracleError,
    ) as err:
        print(f"fairgames: {err}", file=sys.stderr)
        return 1
    except KeyError as err:
        print(f"fairgames: {err.args[0] if err.args else err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
