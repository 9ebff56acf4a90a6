"""Games under strong transition fairness.

A play is fair when every fair edge of every infinitely-visited node is
taken infinitely often.  When player 1 owns the fair nodes, fairness is a
restriction player 1 must honor on top of its objective; when player 2
owns them, player 1 additionally wins every unfair play.  Mean-payoff
objectives on either side, and energy objectives with player-1 fairness,
reduce to ordinary energy games through gadgets.  Energy with player-2
fairness is not determined in general and is solved by decomposition:
player 1 wins exactly the ordinary energy region, player 2 wins exactly
its fair mean-payoff region below threshold 0, and the remainder is
undetermined.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .arena import Arena, Owner, shift_and_scale
from .energy import WinRegions, solve_energy
from .gadgets import GadgetKind, build_gadget, project_regions
from .meanpayoff import ValueTable, next_value_above, simplest_between


class Game(enum.Enum):
    MEAN_PAYOFF = "mp"
    ENERGY = "energy"


@dataclass(frozen=True)
class FairObjectiveSpec:
    """What to solve: the game type, which player owns the fair nodes,
    and the mean-payoff threshold (ignored for energy)."""

    game: Game
    side: Owner
    threshold: Fraction | None = None


@dataclass(frozen=True)
class Determinacy:
    determined: bool
    witnesses: frozenset[int] = frozenset()


@dataclass(frozen=True)
class FairSolveReport:
    regions: WinRegions
    route: str
    determinacy: Determinacy


class FairnessSideError(ValueError):
    pass


class ValueRecoveryError(RuntimeError):
    """Raised when a recovered optimal value fails its own membership
    check, i.e. the denominator bound used for recovery did not hold."""

    def __init__(self, node: int, value: Fraction, detail: str):
        super().__init__(f"node {node}: recovered value {value}: {detail}")
        self.node = node
        self.value = value


def _check_side(a: Arena, side: Owner) -> None:
    actual = a.fairness_side
    if a.fair_nodes and actual is None:
        raise FairnessSideError("fair nodes are split between both players")
    if actual is not None and actual is not side:
        raise FairnessSideError(
            f"arena has {actual}-owned fair nodes, requested side {side}"
        )


def solve_fair_mp(
    a: Arena, side: Owner, threshold: Fraction | int = 0
) -> FairSolveReport:
    """Winning regions for "fair and liminf average >= threshold" (side
    P1) or "liminf average >= threshold, or opponent plays unfair" (side
    P2).  Determined in both cases."""
    _check_side(a, side)
    v = Fraction(threshold)
    kind = GadgetKind.FAIR_MP1 if side is Owner.P1 else GadgetKind.FAIR_MP2
    gadget, gmap = build_gadget(shift_and_scale(a, v), kind)
    sol = solve_energy(gadget)
    projected = project_regions(sol.regions, gmap)
    regions = WinRegions(win1=projected.win1, win2=projected.win2)
    route = f"{kind.value}:gadget+energy"
    return FairSolveReport(regions, route, Determinacy(True))


def solve_fair_energy(a: Arena, side: Owner) -> FairSolveReport:
    """Winning regions (and minimal credits) for the fair energy game.

    With player-1 fairness the game is determined and solved by gadget.
    With player-2 fairness it can be undetermined: the report's
    determinacy carries the witness nodes where neither player wins.
    """
    _check_side(a, side)
    if side is Owner.P1:
        gadget, gmap = build_gadget(a, GadgetKind.FAIR_ENERGY1)
        sol = solve_energy(gadget)
        regions = project_regions(sol.regions, gmap)
        return FairSolveReport(
            regions, "fair-energy-1:gadget+energy", Determinacy(True)
        )
    plain = solve_energy(a).regions
    mp0 = solve_fair_mp(a, Owner.P2, 0).regions
    win1 = plain.win1
    win2 = mp0.win2 - win1
    undetermined = frozenset(range(a.n)) - win1 - win2
    regions = WinRegions(
        win1=win1,
        win2=win2,
        undetermined=undetermined,
        credit=dict(plain.credit),
    )
    return FairSolveReport(
        regions,
        "fair-energy-2:decomposition",
        Determinacy(not undetermined, undetermined),
    )


def solve(a: Arena, spec: FairObjectiveSpec) -> FairSolveReport:
    if spec.game is Game.MEAN_PAYOFF:
        return solve_fair_mp(a, spec.side, spec.threshold or 0)
    return solve_fair_energy(a, spec.side)


def check_determinacy(report: FairSolveReport) -> Determinacy:
    """Recompute determinacy from the report's regions."""
    und = report.regions.undetermined
    return Determinacy(not und, und)


def fair_mp_optimal_values(a: Arena, side: Owner) -> ValueTable:
    """Exact optimal fair mean-payoff values.

    Threshold probes narrow each node's value into an interval shorter
    than the distance between denominator-at-most-n rationals, and the
    recovered value is then verified by two more probes: the node must
    win at its value and lose just above it.  A failed check raises
    ValueRecoveryError instead of returning a wrong value.
    """
    _check_side(a, side)
    n, w = a.n, a.W
    if n == 0:
        return ValueTable({})
    if w == 0:
        return ValueTable({q: Fraction(0) for q in range(n)})
    gap = Fraction(1, 2 * n * n * w)
    table: dict[int, Fraction] = {}

    def win1_at(v: Fraction) -> frozenset[int]:
        return solve_fair_mp(a, side, v).regions.win1

    def assign(group: list[int], lo: Fraction, hi: Fraction) -> None:
        if hi - lo < gap:
            value = simplest_between(lo, hi)
            for q in group:
                table[q] = value
            return
        mid = (lo + hi) / 2
        up = win1_at(mid)
        ups = [q for q in group if q in up]
        downs = [q for q in group if q not in up]
        if ups:
            assign(ups, mid, hi)
        if downs:
            assign(downs, lo, mid)

    assign(list(range(n)), Fraction(-w), Fraction(w))

    by_value: dict[Fraction, list[int]] = {}
    for q, v in table.items():
        by_value.setdefault(v, []).append(q)
    for v, nodes in sorted(by_value.items()):
        at_v = win1_at(v)
        above = win1_at(next_value_above(v, n))
        for q in nodes:
            if q not in at_v:
                raise ValueRecoveryError(q, v, "node does not win at its value")
            if q in above:
                raise ValueRecoveryError(q, v, "node still wins above its value")
    return ValueTable(dict(table))
