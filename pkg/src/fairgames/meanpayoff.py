"""Mean-payoff games: threshold queries and exact optimal values.

A threshold query MP(v) — "player 1 forces liminf average >= v" — reduces
to an energy game on the arena with every weight w replaced by
``den*w - num`` for ``v = num/den``; player 1 wins MP(v) exactly where
they win that energy game.  Optimal values are recovered by refining
threshold queries until each node is pinned inside an interval shorter
than the minimal distance ``1/(2*n^2*W)`` between candidate values, then
taking the unique rational with denominator at most ``n`` inside it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arena import Arena, shift_and_scale
from .energy import EnergySolution, PositionalStrategy, WinRegions, solve_energy


@dataclass(frozen=True)
class ValueTable:
    """Optimal mean-payoff value per node."""

    values: dict[int, Fraction]

    def __getitem__(self, q: int) -> Fraction:
        return self.values[q]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class MpSolution:
    regions: WinRegions
    _energy: EnergySolution = field(repr=False, compare=False)

    @property
    def strategy1(self) -> PositionalStrategy:
        """Player 1's positional strategy, winning on ``regions.win1``."""
        return self._energy.strategy1

    @property
    def strategy2(self) -> PositionalStrategy:
        """Player 2's positional strategy, winning on ``regions.win2``
        (computed on first access)."""
        return self._energy.strategy2

    def __iter__(self):
        """Unpack as (regions, strategy1, strategy2)."""
        return iter((self.regions, self.strategy1, self.strategy2))


def solve_mp_threshold(a: Arena, v: Fraction | int) -> MpSolution:
    """Regions and positional strategies for the objective
    "liminf average weight >= v"."""
    v = Fraction(v)
    sol = solve_energy(shift_and_scale(a, v))
    regions = WinRegions(win1=sol.regions.win1, win2=sol.regions.win2)
    return MpSolution(regions, sol)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in ``[lo, hi]`` (ties
    broken toward 0 among integers, unique otherwise)."""
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if lo <= 0 <= hi:
        return Fraction(0)
    ceil_lo = math.ceil(lo)
    if ceil_lo <= hi:
        # at least one integer inside; take the one nearest zero
        return Fraction(ceil_lo if lo > 0 else math.floor(hi))
    base = math.floor(lo)  # lo, hi strictly inside (base, base+1)
    inner = simplest_between(1 / (hi - base), 1 / (lo - base))
    return base + 1 / inner


def next_value_above(v: Fraction, max_den: int) -> Fraction:
    """Smallest rational strictly above ``v`` with denominator <= max_den."""
    return min(
        Fraction(math.floor(v * den) + 1, den) for den in range(1, max_den + 1)
    )


def optimal_values(a: Arena) -> ValueTable:
    """Exact optimal mean-payoff value of every node.

    Values are means of simple cycles, so they have denominator at most
    ``n`` and any two distinct candidates differ by at least ``1/n^2`` —
    once a node's interval is shorter than the refinement gap
    ``1/(2*n^2*W)`` the simplest rational inside it is the value.
    """
    n, w = a.n, a.W
    if n == 0:
        return ValueTable({})
    if w == 0:
        return ValueTable({q: Fraction(0) for q in range(n)})
    gap = Fraction(1, 2 * n * n * w)
    table: dict[int, Fraction] = {}

    def assign(group: list[int], lo: Fraction, hi: Fraction) -> None:
        # invariant: every q in group has value in [lo, hi]
        if hi - lo < gap:
            value = simplest_between(lo, hi)
            for q in group:
                table[q] = value
            return
        mid = (lo + hi) / 2
        win1 = solve_mp_threshold(a, mid).regions.win1
        ups = [q for q in group if q in win1]
        downs = [q for q in group if q not in win1]
        if ups:
            assign(ups, mid, hi)
        if downs:
            # value < mid, and values are exactly achievable: value <= mid
            assign(downs, lo, mid)

    assign(list(range(n)), Fraction(-w), Fraction(w))
    return ValueTable(table)
