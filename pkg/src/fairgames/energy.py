"""Energy games with unknown initial credit.

Player 1 wins the energy objective from a node if some initial credit
``c >= 0`` keeps every prefix sum of the play above ``-c`` against any
opposition.  The solver computes the least progress measure: per-node
values in ``{0..n*W} | {Top}`` where a finite value is exactly the minimal
sufficient initial credit and ``Top`` marks player-2 wins.

Player 1's winning strategy falls out of the measure directly (take a
successor realizing the node's value).  The measure is constant Top inside
player 2's region, so it cannot tell player 2's winning moves from losing
ones there; ``strategy2`` is instead extracted from a second solve of the
role-swapped game with weights ``-n*w - 1``, where keeping the energy
bounded is the same as forcing every original cycle strictly negative.
That run costs an extra pseudo-polynomial pass, so it happens lazily on
first access to ``strategy2``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .arena import Arena, Owner


@dataclass(frozen=True)
class ProgressMeasure:
    """Per-node measure values; ``None`` encodes Top."""

    cap: int
    values: tuple[int | None, ...]

    def is_top(self, q: int) -> bool:
        return self.values[q] is None


@dataclass(frozen=True)
class WinRegions:
    """A partition of the nodes into winning regions.

    ``undetermined`` is empty for determined games.  ``credit`` maps
    player-1-winning nodes of energy solves to their minimal initial
    credit; ``value`` maps nodes to optimal mean-payoff values where those
    were computed.
    """

    win1: frozenset[int]
    win2: frozenset[int]
    undetermined: frozenset[int] = frozenset()
    credit: dict[int, int] = field(default_factory=dict)
    value: dict[int, Fraction] = field(default_factory=dict)


@dataclass(frozen=True)
class PositionalStrategy:
    """A memoryless strategy: one successor choice per owned node."""

    owner: Owner
    moves: dict[int, int]


@dataclass(frozen=True)
class EnergySolution:
    regions: WinRegions
    measure: ProgressMeasure
    strategy1: PositionalStrategy
    _spoiler: Callable[[], PositionalStrategy] = field(repr=False, compare=False)

    @property
    def strategy2(self) -> PositionalStrategy:
        """Player 2's positional strategy, winning on ``regions.win2``.

        Computed on first access (it needs a second, costlier solve)."""
        cached = self.__dict__.get("_strategy2")
        if cached is None:
            cached = self._spoiler()
            object.__setattr__(self, "_strategy2", cached)
        return cached

    def __iter__(self):
        """Unpack as (regions, strategy1, strategy2)."""
        return iter((self.regions, self.strategy1, self.strategy2))


def lift(value: int | None, weight: int, cap: int) -> int | None:
    """One lifting step: the credit needed before an edge of ``weight``
    into a node needing ``value``, truncated at 0 and capped by Top."""
    if value is None:
        return None
    lifted = max(value - weight, 0)
    return lifted if lifted <= cap else None


def _least_measure(
    n: int, cap: int, out: list[list[tuple[int, int]]], is_min: list[bool]
) -> list[int]:
    """FIFO-worklist least fixpoint of the lifting operator.

    ``is_min[q]`` picks whether node q takes the minimum or the maximum
    lifted successor value.  Returns per-node values with ``cap + 1``
    standing in for Top; the result is order-independent.
    """
    top = cap + 1
    preds: list[list[int]] = [[] for _ in range(n)]
    for q in range(n):
        for dst, _ in out[q]:
            preds[dst].append(q)

    val = [0] * n

    def best(q: int) -> int:
        lifts = []
        for dst, w in out[q]:
            x = val[dst]
            if x == top:
                lifts.append(top)
                continue
            y = x - w
            if y < 0:
                y = 0
            lifts.append(y if y <= cap else top)
        if not lifts:
            return 0  # dead end: vacuously winning with zero credit
        return min(lifts) if is_min[q] else max(lifts)

    queue: deque[int] = deque(range(n))
    queued = [True] * n
    while queue:
        q = queue.popleft()
        queued[q] = False
        new = best(q)
        if new > val[q]:
            val[q] = new
            for p in preds[q]:
                if not queued[p]:
                    queued[p] = True
                    queue.append(p)
    return val


def solve_energy(a: Arena) -> EnergySolution:
    """Solve the energy game by a least progress measure.

    Player-1 nodes take the minimum lifted successor value, player-2
    nodes the maximum.  ``strategy1`` realizes the measure; ``strategy2``
    comes from the role-swapped solve described in the module docstring
    and is computed lazily.  Strategy ties break toward the smallest
    successor id.
    """
    n = a.n
    cap = n * a.W
    top = cap + 1  # internal stand-in for Top
    out: list[list[tuple[int, int]]] = [
        [(e.dst, e.weight) for e in a.out_edges(q)] for q in range(n)
    ]
    keeper = [a.owners[q] is Owner.P1 for q in range(n)]
    val = _least_measure(n, cap, out, keeper)

    win1 = frozenset(q for q in range(n) if val[q] != top)
    win2 = frozenset(q for q in range(n) if val[q] == top)

    def lifted(q: int, dst: int, w: int) -> int:
        x = val[dst]
        if x == top:
            return top
        y = max(x - w, 0)
        return y if y <= cap else top

    moves1: dict[int, int] = {}
    fallback2: dict[int, int] = {}
    for q in range(n):
        if not out[q]:
            continue
        choices = [(lifted(q, dst, w), dst) for dst, w in out[q]]
        if a.owners[q] is Owner.P1:
            # realize the minimum (the measure value itself on win1)
            moves1[q] = min(choices)[1]
        else:
            # best effort where player 2 loses: demand the largest credit
            best_x = max(x for x, _ in choices)
            fallback2[q] = min(dst for x, dst in choices if x == best_x)

    def spoiler() -> PositionalStrategy:
        moves2 = dict(fallback2)
        if any(not keeper[q] and val[q] == top for q in range(n)):
            # A cycle has weight <= -1 under w exactly when it has weight
            # >= 0 under -n*w - 1 (cycles are at most n edges long), so
            # player 2's cycle-spoiling moves are the energy-keeping moves
            # of the role-swapped game under that weight transform.
            out_d = [
                [(dst, -n * w - 1) for dst, w in row] for row in out
            ]
            w_d = max(abs(w) for row in out_d for _, w in row)
            cap_d = n * w_d
            top_d = cap_d + 1
            val_d = _least_measure(n, cap_d, out_d, [not k for k in keeper])

            def dual_lift(dst: int, w: int) -> int:
                x = val_d[dst]
                if x == top_d:
                    return top_d
                y = max(x - w, 0)
                return y if y <= cap_d else top_d

            for q in range(n):
                if not keeper[q] and val[q] == top and out[q]:
                    moves2[q] = min(
                        (dual_lift(dst, w), dst) for dst, w in out_d[q]
                    )[1]
        return PositionalStrategy(Owner.P2, moves2)

    regions = WinRegions(
        win1=win1,
        win2=win2,
        credit={q: val[q] for q in sorted(win1)},
    )
    measure = ProgressMeasure(cap, tuple(v if v != top else None for v in val))
    return EnergySolution(
        regions=regions,
        measure=measure,
        strategy1=PositionalStrategy(Owner.P1, moves1),
        _spoiler=spoiler,
    )


def min_credit(a: Arena, q: int) -> int | None:
    """Minimal sufficient initial credit at node ``q``; None if player 2
    wins there."""
    if not 0 <= q < a.n:
        raise KeyError(f"no node with id {q}")
    return solve_energy(a).measure.values[q]
