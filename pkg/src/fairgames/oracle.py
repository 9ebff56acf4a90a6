"""Exhaustive reference solvers for tiny arenas.

Everything here works straight from the definitions, independently of
the production solvers: enumerate positional strategies for the players
that provably need no memory, and analyze what the other player can do
in the one-player graph that remains.  The cost is exponential, so every
entry point enforces a budget and refuses arenas beyond it.

For fair games the free player is always the owner of the fair nodes.
The possible infinite-visit sets of its fair plays are exactly the
*valid sets*: node sets that are fairness-closed (they contain every
fair successor of their fair nodes) and strongly connected in the
induced graph, with at least one edge.  Values and feasibility questions
reduce to cycle analysis over valid sets; the fair-energy question
reduces to the existence of a nonnegative closed walk covering all fair
edges of some valid set, decided by shortcuts on the maximum cycle mean
and, in the boundary case, a clamped dynamic program.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .arena import Arena, Edge, Owner
from .energy import WinRegions
from .fair import FairObjectiveSpec, Game
from .meanpayoff import ValueTable


class BudgetError(ValueError):
    pass


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    """Hard limits under which exhaustive enumeration stays cheap."""

    max_nodes: int = 6
    max_abs_weight: int = 3
    walk_energy_clamp: int | None = None

    def check(self, a: Arena) -> None:
        if a.n > self.max_nodes:
            raise BudgetError(
                f"arena has {a.n} nodes, oracle budget allows {self.max_nodes}"
            )
        if a.W > self.max_abs_weight:
            raise BudgetError(
                f"arena has weights up to {a.W}, oracle budget allows "
                f"{self.max_abs_weight}"
            )

    def clamp_for(self, a: Arena) -> int:
        if self.walk_energy_clamp is not None:
            return self.walk_energy_clamp
        return max(4, 4 * a.n * a.n * a.W)


def strongly_connected_components(
    succ: Sequence[Sequence[int]],
) -> list[list[int]]:
    """Tarjan's algorithm, iteratively (safe for large graphs)."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    onstack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            u, i = work.pop()
            if i == 0:
                index[u] = low[u] = counter
                counter += 1
                stack.append(u)
                onstack[u] = True
            descended = False
            for j in range(i, len(succ[u])):
                v = succ[u][j]
                if index[v] == -1:
                    work.append((u, j + 1))
                    work.append((v, 0))
                    descended = True
                    break
                if onstack[v]:
                    low[u] = min(low[u], index[v])
            if descended:
                continue
            if low[u] == index[u]:
                comp = []
                while True:
                    v = stack.pop()
                    onstack[v] = False
                    comp.append(v)
                    if v == u:
                        break
                comps.append(comp)
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[u])
    return comps


def _positional_profiles(a: Arena, owner: Owner) -> list[dict[int, int]]:
    nodes = [q for q in range(a.n) if a.owners[q] is owner]
    pools = [[e.dst for e in a.out_edges(q)] for q in nodes]
    return [dict(zip(nodes, pick)) for pick in itertools.product(*pools)]


def _lasso(succ: list[int], start: int) -> tuple[list[int], list[int]]:
    """Prefix and cycle of the unique play under fixed successors."""
    seen: dict[int, int] = {}
    walk: list[int] = []
    q = start
    while q not in seen:
        seen[q] = len(walk)
        walk.append(q)
        q = succ[q]
    split = seen[q]
    return walk[:split], walk[split:]


def oracle_regular(
    a: Arena,
    game: Game,
    threshold: Fraction | int | None = None,
    budget: OracleBudget = OracleBudget(),
) -> WinRegions:
    """Regions (and minimal credits, for energy) by enumerating all
    positional strategy pairs and inspecting the induced lassos."""
    budget.check(a)
    if game is Game.MEAN_PAYOFF:
        if threshold is None:
            raise OracleError("mean-payoff query needs a threshold")
        v = Fraction(threshold)
    elif threshold is not None:
        raise OracleError("energy query takes no threshold")

    weight = {(e.src, e.dst): e.weight for e in a.edges}
    profiles1 = _positional_profiles(a, Owner.P1)
    profiles2 = _positional_profiles(a, Owner.P2)
    win1 = [False] * a.n
    credit: dict[int, int] = {}

    for s1 in profiles1:
        wins_everywhere = [True] * a.n
        needed = [0] * a.n
        for s2 in profiles2:
            succ = [s1.get(q, s2.get(q, -1)) for q in range(a.n)]
            for start in range(a.n):
                prefix, cycle = _lasso(succ, start)
                cycle_weight = sum(
                    weight[(cycle[i], cycle[(i + 1) % len(cycle)])]
                    for i in range(len(cycle))
                )
                if game is Game.MEAN_PAYOFF:
                    ok = cycle_weight * v.denominator >= v.numerator * len(cycle)
                else:
                    ok = cycle_weight >= 0
                    if ok:
                        total, dip = 0, 0
                        walk = prefix + cycle + [cycle[0]]
                        for i in range(len(walk) - 1):
                            total += weight[(walk[i], walk[i + 1])]
                            dip = min(dip, total)
                        needed[start] = max(needed[start], -dip)
                if not ok:
                    wins_everywhere[start] = False
        for q in range(a.n):
            if wins_everywhere[q]:
                win1[q] = True
                if game is Game.ENERGY:
                    best = credit.get(q)
                    if best is None or needed[q] < best:
                        credit[q] = needed[q]

    return WinRegions(
        win1=frozenset(q for q in range(a.n) if win1[q]),
        win2=frozenset(q for q in range(a.n) if not win1[q]),
        credit={q: credit[q] for q in sorted(credit)},
    )


def oracle_regular_values(
    a: Arena, budget: OracleBudget = OracleBudget()
) -> ValueTable:
    """Optimal mean-payoff values as max over player-1 choices of the
    min over player-2 choices of the induced cycle mean."""
    budget.check(a)
    weight = {(e.src, e.dst): e.weight for e in a.edges}
    best: dict[int, Fraction] = {}
    for s1 in _positional_profiles(a, Owner.P1):
        worst: dict[int, Fraction] = {}
        for s2 in _positional_profiles(a, Owner.P2):
            succ = [s1.get(q, s2.get(q, -1)) for q in range(a.n)]
            for start in range(a.n):
                _, cycle = _lasso(succ, start)
                mean = Fraction(
                    sum(
                        weight[(cycle[i], cycle[(i + 1) % len(cycle)])]
                        for i in range(len(cycle))
                    ),
                    len(cycle),
                )
                if start not in worst or mean < worst[start]:
                    worst[start] = mean
        for q, mean in worst.items():
            if q not in best or mean > best[q]:
                best[q] = mean
    return ValueTable(best)


class OnePlayerFairAnalysis:
    """Fair-play analysis of the graph left once one player is fixed.

    ``moves`` pins a successor for every node not owned by ``controller``;
    the controller — who must own all fair nodes — keeps every choice.
    """

    def __init__(
        self,
        a: Arena,
        moves: dict[int, int],
        controller: Owner,
        clamp: int,
    ):
        self.arena = a
        self.controller = controller
        self.clamp = clamp
        self.succ: list[list[Edge]] = []
        for q in range(a.n):
            if a.owners[q] is controller:
                self.succ.append(list(a.out_edges(q)))
            else:
                if q not in moves:
                    raise OracleError(f"no move fixed for node {q}")
                chosen = [e for e in a.out_edges(q) if e.dst == moves[q]]
                if not chosen:
                    raise OracleError(
                        f"fixed move {q}->{moves[q]} is not an edge"
                    )
                self.succ.append(chosen)
            if a.is_fair_node(q) and a.owners[q] is not controller:
                raise OracleError("fair nodes must belong to the free player")
        self._reach: dict[int, frozenset[int]] = {}
        self._valid: tuple[frozenset[int], ...] | None = None
        self._cycles: dict[frozenset[int], list[tuple[tuple[int, ...], int]]] = {}
        self._covering: dict[frozenset[int], list[int] | None] = {}

    def reach(self, q: int) -> frozenset[int]:
        if q not in self._reach:
            seen = {q}
            todo = deque([q])
            while todo:
                u = todo.popleft()
                for e in self.succ[u]:
                    if e.dst not in seen:
                        seen.add(e.dst)
                        todo.append(e.dst)
            self._reach[q] = frozenset(seen)
        return self._reach[q]

    def _strongly_connected(self, nodes: frozenset[int]) -> bool:
        start = min(nodes)
        for forward in (True, False):
            if forward:
                adj = {
                    u: [e.dst for e in self.succ[u] if e.dst in nodes]
                    for u in nodes
                }
            else:
                adj = {u: [] for u in nodes}
                for u in nodes:
                    for e in self.succ[u]:
                        if e.dst in nodes:
                            adj[e.dst].append(u)
            seen = {start}
            todo = [start]
            while todo:
                u = todo.pop()
                for v in adj[u]:
                    if v not in seen:
                        seen.add(v)
                        todo.append(v)
            if len(seen) != len(nodes):
                return False
        return True

    def valid_sets(self) -> tuple[frozenset[int], ...]:
        """All fairness-closed, induced-strongly-connected node sets —
        the candidate infinite-visit sets of fair plays."""
        if self._valid is not None:
            return self._valid
        a = self.arena
        found: list[frozenset[int]] = []
        nodes = list(range(a.n))
        for mask in range(1, 1 << a.n):
            s = frozenset(q for q in nodes if mask >> q & 1)
            closed = all(
                e.dst in s
                for q in s
                if a.is_fair_node(q)
                for e in a.fair_out(q)
            )
            if not closed:
                continue
            if len(s) == 1:
                q = next(iter(s))
                if any(e.dst == q for e in self.succ[q]):
                    found.append(s)
                continue
            if self._strongly_connected(s):
                found.append(s)
        self._valid = tuple(found)
        return self._valid

    def cycles(self, s: frozenset[int]) -> list[tuple[tuple[int, ...], int]]:
        """Simple cycles within the induced graph on ``s``, with weights;
        each cycle is rooted at its smallest node."""
        if s in self._cycles:
            return self._cycles[s]
        order = sorted(s)
        out: list[tuple[tuple[int, ...], int]] = []
        weight = {
            (u, e.dst): e.weight
            for u in s
            for e in self.succ[u]
            if e.dst in s
        }
        for i, root in enumerate(order):
            allowed = set(order[i:])
            path = [root]
            onpath = {root}

            def dfs(u: int) -> Iterator[tuple[int, ...]]:
                for e in self.succ[u]:
                    v = e.dst
                    if v == root:
                        yield tuple(path)
                    elif v in allowed and v not in onpath:
                        path.append(v)
                        onpath.add(v)
                        yield from dfs(v)
                        path.pop()
                        onpath.remove(v)

            for cyc in dfs(root):
                w = sum(
                    weight[(cyc[k], cyc[(k + 1) % len(cyc)])]
                    for k in range(len(cyc))
                )
                out.append((cyc, w))
        self._cycles[s] = out
        return out

    def _reachable_valid(self, q: int) -> Iterator[frozenset[int]]:
        reach = self.reach(q)
        for s in self.valid_sets():
            if s <= reach:
                yield s

    def best_mean(self, q: int) -> Fraction:
        """Best fair liminf average the controller can reach from q."""
        return max(
            max(Fraction(w, len(c)) for c, w in self.cycles(s))
            for s in self._reachable_valid(q)
        )

    def worst_mean(self, q: int) -> Fraction:
        """Worst fair liminf average the controller can inflict from q."""
        return min(
            min(Fraction(w, len(c)) for c, w in self.cycles(s))
            for s in self._reachable_valid(q)
        )

    def best_witness(self, q: int) -> tuple[frozenset[int], tuple[int, ...]]:
        target = self.best_mean(q)
        for s in self._reachable_valid(q):
            for c, w in self.cycles(s):
                if Fraction(w, len(c)) == target:
                    return s, c
        raise AssertionError("witness must exist")

    def worst_witness(self, q: int) -> tuple[frozenset[int], tuple[int, ...]]:
        target = self.worst_mean(q)
        for s in self._reachable_valid(q):
            for c, w in self.cycles(s):
                if Fraction(w, len(c)) == target:
                    return s, c
        raise AssertionError("witness must exist")

    def _fair_edges_of(self, s: frozenset[int]) -> list[tuple[int, int]]:
        a = self.arena
        return sorted(
            (q, e.dst)
            for q in s
            if a.is_fair_node(q)
            for e in a.fair_out(q)
        )

    def covering_walk(self, s: frozenset[int]) -> list[int] | None:
        """A nonnegative closed walk through ``s`` covering all its fair
        edges, or None if every such walk has negative weight.

        Shortcut on the maximum cycle mean: if positive, pumping the best
        cycle pays for any tour; if negative, every closed walk is
        negative.  Only the zero boundary needs the clamped search.
        """
        if s in self._covering:
            return self._covering[s]
        self._covering[s] = self._covering_walk(s)
        return self._covering[s]

    def _tour(self, s: frozenset[int], start: int) -> list[int]:
        """A closed walk from ``start`` visiting every fair edge of s."""
        adj = {u: [e.dst for e in self.succ[u] if e.dst in s] for u in s}

        def path(src: int, dst: int) -> list[int]:
            if src == dst:
                return [src]
            parent: dict[int, int] = {src: src}
            todo = deque([src])
            while todo:
                u = todo.popleft()
                for v in adj[u]:
                    if v not in parent:
                        parent[v] = u
                        if v == dst:
                            rev = [dst]
                            while rev[-1] != src:
                                rev.append(parent[rev[-1]])
                            return rev[::-1]
                        todo.append(v)
            raise AssertionError("valid sets are strongly connected")

        walk = [start]
        for u, v in self._fair_edges_of(s):
            walk.extend(path(walk[-1], u)[1:])
            walk.append(v)
        if len(walk) == 1:  # no fair edges: still take at least one step
            walk.append(adj[start][0])
        walk.extend(path(walk[-1], start)[1:])
        return walk

    def _covering_walk(self, s: frozenset[int]) -> list[int] | None:
        cycles = self.cycles(s)
        best = max(Fraction(w, len(c)) for c, w in cycles)
        fair_edges = self._fair_edges_of(s)
        if not fair_edges:
            if best >= 0:
                c = next(c for c, w in cycles if Fraction(w, len(c)) == best)
                return list(c) + [c[0]]
            return None
        if best < 0:
            return None
        weight = {
            (u, e.dst): e.weight
            for u in s
            for e in self.succ[u]
            if e.dst in s
        }
        if best > 0:
            # pump the best cycle enough to pay for one covering tour
            c, cw = next(
                (c, w) for c, w in cycles if Fraction(w, len(c)) == best
            )
            s0 = c[0]
            tour = self._tour(s, s0)
            tw = sum(weight[(tour[k], tour[k + 1])] for k in range(len(tour) - 1))
            pumps = max(1, -(-max(0, -tw) // cw))
            walk = [s0]
            for _ in range(pumps):
                walk.extend(c[1:] + (s0,))
            walk.extend(tour[1:])
            return walk
        # boundary: maximum cycle mean is exactly zero
        return self._covering_dp(s, fair_edges, weight)

    def _covering_dp(
        self,
        s: frozenset[int],
        fair_edges: list[tuple[int, int]],
        weight: dict[tuple[int, int], int],
    ) -> list[int] | None:
        bit = {edge: 1 << i for i, edge in enumerate(fair_edges)}
        full = (1 << len(fair_edges)) - 1
        clamp = self.clamp
        s0 = min(u for u, _ in fair_edges)
        start = (s0, 0, 0)
        parent: dict[tuple[int, int, int], tuple[tuple[int, int, int], int]] = {
            start: (start, -1)
        }
        todo = deque([start])
        while todo:
            state = todo.popleft()
            u, mask, credit = state
            for e in self.succ[u]:
                v = e.dst
                if v not in s:
                    continue
                nm = mask | bit.get((u, v), 0)
                nc = min(credit + weight[(u, v)], clamp)
                if nc < -clamp:
                    continue
                if v == s0 and nm == full and nc >= 0:
                    walk = [v]
                    cur = state
                    while True:
                        walk.append(cur[0])
                        prev, _ = parent[cur]
                        if prev == cur:
                            break
                        cur = prev
                    return walk[::-1]
                nxt = (v, nm, nc)
                if nxt not in parent:
                    parent[nxt] = (state, weight[(u, v)])
                    todo.append(nxt)
        return None

    def energy_feasible(self, q: int) -> bool:
        """Can the controller play fair from q with bounded energy drop?"""
        return any(
            self.covering_walk(s) is not None for s in self._reachable_valid(q)
        )

    def feasible_witness(self, q: int) -> tuple[frozenset[int], list[int]]:
        for s in self._reachable_valid(q):
            walk = self.covering_walk(s)
            if walk is not None:
                return s, walk
        raise AssertionError("witness must exist")

    def negative_cycle_reachable(self, q: int) -> bool:
        reach = self.reach(q)
        comp_sets = [
            frozenset(comp)
            for comp in strongly_connected_components(
                [[e.dst for e in edges] for edges in self.succ]
            )
        ]
        for comp in comp_sets:
            if not comp & reach:
                continue
            inner = comp & reach
            for c, w in self.cycles(inner):
                if w < 0:
                    return True
        return False

    def negative_cycle_witness(self, q: int) -> tuple[int, ...]:
        reach = self.reach(q)
        comps = strongly_connected_components(
            [[e.dst for e in edges] for edges in self.succ]
        )
        for comp in comps:
            inner = frozenset(comp) & reach
            if not inner:
                continue
            for c, w in self.cycles(inner):
                if w < 0:
                    return c
        raise AssertionError("witness must exist")

    def prefix_to(self, q: int, targets: frozenset[int]) -> list[int]:
        """A shortest node path from q into ``targets`` (may be [q])."""
        if q in targets:
            return [q]
        parent: dict[int, int] = {q: q}
        todo = deque([q])
        while todo:
            u = todo.popleft()
            for e in self.succ[u]:
                v = e.dst
                if v in parent:
                    continue
                parent[v] = u
                if v in targets:
                    rev = [v]
                    while rev[-1] != q:
                        rev.append(parent[rev[-1]])
                    return rev[::-1]
                todo.append(v)
        raise KeyError(f"nodes {sorted(targets)} not reachable from {q}")


def _analysis_factory(a: Arena, clamp: int, controller: Owner):
    cache: dict[tuple, OnePlayerFairAnalysis] = {}

    def get(moves: dict[int, int]) -> OnePlayerFairAnalysis:
        key = tuple(sorted(moves.items()))
        if key not in cache:
            cache[key] = OnePlayerFairAnalysis(a, moves, controller, clamp)
        return cache[key]

    return get


def oracle_fair(
    a: Arena,
    spec: FairObjectiveSpec,
    budget: OracleBudget = OracleBudget(),
) -> WinRegions:
    """Fair-game winning regions from the definitions.

    The player without fair nodes is enumerated positionally; the fair
    player's possibilities are read off valid sets.  For player-2-fair
    energy the middle region is genuinely undetermined and reported as
    such.
    """
    budget.check(a)
    side = spec.side
    if a.fair_nodes and a.fairness_side is not side:
        raise OracleError(f"arena fair nodes are not all owned by {side}")
    opponent = side.opponent()
    profiles = _positional_profiles(a, opponent)
    analysis = _analysis_factory(a, budget.clamp_for(a), side)
    n = a.n

    if spec.game is Game.MEAN_PAYOFF:
        if spec.threshold is None:
            raise OracleError("mean-payoff query needs a threshold")
        v = Fraction(spec.threshold)
        if side is Owner.P1:
            ok = [True] * n
            for prof in profiles:
                an = analysis(prof)
                for q in range(n):
                    if an.best_mean(q) < v:
                        ok[q] = False
        else:
            ok = [False] * n
            for prof in profiles:
                an = analysis(prof)
                for q in range(n):
                    if an.worst_mean(q) >= v:
                        ok[q] = True
        win1 = frozenset(q for q in range(n) if ok[q])
        return WinRegions(win1=win1, win2=frozenset(range(n)) - win1)

    if side is Owner.P1:
        ok = [True] * n
        for prof in profiles:
            an = analysis(prof)
            for q in range(n):
                if not an.energy_feasible(q):
                    ok[q] = False
        win1 = frozenset(q for q in range(n) if ok[q])
        return WinRegions(win1=win1, win2=frozenset(range(n)) - win1)

    # player-2 fairness, energy: possibly undetermined
    can_bound = [False] * n
    always_sinkable = [True] * n
    for prof in profiles:
        an = analysis(prof)
        for q in range(n):
            if not an.negative_cycle_reachable(q):
                can_bound[q] = True
            if not any(
                w < 0
                for s in an._reachable_valid(q)
                for _, w in an.cycles(s)
            ):
                always_sinkable[q] = False
    win1 = frozenset(q for q in range(n) if can_bound[q])
    win2 = frozenset(
        q for q in range(n) if always_sinkable[q] and q not in win1
    )
    return WinRegions(
        win1=win1,
        win2=win2,
        undetermined=frozenset(range(n)) - win1 - win2,
    )


def oracle_fair_values(
    a: Arena, side: Owner, budget: OracleBudget = OracleBudget()
) -> ValueTable:
    """Optimal fair mean-payoff values from the definitions."""
    budget.check(a)
    if a.fair_nodes and a.fairness_side is not side:
        raise OracleError(f"arena fair nodes are not all owned by {side}")
    profiles = _positional_profiles(a, side.opponent())
    analysis = _analysis_factory(a, budget.clamp_for(a), side)
    table: dict[int, Fraction] = {}
    for prof in profiles:
        an = analysis(prof)
        for q in range(a.n):
            if side is Owner.P1:
                mean = an.best_mean(q)
                if q not in table or mean < table[q]:
                    table[q] = mean
            else:
                mean = an.worst_mean(q)
                if q not in table or mean > table[q]:
                    table[q] = mean
    return ValueTable(table)
