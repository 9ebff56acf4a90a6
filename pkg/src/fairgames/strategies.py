"""Strategy machines: synthesis, simulation, and verification.

Finite-memory strategies are kept in a pointer form: at each fair node
the machine owns a local counter and a rotating pointer into the node's
fair successors — play the preferred successor ``k`` times, then the
next fair successor.  The one family that needs infinite memory
(player 1 in 1-fair mean-payoff games chasing the exact value) is
represented as an :class:`EscalatingSchedule`, untruncated rounds of
growing length, exposed only through truncation.

Verification solves the opponent's best-response problem on the product
of the arena with the machine's memory.  Fairness reduces to a node
predicate there: a product cycle through a scheduled fair node wraps the
node's counter and pointer, so it necessarily plays every fair successor;
only fair nodes the machine pins to one positional move can be starved,
and a play is unfair exactly when it cycles through such a node.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .arena import Arena, Owner, shift_and_scale
from .energy import PositionalStrategy, solve_energy
from .fair import FairObjectiveSpec, Game
from .fair import solve as solve_fair
from .gadgets import GadgetKind, build_gadget
from .oracle import OnePlayerFairAnalysis, strongly_connected_components


class StrategyError(ValueError):
    pass


Memory = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class NodeSchedule:
    """Periodic rule at one fair node: play ``preferred`` k times, then
    the fair successor under the pointer, advancing it."""

    preferred: int
    fair_successors: tuple[int, ...]
    k: int


@dataclass(frozen=True)
class EscalatingEntry:
    preferred: int
    fair_successors: tuple[int, ...]


@dataclass(frozen=True)
class StrategyMachine:
    """A finite-memory strategy: positional moves plus per-fair-node
    schedules.  Memory is the tuple of (counter, pointer) pairs of the
    scheduled nodes in ascending node order; it advances on every visit
    to a scheduled node and is read before advancing."""

    owner: Owner
    positional: dict[int, int]
    schedules: dict[int, NodeSchedule] = field(default_factory=dict)

    @property
    def scheduled_nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.schedules))

    def initial_memory(self) -> Memory:
        return ((0, 0),) * len(self.schedules)

    def move(self, memory: Memory, node: int) -> int:
        rule = self.schedules.get(node)
        if rule is None:
            if node not in self.positional:
                raise StrategyError(f"no move defined at node {node}")
            return self.positional[node]
        counter, pointer = memory[self.scheduled_nodes.index(node)]
        if counter < rule.k:
            return rule.preferred
        return rule.fair_successors[pointer]

    def update(self, memory: Memory, node: int) -> Memory:
        rule = self.schedules.get(node)
        if rule is None:
            return memory
        idx = self.scheduled_nodes.index(node)
        counter, pointer = memory[idx]
        if counter < rule.k:
            cell = (counter + 1, pointer)
        else:
            cell = (0, (pointer + 1) % len(rule.fair_successors))
        return memory[:idx] + (cell,) + memory[idx + 1 :]

    def state_bound(self) -> int:
        """Upper bound on distinct memory states."""
        bound = 1
        for rule in self.schedules.values():
            bound *= (rule.k + 1) * len(rule.fair_successors)
        return bound

    def validate(self, a: Arena) -> None:
        """Raise StrategyError unless the machine is total on its owner's
        nodes, moves along real edges, and schedules exactly the fair
        successor lists."""
        succs = {q: {e.dst for e in a.out_edges(q)} for q in range(a.n)}
        for q in range(a.n):
            if a.owners[q] is not self.owner:
                continue
            if q in self.schedules:
                rule = self.schedules[q]
                fair = tuple(sorted(e.dst for e in a.fair_out(q)))
                if rule.fair_successors != fair:
                    raise StrategyError(
                        f"schedule at {q} lists {rule.fair_successors}, "
                        f"fair successors are {fair}"
                    )
                if rule.preferred not in succs[q]:
                    raise StrategyError(f"preferred move {q}->{rule.preferred}")
                if rule.k < 0:
                    raise StrategyError("negative schedule period")
            elif q in self.positional:
                if self.positional[q] not in succs[q]:
                    raise StrategyError(f"move {q}->{self.positional[q]}")
            else:
                raise StrategyError(f"no move defined at node {q}")
        for q in self.schedules:
            if a.owners[q] is not self.owner or not a.fair_out(q):
                raise StrategyError(f"schedule at non-owned/non-fair node {q}")


@dataclass(frozen=True)
class EscalatingSchedule:
    """Rounds of growing length: in round i, play the preferred
    successor i times, then the next fair successor.  Not directly
    playable; truncate to a machine first."""

    owner: Owner
    positional: dict[int, int]
    entries: dict[int, EscalatingEntry]
    arena: Arena
    spec: FairObjectiveSpec

    def truncate(self, rounds: int) -> StrategyMachine:
        """The periodic machine that stays in round ``rounds`` forever."""
        if rounds < 0:
            raise StrategyError("rounds must be >= 0")
        schedules = {
            q: NodeSchedule(e.preferred, e.fair_successors, rounds)
            for q, e in self.entries.items()
        }
        return StrategyMachine(self.owner, dict(self.positional), schedules)


def _as_machine(strategy, owner: Owner) -> StrategyMachine:
    if isinstance(strategy, StrategyMachine):
        if strategy.owner is not owner:
            raise StrategyError(f"expected a machine for {owner}")
        return strategy
    if isinstance(strategy, PositionalStrategy):
        if strategy.owner is not owner:
            raise StrategyError(f"expected a strategy for {owner}")
        return StrategyMachine(owner, dict(strategy.moves))
    raise StrategyError(f"not a strategy: {strategy!r}")


@dataclass(frozen=True)
class LassoAnalysis:
    """An ultimately periodic play, decomposed and measured."""

    prefix: tuple[int, ...]
    cycle: tuple[int, ...]
    fair_on_cycle: bool
    cycle_mean: Fraction
    min_prefix_weight: int
    cycle_weight: int


def analyze_lasso(
    a: Arena, prefix: tuple[int, ...], cycle: tuple[int, ...]
) -> LassoAnalysis:
    """Measure the play prefix·cycle^ω: cycle mean and weight, fairness
    of the loop, and the lowest running weight over the prefix plus one
    turn of the cycle."""
    if not cycle:
        raise StrategyError("cycle must be nonempty")
    weight = {(e.src, e.dst): e.weight for e in a.edges}
    walk = list(prefix) + list(cycle) + [cycle[0]]
    total = 0
    dip = 0
    for i in range(len(walk) - 1):
        hop = (walk[i], walk[i + 1])
        if hop not in weight:
            raise StrategyError(f"walk uses a non-edge {hop}")
        total += weight[hop]
        dip = min(dip, total)
    cycle_edges = {
        (cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))
    }
    cycle_weight = sum(weight[hop] for hop in
                       ((cycle[i], cycle[(i + 1) % len(cycle)])
                        for i in range(len(cycle))))
    fair = all(
        (q, e.dst) in cycle_edges
        for q in set(cycle)
        if a.is_fair_node(q)
        for e in a.fair_out(q)
    )
    return LassoAnalysis(
        prefix=tuple(prefix),
        cycle=tuple(cycle),
        fair_on_cycle=fair,
        cycle_mean=Fraction(cycle_weight, len(cycle)),
        min_prefix_weight=dip,
        cycle_weight=cycle_weight,
    )


def simulate(
    a: Arena,
    s1,
    s2,
    start: int,
    max_steps: int | None = None,
) -> LassoAnalysis:
    """Run both machines from ``start`` until the product state repeats
    and analyze the resulting lasso."""
    m1 = _as_machine(s1, Owner.P1)
    m2 = _as_machine(s2, Owner.P2)
    m1.validate(a)
    m2.validate(a)
    if not 0 <= start < a.n:
        raise StrategyError(f"no node with id {start}")
    succs = {q: {e.dst for e in a.out_edges(q)} for q in range(a.n)}
    state = (start, m1.initial_memory(), m2.initial_memory())
    seen: dict[tuple, int] = {}
    walk: list[int] = []
    while state not in seen:
        if max_steps is not None and len(walk) >= max_steps:
            raise StrategyError(f"no lasso within {max_steps} steps")
        seen[state] = len(walk)
        q, mem1, mem2 = state
        walk.append(q)
        mover = m1 if a.owners[q] is Owner.P1 else m2
        mem = mem1 if a.owners[q] is Owner.P1 else mem2
        nxt = mover.move(mem, q)
        if nxt not in succs[q]:
            raise StrategyError(f"machine move {q}->{nxt} is not an edge")
        state = (nxt, m1.update(mem1, q), m2.update(mem2, q))
    split = seen[state]
    return analyze_lasso(a, tuple(walk[:split]), tuple(walk[split:]))


def serialize_machine(machine: StrategyMachine, a: Arena) -> str:
    """Tabulate the machine over its reachable (memory, node) pairs.

    Memory states are numbered in discovery order of a breadth-first
    walk of the arena×memory product started at every node with the
    initial memory, so output is deterministic.
    """
    machine.validate(a)
    ids: dict[Memory, int] = {}

    def mid(memory: Memory) -> int:
        if memory not in ids:
            ids[memory] = len(ids)
        return ids[memory]

    rows: list[tuple[int, int, int, int]] = []
    seen: set[tuple[int, Memory]] = set()
    todo: deque[tuple[int, Memory]] = deque()
    m0 = machine.initial_memory()
    mid(m0)
    for q in range(a.n):
        todo.append((q, m0))
        seen.add((q, m0))
    while todo:
        q, mem = todo.popleft()
        nxt_mem = machine.update(mem, q)
        if a.owners[q] is machine.owner:
            move = machine.move(mem, q)
            rows.append((mid(mem), q, move, mid(nxt_mem)))
            dsts = [move]
        else:
            dsts = [e.dst for e in a.out_edges(q)]
        for dst in dsts:
            if (dst, nxt_mem) not in seen:
                seen.add((dst, nxt_mem))
                todo.append((dst, nxt_mem))
    rows.sort()
    return "\n".join(
        f"state {m} at {a.names[q]} -> {a.names[dst]} next {m2}"
        for m, q, dst, m2 in rows
    )


# --- synthesis ---------------------------------------------------------


def synthesize(
    a: Arena,
    spec: FairObjectiveSpec,
    player: Owner,
    for_nodes=None,
) -> StrategyMachine | EscalatingSchedule:
    """Build the winning strategy for ``player`` from the gadget solve.

    The non-fair player always gets a positional machine.  The fair
    player gets schedules at its fair nodes: periodic with the modulus
    the construction dictates (mean-payoff player 2: n³W+n²+n; energy
    positive-value branch: n³W; zero-value branch: round-robin), or an
    escalating schedule in the one case (1-fair mean-payoff player 1)
    where finite memory cannot reach the value.
    """
    if for_nodes is not None:
        report = solve_fair(a, spec)
        region = (
            report.regions.win1 if player is Owner.P1 else report.regions.win2
        )
        losing = sorted(set(for_nodes) - region)
        if losing:
            raise StrategyError(
                f"{player} does not win from nodes {losing}"
            )
    if spec.game is Game.MEAN_PAYOFF:
        return _synthesize_mp(a, spec, player)
    return _synthesize_energy(a, spec, player)


def _fair_dsts(a: Arena, q: int) -> tuple[int, ...]:
    return tuple(sorted(e.dst for e in a.fair_out(q)))


def _synthesize_mp(
    a: Arena, spec: FairObjectiveSpec, player: Owner
) -> StrategyMachine | EscalatingSchedule:
    v = Fraction(spec.threshold or 0)
    shifted = shift_and_scale(a, v)
    kind = GadgetKind.FAIR_MP1 if spec.side is Owner.P1 else GadgetKind.FAIR_MP2
    gadget, gmap = build_gadget(shifted, kind)
    sol = solve_energy(gadget)
    if player is not spec.side:
        moves = _restrict_moves(a, sol, player)
        return StrategyMachine(player, moves)
    gstrat = (sol.strategy1 if player is Owner.P1 else sol.strategy2).moves
    positional: dict[int, int] = {}
    entries: dict[int, EscalatingEntry] = {}
    periodic: dict[int, NodeSchedule] = {}
    n, w = shifted.n, shifted.W
    modulus_k = n * n * n * w + n * n + n
    for q in range(a.n):
        if a.owners[q] is not player:
            continue
        if not a.is_fair_node(q):
            positional[q] = gstrat[q]
            continue
        parts = gmap.parts[q]
        if gstrat[q] == parts["r"]:
            positional[q] = gstrat[parts["esc"]]
        elif player is Owner.P1:
            entries[q] = EscalatingEntry(gstrat[parts["sim"]], _fair_dsts(a, q))
        else:
            periodic[q] = NodeSchedule(
                gstrat[parts["sim"]], _fair_dsts(a, q), modulus_k
            )
    if player is Owner.P1:
        if entries:
            return EscalatingSchedule(player, positional, entries, a, spec)
        return StrategyMachine(player, positional)
    return StrategyMachine(player, positional, periodic)


def _synthesize_energy(
    a: Arena, spec: FairObjectiveSpec, player: Owner
) -> StrategyMachine:
    if spec.side is Owner.P2:
        if player is Owner.P1:
            # winning exactly where regular energy is won, and by the
            # same positional strategy
            sol = solve_energy(a)
            return StrategyMachine(
                player,
                {
                    q: sol.strategy1.moves[q]
                    for q in range(a.n)
                    if a.owners[q] is Owner.P1
                },
            )
        # player 2 wins by forcing fair mean below zero
        machine = _synthesize_mp(
            a, FairObjectiveSpec(Game.MEAN_PAYOFF, Owner.P2, Fraction(0)), player
        )
        assert isinstance(machine, StrategyMachine)
        return machine
    gadget, gmap = build_gadget(a, GadgetKind.FAIR_ENERGY1)
    sol = solve_energy(gadget)
    if player is Owner.P2:
        return StrategyMachine(player, _restrict_moves(a, sol, player))
    gstrat = sol.strategy1.moves
    positional: dict[int, int] = {}
    schedules: dict[int, NodeSchedule] = {}
    pump_k = a.n ** 3 * a.W
    for q in range(a.n):
        if a.owners[q] is not Owner.P1:
            continue
        if not a.is_fair_node(q):
            positional[q] = gstrat[q]
            continue
        parts = gmap.parts[q]
        fairs = _fair_dsts(a, q)
        if gstrat[q] == parts["r"]:
            positional[q] = gstrat[parts["esc"]]
        elif gstrat[parts["val"]] == parts["pos"]:
            schedules[q] = NodeSchedule(gstrat[parts["pos"]], fairs, pump_k)
        else:
            # zero-value branch: pure round-robin over the fair successors
            schedules[q] = NodeSchedule(fairs[0], fairs, 0)
    return StrategyMachine(Owner.P1, positional, schedules)


def _restrict_moves(a: Arena, sol, player: Owner) -> dict[int, int]:
    strat = sol.strategy1 if player is Owner.P1 else sol.strategy2
    return {
        q: strat.moves[q] for q in range(a.n) if a.owners[q] is player
    }


def finitize(
    schedule: EscalatingSchedule, epsilon: Fraction | int
) -> StrategyMachine:
    """Truncate an escalating schedule so the machine still guarantees
    threshold − ε.  Any k with n²·W' < k·ε' (primes: after shifting the
    threshold away) keeps every long-run average within ε of the
    schedule's guarantee; the smallest such k is returned."""
    eps = Fraction(epsilon)
    if eps <= 0:
        raise StrategyError("epsilon must be positive")
    if not schedule.entries:
        return schedule.truncate(0)
    a = schedule.arena
    v = Fraction(schedule.spec.threshold or 0)
    shifted_w = shift_and_scale(a, v).W
    scaled_eps = eps * v.denominator
    k = math.floor(Fraction(a.n * a.n * shifted_w) / scaled_eps) + 1
    return schedule.truncate(k)


# --- verification ------------------------------------------------------


@dataclass(frozen=True)
class VerifyResult:
    verified: bool
    counterplay: LassoAnalysis | None = None


def verify_machine(
    a: Arena,
    machine: StrategyMachine,
    spec: FairObjectiveSpec,
    starts=None,
) -> VerifyResult:
    """Best-response check: does any opponent play beat the machine from
    its claimed winning region?

    When the machine's owner also owns the fair nodes (or there are
    none), the check runs on the arena×memory product, where fairness
    degenerates to cycle predicates.  When the opponent owns the fair
    nodes, the machine is positional and the opponent's best fair
    response is computed by one-player analysis.
    """
    machine.validate(a)
    report = solve_fair(a, spec)
    region = report.regions.win1 if machine.owner is Owner.P1 else report.regions.win2
    if starts is None:
        starts = region
    starts = sorted(frozenset(starts))
    if not starts:
        return VerifyResult(True, None)
    opponent_fair = any(
        a.owners[q] is not machine.owner for q in a.fair_nodes
    )
    if opponent_fair:
        return _verify_against_fair_opponent(a, machine, spec, starts)
    return _verify_product(a, machine, spec, starts)


def _verify_against_fair_opponent(
    a: Arena, machine: StrategyMachine, spec: FairObjectiveSpec, starts
) -> VerifyResult:
    moves = {
        q: mv
        for q, mv in machine.positional.items()
        if a.owners[q] is machine.owner
    }
    an = OnePlayerFairAnalysis(
        a, moves, machine.owner.opponent(), max(4, 4 * a.n * a.n * a.W)
    )
    v = Fraction(spec.threshold or 0)
    for q in starts:
        if spec.game is Game.MEAN_PAYOFF:
            if machine.owner is Owner.P2:
                # counter: a fair play with mean >= v
                if an.best_mean(q) >= v:
                    s, cycle = an.best_witness(q)
                    return VerifyResult(
                        False, _mean_witness(a, an, q, s, cycle, v, above=True)
                    )
            else:
                # counter: a fair play with mean < v
                if an.worst_mean(q) < v:
                    s, cycle = an.worst_witness(q)
                    return VerifyResult(
                        False, _mean_witness(a, an, q, s, cycle, v, above=False)
                    )
        else:
            if machine.owner is Owner.P2:
                # counter: a fair play with bounded energy drop
                if an.energy_feasible(q):
                    s, walk = an.feasible_witness(q)
                    prefix = an.prefix_to(q, frozenset({walk[0]}))
                    return VerifyResult(
                        False,
                        analyze_lasso(a, tuple(prefix[:-1]), tuple(walk[:-1])),
                    )
            else:
                # counter: pump a negative cycle, then keep playing fair
                if an.negative_cycle_reachable(q):
                    cycle = an.negative_cycle_witness(q)
                    prefix = an.prefix_to(q, frozenset(cycle))
                    rotated = _rotate(cycle, prefix[-1])
                    return VerifyResult(
                        False, analyze_lasso(a, tuple(prefix[:-1]), rotated)
                    )
    return VerifyResult(True, None)


def _rotate(cycle: tuple[int, ...], entry: int) -> tuple[int, ...]:
    idx = cycle.index(entry)
    return cycle[idx:] + cycle[:idx]


def _mean_witness(
    a: Arena,
    an: OnePlayerFairAnalysis,
    q: int,
    s: frozenset[int],
    cycle: tuple[int, ...],
    v: Fraction,
    above: bool,
) -> LassoAnalysis:
    """A lasso documenting the opponent's fair counterplay: the decisive
    cycle pumped enough times to keep the mean on the right side of the
    threshold despite one fairness tour of the witness set.  When the
    cycle mean sits exactly on the threshold no finite pump count works;
    the bare cycle is returned and may be unfair — the true counterplay
    escalates."""
    weight = {(e.src, e.dst): e.weight for e in a.edges}
    prefix = an.prefix_to(q, frozenset(cycle))
    rotated = _rotate(cycle, prefix[-1])
    tour = an._tour(s, rotated[0])
    cw = sum(weight[(rotated[i], rotated[(i + 1) % len(rotated)])]
             for i in range(len(rotated)))
    cl = len(rotated)
    tw = sum(weight[(tour[i], tour[i + 1])] for i in range(len(tour) - 1))
    tl = len(tour) - 1
    # find r with (r*cw + tw) / (r*cl + tl) on the right side of v
    gain = cw * v.denominator - v.numerator * cl
    debt = v.numerator * tl - tw * v.denominator
    if not above:
        gain, debt = -gain, -debt
    if gain <= 0:
        pumped = rotated  # boundary case: document the cycle alone
    else:
        r = max(1, max(debt, 0) // gain + 1)
        pumped = rotated * r + tuple(tour[:-1])
    return analyze_lasso(a, tuple(prefix[:-1]), pumped)


def _verify_product(
    a: Arena, machine: StrategyMachine, spec: FairObjectiveSpec, starts
) -> VerifyResult:
    owner = machine.owner
    starved = frozenset(
        q
        for q in a.fair_nodes
        if a.owners[q] is owner
        and q not in machine.schedules
        and any(e.dst != machine.positional[q] for e in a.fair_out(q))
    )
    weight = {(e.src, e.dst): e.weight for e in a.edges}

    # breadth-first product construction from the start states
    m0 = machine.initial_memory()
    index: dict[tuple[int, Memory], int] = {}
    states: list[tuple[int, Memory]] = []

    def sid(state: tuple[int, Memory]) -> int:
        if state not in index:
            index[state] = len(states)
            states.append(state)
        return index[state]

    todo: deque[int] = deque(sid((q, m0)) for q in starts)
    start_ids = set(todo)
    out: list[list[tuple[int, int]]] = []
    done: set[int] = set()
    while todo:
        i = todo.popleft()
        if i in done:
            continue
        done.add(i)
        q, mem = states[i]
        nxt_mem = machine.update(mem, q)
        if a.owners[q] is owner:
            dsts = [machine.move(mem, q)]
        else:
            dsts = [e.dst for e in a.out_edges(q)]
        while len(out) <= i:
            out.append([])
        row = []
        for dst in dsts:
            j = sid((dst, nxt_mem))
            row.append((j, weight[(q, dst)]))
            if j not in done:
                todo.append(j)
        out[i] = row
    while len(out) < len(states):
        out.append([])

    bad_states = frozenset(
        i for i, (q, _) in enumerate(states) if q in starved
    )
    v = Fraction(spec.threshold or 0)
    is_mp = spec.game is Game.MEAN_PAYOFF

    def project(path: list[int]) -> tuple[int, ...]:
        return tuple(states[i][0] for i in path)

    def counter(cyc: list[int]) -> VerifyResult:
        prefix = _product_path(out, start_ids, cyc[0])
        return VerifyResult(
            False, analyze_lasso(a, project(prefix[:-1]), project(cyc))
        )

    if owner is Owner.P1:
        # counters: an unfair loop, or a cycle breaking the payoff
        unfair = _cycle_through(out, bad_states)
        if unfair is not None:
            return counter(unfair)
        if is_mp:
            shifted = [
                [(j, w * v.denominator - v.numerator) for j, w in row]
                for row in out
            ]
        else:
            shifted = out
        neg = _negative_cycle(shifted)
        if neg is not None:
            return counter(neg)
        return VerifyResult(True, None)

    # owner is P2: the machine owes fairness itself, so an unfair loop
    # refutes it, and so does any cycle meeting the player-1 payoff
    unfair = _cycle_through(out, bad_states)
    if unfair is not None:
        return counter(unfair)
    if is_mp:
        transform = lambda w: w * v.denominator - v.numerator
    else:
        transform = lambda w: w
    nonneg = _nonnegative_cycle(out, list(range(len(states))), transform)
    if nonneg is not None:
        return counter(nonneg)
    return VerifyResult(True, None)


def _product_path(
    out: list[list[tuple[int, int]]], sources: set[int], target: int
) -> list[int]:
    """Shortest path from any source id to target (inclusive)."""
    if target in sources:
        return [target]
    parent: dict[int, int] = {s: s for s in sources}
    todo = deque(sources)
    while todo:
        u = todo.popleft()
        for vtx, _ in out[u]:
            if vtx in parent:
                continue
            parent[vtx] = u
            if vtx == target:
                rev = [vtx]
                while parent[rev[-1]] != rev[-1]:
                    rev.append(parent[rev[-1]])
                return rev[::-1]
            todo.append(vtx)
    raise AssertionError("cycle must be reachable from a start")


def _negative_cycle(
    out: list[list[tuple[int, int]]],
) -> list[int] | None:
    """A cycle of negative total weight, by Bellman-Ford from a virtual
    source; returns its state sequence or None."""
    n = len(out)
    dist = [0] * n
    parent = [-1] * n
    length = [0] * n
    queued = [True] * n
    todo = deque(range(n))
    while todo:
        u = todo.popleft()
        queued[u] = False
        for vtx, w in out[u]:
            if dist[u] + w < dist[vtx]:
                dist[vtx] = dist[u] + w
                parent[vtx] = u
                length[vtx] = length[u] + 1
                if length[vtx] >= n:
                    return _trace_cycle(parent, vtx, n)
                if not queued[vtx]:
                    queued[vtx] = True
                    todo.append(vtx)
    return None


def _trace_cycle(parent: list[int], v: int, n: int) -> list[int]:
    for _ in range(n):
        v = parent[v]
    seen: dict[int, int] = {}
    path: list[int] = []
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = parent[v]
    cycle = path[seen[v] :]
    cycle.reverse()  # parent pointers run backwards along the cycle
    return cycle


def _nonnegative_cycle(
    out: list[list[tuple[int, int]]],
    allowed: list[int],
    transform,
) -> list[int] | None:
    """A cycle within ``allowed`` whose transformed total weight is
    >= 0, or None.  Decided by negating weights and penalizing each edge
    by 1/(V+1) — scaled to integers — so that "some cycle >= 0" becomes
    "some cycle negative"."""
    allowed_set = set(allowed)
    remap = {old: new for new, old in enumerate(allowed)}
    scale = len(allowed) + 1
    sub: list[list[tuple[int, int]]] = [[] for _ in allowed]
    for old in allowed:
        for vtx, w in out[old]:
            if vtx in allowed_set:
                sub[remap[old]].append((remap[vtx], -transform(w) * scale - 1))
    cyc = _negative_cycle(sub)
    if cyc is None:
        return None
    return [allowed[i] for i in cyc]


def _cycle_through(
    out: list[list[tuple[int, int]]], through: frozenset[int]
) -> list[int] | None:
    """A cycle visiting some state in ``through``, or None."""
    if not through:
        return None
    succ = [[vtx for vtx, _ in row] for row in out]
    for comp in strongly_connected_components(succ):
        comp_set = set(comp)
        hits = comp_set & through
        if not hits:
            continue
        b = min(hits)
        if len(comp) == 1 and b not in succ[b]:
            continue
        # BFS from b's successors inside the component back to b
        parent = {}
        todo = deque()
        for vtx in succ[b]:
            if vtx in comp_set and vtx not in parent:
                parent[vtx] = b
                todo.append(vtx)
        if b in parent:
            return [b]
        while todo:
            u = todo.popleft()
            if u == b:
                break
            for vtx in succ[u]:
                if vtx in comp_set and vtx not in parent:
                    parent[vtx] = u
                    todo.append(vtx)
        if b not in parent:
            continue
        rev = [b]
        cur = parent[b]
        while cur != b:
            rev.append(cur)
            cur = parent[cur]
        rev.append(b)
        cycle = rev[::-1][:-1]
        return cycle
    return None
