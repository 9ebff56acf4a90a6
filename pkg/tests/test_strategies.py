"""Strategy machines: synthesis, simulation, finitization, verification."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairgames import (
    EscalatingSchedule,
    FairObjectiveSpec,
    Game,
    NodeSchedule,
    Owner,
    StrategyError,
    StrategyMachine,
    analyze_lasso,
    finitize,
    parse_arena,
    random_arena,
    serialize_machine,
    simulate,
    solve,
    synthesize,
    verify_machine,
)

MP0 = FairObjectiveSpec(Game.MEAN_PAYOFF, Owner.P1, Fraction(0))
MP0_OPP = FairObjectiveSpec(Game.MEAN_PAYOFF, Owner.P2, Fraction(0))
EN = FairObjectiveSpec(Game.ENERGY, Owner.P1, None)
EN_OPP = FairObjectiveSpec(Game.ENERGY, Owner.P2, None)


def test_schedule_plays_preferred_then_rotates(pump):
    machine = synthesize(pump, MP0, Owner.P1).truncate(2)
    memory = machine.initial_memory()
    played = []
    for _ in range(6):
        played.append(pump.names[machine.move(memory, 0)])
        memory = machine.update(memory, 0)
    assert played == ["q", "q", "p", "q", "q", "p"]


def test_rotation_covers_every_fair_successor():
    a = parse_arena(
        """arena v1
node hub p1
node x p1
node y p1
edge hub x 0 fair
edge hub y 0 fair
edge x hub 0
edge y hub 0
"""
    )
    machine = StrategyMachine(
        Owner.P1,
        {1: 0, 2: 0},
        {0: NodeSchedule(preferred=1, fair_successors=(1, 2), k=1)},
    )
    machine.validate(a)
    memory = machine.initial_memory()
    played = []
    for _ in range(8):
        played.append(a.names[machine.move(memory, 0)])
        memory = machine.update(memory, 0)
    # k=1: one preferred visit, then the next fair successor in turn
    assert played == ["x", "x", "x", "y", "x", "x", "x", "y"]
    assert machine.state_bound() == 4


def test_validate_rejects_bad_machines(pump):
    with pytest.raises(StrategyError, match="no move defined at node 0"):
        StrategyMachine(Owner.P1, {}).validate(pump)
    with pytest.raises(StrategyError, match="no move defined at node 0"):
        StrategyMachine(Owner.P1, {1: 1}).validate(pump)
    with pytest.raises(StrategyError, match="fair successors are"):
        StrategyMachine(
            Owner.P1, {0: 0, 1: 0}, {1: NodeSchedule(0, (0,), 2)}
        ).validate(pump)
    with pytest.raises(StrategyError, match="fair successors are"):
        StrategyMachine(
            Owner.P1, {1: 0}, {0: NodeSchedule(0, (0, 1), 2)}
        ).validate(pump)


def test_analyze_lasso(pump):
    lasso = analyze_lasso(pump, (1,), (0, 0, 0, 0, 0, 1))
    assert lasso.fair_on_cycle
    assert lasso.cycle_mean == Fraction(0)
    assert lasso.cycle_weight == 0
    assert lasso.min_prefix_weight == 0
    skipping = analyze_lasso(pump, (), (0,))
    assert not skipping.fair_on_cycle
    assert skipping.cycle_mean == Fraction(1)


def test_simulate_machine_against_machine(drain):
    s1 = synthesize(drain, MP0_OPP, Owner.P1)
    s2 = synthesize(drain, MP0_OPP, Owner.P2)
    lasso = simulate(drain, s1, s2, start=0)
    assert lasso.prefix == (0,) * 15
    assert lasso.cycle == (1,)
    assert lasso.fair_on_cycle
    assert lasso.cycle_mean == Fraction(0)
    assert lasso.min_prefix_weight == -14


def test_escalating_schedule_and_truncations(pump):
    schedule = synthesize(pump, MP0, Owner.P1)
    assert isinstance(schedule, EscalatingSchedule)
    assert schedule.positional == {1: 0}
    assert list(schedule.entries) == [0]
    assert schedule.entries[0].preferred == 0
    assert schedule.entries[0].fair_successors == (1,)
    opponent = synthesize(pump, MP0, Owner.P2)
    means = []
    for rounds in (4, 8, 16, 32):
        lasso = simulate(pump, schedule.truncate(rounds), opponent, start=0)
        means.append(lasso.cycle_mean)
    assert means == [Fraction(0), Fraction(2, 5), Fraction(2, 3), Fraction(14, 17)]
    assert means == sorted(means)  # approaches the value 1 from below


def test_verify_truncations_at_threshold(pump):
    schedule = synthesize(pump, MP0, Owner.P1)
    bad = verify_machine(pump, schedule.truncate(3), MP0)
    assert not bad.verified
    assert bad.counterplay.cycle == (1, 0, 0, 0, 0)
    assert bad.counterplay.cycle_mean == Fraction(-1, 5)
    assert bad.counterplay.fair_on_cycle
    good = verify_machine(pump, schedule.truncate(4), MP0)
    assert good.verified
    assert good.counterplay is None


def test_finitize_meets_epsilon_target(pump):
    schedule = synthesize(
        pump, FairObjectiveSpec(Game.MEAN_PAYOFF, Owner.P1, Fraction(1)), Owner.P1
    )
    machine = finitize(schedule, Fraction(1, 10))
    assert machine.schedules[0].k == 201
    lowered = FairObjectiveSpec(Game.MEAN_PAYOFF, Owner.P1, Fraction(9, 10))
    assert verify_machine(pump, machine, lowered).verified
    lasso = simulate(pump, machine, synthesize(pump, lowered, Owner.P2), start=0)
    assert lasso.cycle_mean == Fraction(197, 203)


def test_synthesized_machine_shapes(pump, drain, zero_loop):
    pump_energy = synthesize(pump, EN, Owner.P1)
    assert pump_energy.schedules[0].k == 32  # pump n^3*W rounds before the drop
    assert pump_energy.state_bound() == 33
    drain_mp = synthesize(drain, MP0_OPP, Owner.P2)
    assert drain_mp.schedules[0].k == 14  # n^3*W + n^2 + n
    zero_energy = synthesize(zero_loop, EN, Owner.P1)
    assert zero_energy.schedules[0].k == 0  # zero-value loop: pure rotation
    assert zero_energy.state_bound() == 1


def test_serialize_machine(pump):
    machine = synthesize(pump, MP0, Owner.P1).truncate(1)
    assert serialize_machine(machine, pump) == (
        "state 0 at q -> q next 1\n"
        "state 0 at p -> q next 0\n"
        "state 1 at q -> p next 0"
    )


def test_verify_rejects_skipping_the_fair_edge(pump):
    cheat = StrategyMachine(Owner.P1, {0: 0, 1: 0})
    result = verify_machine(pump, cheat, MP0)
    assert not result.verified
    assert not result.counterplay.fair_on_cycle


def test_verify_machine_for_opponent_of_fair_player(pump, drain):
    # the fair player's opponent plays positionally on its winning region
    above = FairObjectiveSpec(Game.MEAN_PAYOFF, Owner.P1, Fraction(2))
    rep = solve(pump, above)
    machine = synthesize(pump, above, Owner.P2)
    assert machine.schedules == {}
    assert verify_machine(pump, machine, above, starts=rep.regions.win2).verified

    rep2 = solve(drain, EN_OPP)
    m1 = synthesize(drain, EN_OPP, Owner.P1)
    assert verify_machine(drain, m1, EN_OPP, starts=rep2.regions.win1).verified


def test_energy_machine_fails_from_undetermined_node(drain):
    rep = solve(drain, EN_OPP)
    machine = synthesize(drain, EN_OPP, Owner.P1)
    assert sorted(rep.regions.undetermined) == [0]
    result = verify_machine(drain, machine, EN_OPP, starts=frozenset({0}))
    assert not result.verified
    assert result.counterplay.cycle == (0,)
    assert result.counterplay.cycle_mean == Fraction(-1)


def _positional_profiles(a, owner):
    nodes = [q for q in range(a.n) if a.owners[q] is owner]
    pools = [[e.dst for e in a.out_edges(q)] for q in nodes]
    for combo in itertools.product(*pools):
        yield dict(zip(nodes, combo))


@given(seed=st.integers(0, 5_000))
@settings(max_examples=25, deadline=None)
def test_energy_machine_never_dips_below_credit(seed):
    """Against every opponent profile, a verified energy machine keeps the
    running weight above -credit(start)."""
    a = random_arena(nodes=2 + seed % 3, max_weight=1, fair=Owner.P1,
                     density=0.4, seed=seed)
    if a.fairness_side is not Owner.P1:
        return
    spec = FairObjectiveSpec(Game.ENERGY, Owner.P1, None)
    rep = solve(a, spec)
    if not rep.regions.win1:
        return
    machine = synthesize(a, spec, Owner.P1)
    for start in sorted(rep.regions.win1):
        credit = rep.regions.credit[start]
        for profile in _positional_profiles(a, Owner.P2):
            lasso = simulate(a, machine, StrategyMachine(Owner.P2, profile), start)
            assert lasso.min_prefix_weight >= -credit
            assert lasso.cycle_weight >= 0


@given(seed=st.integers(0, 5_000), p2=st.booleans(),
       energy=st.booleans())
@settings(max_examples=40, deadline=None)
def test_synthesized_machines_verify(seed, p2, energy):
    side = Owner.P2 if p2 else Owner.P1
    a = random_arena(nodes=2 + seed % 3, max_weight=1, fair=side,
                     density=0.4, seed=seed)
    if a.fairness_side is not side or len(a.fair_nodes) > 2:
        return
    game = Game.ENERGY if energy else Game.MEAN_PAYOFF
    threshold = None if energy else Fraction(0)
    spec = FairObjectiveSpec(game, side, threshold)
    rep = solve(a, spec)
    for player in (Owner.P1, Owner.P2):
        region = rep.regions.win1 if player is Owner.P1 else rep.regions.win2
        if not region:
            continue
        machine = synthesize(a, spec, player)
        if isinstance(machine, EscalatingSchedule):
            eps = Fraction(1, 4)
            slack = FairObjectiveSpec(game, side, spec.threshold - eps)
            result = verify_machine(a, finitize(machine, eps), slack, starts=region)
        else:
            result = verify_machine(a, machine, spec, starts=region)
        assert result.verified, result.counterplay
