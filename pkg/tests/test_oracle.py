"""Brute-force oracles: budgets, frozen verdicts, and solver agreement."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairgames import (
    BudgetError,
    FairObjectiveSpec,
    Game,
    OracleBudget,
    OracleError,
    Owner,
    optimal_values,
    oracle_fair,
    oracle_fair_values,
    oracle_regular,
    oracle_regular_values,
    parse_arena,
    random_arena,
    solve,
    solve_energy,
    solve_mp_threshold,
)

WIDE = OracleBudget(max_abs_weight=5)


def test_budget_refuses_large_arenas():
    big = random_arena(nodes=7, max_weight=3, fair=None, density=0.5, seed=1)
    with pytest.raises(BudgetError, match="arena has 7 nodes, oracle budget allows 6"):
        oracle_regular(big, Game.ENERGY)
    heavy = parse_arena("arena v1\nnode q p1\nedge q q 4\n")
    with pytest.raises(
        BudgetError, match="arena has weights up to 4, oracle budget allows 3"
    ):
        oracle_regular(heavy, Game.ENERGY)


def test_threshold_argument_is_checked(zero_loop):
    with pytest.raises(OracleError, match="mean-payoff query needs a threshold"):
        oracle_regular(zero_loop, Game.MEAN_PAYOFF)
    with pytest.raises(OracleError, match="energy query takes no threshold"):
        oracle_regular(zero_loop, Game.ENERGY, 0)


def test_fair_oracle_checks_fairness_side(drain):
    with pytest.raises(OracleError, match="fair nodes are not all owned by"):
        oracle_fair(drain, FairObjectiveSpec(Game.MEAN_PAYOFF, Owner.P1, Fraction(0)))


def test_regular_oracle_on_named_arenas(pump, chain):
    mp = oracle_regular(pump, Game.MEAN_PAYOFF, 0, WIDE)
    assert sorted(mp.win1) == [0, 1] and not mp.win2
    en = oracle_regular(chain, Game.ENERGY, None, WIDE)
    assert sorted(en.win1) == [0, 1]
    assert dict(en.credit) == {0: 3, 1: 0}


def test_fair_oracle_on_named_arenas(pump, drain, zero_loop, zero_loop_pair):
    def regions(a):
        side = a.fairness_side
        mp = oracle_fair(a, FairObjectiveSpec(Game.MEAN_PAYOFF, side, Fraction(0)), WIDE)
        en = oracle_fair(a, FairObjectiveSpec(Game.ENERGY, side, None), WIDE)
        return mp, en

    pump_mp, pump_en = regions(pump)
    assert sorted(pump_mp.win1) == [0, 1] and sorted(pump_en.win1) == [0, 1]
    drain_mp, drain_en = regions(drain)
    assert sorted(drain_mp.win1) == [0, 1]
    assert sorted(drain_en.win1) == [1]
    assert sorted(drain_en.undetermined) == [0]
    zl_mp, zl_en = regions(zero_loop)
    assert sorted(zl_mp.win1) == [0] and sorted(zl_en.win1) == [0]
    zlp_mp, zlp_en = regions(zero_loop_pair)
    assert sorted(zlp_mp.win1) == [0, 1]
    assert sorted(zlp_en.win2) == [0, 1] and not zlp_en.win1


def test_fair_energy_oracle_reports_regions_only(pump):
    en = oracle_fair(pump, FairObjectiveSpec(Game.ENERGY, Owner.P1, None), WIDE)
    assert dict(en.credit) == {}
    solved = solve(pump, FairObjectiveSpec(Game.ENERGY, Owner.P1, None))
    assert sorted(solved.regions.win1) == sorted(en.win1)
    assert dict(solved.regions.credit) == {0: 1, 1: 1}


def test_fair_value_oracle(pump, drain):
    assert dict(oracle_fair_values(pump, Owner.P1, WIDE).values) == {
        0: Fraction(1),
        1: Fraction(1),
    }
    assert dict(oracle_fair_values(drain, Owner.P2, WIDE).values) == {
        0: Fraction(0),
        1: Fraction(0),
    }


def test_regular_value_oracle(chain):
    assert dict(oracle_regular_values(chain, budget=WIDE).values) == {
        0: Fraction(0),
        1: Fraction(0),
    }


def test_walk_energy_clamp_is_already_stable(pump):
    spec = FairObjectiveSpec(Game.ENERGY, Owner.P1, None)
    tight = oracle_fair(pump, spec, OracleBudget(max_abs_weight=5, walk_energy_clamp=40))
    loose = oracle_fair(pump, spec, OracleBudget(max_abs_weight=5, walk_energy_clamp=80))
    assert sorted(tight.win1) == sorted(loose.win1) == [0, 1]
    assert sorted(tight.win2) == sorted(loose.win2)


@given(seed=st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_fairless_fair_oracle_matches_regular(seed):
    a = random_arena(nodes=2 + seed % 4, max_weight=2, fair=None,
                     density=0.5, seed=seed)
    fair = oracle_fair(a, FairObjectiveSpec(Game.MEAN_PAYOFF, Owner.P1, Fraction(0)))
    regular = oracle_regular(a, Game.MEAN_PAYOFF, 0)
    assert sorted(fair.win1) == sorted(regular.win1)
    assert sorted(fair.win2) == sorted(regular.win2)


@given(seed=st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_solvers_match_oracle_on_small_arenas(seed):
    a = random_arena(nodes=2 + seed % 4, max_weight=2, fair=None,
                     density=0.5, seed=seed)
    mp = solve_mp_threshold(a, Fraction(0))
    mp_oracle = oracle_regular(a, Game.MEAN_PAYOFF, 0)
    assert sorted(mp.regions.win1) == sorted(mp_oracle.win1)
    en = solve_energy(a)
    en_oracle = oracle_regular(a, Game.ENERGY)
    assert sorted(en.regions.win1) == sorted(en_oracle.win1)
    assert dict(en.regions.credit) == dict(en_oracle.credit)
    assert dict(optimal_values(a).values) == dict(oracle_regular_values(a).values)
