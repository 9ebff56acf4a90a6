"""Solvers for two-player weighted graph games with transition fairness.

The package solves mean-payoff and energy games on finite weighted
arenas, both in the regular setting and under strong transition
fairness on either player's edges: winning regions, minimal initial
credits, optimal values, strategy machines with synthesis, simulation
and verification, plus an exhaustive oracle for cross-checking on tiny
instances.
"""

from .arena import (
    Arena,
    ArenaError,
    Edge,
    Owner,
    Violation,
    export_dot,
    format_rational,
    parse_arena,
    parse_rational,
    serialize_arena,
    shift_and_scale,
    validate,
)
from .energy import (
    EnergySolution,
    PositionalStrategy,
    ProgressMeasure,
    WinRegions,
    min_credit,
    solve_energy,
)
from .fair import (
    Determinacy,
    FairnessSideError,
    FairObjectiveSpec,
    FairSolveReport,
    Game,
    ValueRecoveryError,
    check_determinacy,
    fair_mp_optimal_values,
    solve,
    solve_fair_energy,
    solve_fair_mp,
)
from .gadgets import GadgetError, GadgetKind, GadgetMap, build_gadget, project_regions
from .generate import random_arena
from .meanpayoff import (
    MpSolution,
    ValueTable,
    next_value_above,
    optimal_values,
    simplest_between,
    solve_mp_threshold,
)
from .oracle import (
    BudgetError,
    OracleBudget,
    OracleError,
    oracle_fair,
    oracle_fair_values,
    oracle_regular,
    oracle_regular_values,
)
from .report import write_report
from .strategies import (
    EscalatingEntry,
    EscalatingSchedule,
    LassoAnalysis,
    NodeSchedule,
    StrategyError,
    StrategyMachine,
    VerifyResult,
    analyze_lasso,
    finitize,
    serialize_machine,
    simulate,
    synthesize,
    verify_machine,
)

__version__ = "0.1.0"

__all__ = [
    "Arena",
    "ArenaError",
    "BudgetError",
    "Determinacy",
    "Edge",
    "EnergySolution",
    "EscalatingEntry",
    "EscalatingSchedule",
    "FairnessSideError",
    "FairObjectiveSpec",
    "FairSolveReport",
    "GadgetError",
    "GadgetKind",
    "GadgetMap",
    "Game",
    "LassoAnalysis",
    "MpSolution",
    "NodeSchedule",
    "OracleBudget",
    "OracleError",
    "Owner",
    "PositionalStrategy",
    "ProgressMeasure",
    "StrategyError",
    "StrategyMachine",
    "ValueRecoveryError",
    "ValueTable",
    "VerifyResult",
    "Violation",
    "WinRegions",
    "analyze_lasso",
    "build_gadget",
    "check_determinacy",
    "export_dot",
    "fair_mp_optimal_values",
    "finitize",
    "format_rational",
    "min_credit",
    "next_value_above",
    "optimal_values",
    "oracle_fair",
    "oracle_fair_values",
    "oracle_regular",
    "oracle_regular_values",
    "parse_arena",
    "parse_rational",
    "project_regions",
    "random_arena",
    "serialize_arena",
    "serialize_machine",
    "shift_and_scale",
    "simplest_between",
    "simulate",
    "solve",
    "solve_energy",
    "solve_fair_energy",
    "solve_fair_mp",
    "solve_mp_threshold",
    "synthesize",
    "validate",
    "verify_machine",
    "write_report",
]
