"""Arena model, text format, rationals, and weight transforms."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairgames import (
    Arena,
    ArenaError,
    Edge,
    Owner,
    export_dot,
    format_rational,
    parse_arena,
    parse_rational,
    random_arena,
    serialize_arena,
    shift_and_scale,
    validate,
)
from conftest import DRAIN_TEXT, PUMP_TEXT


def test_parse_named_arena(pump):
    assert pump.names == ("q", "p")
    assert pump.owners == (Owner.P1, Owner.P1)
    assert pump.n == 2
    assert pump.W == 4
    assert pump.fairness_side is Owner.P1
    assert pump.fair_nodes == (0,)
    assert [(e.src, e.dst, e.weight, e.fair) for e in pump.edges] == [
        (0, 0, 1, False),
        (0, 1, -4, True),
        (1, 0, 0, False),
    ]


def test_mixed_ownership_and_fair_side(drain):
    assert drain.owners == (Owner.P2, Owner.P1)
    assert drain.fairness_side is Owner.P2
    assert drain.fair_nodes == (0,)
    assert [e.dst for e in drain.fair_out(0)] == [1]


def test_fairless_arena_has_no_side():
    a = parse_arena("arena v1\nnode a p1\nedge a a 0\n")
    assert a.fairness_side is None
    assert a.fair_nodes == ()


def test_index_lookup(pump):
    assert pump.index("q") == 0
    assert pump.index("p") == 1
    with pytest.raises(KeyError):
        pump.index("zz")


def test_serialize_round_trip(pump, drain, chain, zero_loop_pair):
    for a in (pump, drain, chain, zero_loop_pair):
        assert parse_arena(serialize_arena(a)) == a
    assert serialize_arena(pump) == PUMP_TEXT
    assert serialize_arena(drain) == DRAIN_TEXT


@pytest.mark.parametrize(
    "text,message",
    [
        ("arena v2\nnode q p1\nedge q q 0\n", "expected 'arena v1' header"),
        ("arena v1\nnode q p1\nnode q p2\nedge q q 0\n", "duplicate node 'q'"),
        ("arena v1\nnode q p1\nedge q q 0\nedge q q 1\n", "parallel edge"),
        ("arena v1\nnode q p1\nedge q r 0\n", "unknown node 'r'"),
        ("arena v1\nnode q p3\nedge q q 0\n", "owner must be p1 or p2"),
        ("arena v1\nnode q p1\nedge q q x\n", "bad integer weight"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(ArenaError, match=message):
        parse_arena(text)


def test_validate_flags_dead_ends():
    a = Arena(
        names=("a", "b"),
        owners=(Owner.P1, Owner.P1),
        edges=(Edge(0, 1, 1, False),),
    )
    violations = validate(a)
    assert [v.kind for v in violations] == ["dead-end"]
    assert violations[0].node == 1
    assert "'b'" in violations[0].detail


def test_validate_accepts_named_arenas(pump, drain, zero_loop):
    assert validate(pump) == []
    assert validate(drain) == []
    assert validate(zero_loop) == []


@pytest.mark.parametrize(
    "text,value",
    [
        ("3", Fraction(3)),
        ("-4/6", Fraction(-2, 3)),
        ("0", Fraction(0)),
        ("7/2", Fraction(7, 2)),
    ],
)
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["4/0", "x", "1.5", "1/-2", ""])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational():
    assert format_rational(Fraction(3)) == "3"
    assert format_rational(Fraction(-2, 3)) == "-2/3"
    assert parse_rational(format_rational(Fraction(157, 163))) == Fraction(157, 163)


def test_shift_and_scale_weights(pump):
    # w -> den*w - num, so threshold queries become zero-threshold ones
    half = shift_and_scale(pump, Fraction(1, 2))
    assert [e.weight for e in half.edges] == [1, -9, -1]
    one = shift_and_scale(pump, Fraction(1))
    assert [e.weight for e in one.edges] == [0, -5, -1]
    assert [e.fair for e in half.edges] == [e.fair for e in pump.edges]
    assert half.names == pump.names and half.owners == pump.owners


def test_export_dot(pump):
    dot = export_dot(pump)
    assert dot.startswith("digraph arena {")
    assert '"q" [shape=circle];' in dot
    assert '"q" -> "p" [label="-4", style=dashed];' in dot
    assert dot.rstrip().endswith("}")


@given(seed=st.integers(0, 10_000), nodes=st.integers(1, 8),
       weight=st.integers(0, 9))
@settings(max_examples=40, deadline=None)
def test_generated_arena_round_trips(seed, nodes, weight):
    a = random_arena(nodes=nodes, max_weight=weight, fair=Owner.P1,
                     density=0.5, seed=seed)
    assert validate(a) == []
    assert parse_arena(serialize_arena(a)) == a


@given(
    num=st.integers(-20, 20),
    den=st.integers(1, 10),
    weights=st.lists(st.integers(-9, 9), min_size=1, max_size=6),
)
@settings(max_examples=60, deadline=None)
def test_shift_and_scale_orders_cycle_means(num, den, weights):
    """A cycle's mean clears v exactly when its shifted weight is >= 0."""
    v = Fraction(num, den)
    nodes = [(f"n{i}", Owner.P1) for i in range(len(weights))]
    edges = [
        (f"n{i}", f"n{(i + 1) % len(weights)}", w, False)
        for i, w in enumerate(weights)
    ]
    a = Arena.from_parts(nodes, edges)
    shifted = shift_and_scale(a, v)
    mean = Fraction(sum(weights), len(weights))
    total = sum(e.weight for e in shifted.edges)
    assert (mean >= v) == (total >= 0)
