"""Shared arenas for the test suite.

The named arenas are small hand-analysable instances used throughout:

- ``pump``: two player-1 nodes; a +1 self-loop that pumps value and a fair
  −4 edge that drains it, with a free way back.  Its optimal mean is 1 but
  fair play only approaches it in the limit.
- ``drain``: a player-2 node with a −1 self-loop and a fair 0-weight exit
  to a 0-self-loop sink.  Fairness forces player 2 to leave eventually,
  which splits the energy verdicts from the mean-payoff ones.
- ``zero_loop`` / ``zero_loop_pair``: a player-1 node whose only fair
  cycle weighs 0, alone and with an added fair −1 excursion.  The pair
  flips the energy verdict while the threshold-0 mean-payoff verdict
  stays.
- ``chain``: a fair −3 step into a 0-self-loop node with a +1 way back;
  its minimal credits are nonzero.
"""

from __future__ import annotations

import pytest

from fairgames import Arena, parse_arena

PUMP_TEXT = """arena v1
node q p1
node p p1
edge q q 1
edge q p -4 fair
edge p q 0
"""

DRAIN_TEXT = """arena v1
node q p2
node r p1
edge q q -1
edge q r 0 fair
edge r r 0
"""

ZERO_LOOP_TEXT = """arena v1
node q p1
edge q q 0 fair
"""

ZERO_LOOP_PAIR_TEXT = """arena v1
node q p1
node r p1
edge q q 0 fair
edge q r -1 fair
edge r q 0
"""

CHAIN_TEXT = """arena v1
node q p1
node p p1
edge q p -3 fair
edge p p 0
edge p q 1
"""


@pytest.fixture
def pump() -> Arena:
    return parse_arena(PUMP_TEXT)


@pytest.fixture
def drain() -> Arena:
    return parse_arena(DRAIN_TEXT)


@pytest.fixture
def zero_loop() -> Arena:
    return parse_arena(ZERO_LOOP_TEXT)


@pytest.fixture
def zero_loop_pair() -> Arena:
    return parse_arena(ZERO_LOOP_PAIR_TEXT)


@pytest.fixture
def chain() -> Arena:
    return parse_arena(CHAIN_TEXT)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """End every run with one PASS/FAIL line per acceptance criterion."""
    rows = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in report.nodeid and report.when == "call":
                name = report.nodeid.split("::")[-1]
                rows.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if rows:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(rows):
            terminalreporter.write_line(f"{verdict}  {name}")
