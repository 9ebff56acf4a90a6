"""Gadget reductions that eliminate fairness from an arena.

Each fair node is replaced by a small branching structure in which the
player owning it either escapes (paying a penalty large enough that
escaping is only worthwhile when the fair continuation is hopeless) or
promises to keep playing fairly, with the opponent choosing between
granting a compensating bonus along a fair edge and letting the play be
simulated as-is.  Solving the resulting ordinary mean-payoff or energy
game yields the winning regions of the fair game after projecting the
auxiliary nodes away.

Three constructions are provided: one per combination of game and owner
of the fair nodes that admits a reduction.  The remaining combination —
energy with player-2 fairness — has no gadget and is handled by
decomposition elsewhere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .arena import Arena, Owner
from .energy import WinRegions

ROLE_COPIED = "copied"
ROLE_FAIR = "fair-branch"
ROLE_SIMULATION = "simulation-branch"
ROLE_ESCAPE = "escape-branch"
ROLE_VALUE = "value-branch"
ROLE_POSITIVE = "positive-value"
ROLE_ZERO = "zero-value"


class GadgetKind(enum.Enum):
    FAIR_MP1 = "fair-mp-1"
    FAIR_MP2 = "fair-mp-2"
    FAIR_ENERGY1 = "fair-energy-1"


class GadgetError(ValueError):
    pass


@dataclass(frozen=True)
class GadgetMap:
    """Bookkeeping linking a gadget arena back to its source.

    ``original_of`` maps gadget node ids of original nodes back to their
    source ids (auxiliary nodes are absent).  ``parts`` maps each fair
    source node to its auxiliary nodes by role name.  ``branch_role``
    labels every gadget edge.  ``weight_scale`` divides gadget credits
    back into source-arena units.
    """

    kind: GadgetKind
    original_of: dict[int, int]
    parts: dict[int, dict[str, int]]
    branch_role: dict[tuple[int, int], str]
    weight_scale: int


def _require_side(a: Arena, kind: GadgetKind) -> None:
    if not a.fair_nodes:
        return
    side = a.fairness_side
    if side is None:
        raise GadgetError("fair nodes are split between both players")
    wanted = Owner.P2 if kind is GadgetKind.FAIR_MP2 else Owner.P1
    if side is not wanted:
        raise GadgetError(
            f"{kind.value} expects fair nodes owned by {wanted}, got {side}"
        )


def build_gadget(a: Arena, kind: GadgetKind) -> tuple[Arena, GadgetMap]:
    """Build the fairness-eliminating gadget arena and its bookkeeping.

    Original nodes keep their ids and names; auxiliary nodes are appended
    after them.  An arena without fair nodes comes back as a plain copy
    (weight-scaled for the energy kind) so callers need not special-case
    it.
    """
    _require_side(a, kind)
    n, w = a.n, a.W
    scale = n + 1 if kind is GadgetKind.FAIR_ENERGY1 else 1
    fair_bonus = scale * (n * w + 1)
    escape_penalty = scale * (n * n * w + n)

    names = list(a.names)
    used = set(names)
    owners = list(a.owners)
    parts: dict[int, dict[str, int]] = {}
    edges: list[tuple[int, int, int]] = []
    roles: dict[tuple[int, int], str] = {}

    def fresh(base: str, owner: Owner) -> int:
        name = base
        while name in used:
            name += "_"
        used.add(name)
        names.append(name)
        owners.append(owner)
        return len(names) - 1

    def add(src: int, dst: int, weight: int, role: str) -> None:
        edges.append((src, dst, weight))
        roles[(src, dst)] = role

    mine = Owner.P1 if kind is not GadgetKind.FAIR_MP2 else Owner.P2
    theirs = mine.opponent()

    for q in range(n):
        if not a.is_fair_node(q):
            for e in a.out_edges(q):
                add(q, e.dst, scale * e.weight, ROLE_COPIED)
            continue
        base = a.names[q]
        if kind in (GadgetKind.FAIR_MP1, GadgetKind.FAIR_MP2):
            q_l = fresh(base + "_l", theirs)
            q_r = fresh(base + "_r", theirs)
            q_fair = fresh(base + "_fair", theirs)
            q_sim = fresh(base + "_sim", mine)
            q_esc = fresh(base + "_esc", mine)
            parts[q] = {"l": q_l, "r": q_r, "fair": q_fair,
                        "sim": q_sim, "esc": q_esc}
            sign = 1 if kind is GadgetKind.FAIR_MP1 else -1
            add(q, q_l, 0, ROLE_SIMULATION)
            add(q, q_r, 0, ROLE_ESCAPE)
            add(q_l, q_fair, sign * fair_bonus, ROLE_FAIR)
            add(q_l, q_sim, 0, ROLE_SIMULATION)
            add(q_r, q_esc, -sign * escape_penalty, ROLE_ESCAPE)
            for e in a.fair_out(q):
                add(q_fair, e.dst, e.weight, ROLE_FAIR)
            for e in a.out_edges(q):
                add(q_sim, e.dst, e.weight, ROLE_SIMULATION)
                add(q_esc, e.dst, e.weight, ROLE_ESCAPE)
        else:
            q_l = fresh(base + "_l", Owner.P2)
            q_r = fresh(base + "_r", Owner.P2)
            q_fair = fresh(base + "_fair", Owner.P2)
            q_zero = fresh(base + "_zero", Owner.P2)
            q_val = fresh(base + "_val", Owner.P1)
            q_pos = fresh(base + "_pos", Owner.P1)
            q_esc = fresh(base + "_esc", Owner.P1)
            parts[q] = {"l": q_l, "r": q_r, "fair": q_fair, "zero": q_zero,
                        "val": q_val, "pos": q_pos, "esc": q_esc}
            add(q, q_l, 0, ROLE_VALUE)
            add(q, q_r, 0, ROLE_ESCAPE)
            add(q_l, q_fair, fair_bonus, ROLE_FAIR)
            add(q_l, q_val, 0, ROLE_VALUE)
            add(q_val, q_pos, -1, ROLE_POSITIVE)
            add(q_val, q_zero, 0, ROLE_ZERO)
            add(q_r, q_esc, -escape_penalty, ROLE_ESCAPE)
            for e in a.fair_out(q):
                add(q_fair, e.dst, scale * e.weight, ROLE_FAIR)
                add(q_zero, e.dst, scale * e.weight, ROLE_ZERO)
            for e in a.out_edges(q):
                add(q_pos, e.dst, scale * e.weight, ROLE_POSITIVE)
                add(q_esc, e.dst, scale * e.weight, ROLE_ESCAPE)

    gadget = Arena.from_parts(
        list(zip(names, owners)),
        [(names[src], names[dst], weight, False) for src, dst, weight in edges],
    )
    gmap = GadgetMap(
        kind=kind,
        original_of={q: q for q in range(n)},
        parts=parts,
        branch_role=roles,
        weight_scale=scale,
    )
    return gadget, gmap


def project_regions(regions: WinRegions, gmap: GadgetMap) -> WinRegions:
    """Restrict gadget-arena regions to the original nodes, dividing
    credits back down by the weight scale (rounding up)."""
    keep = gmap.original_of
    scale = gmap.weight_scale

    def back(nodes: frozenset[int]) -> frozenset[int]:
        return frozenset(keep[q] for q in nodes if q in keep)

    credit = {
        keep[q]: -(-c // scale)
        for q, c in regions.credit.items()
        if q in keep
    }
    value = {
        keep[q]: v / scale
        for q, v in regions.value.items()
        if q in keep
    }
    return WinRegions(
        win1=back(regions.win1),
        win2=back(regions.win2),
        undetermined=back(regions.undetermined),
        credit=credit,
        value={q: Fraction(v) for q, v in value.items()},
    )
