"""Seeded random arena generation.

Arenas produced here always pass validation: every node gets at least
one outgoing edge, at most one edge connects any ordered node pair, and
when a fairness side is requested all fair edges originate from nodes of
that side (with at least one fair edge overall).  The same seed always
yields the same arena.
"""

from __future__ import annotations

import random

from .arena import Arena, Owner


def random_arena(
    nodes: int,
    max_weight: int,
    fair: Owner | None = None,
    density: float = 0.35,
    seed: int = 0,
) -> Arena:
    """A random arena with ``nodes`` nodes and weights in
    [-max_weight, max_weight].  ``fair`` picks which player's nodes may
    carry fair edges (None for a regular arena); ``density`` is the
    probability of each optional edge beyond the forced out-degree."""
    if nodes < 1:
        raise ValueError("need at least one node")
    if max_weight < 0:
        raise ValueError("max_weight must be >= 0")
    if not 0 <= density <= 1:
        raise ValueError("density must be within [0, 1]")
    rng = random.Random(seed)
    owners = [rng.choice((Owner.P1, Owner.P2)) for _ in range(nodes)]
    if fair is not None:
        owners[0] = fair

    weights: dict[tuple[int, int], int] = {}
    for src in range(nodes):
        dst = rng.randrange(nodes)
        weights[(src, dst)] = rng.randint(-max_weight, max_weight)
    for src in range(nodes):
        for dst in range(nodes):
            if (src, dst) not in weights and rng.random() < density:
                weights[(src, dst)] = rng.randint(-max_weight, max_weight)

    fair_pairs: set[tuple[int, int]] = set()
    if fair is not None:
        for q in range(nodes):
            if owners[q] is not fair:
                continue
            if q != 0 and rng.random() >= 0.4:
                continue
            outs = sorted(dst for src, dst in weights if src == q)
            count = rng.randint(1, len(outs))
            fair_pairs.update((q, dst) for dst in rng.sample(outs, count))

    return Arena.from_parts(
        nodes=[(f"n{i}", owners[i]) for i in range(nodes)],
        edges=[
            (f"n{src}", f"n{dst}", w, (src, dst) in fair_pairs)
            for (src, dst), w in sorted(weights.items())
        ],
    )
