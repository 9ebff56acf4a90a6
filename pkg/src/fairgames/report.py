"""File reports: a regions table (CSV) plus a rendered arena picture.

``write_report`` drops two files into a directory: ``regions.csv`` with
one row per node (owner, region, minimal credit, optimal value where
known) and ``arena.png`` drawing the arena with nodes colored by region.
Rendering builds a Figure directly on the Agg canvas, so no global
matplotlib state is touched and no display is needed.
"""

from __future__ import annotations

import csv
import math
import os
from fractions import Fraction

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from matplotlib.patches import FancyArrowPatch

from .arena import Arena, Owner, format_rational
from .energy import WinRegions

_REGION_COLORS = {
    "win1": "#7fc97f",
    "win2": "#f0027f",
    "undetermined": "#bdbdbd",
}


def _region_of(regions: WinRegions, q: int) -> str:
    if q in regions.win1:
        return "win1"
    if q in regions.win2:
        return "win2"
    return "undetermined"


def write_report(
    directory: str,
    a: Arena,
    regions: WinRegions,
    values: dict[int, Fraction] | None = None,
) -> tuple[str, str]:
    """Write ``regions.csv`` and ``arena.png`` into ``directory``
    (created if missing); returns the two paths."""
    os.makedirs(directory, exist_ok=True)
    csv_path = os.path.join(directory, "regions.csv")
    png_path = os.path.join(directory, "arena.png")
    values = values or {}

    with open(csv_path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["node", "owner", "region", "credit", "value"])
        for q in range(a.n):
            credit = regions.credit.get(q)
            value = values.get(q)
            writer.writerow(
                [
                    a.names[q],
                    str(a.owners[q]),
                    _region_of(regions, q),
                    "" if credit is None else credit,
                    "" if value is None else format_rational(Fraction(value)),
                ]
            )

    _draw_arena(png_path, a, regions)
    return csv_path, png_path


def _positions(n: int) -> list[tuple[float, float]]:
    if n == 1:
        return [(0.0, 0.0)]
    return [
        (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n))
        for i in range(n)
    ]


def _draw_arena(path: str, a: Arena, regions: WinRegions) -> None:
    fig = Figure(figsize=(7, 7), dpi=100)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)
    ax.set_aspect("equal")
    ax.axis("off")
    pos = _positions(a.n)

    for e in a.edges:
        style = "--" if e.fair else "-"
        color = "#1f78b4" if e.fair else "#555555"
        if e.src == e.dst:
            x, y = pos[e.src]
            # a small loop above the node
            loop = FancyArrowPatch(
                (x - 0.05, y + 0.09),
                (x + 0.05, y + 0.09),
                connectionstyle="arc3,rad=2.5",
                arrowstyle="-|>",
                mutation_scale=12,
                linestyle=style,
                color=color,
            )
            ax.add_patch(loop)
            ax.annotate(
                str(e.weight),
                (x, y + 0.30),
                ha="center",
                fontsize=9,
                color=color,
            )
            continue
        (x1, y1), (x2, y2) = pos[e.src], pos[e.dst]
        arrow = FancyArrowPatch(
            (x1, y1),
            (x2, y2),
            connectionstyle="arc3,rad=0.12",
            arrowstyle="-|>",
            mutation_scale=12,
            shrinkA=14,
            shrinkB=14,
            linestyle=style,
            color=color,
        )
        ax.add_patch(arrow)
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        # nudge the label off the chord, matching the arc's bend side
        dx, dy = x2 - x1, y2 - y1
        norm = math.hypot(dx, dy) or 1.0
        ax.annotate(
            str(e.weight),
            (mx - 0.18 * dy / norm, my + 0.18 * dx / norm),
            ha="center",
            fontsize=9,
            color=color,
        )

    for q in range(a.n):
        x, y = pos[q]
        color = _REGION_COLORS[_region_of(regions, q)]
        marker = "o" if a.owners[q] is Owner.P1 else "s"
        ax.plot(
            [x],
            [y],
            marker=marker,
            markersize=26,
            markerfacecolor=color,
            markeredgecolor="#222222",
            linestyle="",
        )
        ax.annotate(a.names[q], (x, y), ha="center", va="center", fontsize=9)

    handles = [
        ax.plot(
            [],
            [],
            marker="o",
            linestyle="",
            markerfacecolor=color,
            markeredgecolor="#222222",
            label=label,
        )[0]
        for label, color in _REGION_COLORS.items()
    ]
    ax.legend(handles=handles, loc="lower left", fontsize=8, frameon=False)
    ax.set_xlim(-1.5, 1.5)
    ax.set_ylim(-1.5, 1.5)
    fig.savefig(path, metadata={"Software": "fairgames"})
