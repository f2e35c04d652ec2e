"""Figure rendering for the report path.

Renders Cayley tables as annotated heatmaps and the corpus capability
matrix as a grid, written straight to files next to the delimited
output.  Uses the Agg backend so report runs work headless.
"""

from __future__ import annotations

from typing import Sequence, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .capabilities import CapabilityReport  # noqa: E402
from .corpus import NamedWitness  # noqa: E402


def save_table_figure(witness: NamedWitness, path: str) -> None:
    """Heatmap of one Cayley table with entries annotated.

    Absorber rows render in a muted band so the core block stands out.
    """
    table = witness.table
    n = table.n
    grid = [list(row) for row in table.rows]
    fig, ax = plt.subplots(figsize=(0.6 * n + 1.2, 0.6 * n + 1.2))
    ax.imshow(grid, cmap="viridis", vmin=0, vmax=n - 1)
    for i in range(n):
        for j in range(n):
            ax.text(j, i, str(grid[i][j]), ha="center", va="center",
                    color="white", fontsize=9)
    ax.set_xticks(range(n))
    ax.set_yticks(range(n))
    ax.set_xlabel("right operand")
    ax.set_ylabel("left operand")
    ax.set_title(witness.name)
    ax.axhline(1.5, color="white", linewidth=1.5)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_capability_matrix(entries: Sequence[Tuple[str, CapabilityReport]],
                           path: str) -> None:
    """Green/red grid of capability and property flags per corpus table."""
    columns = ("R", "D", "H", "assoc", "right id", "comm")
    names = [name for name, _ in entries]
    data = []
    for _, rep in entries:
        data.append([
            rep.has_r,
            rep.has_d,
            rep.has_h,
            rep.associative,
            rep.right_identity is not None,
            rep.commutative,
        ])
    fig, ax = plt.subplots(figsize=(0.9 * len(columns) + 2.0, 0.4 * len(names) + 1.4))
    colors = [[(0.22, 0.62, 0.29) if flag else (0.78, 0.26, 0.22) for flag in row]
              for row in data]
    ax.imshow([[0] * len(columns) for _ in names], alpha=0.0)
    for i, row in enumerate(colors):
        for j, color in enumerate(row):
            ax.add_patch(plt.Rectangle((j - 0.5, i - 0.5), 1, 1, color=color))
            ax.text(j, i, "yes" if data[i][j] else "no", ha="center", va="center",
                    color="white", fontsize=8)
    ax.set_xticks(range(len(columns)))
    ax.set_xticklabels(columns)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names)
    ax.set_xlim(-0.5, len(columns) - 0.5)
    ax.set_ylim(len(names) - 0.5, -0.5)
    ax.set_title("capability matrix")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
