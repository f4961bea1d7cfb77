"""Branch locus figure: all q(c) solutions with the branch point marked."""

import math
from dataclasses import dataclass

import numpy as np

from ._mpl import plt
from .io import load_locus, output_pair

BRANCH_POINT = (math.e, 1.0 / math.e)


@dataclass(frozen=True)
class LocusResult:
    written: tuple
    annotation: tuple      # the (c, q) point the figure marks
    max_branches: int      # largest solution count at a single c


def plot_locus(locus_csv, out="locus"):
    """Scatter of every (c, q) row with the pitchfork point annotated.

    Below the branch point each c carries a single row and the figure is
    one curve; above it the three branches appear on their own. The
    annotation constants e and 1/e are mathematical literals, not
    recomputed quantities.
    """
    c, q = load_locus(locus_csv)

    counts = {}
    for ci in c:
        counts[ci] = counts.get(ci, 0) + 1
    max_branches = max(counts.values())

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.scatter(c, q, s=14, color="#224477", zorder=3)
    bx, by = BRANCH_POINT
    ax.scatter([bx], [by], marker="x", s=70, color="#cc3311", zorder=4)
    ax.annotate(f"({bx:.5f}, {by:.5f})", xy=BRANCH_POINT,
                xytext=(bx + 0.08, by + 0.05), fontsize=9, color="#cc3311")
    ax.set_xlabel("c")
    ax.set_ylabel("q")
    fig.tight_layout()

    written = output_pair(out)
    for target in written:
        fig.savefig(target)
    plt.close(fig)
    return LocusResult(tuple(map(str, written)), BRANCH_POINT, max_branches)
