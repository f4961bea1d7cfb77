"""Log-scale eigenvalue count histograms, single panel or side by side."""

from dataclasses import dataclass

import numpy as np

from ._mpl import plt
from .io import EmptyInput, load_eigenvalues, output_pair

MIN_EIGENVALUES = 1000


@dataclass(frozen=True)
class HistogramResult:
    written: tuple
    counts: tuple          # one count array per input panel
    bin_edges: tuple       # matching edge arrays


def plot_log_histogram(eigs_paths, bins=81, out="log_histogram"):
    """Count histogram(s) of adjacency eigenvalues with a log count axis.

    One path gives a single panel; two paths give side-by-side panels
    sharing the y scale, which is how a pair of degree laws is contrasted
    around the zero neighborhood. Fewer than 1000 eigenvalues in any
    input raises EmptyInput: log-count shapes are unreadable below that.
    """
    if isinstance(eigs_paths, (str, bytes)) or not hasattr(eigs_paths, "__iter__"):
        eigs_paths = [eigs_paths]
    eigs_paths = list(eigs_paths)
    if not 1 <= len(eigs_paths) <= 2:
        raise EmptyInput(f"need one or two inputs, got {len(eigs_paths)}")

    samples = []
    for p in eigs_paths:
        ev = load_eigenvalues(p)
        if len(ev) < MIN_EIGENVALUES:
            raise EmptyInput(
                f"{p}: {len(ev)} eigenvalues, need >= {MIN_EIGENVALUES}")
        samples.append(ev)

    fig, axes = plt.subplots(1, len(samples), figsize=(6 * len(samples), 4),
                             sharey=True, squeeze=False)
    all_counts, all_edges = [], []
    for ax, ev, path in zip(axes[0], samples, eigs_paths):
        counts, edges, _ = ax.hist(ev, bins=bins, color="#336699")
        ax.set_yscale("log")
        ax.set_xlabel("eigenvalue")
        ax.set_title(str(path))
        all_counts.append(counts)
        all_edges.append(edges)
    axes[0][0].set_ylabel("count (log scale)")
    fig.tight_layout()

    written = output_pair(out)
    for target in written:
        fig.savefig(target)
    plt.close(fig)
    return HistogramResult(tuple(map(str, written)),
                           tuple(all_counts), tuple(all_edges))
