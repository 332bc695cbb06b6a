"""Bar charts for classification reports (rendered off-screen)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def bar_chart(values: Sequence[int], labels: Sequence[str], path: str | Path, title: str,
              xlabel: str, ylabel: str) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(values) + 2), 3.2))
    bars = ax.bar(range(len(values)), values, color="#4c72b0")
    ax.set_xticks(range(len(values)), labels)
    ax.bar_label(bars)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.margins(y=0.15)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def orbit_sizes_figure(sizes: Sequence[int], path: str | Path, title: str = "orbit sizes") -> Path:
    return bar_chart(sizes, [str(i) for i in range(len(sizes))], path, title, "orbit", "data in orbit")


def classes_by_dim_figure(counts: dict[int, int], path: str | Path, title: str = "classes by dimension") -> Path:
    dims = sorted(counts)
    return bar_chart([counts[d] for d in dims], [str(d) for d in dims], path, title, "dimension", "classes")
