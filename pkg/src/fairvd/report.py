"""Scaling experiment for the modular-decomposition DP.

Times ``solve_dp`` on complete multipartite graphs with a growing number of
parts and compares against ``c * 2**r * r * n**3``, with ``c`` fitted on the
smallest instance.  Results go to CSV and, optionally, a PNG plot.
"""

from __future__ import annotations

import csv
import time
from pathlib import Path

from .fairvc import solve_dp
from .families import complete_multipartite
from .modec import decompose, width

FIELDS = ("parts", "part_size", "n", "width", "seconds", "model", "ratio")


def model_cost(r: int, n: int) -> float:
    return 2.0 ** r * r * n ** 3


def run_scaling(parts=range(2, 10), part_size: int = 2, repeats: int = 5) -> list[dict]:
    """One row per part count; ``ratio`` is measured time over the fitted model."""
    rows = []
    for p in parts:
        g = complete_multipartite(*([part_size] * p))
        tree = decompose(g)
        r = width(tree)
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            solve_dp(g, tree)
            best = min(best, time.perf_counter() - t0)
        rows.append({"parts": p, "part_size": part_size, "n": g.n, "width": r,
                     "seconds": best, "model": model_cost(r, g.n)})
    c = rows[0]["seconds"] / rows[0]["model"]
    for row in rows:
        row["ratio"] = row["seconds"] / (c * row["model"])
    return rows


def write_csv(rows: list[dict], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=FIELDS)
        w.writeheader()
        for row in rows:
            w.writerow({k: (f"{row[k]:.6g}" if isinstance(row[k], float) else row[k])
                        for k in FIELDS})
    return path


def plot_scaling(rows: list[dict], path: str | Path) -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    c = rows[0]["seconds"] / rows[0]["model"]
    xs = [r["width"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(xs, [r["seconds"] for r in rows], "o-", label="measured")
    ax.semilogy(xs, [c * r["model"] for r in rows], "--", label="c 2^r r n^3")
    ax.semilogy(xs, [4 * c * r["model"] for r in rows], ":", color="grey", label="4x model")
    ax.set_xlabel("decomposition width r")
    ax.set_ylabel("seconds")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
