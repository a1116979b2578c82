"""Figures from the CSV tables written by the command line tool.

Figures are written as SVG with a fixed hash salt and no date stamp, so the
same table always renders to the same bytes.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": (4.5, 3.2),
    "lines.linewidth": 1.2,
    "svg.hashsalt": "relwaves",
    "svg.fonttype": "path",
}


def read_columns(csv_path):
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise ValueError(f"{csv_path}: empty table")
        rows = [r for r in reader if r]
    cols = {}
    for j, name in enumerate(header):
        try:
            cols[name] = np.array([float(r[j]) for r in rows])
        except ValueError:
            cols[name] = np.array([r[j] for r in rows])
    return header, cols


def _pick(header, cols, names):
    missing = [c for c in names if c not in cols]
    if missing:
        raise ValueError(f"unknown column(s) {', '.join(missing)}; available: {', '.join(header)}")
    text = [c for c in names if cols[c].dtype.kind not in "fiub"]
    if text:
        raise ValueError(f"column(s) {', '.join(text)} are not numeric")
    return [cols[c] for c in names]


def emit_plot(csv_path, kind="line", x=None, y=None, z=None, overlay=None, out_path=None,
              xlabel=None, ylabel=None):
    """Render a CSV table to SVG and return the output path.

    kind="line": y may be a column name or list of names plotted against x.
    kind="heatmap": long-format (x, y, z) columns on a regular grid.
    overlay: optional callable g(x) drawn as a dashed curve over the data.
    """
    header, cols = read_columns(csv_path)
    out_path = Path(out_path) if out_path else Path(csv_path).with_suffix(".svg")
    return render(header, cols, out_path, kind, x, y, z, overlay, xlabel, ylabel)


def render(header, cols, out_path, kind="line", x=None, y=None, z=None, overlay=None,
           xlabel=None, ylabel=None):
    """Same as emit_plot for columns already in memory (dict name -> array)."""
    cols = {k: np.asarray(v) for k, v in cols.items()}
    out_path = Path(out_path)
    x = x or header[0]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        if kind == "line":
            ys = [y] if isinstance(y, str) else list(y or header[1:2])
            xv, *yv = _pick(header, cols, [x] + ys)
            if xv.size == 0:
                raise ValueError(f"{out_path.name}: no data rows to plot")
            for name, v in zip(ys, yv):
                ax.plot(xv, v, marker="o" if overlay is not None else None, ms=3,
                        ls="none" if overlay is not None else "-", label=name)
            if overlay is not None:
                xs = np.linspace(xv.min(), xv.max(), 400)
                ax.plot(xs, overlay(xs), "k--", lw=1, label="fit")
            if len(ys) > 1 or overlay is not None:
                ax.legend(frameon=False)
            ax.set_ylabel(ylabel or ", ".join(ys))
        elif kind == "heatmap":
            y = y or header[1]
            z = z or header[2]
            xv, yv, zv = _pick(header, cols, [x, y, z])
            if zv.size == 0:
                raise ValueError(f"{out_path.name}: no data rows to plot")
            xs, ys_ = np.unique(xv), np.unique(yv)
            if xs.size * ys_.size != zv.size:
                raise ValueError("heatmap columns do not form a regular grid")
            order = np.lexsort((yv, xv))
            Z = zv[order].reshape(xs.size, ys_.size)
            im = ax.imshow(Z.T, origin="lower", aspect="auto", cmap="RdBu_r" if Z.min() < 0 else "viridis",
                           extent=(xs[0], xs[-1], ys_[0], ys_[-1]), interpolation="nearest")
            fig.colorbar(im, ax=ax, label=z)
            ax.set_ylabel(ylabel or y)
        else:
            raise ValueError(f"unknown plot kind {kind!r}; expected 'line' or 'heatmap'")
        ax.set_xlabel(xlabel or x)
        fig.tight_layout()
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return out_path
