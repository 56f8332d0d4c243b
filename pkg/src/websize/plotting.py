"""Matplotlib rendering of sweep figures.

Output is byte-stable: SVG ids are salted with a constant and the date
metadata is dropped. Each data series is drawn as one line whose SVG group
id is ``series-<name>``.
"""

from __future__ import annotations

import io
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_RC = {
    "svg.hashsalt": "websize",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "legend.fontsize": 7,
}


def _draw(fig_data):
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    for name, points in fig_data.series.items():
        if name == "excluded_N":
            continue
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        (line,) = ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2, label=name)
        line.set_gid(f"series-{name}")
    ax.set_xlabel(fig_data.xlabel)
    ax.set_ylabel(fig_data.ylabel)
    ax.set_title(fig_data.title)
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    return fig


def figure_svg(fig_data) -> str:
    with matplotlib.rc_context(_RC):
        fig = _draw(fig_data)
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buf.getvalue()


def save_figure(fig_data, path) -> None:
    """Render to ``path``; the format follows the suffix (svg, png, pdf)."""
    fmt = os.path.splitext(os.fspath(path))[1].lstrip(".").lower() or "svg"
    with matplotlib.rc_context(_RC):
        fig = _draw(fig_data)
        meta = {"svg": {"Date": None}, "pdf": {"CreationDate": None}}.get(fmt, {})
        try:
            fig.savefig(path, format=fmt, metadata=meta)
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write {os.fspath(path)}: {exc.strerror}") from exc
        finally:
            plt.close(fig)
