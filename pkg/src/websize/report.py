"""Parameter sweeps over the sizing model and their CSV / Markdown / SVG output."""

from __future__ import annotations

import csv
import io
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InfeasibleSizing
from .sizing import (DelayModel, WorkloadParams, object_size, round_half_up,
                     solve_users_raw)

TABLE_HEADER = ["rho", "N", "mss", "model", "m_raw", "m", "n", "theta_raw", "theta"]
FIGURE_HEADER = ["x", "series", "y"]
INFEASIBLE = "infeasible"

REFERENCE_LOADS = (0.01, 0.05, 0.1)
REFERENCE_N_RANGE = (2, 9)
REFERENCE_MSS = (1460, 536)
RATIO_LOADS = tuple(round(0.01 * k, 2) for k in range(1, 21))

_MODEL_TITLES = {DelayModel.TDM_VACATION: "W_R=W_TDM", DelayModel.H2: "W_R=W_H"}


def fmt_real(x: float) -> str:
    return f"{x:.6g}"


@dataclass(frozen=True)
class SweepSpec:
    loads: Sequence[float] = REFERENCE_LOADS
    n_range: tuple = REFERENCE_N_RANGE  # inclusive
    mss_list: Sequence[int] = REFERENCE_MSS
    models: Sequence[DelayModel] = (DelayModel.TDM_VACATION, DelayModel.H2)

    def __post_init__(self):
        lo, hi = self.n_range
        if not (self.loads and self.mss_list and self.models) or hi < lo:
            raise ValueError("sweep needs non-empty loads, mss list, models and N range")
        for lam in self.loads:
            for mss in self.mss_list:
                WorkloadParams(lam, lo, mss)  # validates each axis value

    @property
    def n_values(self) -> range:
        return range(self.n_range[0], self.n_range[1] + 1)


REFERENCE_SPEC = SweepSpec()


@dataclass(frozen=True)
class TableRow:
    load: float
    N: int
    mss: int
    model: DelayModel
    m_raw: float
    m: int
    n: Optional[float]  # None marks an infeasible point
    theta_raw: Optional[float]
    theta: Optional[int]

    @property
    def feasible(self) -> bool:
        return self.theta is not None


@dataclass(frozen=True)
class MeanRow:
    load: float
    mss: int
    model: DelayModel
    theta: Optional[int]


@dataclass
class Table:
    spec: SweepSpec
    rows: list = field(default_factory=list)
    means: list = field(default_factory=list)

    def lookup(self, load, N, mss, model) -> TableRow:
        for r in self.rows:
            if (r.load, r.N, r.mss, r.model) == (load, N, mss, model):
                return r
        raise KeyError((load, N, mss, model))

    def mean(self, load, mss, model) -> Optional[int]:
        for r in self.means:
            if (r.load, r.mss, r.model) == (load, mss, model):
                return r.theta
        raise KeyError((load, mss, model))


def table_row(load: float, N: int, mss: int, model: DelayModel) -> TableRow:
    params = WorkloadParams(load, N, mss)
    try:
        res = object_size(params, model)
    except InfeasibleSizing as exc:
        m_raw = solve_users_raw(load, N)
        return TableRow(load, N, mss, model, m_raw, exc.users, None, None, None)
    return TableRow(load, N, mss, model, res.m_raw, res.m, res.n, res.theta_raw, res.theta)


def object_size_table(spec: SweepSpec = REFERENCE_SPEC) -> Table:
    """One row per (load, mss, model, N) plus a mean-over-N row per (load, mss, model).

    The mean is taken over the rounded sizes of the feasible N and rounded
    again; it is ``None`` when no N is feasible.
    """
    table = Table(spec)
    for load in spec.loads:
        for mss in spec.mss_list:
            for model in spec.models:
                group = [table_row(load, N, mss, model) for N in spec.n_values]
                table.rows.extend(group)
                sizes = [r.theta for r in group if r.feasible]
                mean = round_half_up(sum(sizes) / len(sizes)) if sizes else None
                table.means.append(MeanRow(load, mss, model, mean))
    return table


@dataclass
class Figure:
    title: str
    xlabel: str
    ylabel: str
    series: dict = field(default_factory=dict)  # name -> list of (x, y)
    notes: list = field(default_factory=list)

    def add(self, name: str, x: float, y: float) -> None:
        self.series.setdefault(name, []).append((x, y))


def users_figure(loads: Sequence[float] = REFERENCE_LOADS,
                 n_range: tuple = REFERENCE_N_RANGE) -> Figure:
    """Raw (un-rounded) concurrent users against N, one series per load."""
    fig = Figure("Number of users m vs N", "N", "m")
    for lam in loads:
        for N in range(n_range[0], n_range[1] + 1):
            fig.add(f"rho={lam:g}", N, solve_users_raw(lam, N))
    return fig


def ratio_figure(loads: Sequence[float] = RATIO_LOADS, n_range: tuple = REFERENCE_N_RANGE,
                 mss_list: Sequence[int] = REFERENCE_MSS) -> Figure:
    """Object-size ratio TDM/H2 against load.

    Per mss two series: ``mean_ratio`` (mean over N of the per-N ratio) and
    ``ratio_of_means`` (mean TDM size over mean H2 size). N values whose H2
    or TDM sizing is infeasible are left out and reported in the ``excluded_N``
    series and in ``notes``.
    """
    fig = Figure("Object size ratio TDM/H2 vs rho", "rho", "ratio")
    for lam in loads:
        for mss in mss_list:
            tdm, h2 = [], []
            for N in range(n_range[0], n_range[1] + 1):
                a = table_row(lam, N, mss, DelayModel.TDM_VACATION)
                b = table_row(lam, N, mss, DelayModel.H2)
                if not (a.feasible and b.feasible):
                    if mss == mss_list[0]:
                        fig.add("excluded_N", lam, N)
                        fig.notes.append(f"rho={lam:g} N={N}: sizing infeasible, excluded")
                    continue
                tdm.append(a)
                h2.append(b)
            if not h2:
                continue
            ratios = [a.n / b.n for a, b in zip(tdm, h2)]
            fig.add(f"mean_ratio_mss{mss}", lam, sum(ratios) / len(ratios))
            fig.add(f"ratio_of_means_mss{mss}", lam,
                    sum(a.theta_raw for a in tdm) / sum(b.theta_raw for b in h2))
    return fig


# ---------------------------------------------------------------- emitters

def table_csv_rows(table: Table) -> list:
    out = []
    for r in table.rows:
        bad = not r.feasible
        out.append([
            fmt_real(r.load), str(r.N), str(r.mss), r.model.value, fmt_real(r.m_raw), str(r.m),
            INFEASIBLE if bad else fmt_real(r.n),
            INFEASIBLE if bad else fmt_real(r.theta_raw),
            INFEASIBLE if bad else str(r.theta),
        ])
    for r in table.means:
        theta = INFEASIBLE if r.theta is None else str(r.theta)
        out.append([fmt_real(r.load), "mean", str(r.mss), r.model.value, "", "", "", "", theta])
    return out


def write_csv(header, rows, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def table_markdown(table: Table) -> str:
    spec = table.spec
    cols = [(mss, model) for mss in spec.mss_list for model in spec.models]
    parts = []
    for load in spec.loads:
        parts.append(f"### Mean object size (bytes), rho = {load:g}\n")
        head = ["N"] + [f"{_MODEL_TITLES[model]} mss={mss}" for mss, model in cols]
        parts.append("| " + " | ".join(head) + " |")
        parts.append("|" + "---|" * len(head))
        for N in spec.n_values:
            cells = []
            for mss, model in cols:
                row = table.lookup(load, N, mss, model)
                cells.append(str(row.theta) if row.feasible else INFEASIBLE)
            parts.append("| " + " | ".join([str(N)] + cells) + " |")
        means = [table.mean(load, mss, model) for mss, model in cols]
        parts.append("| mean | " + " | ".join(
            INFEASIBLE if t is None else str(t) for t in means) + " |")
        parts.append("")
    return "\n".join(parts)


def figure_csv_rows(fig: Figure) -> list:
    return [[fmt_real(x), name, fmt_real(y)]
            for name, points in fig.series.items() for x, y in points]


def table_as_figure(table: Table) -> Figure:
    fig = Figure("Mean object size vs N", "N", "theta (bytes)")
    for r in table.rows:
        if r.feasible:
            fig.add(f"rho={r.load:g} {r.model.value} mss={r.mss}", r.N, r.theta)
    return fig


def render(obj, fmt: str) -> str:
    """Serialize a :class:`Table` or :class:`Figure` to text in ``fmt`` (csv, md, svg)."""
    if fmt == "svg":
        from .plotting import figure_svg

        return figure_svg(table_as_figure(obj) if isinstance(obj, Table) else obj)
    if fmt == "md":
        if not isinstance(obj, Table):
            raise ValueError("markdown output is only defined for tables")
        return table_markdown(obj)
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    if isinstance(obj, Table):
        write_csv(TABLE_HEADER, table_csv_rows(obj), buf)
    else:
        write_csv(FIGURE_HEADER, figure_csv_rows(obj), buf)
    return buf.getvalue()


def emit(obj, fmt: str = "csv", destination=None) -> None:
    """Write ``obj`` to a path, an open text stream, or stdout (``None`` / ``"-"``)."""
    text = render(obj, fmt)
    if destination is None or destination == "-":
        sys.stdout.write(text)
        return
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {os.fspath(destination)}: {exc.strerror}") from exc


def parse_table_csv(text: str) -> list:
    """Read back the per-N rows of a table CSV as dicts of typed values."""
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        if rec["N"] == "mean":
            continue

        def real(key):
            return None if rec[key] == INFEASIBLE else float(rec[key])

        rows.append({
            "rho": float(rec["rho"]), "N": int(rec["N"]), "mss": int(rec["mss"]),
            "model": DelayModel(rec["model"]), "m_raw": float(rec["m_raw"]),
            "m": int(rec["m"]), "n": real("n"), "theta_raw": real("theta_raw"),
            "theta": None if rec["theta"] == INFEASIBLE else int(rec["theta"]),
        })
    return rows
