"""Time sweeps over the entropy toolkit, figure presets and CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core import BlochVector, ModelConfig, bloch_grid
from .entropies import EntropyRecord, info_entropy, von_neumann
from .errors import DomainError
from .wehrl import (
    DEFAULT_POLICY,
    SeriesPolicy,
    WehrlMethod,
    rescale_w_phi,
    rescale_w_theta,
    rescaled_z_half_pi,
    w_phi,
    w_theta,
    z_phi,
    z_theta,
)

QUANTITIES = ("bloch", "gamma", "H", "W", "rescaled", "Z", "Z_hat")
THREADS_ENV = "WEHRL_JCM_THREADS"
FIGURE_T_MAX = 50.0
FIGURE_T_STEPS = 2000


def format_angle(angle: float) -> str:
    """Angle as a multiple of pi for column headers, e.g. 0.25pi."""
    return f"{round(angle / math.pi, 12):g}pi"


def _columns(quantities, z_thetas, z_phis) -> list[str]:
    cols = ["t"]
    if "bloch" in quantities:
        cols += ["b", "c", "h", "eta"]
    if "gamma" in quantities:
        cols.append("gamma")
    if "H" in quantities:
        cols += ["H_b", "H_c", "H_h"]
    if "W" in quantities:
        cols += ["W_theta", "W_phi"]
    if "rescaled" in quantities:
        cols += ["W_theta_hat", "W_rescaled"]
    if "Z" in quantities:
        cols += [f"Z_theta@{format_angle(a)}" for a in z_thetas]
        cols += [f"Z_phi@{format_angle(a)}" for a in z_phis]
    if "Z_hat" in quantities:
        cols.append("Z_half_pi_hat")
    return cols


@dataclass
class SweepResult:
    config: ModelConfig
    records: list[EntropyRecord]
    quantities: tuple[str, ...]
    z_thetas: tuple[float, ...] = ()
    z_phis: tuple[float, ...] = ()
    meta: dict = field(default_factory=dict)

    @property
    def columns(self) -> list[str]:
        cols = _columns(self.quantities, self.z_thetas, self.z_phis)
        if any(r.error for r in self.records):
            cols.append("error")
        return cols

    def rows(self) -> list[dict]:
        """One flat mapping per record, keyed by column name; NaN marks a failed value."""
        columns = self.columns
        out = []
        for rec in self.records:
            b, c, h = rec.bloch.as_tuple() if rec.bloch is not None else (math.nan,) * 3
            flat = {
                "t": rec.t,
                "b": b,
                "c": c,
                "h": h,
                "eta": rec.eta,
                "gamma": rec.gamma,
                "H_b": rec.H_b,
                "H_c": rec.H_c,
                "H_h": rec.H_h,
                "W_theta": rec.W_theta,
                "W_phi": rec.W_phi,
                "W_theta_hat": rec.W_theta_hat,
                "W_rescaled": rec.W_rescaled,
                "Z_half_pi_hat": rec.Z_half_pi_hat,
                "error": rec.error or "",
            }
            for a in self.z_thetas:
                flat[f"Z_theta@{format_angle(a)}"] = rec.Z_theta_at.get(a)
            for a in self.z_phis:
                flat[f"Z_phi@{format_angle(a)}"] = rec.Z_phi_at.get(a)
            out.append({col: flat[col] for col in columns})
        return out

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows()], dtype=float)


@dataclass(frozen=True)
class FigurePreset:
    """Parameters of one published figure; one config per panel group."""

    name: str
    panels: tuple[tuple[str, ModelConfig], ...]
    quantities: tuple[str, ...]
    z_thetas: tuple[float, ...] = ()
    z_phis: tuple[float, ...] = ()

    @property
    def configs(self) -> tuple[ModelConfig, ...]:
        return tuple(cfg for _, cfg in self.panels)


def _panels(varthetas, **kwargs):
    return tuple(
        (
            f"vartheta{format_angle(vt)}",
            ModelConfig.uniform(5.0, vt, FIGURE_T_MAX, FIGURE_T_STEPS, **kwargs),
        )
        for vt in varthetas
    )


def figure_preset(name: str, **config_kwargs) -> FigurePreset:
    """Preset for figure ``fig1``, ``fig2`` or ``fig3`` (alpha = 5, T in [0, 50], 2000 points)."""
    quarter = 0.25 * math.pi
    if name == "fig1":
        return FigurePreset(name, _panels((0.0, quarter), **config_kwargs), ("gamma", "H"))
    if name == "fig2":
        return FigurePreset(name, _panels((0.0, quarter), **config_kwargs), ("W", "rescaled"))
    if name == "fig3":
        return FigurePreset(
            name, _panels((0.0,), **config_kwargs), ("Z",), z_thetas=(quarter,), z_phis=(quarter,)
        )
    raise DomainError(f"unknown preset {name!r}; valid presets: fig1, fig2, fig3")


def _thread_count(threads):
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, int(threads))


def _record_at(t, bch, quantities, z_thetas, z_phis, literal, z_method, policy, quad_tol):
    rec = EntropyRecord(t=t)
    errors = []

    def attempt(fn):
        try:
            return fn()
        except (ArithmeticError, ValueError) as exc:
            errors.append(f"{type(exc).__name__}: {exc}")
            return math.nan

    try:
        v = BlochVector(*bch)
    except DomainError as exc:
        rec.error = f"DomainError: {exc}"
        rec.bloch = None
        return rec
    rec.bloch = v
    rec.eta = math.sqrt(v.b * v.b + v.c * v.c + v.h * v.h)
    if "gamma" in quantities:
        rec.gamma = attempt(lambda: von_neumann(min(rec.eta, 1.0)))
    if "H" in quantities:
        rec.H_b = attempt(lambda: info_entropy(v.b))
        rec.H_c = attempt(lambda: info_entropy(v.c))
        rec.H_h = attempt(lambda: info_entropy(v.h))
    need_w = "W" in quantities or "rescaled" in quantities
    if need_w:
        wt = attempt(lambda: w_theta(v.h))
        wp = attempt(lambda: w_phi(v.b, v.c))
        if "W" in quantities:
            rec.W_theta, rec.W_phi = wt, wp
        if "rescaled" in quantities:
            rec.W_theta_hat = attempt(lambda: rescale_w_theta(wt))
            rec.W_rescaled = attempt(lambda: rescale_w_phi(wp, literal=literal))
    if "Z" in quantities:
        for a in z_thetas:
            rec.Z_theta_at[a] = attempt(lambda: z_theta(v, a, z_method, policy, quad_tol))
        for a in z_phis:
            rec.Z_phi_at[a] = attempt(lambda: z_phi(v, a, z_method, policy, quad_tol))
    if "Z_hat" in quantities:
        rec.Z_half_pi_hat = attempt(lambda: rescaled_z_half_pi(v.b, v.c, literal=literal))
    rec.error = "; ".join(errors) or None
    return rec


def run_sweep(
    config: ModelConfig,
    quantities=("bloch", "gamma", "H", "W", "rescaled"),
    *,
    z_thetas=(),
    z_phis=(),
    paper_literal: bool = False,
    threads: int | None = None,
    z_method: WehrlMethod = WehrlMethod.QUADRATURE,
    policy: SeriesPolicy = DEFAULT_POLICY,
) -> SweepResult:
    """Evaluate the requested quantities at every time of ``config.t_grid``.

    Records are independent, so ``threads`` (default: $WEHRL_JCM_THREADS or 1)
    changes wall time only.  A failure at one time point is stored in that
    record's ``error`` field and leaves NaN in the affected quantity.
    """
    requested = set(quantities)
    unknown = requested - set(QUANTITIES)
    quantities = tuple(q for q in QUANTITIES if q in requested)
    if unknown:
        raise DomainError(f"unknown quantities {sorted(unknown)}")
    z_thetas = tuple(float(a) for a in z_thetas)
    z_phis = tuple(float(a) for a in z_phis)
    if "Z" in quantities and not (z_thetas or z_phis):
        raise DomainError("quantity Z needs at least one theta or phi angle")
    started = time.perf_counter()
    b, c, h = bloch_grid(config)
    jobs = [(t, (bi, ci, hi)) for t, bi, ci, hi in zip(config.t_grid, b, c, h)]
    n_threads = _thread_count(threads)

    def work(job):
        return _record_at(
            job[0], job[1], quantities, z_thetas, z_phis, paper_literal, z_method, policy, config.quad_tol
        )

    if n_threads == 1:
        records = [work(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            records = list(pool.map(work, jobs))
    meta = {
        "tool": "wehrl_jcm",
        "version": __version__,
        "constants": "paper-literal" if paper_literal else "exact",
        "z_method": z_method.value,
        "threads": n_threads,
        "config": {
            "alpha": config.alpha,
            "vartheta": config.vartheta,
            "n_max": config.n_max,
            "t_min": config.t_grid[0],
            "t_max": config.t_grid[-1],
            "t_steps": len(config.t_grid),
            "series_tol": config.series_tol,
            "quad_tol": config.quad_tol,
            "ground_vacuum": config.ground_vacuum,
        },
        "quantities": list(quantities),
        "z_thetas": list(z_thetas),
        "z_phis": list(z_phis),
        "wall_time_s": time.perf_counter() - started,
    }
    return SweepResult(config, records, quantities, z_thetas, z_phis, meta)


def _csv_cell(value):
    if isinstance(value, str):
        return value
    if value is None:
        return "nan"
    return format(float(value), ".17g")


def _render_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows():
        writer.writerow([_csv_cell(v) for v in row.values()])
    return buf.getvalue()


def _json_value(value):
    if isinstance(value, str) or value is None:
        return value
    value = float(value)
    return value if math.isfinite(value) else None


def _render_json(result: SweepResult) -> str:
    records = [{k: _json_value(v) for k, v in row.items()} for row in result.rows()]
    return json.dumps({"meta": result.meta, "records": records}, indent=1, allow_nan=False) + "\n"


def write_output(result: SweepResult, fmt: str = "csv", path="-") -> None:
    """Write ``result`` as CSV or JSON to ``path`` ("-" for stdout)."""
    if fmt == "csv":
        text = _render_csv(result)
    elif fmt == "json":
        text = _render_json(result)
    else:
        raise DomainError(f"unknown format {fmt!r}; use csv or json")
    if path in ("-", None):
        sys.stdout.write(text)
        return
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def gnuplot_script(preset: FigurePreset, csv_paths: dict[str, str]) -> str:
    """gnuplot commands plotting every data column of each panel against T."""
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel 'T'",
        "set terminal pngcairo size 900,600",
    ]
    probe = SweepResult(preset.configs[0], [], preset.quantities, preset.z_thetas, preset.z_phis)
    data_cols = [(i + 1, col) for i, col in enumerate(probe.columns) if col not in ("t", "b", "c", "h", "eta")]
    for label, csv_path in csv_paths.items():
        stem = Path(csv_path).with_suffix("").name
        lines.append(f"set output '{stem}.png'")
        lines.append(f"set title '{preset.name} {label}'")
        plots = [f"'{Path(csv_path).name}' using 1:{idx} with lines" for idx, _ in data_cols]
        lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"
