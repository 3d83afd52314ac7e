"""Command-line front end: ``wehrl-jcm`` / ``python -m wehrl_jcm``.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

from .core import ModelConfig
from .errors import DomainError, NumericalError
from .sweep import QUANTITIES, figure_preset, gnuplot_script, run_sweep, write_output
from .wehrl import WehrlMethod

EXIT_USAGE = 1
EXIT_NUMERICAL = 2

DEFAULTS = {
    "alpha": 5.0,
    "vartheta": 0.0,
    "t_max": 50.0,
    "t_steps": 2000,
    "theta": [],
    "phi": [],
    "quantities": ["bloch", "gamma", "H", "W", "rescaled"],
    "format": "csv",
    "output": None,
    "preset": None,
    "tol": 1e-10,
    "series_tol": 1e-12,
    "n_max": None,
    "paper_literal_constants": False,
    "z_method": "quadrature",
    "threads": None,
    "gnuplot": False,
}

_PI_FRACTION = re.compile(r"^\s*([-+]?[0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$")


def parse_angle(text: str) -> float:
    """Radians from '0.785', 'pi/4', '0.25pi' or '3*pi/2'."""
    match = _PI_FRACTION.match(text.lower())
    try:
        if match:
            coeff = match.group(1)
            factor = float(coeff + "1") if coeff in ("", "+", "-") else float(coeff)
            divisor = float(match.group(2)) if match.group(2) else 1.0
            return factor * math.pi / divisor
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None


def _angle_list(text: str) -> list[float]:
    return [parse_angle(part) for part in text.split(",") if part.strip()]


def _quantity_list(text: str) -> list[str]:
    items = [q.strip() for q in text.split(",") if q.strip()]
    bad = [q for q in items if q not in QUANTITIES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown quantities {bad}; choose from {', '.join(QUANTITIES)}")
    return items


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="wehrl-jcm",
        description="Entropy time series (von Neumann, information, atomic Wehrl) "
        "for the resonant Jaynes-Cummings model.",
        argument_default=argparse.SUPPRESS,
    )
    p.add_argument("--config", help="key=value file mirroring the long options")
    p.add_argument("--preset", choices=("fig1", "fig2", "fig3"), help="figure preset")
    p.add_argument("--alpha", type=float, help="real coherent amplitude (default 5)")
    p.add_argument("--vartheta", type=parse_angle, help="initial atomic angle, e.g. pi/4")
    p.add_argument("--t-max", type=float, help="last scaled time (default 50)")
    p.add_argument("--t-steps", type=int, help="number of grid points (default 2000)")
    p.add_argument("--theta", type=_angle_list, action="append", help="Z_theta angle; repeatable")
    p.add_argument("--phi", type=_angle_list, action="append", help="Z_phi angle; repeatable")
    p.add_argument("--quantities", type=_quantity_list, help=f"comma list from {','.join(QUANTITIES)}")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--output", help="file (single run, '-' = stdout) or directory (preset)")
    p.add_argument("--tol", type=float, help="quadrature tolerance (default 1e-10)")
    p.add_argument("--series-tol", type=float, help="Fock-tail and series tolerance (default 1e-12)")
    p.add_argument("--n-max", type=int, help="Fock cutoff (default ceil(a^2 + 10a + 20))")
    p.add_argument("--paper-literal-constants", action="store_true", help="use 0.17/0.15 in rescalings")
    p.add_argument("--z-method", choices=[m.value for m in WehrlMethod], help="route for Z columns")
    p.add_argument("--threads", type=int, help="worker threads (default $WEHRL_JCM_THREADS or 1)")
    p.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script (presets)")
    return p


def _read_config_file(parser, path) -> dict:
    tokens = []
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            parser.error(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() in ("true", "yes", "on"):
            tokens.append(flag)
        elif value.lower() not in ("false", "no", "off"):
            tokens += [flag, value]
    return vars(parser.parse_args(tokens))


def _options(argv) -> dict:
    parser = build_parser()
    cli = vars(parser.parse_args(argv))
    opts = dict(DEFAULTS)
    if "config" in cli:
        opts.update(_read_config_file(parser, cli.pop("config")))
    opts.update(cli)
    for key in ("theta", "phi"):
        opts[key] = [a for group in opts[key] for a in (group if isinstance(group, list) else [group])]
    return opts


def main(argv=None) -> int:
    opts = _options(sys.argv[1:] if argv is None else argv)
    config_kwargs = {"series_tol": opts["series_tol"], "quad_tol": opts["tol"], "n_max": opts["n_max"]}
    sweep_kwargs = {
        "paper_literal": opts["paper_literal_constants"],
        "threads": opts["threads"],
        "z_method": WehrlMethod(opts["z_method"]),
    }
    failed = False
    try:
        if opts["preset"]:
            preset = figure_preset(opts["preset"], **config_kwargs)
            out_dir = Path(opts["output"] or ".")
            out_dir.mkdir(parents=True, exist_ok=True)
            written = {}
            for label, config in preset.panels:
                result = run_sweep(
                    config,
                    preset.quantities,
                    z_thetas=preset.z_thetas,
                    z_phis=preset.z_phis,
                    **sweep_kwargs,
                )
                target = out_dir / f"{preset.name}_{label}.{opts['format']}"
                write_output(result, opts["format"], target)
                written[label] = str(target)
                failed |= any(r.error for r in result.records)
                print(target, file=sys.stderr)
            if opts["gnuplot"]:
                csvs = {k: v for k, v in written.items() if v.endswith(".csv")}
                (out_dir / f"{preset.name}.gp").write_text(gnuplot_script(preset, csvs), encoding="utf-8")
        else:
            t_steps = opts["t_steps"]
            config = ModelConfig.uniform(opts["alpha"], opts["vartheta"], opts["t_max"], t_steps, **config_kwargs)
            result = run_sweep(
                config,
                opts["quantities"],
                z_thetas=opts["theta"],
                z_phis=opts["phi"],
                **sweep_kwargs,
            )
            write_output(result, opts["format"], opts["output"] or "-")
            failed = any(r.error for r in result.records)
    except DomainError as exc:
        print(f"wehrl-jcm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"wehrl-jcm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"wehrl-jcm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if failed:
        print("wehrl-jcm: some records failed; see the error column", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
