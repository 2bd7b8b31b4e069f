"""Command-line surface: every check as a reproducible JSON/CSV report.

Grammar (long-form flags only):

    spherepack forms eval --form E4 --re 0 --im 1
    spherepack forms identities [--order N]
    spherepack lattice shells --max-norm2 M [--format csv]
    spherepack lattice decode --point x1,...,x8
    spherepack lattice info
    spherepack packing density
    spherepack packing mc [--radius R] [--samples N] [--seed S] [--threads T]
    spherepack magic eval --r R
    spherepack magic table --which A|B|G|GHat --grid lo:hi:n [--format csv]
    spherepack magic verify
    spherepack bound
    spherepack axis check [--convention direct|sweighted|both] [--grid lo:hi:n]

Common flags: --config FILE, --out FILE, --format json|csv, --seed N,
--threads N (SPHEREPACK_THREADS is the environment fallback).

Reports share one envelope: {"command", "config", "results", "pass",
"wall_time_ms"}.  All floats are printed with 17 significant digits and
keys are sorted, so identical invocations produce byte-identical output
except for the timing field.  Exit code 0 means the envelope passed, 1 a
failed check, 2 a usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .axis import Eq2Convention, check_realness, log_grid, verify_inequalities
from .cohn_elkies import E8_DENSITY, verify_magic_ce
from .errors import ConfigError, SpherepackError
from .forms import (
    FormId,
    check_jacobi,
    check_ramanujan,
    delta_qseries,
    eta_product_qseries,
    form_qseries,
)
from .forms import eisenstein_qseries
from .lattice import covolume, e8_basis, enumerate_shells, min_norm, nearest_point, theta_coefficients
from .magic import RadialKind, default_evaluator, tabulate_radial
from .packing import e8_packing_spec, finite_density_mc, periodic_density
from .quadrature import QuadratureConfig

PI = math.pi
SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    series_order: int = 50
    eta_min: float = 0.5
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    ce_grid_step: float = 0.05
    ce_grid_rmax: float = 6.0
    axis_grid_lo: float = 0.05
    axis_grid_hi: float = 20.0
    axis_grid_n: int = 400
    seed: int = 0
    threads: int = 0
    output_format: str = "json"

    def __post_init__(self):
        if self.series_order < 2:
            raise ConfigError("series_order must be at least 2")
        if self.eta_min <= 0:
            raise ConfigError("eta_min must be positive")
        if self.ce_grid_step <= 0 or self.ce_grid_rmax <= SQRT2:
            raise ConfigError("ce grid must be positive and extend beyond sqrt(2)")
        if not (0 < self.axis_grid_lo < self.axis_grid_hi) or self.axis_grid_n < 2:
            raise ConfigError("axis grid must satisfy 0 < lo < hi and n >= 2")
        if self.threads < 0:
            raise ConfigError("threads must be nonnegative")
        if self.output_format not in ("json", "csv"):
            raise ConfigError("output_format must be json or csv")

    def to_dict(self) -> dict:
        return {
            "series_order": self.series_order,
            "eta_min": self.eta_min,
            "quadrature": {
                "gauss_order": self.quadrature.gauss_order,
                "panels_per_segment": self.quadrature.panels_per_segment,
                "ray_truncation": self.quadrature.ray_truncation,
                "tail_tol": self.quadrature.tail_tol,
            },
            "ce_grid_step": self.ce_grid_step,
            "ce_grid_rmax": self.ce_grid_rmax,
            "axis_grid_lo": self.axis_grid_lo,
            "axis_grid_hi": self.axis_grid_hi,
            "axis_grid_n": self.axis_grid_n,
            "seed": self.seed,
            "threads": self.threads,
            "output_format": self.output_format,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {"series_order", "eta_min", "quadrature", "ce_grid_step",
                 "ce_grid_rmax", "axis_grid_lo", "axis_grid_hi", "axis_grid_n",
                 "seed", "threads", "output_format"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        quad_data = data.get("quadrature", {})
        if not isinstance(quad_data, dict):
            raise ConfigError("quadrature must be an object")
        quad_known = {"gauss_order", "panels_per_segment", "ray_truncation", "tail_tol"}
        quad_unknown = set(quad_data) - quad_known
        if quad_unknown:
            raise ConfigError(f"unknown quadrature keys: {sorted(quad_unknown)}")
        try:
            quad = QuadratureConfig(**quad_data)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad quadrature config: {exc}") from exc
        fields = {k: v for k, v in data.items() if k != "quadrature"}
        try:
            return cls(quadrature=quad, **fields)
        except TypeError as exc:
            raise ConfigError(f"bad config: {exc}") from exc


# ---------------------------------------------------------------------------
# deterministic serialization
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return '"%s"' % x
    return format(float(x), ".17g")


def _to_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k in sorted(obj):
            items.append(f'{pad}  "{k}": {_to_json(obj[k], indent + 1)}')
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {_to_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def render_report(command: str, config: RunConfig, results: dict, passed: bool,
                  wall_ms: int) -> str:
    envelope = {
        "command": command,
        "config": config.to_dict(),
        "results": results,
        "pass": passed,
        "wall_time_ms": wall_ms,
    }
    return _to_json(envelope) + "\n"


def _csv_table(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, float):
                cells.append(format(cell, ".17g"))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# command implementations: each returns (results dict, pass flag, csv or None)
# ---------------------------------------------------------------------------

def _cmd_forms_eval(args, config: RunConfig):
    try:
        form = FormId(args.form)
    except ValueError:
        valid = ", ".join(f.value for f in FormId)
        raise ConfigError(f"unknown form {args.form!r}; choose from {valid}")
    if args.im <= 0:
        raise ConfigError("--im must be positive (upper half-plane)")
    series = form_qseries(form)
    value = series.eval(complex(args.re, args.im), eta_min=config.eta_min)
    results = {
        "form": form.value,
        "tau": {"re": args.re, "im": args.im},
        "value": {"re": value.real, "im": value.imag},
        "series_order": series.order,
        "nome": series.nome.value,
    }
    return results, True, None


def _cmd_forms_identities(args, config: RunConfig):
    order = args.order if args.order is not None else config.series_order
    ram = check_ramanujan(order)
    jac = check_jacobi(max(8, 4 * order), samples=(0.3 + 0.9j,))
    delta_ok = delta_qseries(order) == eta_product_qseries(order)
    results = {
        "order": order,
        "ramanujan_zero": ram.all_zero,
        "jacobi_zero": jac.all_zero,
        "jacobi_numeric_residual": max(jac.numeric_residuals),
        "delta_matches_eta_product": delta_ok,
    }
    passed = ram.all_zero and jac.all_zero and delta_ok and (
        max(jac.numeric_residuals) < 1e-12)
    return results, passed, None


def _cmd_lattice_shells(args, config: RunConfig):
    shells = enumerate_shells(args.max_norm2)
    results = {
        "max_norm2": args.max_norm2,
        "shells": [{"norm2": s.norm2, "count": s.count} for s in shells],
        "total_vectors": sum(s.count for s in shells),
    }
    csv = _csv_table(["norm2", "count"], [[s.norm2, s.count] for s in shells])
    return results, True, csv


def _cmd_lattice_decode(args, config: RunConfig):
    try:
        coords = [float(x) for x in args.point.split(",")]
    except ValueError:
        raise ConfigError(f"--point expects 8 comma-separated numbers, got {args.point!r}")
    if len(coords) != 8:
        raise ConfigError("--point expects exactly 8 coordinates")
    vector, dist = nearest_point(coords)
    results = {
        "point": coords,
        "nearest": [h / 2.0 for h in vector.half_coords],
        "half_coords": list(vector.half_coords),
        "distance": dist,
        "norm2": vector.norm2(),
    }
    return results, True, None


def _cmd_lattice_info(args, config: RunConfig):
    basis = e8_basis()
    theta = theta_coefficients(10)
    e4 = eisenstein_qseries(4, 10)
    matches = theta == [int(e4.coefficient(n)) for n in range(11)]
    results = {
        "min_norm": min_norm(),
        "covolume": covolume(),
        "determinant": float(basis.determinant()),
        "gram_diagonal": [int(basis.gram()[i][i]) for i in range(8)],
        "theta_coefficients": theta,
        "theta_matches_eisenstein": matches,
    }
    return results, matches, None


def _cmd_packing_density(args, config: RunConfig):
    value = periodic_density(e8_packing_spec())
    results = {
        "value": value,
        "target": E8_DENSITY,
        "abs_error": abs(value - E8_DENSITY),
    }
    return results, abs(value - E8_DENSITY) < 1e-12, None


def _cmd_packing_mc(args, config: RunConfig):
    threads = _effective_threads(args, config)
    est = finite_density_mc(e8_packing_spec(), radius=args.radius,
                            samples=args.samples, seed=_effective_seed(args, config),
                            threads=threads)
    dev = abs(est.value - E8_DENSITY)
    results = {
        "value": est.value,
        "stderr": est.stderr,
        "samples": est.samples,
        "seed": est.seed,
        "radius": est.radius,
        "threads": threads,
        "target": E8_DENSITY,
        "abs_deviation": dev,
        "deviation_sigmas": dev / est.stderr if est.stderr > 0 else float("inf"),
    }
    return results, True, None


def _cmd_magic_eval(args, config: RunConfig):
    ev = default_evaluator(config.quadrature)
    a = ev.eval_a(args.r)
    b = ev.eval_b(args.r)
    results = {
        "r": args.r,
        "a": {"re": a.real, "im": a.imag},
        "b": {"re": b.real, "im": b.imag},
        "g": ev.eval_g(args.r),
        "g_hat": ev.eval_g_hat(args.r),
    }
    return results, True, None


def _cmd_magic_table(args, config: RunConfig):
    kind = {"a": RadialKind.A, "b": RadialKind.B, "g": RadialKind.G,
            "ghat": RadialKind.GHAT}.get(args.which.lower())
    if kind is None:
        raise ConfigError(f"--which must be A, B, G or GHat, got {args.which!r}")
    grid = _parse_grid(args.grid)
    table = tabulate_radial(kind, grid, default_evaluator(config.quadrature))
    results = {
        "which": kind.value,
        "rows": [{"r": r, "value": v} for r, v in zip(table.radii, table.values)],
    }
    csv = _csv_table(["r", "value"], [[r, v] for r, v in zip(table.radii, table.values)])
    return results, True, csv


def _cmd_magic_verify(args, config: RunConfig):
    ev = default_evaluator(config.quadrature)
    a0 = abs(ev.eval_a(0.0))
    g0 = ev.eval_g(0.0)
    consistency = {}
    worst_rel = 0.0
    for r in (1.5, 2.0, 3.0):
        ca, pa = ev.eval_a(r), ev.eval_a_propagated(r)
        cb, pb = ev.eval_b(r), ev.eval_b_propagated(r)
        rel_a = abs(ca - pa) / max(abs(ca), a0)
        rel_b = abs(cb - pb) / max(abs(cb), a0)
        worst_rel = max(worst_rel, rel_a, rel_b)
        consistency[format(r, ".3g")] = {"a_rel_error": rel_a, "b_rel_error": rel_b}
    zeros = {}
    worst_zero = 0.0
    for n in (1, 2, 3):
        v = abs(ev.eval_g(math.sqrt(2.0 * n)))
        zeros[str(n)] = v
        worst_zero = max(worst_zero, v)
    b0 = abs(ev.eval_b(0.0))
    results = {
        "representation_consistency": consistency,
        "max_rel_error": worst_rel,
        "g_zero_values": zeros,
        "max_zero_value": worst_zero,
        "g0": g0,
        "ghat0": ev.eval_g_hat(0.0),
        "b0_over_a0": b0 / a0,
    }
    passed = (worst_rel < 1e-6 and worst_zero < 1e-6 * abs(g0) and b0 < 1e-6 * a0)
    return results, passed, None


def _cmd_bound(args, config: RunConfig):
    ev = default_evaluator(config.quadrature)
    report = verify_magic_ce(ev)
    lattice_density = periodic_density(e8_packing_spec())
    results = dict(report.as_dict())
    results["lattice_density"] = lattice_density
    results["bound_minus_target"] = report.bound - report.target
    return results, report.pass_ and abs(report.bound - E8_DENSITY) < 1e-6, None


def _cmd_axis_check(args, config: RunConfig):
    grid = (_parse_grid(args.grid) if args.grid
            else log_grid(config.axis_grid_lo, config.axis_grid_hi, config.axis_grid_n))
    which = args.convention
    reports = {}
    if which in ("direct", "both"):
        reports["direct"] = verify_inequalities(grid, Eq2Convention.DIRECT).as_dict()
    if which in ("sweighted", "both"):
        reports["sweighted"] = verify_inequalities(grid, Eq2Convention.S_WEIGHTED).as_dict()
    realness = {
        "phi0": check_realness(FormId.PHI0, log_grid(0.1, 10.0, 25)),
        "psi_s": check_realness(FormId.PSI_S, log_grid(0.1, 10.0, 25)),
    }
    results = {
        "conventions": reports,
        "certified_by": "sweighted",
        "realness_max_rel_imag": realness,
    }
    if which == "direct":
        passed = reports["direct"]["pass"]
    else:
        passed = reports["sweighted"]["pass"] and max(realness.values()) < 1e-9
    return results, passed, None


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

def _parse_grid(spec: str) -> list[float]:
    try:
        lo_s, hi_s, n_s = spec.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError:
        raise ConfigError(f"--grid expects lo:hi:n, got {spec!r}")
    if n < 2 or hi <= lo:
        raise ConfigError("--grid needs hi > lo and n >= 2")
    return [lo + (hi - lo) * j / (n - 1) for j in range(n)]


def _effective_threads(args, config: RunConfig) -> int:
    if getattr(args, "threads", None) is not None:
        n = args.threads
    elif os.environ.get("SPHEREPACK_THREADS"):
        try:
            n = int(os.environ["SPHEREPACK_THREADS"])
        except ValueError:
            raise ConfigError("SPHEREPACK_THREADS must be an integer")
    else:
        n = config.threads
    if n < 0:
        raise ConfigError("threads must be nonnegative")
    return n or min(os.cpu_count() or 1, 8)


def _effective_seed(args, config: RunConfig) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return config.seed


_CSV_COMMANDS = {"lattice shells", "magic table"}

_HANDLERS = {
    "forms eval": _cmd_forms_eval,
    "forms identities": _cmd_forms_identities,
    "lattice shells": _cmd_lattice_shells,
    "lattice decode": _cmd_lattice_decode,
    "lattice info": _cmd_lattice_info,
    "packing density": _cmd_packing_density,
    "packing mc": _cmd_packing_mc,
    "magic eval": _cmd_magic_eval,
    "magic table": _cmd_magic_table,
    "magic verify": _cmd_magic_verify,
    "bound": _cmd_bound,
    "axis check": _cmd_axis_check,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spherepack",
        description="Numerical verification toolkit for the E8 sphere packing bound")

    def add_common(p):
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--out", help="write the report to this file instead of stdout")
        p.add_argument("--format", choices=["json", "csv"], default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None)

    top = parser.add_subparsers(dest="group", required=True)

    forms = top.add_parser("forms", help="q-expansions and identities")
    forms_sub = forms.add_subparsers(dest="sub", required=True)
    p = forms_sub.add_parser("eval", help="evaluate a form on the upper half-plane")
    p.add_argument("--form", required=True, help="E2,E4,E6,Delta,Theta00,Theta01,Theta10,Phi0,PsiS")
    p.add_argument("--re", type=float, default=0.0)
    p.add_argument("--im", type=float, default=1.0)
    add_common(p)
    p = forms_sub.add_parser("identities", help="exact residuals of the classical identities")
    p.add_argument("--order", type=int, default=None)
    add_common(p)

    lattice = top.add_parser("lattice", help="lattice geometry")
    lattice_sub = lattice.add_subparsers(dest="sub", required=True)
    p = lattice_sub.add_parser("shells", help="shell counts up to a squared norm")
    p.add_argument("--max-norm2", type=int, required=True, dest="max_norm2")
    add_common(p)
    p = lattice_sub.add_parser("decode", help="nearest lattice point")
    p.add_argument("--point", required=True, help="8 comma-separated coordinates")
    add_common(p)
    p = lattice_sub.add_parser("info", help="basis, covolume, theta coefficients")
    add_common(p)

    packing = top.add_parser("packing", help="densities")
    packing_sub = packing.add_subparsers(dest="sub", required=True)
    p = packing_sub.add_parser("density", help="closed-form packing density")
    add_common(p)
    p = packing_sub.add_parser("mc", help="Monte-Carlo finite density")
    p.add_argument("--radius", type=float, default=5.0)
    p.add_argument("--samples", type=int, default=2_000_000)
    add_common(p)

    magic = top.add_parser("magic", help="the certificate function")
    magic_sub = magic.add_subparsers(dest="sub", required=True)
    p = magic_sub.add_parser("eval", help="a, b, g, g_hat at one radius")
    p.add_argument("--r", type=float, required=True)
    add_common(p)
    p = magic_sub.add_parser("table", help="radial table of A, B, G or GHat")
    p.add_argument("--which", required=True)
    p.add_argument("--grid", required=True, help="lo:hi:n")
    add_common(p)
    p = magic_sub.add_parser("verify", help="representation consistency and zeros")
    add_common(p)

    p = top.add_parser("bound", help="Cohn-Elkies verdict and bound value")
    add_common(p)

    axis = top.add_parser("axis", help="imaginary-axis inequality checks")
    axis_sub = axis.add_subparsers(dest="sub", required=True)
    p = axis_sub.add_parser("check", help="two-sided positivity in both conventions")
    p.add_argument("--convention", choices=["direct", "sweighted", "both"], default="both")
    p.add_argument("--grid", default=None, help="lo:hi:n (logarithmic default)")
    add_common(p)

    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse, execute, report.  Returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    command = args.group if not getattr(args, "sub", None) else f"{args.group} {args.sub}"
    t0 = time.perf_counter()
    try:
        config = RunConfig()
        if args.config:
            with open(args.config) as fh:
                config = RunConfig.from_dict(json.load(fh))
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.threads is not None:
            overrides["threads"] = args.threads
        if args.format is not None:
            overrides["output_format"] = args.format
        if overrides:
            config = replace(config, **overrides)
        if config.output_format == "csv" and command not in _CSV_COMMANDS:
            raise ConfigError(f"csv output is only available for {sorted(_CSV_COMMANDS)}")
        results, passed, csv = _HANDLERS[command](args, config)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SpherepackError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    wall_ms = int(round((time.perf_counter() - t0) * 1000.0))
    if config.output_format == "csv":
        text = csv
    else:
        text = render_report(command, config, results, passed, wall_ms)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if passed else 1


def main() -> None:
    sys.exit(run())
