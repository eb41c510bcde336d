"""Command-line front end: parameter sweeps, bound verification, CSV export.

Config files are flat "key = value" text; see parse_config for the key set.
Rows of a sweep are computed concurrently but written in grid order, so the
output is byte-identical for any thread count.  Exit codes: 0 success,
1 config/usage error, 2 ordering violation detected.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import gaussian_bound, kleingordon, potentials, salpeter
from .gaussian_bound import CouplingOutOfRange
from .kleingordon import KgStatus
from .potentials import Kind, PotentialSpec
from .radial_schrodinger import GridConfig, NoBoundState, NonConvergence

BOUNDS_HEADER = "v,m,e_kg,E_srs,E_gauss,e0,delta,status"
ORDER_TOL = 1e-6

_KIND_NAMES = {k.value: k for k in Kind}

_KEYS = {
    "potential", "a", "b", "m", "m_min", "m_max", "m_step",
    "v", "v_min", "v_max", "v_steps",
    "r_max", "grid_points", "basis_size", "tol",
    "out", "threads", "e_steps",
}


class ConfigError(Exception):
    """Malformed or inconsistent configuration."""


@dataclass
class SweepConfig:
    kind: Kind = Kind.EXPONENTIAL
    a: float = 1.0
    b: float = 0.2
    m: float | None = None
    mass_grid: list[float] = field(default_factory=list)
    v: float | None = None
    v_min: float | None = None
    v_max: float | None = None
    v_steps: int = 1
    r_max: float | None = None
    grid_points: int | None = None
    basis_size: int | None = None
    tol: float = ORDER_TOL
    out: str | None = None
    threads: int = 1
    e_steps: int = 61

    def potential(self, v: float) -> PotentialSpec:
        return PotentialSpec(self.kind, v, self.a, self.b)

    def coupling_grid(self) -> list[float]:
        if self.v_min is None or self.v_max is None:
            if self.v is not None:
                return [self.v]
            raise ConfigError("coupling grid needs v_min and v_max (or a single v)")
        if self.v_steps < 1:
            raise ConfigError(f"v_steps must be >= 1, got {self.v_steps}")
        if self.v_steps == 1:
            return [self.v_min]
        if not self.v_min < self.v_max:
            raise ConfigError(f"v_min = {self.v_min} must be below v_max = {self.v_max}")
        return [float(x) for x in np.linspace(self.v_min, self.v_max, self.v_steps)]

    def masses(self) -> list[float]:
        if self.mass_grid:
            return self.mass_grid
        if self.m is not None:
            return [self.m]
        raise ConfigError("no mass given: set m or m_min/m_max/m_step")

    def single_mass(self) -> float:
        if self.m is not None:
            return self.m
        if len(self.mass_grid) == 1:
            return self.mass_grid[0]
        raise ConfigError("this command needs a single mass m")

    def single_coupling(self) -> float:
        if self.v is not None:
            return self.v
        grid = self.coupling_grid()
        if len(grid) == 1:
            return grid[0]
        raise ConfigError("this command needs a single coupling v")

    def grid_override(self) -> GridConfig | None:
        if self.r_max is None and self.grid_points is None:
            return None
        if self.r_max is None:
            raise ConfigError("grid_points override requires r_max as well")
        return GridConfig(self.r_max, self.grid_points or 4096)

    def effective_threads(self) -> int:
        env = os.environ.get("SALPETER_THREADS")
        if env is not None:
            try:
                n = int(env)
            except ValueError as exc:
                raise ConfigError(f"SALPETER_THREADS must be an integer, got {env!r}") from exc
            return max(1, n)
        return max(1, self.threads)


def _parse_assignments(pairs: list[tuple[str, str, str]]) -> SweepConfig:
    cfg = SweepConfig()
    seen_mass_grid = {}
    for key, value, where in pairs:
        try:
            if key == "potential":
                if value not in _KIND_NAMES:
                    raise ValueError(f"unknown potential {value!r}; use one of {sorted(_KIND_NAMES)}")
                cfg.kind = _KIND_NAMES[value]
            elif key in ("a", "b", "tol"):
                setattr(cfg, key, float(value))
            elif key in ("m", "v", "v_min", "v_max", "r_max"):
                setattr(cfg, key, float(value))
            elif key in ("m_min", "m_max", "m_step"):
                seen_mass_grid[key] = float(value)
            elif key in ("v_steps", "grid_points", "basis_size", "threads", "e_steps"):
                setattr(cfg, key, int(value))
            elif key == "out":
                cfg.out = value
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    if seen_mass_grid:
        missing = {"m_min", "m_max", "m_step"} - set(seen_mass_grid)
        if missing:
            raise ConfigError(f"incomplete mass grid: missing {sorted(missing)}")
        lo, hi, step = seen_mass_grid["m_min"], seen_mass_grid["m_max"], seen_mass_grid["m_step"]
        if step <= 0 or hi < lo:
            raise ConfigError(f"bad mass grid: m_min={lo}, m_max={hi}, m_step={step}")
        count = int(np.floor((hi - lo) / step + 1e-9)) + 1
        cfg.mass_grid = [lo + i * step for i in range(count)]
    return cfg


def parse_config(path: str | Path, overrides: list[str] | None = None) -> SweepConfig:
    """Read a flat key = value config file, then apply --set overrides.

    Keys: potential, a, b, m (or m_min/m_max/m_step), v, v_min, v_max,
    v_steps, r_max, grid_points, basis_size, tol, out, threads, e_steps.
    Blank lines and '#' comments are ignored.  Errors carry file:line
    positions.
    """
    pairs: list[tuple[str, str, str]] = []
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            pairs.append((key, value, f"{path}:{lineno}"))
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key=value")
        key, value = (part.strip() for part in item.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"--set: unknown key {key!r}")
        pairs.append((key, value, f"--set {item}"))
    return _parse_assignments(pairs)


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.12g}"


@dataclass
class BoundsRow:
    v: float
    m: float
    e_kg: float | None
    E_srs: float | None
    E_gauss: float | None
    e0: float | None
    delta: float | None
    status: str

    def csv(self) -> str:
        return ",".join([
            _fmt(self.v), _fmt(self.m), _fmt(self.e_kg), _fmt(self.E_srs),
            _fmt(self.E_gauss), _fmt(self.e0), _fmt(self.delta), self.status,
        ])

    def ordering_ok(self, tol: float) -> bool:
        if self.status != KgStatus.BOUND.value:
            return True
        if self.e_kg is None or self.E_srs is None:
            return True
        if self.e_kg > self.E_srs + tol:
            return False
        if self.E_gauss is not None and self.E_srs > self.E_gauss + tol:
            return False
        return True


def _bounds_row(cfg: SweepConfig, v: float, m: float) -> BoundsRow:
    spec = cfg.potential(v)
    try:
        sol = kleingordon.solve(spec, m, cfg.grid_override())
    except (NonConvergence, ValueError):
        return BoundsRow(v, m, None, None, None, None, None, "error")
    if sol.status is not KgStatus.BOUND:
        return BoundsRow(v, m, None, None, None, sol.e0, None, sol.status.value)
    try:
        basis = None
        if cfg.basis_size is not None:
            basis = salpeter.BasisConfig(salpeter.default_box_radius(spec, m), cfg.basis_size)
        srs = salpeter.ground_energy(spec, m, cfg=basis)
        e_srs = srs.E
    except NonConvergence:
        return BoundsRow(v, m, sol.e, None, None, sol.e0, sol.delta_at_e, "error")
    e_gauss = None
    if cfg.kind is Kind.WOODS_SAXON:
        try:
            e_gauss = gaussian_bound.eg_optimized(m, cfg.a, cfg.b, v)
        except CouplingOutOfRange:
            e_gauss = None
    return BoundsRow(v, m, sol.e, e_srs, e_gauss, sol.e0, sol.delta_at_e, sol.status.value)


def run_bounds(cfg: SweepConfig) -> tuple[Path, int]:
    """One row per coupling: Klein-Gordon lower bound, direct energy,
    Gaussian upper bound (Woods-Saxon only), with the ordering verified.

    Returns (csv path, violation count); a summary comment line with the
    violation count is appended to the file.
    """
    if cfg.out is None:
        raise ConfigError("bounds needs an output file: set out = <path>")
    m = cfg.single_mass()
    grid = cfg.coupling_grid()
    with ThreadPoolExecutor(max_workers=cfg.effective_threads()) as pool:
        rows = list(pool.map(lambda v: _bounds_row(cfg, v, m), grid))
    violations = sum(0 if row.ordering_ok(cfg.tol) else 1 for row in rows)
    out = Path(cfg.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    lines = [BOUNDS_HEADER] + [row.csv() for row in rows]
    lines.append(f"# ordering_violations={violations}")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out, violations


def _fcurve_lines(cfg: SweepConfig, v: float, e_values: list[float]) -> list[str]:
    spec = cfg.potential(v)
    points = kleingordon.curve(spec, e_values, cfg.grid_override())
    status = "ok" if points else "empty"
    return [f"# v={v:.12g} status={status}", "e,F,F_prime,delta"] + kleingordon.curve_csv_rows(points)


def run_fcurves(cfg: SweepConfig) -> list[Path]:
    """Spectral-curve data: one F(e) file per coupling, the parabola family
    g(e) = e^2 - m^2 per mass, and intersection records for small grids."""
    if cfg.out is None:
        raise ConfigError("fcurves needs an output directory: set out = <path>")
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    masses = cfg.masses()
    couplings = cfg.coupling_grid()
    m_top = max(masses)
    margin = 1e-6 * m_top
    e_values = [float(x) for x in np.linspace(-m_top + margin, m_top - margin, cfg.e_steps)]
    written: list[Path] = []

    with ThreadPoolExecutor(max_workers=cfg.effective_threads()) as pool:
        curve_lines = list(pool.map(lambda v: _fcurve_lines(cfg, v, e_values), couplings))
    for v, lines in zip(couplings, curve_lines):
        path = out_dir / f"fcurve_v{v:.6g}.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)

    lines = ["m,e,g"]
    for m in masses:
        for e in e_values:
            lines.append(f"{m:.12g},{e:.12g},{e * e - m * m:.12g}")
    parabolas = out_dir / "parabolas.csv"
    parabolas.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(parabolas)

    pairs = [(v, m) for v in couplings for m in masses]
    inter_lines = ["v,m,e,status"]
    if len(pairs) <= 16:
        def record(pair):
            v, m = pair
            sol = kleingordon.solve(cfg.potential(v), m, cfg.grid_override())
            return f"{v:.12g},{m:.12g},{_fmt(sol.e)},{sol.status.value}"
        with ThreadPoolExecutor(max_workers=cfg.effective_threads()) as pool:
            inter_lines += list(pool.map(record, pairs))
    else:
        inter_lines.insert(0, "# status=skipped (grid too large; use the bounds subcommand)")
    intersections = out_dir / "intersections.csv"
    intersections.write_text("\n".join(inter_lines) + "\n", encoding="utf-8")
    written.append(intersections)
    return written


def run_critical(cfg: SweepConfig, out=None) -> tuple[float, float]:
    """Print binding and supercritical coupling thresholds for the shape."""
    if out is None:
        out = sys.stdout
    if cfg.kind is Kind.COULOMB:
        raise ConfigError("criticality is a coupling window for Coulomb, not a spectral threshold")
    m = cfg.single_mass()
    template = cfg.potential(1.0)
    lower = kleingordon.critical_coupling_lower(template, m, cfg.grid_override())
    upper = kleingordon.critical_coupling_upper(template, m, cfg.grid_override())
    print(f"potential={cfg.kind.value} m={m:.12g}", file=out)
    print(f"binding_threshold_v={lower:.6f} (bisection tol {kleingordon.COUPLING_XTOL:g})", file=out)
    print(f"supercritical_v={upper:.6f} (bisection tol {kleingordon.COUPLING_XTOL:g})", file=out)
    return lower, upper


def _cmd_kg(cfg: SweepConfig, out=None) -> int:
    if out is None:
        out = sys.stdout
    sol = kleingordon.solve(cfg.potential(cfg.single_coupling()), cfg.single_mass(), cfg.grid_override())
    print(f"status={sol.status.value}", file=out)
    print(f"e={_fmt(sol.e)}", file=out)
    print(f"e0={_fmt(sol.e0)}", file=out)
    print(f"delta={_fmt(sol.delta_at_e)}", file=out)
    if sol.secondary_e is not None:
        print(f"secondary_e={_fmt(sol.secondary_e)}", file=out)
    return 0


def _cmd_salpeter(cfg: SweepConfig, out=None) -> int:
    if out is None:
        out = sys.stdout
    spec = cfg.potential(cfg.single_coupling())
    m = cfg.single_mass()
    basis = None
    if cfg.basis_size is not None:
        basis = salpeter.BasisConfig(salpeter.default_box_radius(spec, m), cfg.basis_size)
    sol = salpeter.ground_energy(spec, m, cfg=basis)
    print(f"E={sol.E:.12g}", file=out)
    print(f"converged={sol.converged}", file=out)
    print(f"basis_tail={sol.basis_tail:.3e}", file=out)
    for n, r_box, energy in sol.convergence_history:
        print(f"history N={n} R={r_box:.6g} E={energy:.12g}", file=out)
    return 0


def _cmd_gaussian(cfg: SweepConfig, out=None) -> int:
    if out is None:
        out = sys.stdout
    if cfg.kind is not Kind.WOODS_SAXON:
        raise ConfigError("the Gaussian bound is derived for the woods-saxon kind only")
    m = cfg.single_mass()
    v = cfg.single_coupling()
    e_g = gaussian_bound.eg_optimized(m, cfg.a, cfg.b, v)
    print(f"E_g={e_g:.12g}", file=out)
    if cfg.out is not None:
        points = gaussian_bound.optimal_curve(m, cfg.a, cfg.b)
        path = Path(cfg.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = ["s,v,E_g,J1,J2,J3,J4"] + gaussian_bound.curve_csv_rows(points)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {path}", file=out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="salpeter-bounds",
        description="Two-sided bounds on semirelativistic ground-state energies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("fcurves", "export spectral-curve and parabola data"),
        ("bounds", "sweep couplings and verify the bound ordering"),
        ("critical", "binding and supercritical coupling thresholds"),
        ("kg", "single Klein-Gordon point"),
        ("salpeter", "single direct semirelativistic point"),
        ("gaussian", "single scale-optimized Gaussian bound"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override or supply a config entry")
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config, args.set)
        if args.command == "bounds":
            path, violations = run_bounds(cfg)
            print(f"wrote {path} (ordering violations: {violations})")
            return 2 if violations else 0
        if args.command == "fcurves":
            for path in run_fcurves(cfg):
                print(f"wrote {path}")
            return 0
        if args.command == "critical":
            run_critical(cfg)
            return 0
        if args.command == "kg":
            return _cmd_kg(cfg)
        if args.command == "salpeter":
            return _cmd_salpeter(cfg)
        if args.command == "gaussian":
            return _cmd_gaussian(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NoBoundState, NonConvergence, CouplingOutOfRange, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
