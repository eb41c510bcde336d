"""Spectral curve F(e) of h(e) = p^2 + 2eV - V^2 and its intersection with
the parabola g(e) = e^2 - m^2.

F(e) is the lowest eigenvalue of the Schrodinger operator h(e); wherever it
exists it is negative, decreasing and concave, and its slope satisfies
F'(e) = 2 <V>.  A mass-m ground energy is the smallest e in (-m, m) with
F(e) = e^2 - m^2.  Because dW/de = 2V <= 0, the set of e where h(e) binds
is an interval stretching up from an existence edge e0 (where F -> 0), which
makes the edge, the no-binding verdict and both critical couplings cheap to
locate by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import potentials
from .potentials import Kind, PotentialSpec, Theory
from .radial_schrodinger import (
    GridConfig,
    NoBoundState,
    expectation,
    lowest_eigenvalue,
)

WINDOW_MARGIN = 1e-6   # relative margin keeping the scan inside the open window
SCAN_POINTS = 64
ROOT_XTOL = 1e-10
EDGE_XTOL = 1e-8       # existence-edge bisection; truncation limits accuracy anyway
COUPLING_XTOL = 1e-6

_BOX_START = 30.0
_BOX_CAP = 1200.0
_H_EXIST = 0.05        # single-level spacing for existence probes
_H_FAST = 0.05         # two-level spacing for scan-quality F values
_H_FULL = 0.025        # three-level spacing for refined F values
_TAIL_EPS = 1e-12
_CURVE_SAMPLE_STRIDE = 4


class KgStatus(Enum):
    BOUND = "bound"
    NO_BINDING = "no-binding"
    SUPERCRITICAL = "supercritical"


@dataclass(frozen=True)
class SpectralCurvePoint:
    """One sample of the curve: F, its slope 2<V>, and delta = e - F'/2."""

    e: float
    F: float
    F_prime: float
    mean_V: float
    delta: float


@dataclass
class KgSolution:
    """Ground energy with classification.

    status BOUND carries the smallest intersection e in (-m, m); a second
    intersection, when present, is kept in secondary_e.  e0 is the zero of
    F (the existence edge) when it falls inside the scanned window.
    """

    e: float | None
    m: float
    status: KgStatus
    e0: float | None
    delta_at_e: float | None
    curve_samples: list[SpectralCurvePoint] = field(default_factory=list)
    secondary_e: float | None = None


def _kratzer_gamma(v: float) -> float:
    if v >= 0.5:
        raise ValueError(f"Coulomb coupling {v} >= 1/2: no Klein-Gordon ground state")
    return 0.5 + math.sqrt(0.25 - v * v)


def _coulomb_point(spec: PotentialSpec, e: float) -> SpectralCurvePoint:
    # h(e) = p^2 - 2ev/r - v^2/r^2 is exactly solvable; it binds only for
    # e > 0, where the ground eigenvalue is -(e v / gamma)^2.
    gamma = _kratzer_gamma(spec.v)
    if e <= 0:
        raise NoBoundState(f"Coulomb h(e) has no bound state for e = {e} <= 0")
    ratio = spec.v / gamma
    f_val = -((e * ratio) ** 2)
    f_prime = -2.0 * e * ratio * ratio
    return SpectralCurvePoint(e=e, F=f_val, F_prime=f_prime, mean_V=0.5 * f_prime, delta=e - 0.5 * f_prime)


class _CurveEngine:
    """Per-solve evaluator for one potential: adaptive boxes plus caching."""

    def __init__(self, spec: PotentialSpec, grid: GridConfig | None = None):
        self.spec = spec
        self.grid = grid
        self.tail = potentials.tail_radius(spec, _TAIL_EPS)
        self._exist_cache: dict[float, tuple[bool, float, float]] = {}
        self._fast_cache: dict[float, float | None] = {}
        self._full_cache: dict[float, float | None] = {}

    def _w(self, e: float) -> Callable:
        spec = self.spec
        def W(r):
            V = potentials.evaluate(spec, r)
            return 2.0 * e * V - V * V
        return W

    @staticmethod
    def _npts(r_max: float, h: float, floor: int = 1024) -> int:
        return max(floor, int(math.ceil(r_max / h)))

    def existence(self, e: float) -> tuple[bool, float, float]:
        """Escalating-box probe: does h(e) have a negative eigenvalue?

        Returns (exists, lowest eigenvalue at the deciding box, box radius).
        """
        if e in self._exist_cache:
            return self._exist_cache[e]
        W = self._w(e)
        r_max = max(_BOX_START, self.tail)
        while True:
            cfg = GridConfig(r_max, self._npts(r_max, _H_EXIST), refinement_levels=1)
            try:
                res = lowest_eigenvalue(W, cfg)
                out = (True, res.eigenvalue, r_max)
                break
            except NoBoundState as exc:
                if 2.0 * r_max > _BOX_CAP:
                    out = (False, exc.lowest if exc.lowest is not None else 0.0, r_max)
                    break
                r_max *= 2.0
        self._exist_cache[e] = out
        return out

    def _box_for(self, kappa: float) -> float:
        return min(max(self.tail, 40.0 / max(kappa, 1e-12), _BOX_START), _BOX_CAP)

    def _eigen(self, e: float, h: float, levels: int, want_result: bool):
        if self.grid is not None:
            cfg = self.grid
        else:
            exists, lam, _ = self.existence(e)
            if not exists:
                return None
            kappa = math.sqrt(max(-lam, 1e-300))
            r_max = self._box_for(kappa)
            cfg = GridConfig(r_max, self._npts(r_max, h), refinement_levels=levels)
        try:
            res = lowest_eigenvalue(self._w(e), cfg)
        except NoBoundState:
            return None
        return res if want_result else res.eigenvalue

    def f_fast(self, e: float) -> float | None:
        if e not in self._fast_cache:
            self._fast_cache[e] = self._eigen(e, _H_FAST, 2, want_result=False)
        return self._fast_cache[e]

    def f_full(self, e: float) -> float | None:
        if e not in self._full_cache:
            self._full_cache[e] = self._eigen(e, _H_FULL, 3, want_result=False)
        return self._full_cache[e]

    def point(self, e: float) -> SpectralCurvePoint:
        res = self._eigen(e, _H_FULL, 3, want_result=True)
        if res is None:
            raise NoBoundState(f"h(e) has no bound state at e = {e}")
        spec = self.spec
        mean_v = expectation(res, lambda r: potentials.evaluate(spec, r))
        f_prime = 2.0 * mean_v
        return SpectralCurvePoint(e=e, F=res.eigenvalue, F_prime=f_prime, mean_V=mean_v, delta=e - 0.5 * f_prime)


def F(spec: PotentialSpec, e: float, grid: GridConfig | None = None) -> SpectralCurvePoint:
    """Lowest eigenvalue of h(e) = p^2 + 2eV - V^2 plus slope data.

    The Coulomb kind bypasses the grid: its h(e) reduces to the exactly
    solvable -A/r + B/r^2 form with A = 2ev, B = -v^2.  Raises NoBoundState
    where the curve does not exist.
    """
    report = potentials.validate(spec, Theory.KLEIN_GORDON)
    if not report.accepted:
        raise ValueError(report.reason)
    if spec.kind is Kind.COULOMB:
        return _coulomb_point(spec, e)
    return _CurveEngine(spec, grid).point(e)


def curve(spec: PotentialSpec, e_values, grid: GridConfig | None = None) -> list[SpectralCurvePoint]:
    """Sample the spectral curve at the given e values, skipping the part
    of the axis where h(e) has no bound state.

    Existence is monotone in e, so one bisection for the edge replaces a
    per-point probe when part of the range is undefined.
    """
    report = potentials.validate(spec, Theory.KLEIN_GORDON)
    if not report.accepted:
        raise ValueError(report.reason)
    e_values = sorted(float(e) for e in e_values)
    if spec.kind is Kind.COULOMB:
        points = []
        for e in e_values:
            try:
                points.append(_coulomb_point(spec, e))
            except NoBoundState:
                continue
        return points
    engine = _CurveEngine(spec, grid)
    if not engine.existence(e_values[-1])[0]:
        return []
    if engine.existence(e_values[0])[0]:
        edge = None
    else:
        a, b = e_values[0], e_values[-1]
        while b - a > EDGE_XTOL:
            mid = 0.5 * (a + b)
            if engine.existence(mid)[0]:
                b = mid
            else:
                a = mid
        edge = 0.5 * (a + b)
    points = []
    for e in e_values:
        if edge is not None and e <= edge:
            continue
        try:
            points.append(engine.point(e))
        except NoBoundState:
            continue
    return points


def _solve_coulomb(spec: PotentialSpec, m: float) -> KgSolution:
    gamma = _kratzer_gamma(spec.v)
    e = m / math.sqrt(1.0 + (spec.v / gamma) ** 2)
    pt = _coulomb_point(spec, e)
    es = np.linspace(e / 8.0, m * (1.0 - WINDOW_MARGIN), 33)
    samples = [_coulomb_point(spec, float(x)) for x in es]
    return KgSolution(e=e, m=m, status=KgStatus.BOUND, e0=0.0, delta_at_e=pt.delta, curve_samples=samples)


def solve(spec: PotentialSpec, m: float, grid: GridConfig | None = None) -> KgSolution:
    """Smallest root of F(e) = e^2 - m^2 in (-m, m), with classification.

    The existence edge of F is located first (existence is monotone in e
    because dW/de = 2V <= 0); G(e) = F(e) - e^2 + m^2 is then scanned on the
    defined part of the window and the leftmost sign change is refined.  No
    sign change means either supercriticality (F defined at the left edge:
    the intersection slipped below -m) or no binding.
    """
    if not (np.isfinite(m) and m > 0):
        raise ValueError(f"mass must be positive, got {m}")
    report = potentials.validate(spec, Theory.KLEIN_GORDON)
    if not report.accepted:
        raise ValueError(report.reason)
    if spec.kind is Kind.COULOMB:
        return _solve_coulomb(spec, m)

    engine = _CurveEngine(spec, grid)
    eps = WINDOW_MARGIN * m
    hi = m - eps
    lo = -m + eps
    if not engine.existence(hi)[0]:
        return KgSolution(e=None, m=m, status=KgStatus.NO_BINDING, e0=None, delta_at_e=None)

    edge_in_window = not engine.existence(lo)[0]
    e0 = None
    if edge_in_window:
        a, b = lo, hi
        while b - a > EDGE_XTOL:
            mid = 0.5 * (a + b)
            if engine.existence(mid)[0]:
                b = mid
            else:
                a = mid
        e0 = 0.5 * (a + b)

    start = e0 if e0 is not None else lo
    if start + 16.0 * EDGE_XTOL >= hi:
        # the curve exists only on a sliver thinner than the edge resolution
        return KgSolution(e=None, m=m, status=KgStatus.NO_BINDING, e0=e0, delta_at_e=None)
    # Near the edge F ~ 0 while the parabola stays strictly negative, so a
    # few extra samples there make the sign change impossible to miss.
    scan = list(np.linspace(start + 16.0 * EDGE_XTOL, hi, SCAN_POINTS))
    if e0 is not None:
        extras = {start + 1e-6 * m, start + 1e-4 * m}
        scan = sorted(set(scan) | {x for x in extras if x < hi})
    g_vals: list[tuple[float, float]] = []
    for e in scan:
        f_val = engine.f_fast(e)
        if f_val is not None:
            g_vals.append((e, f_val - e * e + m * m))

    def g_full(e: float) -> float:
        f_val = engine.f_full(e)
        if f_val is None:
            # brentq may step within roundoff of the existence edge
            return -(e * e) + m * m
        return f_val - e * e + m * m

    roots: list[float] = []
    for (e1, g1), (e2, g2) in zip(g_vals, g_vals[1:]):
        if len(roots) >= 2:
            break
        if g1 > 0.0 >= g2 or g1 >= 0.0 > g2 or g1 < 0.0 <= g2 or g1 <= 0.0 < g2:
            ga, gb = g_full(e1), g_full(e2)
            if ga * gb > 0:
                continue
            roots.append(float(brentq(g_full, e1, e2, xtol=ROOT_XTOL)))

    if not roots:
        defined = len(g_vals)
        if defined >= 2 and not edge_in_window and all(g < 0 for _, g in g_vals):
            return KgSolution(e=None, m=m, status=KgStatus.SUPERCRITICAL, e0=None, delta_at_e=None)
        return KgSolution(e=None, m=m, status=KgStatus.NO_BINDING, e0=e0, delta_at_e=None)

    e_star = roots[0]
    pt = engine.point(e_star)
    samples = []
    for e, _ in g_vals[::_CURVE_SAMPLE_STRIDE]:
        try:
            samples.append(engine.point(e))
        except NoBoundState:
            continue
    samples.append(pt)
    samples.sort(key=lambda p: p.e)
    return KgSolution(
        e=e_star,
        m=m,
        status=KgStatus.BOUND,
        e0=e0,
        delta_at_e=pt.delta,
        curve_samples=samples,
        secondary_e=roots[1] if len(roots) > 1 else None,
    )


class NonBindingSearchError(Exception):
    """Coupling bracketing failed; the configured search range is exhausted."""


def _coupling_template(spec: PotentialSpec, v: float) -> PotentialSpec:
    return PotentialSpec(spec.kind, v, spec.a, spec.b)


def _existence_at(spec: PotentialSpec, v: float, e: float, grid: GridConfig | None) -> bool:
    return _CurveEngine(_coupling_template(spec, v), grid).existence(e)[0]


def _coupling_bisect(spec: PotentialSpec, m: float, e_probe: float, grid: GridConfig | None) -> float:
    if spec.kind is Kind.COULOMB:
        raise ValueError("critical couplings are defined for the short-range kinds only")
    hi = max(2.0 * m, 4.0)
    for _ in range(40):
        if _existence_at(spec, hi, e_probe, grid):
            break
        hi *= 2.0
    else:
        raise NonBindingSearchError(f"no binding found up to v = {hi}")
    lo = min(1e-2, hi / 2.0)
    while _existence_at(spec, lo, e_probe, grid):
        lo /= 4.0
        if lo < 1e-9:
            raise NonBindingSearchError("binding persists at arbitrarily small coupling")
    while hi - lo > COUPLING_XTOL:
        mid = 0.5 * (lo + hi)
        if _existence_at(spec, mid, e_probe, grid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def critical_coupling_lower(spec: PotentialSpec, m: float, grid: GridConfig | None = None) -> float:
    """Binding threshold: smallest v whose curve meets the parabola.

    At threshold the intersection sits at e -> m with F(m) -> 0, so the
    transition coincides with h(m) first acquiring a negative eigenvalue.
    """
    return _coupling_bisect(spec, m, m, grid)


def critical_coupling_upper(spec: PotentialSpec, m: float, grid: GridConfig | None = None) -> float:
    """Supercritical threshold: v with F(-m; v) = 0.

    Beyond it the intersection would need e < -m and the ground state stops
    being a bound state; located as the v where h(-m) first binds.
    """
    return _coupling_bisect(spec, m, -m, grid)


@dataclass
class ConcavityReport:
    """Concavity / slope diagnostics of F on an e-grid."""

    points: list[SpectralCurvePoint]
    midpoint_violations: list[tuple[float, float]]
    tangent_violations: list[tuple[float, float, float]]
    delta_prime: list[tuple[float, float]]
    tol: float

    @property
    def ok(self) -> bool:
        return not self.midpoint_violations and not self.tangent_violations


def concavity_scan(
    spec: PotentialSpec,
    e_grid,
    grid: GridConfig | None = None,
    tol: float = 1e-8,
) -> ConcavityReport:
    """Sample F on e_grid and check midpoint concavity plus tangent bounds.

    Midpoint checks use consecutive uniformly spaced triples; the tangent
    check F(e) <= F(e1) + (e - e1) F'(e1) + tol runs over all sample pairs.
    delta_prime holds the finite-difference values of 1 - F''/2 at interior
    points (concavity makes them exceed 1).  Violations are reported, never
    raised.
    """
    e_grid = [float(e) for e in e_grid]
    if len(e_grid) < 3:
        raise ValueError("e_grid needs at least 3 points")
    if spec.kind is Kind.COULOMB:
        pts = []
        for e in e_grid:
            try:
                pts.append(_coulomb_point(spec, e))
            except NoBoundState:
                continue
    else:
        engine = _CurveEngine(spec, grid)
        pts = []
        for e in e_grid:
            try:
                pts.append(engine.point(e))
            except NoBoundState:
                continue
    mid_viol: list[tuple[float, float]] = []
    dprime: list[tuple[float, float]] = []
    for left, center, right in zip(pts, pts[1:], pts[2:]):
        d1 = center.e - left.e
        d2 = right.e - center.e
        if abs(d1 - d2) > 1e-10 * max(abs(d1), abs(d2)):
            continue
        gap = center.F - 0.5 * (left.F + right.F)
        if gap < -tol:
            mid_viol.append((center.e, gap))
        second = (right.F - 2.0 * center.F + left.F) / (d1 * d1)
        dprime.append((center.e, 1.0 - 0.5 * second))
    tan_viol: list[tuple[float, float, float]] = []
    for anchor in pts:
        for other in pts:
            excess = other.F - (anchor.F + (other.e - anchor.e) * anchor.F_prime)
            if excess > tol:
                tan_viol.append((other.e, anchor.e, excess))
    return ConcavityReport(
        points=pts,
        midpoint_violations=mid_viol,
        tangent_violations=tan_viol,
        delta_prime=dprime,
        tol=tol,
    )


def curve_csv_rows(points: list[SpectralCurvePoint]) -> list[str]:
    """Rows "e,F,F_prime,delta" with 12 significant digits."""
    return [f"{p.e:.12g},{p.F:.12g},{p.F_prime:.12g},{p.delta:.12g}" for p in points]
