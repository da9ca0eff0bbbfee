"""Modulus-of-continuity scans, Holder/HCP fits, capacity-density arithmetic,
and the localization experiment.

Scans maximize the extremal estimate over deterministic direction meshes
(64 angles in C, 64 spread points on the unit sphere of C^2) at each radius
delta, with cumulative tracking so the modulus is exactly non-decreasing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .basis import BasisSpec
from .extremal import ProjectiveEvaluator, SandwichEvaluator
from .fekete import FubiniStudyWeight, solve_fekete
from .geometry import (BallIntersection, DegenerateSetError, as_point, contains,
                       diameter, exact_extremal, sample)

N_DIRECTIONS = 64
_PLASTIC = 1.3247179572447460


def direction_mesh(n, count=N_DIRECTIONS):
    """Deterministic unit directions: angles in C, Hopf spread on S^3 in C^2."""
    if n == 1:
        ang = 2 * math.pi * np.arange(count) / count
        return np.exp(1j * ang)[:, None]
    u = ((np.arange(count)[:, None] + 0.5) *
         np.array([1 / _PLASTIC, 1 / _PLASTIC ** 2, 1 / _PLASTIC ** 3])[None, :]) % 1.0
    eta = np.arcsin(np.sqrt(u[:, 0]))
    return np.stack([np.cos(eta) * np.exp(2j * math.pi * u[:, 1]),
                     np.sin(eta) * np.exp(2j * math.pi * u[:, 2])], axis=1)


# ---------------------------------------------------------------------------
# engines
# ---------------------------------------------------------------------------

class ExactEngine:
    """Closed-form oracle engine; lower and upper tracks coincide."""

    source = "exact"

    def __init__(self, spec):
        self.spec = spec

    def bounds(self, points):
        vals = np.array([exact_extremal(self.spec, p) for p in points])
        return vals, vals


class SandwichEngine:
    source = "sandwich"

    def __init__(self, config, cloud):
        self._ev = SandwichEvaluator(config, cloud)
        self.degree = config.basis.d

    def bounds(self, points):
        return self._ev.bounds(points)


class ProjectiveEngine:
    source = "projective"

    def __init__(self, config, cloud):
        self._ev = ProjectiveEvaluator(config, cloud)
        self.degree = config.basis.d

    def bounds(self, points):
        return self._ev.bounds(points)


# ---------------------------------------------------------------------------
# modulus of continuity
# ---------------------------------------------------------------------------

@dataclass
class ModulusReport:
    anchor: tuple
    deltas: np.ndarray
    lower: np.ndarray           # cumulative sup of the lower track
    upper: np.ndarray
    source: str
    mu_hat: float | None
    c_hat: float | None
    r_squared: float | None
    points_used: int
    inconclusive: bool
    notes: str = ""
    kept: np.ndarray = None     # mask of deltas above the noise floor

    def to_dict(self):
        return {
            "anchor": [[z.real, z.imag] for z in np.atleast_1d(np.asarray(self.anchor, dtype=complex))],
            "deltas": list(map(float, self.deltas)),
            "lower": list(map(float, self.lower)),
            "upper": list(map(float, self.upper)),
            "source": self.source,
            "mu_hat": self.mu_hat,
            "c_hat": self.c_hat,
            "r_squared": self.r_squared,
            "points_used": self.points_used,
            "inconclusive": self.inconclusive,
            "notes": self.notes,
        }


def _loglog_fit(x, y):
    lx, ly = np.log(x), np.log(y)
    A = np.stack([lx, np.ones_like(lx)], axis=1)
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((ly - pred) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coef[0]), float(math.exp(coef[1])), r2


def _check_delta_grid(deltas):
    d = np.asarray(sorted(deltas, reverse=True), dtype=float)
    if len(d) < 6:
        raise ValueError("delta grid needs at least 6 points")
    ratios = d[1:] / d[:-1]
    if np.any(ratios > 0.7 + 1e-9):
        raise ValueError("delta grid must be geometric with ratio <= 0.7")
    return d[::-1]              # ascending


def modulus_fit(spec, a, delta_grid, engine, directions=N_DIRECTIONS,
                noise_factor=0.5, min_fit_points=5):
    """Scan w(a, delta) = sup_{|z-a|=delta} of the extremal estimate and fit
    log w against log delta on the lower track above the noise floor."""
    av = as_point(a, spec.dim)
    if not contains(spec, av):
        raise ValueError("anchor point must belong to the set")
    deltas = _check_delta_grid(delta_grid)
    dirs = direction_mesh(spec.dim, directions)
    lo_list, up_list = [], []
    run_lo = run_up = 0.0
    for d in deltas:
        Z = av[None, :] + d * dirs
        lo, up = engine.bounds(Z)
        run_lo = max(run_lo, float(np.max(lo)))
        run_up = max(run_up, float(np.max(up)))
        lo_list.append(run_lo)
        up_list.append(run_up)
    lower = np.array(lo_list)
    upper = np.array(up_list)

    gaps = upper - lower
    keep = lower > 0
    if engine.source != "exact":
        keep &= gaps <= noise_factor * np.maximum(lower, 1e-300)
    used = int(np.sum(keep))
    if used < min_fit_points:
        return ModulusReport(anchor=tuple(av.tolist()), deltas=deltas,
                             lower=lower, upper=upper, source=engine.source,
                             mu_hat=None, c_hat=None, r_squared=None,
                             points_used=used, inconclusive=True,
                             notes="fewer than %d points above the noise floor"
                                   % min_fit_points, kept=keep)
    mu, c, r2 = _loglog_fit(deltas[keep], lower[keep])
    return ModulusReport(anchor=tuple(av.tolist()), deltas=deltas, lower=lower,
                         upper=upper, source=engine.source, mu_hat=mu, c_hat=c,
                         r_squared=r2, points_used=used, inconclusive=False,
                         kept=keep)


# ---------------------------------------------------------------------------
# HCP scan
# ---------------------------------------------------------------------------

@dataclass
class HcpReport:
    anchor: tuple
    radii: list
    sup_values: list            # sup of the lower track on the reference sphere
    mu_per_radius: list
    q_hat: float | None
    coefficient: float | None
    log_growth: bool
    dropped_radii: list
    reports: list = field(default_factory=list)

    def to_dict(self):
        return {
            "anchor": [[z.real, z.imag] for z in np.atleast_1d(np.asarray(self.anchor, dtype=complex))],
            "radii": list(map(float, self.radii)),
            "sup_values": list(map(float, self.sup_values)),
            "mu_per_radius": [m if m is None else float(m) for m in self.mu_per_radius],
            "q_hat": self.q_hat,
            "coefficient": self.coefficient,
            "log_growth": self.log_growth,
            "dropped_radii": list(map(float, self.dropped_radii)),
        }


def hcp_scan(spec, a, radii, delta_grid, degree, cloud_target=None, seed=11,
             reference_radius=1.0):
    """Per-radius Fekete solve on K cap B(a, r), modulus fit, and sup of the
    lower track over the reference sphere |z - a| = reference_radius; fits the
    order q as the slope of log sup against log(1/r)."""
    av = as_point(a, spec.dim)
    if not contains(spec, av):
        raise ValueError("anchor point must belong to the set")
    radii = sorted(radii, reverse=True)
    basis = BasisSpec(spec.dim, degree)
    target = cloud_target or max(4 * basis.size, 600)
    dirs = direction_mesh(spec.dim)
    sups, mus, kept, dropped, reports = [], [], [], [], []
    for r in radii:
        sub = BallIntersection(spec, tuple(av.tolist()), r)
        try:
            cloud = sample(sub, target, seed=seed)
            config = solve_fekete(cloud, basis)
        except (DegenerateSetError, ValueError) as exc:
            warnings.warn(f"radius {r} dropped: {exc}")
            dropped.append(r)
            continue
        engine = SandwichEngine(config, cloud)
        Zref = av[None, :] + reference_radius * dirs
        lo, _ = engine.bounds(Zref)
        sups.append(float(np.max(lo)))
        rep = modulus_fit(sub, av, delta_grid, engine)
        mus.append(rep.mu_hat)
        reports.append(rep)
        kept.append(r)
    if len(kept) < 4:
        return HcpReport(anchor=tuple(av.tolist()), radii=kept, sup_values=sups,
                         mu_per_radius=mus, q_hat=None, coefficient=None,
                         log_growth=False, dropped_radii=dropped, reports=reports)
    x = np.log(1.0 / np.array(kept))
    y = np.array(sups)
    q_hat, c_hat, r2_pow = _loglog_fit(1.0 / np.array(kept), y)
    # logarithmic-growth alternative: sup = b0 + b1 log(1/r)
    A = np.stack([np.ones_like(x), x], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ coef
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2_log = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    log_growth = (r2_log >= 0.99) and (r2_log > r2_pow)
    if log_growth:
        q_hat = 0.0
    return HcpReport(anchor=tuple(av.tolist()), radii=kept, sup_values=sups,
                     mu_per_radius=mus, q_hat=q_hat, coefficient=c_hat,
                     log_growth=log_growth, dropped_radii=dropped,
                     reports=reports)


# ---------------------------------------------------------------------------
# capacity density and condition (P)
# ---------------------------------------------------------------------------

def capacity_density_from_supnorm(A, q, n):
    """From sup L_{K cap B(a,r)} <= A / r^q derive the capacity density
    cap'(K cap B(a, r)) / r^{n q} >= 1/A: returns (kappa, exponent)."""
    if A <= 0:
        raise ValueError("A must be positive")
    if q < 0:
        raise ValueError("q must be nonnegative")
    return 1.0 / A, float(n * q)


@dataclass(frozen=True)
class CondPWitness:
    segment_min_diameter: float       # d > 0
    map_norm_bound: float             # m > 0
    set_diameter: float               # ||E||

    def __post_init__(self):
        if self.segment_min_diameter <= 0 or self.map_norm_bound <= 0:
            raise ValueError("witness constants must be positive")


def condition_p_bound(witness, delta):
    """Explicit Holder bound 4 sqrt(1 + ||E||) / (m d) * delta^(1/2)."""
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    return (4.0 * math.sqrt(1.0 + witness.set_diameter)
            / (witness.map_norm_bound * witness.segment_min_diameter)
            * math.sqrt(delta))


def geometric_condition_m(r, n, set_diameter):
    """Map-norm constant implied by the geometric condition:
    m = (r / n^3)^n / ||E||^(n-1)."""
    return (r / n ** 3) ** n / set_diameter ** (n - 1)


# ---------------------------------------------------------------------------
# localization experiment
# ---------------------------------------------------------------------------

@dataclass
class LocalizationResult:
    report_full: ModulusReport
    report_local: ModulusReport
    mu_full: float | None       # exponents refit on the common delta window
    mu_local: float | None
    mu_difference: float | None


def localization_experiment(spec, a, r, degree, delta_grid=None,
                            cloud_target=None, seed=5):
    """Paired modulus fits (projective engine) for K and K cap B(a, r)."""
    av = as_point(a, spec.dim)
    if not contains(spec, av):
        raise ValueError("anchor point must belong to the set")
    if not 0 < r < diameter(spec):
        raise ValueError("radius must lie in (0, diameter)")
    if delta_grid is None:
        delta_grid = [2.6 * 0.7 ** k for k in range(8)]
    basis = BasisSpec(spec.dim, degree)
    target = cloud_target or max(4 * basis.size, 800)
    weight_factory = FubiniStudyWeight

    cloud_full = sample(spec, target, seed=seed)
    cfg_full = solve_fekete(cloud_full, basis, weight_factory())
    rep_full = modulus_fit(spec, av, delta_grid,
                           ProjectiveEngine(cfg_full, cloud_full))

    sub = BallIntersection(spec, tuple(av.tolist()), r)
    cloud_loc = sample(sub, target, seed=seed)
    cfg_loc = solve_fekete(cloud_loc, basis, weight_factory())
    rep_loc = modulus_fit(sub, av, delta_grid,
                          ProjectiveEngine(cfg_loc, cloud_loc))

    # the exponents are compared on the common surviving delta window, so
    # neither fit leans on scales where the other is below its noise floor
    mu_f = mu_l = diff = None
    common = rep_full.kept & rep_loc.kept
    if int(np.sum(common)) >= 4:
        ds = rep_full.deltas[common]
        mu_f, _, _ = _loglog_fit(ds, rep_full.lower[common])
        mu_l, _, _ = _loglog_fit(ds, rep_loc.lower[common])
        diff = abs(mu_f - mu_l)
    return LocalizationResult(report_full=rep_full, report_local=rep_loc,
                              mu_full=mu_f, mu_local=mu_l, mu_difference=diff)
