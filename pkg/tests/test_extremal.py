import math

import numpy as np
import pytest

from pllab.basis import BasisSpec
from pllab.extremal import (PolyMap, ProjectiveEvaluator, SandwichEvaluator,
                            composition_gap, projective_extremal,
                            relative_extremal_1c, sandwich)
from pllab.fekete import FubiniStudyWeight, ZeroWeight, solve_fekete
from pllab.geometry import ComplexBall, Interval, exact_extremal, sample


@pytest.fixture(scope="module")
def interval_setup():
    cloud = sample(Interval(-1.0, 1.0), 2001, seed=0)
    cfg = solve_fekete(cloud, BasisSpec(1, 20))
    return cfg, cloud


@pytest.fixture(scope="module")
def disc_setup():
    cloud = sample(ComplexBall((0.0,), 1.0), 2001, seed=0)
    cfg = solve_fekete(cloud, BasisSpec(1, 10))
    return cfg, cloud


def test_sandwich_brackets_interval(interval_setup):
    cfg, cloud = interval_setup
    est = sandwich(cfg, cloud, 2.0)
    target = math.log(2 + math.sqrt(3))
    assert est.lower <= target <= est.upper
    assert est.gap <= math.log(21 * cfg.gamma) / 20 + 1e-9


def test_sandwich_brackets_disc(disc_setup):
    cfg, cloud = disc_setup
    est = sandwich(cfg, cloud, 2.0)
    assert est.lower <= math.log(2) <= est.upper


def test_gap_law(interval_setup):
    cfg, cloud = interval_setup
    est = sandwich(cfg, cloud, 1.7)
    N = cfg.basis.size
    assert est.gap * cfg.basis.d == pytest.approx(math.log(N * cfg.gamma),
                                                  abs=1e-12)


def test_lower_nonnegative_on_set(interval_setup):
    cfg, cloud = interval_setup
    ev = SandwichEvaluator(cfg, cloud)
    zs = np.linspace(-1, 1, 41)[:, None].astype(complex)
    lower, upper = ev.bounds(zs)
    assert np.all(lower >= -1e-9)
    assert np.all(upper >= lower)


def test_sandwich_at_node(interval_setup):
    cfg, cloud = interval_setup
    est = sandwich(cfg, cloud, cfg.nodes[0])
    assert est.lower >= -math.log(cfg.gamma) / cfg.basis.d - 1e-12
    assert est.upper >= 0.0


def test_oracle_inside_bracket_many_points(interval_setup):
    cfg, cloud = interval_setup
    ev = SandwichEvaluator(cfg, cloud)
    eps = 3 * cloud.density_parameter
    zs = np.array([1.5, 2.5, -3.0, 1.0 + 1.0j, -0.5 + 2.0j])[:, None]
    lower, upper = ev.bounds(zs)
    for z, lo, up in zip(zs[:, 0], lower, upper):
        exact = exact_extremal(Interval(-1, 1), z)
        assert lo - eps <= exact <= up + eps


def test_degree_monotonicity_of_lower():
    cloud = sample(Interval(-1.0, 1.0), 2001, seed=0)
    z = 2.0
    prev = -np.inf
    for d in (5, 10, 20, 40):
        cfg = solve_fekete(cloud, BasisSpec(1, d))
        est = sandwich(cfg, cloud, z)
        assert est.lower >= prev - 2e-2
        prev = est.lower


def test_weight_comparison_invariant():
    cloud = sample(Interval(-1.0, 1.0), 2001, seed=0)
    b = BasisSpec(1, 12)
    cfg_u = solve_fekete(cloud, b)
    cfg_w = solve_fekete(cloud, b, FubiniStudyWeight())
    ev_u = SandwichEvaluator(cfg_u, cloud)
    ev_w = SandwichEvaluator(cfg_w, cloud)
    phi = FubiniStudyWeight().evaluate(cloud.points)
    comb = ev_u.gap + ev_w.gap
    rng = np.random.default_rng(1)
    zs = (rng.uniform(-2, 2, 20) + 1j * rng.uniform(-2, 2, 20))[:, None]
    lu, uu = ev_u.bounds(zs)
    lw, uw = ev_w.bounds(zs)
    assert np.all(lw >= lu + phi.min() - comb - 1e-9)
    assert np.all(uw <= uu + phi.max() + comb + 1e-9)


def test_projective_extremal_inside_set():
    cloud = sample(ComplexBall((0.0,), 1.0), 1201, seed=0)
    cfg = solve_fekete(cloud, BasisSpec(1, 12), FubiniStudyWeight())
    est = projective_extremal(cfg, cloud, 0.0)
    # the certificate is relative to the cloud, so allow mesh slack
    eps = 3 * cloud.density_parameter
    assert est.lower - eps <= 0.0 <= est.upper + eps
    assert est.mode == "projective"


def test_projective_requires_fubini_study(disc_setup):
    cfg, cloud = disc_setup
    with pytest.raises(ValueError, match="Fubini-Study"):
        projective_extremal(cfg, cloud, 2.0)


def test_projective_identity_cross_check():
    # weighted minus rho agrees with the projective evaluator
    cloud = sample(Interval(-1.0, 1.0), 1201, seed=0)
    cfg = solve_fekete(cloud, BasisSpec(1, 12), FubiniStudyWeight())
    z = 2.0
    est_w = sandwich(cfg, cloud, z)
    est_v = projective_extremal(cfg, cloud, z)
    rho = 0.5 * math.log1p(abs(z) ** 2)
    assert est_v.lower == pytest.approx(est_w.lower - rho, abs=1e-12)
    assert est_v.upper == pytest.approx(est_w.upper - rho, abs=1e-12)


def test_projective_evaluator_batch():
    cloud = sample(ComplexBall((0.0,), 1.0), 1201, seed=0)
    cfg = solve_fekete(cloud, BasisSpec(1, 12), FubiniStudyWeight())
    ev = ProjectiveEvaluator(cfg, cloud)
    zs = np.array([[1.5 + 0j], [2.0 + 0j]])
    lo, up = ev.bounds(zs)
    assert np.all(up - lo <= ev.ev.gap + 1e-12)
    single = projective_extremal(cfg, cloud, 1.5)
    assert lo[0] == pytest.approx(single.lower, abs=1e-12)


# ---------------------------------------------------------------------------
# relative extremal
# ---------------------------------------------------------------------------

def test_relative_field_ball_in_ball_oracle():
    E = ComplexBall((0.0,), 0.5)
    B = ComplexBall((0.0,), 1.0)
    f = relative_extremal_1c(E, B, grid_n=256)
    X, Y = np.meshgrid(f.xs, f.ys)
    r = np.abs(X + 1j * Y)
    oracle = np.clip(np.log(2 * np.maximum(r, 1e-12)) / math.log(2), 0, 1)
    err = np.max(np.abs(f.values - oracle)[~f.outer_mask])
    assert err <= 0.02
    assert np.all(f.values >= 0) and np.all(f.values <= 1)
    assert np.all(f.values[f.e_mask] == 0.0)


def test_relative_field_e_equals_b():
    B = ComplexBall((0.0,), 1.0)
    f = relative_extremal_1c(B, B, grid_n=64)
    assert np.all(f.values[~f.outer_mask] == 0.0)


def test_relative_field_monotone_in_e():
    B = ComplexBall((0.0,), 1.0)
    f_small = relative_extremal_1c(ComplexBall((0.0,), 0.3), B, grid_n=128)
    f_big = relative_extremal_1c(ComplexBall((0.0,), 0.5), B, grid_n=128)
    assert np.all(f_big.values <= f_small.values + 1e-6)


def test_relative_field_touching_boundary_error():
    B = ComplexBall((0.0,), 1.0)
    with pytest.raises(ValueError, match="touches the boundary"):
        relative_extremal_1c(ComplexBall((0.5,), 0.5), B, grid_n=128)


def test_relative_field_grid_guard():
    B = ComplexBall((0.0,), 1.0)
    with pytest.raises(ValueError, match="grid_n"):
        relative_extremal_1c(ComplexBall((0.0,), 0.5), B, grid_n=32)


# ---------------------------------------------------------------------------
# polynomial pullback
# ---------------------------------------------------------------------------

def test_composition_gap_square_map(interval_setup):
    cfg_e, cloud_e = interval_setup
    cloud_h = sample(Interval(0.0, 1.0), 2001, seed=0)
    cfg_h = solve_fekete(cloud_h, BasisSpec(1, 20))
    h = PolyMap([[0.0, 0.0, 1.0]])            # z -> z^2
    for w in (1.1, 1.2, 1.5):
        res = composition_gap(h, cfg_e, cloud_e, cfg_h, cloud_h, w)
        assert res.slack >= -res.tolerance
        # closed-form version of the same inequality is an equality here
        lhs = exact_extremal(Interval(0, 1), w ** 2)
        rhs = 2 * exact_extremal(Interval(-1, 1), w)
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_composition_gap_identity(interval_setup):
    cfg, cloud = interval_setup
    h = PolyMap([[0.0, 1.0]])
    res = composition_gap(h, cfg, cloud, cfg, cloud, 1.3)
    assert abs(res.slack) <= res.tolerance + 1e-9


def test_composition_gap_requires_unweighted():
    cloud = sample(Interval(-1.0, 1.0), 1201, seed=0)
    cfg_w = solve_fekete(cloud, BasisSpec(1, 8), FubiniStudyWeight())
    h = PolyMap([[0.0, 1.0]])
    with pytest.raises(ValueError, match="unweighted"):
        composition_gap(h, cfg_w, cloud, cfg_w, cloud, 1.2)
