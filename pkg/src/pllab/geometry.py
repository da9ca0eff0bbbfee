"""Compact-set model: membership, deterministic sampling, closed-form extremal values.

Sets live in C^n (n = 1 or 2); real sets are embedded as R^n + i*0.  Points are
numpy complex vectors of length n.  All balls are closed and membership uses a
1e-12 boundary tolerance (boundary points count as inside).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

TOL = 1e-12

# golden-ratio family used for low-discrepancy lattices
_PHI1 = 0.6180339887498949
_PLASTIC = 1.3247179572447460


class DimensionMismatchError(ValueError):
    pass


class DegenerateSetError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    """A point of C^n given by 2n reals (re_1, im_1, ..., re_n, im_n)."""

    coords: tuple
    real_slice: bool = False

    def __post_init__(self):
        z = np.asarray(self.coords, dtype=float)
        if not np.all(np.isfinite(z)):
            raise ValueError("point coordinates must be finite")
        if self.real_slice and np.any(z[1::2] != 0.0):
            raise ValueError("real_slice point has nonzero imaginary part")

    @property
    def z(self):
        c = np.asarray(self.coords, dtype=float)
        return c[0::2] + 1j * c[1::2]


def as_point(p, n=None):
    """Normalize scalars / sequences / Point into a complex vector of length n."""
    if isinstance(p, Point):
        z = p.z
    elif np.isscalar(p):
        z = np.array([complex(p)])
    else:
        z = np.asarray(p, dtype=complex).reshape(-1)
    if n is not None and z.size != n:
        raise DimensionMismatchError(f"point has dimension {z.size}, expected {n}")
    return z


def _is_real_vec(z, tol=TOL):
    return bool(np.all(np.abs(z.imag) <= tol))


# ---------------------------------------------------------------------------
# SetSpec kinds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("Interval requires a < b")

    @property
    def dim(self):
        return 1


@dataclass(frozen=True)
class ComplexBall:
    center: tuple          # complex entries
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def dim(self):
        return len(np.atleast_1d(np.asarray(self.center)))

    @property
    def c(self):
        return np.atleast_1d(np.asarray(self.center, dtype=complex))


@dataclass(frozen=True)
class RealBall:
    center: tuple          # real entries
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def dim(self):
        return len(np.atleast_1d(np.asarray(self.center)))

    @property
    def c(self):
        return np.atleast_1d(np.asarray(self.center, dtype=float))


@dataclass(frozen=True)
class Box:
    intervals: tuple       # ((a1,b1), ..., (an,bn)), real

    def __post_init__(self):
        for a, b in self.intervals:
            if not a < b:
                raise ValueError("Box requires a < b on every axis")

    @property
    def dim(self):
        return len(self.intervals)


@dataclass(frozen=True)
class ConvexHull:
    vertices: tuple        # tuple of complex vectors (tuples)

    @property
    def dim(self):
        return len(np.atleast_1d(np.asarray(self.vertices[0])))

    @property
    def v(self):
        return np.array([np.atleast_1d(np.asarray(w, dtype=complex)) for w in self.vertices])


@dataclass(frozen=True)
class Cusp:
    """UPC cusp: union over t in [0,1] of closed cubes D(h(t), M t^m).

    h is a real polynomial map R -> R^n, one coefficient list per output
    coordinate, lowest degree first.
    """

    h_coeffs: tuple        # tuple of coefficient tuples
    M: float
    m: int
    degree_bound: int = 0

    def __post_init__(self):
        if not (isinstance(self.m, int) and self.m >= 1):
            raise ValueError("cusp exponent m must be a positive integer")
        if not self.M > 0:
            raise ValueError("M must be positive")

    @property
    def dim(self):
        return len(self.h_coeffs)

    @property
    def h_degree(self):
        return max(self.degree_bound, max(len(c) - 1 for c in self.h_coeffs))

    def h(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.polynomial.polynomial.polyval(t, np.asarray(c, dtype=float))
                         for c in self.h_coeffs], axis=-1)

    @property
    def vertex(self):
        return self.h(0.0)

    @property
    def coeff_sum(self):
        # sum over derivative orders of ||h^(l)(0)||; h^(l)(0) = l! * c_l
        deg = max(len(c) for c in self.h_coeffs)
        total = 0.0
        for ell in range(deg):
            v = np.array([math.factorial(ell) * c[ell] if ell < len(c) else 0.0
                          for c in self.h_coeffs])
            total += float(np.linalg.norm(v))
        return total


@dataclass(frozen=True)
class AffineImage:
    inner: object
    matrix: tuple          # n x n complex, row-major nested tuples
    shift: tuple

    def __post_init__(self):
        if abs(np.linalg.det(self.A)) < TOL:
            raise ValueError("affine map must be invertible")

    @property
    def A(self):
        return np.asarray(self.matrix, dtype=complex).reshape(self.inner.dim, self.inner.dim)

    @property
    def b(self):
        return np.atleast_1d(np.asarray(self.shift, dtype=complex))

    @property
    def dim(self):
        return self.inner.dim


@dataclass(frozen=True)
class Union:
    parts: tuple

    def __post_init__(self):
        if len(self.parts) == 0:
            raise ValueError("Union must be nonempty")
        dims = {p.dim for p in self.parts}
        if len(dims) != 1:
            raise DimensionMismatchError("Union parts have mixed dimensions")

    @property
    def dim(self):
        return self.parts[0].dim


@dataclass(frozen=True)
class BallIntersection:
    """The set K ∩ B(a, r) for the localization experiments."""

    inner: object
    center: tuple
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def c(self):
        return np.atleast_1d(np.asarray(self.center, dtype=complex))

    @property
    def dim(self):
        return self.inner.dim


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def contains(spec, p, tol=TOL):
    """Closed-set membership with boundary tolerance."""
    z = as_point(p, spec.dim)
    if isinstance(spec, Interval):
        x = z[0]
        return _is_real_vec(z, tol) and spec.a - tol <= x.real <= spec.b + tol
    if isinstance(spec, ComplexBall):
        return bool(np.linalg.norm(z - spec.c) <= spec.radius + tol)
    if isinstance(spec, RealBall):
        return _is_real_vec(z, tol) and bool(
            np.linalg.norm(z.real - spec.c) <= spec.radius + tol)
    if isinstance(spec, Box):
        if not _is_real_vec(z, tol):
            return False
        return all(a - tol <= x <= b + tol for x, (a, b) in zip(z.real, spec.intervals))
    if isinstance(spec, ConvexHull):
        return _hull_contains(spec, z, tol)
    if isinstance(spec, Cusp):
        if not _is_real_vec(z, tol):
            return False
        return _cusp_gap(spec, z.real) <= tol
    if isinstance(spec, AffineImage):
        w = np.linalg.solve(spec.A, z - spec.b)
        if _is_real_vec(w, 1e-9):
            w = w.real.astype(complex)
        return contains(spec.inner, w, tol)
    if isinstance(spec, Union):
        return any(contains(part, z, tol) for part in spec.parts)
    if isinstance(spec, BallIntersection):
        if np.linalg.norm(z - spec.c) > spec.radius + tol:
            return False
        return contains(spec.inner, z, tol)
    raise TypeError(f"unknown SetSpec kind {type(spec).__name__}")


def _hull_contains(spec, z, tol):
    # feasibility of p = sum lambda_i v_i, sum lambda = 1, lambda >= 0,
    # in the real 2n embedding
    V = spec.v
    k = V.shape[0]
    target = np.concatenate([z.real, z.imag, [1.0]])
    A_eq = np.vstack([V.real.T, V.imag.T, np.ones((1, k))])
    res = linprog(np.zeros(k), A_eq=A_eq, b_eq=target, bounds=[(0, 1)] * k,
                  method="highs")
    if not res.success:
        return False
    resid = float(np.max(np.abs(A_eq @ res.x - target)))
    return resid <= max(tol, 1e-9)


def _cusp_gap(spec, x):
    """min over t in [0,1] of (sup-norm distance to cube at t); <= 0 means inside."""
    ts = np.linspace(0.0, 1.0, 2049)
    H = spec.h(ts)                               # (T, n)
    gap = np.max(np.abs(x[None, :] - H), axis=1) - spec.M * ts ** spec.m
    i = int(np.argmin(gap))
    # golden-section polish around the best grid cell
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, len(ts) - 1)]
    f = lambda t: float(np.max(np.abs(x - spec.h(t))) - spec.M * t ** spec.m)
    a, b = lo, hi
    for _ in range(60):
        m1 = a + 0.382 * (b - a)
        m2 = a + 0.618 * (b - a)
        if f(m1) <= f(m2):
            b = m2
        else:
            a = m1
    return min(float(gap[i]), f(0.5 * (a + b)))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SampleCloud:
    points: np.ndarray     # (M, n) complex, immutable by convention
    seed: int
    density_parameter: float
    bounding_radius: float
    boundary_fraction: float
    spec: object = field(default=None, compare=False)

    def __post_init__(self):
        self.points.setflags(write=False)

    @property
    def size(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


def _dedupe(pts):
    """Stable removal of duplicates under 1e-12 tolerance."""
    if len(pts) == 0:
        return pts
    keep = []
    seen = set()
    for p in pts:
        key = tuple(np.round(np.concatenate([p.real, p.imag]), 12))
        if key not in seen:
            seen.add(key)
            keep.append(p)
    return np.array(keep)


def _kronecker(count, dims, seed):
    """Low-discrepancy lattice in [0,1)^dims (additive golden/plastic sequence)."""
    alphas = []
    g = _PLASTIC
    for k in range(1, dims + 1):
        alphas.append(1.0 / g ** k)
    alphas = np.array(alphas)
    offset = (seed * 0.6180339887498949) % 1.0
    idx = np.arange(1, count + 1)[:, None]
    return (offset + idx * alphas[None, :]) % 1.0


def sample(spec, target_count, seed=0):
    """Deterministic point cloud covering spec with boundary densification."""
    if target_count > 10 ** 7:
        raise ValueError("target_count exceeds resource guard of 1e7")
    if target_count < 4:
        raise ValueError("target_count must be at least 4")

    pts, h, rad, bfrac = _sample_dispatch(spec, target_count, seed)
    pts = _dedupe(pts)

    # top up if dedupe/filtering undershot
    factor = 2
    while len(pts) < target_count and factor <= 64:
        pts2, h, rad, bfrac = _sample_dispatch(spec, target_count * factor, seed)
        pts = _dedupe(pts2)
        factor *= 2
    if len(pts) < target_count:
        raise DegenerateSetError("could not reach target_count; spec appears degenerate")
    return SampleCloud(points=pts, seed=seed, density_parameter=h,
                       bounding_radius=rad, boundary_fraction=bfrac, spec=spec)


def _sample_dispatch(spec, count, seed):
    if isinstance(spec, Interval):
        pts = np.linspace(spec.a, spec.b, count).astype(complex)[:, None]
        h = (spec.b - spec.a) / (count - 1)
        rad = max(abs(spec.a), abs(spec.b))
        return pts, h, rad, 1.0
    if isinstance(spec, ComplexBall):
        if spec.dim == 1:
            return _sample_disc(spec, count, seed)
        return _sample_ball2(spec, count, seed)
    if isinstance(spec, RealBall):
        return _sample_realball(spec, count, seed)
    if isinstance(spec, Box):
        return _sample_box(spec, count, seed)
    if isinstance(spec, ConvexHull):
        return _sample_hull(spec, count, seed)
    if isinstance(spec, Cusp):
        return _sample_cusp(spec, count, seed)
    if isinstance(spec, AffineImage):
        pts, h, rad, bf = _sample_dispatch(spec.inner, count, seed)
        zp = pts @ spec.A.T + spec.b[None, :]
        nrm = np.linalg.norm(spec.A, 2)
        rad2 = float(np.max(np.linalg.norm(zp, axis=1)))
        return zp, h * nrm, rad2, bf
    if isinstance(spec, Union):
        k = len(spec.parts)
        per = max(4, count // k + 1)
        chunks, hs, rads, bfs = [], [], [], []
        for i, part in enumerate(spec.parts):
            p, h, r, bf = _sample_dispatch(part, per, seed + i)
            chunks.append(p)
            hs.append(h)
            rads.append(r)
            bfs.append(bf)
        return np.vstack(chunks), max(hs), max(rads), min(bfs)
    if isinstance(spec, BallIntersection):
        return _sample_ballcap(spec, count, seed)
    raise TypeError(f"unknown SetSpec kind {type(spec).__name__}")


def _sample_disc(spec, count, seed):
    c = spec.c[0]
    r = spec.radius
    nb = int(math.ceil(0.3 * count))
    ni = count - nb
    theta0 = 2 * math.pi * ((seed * _PHI1) % 1.0)
    ang = theta0 + 2 * math.pi * np.arange(nb) / nb
    ring = c + r * np.exp(1j * ang)
    # sunflower interior
    k = np.arange(ni) + 0.5
    rr = r * np.sqrt(k / ni) * math.sqrt(ni / (ni + 1))
    th = theta0 + 2 * math.pi * k * _PHI1
    inner = c + rr * np.exp(1j * th)
    h = max(2 * math.pi * r / nb, r * math.sqrt(math.pi / max(ni, 1)))
    pts = np.concatenate([ring, inner])[:, None]
    rad = float(np.max(np.abs(pts)))
    return pts, h, rad, nb / count


def _sphere3_points(count, seed):
    """Deterministic spread on the unit sphere of C^2 (S^3), Hopf coordinates."""
    u = _kronecker(count, 3, seed)
    eta = np.arcsin(np.sqrt(u[:, 0]))
    t1 = 2 * math.pi * u[:, 1]
    t2 = 2 * math.pi * u[:, 2]
    return np.stack([np.cos(eta) * np.exp(1j * t1),
                     np.sin(eta) * np.exp(1j * t2)], axis=1)


def _sample_ball2(spec, count, seed):
    c = spec.c
    r = spec.radius
    nb = int(math.ceil(0.3 * count))
    ni = count - nb
    sph = c[None, :] + r * _sphere3_points(nb, seed)
    u = _kronecker(int(ni * (16 / math.pi ** 2) * 2.2) + 8, 4, seed + 1)
    w = 2.0 * u - 1.0
    zz = w[:, 0] + 1j * w[:, 1]
    ww = w[:, 2] + 1j * w[:, 3]
    body = np.stack([zz, ww], axis=1)
    keep = np.linalg.norm(body, axis=1) <= 1.0
    body = c[None, :] + r * body[keep][:ni]
    h = r * (math.pi ** 2 / 2 / max(ni, 1)) ** 0.25
    pts = np.vstack([sph, body])
    rad = float(np.max(np.linalg.norm(pts, axis=1)))
    return pts, h, rad, nb / count


def _sample_realball(spec, count, seed):
    c = spec.c
    r = spec.radius
    n = spec.dim
    if n == 1:
        pts = np.linspace(c[0] - r, c[0] + r, count).astype(complex)[:, None]
        return pts, 2 * r / (count - 1), float(np.max(np.abs(pts))), 1.0
    nb = int(math.ceil(0.3 * count))
    ni = count - nb
    theta0 = 2 * math.pi * ((seed * _PHI1) % 1.0)
    ang = theta0 + 2 * math.pi * np.arange(nb) / nb
    ring = np.stack([c[0] + r * np.cos(ang), c[1] + r * np.sin(ang)], axis=1)
    k = np.arange(ni) + 0.5
    rr = r * np.sqrt(k / ni) * math.sqrt(ni / (ni + 1))
    th = theta0 + 2 * math.pi * k * _PHI1
    inner = np.stack([c[0] + rr * np.cos(th), c[1] + rr * np.sin(th)], axis=1)
    pts = np.vstack([ring, inner]).astype(complex)
    h = max(2 * math.pi * r / nb, r * math.sqrt(math.pi / max(ni, 1)))
    rad = float(np.max(np.linalg.norm(pts, axis=1)))
    return pts, h, rad, nb / count


def _sample_box(spec, count, seed):
    n = spec.dim
    lo = np.array([ab[0] for ab in spec.intervals])
    hi = np.array([ab[1] for ab in spec.intervals])
    if n == 1:
        pts = np.linspace(lo[0], hi[0], count).astype(complex)[:, None]
        return pts, (hi[0] - lo[0]) / (count - 1), float(np.max(np.abs(pts))), 1.0
    nb = int(math.ceil(0.3 * count))
    ni = count - nb
    # boundary: walk the perimeter uniformly
    per = 2 * float(np.sum(hi - lo))
    s = per * (np.arange(nb) + 0.5) / nb
    edge_pts = []
    lens = [hi[0] - lo[0], hi[1] - lo[1], hi[0] - lo[0], hi[1] - lo[1]]
    for si in s:
        t = si
        for e, L in enumerate(lens):
            if t <= L:
                if e == 0:
                    edge_pts.append([lo[0] + t, lo[1]])
                elif e == 1:
                    edge_pts.append([hi[0], lo[1] + t])
                elif e == 2:
                    edge_pts.append([hi[0] - t, hi[1]])
                else:
                    edge_pts.append([lo[0], hi[1] - t])
                break
            t -= L
    corners = [[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]]
    u = _kronecker(ni, n, seed)
    inner = lo[None, :] + u * (hi - lo)[None, :]
    pts = np.vstack([np.array(corners), np.array(edge_pts), inner]).astype(complex)
    h = float(np.max(hi - lo)) / math.sqrt(max(ni, 1))
    rad = float(np.max(np.linalg.norm(pts, axis=1)))
    return pts, h, rad, (nb + 4) / (nb + 4 + ni)


def _sample_hull(spec, count, seed):
    V = spec.v
    k = V.shape[0]
    nb = int(math.ceil(0.3 * count))
    ni = count - nb
    # edges between all vertex pairs, plus interior via simplex lattice weights
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edge = []
    per_edge = max(2, nb // max(len(pairs), 1) + 1)
    for (i, j) in pairs:
        t = np.linspace(0, 1, per_edge)
        edge.append(V[i][None, :] * (1 - t)[:, None] + V[j][None, :] * t[:, None])
    edge = np.vstack(edge) if edge else V.copy()
    u = _kronecker(ni, k, seed)
    w = -np.log(np.maximum(u, 1e-12))
    w /= w.sum(axis=1, keepdims=True)
    inner = w @ V
    pts = np.vstack([V, edge, inner])
    h = float(np.max(np.abs(V))) / math.sqrt(max(ni, 1))
    rad = float(np.max(np.linalg.norm(pts, axis=1)))
    return pts, h, rad, (len(edge) + k) / len(pts)


def _sample_cusp(spec, count, seed):
    n = spec.dim
    # graded t grid toward the tip, cube lattice scaled by M t^m at each t
    per_t = max(4, int(round((count / 40) ** (n / (n + 1.0)))) + 3)
    nt = max(10, count // max(per_t ** n, 1) + 2)
    g = np.arange(nt) / (nt - 1)
    ts = g ** 2                                 # denser near t = 0
    H = spec.h(ts)
    axes = [np.linspace(-1.0, 1.0, per_t)] * n
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    chunks = [spec.vertex[None, :]]
    for t, ht in zip(ts, H):
        r = spec.M * t ** spec.m
        chunks.append(ht[None, :] + r * mesh)
    pts = np.vstack(chunks).astype(complex)
    h = 2 * spec.M / max(per_t - 1, 1)
    rad = float(np.max(np.linalg.norm(pts, axis=1)))
    # every t-slice boundary face counts as boundary; record the design value
    return pts, h, rad, 0.3


def _sample_ballcap(spec, count, seed):
    c = spec.c
    r = spec.radius
    got = None
    for factor in (2, 4, 8, 16, 32, 64, 128):
        pts, h, rad, bf = _sample_dispatch(spec.inner, count * factor, seed)
        pts = _dedupe(pts)
        keep = np.linalg.norm(pts - c[None, :], axis=1) <= r + TOL
        inside = pts[keep]
        if len(inside) >= count:
            got = (inside, h, bf)
            break
        got = (inside, h, bf)
    if got is None or len(got[0]) < 4:
        raise DegenerateSetError("BallIntersection retains too few points; "
                                 "set appears degenerate at this radius")
    inside, h, bf = got
    # densify the spherical cap boundary: ring/sphere points kept in the set
    n = spec.dim
    nb = max(16, int(0.3 * count))
    if n == 1:
        ang = 2 * math.pi * (np.arange(nb) + 0.5 * ((seed % 7) + 1) / 8) / nb
        shell = c[None, :] + r * np.exp(1j * ang)[:, None]
    else:
        shell = c[None, :] + r * _sphere3_points(nb, seed + 3)
    keep = [contains(spec.inner, q) for q in shell]
    shell = shell[np.array(keep, dtype=bool)] if len(shell) else shell
    pts = np.vstack([inside, shell]) if len(shell) else inside
    rad = float(np.max(np.linalg.norm(pts, axis=1)))
    return pts, h, rad, bf


# ---------------------------------------------------------------------------
# closed-form extremal oracles
# ---------------------------------------------------------------------------

def _joukowski_log(x):
    # log(x + sqrt(x^2 - 1)) for x >= 1, stable near 1
    x = max(float(x), 1.0)
    return math.log(x + math.sqrt(x * x - 1.0))


def exact_extremal(spec, z):
    """Closed-form extremal function for balls and intervals.

    ComplexBall(a, r): max(log(|z-a|/r), 0).
    RealBall/Interval: (1/2) log h(|w|^2 + |<w,w> - 1|) with h(x) = x + sqrt(x^2-1)
    on the normalized point w = (z - center)/radius.
    """
    if isinstance(spec, ComplexBall):
        w = as_point(z, spec.dim)
        return max(math.log(max(np.linalg.norm(w - spec.c), 1e-300) / spec.radius), 0.0)
    if isinstance(spec, (RealBall, Interval)):
        if isinstance(spec, Interval):
            c = np.array([0.5 * (spec.a + spec.b)])
            r = 0.5 * (spec.b - spec.a)
            n = 1
        else:
            c = spec.c
            r = spec.radius
            n = spec.dim
        w = (as_point(z, n) - c) / r
        x = float(np.sum(np.abs(w) ** 2) + abs(np.sum(w * w) - 1.0))
        return 0.5 * _joukowski_log(x)
    raise ValueError("no closed form; use extremal_engine")


def halfdisc_harmonic_measure(tau):
    """Harmonic measure of the curved boundary of the upper half-disc at tau.

    h(tau) = (2/pi) arg((1+tau)/(1-tau)); equals 0 on (-1,1) and 1 on the open
    upper unit semicircle.
    """
    t = complex(tau)
    if abs(t) > 1 + 1e-9 or t.imag < -1e-9:
        raise ValueError("tau must lie in the closed upper half-disc")
    if abs(t - 1) <= TOL or abs(t + 1) <= TOL:
        raise ValueError("boundary singularity at tau = +-1")
    val = (2.0 / math.pi) * np.angle((1 + t) / (1 - t))
    return float(min(max(val, 0.0), 1.0))


def diameter(spec, sample_count=4000):
    """Euclidean diameter; exact for primitives, hull-of-samples otherwise."""
    if isinstance(spec, Interval):
        return spec.b - spec.a
    if isinstance(spec, (ComplexBall, RealBall)):
        return 2.0 * spec.radius
    if isinstance(spec, Box):
        return float(math.sqrt(sum((b - a) ** 2 for a, b in spec.intervals)))
    if isinstance(spec, ConvexHull):
        V = spec.v
        d = 0.0
        for i in range(len(V)):
            d = max(d, float(np.max(np.linalg.norm(V - V[i][None, :], axis=1))))
        return d
    cloud = sample(spec, min(sample_count, 4000), seed=0)
    pts = cloud.points
    if len(pts) > 1200:
        step = len(pts) // 1200 + 1
        pts = pts[::step]
    d = 0.0
    for i in range(len(pts)):
        d = max(d, float(np.max(np.linalg.norm(pts - pts[i][None, :], axis=1))))
    return d


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def _cplx_out(v):
    arr = np.atleast_1d(np.asarray(v, dtype=complex))
    return [[float(x.real), float(x.imag)] for x in arr]


def _cplx_in(lst):
    return tuple(complex(a, b) for a, b in lst)


def spec_to_dict(spec):
    if isinstance(spec, Interval):
        return {"kind": "Interval", "a": spec.a, "b": spec.b}
    if isinstance(spec, ComplexBall):
        return {"kind": "ComplexBall", "center": _cplx_out(spec.center),
                "radius": spec.radius}
    if isinstance(spec, RealBall):
        return {"kind": "RealBall",
                "center": list(np.atleast_1d(np.asarray(spec.center, dtype=float))),
                "radius": spec.radius}
    if isinstance(spec, Box):
        return {"kind": "Box", "intervals": [list(ab) for ab in spec.intervals]}
    if isinstance(spec, ConvexHull):
        return {"kind": "ConvexHull", "vertices": [_cplx_out(v) for v in spec.vertices]}
    if isinstance(spec, Cusp):
        return {"kind": "Cusp", "h_coeffs": [list(c) for c in spec.h_coeffs],
                "M": spec.M, "m": spec.m, "degree_bound": spec.degree_bound}
    if isinstance(spec, AffineImage):
        return {"kind": "AffineImage", "inner": spec_to_dict(spec.inner),
                "matrix": _cplx_out(np.asarray(spec.matrix, dtype=complex).reshape(-1)),
                "shift": _cplx_out(spec.shift)}
    if isinstance(spec, Union):
        return {"kind": "Union", "parts": [spec_to_dict(p) for p in spec.parts]}
    if isinstance(spec, BallIntersection):
        return {"kind": "BallIntersection", "inner": spec_to_dict(spec.inner),
                "center": _cplx_out(spec.center), "radius": spec.radius}
    raise TypeError(f"unknown SetSpec kind {type(spec).__name__}")


def spec_from_dict(doc):
    kind = doc["kind"]
    if kind == "Interval":
        return Interval(doc["a"], doc["b"])
    if kind == "ComplexBall":
        return ComplexBall(_cplx_in(doc["center"]), doc["radius"])
    if kind == "RealBall":
        return RealBall(tuple(doc["center"]), doc["radius"])
    if kind == "Box":
        return Box(tuple(tuple(ab) for ab in doc["intervals"]))
    if kind == "ConvexHull":
        return ConvexHull(tuple(_cplx_in(v) for v in doc["vertices"]))
    if kind == "Cusp":
        return Cusp(tuple(tuple(c) for c in doc["h_coeffs"]), doc["M"],
                    int(doc["m"]), int(doc.get("degree_bound", 0)))
    if kind == "AffineImage":
        inner = spec_from_dict(doc["inner"])
        n = inner.dim
        mat = np.array(_cplx_in(doc["matrix"])).reshape(n, n)
        return AffineImage(inner, tuple(map(tuple, mat)), _cplx_in(doc["shift"]))
    if kind == "Union":
        return Union(tuple(spec_from_dict(p) for p in doc["parts"]))
    if kind == "BallIntersection":
        return BallIntersection(spec_from_dict(doc["inner"]),
                                _cplx_in(doc["center"]), doc["radius"])
    raise ValueError(f"unknown SetSpec kind tag {kind!r}")
