"""Function carriers on R^d and the Lebesgue/Lorentz norm machinery.

Carriers share a tiny protocol: an integer ``d`` and ``eval_points(pts)``
taking an (n, d) array.  GridFunction is the universal sampled carrier
(piecewise constant on cells for measure-theoretic operations, multilinear
interpolation of cell centers for quadrature); BallSum, BoxIndicator and
SmoothFunction are analytic carriers used where sampling a grid would be
impossible or would smear the geometry that drives a scaling rate.
"""

import io
import math
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from sphavg import kernels
from sphavg.quad import sphere_area

INF = math.inf


class SupportError(ValueError):
    """Raised when an evaluation would read outside a function's safe box."""


def as_exponent(p):
    """Normalize an exponent: Fraction for finite values, math.inf otherwise."""
    if p in (INF, "inf"):
        return INF
    if isinstance(p, float) and math.isinf(p):
        return INF
    return Fraction(p)


def conjugate(r):
    """Holder conjugate r' with 1/r + 1/r' = 1, exact on rationals."""
    r = as_exponent(r)
    if r == INF:
        return Fraction(1)
    if r == 1:
        return INF
    return r / (r - 1)


@dataclass(frozen=True)
class LorentzParams:
    p: object
    q: object

    def __post_init__(self):
        object.__setattr__(self, "p", as_exponent(self.p))
        object.__setattr__(self, "q", as_exponent(self.q))
        for e in (self.p, self.q):
            if e != INF and e < 1:
                raise ValueError("Lorentz exponents must be >= 1")


class GridFunction:
    """Uniform samples on a box in R^d, extended by zero outside.

    values[i, j, ...] is the sample on the cell with center
    lo + (index + 1/2) * h.  Norms and distribution functions treat the
    function as constant on cells (exact for the indicator counterexamples
    whose edges are grid-aligned); operator quadrature interpolates the
    cell-center samples multilinearly.
    """

    def __init__(self, lo, hi, values):
        values = np.ascontiguousarray(values, dtype=np.float64)
        self.d = values.ndim
        self.lo = np.atleast_1d(np.asarray(lo, dtype=np.float64))
        self.hi = np.atleast_1d(np.asarray(hi, dtype=np.float64))
        if self.lo.shape != (self.d,) or self.hi.shape != (self.d,):
            raise ValueError("box endpoints must match value dimensionality")
        if not np.all(self.hi > self.lo):
            raise ValueError("empty box")
        if not np.all(np.isfinite(values)):
            raise ValueError("grid values must be finite")
        self.values = values
        self.shape = values.shape
        self.h = (self.hi - self.lo) / np.asarray(self.shape, dtype=np.float64)

    @property
    def cell_volume(self):
        return float(np.prod(self.h))

    def centers(self, axis):
        n = self.shape[axis]
        return self.lo[axis] + (np.arange(n) + 0.5) * self.h[axis]

    def has_zero_margin(self):
        """True when every boundary cell vanishes, so zero extension is safe."""
        v = self.values
        for axis in range(self.d):
            first = np.take(v, 0, axis=axis)
            last = np.take(v, -1, axis=axis)
            if np.any(first != 0.0) or np.any(last != 0.0):
                return False
        return True

    def check_queries(self, pts):
        if self.has_zero_margin():
            return
        eps = 1e-12
        if np.any(pts < self.lo - eps) or np.any(pts > self.hi + eps):
            raise SupportError(
                "query leaves the sampled box of a function without a zero "
                "margin; enlarge the box so support + averaging radius fit"
            )

    def eval_points(self, pts):
        pts = np.asarray(pts, dtype=np.float64)
        flat = pts.reshape(-1, self.d)
        self.check_queries(flat)
        if self.d == 1:
            out = kernels.eval_grid_1d(self.values, self.lo[0], self.h[0],
                                       np.ascontiguousarray(flat[:, 0]))
        elif self.d == 2:
            out = kernels.eval_grid_2d(self.values, self.lo[0], self.lo[1],
                                       self.h[0], self.h[1],
                                       np.ascontiguousarray(flat[:, 0]),
                                       np.ascontiguousarray(flat[:, 1]))
        elif self.d == 3:
            out = kernels.eval_grid_3d(self.values, self.lo[0], self.lo[1],
                                       self.lo[2], self.h[0], self.h[1],
                                       self.h[2],
                                       np.ascontiguousarray(flat[:, 0]),
                                       np.ascontiguousarray(flat[:, 1]),
                                       np.ascontiguousarray(flat[:, 2]))
        else:
            raise ValueError("GridFunction supports d in {1, 2, 3}")
        return out.reshape(pts.shape[:-1])

    def level_representation(self):
        """(values, measures) of the nonincreasing rearrangement, exact for
        cell-constant data."""
        flat = np.abs(self.values).ravel()
        vals, counts = np.unique(flat, return_counts=True)
        keep = vals > 0.0
        vals, counts = vals[keep][::-1], counts[keep][::-1]
        return vals, counts * self.cell_volume

    def scaled(self, lam):
        """f_lam(x) = f(lam x) as a GridFunction on the shrunken box."""
        return GridFunction(self.lo / lam, self.hi / lam, self.values)

    # -- serialization ----------------------------------------------------

    MAGIC = b"SGF1"

    def to_bytes(self):
        header = struct.pack("<4sB", self.MAGIC, self.d)
        header += struct.pack(f"<{self.d}d", *self.lo)
        header += struct.pack(f"<{self.d}d", *self.hi)
        header += struct.pack(f"<{self.d}q", *self.shape)
        return header + self.values.astype("<f8").tobytes(order="C")

    @classmethod
    def from_bytes(cls, blob):
        magic, d = struct.unpack_from("<4sB", blob, 0)
        if magic != cls.MAGIC:
            raise ValueError("not a grid-function blob")
        off = 5
        lo = struct.unpack_from(f"<{d}d", blob, off)
        off += 8 * d
        hi = struct.unpack_from(f"<{d}d", blob, off)
        off += 8 * d
        shape = struct.unpack_from(f"<{d}q", blob, off)
        off += 8 * d
        values = np.frombuffer(blob, dtype="<f8", offset=off).reshape(shape)
        return cls(lo, hi, values.copy())

    def to_csv(self, fh):
        cols = [f"x{i}" for i in range(self.d)] + ["value"]
        fh.write(",".join(cols) + "\n")
        grids = np.meshgrid(*[self.centers(a) for a in range(self.d)],
                            indexing="ij")
        coords = np.stack([g.ravel() for g in grids], axis=1)
        for row, v in zip(coords, self.values.ravel()):
            fh.write(",".join(f"{c:.17g}" for c in row) + f",{v:.17g}\n")

    def to_csv_string(self):
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


class RadialProfile:
    """Radial function rho(|x|) sampled on a 1-D grid, ambient dimension d."""

    def __init__(self, r, rho, d, nonnegative=False):
        self.r = np.asarray(r, dtype=np.float64)
        self.rho = np.asarray(rho, dtype=np.float64)
        if self.r.ndim != 1 or self.r.shape != self.rho.shape:
            raise ValueError("inconsistent radial grid")
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("radial grid must be strictly increasing")
        if nonnegative and np.any(self.rho < 0):
            raise ValueError("profile flagged nonnegative has negative values")
        self.d = int(d)

    def eval_radii(self, radii):
        return np.interp(np.asarray(radii, dtype=np.float64), self.r, self.rho,
                         left=self.rho[0], right=0.0)

    def eval_points(self, pts):
        pts = np.asarray(pts, dtype=np.float64)
        return self.eval_radii(np.linalg.norm(pts, axis=-1))


class SmoothFunction:
    """Analytic carrier wrapping a vectorized callable on (n, d) arrays."""

    def __init__(self, d, fn):
        self.d = int(d)
        self.fn = fn

    def eval_points(self, pts):
        pts = np.asarray(pts, dtype=np.float64)
        flat = pts.reshape(-1, self.d)
        return np.asarray(self.fn(flat), dtype=np.float64).reshape(pts.shape[:-1])


def gaussian(d, center=None, scale=1.0, amplitude=1.0):
    """amplitude * exp(-|x-center|^2 / scale^2) as a SmoothFunction."""
    c = np.zeros(d) if center is None else np.asarray(center, dtype=np.float64)

    def fn(pts):
        return amplitude * np.exp(-np.sum((pts - c) ** 2, axis=-1) / scale**2)

    return SmoothFunction(d, fn)


class BoxIndicator:
    """Indicator of an axis-aligned box, evaluated exactly."""

    def __init__(self, lo, hi):
        self.lo = np.atleast_1d(np.asarray(lo, dtype=np.float64))
        self.hi = np.atleast_1d(np.asarray(hi, dtype=np.float64))
        self.d = self.lo.shape[0]

    @property
    def measure(self):
        return float(np.prod(self.hi - self.lo))

    def eval_points(self, pts):
        pts = np.asarray(pts, dtype=np.float64)
        inside = np.all((pts >= self.lo) & (pts <= self.hi), axis=-1)
        return inside.astype(np.float64)

    def bounding_radius(self, center=None):
        c = np.zeros(self.d) if center is None else np.asarray(center)
        corners = np.stack(np.meshgrid(*zip(self.lo, self.hi), indexing="ij"),
                           axis=-1).reshape(-1, self.d)
        return float(np.max(np.linalg.norm(corners - c, axis=1)))


def ball_volume(d, radius):
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0) * radius**d


class BallSum:
    """Sum_i coef_i * chi_{B(0, r_i)} with exact averages and norms.

    Radii are stored in decreasing order.  Spherical averages over S^{d-1}
    of each ball indicator have closed forms (chord angle / cap fraction),
    which keeps the dyadic-sum counterexamples evaluable far below any
    feasible grid resolution.
    """

    def __init__(self, coefs, radii, d):
        radii = np.asarray(radii, dtype=np.float64)
        coefs = np.asarray(coefs, dtype=np.float64)
        order = np.argsort(-radii)
        self.radii = radii[order]
        self.coefs = coefs[order]
        if np.any(self.radii <= 0):
            raise ValueError("radii must be positive")
        self.d = int(d)
        # value on the annulus between radius i and i+1 (cumulative sums)
        self.annulus_values = np.cumsum(self.coefs)

    def value_at_radius(self, rr):
        rr = np.asarray(rr, dtype=np.float64)
        # number of balls containing the point = count of radii > rr
        idx = np.searchsorted(-self.radii, -rr, side="right")
        out = np.zeros(rr.shape)
        inside = idx > 0
        out[inside] = self.annulus_values[idx[inside] - 1]
        return out

    def eval_points(self, pts):
        pts = np.asarray(pts, dtype=np.float64)
        return self.value_at_radius(np.linalg.norm(pts, axis=-1))

    def level_representation(self):
        vols = np.array([ball_volume(self.d, r) for r in self.radii])
        inner = np.append(vols[1:], 0.0)
        measures = vols - inner  # annulus volumes, outermost first
        vals = np.abs(self.annulus_values)
        keep = (vals > 0) & (measures > 0)
        vals, measures = vals[keep], measures[keep]
        order = np.argsort(-vals, kind="stable")
        vals, measures = vals[order], measures[order]
        # merge equal values
        out_v, out_m = [], []
        for v, m in zip(vals, measures):
            if out_v and v == out_v[-1]:
                out_m[-1] += m
            else:
                out_v.append(v)
                out_m.append(m)
        return np.asarray(out_v), np.asarray(out_m)

    def sphere_average_batch(self, centers_norm, ts, normalized=True):
        """Exact A_t chi averages: centers_norm (n,) radii |x|, ts (n,)."""
        c = np.asarray(centers_norm, dtype=np.float64)
        t = np.asarray(ts, dtype=np.float64)
        total = np.zeros(np.broadcast(c, t).shape)
        for coef, rho in zip(self.coefs, self.radii):
            total += coef * _ball_cap_fraction(self.d, c, t, rho)
        if not normalized:
            total = total * sphere_area(self.d)
        return total

    def to_radial_profile(self, n=2048):
        rmax = float(self.radii[0]) * 1.05
        rr = np.linspace(0.0, rmax, n)
        return RadialProfile(rr, self.value_at_radius(rr), self.d)


def _ball_cap_fraction(d, c, t, rho):
    """Normalized measure of {y in S^{d-1}: |x - t y| <= rho}, |x| = c."""
    c = np.asarray(c, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    c, t = np.broadcast_arrays(c, t)
    out = np.zeros(c.shape)
    # whole sphere inside the ball
    whole = c + t <= rho
    out[whole] = 1.0
    part = (~whole) & (np.abs(c - t) < rho)
    if np.any(part):
        cp, tp = c[part], t[part]
        mu = (cp**2 + tp**2 - rho**2) / (2.0 * cp * tp)
        mu = np.clip(mu, -1.0, 1.0)
        if d == 1:
            frac = 0.5 * np.ones(mu.shape)
        elif d == 2:
            frac = np.arccos(mu) / math.pi
        elif d == 3:
            frac = 0.5 * (1.0 - mu)
        else:
            raise ValueError("cap fraction implemented for d in {1, 2, 3}")
        out[part] = frac
    return out


class SimpleFunction:
    """Finitely many levels (v_i strictly decreasing, m_i > 0): directly a
    nonincreasing rearrangement."""

    def __init__(self, values, measures):
        values = np.asarray(values, dtype=np.float64)
        measures = np.asarray(measures, dtype=np.float64)
        if np.any(values <= 0) or np.any(measures <= 0):
            raise ValueError("levels must have positive value and measure")
        if np.any(np.diff(values) >= 0):
            raise ValueError("values must be strictly decreasing")
        self.values = values
        self.measures = measures

    def level_representation(self):
        return self.values, self.measures

    def scale(self, c):
        if c <= 0:
            raise ValueError("scale must be positive")
        return SimpleFunction(self.values * c, self.measures)


def _levels(f):
    if hasattr(f, "level_representation"):
        return f.level_representation()
    raise TypeError(f"no level representation for {type(f).__name__}")


def lp_norm(f, p):
    """Riemann-sum L^p norm; exact on level representations."""
    p = as_exponent(p)
    if p != INF and p < 1:
        raise ValueError("p must be >= 1 or infinity")
    if isinstance(f, RadialProfile):
        w = sphere_area(f.d) * f.r ** (f.d - 1)
        if p == INF:
            return float(np.max(np.abs(f.rho)))
        return float(np.trapezoid(np.abs(f.rho) ** float(p) * w, f.r)) ** (1.0 / float(p))
    vals, meas = _levels(f)
    if len(vals) == 0:
        return 0.0
    if p == INF:
        return float(vals[0])
    return float(np.sum(vals ** float(p) * meas)) ** (1.0 / float(p))


def distribution_function(f, lam):
    """Lebesgue measure of {|f| > lam}."""
    if lam <= 0:
        raise ValueError("level must be positive")
    vals, meas = _levels(f)
    return float(np.sum(meas[vals > lam]))


def lorentz_norm(f, params, q=None):
    """L^{p,q} norm through the nonincreasing rearrangement.

    Exact (closed form) on anything exposing a level representation:
    ||f||^q = sum_i v_i^q (p/q) (M_i^{q/p} - M_{i-1}^{q/p}).
    """
    if q is not None:
        params = LorentzParams(params, q)
    p, q = params.p, params.q
    if p == INF:
        raise ValueError("L^{inf,q} is not supported; use lp_norm")
    vals, meas = _levels(f)
    if len(vals) == 0:
        return 0.0
    pf = float(p)
    cum = np.cumsum(meas)
    prev = np.concatenate([[0.0], cum[:-1]])
    if q == INF:
        return float(np.max(vals * cum ** (1.0 / pf)))
    qf = float(q)
    blocks = vals**qf * (pf / qf) * (cum ** (qf / pf) - prev ** (qf / pf))
    return float(np.sum(blocks)) ** (1.0 / qf)


def lorentz_norm_distribution_form(f, params, n_grid=20000):
    """Quadrature of p^{1/q} (int [t d_f(t)^{1/p}]^q dt/t)^{1/q}.

    Independent cross-check of lorentz_norm (log-spaced midpoint rule).
    """
    p, q = params.p, params.q
    vals, meas = _levels(f)
    if len(vals) == 0:
        return 0.0
    pf, qf = float(p), float(q)
    tmax = float(vals[0])
    tmin = tmax * 1e-9 if len(vals) == 1 else float(vals[-1]) * 1e-6
    edges = np.geomspace(tmin, tmax, n_grid + 1)
    mid = np.sqrt(edges[1:] * edges[:-1])
    dlog = np.diff(np.log(edges))
    cum = np.cumsum(meas)
    df = np.zeros(mid.shape)
    for v, m in zip(vals, cum):
        df = np.where(mid < v, m, df)  # vals descending: last write wins
    integrand = (mid * df ** (1.0 / pf)) ** qf
    return pf ** (1.0 / qf) * float(np.sum(integrand * dlog)) ** (1.0 / qf)


def hl_maximal(f, p, x):
    """Uncentered p-maximal function (M(|f|^p))^{1/p} on a 1-D grid.

    Supremum over intervals containing x with endpoints at cell boundaries
    or at x itself, which is exhaustive for cell-constant data.
    """
    p = as_exponent(p)
    if p == INF:
        return lp_norm(f, INF)
    if f.d != 1:
        raise ValueError("hl_maximal expects a 1-D grid function")
    pf = float(p)
    h = float(f.h[0])
    lo = float(f.lo[0])
    n = f.shape[0]
    g = np.abs(f.values) ** pf
    pref = np.concatenate([[0.0], np.cumsum(g) * h])  # integral up to edge i
    edges = lo + h * np.arange(n + 1)

    best = 0.0
    x = float(x)
    xi = np.clip(int(math.floor((x - lo) / h)), 0, n - 1) if edges[0] <= x <= edges[-1] else None

    def avg(mass, length):
        return mass / length if length > 0 else 0.0

    if xi is None:
        # x outside the box: one endpoint is x, the other a cell edge.
        side = 0 if x < edges[0] else n
        for j in range(n + 1):
            length = abs(edges[j] - x)
            mass = abs(pref[side] - pref[j])
            best = max(best, avg(mass, length))
    else:
        # grid-aligned candidates
        for a in range(xi + 1):
            for b in range(xi + 1, n + 1):
                best = max(best, avg(pref[b] - pref[a], edges[b] - edges[a]))
        # x-anchored candidates
        part_left = g[xi] * (x - edges[xi])
        part_right = g[xi] * (edges[xi + 1] - x)
        for b in range(xi + 1, n + 1):
            best = max(best, avg(part_right + pref[b] - pref[xi + 1], edges[b] - x))
        for a in range(xi + 1):
            best = max(best, avg(part_left + pref[xi] - pref[a], x - edges[a]))
    return best ** (1.0 / pf)
