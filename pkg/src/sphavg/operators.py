"""Averaging and maximal operators over spheres.

Single-scale averages are quadratures; every supremum over a continuous
parameter (the radius t, the dyadic scale k) is taken over a finite
geometric grid and is therefore a certified lower bound for the true
supremum.  Sweeps are expected to demonstrate K-stability before a fit is
trusted.

The slicing identity
    int_{S^{2d-1}} f(x-t y1) g(x-t y2) dsigma
      = int_0^1 A_{ts}f(x) A_{t sqrt(1-s^2)}g(x) s^{d-1}(1-s^2)^{(d-2)/2} ds
(with raw S^{d-1} averages) bridges direct high-dimensional quadrature and
products of low-dimensional averages; both paths are implemented and
checked against each other.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from sphavg.funcspace import INF, BallSum, as_exponent, conjugate
from sphavg.quad import rotate, slicing_nodes, sphere_area


@dataclass(frozen=True)
class RExponent:
    """Integrability exponent r in [1, inf] with its Holder conjugate."""

    r: object

    def __post_init__(self):
        object.__setattr__(self, "r", as_exponent(self.r))
        if self.r != INF and self.r < 1:
            raise ValueError("r must be >= 1")

    @property
    def conj(self):
        return conjugate(self.r)

    @property
    def is_inf(self):
        return self.r == INF

    def __float__(self):
        return float(self.r)


@dataclass(frozen=True)
class TimeGrid:
    """Finite grid of averaging radii: K samples per octave.

    mode 'local' covers [1, 2]; mode 'global' covers the octaves
    [2^k, 2^(k+1)] for k in k_range (inclusive endpoints).
    """

    mode: str = "local"
    K: int = 16
    k_range: tuple = (0, 0)

    def __post_init__(self):
        if self.K < 8:
            raise ValueError("need at least 8 samples per octave")
        if self.mode not in ("local", "global"):
            raise ValueError("mode must be 'local' or 'global'")

    def times(self):
        if self.mode == "local":
            return 2.0 ** (np.arange(self.K + 1) / self.K)
        k0, k1 = self.k_range
        exps = np.arange(k0 * self.K, k1 * self.K + self.K + 1) / self.K
        return 2.0**exps


def _gl_panels(a, b, panels, order=4):
    """Composite Gauss-Legendre nodes/weights on [a, b]."""
    x0, w0 = roots_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    nodes = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    weights = (half[:, None] * w0[None, :]).ravel()
    return nodes, weights


def avg_radii(f, x, radii, rule):
    """A_t f(x) for an array of radii t (any shape), one batched call.

    Dispatches to exact closed forms for BallSum carriers and to a windowed
    arc quadrature for d=2 carriers exposing a bounding ball; everything
    else goes through the sphere rule.
    """
    radii = np.asarray(radii, dtype=np.float64)
    if np.any(radii <= 0):
        raise ValueError("averaging radius must be positive")
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    normalized = rule.mode == "normalized"
    if isinstance(f, BallSum):
        return f.sphere_average_batch(np.linalg.norm(x), radii,
                                      normalized=normalized)
    if f.d == 2 and hasattr(f, "bounding_ball"):
        center, brad = f.bounding_ball()
        flat = radii.ravel()
        out = np.array([
            _windowed_circle_average(f, x, t, center, brad,
                                     n=max(512, 4 * rule.nodes.shape[0]))
            for t in flat
        ])
        if not normalized:
            out = out * sphere_area(2)
        return out.reshape(radii.shape)
    shape = radii.shape
    flat = radii.reshape(-1)
    pts = x[None, None, :] - flat[:, None, None] * rule.nodes[None, :, :]
    vals = f.eval_points(pts)
    return (vals @ rule.weights).reshape(shape)


def _windowed_circle_average(f, x, t, center, brad, n=1024):
    """Normalized circle average restricted to the arc that can meet the
    carrier's bounding ball (exact restriction: f vanishes elsewhere)."""
    v = np.asarray(x, dtype=np.float64) - np.asarray(center, dtype=np.float64)
    rho = float(np.hypot(v[0], v[1]))
    if rho == 0.0:
        phi_c, half = 0.0, math.pi
    else:
        mu = (rho**2 + t**2 - brad**2) / (2.0 * t * rho)
        if mu > 1.0:
            return 0.0
        phi_c = math.atan2(v[1], v[0])
        half = math.pi if mu < -1.0 else math.acos(mu)
    phi = phi_c + half * (2.0 * np.arange(n) + 1.0) / n - half
    ys = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    vals = f.eval_points(x[None, :] - t * ys)
    return float(np.mean(vals)) * (2.0 * half) / (2.0 * math.pi)


def spherical_average(f, x, t, rule):
    """A_t f(x) = int_{S^{d-1}} f(x - t y) dsigma(y)."""
    return float(avg_radii(f, x, np.array([t]), rule)[0])


def maximal_average(f, x, grid, rule):
    """sup over the time grid of |A_t f(x)| (realizes A_*, A_loc)."""
    return float(np.max(np.abs(avg_radii(f, x, grid.times(), rule))))


def _lr_norm(values, weights, r):
    values = np.abs(values)
    if isinstance(r, RExponent):
        r = r.r
    r = as_exponent(r)
    if r == INF:
        return float(np.max(values))
    rf = float(r)
    return float(np.sum(values**rf * weights)) ** (1.0 / rf)


def ar_value(f, x, r, rule, K=24, scale=1.0, focus=None):
    """||A_{scale * t} f(x)||_{L^r([1,2], t^{d-1} dt)}.

    Composite Gauss-Legendre quadrature with K panels; r = inf degenerates
    to the maximum over the panel nodes (a grid supremum).

    focus=(center, halfwidth) adds K dedicated panels on the window where
    the integrand is known to live (counterexample rows concentrate all
    their t-mass in an O(delta) window that uniform panels cannot see).
    """
    d = f.d
    ts, wts = _gl_panels(1.0, 2.0, K)
    if focus is not None:
        lo = max(1.0, focus[0] - focus[1])
        hi = min(2.0, focus[0] + focus[1])
        if hi > lo:
            tf, wf = _gl_panels(lo, hi, K)
            tsc, wsc = [], []
            for seg_lo, seg_hi in ((1.0, lo), (hi, 2.0)):
                if seg_hi - seg_lo > 1e-12:
                    a, b = _gl_panels(seg_lo, seg_hi, max(4, K // 2))
                    tsc.append(a)
                    wsc.append(b)
            ts = np.concatenate([tf] + tsc)
            wts = np.concatenate([wf] + wsc)
    rr = r.r if isinstance(r, RExponent) else as_exponent(r)
    if rr == INF:
        ts = np.concatenate([[1.0], ts, [2.0]])
        vals = avg_radii(f, x, scale * ts, rule)
        return float(np.max(np.abs(vals)))
    vals = avg_radii(f, x, scale * ts, rule)
    return _lr_norm(vals, wts * ts ** (d - 1), r)


def ar_star(f, x, r, k_range, rule, K=24):
    """sup over k in k_range of ||A_{2^k t} f(x)||_{L^r([1,2], t^{d-1}dt)}."""
    k0, k1 = k_range
    return max(ar_value(f, x, r, rule, K=K, scale=2.0**k)
               for k in range(k0, k1 + 1))


def br_delta(f, x, r, delta, rule, K=24, n_t=17):
    """B^r_delta f(x): sup over t in (1,2) of the delta-window average
    ((1/delta) int_{1-delta}^{1+delta} |A_{ts} f(x)|^r s^{d-1} ds)^(1/r)."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    d = f.d
    ts = 2.0 ** (np.arange(n_t + 1) / n_t)
    ss, ws = _gl_panels(1.0 - delta, 1.0 + delta, K)
    radii = ts[:, None] * ss[None, :]
    vals = avg_radii(f, x, radii.ravel(), rule).reshape(radii.shape)
    rr = r.r if isinstance(r, RExponent) else as_exponent(r)
    if rr == INF:
        return float(np.max(np.abs(vals)))
    rf = float(rr)
    inner = np.sum(np.abs(vals) ** rf * (ws * ss ** (d - 1))[None, :], axis=1)
    return float(np.max(inner / delta) ** (1.0 / rf))


# -- bilinear operators ---------------------------------------------------


def bilinear_average_direct(f, g, x, t, rule2):
    """int_{S^{2d-1}} f(x - t y1) g(x - t y2) dsigma(y1, y2) by direct
    quadrature; rule2 lives on S^{2d-1} in R^{2d}."""
    d = f.d
    if rule2.d != 2 * d:
        raise ValueError("rule dimension must be 2d")
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y1 = rule2.nodes[:, :d]
    y2 = rule2.nodes[:, d:]
    vf = f.eval_points(x[None, :] - t * y1)
    vg = g.eval_points(x[None, :] - t * y2)
    return float(np.dot(rule2.weights, vf * vg))


def sliced_bilinear_over_ts(f, g, x, ts, rule_f, rule_g, K=48,
                            normalized=False):
    """Sliced bilinear averages for a whole batch of radii t at once.

    Uses raw inner averages so the result matches the raw direct
    quadrature with constant exactly one.
    """
    d = f.d
    if d < 2:
        raise ValueError("slicing requires d >= 2")
    if rule_f.mode != "raw" or rule_g.mode != "raw":
        raise ValueError("slicing path expects raw-mode sphere rules")
    ts = np.asarray(ts, dtype=np.float64)
    s, c, w = slicing_nodes(d, K)
    vf = avg_radii(f, x, ts[:, None] * s[None, :], rule_f)
    vg = avg_radii(g, x, ts[:, None] * c[None, :], rule_g)
    out = (vf * vg) @ w
    if normalized:
        out = out / sphere_area(2 * d)
    return out


def bilinear_average_sliced(f, g, x, t, rule_f, rule_g, K=48,
                            normalized=False):
    return float(sliced_bilinear_over_ts(f, g, x, np.array([t]), rule_f,
                                         rule_g, K=K, normalized=normalized)[0])


def bilinear_maximal(f, g, x, grid, rule_f, rule_g, K=48, rule_direct=None,
                     normalized=True):
    """Grid supremum of |bilinear average| (realizes M and M_loc).

    d >= 2 uses the sliced path; d = 1 needs a direct S^1 rule passed as
    rule_direct.
    """
    ts = grid.times()
    if f.d == 1:
        if rule_direct is None:
            raise ValueError("d=1 requires a direct S^1 rule")
        vals = np.array([
            bilinear_average_direct(f, g, x, t, rule_direct) for t in ts
        ])
    else:
        vals = sliced_bilinear_over_ts(f, g, x, ts, rule_f, rule_g, K=K,
                                       normalized=normalized)
    return float(np.max(np.abs(vals)))


def domination_constant(d, r):
    """Explicit constant of the pointwise domination
    M(f,g)(x) <= C(d,r) * A^r_*(f)(x) * A^{r'}_*(g)(x)
    obtained from the geometric-series splitting of the slicing integral."""
    r = r.r if isinstance(r, RExponent) else as_exponent(r)
    rp = conjugate(r)
    c1 = 1.0 if r == INF else 1.0 / (1.0 - 2.0 ** (-d / float(r)))
    c2 = 1.0 if rp == INF else 1.0 / (1.0 - 2.0 ** (-d / float(rp)))
    return c1 * c2


def holder_bridge_sides(f, g, x, r, ts, rule_f, rule_g, K=48):
    """Both sides of the first display of the local-improving proof:

    lhs(t) = raw sliced bilinear average at t,
    rhs(t) = (int |A_{ts}f|^r s^{d-1} ds)^{1/r}
             * (int |A_{t sqrt(1-s^2)}g|^{r'} s (1-s^2)^{(d-2)/2} ds)^{1/r'}

    computed on the same s-quadrature so the discrete Holder inequality is
    exact.  Returns (lhs array, rhs array) over ts.
    """
    d = f.d
    rr = r.r if isinstance(r, RExponent) else as_exponent(r)
    rp = conjugate(rr)
    ts = np.asarray(ts, dtype=np.float64)
    phi, wphi = _gl_panels(0.0, 0.5 * math.pi, K, order=4)
    s, c = np.sin(phi), np.cos(phi)
    w_full = wphi * s ** (d - 1) * c ** (d - 1)
    w_f = wphi * s ** (d - 1) * c
    w_g = wphi * s * c ** (d - 1)
    vf = np.abs(avg_radii(f, x, ts[:, None] * s[None, :], rule_f))
    vg = np.abs(avg_radii(g, x, ts[:, None] * c[None, :], rule_g))
    lhs = (vf * vg) @ w_full
    if rr == INF:
        left = np.max(vf, axis=1)
    else:
        left = ((vf ** float(rr)) @ w_f) ** (1.0 / float(rr))
    if rp == INF:
        right = np.max(vg, axis=1)
    else:
        right = ((vg ** float(rp)) @ w_g) ** (1.0 / float(rp))
    return lhs, left * right


# -- rotated/linearized bilinear family (d = 2) ---------------------------


def rotated_bilinear(f, g, x, t, theta, rule):
    """A^theta_t(f,g)(x) = int_{S^1} f(x-ty) g(x-t Theta y) dsigma(y)."""
    if f.d != 2 or g.d != 2:
        raise ValueError("rotated bilinear average lives in d = 2")
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if hasattr(f, "bounding_ball"):
        return _windowed_rotated(f, g, x, t, theta,
                                 norm_mode=rule.mode == "normalized")
    y = rule.nodes
    ry = rotate(y, theta)
    vals = f.eval_points(x[None, :] - t * y) * g.eval_points(x[None, :] - t * ry)
    return float(np.dot(rule.weights, vals))


def _windowed_rotated(f, g, x, t, theta, norm_mode, n=4096):
    center, brad = f.bounding_ball()
    v = x - np.asarray(center, dtype=np.float64)
    rho = float(np.hypot(v[0], v[1]))
    if rho == 0.0:
        phi_c, half = 0.0, math.pi
    else:
        mu = (rho**2 + t**2 - brad**2) / (2.0 * t * rho)
        if mu > 1.0:
            return 0.0
        phi_c = math.atan2(v[1], v[0])
        half = math.pi if mu < -1.0 else math.acos(mu)
    phi = phi_c + half * ((2.0 * np.arange(n) + 1.0) / n - 1.0)
    y = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    vals = (f.eval_points(x[None, :] - t * y)
            * g.eval_points(x[None, :] - t * rotate(y, theta)))
    raw = float(np.mean(vals)) * 2.0 * half
    return raw / (2.0 * math.pi) if norm_mode else raw


def rotated_maximal(f, g, x, ts, theta, rule):
    """Grid supremum over the radii ts (realizes M^theta, M^theta_loc)."""
    return max(abs(rotated_bilinear(f, g, x, t, theta, rule)) for t in ts)


def linearized_bilinear(f, g, x, theta, rule):
    """A~^theta(f,g)(x): the rotated average frozen at t = |x|."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    t = float(np.linalg.norm(x))
    if t == 0.0:
        z = np.zeros((1, 2))
        return float(f.eval_points(z)[0] * g.eval_points(z)[0])
    return rotated_bilinear(f, g, x, t, theta, rule)


def linearized_pairing(f, g, h, box, n, rule):
    """<A~^pi(f,g), h> by direct quadrature: cell-center Riemann sum over
    the box paired with S^1 quadrature at t = |x| (raw measure)."""
    lo, hi = box
    xs = lo[0] + (np.arange(n) + 0.5) * (hi[0] - lo[0]) / n
    ys = lo[1] + (np.arange(n) + 0.5) * (hi[1] - lo[1]) / n
    cell = ((hi[0] - lo[0]) / n) * ((hi[1] - lo[1]) / n)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel()], axis=1)
    radii = np.linalg.norm(pts, axis=1)
    hv = h.eval_points(pts)
    nodes, w = rule.nodes, rule.weights
    # batched: points (npts, nnodes, 2) in manageable chunks
    total = 0.0
    chunk = max(1, 2_000_000 // max(nodes.shape[0], 1))
    for i0 in range(0, pts.shape[0], chunk):
        sl = slice(i0, min(i0 + chunk, pts.shape[0]))
        p = pts[sl]
        rr = radii[sl]
        minus = p[:, None, :] - rr[:, None, None] * nodes[None, :, :]
        plus = p[:, None, :] + rr[:, None, None] * nodes[None, :, :]
        av = (f.eval_points(minus) * g.eval_points(plus)) @ w
        total += float(np.dot(av, hv[sl]))
    return total * cell


def linearized_dual_form(f, g, h, box, n, n_u=200):
    """Polar change-of-variables form of <A~^pi(f,g), h>:

    int_{-1}^{1} int f(2 u x) g(2 sqrt(1-u^2) R_{-pi/2} x)
                     h(R_{-arccos u} x) dx  2 du / sqrt(1-u^2)

    with u = cos(tau) removing the endpoint singularity.  The rotation in h
    carries angle -arccos(u); the published display writes +arccos(u), but
    only the sign below reproduces the direct pairing (the display also
    disagrees with its own previous line on the sign of the pi/2 rotation).
    """
    lo, hi = box
    xs = lo[0] + (np.arange(n) + 0.5) * (hi[0] - lo[0]) / n
    ys = lo[1] + (np.arange(n) + 0.5) * (hi[1] - lo[1]) / n
    cell = ((hi[0] - lo[0]) / n) * ((hi[1] - lo[1]) / n)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel()], axis=1)
    tau, wtau = _gl_panels(0.0, math.pi, max(8, n_u // 4))
    total = 0.0
    for tval, wval in zip(tau, wtau):
        u = math.cos(tval)
        ru = math.sqrt(max(1.0 - u * u, 0.0))
        fv = f.eval_points(2.0 * u * pts)
        gv = g.eval_points(2.0 * ru * rotate(pts, -0.5 * math.pi))
        hv = h.eval_points(rotate(pts, -math.acos(u)))
        total += 2.0 * wval * float(np.sum(fv * gv * hv)) * cell
    return total


def beta_integral_finite(p1, p2):
    """Finiteness predicate of int_0^1 t^(-1/p1-1/2) (1-t)^(-1/p2-1/2) dt:
    both exponents must exceed -1, i.e. p1 > 2 and p2 > 2."""
    inv1 = 0.0 if as_exponent(p1) == INF else 1.0 / float(as_exponent(p1))
    inv2 = 0.0 if as_exponent(p2) == INF else 1.0 / float(as_exponent(p2))
    return (-inv1 - 0.5 > -1.0) and (-inv2 - 0.5 > -1.0)


def beta_integral_quadrature(p1, p2, level):
    """Dyadic-panel quadrature reaching down to distance 2^(-8*level) from
    each endpoint; values converge under level refinement exactly when the
    finiteness predicate holds and grow without bound otherwise."""
    if level > 30:
        raise ValueError("refinement level capped at 30")
    inv1 = 0.0 if as_exponent(p1) == INF else 1.0 / float(as_exponent(p1))
    inv2 = 0.0 if as_exponent(p2) == INF else 1.0 / float(as_exponent(p2))
    a, b = -inv1 - 0.5, -inv2 - 0.5
    depth = 8 * level
    edges = 0.5 ** np.arange(depth, -1, -1.0)  # 2^-depth .. 1, into [0, 1/2]
    total = 0.0
    for lo_e, hi_e in zip(0.5 * edges[:-1], 0.5 * edges[1:]):
        ts, ws = _gl_panels(lo_e, hi_e, 1)
        total += float(np.sum(ts**a * (1.0 - ts) ** b * ws))
        # mirrored panel toward t = 1: at u = 1 - ts the integrand is
        # (1-ts)^a ts^b, written this way to avoid cancellation
        total += float(np.sum((1.0 - ts) ** a * ts**b * ws))
    return total


# -- one-dimensional family ------------------------------------------------


def multilinear_average(fs, x, t, n_outer=32, n_circle=256, normalized=True):
    """Multilinear spherical average over S^{m-1} of functions on R, by
    recursive slicing: outer integral over the ball B^{m-2}(0,1), inner
    bilinear circle average at radius sqrt(1 - |y~|^2)."""
    m = len(fs)
    if m < 2:
        raise ValueError("need at least two functions")
    if m > 4:
        raise ValueError("multilinear average capped at m = 4")
    if any(f.d != 1 for f in fs):
        raise ValueError("multilinear average acts on functions of one variable")
    x = float(np.asarray(x).reshape(()))

    def circle_pair(fa, fb, radii):
        ang = 2.0 * math.pi * (np.arange(n_circle) + 0.5) / n_circle
        c, s = np.cos(ang), np.sin(ang)
        radii = np.asarray(radii, dtype=np.float64).reshape(-1)
        pa = x - t * radii[:, None] * c[None, :]
        pb = x - t * radii[:, None] * s[None, :]
        va = fa.eval_points(pa[..., None])
        vb = fb.eval_points(pb[..., None])
        return (va * vb).mean(axis=1) * 2.0 * math.pi  # raw S^1 mass

    if m == 2:
        raw = float(circle_pair(fs[0], fs[1], np.array([1.0]))[0])
    elif m == 3:
        y1, w1 = _gl_panels(-1.0, 1.0, n_outer)
        r = np.sqrt(np.clip(1.0 - y1**2, 0.0, None))
        inner = circle_pair(fs[1], fs[2], r)
        v0 = fs[0].eval_points((x - t * y1)[:, None])
        raw = float(np.sum(w1 * v0 * inner))
    else:
        rho, wr = _gl_panels(0.0, 1.0, n_outer // 2)
        ang = 2.0 * math.pi * (np.arange(n_outer) + 0.5) / n_outer
        raw = 0.0
        for rv, wv in zip(rho, wr):
            y1 = rv * np.cos(ang)
            y2 = rv * np.sin(ang)
            r = math.sqrt(max(1.0 - rv * rv, 0.0)) * np.ones_like(ang)
            inner = circle_pair(fs[2], fs[3], r)
            v0 = fs[0].eval_points((x - t * y1)[:, None])
            v1 = fs[1].eval_points((x - t * y2)[:, None])
            raw += wv * rv * (2.0 * math.pi / n_outer) * float(
                np.sum(v0 * v1 * inner))
    if normalized:
        return raw / sphere_area(m)
    return raw


def multilinear_maximal(fs, x, ts, **kw):
    return max(abs(multilinear_average(fs, x, t, **kw)) for t in ts)


def tk_operator(f, g, x, k, ts, n_y=64):
    """T_k(f,g)(x): grid supremum over t of
    int_{2^{-k-1}}^{2^{-k}} |f(x-ty)| |g(x - t sqrt(1-y^2))| dy."""
    if f.d != 1 or g.d != 1:
        raise ValueError("T_k acts on functions of one variable")
    x = float(np.asarray(x).reshape(()))
    ys, wy = _gl_panels(2.0 ** (-k - 1), 2.0**-k, max(4, n_y // 4))
    zs = np.sqrt(1.0 - ys**2)
    best = 0.0
    for t in np.asarray(ts, dtype=np.float64):
        vf = np.abs(f.eval_points((x - t * ys)[:, None]))
        vg = np.abs(g.eval_points((x - t * zs)[:, None]))
        best = max(best, float(np.sum(wy * vf * vg)))
    return best


TK_CONSTANT_FORWARD = 2.0 ** (2.0 / 3.0)   # T_k <= C 2^{k/3} M_3 f M_{3/2} g
TK_CONSTANT_REVERSE = 2.0 ** (1.0 / 3.0)   # T_k <= C 2^{-k/3} M_{3/2} f M_3 g
