"""Extremal families: the four necessary-condition rows for the L^r
averages, the Kakeya rectangle pair for the rotated bilinear maximal
function, the dyadic ball sum defeating Lorentz-refined bounds, and the
product-type pair behind the d >= 2 necessary condition.

Generators return analytic carriers (indicator unions, ball sums, explicit
formulas) rather than grid samples wherever a grid at the required
resolution would be infeasible or would smear the geometry; each family
carries its predicted scaling exponents.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction as Fr

import numpy as np
from shapely.geometry import box as shapely_box
from shapely.ops import unary_union
from shapely import affinity

from sphavg import kernels
from sphavg.funcspace import BallSum, BoxIndicator, SmoothFunction, ball_volume
from sphavg.regions import inv


# -- necessary-condition rows ------------------------------------------------


@dataclass(frozen=True)
class ExampleRow:
    """One row of the necessary-condition table: function, test set, and
    the predicted exponents alpha (norm), beta (set measure), gamma
    (operator lower bound) as functions of (d, p, q, r)."""

    row_id: str
    alpha: object  # callable(d, inv_p) -> Fraction
    beta: object   # callable(d) -> Fraction
    gamma: object  # callable(d, inv_r) -> Fraction
    condition: str


ROWS = {
    "shell": ExampleRow(
        "shell",
        alpha=lambda d, ip: ip,
        beta=lambda d: Fr(d),
        gamma=lambda d, ir: ir,
        condition="1/p <= d/q + 1/r",
    ),
    "small-ball": ExampleRow(
        "small-ball",
        alpha=lambda d, ip: d * ip,
        beta=lambda d: Fr(0),
        gamma=lambda d, ir: Fr(d - 1) + ir,
        condition="d/p <= d - 1 + 1/r",
    ),
    "knapp": ExampleRow(
        "knapp",
        alpha=lambda d, ip: Fr(d + 1, 2) * ip,
        beta=lambda d: Fr(d - 1, 2),
        gamma=lambda d, ir: Fr(d - 1, 2) + ir,
        condition="(d+1)/(2p) <= (d-1)/(2q) + 1/r + (d-1)/2",
    ),
    "big-ball": ExampleRow(
        "big-ball",
        alpha=lambda d, ip: -d * ip,
        beta=lambda d: Fr(-d),
        gamma=lambda d, ir: Fr(0),
        condition="1/q <= 1/p",
    ),
}


@dataclass
class RowInstance:
    row: ExampleRow
    delta: float
    d: int
    f: object                 # function carrier
    support_measure: float    # |supp f|
    test_measure: float       # |E|
    sample_test_points: object  # callable(n, rng) -> (n, d) points
    focus: object = None      # callable(x) -> (center, halfwidth) in t


def make_row(row_id, delta, d=2, p=2, c=4.0, rng=None):
    """Instantiate a necessary-condition row at scale delta.

    The shell/ball rows are exact BallSum carriers; the Knapp row is an
    exact box indicator evaluated through windowed arc quadrature.
    """
    if not 0 < delta <= 0.25:
        raise ValueError("delta must lie in (0, 1/4]")
    row = ROWS[row_id]
    if row_id == "knapp" and d == 2:
        # resolution guard mirrors the grid-based path: the box must be
        # representable at scale delta^2 against its own size
        if delta**2 / 4.0 <= 1e-12:
            raise ValueError("delta too small to resolve the Knapp box")
    focus = None
    if row_id == "shell":
        f = BallSum([1.0, -1.0], [1.0 + c * delta, 1.0 - c * delta], d)
        supp = ball_volume(d, 1 + c * delta) - ball_volume(d, 1 - c * delta)
        test = ball_volume(d, delta)

        def sampler(n, rng):
            return _ball_points(n, d, delta, rng)

        def focus(x):
            return 1.0, (c + 2.0) * delta
    elif row_id == "small-ball":
        f = BallSum([1.0], [c * delta], d)
        supp = ball_volume(d, c * delta)
        test = ball_volume(d, 2.0) - ball_volume(d, 1.0)

        def sampler(n, rng):
            return _annulus_points(n, d, 1.0, 2.0, rng)

        def focus(x):
            return float(np.linalg.norm(x)), 2.0 * c * delta
    elif row_id == "knapp":
        if d != 2:
            raise ValueError("the Knapp row is implemented for d = 2")
        half = np.array([c * math.sqrt(delta), c * delta])
        f = BoxIndicator(-half, half)
        f.bounding_ball = lambda: (np.zeros(2), float(np.hypot(*half)))
        supp = f.measure
        test = (2.0 * math.sqrt(delta)) ** (d - 1) * 1.0

        def sampler(n, rng):
            pts = rng.uniform(-1.0, 1.0, size=(n, d))
            pts[:, :-1] *= math.sqrt(delta)
            pts[:, -1] = 1.5 + 0.5 * pts[:, -1]
            return pts

        def focus(x):
            # circle-meets-plate window: box height plus the sagitta of
            # the c*sqrt(delta) chord
            return float(np.linalg.norm(x)), (2.0 * c + c * c) * delta
    elif row_id == "big-ball":
        f = BallSum([1.0], [1.0 / delta], d)
        supp = ball_volume(d, 1.0 / delta)
        test = supp

        def sampler(n, rng):
            # stay away from the rim so spheres of radius <= 2 see f = 1
            return _ball_points(n, d, 1.0 / delta - 2.5, rng)
    else:
        raise ValueError(f"unknown row {row_id!r}")
    return RowInstance(row=row, delta=delta, d=d, f=f,
                       support_measure=supp,
                       test_measure=test, sample_test_points=sampler,
                       focus=focus)


def _ball_points(n, d, radius, rng):
    pts = rng.normal(size=(n, d))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    rr = radius * rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / d)
    return pts * rr


def _annulus_points(n, d, r0, r1, rng):
    pts = rng.normal(size=(n, d))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    u = rng.uniform(r0**d, r1**d, size=(n, 1))
    return pts * u ** (1.0 / d)


# -- Kakeya family -----------------------------------------------------------


class RectUnion:
    """Indicator of a union of rotated rectangles, evaluated exactly."""

    def __init__(self, centers, axes, half_len, half_wid):
        self.centers = np.ascontiguousarray(centers, dtype=np.float64)
        self.axes = np.ascontiguousarray(axes, dtype=np.float64)
        n = self.centers.shape[0]
        self.half_len = np.ascontiguousarray(
            np.broadcast_to(half_len, (n,)), dtype=np.float64)
        self.half_wid = np.ascontiguousarray(
            np.broadcast_to(half_wid, (n,)), dtype=np.float64)
        self._cols = tuple(np.ascontiguousarray(a)
                           for a in (self.centers[:, 0], self.centers[:, 1],
                                     self.axes[:, 0], self.axes[:, 1]))
        self.d = 2

    def eval_points(self, pts):
        pts = np.asarray(pts, dtype=np.float64)
        flat = pts.reshape(-1, 2)
        cx, cy, ux, uy = self._cols
        out = kernels.rect_union_contains(
            cx, cy, ux, uy, self.half_len, self.half_wid,
            np.ascontiguousarray(flat[:, 0]),
            np.ascontiguousarray(flat[:, 1]))
        return out.reshape(pts.shape[:-1])

    def bounding_ball(self):
        corners = np.linalg.norm(self.centers, axis=1) + np.hypot(
            self.half_len, self.half_wid)
        return np.zeros(2), float(np.max(corners))

    def union_area(self):
        polys = []
        for c, u, hl, hw in zip(self.centers, self.axes,
                                self.half_len, self.half_wid):
            rect = shapely_box(-hl, -hw, hl, hw)
            rect = affinity.rotate(rect, math.degrees(math.atan2(u[1], u[0])),
                                   origin=(0, 0))
            polys.append(affinity.translate(rect, c[0], c[1]))
        return float(unary_union(polys).area)

    def sample_points(self, n, rng, margin=0.0):
        """Uniform sample from the union (rejection-free: pick a rectangle
        by area, then a point in it; duplicates across overlaps are fine
        for lower-bound coverage checks)."""
        idx = rng.integers(0, self.centers.shape[0], size=n)
        a = (rng.uniform(-1, 1, size=n) * (self.half_len[idx] - margin))
        b = (rng.uniform(-1, 1, size=n) * (self.half_wid[idx] - margin))
        u = self.axes[idx]
        perp = np.stack([-u[:, 1], u[:, 0]], axis=1)
        return self.centers[idx] + a[:, None] * u + b[:, None] * perp


@dataclass
class KakeyaFamily:
    """Thin-rectangle pair defeating restricted weak type bounds at L^2.

    f is the indicator of delta^-1 overlapping delta x delta^2 rectangles
    through the origin (directions spaced delta apart, Besicovitch-style
    translates along the base line shrink the union to ~ delta^2/log(1/delta));
    g is supported on the rectangles that the theta-rotated circles,
    centered on the translated family R_{l,nu}, sweep across f's support.
    """

    delta: float
    theta: float
    f: RectUnion
    g: RectUnion
    translated: RectUnion          # union of R_{l, nu}: the test set
    base_centers: np.ndarray       # per-(l, nu) centers of R_l copies
    translations: np.ndarray       # per-(l, nu) translation vectors
    n_directions: int
    n_intervals: int
    f_union_area: float = field(default=None)

    def union_ratio(self):
        """|union R_l| * log(1/delta) / delta^2."""
        if self.f_union_area is None:
            self.f_union_area = self.f.union_area()
        return self.f_union_area * math.log(1.0 / self.delta) / self.delta**2


def _perron_offsets(n):
    """Base-line offsets (in units of the base length) packing n thin
    triangles/rectangles of consecutive directions into a Perron tree.

    Recursive pairing: merge neighbours, then slide the two half-families
    so their envelopes overlap by half; measured union areas follow the
    ~ 1/log(n) Besicovitch rate on the dyadic ladder used here.
    """
    if n == 1:
        return np.zeros(1)
    half = (n + 1) // 2
    left = _perron_offsets(half)
    right = _perron_offsets(n - half)
    # slide the right family onto the left: after rescaling, consecutive
    # levels overlap a fraction 1/2 of the current envelope width
    width = 0.5
    return np.concatenate([left * width, right * width + 0.5 * width])


def make_kakeya(delta, theta=math.pi):
    """Kakeya pair at resolution delta in {2^-4 .. 2^-9}.

    The g-rectangles sit at (I - Theta) x_c + Theta R_l for each translated
    copy with center x_c (equivalently: translate R_l by 2 sin(theta/2)
    |x_c| along the rotated perpendicular, then rotate by theta), fattened
    by a constant factor so the whole smeared arc image lands inside.
    """
    if not (2.0**-9 - 1e-12 <= delta <= 2.0**-4 + 1e-12):
        raise ValueError("delta outside the supported ladder 2^-4 .. 2^-9")
    n_dir = int(round(1.0 / delta))
    angles = delta * np.arange(n_dir)
    axes = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    perp = np.stack([-np.sin(angles), np.cos(angles)], axis=1)
    # Besicovitch translations along the common base line (x-axis),
    # scaled to the [-delta, delta] cube
    offsets = _perron_offsets(n_dir)
    shift = (offsets - float(np.mean(offsets))) * delta
    centers = shift[:, None] * np.array([[1.0, 0.0]])
    f = RectUnion(centers, axes, 0.5 * delta, 0.5 * delta**2)

    n_int = int(round(delta**-2))
    # one translated copy R_{l, nu} per (direction, interval) would be
    # delta^-3 rectangles; the test set keeps that count implicitly by
    # sampling (l, nu) pairs on demand
    return KakeyaFamily(
        delta=delta, theta=theta, f=f, g=None, translated=None,
        base_centers=centers, translations=None,
        n_directions=n_dir, n_intervals=n_int,
    )


def kakeya_pair(family, n_pairs, rng, fatten=3.0):
    """Materialize n_pairs random (l, nu) copies: the translated test
    rectangles R_{l, nu}, the matching g-rectangles, and the base-copy
    centers (the circle radius certifying the lower bound at x in
    R_{l, nu} is |x - base_center_l|).

    Carrying all delta^-3 copies is never needed: the maximal-function
    lower bound is checked at sampled points, and each sampled copy brings
    its own g-rectangle.
    """
    delta, theta = family.delta, family.theta
    n_dir = family.n_directions
    ls = rng.integers(0, n_dir, size=n_pairs)
    cs = rng.uniform(1.0, 2.0 - 4.0 * delta, size=n_pairs)
    angles = delta * ls
    axes = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    perp = np.stack([-np.sin(angles), np.cos(angles)], axis=1)
    base = family.base_centers[ls]
    centers = base + cs[:, None] * perp

    translated = RectUnion(centers, axes, 0.5 * delta, 0.5 * delta**2)

    # y on the good arc maps the second factor into
    # (x_c - Theta x_c + Theta base_l) + Theta [rect]; fattening absorbs
    # the motion of x inside its rectangle
    rot = np.array([[math.cos(theta), -math.sin(theta)],
                    [math.sin(theta), math.cos(theta)]])
    g_centers = centers - (centers - base) @ rot.T
    g_axes = axes @ rot.T
    g = RectUnion(g_centers, g_axes, fatten * 0.5 * delta,
                  fatten * 0.5 * delta**2)
    return translated, g, base


def kakeya_maximal_values(family, n_points=50, seed=0, n_arc=4096,
                          refine=2):
    """M^theta_loc(f, g) lower bounds at one sampled point per sampled
    copy R_{l, nu}: radius candidates around t = |x - base_center_l|
    (the circle through the base copy, tangent along its length),
    windowed arc quadrature, raw circle measure."""
    rng = np.random.default_rng(seed)
    delta, theta = family.delta, family.theta
    translated, g, base = kakeya_pair(family, n_points, rng)
    # one point inside each sampled copy, away from the short edges
    a = rng.uniform(-0.8, 0.8, size=n_points) * translated.half_len
    b = rng.uniform(-0.9, 0.9, size=n_points) * translated.half_wid
    u = translated.axes
    perp = np.stack([-u[:, 1], u[:, 0]], axis=1)
    pts = translated.centers + a[:, None] * u + b[:, None] * perp
    f = family.f
    out = np.empty(n_points)
    from sphavg.operators import _windowed_rotated

    for i, x in enumerate(pts):
        t0 = float(np.linalg.norm(x - base[i]))
        cands = t0 + delta**2 * np.linspace(-1.0, 1.0, 2 * refine + 1)
        cands = cands[(cands > 0.5) & (cands < 2.5)]
        best = 0.0
        for t in cands:
            val = _windowed_rotated(f, g, x, float(t), theta,
                                    norm_mode=False, n=n_arc)
            best = max(best, abs(val))
        out[i] = best
    return out


# -- dyadic ball sum ---------------------------------------------------------


@dataclass(frozen=True)
class DyadicSumSpec:
    N: int
    a: float = 0.25
    d: int = 2
    r: object = 1

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("need at least one level")

    @property
    def p0(self):
        """dr/(dr - r + 1): the Lorentz exponent the sum defeats."""
        d = Fr(self.d)
        ir = inv(self.r)
        return 1 / (Fr(d - 1, d) + ir / d)


def make_dyadic_sum(spec):
    """f = sum_{i=1..N} 4^{(d/p0) i} chi_{B(0, a 4^-i)} as an exact
    BallSum (closed-form averages, Lorentz norms, distribution function)."""
    dp0 = float(Fr(spec.d) / spec.p0)
    i = np.arange(1, spec.N + 1)
    coefs = 4.0 ** (dp0 * i)
    radii = spec.a * 4.0 ** (-i.astype(np.float64))
    return BallSum(coefs, radii, spec.d)


def dyadic_ar_value(f, c, r, d=2, per_level=12, t_lo=1.0, t_hi=2.0):
    """|| A_t f(x) ||_{L^r([1,2], t^{d-1} dt)} for a BallSum f at |x| = c,
    in shifted coordinates u = t - c.

    Absolute-t quadrature cannot see windows narrower than the floating
    point spacing at t ~ 1.5, which the deep dyadic layers are; the cap
    angle as a function of u is evaluated through
        1 - cos(phi) = (rho - |u|)(rho + |u|) / (2 c (c + u)),
        phi = 2 asin(sqrt((1 - cos phi)/2)),
    which is stable down to rho ~ 1e-150.  d = 2 only.
    """
    if d != 2:
        raise ValueError("shifted evaluator implemented for d = 2")
    radii = f.radii
    # graded u-panels: one block per dyadic annulus, plus the outer rest
    edges = np.concatenate([[0.0], radii[::-1]])  # increasing
    us, ws = [], []
    from sphavg.operators import _gl_panels

    for lo_e, hi_e in zip(edges[:-1], edges[1:]):
        for sgn in (-1.0, 1.0):
            a_seg, b_seg = sgn * hi_e, sgn * lo_e
            if a_seg > b_seg:
                a_seg, b_seg = b_seg, a_seg
            a_seg = max(a_seg, t_lo - c)
            b_seg = min(b_seg, t_hi - c)
            if b_seg - a_seg > 0:
                t, w = _gl_panels(a_seg, b_seg, per_level)
                us.append(t)
                ws.append(w)
    for a_seg, b_seg in ((t_lo - c, -radii[0]), (radii[0], t_hi - c)):
        if b_seg - a_seg > 0:
            t, w = _gl_panels(a_seg, b_seg, per_level)
            us.append(t)
            ws.append(w)
    u = np.concatenate(us)
    w = np.concatenate(ws)
    vals = np.zeros(u.shape)
    for coef, rho in zip(f.coefs, f.radii):
        inside = np.abs(u) < rho
        if not np.any(inside):
            continue
        ui = u[inside]
        one_minus_mu = ((rho - np.abs(ui)) * (rho + np.abs(ui))
                        / (2.0 * c * (c + ui)))
        phi = 2.0 * np.arcsin(np.sqrt(np.clip(0.5 * one_minus_mu, 0.0, 1.0)))
        vals[inside] += coef * phi / math.pi
    tpow = (c + u) ** (d - 1)
    if math.isinf(float(r)):
        return float(np.max(np.abs(vals)))
    rf = float(r)
    return float(np.sum(np.abs(vals) ** rf * tpow * w)) ** (1.0 / rf)


def dyadic_block_edges(spec):
    """Block levels S_j = sum_{m<=j} 4^{(d/p0) m}: on (S_j, S_{j+1}] the
    super-level set is exactly B(0, a 4^-(j+1))."""
    dp0 = float(Fr(spec.d) / spec.p0)
    vals = 4.0 ** (dp0 * np.arange(1, spec.N + 1))
    return np.cumsum(vals)


# -- product-type pair -------------------------------------------------------


@dataclass(frozen=True)
class ProductTypeSpec:
    d1: int
    d2: int
    alpha1: Fr
    alpha2: Fr
    beta1: Fr
    beta2: Fr
    p1: Fr
    p2: Fr

    def __post_init__(self):
        ok = (self.alpha1 < Fr(1, self.d1) and self.alpha2 < 1
              and self.beta1 < Fr(1, self.d1) and self.beta2 < 1)
        if not ok:
            raise ValueError("exponents violate integrability: need "
                             "alpha1, beta1 < 1/d1 and alpha2, beta2 < 1")

    @property
    def d(self):
        return self.d1 + self.d2

    def bk_exponent(self):
        """Exact growth exponent of the single-scale average on B_k, in
        powers of 2^k."""
        return (Fr(self.d1) * self.alpha1 / self.p1
                + Fr(self.d1) * self.beta1 / self.p2
                + Fr(self.d2) * self.alpha2 / (2 * self.p1)
                + Fr(self.d2) * self.beta2 / (2 * self.p2)
                - Fr(self.d2, 2))


def make_product_type(spec, cap_scale=1e9, half_width=1.5):
    """(f, g) of product type with power singularities on {|x_1| = 1} and
    {x_2 = 0}, supported on the box |x_i| <= half_width.

    The support box must extend past the unit sphere: on B_k the averaging
    circle pushes one factor's first argument slightly beyond |z_1| = 1,
    so a box clipped exactly there would zero out the product.  Values are
    capped at cap_scale (the test points stay off the singular sets, so
    the cap never touches the asserted lower bounds).
    """
    if spec.d1 != 1 or spec.d2 != 1:
        raise ValueError("the desk-scale build instantiates d1 = d2 = 1")

    def build(e1, e2, p):
        a1 = float(Fr(spec.d1) * e1 / p)
        a2 = float(Fr(spec.d2) * e2 / p)

        def fn(pts):
            x1 = pts[..., 0]
            x2 = pts[..., 1]
            inside = (np.abs(x1) <= half_width) & (np.abs(x2) <= half_width)
            u = np.abs(np.abs(x1) - 1.0)
            v = np.abs(x2)
            with np.errstate(divide="ignore", over="ignore"):
                val = (np.where(u > 0, u, np.nan) ** -a1
                       * np.where(v > 0, v, np.nan) ** -a2)
            val = np.nan_to_num(val, nan=cap_scale, posinf=cap_scale)
            return np.where(inside, np.minimum(val, cap_scale), 0.0)

        return SmoothFunction(2, fn)

    f = build(spec.alpha1, spec.alpha2, spec.p1)
    g = build(spec.beta1, spec.beta2, spec.p2)
    return f, g


def bk_points(k, n, rng):
    """Sample points of B_k = {2^-k <= |x1| <= 2^-k+1} x {2^-k/2 <= |x2|
    <= 2^-(k-1)/2} (positive quadrant representatives)."""
    x1 = rng.uniform(2.0**-k, 2.0 ** (-k + 1), size=n)
    x2 = rng.uniform(2.0 ** (-k / 2.0), 2.0 ** (-(k - 1) / 2.0), size=n)
    return np.stack([x1, x2], axis=1)


def single_scale_product_average(f, g, x, n_r=4000):
    """T(f,g)(x) = int_{S^1} f(x-y) g(x+y) dsigma(y) through the slicing
    form for d1 = d2 = 1:

        int_0^1 (1-r^2)^(-1/2) sum_{s1, s2 = +-1}
            f(x1 - s1 r, x2 - s2 rho) g(x1 + s1 r, x2 + s2 rho) dr

    with rho = sqrt(1-r^2); the substitution r = cos(u) removes the
    weight.  The integrand has integrable power singularities (exponents
    < 1); a midpoint u-grid never lands on them and converges.
    """
    x1, x2 = float(x[0]), float(x[1])
    u = (np.arange(n_r) + 0.5) * (0.5 * math.pi / n_r)
    du = 0.5 * math.pi / n_r
    r = np.cos(u)
    rho = np.sin(u)
    ones = np.ones_like(r)
    total = np.zeros(n_r)
    for s1 in (+1.0, -1.0):
        for s2 in (+1.0, -1.0):
            fa = np.stack([x1 - s1 * r, (x2 - s2 * rho) * ones], axis=-1)
            ga = np.stack([x1 + s1 * r, (x2 + s2 * rho) * ones], axis=-1)
            total += f.eval_points(fa) * g.eval_points(ga)
    return float(np.sum(total) * du)
