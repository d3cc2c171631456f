"""Exact-rational exponent-region geometry.

Every vertex formula, boundedness region, and necessary-condition
inequality is encoded over Fraction coordinates, so measure-zero strata
(single vertices, open segments) classify correctly.  Coordinates are
always INVERSE exponents: (1/p, 1/q) for the linear families,
(1/p1, 1/p2) or (1/p1, 1/p2, 1/p) for the bilinear ones.

Verdicts: 'strong', 'restricted-weak', 'restricted-strong', 'weak',
'false', 'open' (asserted by no result), 'bounded-with-rate' (the
delta-window family, rate attached).
"""

from dataclasses import dataclass, field
from fractions import Fraction as Fr

from sphavg.funcspace import INF, as_exponent, conjugate


def inv(p):
    """1/p as an exact Fraction, with 1/inf = 0."""
    p = as_exponent(p)
    if p == INF:
        return Fr(0)
    return Fr(1) / p


@dataclass(frozen=True)
class ExponentPoint:
    coords: tuple
    d: int = 2
    r: object = None

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fr(c) for c in self.coords))
        if self.r is not None:
            object.__setattr__(self, "r", as_exponent(self.r))

    @property
    def arity(self):
        return len(self.coords)


@dataclass(frozen=True)
class Verdict:
    verdict: str
    citations: tuple
    detail: dict = field(default_factory=dict)


# -- exact plane geometry ---------------------------------------------------


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def on_segment(p, a, b, include_ends=True):
    if _cross(a, b, p) != 0:
        return False
    lo0, hi0 = min(a[0], b[0]), max(a[0], b[0])
    lo1, hi1 = min(a[1], b[1]), max(a[1], b[1])
    if not (lo0 <= p[0] <= hi0 and lo1 <= p[1] <= hi1):
        return False
    if not include_ends and (p == tuple(a) or p == tuple(b)):
        return False
    return True


def in_convex_polygon(p, vertices, open_region=False):
    """Exact membership in the convex hull of `vertices` (any order/dupes)."""
    verts = _hull(vertices)
    if len(verts) == 1:
        inside = tuple(p) == verts[0]
        return inside and not open_region
    if len(verts) == 2:
        hit = on_segment(p, verts[0], verts[1])
        return hit and not open_region
    strict = True
    for i in range(len(verts)):
        c = _cross(verts[i], verts[(i + 1) % len(verts)], p)
        if c < 0:
            return False
        if c == 0:
            strict = False
    return strict if open_region else True


def _hull(points):
    """Monotone-chain convex hull in exact arithmetic, CCW order."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


# -- vertex formulas --------------------------------------------------------


def _require(cond, msg):
    if not cond:
        raise ValueError(msg)


def vertices_linear_ar(d, r):
    """O, A, P, Q, R of the L^r([1,2]) spherical-average region."""
    ir = inv(r)
    irp = inv(conjugate(r))
    X = Fr(d - 1, d) + ir / d  # = (rd - r + 1) / (rd)
    return {
        "O": (Fr(0), Fr(0)),
        "A": (ir, Fr(0)),
        "P": (Fr(d + 1, d * d + 1) * ir + Fr(d * d - d, d * d + 1),
              Fr(d - 1, d * d + 1) * irp),
        "Q": (X, irp / d),
        "R": (X, X),
    }


def vertices_linear_br(d, r):
    """Adds the delta-free vertices P', Q', R' of the window-average region."""
    out = vertices_linear_ar(d, r)
    out.update({
        "P'": (Fr(d * d - d, d * d + 1), Fr(d - 1, d * d + 1)),
        "Q'": (Fr(d - 1, d), Fr(1, d)),
        "R'": (Fr(d - 1, d), Fr(d - 1, d)),
    })
    return out


def vertices_local_bilinear_improved(d):
    """A, E, F, B', C, D of the diagonal (p1 = p2) local bilinear diagram."""
    return {
        "A": (Fr(1, 2), Fr(0)),
        "E": (Fr(2 * d - 3, 2 * (d - 1)), Fr(d - 2, d * (d - 1))),
        "F": (Fr((2 * d - 1) ** 2, 2 * (2 * d * d - d + 1)),
              Fr(2 * d - 3, 2 * d * d - d + 1)),
        "B'": (Fr(2 * d * d - d + 1, 2 * (d * d + 1)), Fr(d - 1, d * d + 1)),
        "C": (Fr(2 * d - 1, 2 * d), Fr(1, d)),
        "D": (Fr(2 * d - 1, 2 * d), Fr(2 * d - 1, d)),
    }


def vertices_bilinear_endpoint(d):
    if d == 1:
        return {
            "U1": (Fr(1, 2), Fr(0)),
            "U2": (Fr(1, 2), Fr(1, 2)),
            "U3": (Fr(0), Fr(1, 2)),
        }
    if d == 2:
        return {
            "V1": (Fr(1), Fr(1, 2)),
            "V2": (Fr(1, 2), Fr(1)),
        }
    raise ValueError("endpoint diagram exists for d in {1, 2}")


ROTATED_HULL_VERTICES = (
    (Fr(0), Fr(0), Fr(0)),
    (Fr(2, 3), Fr(2, 3), Fr(1)),
    (Fr(0), Fr(2, 3), Fr(1, 3)),
    (Fr(2, 3), Fr(0), Fr(1, 3)),
    (Fr(1), Fr(0), Fr(1)),
    (Fr(0), Fr(1), Fr(1)),
    (Fr(1, 2), Fr(1, 2), Fr(1, 2)),
)

# facets a.u <= b, exact; derived from the vertex list and verified in tests
ROTATED_HULL_FACETS = (
    ((-1, -1, 1), 0),   # 1/p <= 1/p1 + 1/p2
    ((0, 0, 1), 1),
    ((0, -1, 0), 0),
    ((-1, 0, 0), 0),
    ((2, 1, -1), 1),
    ((1, 2, -1), 1),
    ((1, 1, -2), 0),    # 1/p1 + 1/p2 <= 2/p
)
# extra facet of the theta = pi hull; also the product-type necessary
# condition 3/p1 + 3/p2 <= 1 + 3/p specialized to d = 2
ROTATED_HULL_FACET_PI = ((3, 3, -3), 1)


def vertex_table(theorem, d=2, r=None):
    """Named vertex coordinates (exact rationals) for a theorem's diagram."""
    if theorem == "linear-ar":
        _require(r is not None, "linear-ar needs r")
        return vertices_linear_ar(d, r)
    if theorem == "linear-br":
        _require(r is not None, "linear-br needs r")
        return vertices_linear_br(d, r)
    if theorem == "local-bilinear-improved":
        return vertices_local_bilinear_improved(d)
    if theorem == "bilinear-endpoint":
        return vertices_bilinear_endpoint(d)
    if theorem == "rotated-single-scale":
        return {f"W{i}": v for i, v in enumerate(ROTATED_HULL_VERTICES)}
    if theorem == "rotated-single-scale-pi":
        return {f"W{i}": v for i, v in enumerate(ROTATED_HULL_VERTICES[:-1])}
    raise ValueError(f"unknown theorem id {theorem!r}")


THEOREMS = (
    "bilinear-endpoint",        # endpoint restricted weak type, d = 1 and 2
    "multilinear-sphere",       # m-linear maximal: strong/weak iff conditions
    "multilinear-segments",     # restricted weak type on the segments L_{k,j}
    "local-bilinear",           # local bilinear maximal, known region
    "local-bilinear-improved",  # enlarged region + open triangle F B' C
    "linear-ar",                # L^r([1,2]) average: strong/RW/RS strata
    "linear-ar-star",           # global r-maximal: L^p for p > rd/(rd-r+1)
    "linear-br",                # delta-window family with delta-rates
    "rotated-single-scale",     # rotated bilinear single scale hull
    "rotated-single-scale-pi",  # same at theta = pi (extra facet, no W6)
    "rotated-maximal",          # rotated bilinear maximal: failure below L^2
    "linearized-rotated",       # |x|-linearized rotated bilinear
    "product-type-necessary",   # product-function necessary condition
    "single-scale-necessary",   # ball/annulus necessary conditions for T
)


def classify(point, theorem):
    """Exact verdict for an exponent point under one theorem's statement."""
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem id {theorem!r}")
    fn = _CLASSIFIERS[theorem]
    return fn(point)


def _cite(theorem, what):
    return f"{theorem}: {what}"


def _classify_bilinear_endpoint(pt):
    _require(pt.arity == 2, "expected (1/p1, 1/p2)")
    x, y = pt.coords
    if pt.d == 1:
        V = vertices_bilinear_endpoint(1)
        hit = (on_segment((x, y), V["U1"], V["U2"])
               or on_segment((x, y), V["U2"], V["U3"]))
        if hit:
            return Verdict("restricted-weak",
                           (_cite("bilinear-endpoint",
                                  "d=1 segments U1U2 and U2U3 (p1 = 2 or "
                                  "p2 = 2, p >= 1)"),),
                           {"target": str(x + y)})
        return Verdict("open", (_cite("bilinear-endpoint",
                                      "outside the d=1 endpoint segments"),))
    if pt.d == 2:
        V = vertices_bilinear_endpoint(2)
        if on_segment((x, y), V["V1"], V["V2"], include_ends=False):
            return Verdict("restricted-weak",
                           (_cite("bilinear-endpoint",
                                  "d=2 open segment V1V2 (1 < p1, p2 < 2) "
                                  "into L^{2/3,infinity}"),),
                           {"target": "3/2"})
        if (x, y) in (V["V1"], V["V2"]):
            return Verdict("open", (_cite("bilinear-endpoint",
                                          "segment endpoints are excluded"),))
        return Verdict("open", (_cite("bilinear-endpoint",
                                      "outside the open segment V1V2"),))
    raise ValueError("bilinear-endpoint covers d in {1, 2}")


def _classify_multilinear(pt):
    m = pt.arity
    _require(m >= 2, "expected an m-tuple of inverse exponents")
    coords = pt.coords
    total = sum(coords)
    cond1 = total < m - 1
    partials = [total - c for c in coords]
    cond2 = all(s < Fr(2 * m - 3, 2) for s in partials)
    boundary2 = any(s == Fr(2 * m - 3, 2) for s in partials)
    corners = set(coords) <= {Fr(0), Fr(1)} and any(c == 1 for c in coords)
    if boundary2:
        return Verdict("false",
                       (_cite("multilinear-sphere",
                              "weak type fails when some sum_{j != i} 1/p_j "
                              "equals m - 3/2"),))
    if cond1 and cond2:
        if corners:
            return Verdict("weak",
                           (_cite("multilinear-sphere",
                                  "weak type at {0,1}^m corners under "
                                  "conditions (1) and (2)"),))
        return Verdict("strong",
                       (_cite("multilinear-sphere",
                              "strong type iff (1), (2), (3)"),))
    return Verdict("false",
                   (_cite("multilinear-sphere",
                          "strong and weak type fail outside (1) and (2)"),))


def _classify_multilinear_segments(pt):
    m = pt.arity
    coords = pt.coords
    for j in range(m):
        for k in range(m):
            if j == k:
                continue
            ok = (coords[j] == Fr(1, 2)
                  and Fr(0) <= coords[k] <= Fr(1, 2)
                  and all(coords[i] == 1 for i in range(m)
                          if i not in (j, k)))
            if ok:
                return Verdict("restricted-weak",
                               (_cite("multilinear-segments",
                                      f"segment L_{{{k},{j}}}"),))
    return Verdict("open", (_cite("multilinear-segments",
                                  "not on any segment L_{k,j}"),))


def _local_bilinear_bounds(pt):
    x, y, z = pt.coords
    d = pt.d
    s = x + y
    nec = (z <= s <= min(Fr(2 * d - 1, d), 1 + d * z))
    suf = (z <= s and s < min(Fr(2 * d - 1, d), 1 + d * z,
                              z + Fr(2 * (d - 1), d)))
    return s, nec, suf


def _classify_local_bilinear(pt):
    _require(pt.arity == 3, "expected (1/p1, 1/p2, 1/p)")
    x, y, z = pt.coords
    d = pt.d
    s, nec, suf = _local_bilinear_bounds(pt)
    if z == 0:
        if s <= 1:
            return Verdict("strong", (_cite("local-bilinear",
                                            "p = infinity iff sum <= 1"),))
        return Verdict("false", (_cite("local-bilinear",
                                       "p = infinity fails for sum > 1"),))
    if not nec:
        return Verdict("false", (_cite("local-bilinear",
                                       "necessary condition violated"),))
    if suf:
        return Verdict("strong", (_cite("local-bilinear",
                                        "sufficient region"),))
    return Verdict("open", (_cite("local-bilinear",
                                  "between sufficient and necessary"),))


def _classify_local_bilinear_improved(pt):
    if pt.arity == 2:
        # diagonal diagram input (1/p1, 1/p): lift to p1 = p2
        pt = ExponentPoint((pt.coords[0], pt.coords[0], pt.coords[1]),
                           d=pt.d)
    x, y, z = pt.coords
    d = pt.d
    s = x + y
    c1 = (z <= s and s < min(Fr(2 * d - 1, d), 1 + d * z,
                             Fr(2 * d - 1, 2 * d + 1) * z
                             + Fr(2 * (2 * d - 1), 2 * d + 1)))
    a = 2 * d * d + d
    c2 = (a + 4) * x + a * y < a * z + 4 * d * d - 2 * d + 2
    c3 = a * x + (a + 4) * y < a * z + 4 * d * d - 2 * d + 2
    if c1 and c2 and c3:
        return Verdict("strong", (_cite("local-bilinear-improved",
                                        "conditions (1)-(3)"),))
    V = vertices_local_bilinear_improved(d)
    if x == y and in_convex_polygon((x, z), [V["F"], V["B'"], V["C"]],
                                    open_region=True):
        return Verdict("open", (_cite("local-bilinear-improved",
                                      "interior of the triangle F B' C is "
                                      "explicitly left open"),))
    base = _classify_local_bilinear(pt)
    if base.verdict == "false":
        return base
    return Verdict("open", (_cite("local-bilinear-improved",
                                  "outside the proved region"),))


def linear_ar_necessary(pt):
    """The three necessary inequalities for the L^r average, exact."""
    x, y = pt.coords
    d, r = pt.d, pt.r
    ir = inv(r)
    bounds = [
        ("1/q <= 1/p", y, x),
        ("1/p <= d/q + 1/r", x, d * y + ir),
        ("1/p <= (d-1)/d + 1/(dr)", x, Fr(d - 1, d) + ir / d),
        ("1/p <= (d-1)/((d+1)q) + 2/((d+1)r) + (d-1)/(d+1)",
         x, Fr(d - 1, d + 1) * y + Fr(2, d + 1) * ir + Fr(d - 1, d + 1)),
    ]
    return [(name, lhs, rhs, lhs <= rhs, lhs == rhs)
            for name, lhs, rhs in bounds]


def _classify_linear_ar(pt):
    _require(pt.arity == 2, "expected (1/p, 1/q)")
    _require(pt.r is not None, "linear-ar needs the exponent r")
    x, y = pt.coords
    if y < 0 or x > 1:
        return Verdict("false", (_cite("linear-ar", "exponents out of range"),))
    checks = linear_ar_necessary(pt)
    if not all(ok for (_, _, _, ok, _) in checks):
        failed = [name for (name, _, _, ok, _) in checks if not ok]
        return Verdict("false",
                       (_cite("linear-ar",
                              "necessary condition violated: "
                              + "; ".join(failed)),))
    V = vertices_linear_ar(pt.d, pt.r)
    # the trivially strong corners win when degenerate parameters collapse
    # P or Q onto them (r = 1 sends both to A)
    if (x, y) in (V["O"], V["A"]):
        return Verdict("strong",
                       (_cite("linear-ar",
                              "L^infinity -> L^infinity and L^r -> "
                              "L^infinity endpoint bounds"),))
    p0_note = _cite(
        "linear-ar",
        "no L^{p,s} -> L^q bound for s > 1 at 1/p = (rd-r+1)/(rd) "
        "(dyadic-sum counterexample)")
    if (x, y) in (V["P"], V["Q"], V["R"]):
        name = next(k for k in ("P", "Q", "R") if V[k] == (x, y))
        cites = [_cite("linear-ar", f"restricted weak type at {name}")]
        if name in ("Q", "R"):
            cites.append(p0_note)
        return Verdict("restricted-weak", tuple(cites), {"vertex": name})
    if on_segment((x, y), V["Q"], V["R"], include_ends=False):
        return Verdict("restricted-strong",
                       (_cite("linear-ar",
                              "restricted strong type on the open segment QR"),
                        p0_note))
    return Verdict("strong", (_cite("linear-ar",
                                    "interior/boundary of the region O A P Q R "
                                    "away from P, Q, R and QR"),))


def _classify_linear_ar_star(pt):
    _require(pt.arity == 2, "expected (1/p, 1/p)")
    _require(pt.r is not None, "linear-ar-star needs r")
    x, y = pt.coords
    _require(x == y, "the global maximal family is diagonal (q = p)")
    d, r = pt.d, pt.r
    X = Fr(d - 1, d) + inv(r) / d
    if x < X:
        return Verdict("strong", (_cite("linear-ar-star",
                                        "L^p bound for p > rd/(rd-r+1)"),))
    if x == X and as_exponent(r) != INF:
        return Verdict("restricted-weak",
                       (_cite("linear-ar-star",
                              "restricted weak type at p = rd/(rd-r+1), "
                              "r < infinity"),))
    return Verdict("open", (_cite("linear-ar-star", "beyond the endpoint"),))


BR_RATES = {
    1: ("1", lambda pt: Fr(0)),
    2: ("delta^(d/q - 1/p)",
        lambda pt: pt.d * pt.coords[1] - pt.coords[0]),
    3: ("delta^((1/2)(d - 1 + (d-1)/q - (d+1)/p))",
        lambda pt: Fr(1, 2) * ((pt.d - 1) + (pt.d - 1) * pt.coords[1]
                               - (pt.d + 1) * pt.coords[0])),
    4: ("delta^(d - 1 - d/p)",
        lambda pt: Fr(pt.d - 1) - pt.d * pt.coords[0]),
}


def _classify_linear_br(pt):
    _require(pt.arity == 2, "expected (1/p, 1/q)")
    _require(pt.r is not None, "linear-br needs r")
    V = vertices_linear_br(pt.d, pt.r)
    u = pt.coords
    matches = []
    if in_convex_polygon(u, [V["O"], V["P'"], V["Q'"], V["R'"]],
                         open_region=True):
        matches.append(1)
    if in_convex_polygon(u, [V["O"], V["A"], V["P"], V["P'"]]) and u != V["P"]:
        matches.append(2)
    if (in_convex_polygon(u, [V["P"], V["Q"], V["Q'"], V["P'"]])
            and u not in (V["P"], V["Q"])):
        matches.append(3)
    if (in_convex_polygon(u, [V["Q"], V["R"], V["R'"], V["Q'"]])
            and not on_segment(u, V["Q"], V["R"])):
        matches.append(4)
    if not matches:
        return Verdict("open", (_cite("linear-br",
                                      "outside the four rate strata"),))
    k = matches[0]
    label, expo = BR_RATES[k]
    return Verdict("bounded-with-rate",
                   tuple(_cite("linear-br", f"stratum ({m}): A_delta = "
                               f"{BR_RATES[m][0]}") for m in matches),
                   {"stratum": k, "rate": label,
                    "rate_exponent": expo(pt),
                    "all_strata": {m: BR_RATES[m][1](pt) for m in matches}})


def _in_rotated_hull(u, theta_pi):
    facets = list(ROTATED_HULL_FACETS)
    if theta_pi:
        facets.append(ROTATED_HULL_FACET_PI)
    return all(sum(Fr(a) * c for a, c in zip(A, u)) <= b for A, b in facets)


def _classify_rotated_single_scale(pt, theta_is_pi=False):
    _require(pt.arity == 3, "expected (1/p1, 1/p2, 1/p)")
    u = pt.coords
    if _in_rotated_hull(u, theta_is_pi):
        return Verdict("strong",
                       (_cite("rotated-single-scale",
                              "closed convex hull of the single-scale "
                              "region"
                              + (" (theta = pi)" if theta_is_pi else "")),))
    if theta_is_pi:
        A, b = ROTATED_HULL_FACET_PI
        if sum(Fr(a) * c for a, c in zip(A, u)) > b:
            return Verdict("false",
                           (_cite("rotated-single-scale",
                                  "necessary: 3/p1 + 3/p2 <= 1 + 3/p at "
                                  "theta = pi"),))
    return Verdict("open", (_cite("rotated-single-scale",
                                  "outside the hull (p < 1 range unknown)"),))


def _classify_rotated_maximal(pt):
    _require(pt.arity == 2, "expected (1/p1, 1/p2)")
    x, y = pt.coords
    if (x >= Fr(1, 2) and x < 1) or (y >= Fr(1, 2) and y < 1):
        return Verdict("false",
                       (_cite("rotated-maximal",
                              "no restricted weak type when p1 <= 2 or "
                              "p2 <= 2 (Kakeya pair)"),))
    if x + y < Fr(1, 2):
        return Verdict("strong",
                       (_cite("rotated-maximal",
                              "bounded for p > 2 by the linear maximal "
                              "bound and interpolation"),))
    return Verdict("open", (_cite("rotated-maximal",
                                  "local L^2 range 1 < p <= 2 is open"),))


def _classify_linearized_rotated(pt):
    _require(pt.arity == 2, "expected (1/p1, 1/p2)")
    x, y = pt.coords
    if x < Fr(1, 2) and y < Fr(1, 2):
        return Verdict("strong",
                       (_cite("linearized-rotated",
                              "strong type for p1, p2 > 2"),))
    if (x == Fr(1, 2) and y <= Fr(1, 2)) or (y == Fr(1, 2) and x <= Fr(1, 2)):
        return Verdict("restricted-weak",
                       (_cite("linearized-rotated",
                              "restricted weak type at p1 = 2 or p2 = 2"),))
    return Verdict("open", (_cite("linearized-rotated",
                                  "beyond the L^2 boundary"),))


_CLASSIFIERS = {
    "bilinear-endpoint": _classify_bilinear_endpoint,
    "multilinear-sphere": _classify_multilinear,
    "multilinear-segments": _classify_multilinear_segments,
    "local-bilinear": _classify_local_bilinear,
    "local-bilinear-improved": _classify_local_bilinear_improved,
    "linear-ar": _classify_linear_ar,
    "linear-ar-star": _classify_linear_ar_star,
    "linear-br": _classify_linear_br,
    "rotated-single-scale": _classify_rotated_single_scale,
    "rotated-single-scale-pi": (
        lambda pt: _classify_rotated_single_scale(pt, theta_is_pi=True)),
    "rotated-maximal": _classify_rotated_maximal,
    "linearized-rotated": _classify_linearized_rotated,
}


def necessary_gap(point, theorem):
    """Exact evaluation of a theorem's necessary inequalities.

    Returns a list of records (name, lhs, rhs, satisfied, boundary).
    """
    pt = point
    if theorem == "linear-ar":
        return linear_ar_necessary(pt)
    if theorem == "local-bilinear":
        x, y, z = pt.coords
        d = pt.d
        s = x + y
        recs = [
            ("1/p <= 1/p1 + 1/p2", z, s),
            ("1/p1 + 1/p2 <= (2d-1)/d", s, Fr(2 * d - 1, d)),
            ("1/p1 + 1/p2 <= 1 + d/p", s, 1 + d * z),
        ]
        return [(n, a, b, a <= b, a == b) for n, a, b in recs]
    if theorem == "product-type-necessary":
        x, y, z = pt.coords
        d = pt.d
        recs = [("(d+1)/p1 + (d+1)/p2 <= d - 1 + (d+1)/p",
                 (d + 1) * (x + y), Fr(d - 1) + (d + 1) * z)]
        return [(n, a, b, a <= b, a == b) for n, a, b in recs]
    if theorem == "single-scale-necessary":
        x, y, z = pt.coords
        d = pt.d
        recs = [
            ("d/p1 + 1/p2 <= 1 + 1/p", d * x + y, 1 + z),
            ("1/p1 + d/p2 <= 1 + 1/p", x + d * y, 1 + z),
            ("1/p <= 1/p1 + 1/p2", z, x + y),
            ("1/p1 + 1/p2 <= d/p", x + y, d * z),
        ]
        return [(n, a, b, a <= b, a == b) for n, a, b in recs]
    raise ValueError(f"no necessary-condition table for {theorem!r}")


def hull_vertices_csv(theorem, d=2, r=None):
    """CSV of named vertices, for external plotting."""
    table = vertex_table(theorem, d=d, r=r)
    lines = ["name,coords"]
    for name, coords in table.items():
        lines.append(name + "," + " ".join(str(c) for c in coords))
    return "\n".join(lines) + "\n"
