"""Quadrature on unit spheres S^{d-1}, plane rotations, and the slicing
weight s^(d-1) (1-s^2)^((d-2)/2) that factors an S^(2d-1) integral into a
product of two S^(d-1) integrals.

Rules come in two measure modes: ``raw`` (weights sum to the surface area
|S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)) and ``normalized`` (weights sum to 1).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, roots_jacobi, roots_legendre

MODES = ("raw", "normalized")


def sphere_area(d):
    """Surface area of S^{d-1} in R^d (d=1 gives the two-point measure 2)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return 2.0 * math.pi ** (d / 2.0) / gamma(d / 2.0)


@dataclass(frozen=True)
class SphereRule:
    """Quadrature nodes/weights on S^{d-1} subset of R^d."""

    d: int
    nodes: np.ndarray  # (n, d), unit vectors
    weights: np.ndarray  # (n,), positive
    mode: str
    exactness: int

    def integrate(self, f):
        """Integrate a vectorized function of the node array."""
        return float(np.dot(self.weights, f(self.nodes)))


@dataclass(frozen=True)
class RotationAngle:
    theta: float

    def matrix(self):
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, -s], [s, c]])


def rotate(x, angle):
    """Counter-clockwise rotation of a point (or point array) in R^2."""
    theta = angle.theta if isinstance(angle, RotationAngle) else float(angle)
    c, s = math.cos(theta), math.sin(theta)
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    out[..., 0] = c * x[..., 0] - s * x[..., 1]
    out[..., 1] = s * x[..., 0] + c * x[..., 1]
    return out


def _normalize(weights, d, mode):
    weights = np.asarray(weights, dtype=np.float64)
    total = sphere_area(d)
    if mode == "normalized":
        return weights * (1.0 / np.sum(weights))
    # Raw weights are rescaled so the mass identity holds exactly.
    return weights * (total / np.sum(weights))


def sphere_rule(d, n, mode="raw"):
    """Quadrature rule on S^{d-1}.

    d=1: the two-point set {+1, -1}.
    d=2: equispaced angles (trapezoid rule, spectrally accurate).
    d>=3: product of Gauss(-Jacobi) polar nodes and equispaced periodic angle.

    Parameters
    ----------
    d : int in {1, 2, 3, 4}
    n : resolution parameter, n >= 4; node count grows like n^(d-1).
    mode : 'raw' or 'normalized'
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if d not in (1, 2, 3, 4):
        raise ValueError("only S^0..S^3 (d in 1..4) are supported")
    if d > 1 and n < 4:
        raise ValueError("resolution n must be >= 4")

    if d == 1:
        nodes = np.array([[1.0], [-1.0]])
        weights = np.array([1.0, 1.0])
        exact = 10**9  # two-point sums are exact for every integrand
    elif d == 2:
        ang = 2.0 * math.pi * np.arange(n) / n
        nodes = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        weights = np.full(n, 2.0 * math.pi / n)
        exact = n - 1
    elif d == 3:
        # z = cos(polar) Gauss-Legendre x equispaced azimuth
        z, wz = roots_legendre(n)
        ang = 2.0 * math.pi * np.arange(2 * n) / (2 * n)
        rho = np.sqrt(1.0 - z**2)
        nodes = np.stack(
            [
                np.outer(rho, np.cos(ang)).ravel(),
                np.outer(rho, np.sin(ang)).ravel(),
                np.outer(z, np.ones(2 * n)).ravel(),
            ],
            axis=1,
        )
        weights = np.outer(wz, np.full(2 * n, math.pi / n)).ravel()
        exact = min(2 * n - 1, 2 * n - 1)
    else:
        # S^3: x = (cos(chi), sin(chi) * omega) with omega in S^2 and
        # d(sigma) = sin^2(chi) dchi dsigma_{S^2}; Gauss-Jacobi absorbs
        # the sin^2 factor through (1-t^2)^{1/2} with t = cos(chi).
        t, wt = roots_jacobi(n, 0.5, 0.5)
        inner = sphere_rule(3, n, mode="raw")
        sin_chi = np.sqrt(1.0 - t**2)
        nodes = np.concatenate(
            [
                np.repeat(t, inner.nodes.shape[0])[:, None],
                (sin_chi[:, None, None] * inner.nodes[None, :, :]).reshape(-1, 3),
            ],
            axis=1,
        )
        weights = np.outer(wt, inner.weights).ravel()
        exact = min(2 * n - 1, inner.exactness)

    norms = np.linalg.norm(nodes, axis=1)
    nodes = nodes / norms[:, None]
    return SphereRule(d=d, nodes=nodes, weights=_normalize(weights, d, mode),
                      mode=mode, exactness=exact)


def slicing_weight(s, d):
    """Weight s^(d-1) (1-s^2)^((d-2)/2) of the sphere-slicing identity."""
    s = np.asarray(s, dtype=np.float64)
    if d < 2:
        raise ValueError("slicing weight requires d >= 2")
    if np.any((s <= 0.0) | (s >= 1.0)):
        raise ValueError("s must lie in (0, 1)")
    return s ** (d - 1) * (1.0 - s**2) ** ((d - 2) / 2.0)


def slicing_nodes(d, n):
    """Quadrature for integrals int_0^1 F(s, sqrt(1-s^2)) w_d(s) ds.

    Substitutes s = sin(phi) so the integrand is smooth up to both
    endpoints; returns (s, c, w) with c = sqrt(1-s^2) = cos(phi) and weights
    w that already include the slicing weight and the Jacobian.
    """
    phi, wphi = roots_legendre(n)
    phi = 0.25 * math.pi * (phi + 1.0)
    wphi = wphi * (0.25 * math.pi)
    s = np.sin(phi)
    c = np.cos(phi)
    w = wphi * s ** (d - 1) * c ** (d - 1)
    return s, c, w


def slicing_mass(d, n=64):
    """Quadrature value of |S^{d-1}|^2 * int_0^1 w_d(s) ds (equals |S^{2d-1}|)."""
    _, _, w = slicing_nodes(d, n)
    return sphere_area(d) ** 2 * float(np.sum(w))


def double_sphere_rule(d, n, mode="raw"):
    """Rule on S^{2d-1} in R^{2d} for the direct bilinear average.

    Built from nested polar coordinates (via sphere_rule), NOT from the
    slicing parametrization, so that direct-vs-sliced comparisons exercise
    two genuinely different decompositions.
    """
    if d == 1:
        return sphere_rule(2, 8 * n, mode=mode)
    if d == 2:
        return sphere_rule(4, n, mode=mode)
    if d == 3:
        # S^5: chi_1 (weight sin^4), chi_2 (weight sin^3) peeled off an S^3
        # rule; Gauss-Jacobi nodes in t = cos(chi).
        t1, w1 = roots_jacobi(n, 1.5, 1.5)
        t2, w2 = roots_jacobi(n, 1.0, 1.0)
        inner = sphere_rule(4, n, mode="raw")
        s1 = np.sqrt(1.0 - t1**2)
        s2 = np.sqrt(1.0 - t2**2)
        # x = (cos chi1, sin chi1 cos chi2, sin chi1 sin chi2 * omega)
        parts = []
        weights = []
        for i in range(t1.shape[0]):
            for j in range(t2.shape[0]):
                block = np.empty((inner.nodes.shape[0], 6))
                block[:, 0] = t1[i]
                block[:, 1] = s1[i] * t2[j]
                block[:, 2:] = s1[i] * s2[j] * inner.nodes
                parts.append(block)
                weights.append(w1[i] * w2[j] * inner.weights)
        nodes = np.concatenate(parts, axis=0)
        weights = np.concatenate(weights)
        nodes = nodes / np.linalg.norm(nodes, axis=1)[:, None]
        return SphereRule(d=6, nodes=nodes, weights=_normalize(weights, 6, mode),
                          mode=mode, exactness=2 * n - 1)
    raise ValueError("double sphere rule supports d in {1, 2, 3}")
