"""Pure NumPy reference implementation of the hot kernels.

Same contracts as the compiled module ``sphavg._kernels``: grid samples live
at cell centers ``lo + (i + 1/2) h``, interpolation is multilinear, and
everything outside the sampled box reads as zero.
"""

import numpy as np


def _gather(values, idx_ok, flat_idx):
    out = np.zeros(flat_idx.shape, dtype=np.float64)
    out[idx_ok] = values.ravel()[flat_idx[idx_ok]]
    return out


def eval_grid_1d(values, lo, h, px):
    s = (np.asarray(px, dtype=np.float64) - lo) / h - 0.5
    i0 = np.floor(s).astype(np.intp)
    f = s - i0
    n = values.shape[0]
    a = np.where((i0 >= 0) & (i0 < n), values[np.clip(i0, 0, n - 1)], 0.0)
    i1 = i0 + 1
    b = np.where((i1 >= 0) & (i1 < n), values[np.clip(i1, 0, n - 1)], 0.0)
    return (1.0 - f) * a + f * b


def eval_grid_2d(values, lo0, lo1, h0, h1, px, py):
    s0 = (np.asarray(px, dtype=np.float64) - lo0) / h0 - 0.5
    s1 = (np.asarray(py, dtype=np.float64) - lo1) / h1 - 0.5
    i0 = np.floor(s0).astype(np.intp)
    j0 = np.floor(s1).astype(np.intp)
    f0 = s0 - i0
    f1 = s1 - j0
    n0, n1 = values.shape
    out = np.zeros(s0.shape, dtype=np.float64)
    for di, w0 in ((0, 1.0 - f0), (1, f0)):
        ii = i0 + di
        iok = (ii >= 0) & (ii < n0)
        for dj, w1 in ((0, 1.0 - f1), (1, f1)):
            jj = j0 + dj
            ok = iok & (jj >= 0) & (jj < n1)
            flat = np.clip(ii, 0, n0 - 1) * n1 + np.clip(jj, 0, n1 - 1)
            out += w0 * w1 * _gather(values, ok, flat)
    return out


def eval_grid_3d(values, lo0, lo1, lo2, h0, h1, h2, px, py, pz):
    s0 = (np.asarray(px, dtype=np.float64) - lo0) / h0 - 0.5
    s1 = (np.asarray(py, dtype=np.float64) - lo1) / h1 - 0.5
    s2 = (np.asarray(pz, dtype=np.float64) - lo2) / h2 - 0.5
    i0 = np.floor(s0).astype(np.intp)
    j0 = np.floor(s1).astype(np.intp)
    k0 = np.floor(s2).astype(np.intp)
    f0, f1, f2 = s0 - i0, s1 - j0, s2 - k0
    n0, n1, n2 = values.shape
    out = np.zeros(s0.shape, dtype=np.float64)
    for di, w0 in ((0, 1.0 - f0), (1, f0)):
        ii = i0 + di
        iok = (ii >= 0) & (ii < n0)
        ic = np.clip(ii, 0, n0 - 1)
        for dj, w1 in ((0, 1.0 - f1), (1, f1)):
            jj = j0 + dj
            jok = iok & (jj >= 0) & (jj < n1)
            jc = np.clip(jj, 0, n1 - 1)
            for dk, w2 in ((0, 1.0 - f2), (1, f2)):
                kk = k0 + dk
                ok = jok & (kk >= 0) & (kk < n2)
                flat = (ic * n1 + jc) * n2 + np.clip(kk, 0, n2 - 1)
                out += w0 * w1 * w2 * _gather(values, ok, flat)
    return out


def rect_union_contains(cx, cy, ux, uy, hl, hw, px, py):
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    inside = np.zeros(px.shape, dtype=bool)
    # Loop over rectangles (few hundred) rather than points (many).
    for r in range(cx.shape[0]):
        rest = ~inside
        if not rest.any():
            break
        dx = px[rest] - cx[r]
        dy = py[rest] - cy[r]
        a = dx * ux[r] + dy * uy[r]
        b = -dx * uy[r] + dy * ux[r]
        hit = (np.abs(a) <= hl[r]) & (np.abs(b) <= hw[r])
        idx = np.flatnonzero(rest)
        inside[idx[hit]] = True
    return inside.astype(np.float64)
