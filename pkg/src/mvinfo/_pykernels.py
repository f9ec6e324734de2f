"""Pure numpy versions of the compiled triplet kernels (same signatures, same output)."""
from __future__ import annotations

import numpy as np

N_MEASURES = 16

# rows of the float product matrix processed at once
_PAIR_CHUNK = 64


def triplet_counts(bins):
    """State counts of ``(x1_t, x2_t, y_{t+1})`` for every channel pair and target.

    Co-occurrence counts come from float matrix products (exact below 2**53)
    and the eight cells follow by inclusion-exclusion.
    """
    bins = np.asarray(bins)
    n_ch, T = bins.shape
    if T < 2:
        raise ValueError("need at least two bins")
    X = bins[:, : T - 1].astype(np.float64)
    Y = bins[:, 1:].astype(np.float64)
    N = T - 1
    nx = X.sum(axis=1).astype(np.int64)
    ny = Y.sum(axis=1).astype(np.int64)
    xy = np.rint(X @ Y.T).astype(np.int64)
    xx_all = np.rint(X @ X.T).astype(np.int64)

    ii, jj = np.triu_indices(n_ch, k=1)
    n_pairs = ii.size
    xxy = np.empty((n_pairs, n_ch), dtype=np.int64)
    for start in range(0, n_pairs, _PAIR_CHUNK):
        sl = slice(start, start + _PAIR_CHUNK)
        both = X[ii[sl]] * X[jj[sl]]
        xxy[sl] = np.rint(both @ Y.T).astype(np.int64)

    xx = xx_all[ii, jj][:, None]
    xiy = xy[ii]
    xjy = xy[jj]
    nxi = nx[ii][:, None]
    nxj = nx[jj][:, None]
    out = np.empty((n_pairs, n_ch, 8), dtype=np.int64)
    out[:, :, 7] = xxy
    out[:, :, 6] = xx - xxy
    out[:, :, 5] = xiy - xxy
    out[:, :, 3] = xjy - xxy
    out[:, :, 4] = nxi - xx - xiy + xxy
    out[:, :, 2] = nxj - xx - xjy + xxy
    out[:, :, 1] = ny[None, :] - xiy - xjy + xxy
    out[:, :, 0] = N - nxi - nxj - ny[None, :] + xx + xiy + xjy - xxy
    return out


def _neg_plogp(p):
    safe = np.where(p > 0, p, 1.0)
    return -np.where(p > 0, p * np.log2(safe), 0.0)


def _h(p, axes):
    """Entropy of the marginal kept on ``axes`` of a batch of (n, 2, 2, 2) pmfs."""
    drop = tuple(ax for ax in (1, 2, 3) if ax not in axes)
    m = (p.sum(axis=drop) if drop else p).reshape(p.shape[0], -1)
    h = _neg_plogp(m).sum(axis=1)
    # a single occupied cell is a point mass, whatever rounding left in it
    h[(m > 0).sum(axis=1) <= 1] = 0.0
    return h


def _spec(pay, pa, py):
    # pay: (n, 2 [a], 2 [y]); pa: (n, 2); py: (n, 2) -> (n, 2) specific info per y
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = pay / (pa[:, :, None] * py[:, None, :])
        w = pay / py[:, None, :]
        terms = np.where(pay > 0, w * np.log2(np.where(pay > 0, ratio, 1.0)), 0.0)
    return np.maximum(terms.sum(axis=1), 0.0)


def binary_measures(pmf):
    """All triplet measures for a batch of 2x2x2 pmfs; see the compiled version."""
    P = np.ascontiguousarray(pmf, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] != 8:
        raise ValueError("pmf rows must have 8 cells")
    n = P.shape[0]
    p = P.reshape(n, 2, 2, 2)  # axes: x1, x2, y

    hy = _h(p, (3,))
    h1 = _h(p, (1,))
    h2 = _h(p, (2,))
    h12 = _h(p, (1, 2))
    h1y = _h(p, (1, 3))
    h2y = _h(p, (2, 3))
    h12y = _h(p, (1, 2, 3))
    mi1 = h1 + hy - h1y
    mi2 = h2 + hy - h2y
    mij = h12 + hy - h12y
    ii = -h1 - h2 - hy + h12 + h1y + h2y - h12y
    tc = h1 + h2 + hy - h12y
    dtc = h12 + h1y + h2y - 2.0 * h12y

    py = p.sum(axis=(1, 2))
    p1y = p.sum(axis=2)
    p2y = p.sum(axis=1)
    p12 = p.sum(axis=3)
    with np.errstate(divide="ignore", invalid="ignore"):
        safe_py = np.where(py > 0, py, 1.0)
        c1 = np.where(py[:, None, :] > 0, p1y / safe_py[:, None, :], 0.0)
        c2 = np.where(py[:, None, :] > 0, p2y / safe_py[:, None, :], 0.0)
        cond = c1[:, :, None, :] * c2[:, None, :, :]  # (n, a, b, y)
        pind_x = (cond * py[:, None, None, :]).sum(axis=3)
        pos = p > 0
        p_y_given_x = p / p12[..., None]
        p_ind_y_given_x = cond * py[:, None, None, :] / pind_x[..., None]
        d_terms = np.where(pos, p * np.log2(np.where(pos, p_y_given_x / p_ind_y_given_x, 1.0)), 0.0)
        g_terms = np.where(pos, p * np.log2(np.where(pos, cond / pind_x[..., None], 1.0)), 0.0)
    dI = d_terms.reshape(n, -1).sum(axis=1)
    gap = g_terms.reshape(n, -1).sum(axis=1)

    p1 = p1y.sum(axis=2)
    p2 = p2y.sum(axis=2)
    s1 = _spec(p1y, p1, safe_py)
    s2 = _spec(p2y, p2, safe_py)
    red = np.where(py > 0, py * np.minimum(s1, s2), 0.0).sum(axis=1)

    out = np.empty((n, N_MEASURES))
    out[:, 0] = hy
    out[:, 1] = mi1
    out[:, 2] = mi2
    out[:, 3] = mij
    out[:, 4] = ii
    out[:, 5] = -ii
    out[:, 6] = tc
    out[:, 7] = dtc
    out[:, 8] = dI
    out[:, 9] = gap
    out[:, 10] = mij - mi1 - mi2
    out[:, 11] = mij - (mi1 + mi2)
    out[:, 12] = red
    out[:, 13] = mi1 - red
    out[:, 14] = mi2 - red
    out[:, 15] = mij - mi1 - mi2 + red
    return out
