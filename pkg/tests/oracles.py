"""Independent reference implementations on dense numpy arrays.

Each function transcribes the defining summation directly (KL forms,
explicit conditional slices, explicit candidate lists) and shares no code
with the package under test. Arrays are indexed ``p[x1, x2, ..., y]``.
"""
import itertools

import numpy as np


def _log2(a):
    return np.log2(a)


def marginal(p, keep):
    drop = tuple(ax for ax in range(p.ndim) if ax not in keep)
    return p.sum(axis=drop, keepdims=True)


def H(p, axes=None):
    axes = tuple(range(p.ndim)) if axes is None else tuple(axes)
    m = marginal(p, axes).ravel()
    m = m[m > 0]
    return float(-(m * _log2(m)).sum())


def mi_kl(p, a, b):
    """sum p(a,b) log p(a,b) / (p(a) p(b))."""
    pab = marginal(p, tuple(a) + tuple(b))
    pa = marginal(p, a)
    pb = marginal(p, b)
    mask = pab > 0
    ratio = np.where(mask, pab / np.where(mask, pa * pb, 1.0), 1.0)
    return float((np.where(mask, pab * _log2(ratio), 0.0)).sum())


def cmi_kl(p, a, b, c):
    """sum p(a,b,c) log p(c) p(a,b,c) / (p(a,c) p(b,c))."""
    if not c:
        return mi_kl(p, a, b)
    pabc = marginal(p, tuple(a) + tuple(b) + tuple(c))
    pc = marginal(p, c)
    pac = marginal(p, tuple(a) + tuple(c))
    pbc = marginal(p, tuple(b) + tuple(c))
    mask = pabc > 0
    safe = lambda x: np.where(mask, x, 1.0)  # noqa: E731
    return float(np.where(mask, pabc * _log2(safe(pc * pabc) / safe(pac * pbc)), 0.0).sum())


def conditional_entropy_slices(p, of, given):
    """sum_z p(z) H(of | z), building each conditional slice p(of | z)."""
    pz = marginal(p, given)
    joint = marginal(p, tuple(of) + tuple(given))
    total = 0.0
    for zi in np.ndindex(pz.shape):
        if pz[zi] <= 0:
            continue
        sl = tuple(slice(None) if ax in of else zi[ax] for ax in range(p.ndim))
        cond = joint[sl].ravel() / pz[zi]
        cond = cond[cond > 0]
        total += pz[zi] * float(-(cond * np.log2(cond)).sum())
    return float(total)


def ii_conditional(p, x, y, z):
    return cmi_kl(p, (x,), (y,), (z,)) - mi_kl(p, (x,), (y,))


def ii_expansion(p, axes=None):
    axes = tuple(range(p.ndim)) if axes is None else tuple(axes)
    n = len(axes)
    total = 0.0
    for k in range(1, n + 1):
        for t in itertools.combinations(axes, k):
            total += (-1) ** (n - k) * H(p, t)
    return -total


def tc_kl(p):
    """sum p(x) log p(x) / prod p(x_i)."""
    prod = np.ones_like(p)
    for ax in range(p.ndim):
        prod = prod * marginal(p, (ax,))
    mask = p > 0
    return float(np.where(mask, p * _log2(np.where(mask, p / np.where(mask, prod, 1.0), 1.0)), 0.0).sum())


def dtc_conditional(p):
    n = p.ndim
    total = H(p)
    for i in range(n):
        rest = tuple(j for j in range(n) if j != i)
        total -= conditional_entropy_slices(p, (i,), rest)
    return total


def delta_i(p):
    """Delta I with sources = all axes but the last, via explicit p_ind arrays."""
    n = p.ndim - 1
    py = p.sum(axis=tuple(range(n)))
    px = p.sum(axis=-1)
    total = 0.0
    for xs in np.ndindex(px.shape):
        if px[xs] <= 0:
            continue
        pind_given = np.zeros(py.shape)
        for y in range(py.size):
            if py[y] <= 0:
                continue
            prod = 1.0
            for i in range(n):
                keep = (i, n)
                pxy = marginal(p, keep).squeeze()
                prod *= pxy[xs[i], y] / py[y]
            pind_given[y] = prod
        pind_x = float((pind_given * py).sum())
        for y in range(py.size):
            pj = p[xs + (y,)]
            if pj <= 0:
                continue
            p_y_x = pj / px[xs]
            pind_y_x = pind_given[y] * py[y] / pind_x
            total += px[xs] * p_y_x * np.log2(p_y_x / pind_y_x)
    return float(total)


def gap_direct(p):
    n = p.ndim - 1
    py = p.sum(axis=tuple(range(n)))
    total = 0.0
    for idx in np.ndindex(p.shape):
        if p[idx] <= 0:
            continue
        xs, y = idx[:-1], idx[-1]
        def pind(yy):
            prod = 1.0
            for i in range(n):
                pxy = marginal(p, (i, n)).squeeze()
                prod *= pxy[xs[i], yy] / py[yy]
            return prod
        pind_x = sum(pind(yy) * py[yy] for yy in range(py.size) if py[yy] > 0)
        total += p[idx] * np.log2(pind(y) / pind_x)
    return float(total)


def rsi(p):
    n = p.ndim - 1
    return mi_kl(p, tuple(range(n)), (n,)) - sum(mi_kl(p, (i,), (n,)) for i in range(n))


def vs(p):
    n = p.ndim - 1
    y = (n,)
    full = mi_kl(p, tuple(range(n)), y)
    if n == 2:
        cands = [mi_kl(p, (0,), y) + mi_kl(p, (1,), y)]
    elif n == 3:
        single = [mi_kl(p, (i,), y) for i in range(3)]
        cands = [
            single[0] + mi_kl(p, (1, 2), y),
            single[1] + mi_kl(p, (0, 2), y),
            single[2] + mi_kl(p, (0, 1), y),
            sum(single),
        ]
    else:
        raise NotImplementedError
    return full - max(cands)


def specific_info(p, sub, y):
    """sum_a p(a|y) [log 1/p(y) - log 1/p(y|a)]."""
    n = p.ndim - 1
    pay = marginal(p, tuple(sub) + (n,))
    pa = marginal(p, tuple(sub))
    py = marginal(p, (n,)).ravel()
    total = 0.0
    for idx in np.ndindex(pay.shape):
        if idx[n] != y or pay[idx] <= 0:
            continue
        a_idx = tuple(0 if ax == n else idx[ax] for ax in range(p.ndim))
        p_a_given_y = pay[idx] / py[y]
        p_y_given_a = pay[idx] / pa[a_idx]
        total += p_a_given_y * (np.log2(1 / py[y]) - np.log2(1 / p_y_given_a))
    return float(total)


def pid2(p):
    """Two-source PID from I_min and the three mutual-information sums."""
    py = marginal(p, (2,)).ravel()
    red = sum(py[y] * min(specific_info(p, (0,), y), specific_info(p, (1,), y)) for y in range(py.size) if py[y] > 0)
    i1 = mi_kl(p, (0,), (2,))
    i2 = mi_kl(p, (1,), (2,))
    i12 = mi_kl(p, (0, 1), (2,))
    u1, u2 = i1 - red, i2 - red
    return {"{1}{2}": red, "{1}": u1, "{2}": u2, "{12}": i12 - u1 - u2 - red}


def all_antichains(n):
    """Every non-empty antichain of non-empty subsets of range(n), by brute force."""
    subsets = [frozenset(c) for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]
    out = []
    for k in range(1, len(subsets) + 1):
        for combo in itertools.combinations(subsets, k):
            if all(not (a <= b or b <= a) for a, b in itertools.combinations(combo, 2)):
                out.append(frozenset(combo))
    return out
