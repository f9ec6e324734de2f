# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for binary triplet analysis.

Counting works on bit-packed spike rasters (64 bins per word) using
popcount; the measure kernel evaluates every measure of a batch of 2x2x2
pmfs, one row per triplet, with cells ordered ``4*x1 + 2*x2 + y``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport log2
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef extern from *:
    """
    static inline int mv_popcount(unsigned long long x) { return __builtin_popcountll(x); }
    """
    int mv_popcount(unsigned long long x) nogil

N_MEASURES = 16


def _pack(cnp.ndarray bins):
    """Pack rows of a 0/1 matrix into little-endian uint64 words (zero padded)."""
    cdef Py_ssize_t n_ch = bins.shape[0], n = bins.shape[1]
    cdef Py_ssize_t n_words = (n + 63) // 64
    packed = np.packbits(np.ascontiguousarray(bins, dtype=np.uint8), axis=1, bitorder="little")
    padded = np.zeros((n_ch, n_words * 8), dtype=np.uint8)
    padded[:, : packed.shape[1]] = packed
    return padded.view(np.uint64).reshape(n_ch, n_words)


def triplet_counts(bins):
    """State counts of ``(x1_t, x2_t, y_{t+1})`` for every channel pair and target.

    Parameters
    ----------
    bins : ndarray, shape (n_channels, n_bins)
        Binary raster.

    Returns
    -------
    counts : ndarray of int64, shape (n_pairs, n_channels, 8)
        Pairs in ``itertools.combinations(range(n_channels), 2)`` order.
        Entries where the target coincides with a pair member are filled but
        meaningless.
    """
    bins = np.asarray(bins)
    cdef Py_ssize_t n_ch = bins.shape[0], T = bins.shape[1]
    if T < 2:
        raise ValueError("need at least two bins")
    cdef uint64_t[:, ::1] X = _pack(bins[:, : T - 1])
    cdef uint64_t[:, ::1] Y = _pack(bins[:, 1:])
    cdef Py_ssize_t W = X.shape[1]
    cdef int64_t N = T - 1
    cdef Py_ssize_t n_pairs = n_ch * (n_ch - 1) // 2
    out = np.zeros((n_pairs, n_ch, 8), dtype=np.int64)
    cdef int64_t[:, :, ::1] o = out
    cdef int64_t[::1] nx = np.zeros(n_ch, dtype=np.int64)
    cdef int64_t[::1] ny = np.zeros(n_ch, dtype=np.int64)
    cdef int64_t[:, ::1] xy = np.zeros((n_ch, n_ch), dtype=np.int64)
    cdef uint64_t[::1] tmp = np.zeros(W, dtype=np.uint64)
    cdef Py_ssize_t i, j, c, w, p
    cdef int64_t s, xx, xxy, xiy, xjy
    with nogil:
        for c in range(n_ch):
            s = 0
            for w in range(W):
                s += mv_popcount(X[c, w])
            nx[c] = s
            s = 0
            for w in range(W):
                s += mv_popcount(Y[c, w])
            ny[c] = s
        for i in range(n_ch):
            for c in range(n_ch):
                s = 0
                for w in range(W):
                    s += mv_popcount(X[i, w] & Y[c, w])
                xy[i, c] = s
        p = 0
        for i in range(n_ch):
            for j in range(i + 1, n_ch):
                xx = 0
                for w in range(W):
                    tmp[w] = X[i, w] & X[j, w]
                    xx += mv_popcount(tmp[w])
                for c in range(n_ch):
                    xxy = 0
                    for w in range(W):
                        xxy += mv_popcount(tmp[w] & Y[c, w])
                    xiy = xy[i, c]
                    xjy = xy[j, c]
                    o[p, c, 7] = xxy
                    o[p, c, 6] = xx - xxy
                    o[p, c, 5] = xiy - xxy
                    o[p, c, 3] = xjy - xxy
                    o[p, c, 4] = nx[i] - xx - xiy + xxy
                    o[p, c, 2] = nx[j] - xx - xjy + xxy
                    o[p, c, 1] = ny[c] - xiy - xjy + xxy
                    o[p, c, 0] = N - nx[i] - nx[j] - ny[c] + xx + xiy + xjy - xxy
                p += 1
    return out


cdef inline double _neg_plogp(double p) nogil:
    return -p * log2(p) if p > 0.0 else 0.0


cdef inline double _ent(double* m, int k) nogil:
    # a single occupied cell is a point mass, whatever rounding left in it
    cdef double h = 0.0
    cdef int i, occupied = 0
    for i in range(k):
        if m[i] > 0.0:
            occupied += 1
            h += _neg_plogp(m[i])
    return h if occupied > 1 else 0.0


cdef inline double _spec(double pay0, double pay1, double pa0, double pa1, double py) nogil:
    # sum_a p(a|y) log2[p(a,y) / (p(a) p(y))]
    cdef double s = 0.0
    if pay0 > 0.0:
        s += (pay0 / py) * log2(pay0 / (pa0 * py))
    if pay1 > 0.0:
        s += (pay1 / py) * log2(pay1 / (pa1 * py))
    return s if s > 0.0 else 0.0


def binary_measures(pmf):
    """All triplet measures for a batch of 2x2x2 pmfs.

    Parameters
    ----------
    pmf : ndarray, shape (n, 8)
        Rows are pmfs over ``(x1, x2, y)`` with cell ``4*x1 + 2*x2 + y``.

    Returns
    -------
    ndarray, shape (n, 16)
        Raw (unclamped) values in the column order of ``kernels.COLUMNS``.
    """
    cdef double[:, ::1] P = np.ascontiguousarray(pmf, dtype=np.float64)
    cdef Py_ssize_t n = P.shape[0], r
    if P.shape[1] != 8:
        raise ValueError("pmf rows must have 8 cells")
    out = np.empty((n, N_MEASURES), dtype=np.float64)
    cdef double[:, ::1] O = out
    cdef double p[8]
    cdef double py[2]
    cdef double p1[2]
    cdef double p2[2]
    cdef double p12[4]
    cdef double p1y[4]
    cdef double p2y[4]
    cdef double hy, h1, h2, h12, h1y, h2y, h12y
    cdef double mi1, mi2, mij, ii, dtc, tc, dI, gap, red, s1, s2, num, pind, pc
    cdef double pind_x[4]
    cdef double cond[8]
    cdef int a, b, c, k
    with nogil:
        for r in range(n):
            for k in range(8):
                p[k] = P[r, k]
            for k in range(2):
                py[k] = 0.0
                p1[k] = 0.0
                p2[k] = 0.0
            for k in range(4):
                p12[k] = 0.0
                p1y[k] = 0.0
                p2y[k] = 0.0
            for a in range(2):
                for b in range(2):
                    for c in range(2):
                        pc = p[4 * a + 2 * b + c]
                        py[c] += pc
                        p1[a] += pc
                        p2[b] += pc
                        p12[2 * a + b] += pc
                        p1y[2 * a + c] += pc
                        p2y[2 * b + c] += pc
            hy = _ent(py, 2)
            h1 = _ent(p1, 2)
            h2 = _ent(p2, 2)
            h12 = _ent(p12, 4)
            h1y = _ent(p1y, 4)
            h2y = _ent(p2y, 4)
            h12y = _ent(p, 8)
            mi1 = h1 + hy - h1y
            mi2 = h2 + hy - h2y
            mij = h12 + hy - h12y
            ii = -h1 - h2 - hy + h12 + h1y + h2y - h12y
            tc = h1 + h2 + hy - h12y
            dtc = h12 + h1y + h2y - 2.0 * h12y

            # conditionally independent decoding model
            for a in range(2):
                for b in range(2):
                    pind = 0.0
                    for c in range(2):
                        if py[c] > 0.0:
                            cond[4 * a + 2 * b + c] = (p1y[2 * a + c] / py[c]) * (p2y[2 * b + c] / py[c])
                        else:
                            cond[4 * a + 2 * b + c] = 0.0
                        pind += cond[4 * a + 2 * b + c] * py[c]
                    pind_x[2 * a + b] = pind
            dI = 0.0
            gap = 0.0
            for a in range(2):
                for b in range(2):
                    for c in range(2):
                        pc = p[4 * a + 2 * b + c]
                        if pc > 0.0:
                            num = cond[4 * a + 2 * b + c]
                            dI += pc * log2((pc / p12[2 * a + b]) * pind_x[2 * a + b] / (num * py[c]))
                            gap += pc * log2(num / pind_x[2 * a + b])

            # minimum specific information over the two single sources
            red = 0.0
            for c in range(2):
                if py[c] > 0.0:
                    s1 = _spec(p1y[c], p1y[2 + c], p1[0], p1[1], py[c])
                    s2 = _spec(p2y[c], p2y[2 + c], p2[0], p2[1], py[c])
                    red += py[c] * (s1 if s1 < s2 else s2)

            O[r, 0] = hy
            O[r, 1] = mi1
            O[r, 2] = mi2
            O[r, 3] = mij
            O[r, 4] = ii
            O[r, 5] = -ii
            O[r, 6] = tc
            O[r, 7] = dtc
            O[r, 8] = dI
            O[r, 9] = gap
            O[r, 10] = mij - mi1 - mi2
            O[r, 11] = mij - (mi1 + mi2)
            O[r, 12] = red
            O[r, 13] = mi1 - red
            O[r, 14] = mi2 - red
            O[r, 15] = mij - mi1 - mi2 + red
    return out
