# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Mirrors ``_pykernels`` function by function."""
import numpy as np
cimport numpy as cnp
from libc.math cimport pow

cnp.import_array()


def cycle_index_values(p, Py_ssize_t nmax):
    cdef double complex[:] pv = np.ascontiguousarray(p, dtype=complex)
    if pv.shape[0] < nmax:
        raise ValueError("need at least nmax power sums")
    z_arr = np.zeros(nmax + 1, dtype=complex)
    cdef double complex[:] z = z_arr
    cdef Py_ssize_t n, j
    cdef double complex acc
    z[0] = 1.0
    with nogil:
        for n in range(1, nmax + 1):
            acc = 0
            for j in range(1, n + 1):
                acc = acc + pv[j - 1] * z[n - j]
            z[n] = acc / n
    return z_arr


def degree_sums(alpha, s, Py_ssize_t nmax, double rho=1.0):
    cdef double complex[:] a = np.ascontiguousarray(alpha, dtype=complex)
    cdef double complex[:] sv = np.ascontiguousarray(s, dtype=complex)
    cdef Py_ssize_t k = a.shape[0]
    out_arr = np.zeros(nmax + 1, dtype=complex)
    cdef double complex[:] out = out_arr
    if k == 0:
        out[0] = 1.0
        return out_arr
    w_arr = np.empty((k, nmax + 1), dtype=complex)
    cdef double complex[:, :] w = w_arr
    m_arr = np.zeros(k, dtype=np.intp)
    cdef Py_ssize_t[:] m = m_arr
    cdef Py_ssize_t i, j, n, rest
    cdef double complex term, acc
    for i in range(k):
        w[i, 0] = 1.0
        for j in range(1, nmax + 1):
            w[i, j] = w[i, j - 1] * (a[i] + (j - 1)) * sv[i] / (rho * j)
    with nogil:
        for n in range(nmax + 1):
            for i in range(k):
                m[i] = 0
            m[k - 1] = n
            acc = 0
            while True:
                term = 1.0
                for i in range(k):
                    term = term * w[i, m[i]]
                acc = acc + term
                j = k - 1
                while j > 0 and m[j] == 0:
                    j -= 1
                if j == 0:
                    break
                rest = m[j] - 1
                m[j] = 0
                m[j - 1] += 1
                m[k - 1] = rest
            out[n] = acc
    return out_arr


def stick_breaking_cells(double beta, double eps, cdf, u, double[:, :] out,
                         double[:] first_w, cnp.int64_t[:] n_atoms, Py_ssize_t start):
    cdef double[:] cv = np.ascontiguousarray(cdf, dtype=np.float64)
    cdef double[:] uv = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t nrows = out.shape[0], m = out.shape[1]
    cdef Py_ssize_t nu = uv.shape[0]
    cdef Py_ssize_t pos = 0, p, row = start, c, count
    cdef double inv_beta = 1.0 / beta
    cdef double rem, new_rem, w, x, w1
    cdef bint ok
    cells_arr = np.zeros(m, dtype=np.float64)
    cdef double[:] cells = cells_arr
    with nogil:
        while row < nrows:
            for c in range(m):
                cells[c] = 0.0
            rem = 1.0
            p = pos
            count = 0
            w1 = 0.0
            ok = True
            while True:
                if p + 2 > nu:
                    ok = False
                    break
                new_rem = rem * pow(uv[p], inv_beta)
                w = rem - new_rem
                x = uv[p + 1]
                p += 2
                c = 0
                while c < m - 1 and x >= cv[c + 1]:
                    c += 1
                count += 1
                if count == 1:
                    w1 = w
                rem = new_rem
                if rem < eps:
                    cells[c] += w + rem
                    if count == 1:
                        w1 = w + rem
                    break
                cells[c] += w
            if not ok:
                break
            for c in range(m):
                out[row, c] = cells[c]
            first_w[row] = w1
            n_atoms[row] = count
            pos = p
            row += 1
    return row, pos


def orbit_representatives(perms, long r, Py_ssize_t n):
    cdef cnp.int64_t[:, :] g = np.ascontiguousarray(perms, dtype=np.int64)
    cdef Py_ssize_t ng = g.shape[0]
    cdef cnp.int64_t total = 1
    cdef Py_ssize_t i, t
    for i in range(n):
        total *= r
    seen_arr = np.zeros(total, dtype=np.uint8)
    cdef cnp.uint8_t[:] seen = seen_arr
    weights_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[:] weights = weights_arr
    cdef cnp.int64_t wgt = 1
    for i in range(n - 1, -1, -1):
        weights[i] = wgt
        wgt *= r
    digits_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[:] digits = digits_arr
    reps = []
    sizes = []
    cdef cnp.int64_t code, x, img, size
    for code in range(total):
        if seen[code]:
            continue
        x = code
        for i in range(n - 1, -1, -1):
            digits[i] = x % r
            x = x // r
        size = 0
        for t in range(ng):
            img = 0
            for i in range(n):
                img += digits[g[t, i]] * weights[i]
            if not seen[img]:
                seen[img] = 1
                size += 1
        reps.append(code)
        sizes.append(size)
    return np.array(reps, dtype=np.int64), np.array(sizes, dtype=np.int64)
