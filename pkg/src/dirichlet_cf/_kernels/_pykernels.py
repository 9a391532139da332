"""Pure-Python kernels.  Same algorithms and argument conventions as ``_ckernels``."""
from __future__ import annotations

import numpy as np


def cycle_index_values(p, nmax):
    """Z_0..Z_nmax at power sums ``p`` (``p[j-1]`` is p_j) by the recurrence
    Z_n = (1/n) sum_j p_j Z_{n-j}."""
    p = [complex(x) for x in p]
    if len(p) < nmax:
        raise ValueError("need at least nmax power sums")
    z = [0j] * (nmax + 1)
    z[0] = 1.0 + 0j
    for n in range(1, nmax + 1):
        acc = 0j
        for j in range(1, n + 1):
            acc += p[j - 1] * z[n - j]
        z[n] = acc / n
    return np.array(z, dtype=complex)


def degree_sums(alpha, s, nmax, rho=1.0):
    """T_n = rho^-n * sum_{|m|=n} prod_i (alpha_i)_{m_i} s_i^{m_i} / m_i!  for n <= nmax."""
    alpha = [complex(a) for a in alpha]
    s = [complex(x) for x in s]
    k = len(alpha)
    # w[i][j] = (alpha_i)_j (s_i/rho)^j / j!, built incrementally
    w = []
    for i in range(k):
        row = [1.0 + 0j]
        for j in range(1, nmax + 1):
            row.append(row[-1] * (alpha[i] + j - 1) * s[i] / (rho * j))
        w.append(row)
    out = np.zeros(nmax + 1, dtype=complex)
    if k == 0:
        out[0] = 1.0
        return out
    for n in range(nmax + 1):
        m = [0] * k
        m[-1] = n
        acc = 0j
        while True:
            term = 1.0 + 0j
            for i in range(k):
                term *= w[i][m[i]]
            acc += term
            j = k - 1
            while j > 0 and m[j] == 0:
                j -= 1
            if j == 0:
                break
            rest = m[j] - 1
            m[j] = 0
            m[j - 1] += 1
            m[-1] = rest
        out[n] = acc
    return out


def stick_breaking_cells(beta, eps, cdf, u, out, first_w, n_atoms, start):
    """Fill rows ``start..`` of ``out`` with cell masses of truncated stick-breaking draws.

    Each atom consumes two uniforms from ``u``: one for the stick fraction
    v = 1 - u^(1/beta) and one for the cell via inverse CDF.  Sampling stops
    once the residual mass drops below ``eps``; the residual goes to the last
    atom.  Returns ``(next_row, consumed)``; a draw that would run past the
    end of ``u`` is not started, so the caller can refill and resume.
    """
    nrows, m = out.shape
    inv_beta = 1.0 / beta
    pos = 0
    nu = len(u)
    row = start
    cells = [0.0] * m
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
            new_rem = rem * u[p] ** inv_beta
            w = rem - new_rem
            x = u[p + 1]
            p += 2
            c = 0
            while c < m - 1 and x >= cdf[c + 1]:
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


def orbit_representatives(perms, r, n):
    """Lexicographically least colorings of each orbit of ``[r]^[n]``.

    ``perms`` is a (|G|, n) array of 0-based images.  Colorings are encoded
    base r with position 0 most significant; the image of ``c`` under ``g``
    is ``c o g``.  Returns (representative codes, orbit sizes).
    """
    perms = np.asarray(perms, dtype=np.int64)
    total = r**n
    seen = np.zeros(total, dtype=bool)
    weights = [r ** (n - 1 - i) for i in range(n)]
    reps = []
    sizes = []
    digits = [0] * n
    for code in range(total):
        if seen[code]:
            continue
        x = code
        for i in range(n - 1, -1, -1):
            digits[i] = x % r
            x //= r
        size = 0
        for g in perms:
            img = 0
            for i in range(n):
                img += digits[g[i]] * weights[i]
            if not seen[img]:
                seen[img] = True
                size += 1
        reps.append(code)
        sizes.append(size)
    return np.array(reps, dtype=np.int64), np.array(sizes, dtype=np.int64)
