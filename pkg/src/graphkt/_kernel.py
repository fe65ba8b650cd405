"""Compiled int64 Smith kernel.

Mirrors ``intmat._smith_lists`` operation for operation, so both produce the
same transforms.  Every intermediate stays below 2**31 in magnitude (checked),
which keeps each ``q * z`` product inside int64; on a breach the kernel
returns -1 and the caller redoes the work with Python ints.
"""

from itertools import chain

import numba
import numpy as np

BOUND = 1 << 31


@numba.njit(cache=True)
def smith_kernel(buf, m, n):  # pragma: no cover - compiled
    a = buf[: m * n].reshape(m, n)
    u = buf[m * n : m * n + m * m].reshape(m, m)
    vt = buf[m * n + m * m :].reshape(n, n)
    for i in range(m):
        for j in range(n):
            if abs(a[i, j]) >= BOUND:
                return -1
    for i in range(m):
        u[i, i] = 1
    for j in range(n):
        vt[j, j] = 1
    t = 0
    lim = min(m, n)
    while t < lim:
        pi = -1
        pj = -1
        best = 0
        for i in range(t, m):
            for j in range(t, n):
                x = a[i, j]
                if x != 0:
                    ax = abs(x)
                    if best == 0 or ax < best:
                        best = ax
                        pi = i
                        pj = j
                        if ax == 1:
                            break
            if best == 1:
                break
        if best == 0:
            break
        if pi != t:
            for k in range(n):
                tmp = a[t, k]
                a[t, k] = a[pi, k]
                a[pi, k] = tmp
            for k in range(m):
                tmp = u[t, k]
                u[t, k] = u[pi, k]
                u[pi, k] = tmp
        if pj != t:
            for k in range(m):
                tmp = a[k, t]
                a[k, t] = a[k, pj]
                a[k, pj] = tmp
            for k in range(n):
                tmp = vt[t, k]
                vt[t, k] = vt[pj, k]
                vt[pj, k] = tmp
        p = a[t, t]
        clean = True
        for i in range(t + 1, m):
            x = a[i, t]
            if x != 0:
                q = x // p
                for k in range(n):
                    y = a[i, k] - q * a[t, k]
                    if abs(y) >= BOUND:
                        return -1
                    a[i, k] = y
                for k in range(m):
                    y = u[i, k] - q * u[t, k]
                    if abs(y) >= BOUND:
                        return -1
                    u[i, k] = y
                if a[i, t] != 0:
                    clean = False
        for j in range(t + 1, n):
            x = a[t, j]
            if x != 0:
                q = x // p
                for i in range(t, m):
                    y = a[i, j] - q * a[i, t]
                    if abs(y) >= BOUND:
                        return -1
                    a[i, j] = y
                for k in range(n):
                    y = vt[j, k] - q * vt[t, k]
                    if abs(y) >= BOUND:
                        return -1
                    vt[j, k] = y
                if a[t, j] != 0:
                    clean = False
        if not clean:
            continue
        if p != 1 and p != -1:
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i, j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad >= 0:
                for k in range(n):
                    y = a[t, k] + a[bad, k]
                    if abs(y) >= BOUND:
                        return -1
                    a[t, k] = y
                for k in range(m):
                    y = u[t, k] + u[bad, k]
                    if abs(y) >= BOUND:
                        return -1
                    u[t, k] = y
                continue
        if p < 0:
            for k in range(n):
                a[t, k] = -a[t, k]
            for k in range(m):
                u[t, k] = -u[t, k]
        t += 1
    return t


def smith_int64(data, m, n):
    """Run the kernel on nested row tuples.

    Returns flat ``(d, u, vt)`` entry lists plus the rank, or ``None`` if an
    entry is out of the kernel's range.
    """
    mn = m * n
    buf = np.zeros(mn + m * m + n * n, dtype=np.int64)
    try:
        buf[:mn] = np.fromiter(chain.from_iterable(data), dtype=np.int64, count=mn)
    except OverflowError:
        return None
    rank = smith_kernel(buf, m, n)
    if rank < 0:
        return None
    flat = buf.tolist()
    return flat[:mn], flat[mn : mn + m * m], flat[mn + m * m :], rank
