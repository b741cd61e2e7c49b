"""Row reduction kernels over GF(p).

Every exact linear-algebra question in this package (ranks, kernels,
Macaulay slices, syzygy extraction) bottoms out in the reduced row echelon
form computed here.  Reduction is blocked: a narrow panel of columns is
eliminated by the hot kernel (compiled with numba when available), then the
accumulated row operations hit the trailing columns in one exact matrix
product.  Set SCROLLRES_BACKEND=numpy to force the pure-numpy panel kernel
(used by the benchmark in bench/ and as a fallback without numba).
"""

from __future__ import annotations

import os

import numpy as np

_BACKEND = os.environ.get("SCROLLRES_BACKEND", "auto").lower()
PANEL = 64

try:
    from numba import njit

    _HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via SCROLLRES_BACKEND instead
    _HAS_NUMBA = False


def _panel_numpy(a, z, c0, c1, r, p):
    """Full-height elimination restricted to columns [c0, c1).

    Row swaps are applied to the whole matrix; scaling and elimination only
    touch the panel and the operation log z (z starts as zeros and records
    the composite row operations in the columns of the new pivot rows).
    Pivot t of the returned list ends up in row r + t.
    """
    piv = []
    cols = np.arange(c0, c1)
    for c in range(c0, c1):
        # entries are kept unreduced between pivots; reduce before testing
        a[r:, c] %= p
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
            z[[r, pr]] = z[[pr, r]]
        z[r, len(piv)] = 1
        a[r, c0:c1] %= p
        z[r] %= p
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c0:c1] = a[r, c0:c1] * inv % p
        z[r] = z[r] * inv % p
        f = a[:, c] % p
        f[r] = 0
        rows = np.nonzero(f)[0]
        if rows.size:
            a[np.ix_(rows, cols)] -= np.outer(f[rows], a[r, c0:c1])
            z[rows] -= np.outer(f[rows], z[r])
        piv.append(c)
        r += 1
    a[:, c0:c1] %= p
    z %= p
    return piv


if _HAS_NUMBA and _BACKEND != "numpy":

    @njit(cache=True)
    def _panel_jit(a, z, c0, c1, r, p):
        nrows, ncols = a.shape
        zw = z.shape[1]
        piv = np.empty(c1 - c0, dtype=np.int64)
        npiv = 0
        for c in range(c0, c1):
            # entries are kept unreduced between pivots; reduce before testing
            pr = -1
            for i in range(r, nrows):
                a[i, c] %= p
                if pr == -1 and a[i, c] != 0:
                    pr = i
            if pr == -1:
                continue
            if pr != r:
                for j in range(ncols):
                    t = a[r, j]
                    a[r, j] = a[pr, j]
                    a[pr, j] = t
                for j in range(zw):
                    t = z[r, j]
                    z[r, j] = z[pr, j]
                    z[pr, j] = t
            z[r, npiv] = 1
            # modular inverse of the pivot by square and multiply
            inv = 1
            base = a[r, c] % p
            e = p - 2
            while e > 0:
                if e & 1:
                    inv = inv * base % p
                base = base * base % p
                e >>= 1
            for j in range(c0, c1):
                a[r, j] = a[r, j] % p * inv % p
            for j in range(zw):
                z[r, j] = z[r, j] % p * inv % p
            for i in range(nrows):
                if i == r:
                    continue
                f = a[i, c] % p
                if f != 0:
                    for j in range(c0, c1):
                        a[i, j] -= f * a[r, j]
                    for j in range(zw):
                        z[i, j] -= f * z[r, j]
            piv[npiv] = c
            npiv += 1
            r += 1
        for i in range(nrows):
            for j in range(c0, c1):
                a[i, j] %= p
            for j in range(zw):
                z[i, j] %= p
        return piv[:npiv]

    def _panel(a, z, c0, c1, r, p):
        return [int(c) for c in _panel_jit(a, z, c0, c1, r, p)]

    BACKEND = "numba"
else:
    _panel = _panel_numpy
    BACKEND = "numpy"


def _chunked_matmul(a, b, p):
    n = a.shape[1]
    # each product is < p**2; cap the number of terms summed before reducing
    step = max(1, (2**63 - 1) // (p * p))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, n, step):
        out = (out + a[:, s : s + step] @ b[s : s + step, :]) % p
    return out


def _update_matmul(z, old, p):
    if z.shape[1] * (p - 1) ** 2 < 2**53:
        # sums stay exactly representable, so BLAS float64 is exact here
        return (z.astype(np.float64) @ old.astype(np.float64)).astype(np.int64) % p
    return _chunked_matmul(z, old, p)


def rref_mod(a, p, panel_fn=None):
    """RREF of an int64 matrix mod p. Returns (reduced matrix, pivot columns)."""
    if panel_fn is None:
        panel_fn = _panel
    a = np.ascontiguousarray(np.atleast_2d(np.array(a, dtype=np.int64)) % p)
    nrows, ncols = a.shape
    pivots = []
    r = 0
    # lazy in-panel reduction accumulates at most width+1 products of size
    # p^2 per entry, which must stay inside int64
    width = min(PANEL, max(1, 2**62 // (p * p)))
    for c0 in range(0, ncols, width):
        if r == nrows:
            break
        c1 = min(c0 + width, ncols)
        z = np.zeros((nrows, c1 - c0), dtype=np.int64)
        piv = panel_fn(a, z, c0, c1, r, p)
        npiv = len(piv)
        if npiv == 0:
            continue
        if c1 < ncols:
            # rows of the matrix become E @ rows, with E identity away from
            # the new pivot rows and E[:, pivot rows] logged in z
            old = a[r : r + npiv, c1:].copy()
            upd = _update_matmul(z[:, :npiv], old, p)
            a[r : r + npiv, c1:] = 0
            a[:, c1:] = (a[:, c1:] + upd) % p
        pivots.extend(piv)
        r += npiv
    return a, np.array(pivots, dtype=np.int64)
