"""Arithmetic in GF(p) and exact dense linear algebra over it."""

from __future__ import annotations

import numpy as np

from ._kernels import rref_mod

MAX_MODULUS = 2**31  # products of two residues must fit in int64


def is_prime(n):
    """Deterministic Miller-Rabin, valid for n < 3.3e24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field GF(p) for an odd prime p < 2**31; elements are residues in [0, p)."""

    def __init__(self, p):
        p = int(p)
        if p == 2 or not is_prime(p):
            raise ValueError(f"modulus must be an odd prime, got {p}")
        if p >= MAX_MODULUS:
            raise ValueError(f"modulus {p} too large (must be < 2**31)")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(p)")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p


class MatrixGFp:
    """Dense matrix over GF(p), stored row-major as int64 residues."""

    def __init__(self, entries, p):
        self.p = p
        self.a = np.atleast_2d(np.array(entries, dtype=np.int64)) % p
        self.rows, self.cols = self.a.shape

    def rref(self):
        """Reduced row echelon form. Returns (MatrixGFp, pivot column list)."""
        red, piv = rref_mod(self.a, self.p)
        m = MatrixGFp.__new__(MatrixGFp)
        m.p = self.p
        m.a = red
        m.rows, m.cols = red.shape
        return m, [int(c) for c in piv]

    def rank(self):
        _, piv = rref_mod(self.a, self.p)
        return len(piv)

    def kernel_basis(self):
        """Echelon-normalized basis of the right kernel, as a list of int64 vectors."""
        return kernel_basis(self.a, self.p)

    def __matmul__(self, other):
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        return MatrixGFp(matmul_mod(self.a, other.a, self.p), self.p)


def rank(a, p):
    _, piv = rref_mod(np.atleast_2d(a), p)
    return len(piv)


def kernel_basis(a, p):
    """Basis of {v : a @ v = 0 mod p}; each vector has a 1 in one free column
    and 0 in the other free columns."""
    a = np.atleast_2d(np.array(a, dtype=np.int64))
    red, piv = rref_mod(a, p)
    piv = [int(c) for c in piv]
    ncols = a.shape[1]
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for j in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[j] = 1
        for i, c in enumerate(piv):
            v[c] = (-red[i, j]) % p
        basis.append(v)
    return basis


def matmul_mod(a, b, p):
    """Exact a @ b mod p, chunked so intermediate sums stay inside int64."""
    a = np.atleast_2d(np.array(a, dtype=np.int64)) % p
    b = np.atleast_2d(np.array(b, dtype=np.int64)) % p
    n = a.shape[1]
    # each product is < p**2 <= 2**62; sum at most 2 terms before reducing
    step = max(1, (2**63 - 1) // (p * p))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, n, step):
        out = (out + a[:, s : s + step] @ b[s : s + step, :]) % p
    return out


def row_space_dim(vectors, p, ncols):
    if not vectors:
        return 0
    return rank(np.array(vectors, dtype=np.int64).reshape(len(vectors), ncols), p)


def extend_basis(old_vectors, candidates, p, ncols):
    """Greedily pick candidates that enlarge the span of old_vectors.

    Returns the picked candidates, in input order (deterministic).
    """
    rows = [np.asarray(v, dtype=np.int64) for v in old_vectors]
    cur = row_space_dim(rows, p, ncols)
    picked = []
    for v in candidates:
        trial = rows + [np.asarray(v, dtype=np.int64)]
        r = row_space_dim(trial, p, ncols)
        if r > cur:
            rows = trial
            cur = r
            picked.append(v)
    return picked


def in_row_space(v, vectors, p, ncols):
    base = row_space_dim(vectors, p, ncols)
    return row_space_dim(list(vectors) + [v], p, ncols) == base
