"""Closed-form invariants of the relative canonical resolution and the
conjecture predicates, all in exact integer/rational arithmetic.

Twist multisets are passed around as descending-sorted lists of integers.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _check_index(k, i):
    if k < 4:
        raise ValueError("gonality must be at least 4 for intermediate bundles")
    if not 1 <= i <= k - 3:
        raise ValueError(f"bundle index {i} out of range for k={k}")


def beta_rank(k, i):
    """Rank of the i-th syzygy bundle in the relative canonical resolution."""
    _check_index(k, i)
    num = i * (k - 2 - i) * math.comb(k, i + 1)
    assert num % (k - 1) == 0
    return num // (k - 1)


def beta_rank_alt(k, i):
    """Same rank via the second closed form; the two must always agree."""
    _check_index(k, i)
    num = k * (k - 2 - i) * math.comb(k - 2, i - 1)
    assert num % (i + 1) == 0
    return num // (i + 1)


def bundle_degree(g, k, i):
    """Degree of the i-th syzygy bundle."""
    _check_index(k, i)
    return (g - k - 1) * (k - 2 - i) * math.comb(k - 2, i - 1)


def brill_noether_rho(g, k):
    """rho(g, 1, k) = g - 2(g - k + 1) for the pencil of degree k."""
    return g - 2 * (g - k + 1)


def divisor_coefficient(g, k, i):
    """The rational multiplier A_i and the Picard-class coefficient triple
    for the virtual divisor of unbalanced i-th bundles; needs k | g-1."""
    if (g - 1) % k != 0:
        raise ValueError("the divisor class formula needs k dividing g-1")
    _check_index(k, i)
    a = Fraction((k - 2) * (k - 3), 6 * (i + 1) * (k - i - 1)) * math.comb(k - 4, i - 1) ** 2
    zeta = 6 * (g * k - 6 * g + k + 6)
    kappa = -k * (k - 12)
    delta = -k * k
    return a, zeta, kappa, delta


def check_remark_identity(k):
    """A_i = rank(N_i) * binom(k-4, i-1) / (6k) for every intermediate i."""
    if k < 4:
        raise ValueError("needs k >= 4")
    for i in range(1, k - 2):
        a = Fraction((k - 2) * (k - 3), 6 * (i + 1) * (k - i - 1)) * math.comb(k - 4, i - 1) ** 2
        if a != Fraction(beta_rank(k, i) * math.comb(k - 4, i - 1), 6 * k):
            return False
    return True


def balanced_splitting(rank, degree):
    """The unique balanced twist multiset with the given rank and degree."""
    if rank < 1:
        raise ValueError("rank must be positive")
    q, r = divmod(degree, rank)
    return [q + 1] * r + [q] * (rank - r)


def is_balanced(twists):
    return max(twists) - min(twists) <= 1


def conjectured_mu_splitting(g, k, j):
    """Predicted twists of N_j when g-1 = n*k: the balanced value (n-1)(j+1)
    split symmetrically one step up and down, binom(k-4, j-1) times each."""
    _check_index(k, j)
    if (g - 1) % k != 0:
        raise ValueError("prediction applies only when k divides g-1")
    n = (g - 1) // k
    if n < 1:
        raise ValueError("needs g - 1 >= k")
    mid = (n - 1) * (j + 1)
    spread = math.comb(k - 4, j - 1)
    rank = beta_rank(k, j)
    if rank < 2 * spread:
        raise ValueError("prediction has more off-center summands than the rank")
    out = [mid + 1] * spread + [mid] * (rank - 2 * spread) + [mid - 1] * spread
    return sorted(out, reverse=True)


def stated_refined_range(k):
    """Indices the refined gap bound is asserted for."""
    return range(2, math.ceil((k - 3) / 2) + 1)


def dual_refined_range(k):
    """The reflected indices, reported separately and not asserted."""
    return [k - 2 - i for i in stated_refined_range(k)]


def refined_bound_holds(g, k, observed, indices=None):
    """Gap bound max - min <= min(g-k-1, i+1) per index; observed maps the
    bundle index i to its twist multiset."""
    if brill_noether_rho(g, k) < 0:
        raise ValueError("the bound is only conjectured for nonnegative rho")
    if indices is None:
        indices = stated_refined_range(k)
    out = {}
    for i in indices:
        twists = observed[i]
        out[i] = max(twists) - min(twists) <= min(g - k - 1, i + 1)
    return out


def g_minus_k2_prediction(g):
    """Predicted twist multisets for all bundles in the g = k+2 family."""
    k = g - 2
    if k < 4:
        raise ValueError("needs g >= 6")
    out = {}
    for i in range(1, k - 2):
        zeros = i * math.comb(g - 4, i + 1)
        ones = (g - 4 - i) * math.comb(g - 4, g - 3 - i)
        if zeros + ones != beta_rank(k, i):
            raise ArithmeticError(
                f"g-2 gonality prediction has rank {zeros + ones}, expected {beta_rank(k, i)}"
            )
        out[i] = [1] * ones + [0] * zeros
    return out
