"""Multivariate polynomials over GF(p) with Z^2-multidegrees and monomial orders.

A ring fixes the variable names, a degree pair per variable, a monomial
order and the characteristic.  Polynomials are immutable-by-convention
dicts from exponent tuples to nonzero residues.
"""

from __future__ import annotations

from .linalg import PrimeField


def _grevlex_key(exp):
    return (sum(exp), tuple(-e for e in reversed(exp)))


class GradedRing:
    """Polynomial ring over GF(p) with a Z^2 degree per variable.

    order is one of:
      * "grevlex"      degree reverse lexicographic (degree = exponent sum)
      * "lex"          lexicographic
      * ("block", s)   elimination order: grevlex on the first s variables,
                       ties broken by grevlex on the rest.  A Groebner basis
                       element whose lead term avoids the first block lies
                       entirely in the second-block subring.
    """

    def __init__(self, names, degrees=None, order="grevlex", p=10007):
        self.names = tuple(names)
        self.nvars = len(self.names)
        if degrees is None:
            degrees = [(1, 0)] * self.nvars
        self.degrees = tuple((int(a), int(b)) for a, b in degrees)
        if len(self.degrees) != self.nvars:
            raise ValueError("one degree pair per variable required")
        for d in self.degrees:
            if d[0] < 0 or d[1] < 0 or d == (0, 0):
                raise ValueError(f"variable degrees must be nonzero and nonnegative: {d}")
        self.order = order if isinstance(order, str) else ("block", int(order[1]))
        self.field = PrimeField(p)
        self.p = self.field.p
        self._key_cache = {}

    def __eq__(self, other):
        return (
            isinstance(other, GradedRing)
            and self.names == other.names
            and self.degrees == other.degrees
            and self.order == other.order
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.names, self.degrees, self.order, self.p))

    def __repr__(self):
        return f"GF({self.p})[{', '.join(self.names)}]"

    def key(self, exp):
        """Monomial-order key; larger key = larger monomial."""
        k = self._key_cache.get(exp)
        if k is None:
            if self.order == "grevlex":
                k = _grevlex_key(exp)
            elif self.order == "lex":
                k = tuple(exp)
            else:
                s = self.order[1]
                k = (_grevlex_key(exp[:s]), _grevlex_key(exp[s:]))
            self._key_cache[exp] = k
        return k

    def zero(self):
        return MultiPoly(self, {})

    def one(self):
        return MultiPoly(self, {(0,) * self.nvars: 1})

    def constant(self, c):
        c = int(c) % self.p
        return MultiPoly(self, {(0,) * self.nvars: c} if c else {})

    def var(self, i):
        exp = [0] * self.nvars
        exp[i] = 1
        return MultiPoly(self, {tuple(exp): 1})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exp, coeff=1):
        coeff = int(coeff) % self.p
        return MultiPoly(self, {tuple(exp): coeff} if coeff else {})

    def exp_multidegree(self, exp):
        d1 = d2 = 0
        for e, (a, b) in zip(exp, self.degrees):
            d1 += e * a
            d2 += e * b
        return (d1, d2)

    def monomial_basis(self, degree):
        """All monomials (exponent tuples) of exactly the given multidegree,
        sorted descending in the ring's order.

        Integers are accepted for standard-graded rings and mean (d, 0).
        """
        if isinstance(degree, int):
            degree = (degree, 0)
        d1, d2 = int(degree[0]), int(degree[1])
        out = []
        exp = [0] * self.nvars

        def rec(i, r1, r2):
            if i == self.nvars:
                if r1 == 0 and r2 == 0:
                    out.append(tuple(exp))
                return
            a, b = self.degrees[i]
            emax = r1 + r2
            if a > 0:
                emax = min(emax, r1 // a)
            if b > 0:
                emax = min(emax, r2 // b)
            for e in range(emax + 1):
                exp[i] = e
                rec(i + 1, r1 - e * a, r2 - e * b)
            exp[i] = 0

        if d1 >= 0 and d2 >= 0:
            rec(0, d1, d2)
        out.sort(key=self.key, reverse=True)
        return out

    def format_monomial(self, exp):
        parts = []
        for name, e in zip(self.names, exp):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def parse(self, text):
        """Parse conventional CAS syntax, e.g. '3*t_0^2*t_4 + 9*t_1'."""
        text = text.replace("-", "+-").replace(" ", "")
        index = {n: i for i, n in enumerate(self.names)}
        result = self.zero()
        for chunk in text.split("+"):
            if not chunk:
                continue
            coeff = 1
            exp = [0] * self.nvars
            if chunk.startswith("-"):
                coeff = -1
                chunk = chunk[1:]
            for factor in chunk.split("*"):
                if factor.lstrip("-").isdigit():
                    coeff *= int(factor)
                    continue
                name, _, power = factor.partition("^")
                if name not in index:
                    raise ValueError(f"unknown variable {name!r}")
                exp[index[name]] += int(power) if power else 1
            result = result + self.monomial(exp, coeff)
        return result


class MultiPoly:
    """Polynomial over GF(p): dict from exponent tuple to nonzero residue."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    @property
    def p(self):
        return self.ring.p

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == self.ring.constant(other).terms
        return self.ring == other.ring and self.terms == other.terms

    def __repr__(self):
        return self.to_string()

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        self._check(other)
        p = self.p
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            v = (terms.get(exp, 0) + c) % p
            if v:
                terms[exp] = v
            else:
                terms.pop(exp, None)
        return MultiPoly(self.ring, terms)

    def __neg__(self):
        p = self.p
        return MultiPoly(self.ring, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.p
            if c == 0:
                return self.ring.zero()
            p = self.p
            return MultiPoly(self.ring, {e: co * c % p for e, co in self.terms.items()})
        self._check(other)
        p = self.p
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = (terms.get(e, 0) + c1 * c2) % p
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return MultiPoly(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def lead_exp(self):
        if not self.terms:
            raise ValueError("zero polynomial has no lead term")
        return max(self.terms, key=self.ring.key)

    def lead_term(self):
        e = self.lead_exp()
        return e, self.terms[e]

    def monic(self):
        if not self.terms:
            return self
        _, c = self.lead_term()
        return self * self.ring.field.inv(c)

    def multidegree(self):
        """The common multidegree of all terms; raises if inhomogeneous."""
        degs = {self.ring.exp_multidegree(e) for e in self.terms}
        if len(degs) != 1:
            raise ValueError("polynomial is not multihomogeneous")
        return degs.pop()

    def is_homogeneous(self):
        return len({self.ring.exp_multidegree(e) for e in self.terms}) <= 1

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    def to_string(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mon = self.ring.format_monomial(exp)
            if mon == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts)

    def coeff_vector(self, basis):
        """Coefficients along a monomial basis (list of exponent tuples)."""
        missing = set(self.terms) - set(basis)
        if missing:
            raise ValueError(f"terms outside basis: {sorted(missing)[:3]}")
        return [self.terms.get(e, 0) for e in basis]


def from_coeff_vector(ring, basis, vec):
    p = ring.p
    terms = {}
    for e, c in zip(basis, vec):
        c = int(c) % p
        if c:
            terms[e] = c
    return MultiPoly(ring, terms)


class RingMap:
    """Ring homomorphism determined by one target polynomial per source variable."""

    def __init__(self, source, target, images):
        if len(images) != source.nvars:
            raise ValueError("one image per source variable required")
        for f in images:
            if f.ring != target:
                raise ValueError("images must lie in the target ring")
        self.source = source
        self.target = target
        self.images = list(images)
        self._powers = {}

    def _power(self, i, e):
        key = (i, e)
        f = self._powers.get(key)
        if f is None:
            f = self.images[i] ** e
            self._powers[key] = f
        return f

    def __call__(self, f):
        return self.apply(f)

    def apply(self, f):
        if f.ring != self.source:
            raise ValueError("polynomial not in the source ring")
        result = self.target.zero()
        for exp, c in f.terms.items():
            term = self.target.constant(c)
            for i, e in enumerate(exp):
                if e:
                    term = term * self._power(i, e)
            result = result + term
        return result


def product(ring, polys):
    result = ring.one()
    for f in polys:
        result = result * f
    return result
