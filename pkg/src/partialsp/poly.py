"""Univariate polynomials over Q and certified real root isolation.

Coefficient lists are low-order first: ``c[j]`` multiplies ``s**j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Poly = tuple  # tuple[Fraction, ...]

DEFAULT_WIDTH = Fraction(1, 10**12)


def trim(c: Sequence) -> Poly:
    c = [Fraction(x) for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(c: Poly) -> int:
    return len(trim(c)) - 1


def evaluate(c: Sequence, s) -> Fraction:
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * s + a
    return acc


def derivative(c: Poly) -> Poly:
    return trim([j * c[j] for j in range(1, len(c))])


def divmod_poly(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a, b = list(trim(a)), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        coef = a[-1] / b[-1]
        q[shift] = coef
        for j, bj in enumerate(b):
            a[j + shift] -= coef * bj
        a = list(trim(a))
    return trim(q), trim(a)


def monic(c: Poly) -> Poly:
    c = trim(c)
    return tuple(x / c[-1] for x in c) if c else c


def gcd_poly(a: Poly, b: Poly) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def squarefree_decomposition(c: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``c = lc * prod f_i**i`` with square-free, coprime f_i."""
    c = monic(c)
    if len(c) <= 1:
        return []
    out = []
    d = derivative(c)
    g = gcd_poly(c, d)
    b = divmod_poly(c, g)[0]
    e = divmod_poly(d, g)[0]
    i = 1
    while len(b) > 1:
        bd = derivative(b)
        diff = trim([x - y for x, y in _pad(e, bd)])
        a = gcd_poly(b, diff)
        if len(a) > 1:
            out.append((a, i))
        b = divmod_poly(b, a)[0]
        e = divmod_poly(diff, a)[0]
        i += 1
    return out


def _pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def primitive(c: Poly) -> tuple[int, ...]:
    """Integer multiple of ``c`` with content 1 and positive leading coefficient."""
    c = trim(c)
    lcm = 1
    for x in c:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in c]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def sturm_sequence(f: Poly) -> list[Poly]:
    seq = [trim(f), derivative(f)]
    while seq[-1]:
        r = divmod_poly(seq[-2], seq[-1])[1]
        seq.append(tuple(-x for x in r))
    return seq[:-1]


def _sign_changes(seq, x) -> int:
    signs = [v for v in (evaluate(p, x) for p in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(seq, a, b) -> int:
    """Distinct roots of seq[0] in the half-open interval (a, b]."""
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def cauchy_bound(f: Poly) -> Fraction:
    f = trim(f)
    return 1 + max((abs(x / f[-1]) for x in f[:-1]), default=Fraction(0))


@dataclass
class RealRoot:
    """A real root of a square-free polynomial, exact or bracketed by (lo, hi]."""

    poly: Poly
    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None
    multiplicity: int = 1

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def width(self) -> Fraction:
        return Fraction(0) if self.exact is not None else self.hi - self.lo

    def bisect(self) -> None:
        if self.exact is not None:
            return
        mid = (self.lo + self.hi) / 2
        fm = evaluate(self.poly, mid)
        if fm == 0:
            self.exact = self.lo = self.hi = mid
        elif (fm > 0) == (evaluate(self.poly, self.hi) > 0):
            self.hi = mid
        else:
            self.lo = mid

    def refine(self, width=DEFAULT_WIDTH) -> "RealRoot":
        while self.exact is None and self.hi - self.lo > width:
            self.bisect()
        return self

    def identify(self) -> "RealRoot":
        """Decide exactly whether the root is rational; if so, store it."""
        if self.exact is not None:
            return self
        ints = list(primitive(self.poly))
        while ints[0] == 0:  # factor out powers of s; the root here is nonzero
            ints.pop(0)
        if len(ints) == 1:
            return self
        lead = abs(ints[-1])
        # distinct rationals with denominators <= lead are >= 1/lead**2 apart
        self.refine(Fraction(1, 2 * lead * lead))
        if self.exact is not None:
            return self
        cand = ((self.lo + self.hi) / 2).limit_denominator(lead)
        if self.lo <= cand <= self.hi and evaluate(self.poly, cand) == 0:
            self.exact = self.lo = self.hi = cand
        return self

    def float(self) -> float:
        return float(self.exact) if self.exact is not None else float((self.lo + self.hi) / 2)

    def compare(self, other: "RealRoot", floor=Fraction(1, 10**40)) -> int:
        """-1/0/1; intervals are refined until disjoint (ties below ``floor`` count as equal)."""
        while True:
            if self.exact is not None and other.exact is not None:
                return (self.exact > other.exact) - (self.exact < other.exact)
            if self.hi < other.lo or (self.hi == other.lo and other.exact is None):
                return -1
            if other.hi < self.lo or (other.hi == self.lo and self.exact is None):
                return 1
            if self.width <= floor and other.width <= floor:
                return 0
            if self.width >= other.width:
                self.bisect()
            else:
                other.bisect()


def isolate(f: Poly, a: Fraction, b: Fraction) -> list[RealRoot]:
    """Roots of square-free ``f`` in (a, b], in increasing order."""
    seq = sturm_sequence(f)
    out = []
    stack = [(Fraction(a), Fraction(b))]
    while stack:
        lo, hi = stack.pop()
        k = count_roots(seq, lo, hi)
        if k == 0:
            continue
        if k == 1:
            if evaluate(f, hi) == 0:
                out.append(RealRoot(f, hi, hi, hi))
            else:
                out.append(RealRoot(f, lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out, key=lambda r: r.hi)


def roots_at_least(c: Sequence, lower=Fraction(1)) -> list[RealRoot]:
    """All distinct real roots >= lower, tagged with multiplicity, increasing."""
    out = []
    for f, mult in squarefree_decomposition(trim(c)):
        if len(f) == 2:
            r = -f[0] / f[1]
            if r >= lower:
                out.append(RealRoot(f, r, r, r, mult))
            continue
        if evaluate(f, lower) == 0:
            out.append(RealRoot(f, lower, lower, Fraction(lower), mult))
        bound = max(cauchy_bound(f), Fraction(lower)) + 1
        for root in isolate(f, Fraction(lower), bound):
            root.multiplicity = mult
            out.append(root)
    return sorted(out, key=lambda r: r.hi)


def _largest(roots: list[RealRoot], width) -> RealRoot | None:
    best = None
    for r in roots:
        if best is None or r.compare(best) > 0:
            best = r
    if best is not None:
        best.identify()
        best.refine(width)
    return best


def max_root_at_least_one(c: Sequence, width=DEFAULT_WIDTH) -> RealRoot | None:
    """Largest real root in [1, oo), exact when rational, else an interval of width <= ``width``.

    Identically-zero polynomials are the caller's business.
    """
    if not trim(c):
        raise ValueError("identically zero polynomial has no isolated roots")
    return _largest(roots_at_least(c), width)


def sign_change_root(c: Sequence, width=DEFAULT_WIDTH) -> RealRoot | None:
    """Largest root in [1, oo) at which the polynomial changes sign (odd multiplicity)."""
    if not trim(c):
        raise ValueError("identically zero polynomial has no isolated roots")
    return _largest([r for r in roots_at_least(c) if r.multiplicity % 2 == 1], width)
