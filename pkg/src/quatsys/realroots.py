"""Exact real root isolation for integer polynomials.

Sturm-chain root counting over rational sample points, bisection down to
isolating intervals with non-root rational endpoints, and on-demand
refinement to any requested width.  Everything here is Fraction-exact, so
the returned intervals are certified enclosures, not floating point guesses.

Polynomials are dense coefficient lists in *ascending* order
(``coeffs[k]`` multiplies ``x**k``).
"""

from __future__ import annotations

from fractions import Fraction

from .intervals import RatInterval


def poly_eval(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_eval_interval(coeffs, x: RatInterval) -> RatInterval:
    acc = RatInterval.exact(0)
    for c in reversed(coeffs):
        acc = acc * x + Fraction(c)
    return acc


def poly_deriv(coeffs):
    return [k * Fraction(c) for k, c in enumerate(coeffs)][1:]


def poly_degree(coeffs) -> int:
    d = len(coeffs) - 1
    while d >= 0 and coeffs[d] == 0:
        d -= 1
    return d


def _trim(coeffs):
    d = poly_degree(coeffs)
    return [Fraction(c) for c in coeffs[: d + 1]]


def poly_divmod(num, den):
    num = _trim(num)
    den = _trim(den)
    if poly_degree(den) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    rem = list(num)
    dd = poly_degree(den)
    lead = den[dd]
    while poly_degree(rem) >= dd:
        dr = poly_degree(rem)
        f = rem[dr] / lead
        quot[dr - dd] = f
        for k in range(dd + 1):
            rem[dr - dd + k] -= f * den[k]
        rem = rem[:dr]  # the leading term cancelled exactly
        if not rem:
            rem = [Fraction(0)]
    return quot if quot else [Fraction(0)], _trim(rem) or [Fraction(0)]


def poly_gcd(a, b):
    """Monic gcd over the rationals."""
    a, b = _trim(a), _trim(b)
    while poly_degree(b) >= 0:
        _, r = poly_divmod(a, b)
        a, b = b, _trim(r)
    if poly_degree(a) < 0:
        return [Fraction(0)]
    lead = a[poly_degree(a)]
    return [c / lead for c in a]


def squarefree_part(coeffs):
    d = poly_gcd(coeffs, poly_deriv(coeffs))
    if poly_degree(d) <= 0:
        return _trim(coeffs)
    q, r = poly_divmod(coeffs, d)
    assert poly_degree(r) < 0 or all(c == 0 for c in r)
    return _trim(q)


def sturm_chain(coeffs):
    p0 = _trim(coeffs)
    p1 = _trim(poly_deriv(p0))
    chain = [p0, p1]
    while poly_degree(chain[-1]) > 0:
        _, r = poly_divmod(chain[-2], chain[-1])
        r = _trim([-c for c in r])
        if poly_degree(r) < 0:
            break
        chain.append(r)
    return chain


def _sign_changes(chain, x: Fraction) -> int:
    signs = []
    for p in chain:
        v = poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(chain, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]; needs a squarefree chain."""
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def root_bound(coeffs) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    coeffs = _trim(coeffs)
    lead = abs(coeffs[-1])
    if len(coeffs) == 1:
        return Fraction(1)
    return 1 + max(abs(Fraction(c)) for c in coeffs[:-1]) / lead


def isolate_real_roots(coeffs) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open isolating intervals for all distinct real roots, ascending.

    Endpoints are rational non-roots of the squarefree part, so sign
    evaluations at the endpoints stay informative during refinement.
    """
    sqf = squarefree_part(coeffs)
    deg = poly_degree(sqf)
    if deg <= 0:
        return []
    chain = sturm_chain(sqf)
    bound = root_bound(sqf)
    found = []

    def split(lo, hi, n):
        if n == 0:
            return
        if n == 1:
            found.append((lo, hi))
            return
        mid = (lo + hi) / 2
        while poly_eval(sqf, mid) == 0:
            # nudge the cut off the root; the perturbed point is still interior
            mid += (hi - lo) / 64
        nl = count_roots(chain, lo, mid)
        split(lo, mid, nl)
        split(mid, hi, n - nl)

    total = count_roots(chain, -bound, bound)
    split(-bound, bound, total)
    return sorted(found)


def refine_root(coeffs, lo: Fraction, hi: Fraction, width: Fraction):
    """Shrink an isolating interval of a squarefree poly below `width` by bisection."""
    slo = poly_eval(coeffs, lo)
    shi = poly_eval(coeffs, hi)
    if slo == 0 or shi == 0:
        raise ValueError("isolating interval endpoints must not be roots")
    if (slo > 0) == (shi > 0):
        raise ValueError("interval does not bracket a sign change")
    neg_left = slo < 0
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = poly_eval(coeffs, mid)
        if v == 0:
            # exact rational root: collapse around it
            eps = min(width, hi - lo) / 4
            return (mid - eps, mid + eps) if width > 0 else (mid, mid)
        if (v < 0) == neg_left:
            lo = mid
        else:
            hi = mid
    return lo, hi


class IsolatedRoot:
    """One real root of a squarefree integer polynomial, refinable on demand."""

    def __init__(self, coeffs, lo: Fraction, hi: Fraction):
        self.coeffs = _trim(coeffs)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)

    def interval(self, width: Fraction | None = None) -> RatInterval:
        if width is not None and self.hi - self.lo > width:
            self.lo, self.hi = refine_root(self.coeffs, self.lo, self.hi, width)
        return RatInterval(self.lo, self.hi)

    def refine_bits(self, bits: int) -> RatInterval:
        return self.interval(Fraction(1, 2 ** bits))

    def __float__(self):
        return float(self.interval(Fraction(1, 2 ** 60)).mid)

    def __repr__(self):
        return f"IsolatedRoot(~{float(self):.12g})"
