"""Torsion certificates for congruence groups via root-of-unity traces.

A non-central torsion element of the norm-one group generates a quadratic
extension by a root of unity x, and forces the congruence ideal to divide
the obstruction ideal <x + 1/x - 2>.  Working only with the real trace
value x + 1/x (never constructing the extension), the certifier:

* enumerates every torsion order n whose cosine trace 2*cos(2*pi/n) lies
  in K (all n with phi(n) <= 2d, tested exactly);
* forms each obstruction ideal and tests the divisibility it would impose;
  in a class-number-one field the stronger square-divisibility test
  applies (any violating ideal would contain a principal one with the
  same obstruction, forcing I^2 to divide it);
* short-circuits obstruction values that are units.

A "torsion-free" verdict is therefore a certificate that the congruence
group contains no non-central torsion; whether -1 belongs to it is a
separate exact membership query on the orders module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import InputError, PrecisionError
from .intervals import RatInterval, interval_solve
from .numfield import FieldElement, IdealHNF, NumberField
from .orders import OrderLattice
from .realroots import isolate_real_roots

_T = sympy.Symbol("t")


def two_cos_minimal_poly(n: int) -> list:
    """Ascending integer coefficients of the minimal polynomial of 2*cos(2*pi/n)."""
    if n < 1:
        raise InputError("n must be positive")
    if n == 1:
        return [-2, 1]
    if n == 2:
        return [2, 1]
    cyc = sympy.Poly(sympy.cyclotomic_poly(n, _T), _T).all_coeffs()
    cyc = [int(c) for c in reversed(cyc)]  # ascending, degree phi(n), palindromic
    phi = len(cyc) - 1
    half = phi // 2
    # write x^k + x^-k as p_k(y), y = x + 1/x:  p_0 = 2, p_1 = y, p_k = y*p_{k-1} - p_{k-2}
    p_prev = [2]
    p_cur = [0, 1]
    out = _scale(cyc[half], [1])
    for k in range(1, half + 1):
        if k == 1:
            pk = p_cur
        else:
            pk = _sub(_shift_mul_y(p_cur), p_prev)
            p_prev, p_cur = p_cur, pk
        out = _add(out, _scale(cyc[half + k], pk))
    return [int(c) for c in out]


def _shift_mul_y(p):
    return [0] + list(p)


def _add(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [x + y for x, y in zip(a, b)]


def _sub(a, b):
    return _add(a, [-x for x in b])


def _scale(c, p):
    return [c * x for x in p]


def roots_in_field(field: NumberField, asc_coeffs) -> list:
    """All roots of a monic integer polynomial that lie in the field, exactly.

    Certified numeric placement proposes integer coordinate vectors (roots
    of monic integer polynomials in K are algebraic integers, hence have
    integer coordinates here); exact arithmetic then verifies each
    candidate, so the output carries no numerical doubt.
    """
    d = field.degree
    real_roots = isolate_real_roots(asc_coeffs)
    if not real_roots:
        return []
    found = {}
    width = Fraction(1, 2 ** 80)
    for attempt in range(6):
        try:
            found = _place_roots(field, asc_coeffs, real_roots, width)
            break
        except PrecisionError:
            width = width * width
    return sorted(found.values(), key=lambda x: x.coords)


def _place_roots(field, asc_coeffs, root_intervals, width):
    import itertools

    d = field.degree
    theta_boxes = [field.roots[s].interval(width) for s in range(d)]
    vander = [[_ipow(theta_boxes[s], m) for m in range(d)] for s in range(d)]
    root_boxes = []
    from .realroots import refine_root

    for lo, hi in root_intervals:
        rlo, rhi = refine_root(asc_coeffs, lo, hi, width)
        root_boxes.append(RatInterval(rlo, rhi))

    found = {}
    for assign in itertools.product(range(len(root_boxes)), repeat=d):
        rhs = [root_boxes[a] for a in assign]
        coords = interval_solve([row[:] for row in vander], rhs)
        if coords is None:
            continue
        cand = []
        ok = True
        for box in coords:
            k = _unique_integer(box)
            if k is None:
                ok = False
                break
            cand.append(k)
        if not ok:
            continue
        elem = field.element(cand)
        if _eval_in_field(field, asc_coeffs, elem).is_zero():
            found[elem.coords] = elem
    return found


def _eval_in_field(field, asc_coeffs, x: FieldElement) -> FieldElement:
    acc = field.zero()
    for c in reversed(asc_coeffs):
        acc = acc * x + field.from_rational(c)
    return acc


def _ipow(box: RatInterval, m: int) -> RatInterval:
    return box ** m


def _unique_integer(box: RatInterval):
    import math

    lo = math.ceil(box.lo)
    hi = math.floor(box.hi)
    if lo > hi:
        return None
    if lo < hi:
        raise PrecisionError("coordinate interval holds several integers")
    return lo


def candidate_orders(field: NumberField) -> list:
    """All torsion orders n with phi(n) <= 2d whose cosine trace lies in K."""
    bound = 2 * field.degree
    ns = []
    n = 1
    while n <= 2 * bound * bound + 2:
        if sympy.totient(n) <= bound:
            if roots_in_field(field, two_cos_minimal_poly(n)):
                ns.append(n)
        n += 1
    return ns


@dataclass
class ObstructionRecord:
    n: int
    trace_value: FieldElement
    unit_shortcircuit: bool
    obstruction_norm: int | None
    blocks: bool


@dataclass
class TorsionCertificate:
    ideal_norm: int
    strong_form: bool
    records: list
    torsion_free: bool
    blocking_orders: list

    def lines(self):
        out = [f"ideal_norm={self.ideal_norm}",
               f"strong_form={str(self.strong_form).lower()}"]
        for r in self.records:
            tag = "unit" if r.unit_shortcircuit else str(r.obstruction_norm)
            out.append(f"candidate_n={r.n} trace={r.trace_value} obstruction_norm={tag} "
                       f"blocks={str(r.blocks).lower()}")
        verdict = "torsion-free" if self.torsion_free else \
            f"possibly-torsion(n={','.join(map(str, self.blocking_orders))})"
        out.append(f"verdict={verdict}")
        return out


def certify_torsion_free(order: OrderLattice, ideal: IdealHNF,
                         principal: bool | None = None) -> TorsionCertificate:
    """Certificate that the level-I congruence group has no non-central torsion.

    `principal` overrides the strong (square-divisibility) form; by default
    it follows the field's class-number-one flag.
    """
    field = order.algebra.field
    if ideal.is_whole_ring():
        raise InputError("the improper ideal defines the full group; certificate undefined")
    strong = field.class_number_one if principal is None else bool(principal)
    i_sq = ideal * ideal
    records = []
    blocking = []
    for n in candidate_orders(field):
        if n <= 2:
            continue  # x = 1 is not torsion, x = -1 is central: reported separately
        for trace_value in roots_in_field(field, two_cos_minimal_poly(n)):
            c = trace_value - field.from_rational(2)
            if c.is_zero():
                continue
            if abs(c.norm()) == 1:
                records.append(ObstructionRecord(n, trace_value, True, None, False))
                continue
            obstruction = IdealHNF.principal(field, c)
            if strong:
                blocks = i_sq.divides(obstruction)
            else:
                blocks = ideal.divides(obstruction)
            records.append(ObstructionRecord(n, trace_value, False,
                                             obstruction.norm, blocks))
            if blocks:
                blocking.append(n)
    return TorsionCertificate(
        ideal_norm=ideal.norm,
        strong_form=strong,
        records=records,
        torsion_free=not blocking,
        blocking_orders=sorted(set(blocking)),
    )
