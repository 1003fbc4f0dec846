"""Closed-form bound evaluators: trace floor, geodesic length, genus,
systole floors, the 4/3 comparison for the (2,3,7) tower, and the
systolic-ratio corollaries (surface and 3-manifold versions).

Exact quantities (trace floors over a totally real field, genus from the
area relation) are returned as Fractions; transcendental quantities are
certified enclosures.  Asymptotic o(1) forms are never used in computed
values: every evaluator follows the explicit inequality chain of the
underlying proof, and the asymptotic strings are only produced as clearly
labelled companions for display.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import im, mp, mpf, polylog

from .errors import InputError, InvariantViolation, PrecisionError
from .intervals import RatInterval, iv_acosh, iv_log, iv_pow, iv_sqrt
from .numfield import IdealHNF
from .orders import OrderLattice, hurwitz_algebra, hurwitz_order


@dataclass
class GeometryContext:
    """Everything the surface-level evaluators need about the base quotient."""

    order: OrderLattice
    covolume_pi: Fraction          # hyperbolic area of the base = covolume_pi * pi
    lambda_value: Fraction = Fraction(1)

    @property
    def degree(self) -> int:
        return self.order.algebra.field.degree

    @property
    def kappa(self) -> int:
        return self.order.kappa

    def two_plus_kappa_ideal(self, ideal: IdealHNF) -> IdealHNF:
        field = self.order.algebra.field
        two = IdealHNF.principal(field, field.from_rational(2))
        kap = IdealHNF.principal(field, self.order.kappa_element())
        return two + kap * ideal


def hurwitz_context() -> GeometryContext:
    """The (2,3,7) base orbifold: area pi/21, lambda = 1, kappa = 2."""
    return GeometryContext(order=hurwitz_order(hurwitz_algebra()),
                           covolume_pi=Fraction(1, 21))


# ---------------------------------------------------------------------------
# Trace floors
# ---------------------------------------------------------------------------


def trace_lower_bound(ctx: GeometryContext, ideal: IdealHNF, sharp: bool = True) -> Fraction:
    """Strict floor for |Tr| over non-central congruence elements (exact rational).

    sharp: Norm(I)^2 / (2^(d-2) * Norm(<2> + kappa I)) - 2
    coarse: Norm(I)^2 / 2^(2d-2) - 2; the sharp form never falls below it.
    """
    d = ctx.degree
    n_i = Fraction(ideal.norm)
    if sharp:
        n2k = ctx.two_plus_kappa_ideal(ideal).norm
        return n_i ** 2 / (Fraction(2) ** (d - 2) * n2k) - 2
    return n_i ** 2 / Fraction(2) ** (2 * d - 2) - 2


def trace_bound_pair(ctx: GeometryContext, ideal: IdealHNF):
    sharp = trace_lower_bound(ctx, ideal, sharp=True)
    coarse = trace_lower_bound(ctx, ideal, sharp=False)
    if sharp < coarse:
        raise InvariantViolation("sharp trace bound fell below the coarse one")
    return sharp, coarse


def kleinian_trace_bounds(d: int, norm_i: int, norm_two_plus_kappa: int | None = None,
                          prec: int = 64):
    """(sharp enclosure or None, coarse Fraction) for the 3-manifold case."""
    coarse = Fraction(norm_i) / Fraction(2) ** (d - 2) - 2
    sharp = None
    if norm_two_plus_kappa is not None:
        denom = iv_sqrt(Fraction(norm_two_plus_kappa), prec) * \
            iv_pow(Fraction(2), Fraction(d, 2) - 2, prec)
        sharp = RatInterval.exact(norm_i) / denom - 2
    return sharp, coarse


# ---------------------------------------------------------------------------
# Lengths
# ---------------------------------------------------------------------------


def length_from_trace(trace, exact: bool = True, prec: int = 64) -> RatInterval:
    """Geodesic length from a translation trace.

    exact: 2*acosh(|t|/2), the true length of the hyperbolic element.
    bound: 2*log(|t| - 1), the floor implied by |lambda| + 1 > |t|; valid in
    the loxodromic (complex trace modulus) regime as well.
    """
    t = trace if isinstance(trace, RatInterval) else RatInterval.exact(Fraction(trace))
    t = t.abs()
    if exact:
        if not t.certainly_gt(2):
            raise InputError("exact length needs |trace| > 2 (hyperbolic element)")
        return iv_acosh(t / 2, prec) * 2
    if not t.certainly_gt(1):
        raise InputError("length bound needs |trace| > 1")
    return iv_log(t - 1, prec) * 2


# ---------------------------------------------------------------------------
# Genus via the area relation
# ---------------------------------------------------------------------------


def psl_index(sl_count: int, minus_one_in_group: bool) -> int:
    """Index of the image in the isometry group: halve unless -1 is congruent to 1."""
    if minus_one_in_group:
        return sl_count
    if sl_count % 2:
        raise InvariantViolation("odd norm-one count cannot halve")
    return sl_count // 2


def genus_from_index(ctx: GeometryContext, projective_index: int) -> int:
    """Solve 4*pi*(g-1) = index * area for g; non-integral g is a hard failure."""
    g_minus_1 = Fraction(projective_index) * ctx.covolume_pi / 4
    g = g_minus_1 + 1
    if g.denominator != 1 or g < 2:
        raise InvariantViolation(
            f"genus came out {g}; the equality assumptions are violated")
    return int(g)


# ---------------------------------------------------------------------------
# Systole floors (explicit chains)
# ---------------------------------------------------------------------------


def sys_lower_bound_from_ideal(ctx: GeometryContext, ideal: IdealHNF,
                               sharp: bool = True, prec: int = 64):
    """2*log(trace floor - 1); None when the value would be <= 0 (vacuous)."""
    floor = trace_lower_bound(ctx, ideal, sharp=sharp)
    if floor <= 2:
        return None
    return iv_log(floor - 1, prec) * 2


def sys_lower_bound_from_genus(ctx: GeometryContext, genus: int, prec: int = 64):
    """Explicit chain: 2*log( (4*pi*(g-1)/(nu*lambda))^(2/3) / 2^(2d-2) - 3 ).

    The area ratio 4*pi*(g-1)/nu is rational because nu is a rational
    multiple of pi, so the enclosure is tight.  Returns None when vacuous.
    """
    if genus < 2:
        raise InputError("genus must be at least 2")
    ratio = Fraction(4) * (genus - 1) / (ctx.covolume_pi * ctx.lambda_value)
    base = iv_pow(ratio, Fraction(2, 3), prec) / Fraction(2) ** (2 * ctx.degree - 2) - 3
    if not base.certainly_gt(1):
        return None
    return iv_log(base, prec) * 2


def four_thirds_log_genus(genus: int, prec: int = 64) -> RatInterval:
    return iv_log(Fraction(genus), prec) * Fraction(4, 3)


def hurwitz_43_check(genus: int, prec: int = 96) -> bool:
    """Certified test of 2*log((21(g-1)/16)^(2/3) - 3) >= (4/3)*log(g)."""
    for p in (prec, 4 * prec, 16 * prec):
        lhs = _hurwitz_chain(genus, p)
        rhs = four_thirds_log_genus(genus, p)
        if lhs.certainly_gt(rhs):
            return True
        if rhs.certainly_gt(lhs):
            return False
    raise PrecisionError(f"4/3 comparison undecided at genus {genus}")


def _hurwitz_chain(genus: int, prec: int) -> RatInterval:
    base = iv_pow(Fraction(21 * (genus - 1), 16), Fraction(2, 3), prec) - 3
    if not base.certainly_gt(0):
        raise InputError(f"chain vacuous at genus {genus}")
    return iv_log(base, prec) * 2


def hurwitz_43_range_check(lo: int = 65, hi: int = 10 ** 4,
                           log_samples_to: int = 10 ** 6, n_log_samples: int = 200):
    """Check the 4/3 inequality on [lo, hi] and log-spaced points above.

    A vectorized float sweep with a conservative error margin settles the
    bulk; any genus landing inside the margin is re-decided with certified
    interval arithmetic.
    """
    gs = np.arange(lo, hi + 1, dtype=np.float64)
    if log_samples_to > hi:
        extra = np.unique(np.round(np.logspace(np.log10(hi + 1),
                                               np.log10(log_samples_to),
                                               n_log_samples)).astype(np.int64))
        gs = np.concatenate([gs, extra.astype(np.float64)])
    lhs = 2 * np.log(np.power(21 * (gs - 1) / 16, 2.0 / 3.0) - 3)
    rhs = (4.0 / 3.0) * np.log(gs)
    margin = 1e-9 * np.maximum(1.0, np.abs(lhs) + np.abs(rhs))
    undecided = gs[np.abs(lhs - rhs) <= margin]
    failed = gs[lhs - rhs < -margin]
    bad = [int(g) for g in failed if not hurwitz_43_check(int(g))]
    for g in undecided:
        if not hurwitz_43_check(int(g)):
            bad.append(int(g))
    return sorted(bad)


# ---------------------------------------------------------------------------
# Constants and systolic-ratio corollaries
# ---------------------------------------------------------------------------


def explicit_constant(ctx: GeometryContext, prec: int = 64) -> RatInterval:
    """The bracketed constant of the surface bound: log(2^(3d-5) * nu * lambda / pi).

    nu/pi is rational, so this is the log of an exact rational.
    """
    value = Fraction(2) ** (3 * ctx.degree - 5) * ctx.covolume_pi * ctx.lambda_value
    return iv_log(value, prec)


def r_invariant(ctx: GeometryContext):
    """R = 8^d * nu * lambda, reported as (rational coefficient of pi, enclosure)."""
    coeff = Fraction(8) ** ctx.degree * ctx.covolume_pi * ctx.lambda_value
    from .intervals import iv_pi

    return coeff, iv_pi(64) * coeff


def fuchsian_sr_bound(ctx: GeometryContext, genus: int, prec: int = 64):
    """(4/(9*pi)) * (log g - c)^2 / g with the explicit constant c."""
    from .intervals import iv_pi

    c = explicit_constant(ctx, prec)
    diff = iv_log(Fraction(genus), prec) - c
    if not diff.certainly_gt(0):
        return None
    return diff * diff * Fraction(4, 9 * genus) / iv_pi(prec)


def v3_enclosure(prec: int = 96) -> RatInterval:
    """Volume of the regular ideal 3-simplex: (3/2) * Im Li_2(e^(2*pi*i/3))."""
    from .intervals import _raw_to_frac

    mp.prec = prec + 24
    val = im(polylog(2, mp.e ** (2j * mp.pi / 3))) * mpf(3) / 2
    center = _raw_to_frac(val._mpf_)
    pad = Fraction(1, 2 ** prec)
    return RatInterval(center - pad, center + pad)


@dataclass
class KleinianReport:
    norm_i: int
    lambda_value: Fraction
    base_simplicial_volume: Fraction
    cover_volume_bound: Fraction
    trace_floor_coarse: Fraction
    sys_floor: RatInterval | None
    sr_floor: RatInterval | None
    torsion_free_base_asserted: bool

    def lines(self):
        out = [f"norm={self.norm_i}", f"lambda={self.lambda_value}",
               f"base_volume={self.base_simplicial_volume}",
               f"cover_volume_bound={self.cover_volume_bound}",
               f"trace_floor={float(self.trace_floor_coarse):.6g}"]
        if self.sys_floor is not None:
            out.append(f"sys_floor=[{float(self.sys_floor.lo):.6g},{float(self.sys_floor.hi):.6g}]")
        else:
            out.append("sys_floor=vacuous")
        if self.sr_floor is not None:
            out.append(f"sr_floor=[{float(self.sr_floor.lo):.6g},{float(self.sr_floor.hi):.6g}]")
        out.append(f"torsion_free_base={str(self.torsion_free_base_asserted).lower()}")
        return out


def kleinian_bounds(d: int, norm_i: int, lambda_value, base_simplicial_volume,
                    torsion_free_base: bool, norm_two_plus_kappa: int | None = None,
                    prec: int = 64) -> KleinianReport:
    """Plug-in evaluators for the 3-manifold tower; all inputs supplied by the caller.

    The cover volume obeys ||X_I|| <= ||X_1|| * lambda * Norm(I)^3, and the
    systole floor is the explicit chain 2*log(Norm(I)/2^(d-2) - 3); the
    systolic-ratio floor uses C1 = (8/27)/v3.
    """
    if not torsion_free_base:
        raise InputError("the base manifold must be torsion-free (certificate or assertion)")
    lam = Fraction(lambda_value)
    base_vol = Fraction(base_simplicial_volume)
    if base_vol <= 0:
        raise InputError("simplicial volume of the base must be positive")
    cover_bound = base_vol * lam * Fraction(norm_i) ** 3
    _sharp, coarse = kleinian_trace_bounds(d, norm_i, norm_two_plus_kappa, prec)
    sys_floor = None
    if coarse - 1 > 1:
        sys_floor = iv_log(coarse - 1, prec) * 2
    sr_floor = None
    if sys_floor is not None and sys_floor.certainly_gt(0):
        v3 = v3_enclosure(prec)
        sr_floor = (sys_floor ** 3) / (RatInterval.exact(cover_bound) * v3) \
            * Fraction(1, 1)
        # SR = sys^3 / vol, vol = ||X|| * v3 <= cover_bound * v3
    return KleinianReport(norm_i, lam, base_vol, cover_bound, coarse,
                          sys_floor, sr_floor, torsion_free_base)


def kleinian_sr_constant(prec: int = 96) -> RatInterval:
    """C1 = (8/27) / v3."""
    return RatInterval.exact(Fraction(8, 27)) / v3_enclosure(prec)


def asymptotic_strings(ctx: GeometryContext) -> list:
    """Display-only companions of the computed chains, clearly labelled."""
    d = ctx.degree
    c = explicit_constant(ctx)
    return [
        f"asymptotic_surface_form=sys >= (4/3)(log g - ({float(c.mid):.6f} + o(1)))",
        f"asymptotic_constant_c=log(2^{3 * d - 5} * nu * lambda / pi)",
        "asymptotic_sr_form=SR >= (4/(9*pi)) (log g - c)^2 / g",
    ]
