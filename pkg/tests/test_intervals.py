import math
from fractions import Fraction

import pytest

from quatsys.errors import PrecisionError
from quatsys.intervals import (RatInterval, certified_compare, interval_solve,
                               iv_acosh, iv_cosh, iv_exp, iv_log, iv_pi, iv_pow,
                               iv_sqrt)


def test_exact_ring_ops():
    a = RatInterval(Fraction(1, 3), Fraction(1, 2))
    b = RatInterval(Fraction(-2), Fraction(5))
    s = a + b
    assert s.lo == Fraction(1, 3) - 2 and s.hi == Fraction(1, 2) + 5
    p = a * b
    assert p.lo == Fraction(-1)  # 1/2 * -2
    assert p.hi == Fraction(5, 2)
    assert (a - a).contains_zero()
    assert (-a).hi == -a.lo


def test_power_and_abs():
    x = RatInterval(-3, 2)
    assert (x ** 2).lo == 0 and (x ** 2).hi == 9
    assert x.abs().lo == 0 and x.abs().hi == 3
    y = RatInterval(-3, -1)
    assert (y ** 3).lo == -27 and (y ** 3).hi == -1


def test_division_rejects_zero_interval():
    with pytest.raises(ZeroDivisionError):
        RatInterval(1, 2) / RatInterval(-1, 1)


def test_certified_sign_and_compare():
    assert RatInterval(1, 2).sign() == 1
    assert RatInterval(-2, -1).sign() == -1
    assert RatInterval(0, 0).sign() == 0
    assert RatInterval(-1, 1).sign() is None
    assert RatInterval(1, 2).certainly_lt(3)
    assert not RatInterval(1, 2).certainly_lt(2)
    assert RatInterval(1, 2).certainly_le(2)


@pytest.mark.parametrize("fn,arg,ref", [
    (iv_log, Fraction(49, 16), math.log(49 / 16)),
    (iv_exp, Fraction(1, 3), math.exp(1 / 3)),
    (iv_sqrt, Fraction(2), math.sqrt(2)),
    (iv_cosh, Fraction(3), math.cosh(3)),
    (iv_acosh, Fraction(5, 2), math.acosh(2.5)),
])
def test_transcendental_enclosures(fn, arg, ref):
    box = fn(arg, 80)
    assert box.lo <= Fraction(ref) <= box.hi or abs(float(box.mid) - ref) < 1e-12
    assert float(box.width) < 1e-15


def test_pi_and_rational_power():
    assert float(iv_pi(80).mid) == pytest.approx(math.pi, abs=1e-15)
    box = iv_pow(Fraction(84), Fraction(2, 3), 80)
    assert float(box.mid) == pytest.approx(84 ** (2 / 3), rel=1e-12)


def test_interval_solve_recovers_exact_solution():
    mat = [[RatInterval.exact(2), RatInterval.exact(1)],
           [RatInterval.exact(1), RatInterval.exact(3)]]
    rhs = [RatInterval.exact(5), RatInterval.exact(10)]
    sol = interval_solve(mat, rhs)
    assert sol[0].lo == sol[0].hi == Fraction(1)
    assert sol[1].lo == sol[1].hi == Fraction(3)


def test_interval_solve_flags_singular():
    mat = [[RatInterval(-1, 1), RatInterval.exact(0)],
           [RatInterval.exact(0), RatInterval.exact(1)]]
    with pytest.raises(PrecisionError):
        interval_solve(mat, [RatInterval.exact(0), RatInterval.exact(0)])


def test_certified_compare_refines():
    # sqrt(2) vs 1.41421356: needs a few refinements to separate
    target = Fraction(141421356, 100000000)
    sign = certified_compare(lambda prec: iv_sqrt(Fraction(2), prec), target)
    assert sign == 1


def test_float_endpoints_are_outward():
    box = RatInterval(Fraction(1, 3), Fraction(2, 3))
    lo, hi = box.as_floats()
    assert Fraction(lo) <= Fraction(1, 3) and Fraction(hi) >= Fraction(2, 3)
