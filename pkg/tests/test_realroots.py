import random
from fractions import Fraction

import pytest
import sympy

from quatsys.realroots import (isolate_real_roots, poly_eval, refine_root,
                               squarefree_part, sturm_chain, count_roots)

T = sympy.Symbol("t")


@pytest.mark.parametrize("coeffs", [
    [-1, -2, 1, 1],          # 2cos(2pi/7) family: three real roots
    [1, -3, 0, 1],           # 2cos(2pi/9) family
    [-2, 0, 1],              # sqrt(2)
    [2, 0, 1],               # no real roots
    [0, 1],                  # root at 0
    [-6, 11, -6, 1],         # 1, 2, 3
])
def test_isolation_matches_sympy(coeffs):
    mine = isolate_real_roots(coeffs)
    poly = sympy.Poly(list(reversed(coeffs)), T)
    ref = sorted(float(r) for r in sympy.real_roots(poly))
    assert len(mine) == len(ref)
    for (lo, hi), r in zip(mine, ref):
        assert float(lo) < r < float(hi) or abs(float(lo) - r) < 1e-12


def test_isolating_intervals_are_disjoint_and_refinable():
    coeffs = [-1, -2, 1, 1]
    sqf = squarefree_part(coeffs)
    ivs = isolate_real_roots(coeffs)
    for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
        assert b1 <= a2
    for lo, hi in ivs:
        rlo, rhi = refine_root(sqf, lo, hi, Fraction(1, 2 ** 100))
        assert rhi - rlo <= Fraction(1, 2 ** 100)
        assert poly_eval(sqf, rlo) * poly_eval(sqf, rhi) < 0


def test_squarefree_part_strips_multiplicity():
    # (t-1)^2 (t+2)
    coeffs = [2, -3, 0, 1]
    sqf = squarefree_part(coeffs)
    assert len(sqf) == 3
    assert poly_eval(sqf, Fraction(1)) == 0
    assert poly_eval(sqf, Fraction(-2)) == 0


def test_sturm_count_random_cubics():
    rng = random.Random(20240811)
    for _ in range(25):
        roots = sorted(rng.sample(range(-12, 13), 3))
        # monic cubic with known integer roots
        a, b, c = roots
        coeffs = [-a * b * c, a * b + a * c + b * c, -(a + b + c), 1]
        sqf = squarefree_part(coeffs)
        chain = sturm_chain(sqf)
        n = count_roots(chain, Fraction(-100), Fraction(100))
        assert n == len(set(roots))
        found = isolate_real_roots(coeffs)
        assert len(found) == len(set(roots))
        for (lo, hi), r in zip(found, sorted(set(roots))):
            assert lo < r < hi or poly_eval(sqf, Fraction(r)) == 0
