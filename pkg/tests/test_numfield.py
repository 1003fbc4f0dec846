import random
from fractions import Fraction

import pytest
import sympy

from quatsys.errors import InputError
from quatsys.numfield import (IdealHNF, NumberField, factor_ideal,
                              factor_rational_prime, primes_up_to_norm)

T = sympy.Symbol("t")


def _random_element(field, rng, spread=6, denom=1):
    return field.element([Fraction(rng.randrange(-spread, spread + 1), denom)
                          for _ in range(field.degree)])


def _random_ideal(field, rng):
    while True:
        gens = [_random_element(field, rng, 5) for _ in range(2)]
        gens = [g for g in gens if not g.is_zero()]
        if gens:
            return IdealHNF.from_generators(field, gens)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def test_constructor_rejects_bad_fields():
    with pytest.raises(InputError):
        NumberField([1, 0, -1])          # t^2 - 1 reducible
    with pytest.raises(InputError):
        NumberField([1, 0, 1])           # t^2 + 1 not totally real
    with pytest.raises(InputError):
        NumberField([2, 0, -1])          # not monic
    with pytest.raises(InputError):
        # the classic non-monogenic-at-2 cubic: disc = 4*503, index 2
        NumberField([1, -1, -2, -8])


def test_hurwitz_field_invariants(K):
    assert K.degree == 3
    assert K.disc == 49
    vals = [float(K.embedding_interval(s, 50).mid) for s in range(3)]
    assert vals == sorted(vals, reverse=True)
    assert vals[0] == pytest.approx(1.2469796037, abs=1e-9)
    assert vals[1] == pytest.approx(-0.4450418679, abs=1e-9)
    assert vals[2] == pytest.approx(-1.8019377358, abs=1e-9)


def test_rationals_degenerate_case(QQ):
    assert QQ.degree == 1
    x = QQ.from_rational(Fraction(22, 7))
    assert x.norm() == Fraction(22, 7)
    assert x.trace() == Fraction(22, 7)
    assert float(x.embed(0, 30).mid) == pytest.approx(22 / 7)


# ---------------------------------------------------------------------------
# element arithmetic
# ---------------------------------------------------------------------------


def test_known_norms_and_units(K):
    eta = K.gen()
    assert (K.from_rational(2) - eta).norm() == 7
    assert eta.norm() == 1
    assert K.one().norm() == 1
    assert (eta * (eta - 1) * (eta + 2)) == K.one()
    assert (K.from_rational(2) + eta).norm() == 1


def test_norm_trace_against_resultant_oracle(K):
    rng = random.Random(11)
    m = sympy.Poly([1, 1, -2, -1], T)
    for _ in range(40):
        x = _random_element(K, rng, 8)
        xpoly = sympy.Poly([int(c) for c in reversed(x.coords)] or [0], T)
        res = sympy.resultant(m, xpoly) if not x.is_zero() else 0
        assert x.norm() == Fraction(int(res))


def test_norm_multiplicative_trace_additive(K):
    rng = random.Random(5)
    for _ in range(60):
        x = _random_element(K, rng, 7, denom=rng.choice([1, 2, 3]))
        y = _random_element(K, rng, 7, denom=rng.choice([1, 2]))
        assert (x * y).norm() == x.norm() * y.norm()
        assert (x + y).trace() == x.trace() + y.trace()


def test_norm_equals_product_of_embeddings(K):
    rng = random.Random(17)
    for _ in range(20):
        x = _random_element(K, rng, 6)
        if x.is_zero():
            continue
        prod_lo, prod_hi = Fraction(1), Fraction(1)
        box = None
        for s in range(K.degree):
            e = x.embed(s, 70)
            box = e if box is None else box * e
        assert box.lo <= x.norm() <= box.hi


def test_inverse_and_division(K):
    rng = random.Random(23)
    for _ in range(30):
        x = _random_element(K, rng, 9, denom=rng.choice([1, 2, 5]))
        if x.is_zero():
            continue
        assert (x * x.inverse()) == K.one()
        y = _random_element(K, rng, 9)
        if not y.is_zero():
            assert ((x / y) * y) == x


def test_embedding_refinement(K):
    eta = K.gen()
    wide = eta.embed(0, 10)
    narrow = eta.embed(0, 120)
    assert narrow.width <= Fraction(1, 2 ** 120)
    assert wide.lo <= narrow.lo and narrow.hi <= wide.hi
    one = K.one().embed(2, 10)
    assert one.lo == one.hi == 1


# ---------------------------------------------------------------------------
# ideals
# ---------------------------------------------------------------------------


def test_norm_of_rational_multiples(K):
    for m in range(1, 21):
        ideal = IdealHNF.principal(K, K.from_rational(m))
        assert ideal.norm == m ** K.degree


def test_two_is_inert_with_f8_residue(K, P2):
    assert P2.norm == 8
    # O_K/<2> is a field iff every nonzero residue is invertible mod <2>
    field_like = all(
        (IdealHNF.principal(K, K.element(r)) + P2).is_whole_ring()
        for r in P2.residues() if any(r))
    assert field_like


def test_seven_totally_ramified(K, P7):
    assert P7.norm == 7
    assert P7 ** 3 == IdealHNF.principal(K, K.from_rational(7))
    fac = factor_rational_prime(K, 7)
    assert len(fac) == 1 and fac[0][1] == 3 and fac[0][2] == 1


def test_thirteen_splits_completely(K, P13s):
    assert [p.norm for p in P13s] == [13, 13, 13]
    assert len({p.mat for p in P13s}) == 3


def test_factorizations_recombine(K):
    for p in (2, 3, 5, 7, 11, 13, 29):
        fac = factor_rational_prime(K, p)
        assert sum(e * f for _pr, e, f in fac) == K.degree
        prod = K.whole_ring()
        for prime, e, _f in fac:
            prod = prod * prime ** e
            assert prime.contains(K.from_rational(p))
        assert prod == IdealHNF.principal(K, K.from_rational(p))


def test_dedekind_identity_random(K):
    rng = random.Random(31)
    for _ in range(15):
        i1 = _random_ideal(K, rng)
        i2 = _random_ideal(K, rng)
        assert (i1 + i2) * i1.intersect(i2) == i1 * i2
        assert (i1 * i2).norm == i1.norm * i2.norm


def test_fractional_inverse_identities(K, P7, P2):
    rng = random.Random(41)
    for ideal in [P7, P2, _random_ideal(K, rng), _random_ideal(K, rng)]:
        inv = ideal.inverse()
        assert (inv * ideal).is_whole_ring()
    half = P2.inverse()
    assert half.den == 2 and half.num.is_whole_ring()


def test_fractional_membership(K, P7):
    inv = P7.inverse()
    eta = K.gen()
    gen = (K.from_rational(2) - eta).inverse()
    assert inv.contains(gen)
    assert inv.contains(K.one())
    assert not inv.contains(gen * gen)


def test_divides_is_containment(K, P7, P2):
    assert P7.divides(P7 * P2)
    assert P2.divides(P7 * P2)
    assert not (P7 * P7).divides(P7)
    assert (P7 * P7).divides(P7 ** 3)


def test_factor_ideal_composite(K, P7, P2, P13s):
    ideal = P7 * P2 * P13s[0]
    fac = dict((pr.mat, v) for pr, v in factor_ideal(K, ideal))
    assert fac[P7.mat] == 1 and fac[P2.mat] == 1 and fac[P13s[0].mat] == 1
    ideal2 = P7 ** 2 * P2
    fac2 = dict((pr.mat, v) for pr, v in factor_ideal(K, ideal2))
    assert fac2[P7.mat] == 2


def test_primes_up_to_norm(K):
    norms = [p.norm for p in primes_up_to_norm(K, 50)]
    assert norms == [7, 8, 13, 13, 13, 27, 29, 29, 29, 41, 41, 41, 43, 43, 43]


def test_zero_ideal_rejected(K):
    with pytest.raises(InputError):
        IdealHNF.from_generators(K, [K.zero()])
    with pytest.raises(InputError):
        IdealHNF.from_generators(K, [K.gen() / 2])  # not integral


def test_printing_formats(K, P7):
    eta = K.gen()
    x = (eta + 1) / 2
    assert str(x) == "(1/2, 1/2, 0)"
    assert str(P7).count(";") == 2
