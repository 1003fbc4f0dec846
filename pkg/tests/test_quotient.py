import random
from fractions import Fraction

import pytest

from quatsys.errors import CapExceeded, InputError
from quatsys.numfield import factor_rational_prime
from quatsys.quotient import (FiniteQuotRing, count_norm_one_ideal, index_bound,
                              lambda_factor, lemma44_check, maxim_formula,
                              nonmaximal_local_primes, norm_one_envelope)


def test_cardinalities(QH, P7, P2):
    assert FiniteQuotRing(QH, P7, 1).cardinality == 7 ** 4
    assert FiniteQuotRing(QH, P2, 1).cardinality == 8 ** 4
    assert FiniteQuotRing(QH, P7, 2).cardinality == 49 ** 4


def test_cap_policy(QH, P7, P2):
    with pytest.raises(CapExceeded):
        FiniteQuotRing(QH, P7, 2, cap=10 ** 6)
    # the default cap of 1e7 admits the 49^4 ring and rejects the 64^4 one
    with pytest.raises(CapExceeded):
        FiniteQuotRing(QH, P2, 2)


def test_maxim_formula_values():
    assert maxim_formula(7, 1, False) == 336
    assert maxim_formula(8, 1, False) == 504
    assert maxim_formula(13, 1, False) == 2184
    assert maxim_formula(3, 1, True) == 36
    assert maxim_formula(2, 2, False) == 48
    assert maxim_formula(7, 2, False) == 115248


def test_headline_counts_match_formula(QH, P7, P2, P13s):
    for prime, expected in [(P7, 336), (P2, 504), (P13s[0], 2184),
                            (P13s[1], 2184), (P13s[2], 2184)]:
        ring = FiniteQuotRing(QH, prime, 1)
        units, norm_one = ring.count_units_and_norm_one()
        assert norm_one == expected
        assert norm_one == maxim_formula(ring.q, 1, False)
        q = ring.q
        assert units == (q ** 2 - 1) * (q ** 2 - q)  # GL_2 of the residue field


def test_prime_square_count(QH, P7):
    ring = FiniteQuotRing(QH, P7, 2)
    assert ring.count_norm_one() == maxim_formula(7, 2, False)


def test_crt_product(QH, P7, P2):
    assert count_norm_one_ideal(QH, P7 * P2) == 336 * 504


def test_norm_map_properties(QH, P7):
    ring = FiniteQuotRing(QH, P7, 1)
    rng = random.Random(2)
    assert ring.involution_well_defined_sample(rng)
    # surjectivity onto the central units in the maximal split case
    assert ring.norm_image_size() == 6


def test_ring_axioms_on_sampled_triples(QH, P7):
    import numpy as np

    ring = FiniteQuotRing(QH, P7, 1)
    rng = random.Random(8)
    all_res = np.concatenate(list(ring.residue_blocks()))
    idx = [rng.randrange(len(all_res)) for _ in range(3 * 40)]
    x, y, z = (all_res[idx[k::3]] for k in range(3))
    assert np.array_equal(ring.mul(ring.mul(x, y), z), ring.mul(x, ring.mul(y, z)))
    assert np.array_equal(ring.mul(x, ring.reduce(y + z)),
                          ring.reduce(ring.mul(x, y) + ring.mul(x, z)))
    one = np.repeat(ring.one[None, :], len(x), axis=0)
    assert np.array_equal(ring.mul(x, one), ring.reduce(x))
    # involution is an anti-automorphism on the quotient
    assert np.array_equal(ring.involution(ring.mul(x, y)),
                          ring.mul(ring.involution(y), ring.involution(x)))


def test_norm_map_multiplicative_exact(QH, P7):
    import numpy as np

    ring = FiniteQuotRing(QH, P7, 1)
    K = QH.algebra.field
    rng = random.Random(12)
    all_res = np.concatenate(list(ring.residue_blocks()))
    sel = rng.sample(range(len(all_res)), 40)
    x = all_res[sel]
    y = all_res[sel[::-1]]
    nx = ring.norm_map(x)
    ny = ring.norm_map(y)
    nxy = ring.norm_map(ring.mul(x, y))
    for a, b, c in zip(nx, ny, nxy):
        ea = K.element([int(v) for v in a])
        eb = K.element([int(v) for v in b])
        ec = K.element([int(v) for v in c])
        assert ring.ideal.reduce([int(t) for t in (ea * eb).coords]) == \
            [int(t) for t in ec.coords]


def test_radical_types(QH, O_std, P7, P2):
    assert FiniteQuotRing(QH, P7, 1).radical_and_type() == (1, "M2(F_q)")
    assert FiniteQuotRing(QH, P2, 1).radical_and_type() == (1, "M2(F_q)")
    assert FiniteQuotRing(O_std, P7, 1).radical_and_type() == (1, "M2(F_q)")
    # the standard order is not maximal at 2: big radical, field residue
    size, tag = FiniteQuotRing(O_std, P2, 1).radical_and_type()
    assert size == 8 ** 3 and tag == "F_q"


def test_radical_agreement_below_1e4(QH, O_std, P7, P2):
    r1 = FiniteQuotRing(QH, P7, 1)
    assert r1.radical() == r1.radical_unit_definition()
    r2 = FiniteQuotRing(O_std, P2, 1)
    assert r2.radical() == r2.radical_unit_definition()


def test_envelopes_hold(QH, O_std, P7, P2, P13s, D):
    from quatsys.quotient import unit_envelope

    cases = [(QH, P7, False, 0), (QH, P2, False, 1), (QH, P13s[0], False, 0),
             (O_std, P7, False, 0), (O_std, P2, False, 1)]
    for order, prime, division, e in cases:
        ring = FiniteQuotRing(order, prime, 1)
        units, norm_one = ring.count_units_and_norm_one()
        q = ring.q
        envelope = norm_one_envelope(q, 1, division, e if e else 0)
        assert Fraction(norm_one, q ** 3) <= envelope
        # unit envelope from the six-type classification; |GL_2(F_7)| = 2016
        # already exceeds the naive split value q^2 (q-1)^2 = 1764, while the
        # true supremum q^2 (q^2 - 1) covers every constructed ring
        assert units <= unit_envelope(q)


def test_norm_one_below_image_quotient(QH, P7, P2):
    for prime in (P7, P2):
        ring = FiniteQuotRing(QH, prime, 1)
        units, norm_one = ring.count_units_and_norm_one()
        assert norm_one <= units // ring.norm_image_size()


def test_squares_counts(QQ, K, P7):
    for p in (3, 5, 7):
        prime = factor_rational_prime(QQ, p)[0][0]
        for t in (1, 2, 3):
            rep = lemma44_check(prime, t)
            assert rep.matches and not rep.discrepancy
            assert rep.count == (p - 1) // 2 * p ** (t - 1)
    rep7 = lemma44_check(P7, 1)
    assert rep7.count == 3 and rep7.matches


def test_diadic_discrepancy_detected(QQ):
    two = factor_rational_prime(QQ, 2)[0][0]
    rep = lemma44_check(two, 3)
    assert rep.count == 1
    assert rep.formula_value == 2
    assert rep.equality_claimed and not rep.matches
    assert rep.discrepancy
    # below the equality threshold nothing is flagged
    rep2 = lemma44_check(two, 2)
    assert not rep2.discrepancy


def test_lambda_and_index_bound(D, QH, O_std, P7, P2, P13s):
    for ideal, cube in [(P7, 343), (P2, 512), (P13s[0], 2197)]:
        lam = lambda_factor(D, QH, ideal)
        assert lam.value == 1
        assert index_bound(D, QH, ideal) == cube
    # strict inequality of the counts against the cube
    assert 336 < 343 and 504 < 512 and 2184 < 2197
    # the standard order is non-maximal exactly at 2
    nm = nonmaximal_local_primes(O_std, QH, [P7, P2, P13s[0]])
    assert [p.norm for p in nm] == [8]
    lam_o = lambda_factor(D, O_std, P2, reference_maximal=QH)
    assert lam_o.value == 2 * 8  # factor 2 and the diadic 8^e with e=1
    with pytest.raises(InputError):
        lambda_factor(D, O_std, P2)  # maximality undecidable without a reference


def test_quotient_rejects_bad_t(QH, P7):
    with pytest.raises(InputError):
        FiniteQuotRing(QH, P7, 0)
