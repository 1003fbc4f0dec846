import math
from fractions import Fraction

import pytest

from quatsys.bounds import hurwitz_context, trace_lower_bound
from quatsys.errors import CapExceeded
from quatsys.geodesics import (RadiusSchedule, box_bounds, enumerate_gamma,
                               systole_search)


@pytest.fixture(scope="module")
def run7(QH, P7):
    cands, visited = enumerate_gamma(QH, P7, 5.5)
    return cands, visited


def test_minimum_matches_published_value(run7):
    cands, _ = run7
    hyper = [c for c in cands if not c.is_elliptic]
    assert hyper
    best = hyper[0]
    assert abs(float(best.length.mid) - 3.936) < 1e-3
    assert best.trace.coords == (Fraction(2), Fraction(3), Fraction(1))


def test_all_emitted_are_exact_members(run7, QH, P7, D):
    cands, _ = run7
    one = D.one()
    cong = QH.congruence_lattice(P7)
    for c in cands:
        x = c.element
        assert x.reduced_norm() == D.field.one()
        assert cong.contains(x - one)
        assert not x.is_central()


def test_trace_floor_soundness(run7, P7):
    ctx = hurwitz_context()
    floor = trace_lower_bound(ctx, P7, sharp=False)
    for c in run7[0]:
        box = c.trace.embed(0, 80).abs()
        assert box.certainly_gt(floor)


def test_conjugate_coefficient_bound(run7):
    # |sigma(x0)| < 1 at both non-distinguished places, strictly
    for c in run7[0]:
        x0 = c.element.coords[0]
        for s in (1, 2):
            assert x0.embed(s, 80).abs().certainly_lt(1)


def test_first_coefficient_identity(run7, D):
    # 2*y0 = -N(x - 1) with y0 = x0 - 1, exactly
    K = D.field
    one = D.one()
    for c in run7[0]:
        x = c.element
        y0 = x.coords[0] - K.one()
        assert y0 * 2 == -((x - one).reduced_norm())


def test_whereisy_membership(run7, QH, P7, K):
    from quatsys.numfield import IdealHNF

    two = IdealHNF.principal(K, K.from_rational(2))
    kap = IdealHNF.principal(K, QH.kappa_element())
    target = (two + kap * P7).inverse() * (P7 * P7)
    for c in run7[0]:
        y0 = c.element.coords[0] - K.one()
        assert target.contains(y0)


def test_trace_symmetry_and_dedup(run7):
    # classes are keyed by |trace|: the stored representative has the
    # lexicographically larger sign, and x, -x, x^-1 collapse together
    seen = set()
    for c in run7[0]:
        key = max(c.trace.coords, tuple(-t for t in c.trace.coords))
        assert key == c.trace.coords
        assert key not in seen
        seen.add(key)


def test_monotone_in_radius(QH, P7):
    small, _ = enumerate_gamma(QH, P7, 4.6)
    large, _ = enumerate_gamma(QH, P7, 5.5)
    small_keys = {c.trace.coords for c in small}
    large_keys = {c.trace.coords for c in large}
    assert small_keys <= large_keys


def test_empty_at_tiny_radius(QH, P7):
    cands, _ = enumerate_gamma(QH, P7, 1.0)
    assert cands == []


def test_box_bounds_contents(QH, P7):
    boxes = box_bounds(QH, P7, 4.0)
    x0 = set(boxes[0])
    # 0, +-1/2, +-1 (scaled coordinates with kappa = 2)
    for pt in [(0, 0, 0), (1, 0, 0), (-1, 0, 0), (2, 0, 0), (-2, 0, 0)]:
        assert pt in x0
    smaller = box_bounds(QH, P7, 3.0)
    for l in range(4):
        assert set(smaller[l]) <= set(boxes[l])


def test_parallel_matches_serial(QH, P7):
    serial, v1 = enumerate_gamma(QH, P7, 5.0, jobs=1)
    parallel, v2 = enumerate_gamma(QH, P7, 5.0, jobs=2)
    assert v1 == v2
    assert [c.trace.coords for c in serial] == [c.trace.coords for c in parallel]


def test_systole_search_stabilizes(QH, P7):
    result = systole_search(QH, P7, RadiusSchedule(4.5, 1.0, 9.0))
    assert result.mode == "stabilized"
    assert abs(float(result.min_length.mid) - 3.936) < 1e-3


def test_certificate_mode_formula(QH, P7):
    # a (mathematically unjustified) tiny diameter flips the result to
    # certified as soon as cosh(L/2) >= cosh(best/2) * cosh(diam)
    result = systole_search(QH, P7, RadiusSchedule(4.5, 1.0, 9.0), diameter_bound=0.3)
    assert result.mode == "certified"
    need = math.cosh(float(result.min_length.hi) / 2) * math.cosh(0.3)
    assert math.cosh(result.radius / 2) >= need


def test_schedule_exhaustion_raises(QH, P7):
    with pytest.raises(CapExceeded):
        systole_search(QH, P7, RadiusSchedule(1.0, 0.5, 2.0))


def test_orbifold_elliptic_alarms(QH, K):
    cands, _ = enumerate_gamma(QH, K.whole_ring(), 2.0)
    elliptic = [c for c in cands if c.is_elliptic]
    assert elliptic, "the full norm-one group contains torsion"
    for c in elliptic:
        assert c.trace.embed(0, 80).abs().certainly_lt(2)
    traces = sorted(c.abs_trace for c in elliptic)
    # the (2,3,7) torsion traces: 0, 1 and |2cos(k pi/7)|
    for val in traces:
        assert min(abs(val - r) for r in
                   (0.0, 1.0, 0.4450418679, 1.2469796037, 1.8019377358)) < 1e-9


def test_node_cap(QH, P7):
    with pytest.raises(CapExceeded):
        enumerate_gamma(QH, P7, 6.0, cap_nodes=100)
