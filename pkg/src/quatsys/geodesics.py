"""Exact enumeration of short congruence-group elements at the split place.

The group elements x = x0 + x1 i + x2 j + x3 ij live on the coset
1 + I*Q of an integer lattice; under the split embedding

    i |-> diag(sqrt(a), -sqrt(a)),  j |-> [[0, 1], [b, 0]],

the displacement of the basepoint i in the upper half plane satisfies
cosh d(i, x.i) = ||x||_F^2 / 2, so elements displacing the basepoint by at
most L live in a compact box: the split place bounds the four matrix
entries by sqrt(2 cosh L), and at every other real place all four
coefficients are pinned to the unit ball of the norm form (the completion
is a division algebra there).

Enumeration walks the coset lattice in Hermite normal form, coordinate by
coordinate in the order x0, x1, x2, x3, pruning each block against its
certified box.  The final coefficient is never enumerated: the norm-one
equation determines x3^2 exactly, and a certified interval square root
either recovers x3 in the field or proves there is none.  Every emitted
element passes exact integer/rational checks (norm one, congruence, not
central); the radius cut itself is decided by refinable interval
arithmetic, which terminates because an algebraic squared norm can never
equal the transcendental 2 cosh L.

Completeness of the visited region is certified (outward rounding
everywhere, generous float slack backstopped by exact leaf checks);
completeness of the *geodesic spectrum* up to a given length additionally
needs a diameter bound for the quotient surface, which is the caller's to
supply: `systole_search` labels each result `certified` (diameter bound
given and satisfied) or `stabilized` (minimum unchanged across two radius
increments).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceeded, InputError, InvariantViolation, PrecisionError
from .intervals import RatInterval, interval_solve, iv_acosh, iv_cosh, iv_sqrt
from .numfield import FieldElement, IdealHNF
from .orders import OrderLattice
from .quatalg import QuatElement

_SLACK = 1e-7  # float pre-filter slack; exact checks gate every emission


@dataclass
class GeodesicCandidate:
    element: QuatElement
    trace: FieldElement
    abs_trace: float
    length: RatInterval | None        # None for non-hyperbolic (torsion alarm)
    displacement: RatInterval
    is_elliptic: bool

    def record(self):
        tr = f"({', '.join(str(c) for c in self.trace.coords)})"
        if self.length is not None:
            lo, hi = float(self.length.lo), float(self.length.hi)
            kind = f"length=[{lo:.6f},{hi:.6f}]"
        else:
            kind = "elliptic=true"
        return f"trace={tr} abs_trace={self.abs_trace:.6f} {kind}"


@dataclass
class EnumerationResult:
    ideal_hnf: str
    ideal_norm: int
    radius: float
    min_trace: FieldElement | None
    min_length: RatInterval | None
    distinct_traces: int
    elliptic_count: int
    visited: int
    mode: str                          # certified | stabilized | searching
    candidates: list

    def records(self):
        out = [f"ideal={self.ideal_hnf}", f"norm={self.ideal_norm}",
               f"radius={self.radius:g}"]
        if self.min_trace is not None:
            out.append(f"min_trace=({', '.join(str(c) for c in self.min_trace.coords)})")
        if self.min_length is not None:
            out.append(f"min_length=[{float(self.min_length.lo):.6f},"
                       f"{float(self.min_length.hi):.6f}]")
        out += [f"mode={self.mode}", f"visited={self.visited}",
                f"distinct_traces={self.distinct_traces}",
                f"elliptic={self.elliptic_count}"]
        return out


class Enumerator:
    """Reusable exact enumerator for one (order, ideal) pair."""

    def __init__(self, order: OrderLattice, ideal: IdealHNF, bits: int = 60):
        algebra = order.algebra
        field = algebra.field
        if not algebra.is_cocompact_presentation():
            raise InputError("need the algebra split at place 0 and ramified elsewhere")
        self.order = order
        self.ideal = ideal
        self.algebra = algebra
        self.field = field
        self.bits = bits
        d = field.degree
        self.d = d
        self.dim = 4 * d
        self.kappa = order.kappa

        cong = order.congruence_lattice(ideal)
        self.hnf = [list(r) for r in cong.mat]
        one = [0] * self.dim
        one[0] = self.kappa
        self.offset = one

        # certified embedding data
        self.theta = [field.embedding_interval(s, bits) for s in range(d)]
        self.emb = [[self.theta[s] ** m for m in range(d)] for s in range(d)]
        self.a_emb = [algebra.a.embed(s, bits) for s in range(d)]
        self.b_emb = [algebra.b.embed(s, bits) for s in range(d)]
        for s in range(1, d):
            if not (self.a_emb[s].certainly_lt(0) and self.b_emb[s].certainly_lt(0)):
                raise InputError("structure constants must be negative at places >= 1")
        self.sqrt_a0 = iv_sqrt(self.a_emb[0], bits)
        # float mid tables for fast pruning
        self.emb_f = [[float(self.emb[s][m].mid) for m in range(d)] for s in range(d)]
        self.a_f = [float(x.mid) for x in self.a_emb]
        self.b_f = [float(x.mid) for x in self.b_emb]
        self.sqrt_a0_f = float(self.sqrt_a0.mid)

    # -- radius-dependent boxes ---------------------------------------------

    def _boxes(self, radius):
        """Certified per-coefficient embedding bounds B[l][s] (Fractions, outer)."""
        # the exact binary value of the radius is the radius; box and emission
        # cut use the same enclosure, so the visited set is well defined
        t_encl = iv_cosh(Fraction(radius), self.bits) * 2
        m_sq = t_encl.hi                      # upper bound for 2 cosh L
        m_val = iv_sqrt(RatInterval.exact(m_sq), self.bits).hi
        half_m2 = iv_sqrt(RatInterval.exact(m_sq / 2), self.bits).hi
        a0 = self.a_emb[0]
        b0 = self.b_emb[0]
        inv_sqrt_a0 = (RatInterval.exact(1) / self.sqrt_a0).hi
        # |x2|, |x3| from v^2 + w^2 <= 2 cosh L via Cauchy-Schwarz
        one_plus = RatInterval.exact(1) + RatInterval.exact(1) / (b0 * b0)
        vw = iv_sqrt(RatInterval.exact(m_sq) * one_plus, self.bits).hi / 2
        boxes = []
        for l in range(4):
            row = []
            for s in range(self.d):
                if s == 0:
                    if l == 0:
                        row.append(half_m2)
                    elif l == 1:
                        row.append(half_m2 * inv_sqrt_a0)
                    elif l == 2:
                        row.append(vw)
                    else:
                        row.append(vw * inv_sqrt_a0)
                else:
                    a_s = self.a_emb[s].abs()
                    b_s = self.b_emb[s].abs()
                    if l == 0:
                        row.append(Fraction(1))
                    elif l == 1:
                        row.append((RatInterval.exact(1) / iv_sqrt(a_s, self.bits)).hi)
                    elif l == 2:
                        row.append((RatInterval.exact(1) / iv_sqrt(b_s, self.bits)).hi)
                    else:
                        row.append((RatInterval.exact(1) /
                                    iv_sqrt(a_s * b_s, self.bits)).hi)
            boxes.append(row)
        return boxes, m_sq, m_val

    def _coord_bounds(self, boxes):
        """|c_j| bounds from the inverse embedding matrix (certified outer)."""
        cols = []
        for k in range(self.d):
            unit = [RatInterval.exact(1 if s == k else 0) for s in range(self.d)]
            cols.append(interval_solve([row[:] for row in self.emb], unit))
        # cols[k][m] encloses (E^-1)[m][k]
        bounds = []
        for l in range(4):
            for m in range(self.d):
                total = Fraction(0)
                for s in range(self.d):
                    mag = max(abs(cols[s][m].lo), abs(cols[s][m].hi))
                    total += mag * boxes[l][s] * self.kappa
                bounds.append(total)
        return bounds

    # -- main run --------------------------------------------------------------

    def run(self, radius, cap_nodes: int = 30_000_000, top_range=None):
        """All congruence elements with ||gamma||_F^2 <= 2 cosh(radius).

        Returns (candidates keyed by |trace|, visited node count).
        """
        boxes, m_sq, m_val = self._boxes(radius)
        coord_bound = self._coord_bounds(boxes)
        d, dim, kappa = self.d, self.dim, self.kappa
        hnf = self.hnf
        offset = self.offset
        emb_f = self.emb_f
        a_f, b_f = self.a_f, self.b_f
        mf = float(m_val) * (1 + 1e-12) + 1e-12
        box_f = [[float(boxes[l][s]) * (1 + _SLACK) + 1e-12 for s in range(d)]
                 for l in range(4)]
        t_hi_f = float(m_sq)

        self._m_sq = m_sq
        found = {}
        visited = 0
        c_vals = [0] * dim

        def block_values(c, l):
            base = l * d
            vals = []
            for s in range(d):
                acc = 0.0
                row = emb_f[s]
                for m in range(d):
                    acc += c[base + m] * row[m]
                vals.append(acc / kappa)
            return vals

        x_places = [None] * 3  # float embedding rows for blocks 0..2

        def descend(j, partial_vec):
            nonlocal visited
            if visited > cap_nodes:
                raise CapExceeded(f"enumeration exceeded {cap_nodes} nodes")
            if j == 3 * d:
                self._leaf(c_vals, x_places, partial_vec, boxes, found, m_sq, mf)
                return
            h = hnf[j][j]
            cb = coord_bound[j]
            p = partial_vec[j]
            lo = math.ceil((float(-cb) - p) / h - 1e-9)
            hi = math.floor((float(cb) - p) / h + 1e-9)
            rng = range(lo, hi + 1)
            if j == 0 and self._top_range is not None:
                rng = [n for n in rng if self._top_range[0] <= n < self._top_range[1]]
            for n in rng:
                visited += 1
                new_partial = [pv + n * hv for pv, hv in zip(partial_vec, hnf[j])] \
                    if n else list(partial_vec)
                c_vals[j] = new_partial[j]
                if (j + 1) % d == 0:
                    l = j // d
                    vals = block_values(new_partial, l)
                    if any(abs(vals[s]) > box_f[l][s] for s in range(d)):
                        continue
                    x_places[l] = vals
                    # joint split-place filters once a block pair is known
                    if l == 1:
                        u = x_places[0][0] + x_places[1][0] * self.sqrt_a0_f
                        ub = x_places[0][0] - x_places[1][0] * self.sqrt_a0_f
                        if abs(u) > mf or abs(ub) > mf:
                            continue
                        bad = False
                        for s in range(1, d):
                            if (x_places[0][s] ** 2 + abs(a_f[s]) * x_places[1][s] ** 2
                                    > 1 + _SLACK):
                                bad = True
                                break
                        if bad:
                            continue
                        if abs(u * ub - 1) > t_hi_f * (1 + _SLACK):
                            # |v*w| = |u*ub - 1| <= M^2 is forced by the norm equation
                            continue
                descend(j + 1, new_partial)

        self._top_range = top_range
        descend(0, list(offset))
        return found, visited

    # -- leaf: solve the last coefficient exactly -------------------------------

    def _leaf(self, c_vals, x_places, partial_vec, boxes, found, m_sq, mf):
        d, kappa = self.d, self.kappa
        a_f, b_f = self.a_f, self.b_f
        # float feasibility of x3^2 = (1 - x0^2 + a x1^2 + b x2^2) / (a b)
        v_f = []
        for s in range(d):
            x0, x1, x2 = x_places[0][s], x_places[1][s], x_places[2][s]
            v_f.append((1 - x0 * x0 + a_f[s] * x1 * x1 + b_f[s] * x2 * x2)
                       / (a_f[s] * b_f[s]))
        if any(v < -_SLACK for v in v_f):
            return
        if v_f[0] > float(boxes[3][0]) ** 2 * (1 + _SLACK) + _SLACK:
            return
        kf = self.field
        inv_k = Fraction(1, kappa)
        x0e = kf.element([c * inv_k for c in c_vals[0:d]])
        x1e = kf.element([c * inv_k for c in c_vals[d:2 * d]])
        x2e = kf.element([c * inv_k for c in c_vals[2 * d:3 * d]])
        a, b = self.algebra.a, self.algebra.b
        v_elem = (kf.one() - x0e * x0e + a * (x1e * x1e) + b * (x2e * x2e)) / (a * b)
        for x3e in self._field_sqrt(v_elem):
            target = [_int_or_none(c * kappa) for c in x3e.coords]
            if any(t is None for t in target):
                continue
            if not self._congruence_tail(partial_vec, target):
                continue
            x = QuatElement(self.algebra, (x0e, x1e, x2e, x3e))
            if x.reduced_norm() != kf.one():
                raise InvariantViolation("norm-one identity failed at an exact leaf")
            if x.is_central():
                continue  # +-1 are the only central norm-one elements on the coset
            self._emit(x, found, m_sq)

    def _congruence_tail(self, partial_vec, target) -> bool:
        d = self.d
        res = [t - p for t, p in zip(target, partial_vec[3 * d:])]
        rows = [row[3 * d:] for row in self.hnf[3 * d:]]
        for k in range(d):
            if res[k] % rows[k][k]:
                return False
            q = res[k] // rows[k][k]
            if q:
                res = [r - q * v for r, v in zip(res, rows[k])]
        return not any(res)

    def _field_sqrt(self, v: FieldElement):
        """The square roots of v in K (possibly none), certified then verified."""
        if v.is_zero():
            return [self.field.zero()]
        import itertools

        bits = self.bits
        for _ in range(4):
            boxes = [v.embed(s, bits) for s in range(self.d)]
            if any(b.certainly_lt(0) for b in boxes):
                return []
            roots = []
            for s in range(self.d):
                box = boxes[s]
                lo = box.lo if box.lo > 0 else Fraction(0)
                roots.append(iv_sqrt(RatInterval(lo, box.hi), bits)
                             if box.hi > 0 else RatInterval.exact(0))
            ok = True
            out = {}
            for signs in itertools.product((1, -1), repeat=self.d):
                rhs = [roots[s] * signs[s] for s in range(self.d)]
                try:
                    coords = interval_solve([row[:] for row in self.emb], rhs)
                except PrecisionError:
                    ok = False
                    break
                cand = []
                feasible = True
                for box in coords:
                    scaled = box * self.kappa
                    klo = math.ceil(scaled.lo)
                    khi = math.floor(scaled.hi)
                    if klo > khi:
                        feasible = False
                        break
                    if klo < khi:
                        ok = False
                        feasible = False
                        break
                    cand.append(Fraction(klo, self.kappa))
                if not feasible:
                    if not ok:
                        break
                    continue
                elem = self.field.element(cand)
                if elem * elem == v:
                    out[elem.coords] = elem
            if ok:
                return list(out.values())
            bits *= 2
        raise PrecisionError("field square root undecided at maximal refinement")

    def _emit(self, x: QuatElement, found, m_sq):
        fr = self._frob_sq(x)
        bits = self.bits
        while not (fr.certainly_le(m_sq) or fr.certainly_gt(m_sq)):
            bits *= 2
            if bits > 4096:
                raise PrecisionError("radius cut undecided; increase precision")
            fr = self._frob_sq(x, bits)
        if fr.certainly_gt(m_sq):
            return
        trace = x.reduced_trace()
        key = max(trace.coords, tuple(-c for c in trace.coords))
        disp = iv_acosh(fr / 2, self.bits) if fr.certainly_gt(2) else RatInterval.exact(0)
        tr_box = trace.embed(0, self.bits).abs()
        elliptic = tr_box.certainly_lt(2)
        if not elliptic and not tr_box.certainly_gt(2):
            if trace.is_rational() and abs(trace.coords[0]) == 2:
                raise InvariantViolation(f"parabolic element {x} in a cocompact group")
            tr_box = trace.embed(0, 4 * self.bits).abs()
            elliptic = tr_box.certainly_lt(2)
        length = None
        if not elliptic:
            length = iv_acosh(tr_box / 2, self.bits) * 2
        cand = GeodesicCandidate(
            element=x,
            trace=trace if key == trace.coords else -trace,
            abs_trace=float(tr_box.mid),
            length=length,
            displacement=disp,
            is_elliptic=elliptic,
        )
        prev = found.get(key)
        if prev is None or disp.mid < prev.displacement.mid:
            found[key] = cand

    def _frob_sq(self, x: QuatElement, bits: int | None = None) -> RatInterval:
        bits = bits or self.bits
        x0 = x.coords[0].embed(0, bits)
        x1 = x.coords[1].embed(0, bits)
        x2 = x.coords[2].embed(0, bits)
        x3 = x.coords[3].embed(0, bits)
        ra = iv_sqrt(self.algebra.a.embed(0, bits), bits)
        b0 = self.algebra.b.embed(0, bits)
        u = x0 + x1 * ra
        ub = x0 - x1 * ra
        v = x2 + x3 * ra
        w = b0 * (x2 - x3 * ra)
        return u * u + ub * ub + v * v + w * w


def _int_or_none(f: Fraction):
    return int(f) if f.denominator == 1 else None


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def box_bounds(order: OrderLattice, ideal: IdealHNF, radius, bits: int = 60):
    """Per-coefficient admissible lattice points (scaled integer coordinates).

    Congruence is not applied here; these are the embedding boxes that the
    joint enumeration refines.  Monotone in the radius.
    """
    enum = Enumerator(order, ideal, bits)
    boxes, _m_sq, _m = enum._boxes(radius)
    coord_bound = enum._coord_bounds(boxes)
    d = enum.d
    out = []
    for l in range(4):
        pts = []
        ranges = [range(-math.floor(float(coord_bound[l * d + m])),
                        math.floor(float(coord_bound[l * d + m])) + 1)
                  for m in range(d)]
        import itertools

        for tup in itertools.product(*ranges):
            elem = order.algebra.field.element([Fraction(c, order.kappa) for c in tup])
            if _inside_box(enum, elem, [boxes[l][s] for s in range(d)]):
                pts.append(tup)
        out.append(sorted(pts))
    return out


def _inside_box(enum, elem, bound):
    for s in range(enum.d):
        box = elem.embed(s, enum.bits).abs()
        limit = Fraction(bound[s])
        if box.certainly_le(limit):
            continue
        if box.certainly_gt(limit):
            return False
        # undecided: exact tie is only possible for rational embeddings
        if elem.is_rational():
            if abs(elem.coords[0]) <= limit:
                continue
            return False
        box = elem.embed(s, enum.bits * 8).abs()
        if not box.certainly_le(limit):
            return False
    return True


def enumerate_gamma(order: OrderLattice, ideal: IdealHNF, radius,
                    cap_nodes: int = 30_000_000, bits: int = 60, jobs: int = 1):
    """Sorted GeodesicCandidate list for the given displacement radius."""
    enum = Enumerator(order, ideal, bits)
    if jobs > 1:
        found, visited = _parallel_run(enum, radius, cap_nodes, jobs)
    else:
        found, visited = enum.run(radius, cap_nodes)
    cands = sorted(found.values(), key=lambda c: (c.abs_trace, c.trace.coords))
    return cands, visited


def _parallel_run(enum: Enumerator, radius, cap_nodes, jobs):
    import multiprocessing as mp

    boxes, _m_sq, _m = enum._boxes(radius)
    coord_bound = enum._coord_bounds(boxes)
    h = enum.hnf[0][0]
    p = enum.offset[0]
    cb = coord_bound[0]
    lo0 = math.ceil((float(-cb) - p) / h - 1e-9)
    hi0 = math.floor((float(cb) - p) / h + 1e-9)
    n_chunks = max(jobs * 16, 1)
    width = max(1, (hi0 + 1 - lo0 + n_chunks - 1) // n_chunks)
    chunks = [(k, min(k + width, hi0 + 1)) for k in range(lo0, hi0 + 1, width)]
    # the work concentrates near the middle of the range; hand those out first
    mid = (lo0 + hi0) / 2
    chunks.sort(key=lambda ab: abs((ab[0] + ab[1]) / 2 - mid))
    ctx = mp.get_context("fork")
    global _WORK
    _WORK = (enum, radius, cap_nodes)
    try:
        with ctx.Pool(jobs) as pool:
            parts = pool.map(_run_chunk, chunks, chunksize=1)
    finally:
        _WORK = None
    found = {}
    visited = 0
    for part_found, part_visited in parts:
        visited += part_visited
        for key, cand in part_found.items():
            prev = found.get(key)
            if prev is None or cand.displacement.mid < prev.displacement.mid:
                found[key] = cand
    return found, visited


_WORK = None


def _run_chunk(chunk):
    enum, radius, cap_nodes = _WORK
    return enum.run(radius, cap_nodes, top_range=chunk)


@dataclass
class RadiusSchedule:
    start: float
    step: float
    stop: float

    @classmethod
    def parse(cls, text: str) -> "RadiusSchedule":
        try:
            a, b, c = (float(x) for x in text.split(":"))
        except ValueError as exc:
            raise InputError(f"bad radius schedule {text!r}; want L0:STEP:MAX") from exc
        if b <= 0 or c < a:
            raise InputError("radius schedule must increase")
        return cls(a, b, c)

    def radii(self):
        r = self.start
        while r <= self.stop + 1e-9:
            yield r
            r += self.step


def systole_search(order: OrderLattice, ideal: IdealHNF,
                   schedule: RadiusSchedule = RadiusSchedule(5.0, 1.0, 12.0),
                   diameter_bound: float | None = None,
                   cap_nodes: int = 30_000_000, bits: int = 60, jobs: int = 1,
                   trace_threshold: float | None = None,
                   progress=None) -> EnumerationResult:
    """Increasing-radius search until certified or stabilized.

    certified: a user diameter bound D for the quotient guarantees every
    geodesic of length <= current best has a conjugate displacing the
    basepoint by <= L, via cosh(L/2) >= cosh(best/2)*cosh(D).
    stabilized: the minimal |trace| survived two radius increments.

    `progress(result)` is invoked with the intermediate EnumerationResult
    after each radius (visited nodes, current minimum, mode so far).
    """
    best_key = None
    streak = 0
    last = None
    for radius in schedule.radii():
        cands, visited = enumerate_gamma(order, ideal, radius, cap_nodes, bits, jobs)
        hyper = [c for c in cands if not c.is_elliptic]
        elliptic = [c for c in cands if c.is_elliptic]
        min_cand = hyper[0] if hyper else None
        key = min_cand.trace.coords if min_cand else None
        mode = "searching"
        if key is not None:
            streak = streak + 1 if key == best_key else 0
            best_key = key
            if diameter_bound is not None:
                need = math.cosh(float(min_cand.length.hi) / 2) * math.cosh(diameter_bound)
                if math.cosh(radius / 2) >= need:
                    mode = "certified"
            if mode != "certified" and streak >= 2:
                mode = "stabilized"
        threshold = trace_threshold if trace_threshold is not None else math.inf
        last = EnumerationResult(
            ideal_hnf=str(ideal),
            ideal_norm=ideal.norm,
            radius=radius,
            min_trace=min_cand.trace if min_cand else None,
            min_length=min_cand.length if min_cand else None,
            distinct_traces=sum(1 for c in hyper if c.abs_trace <= threshold),
            elliptic_count=len(elliptic),
            visited=visited,
            mode=mode,
            candidates=cands,
        )
        if progress is not None:
            progress(last)
        if mode in ("certified", "stabilized"):
            return last
    raise CapExceeded(f"radius schedule exhausted; best so far: "
                      f"{last.records() if last else 'nothing found'}")
