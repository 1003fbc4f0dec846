"""Totally real number fields, their integers, and ideal arithmetic.

A field K = Q(theta) is given by the monic integer minimal polynomial of
theta; elements are exact rational coordinate vectors over the power basis
1, theta, ..., theta^(d-1).  Construction certifies that the polynomial is
irreducible, totally real, and that Z[theta] is the full ring of integers
(via the Dedekind criterion at every prime whose square divides the
polynomial discriminant); fields failing any check are rejected, which
keeps "integral element" synonymous with "integer coordinates" everywhere
downstream.

Integral ideals are integer lattices in row Hermite normal form over the
power basis; fractional ideals are an integral numerator with a minimal
positive integer denominator.

Real embeddings are certified: each is an isolated root of the minimal
polynomial carrying an exact rational enclosure, refinable on demand.
Embeddings are indexed in decreasing root order; index 0 is the
distinguished one used for geometry.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_gcd

from . import lattice
from .errors import InputError, InvariantViolation
from .intervals import RatInterval
from .realroots import IsolatedRoot, isolate_real_roots, poly_eval_interval

Q0 = Fraction(0)
Q1 = Fraction(1)


class NumberField:
    """A totally real field Q(theta) with maximal power-basis order Z[theta]."""

    def __init__(self, coeffs_desc, name=None, class_number_one=False):
        coeffs = [int(c) for c in coeffs_desc]
        if len(coeffs) < 2:
            raise InputError("minimal polynomial must have degree >= 1")
        if coeffs[0] != 1:
            raise InputError("minimal polynomial must be monic")
        self.min_poly = list(reversed(coeffs))  # ascending
        self.degree = len(coeffs) - 1
        self.name = name or f"field-deg{self.degree}"
        self.class_number_one = bool(class_number_one)

        t = sympy.Symbol("t")
        poly = sympy.Poly(coeffs, t)
        if self.degree > 1 and not poly.is_irreducible:
            raise InputError("minimal polynomial is reducible over Q")
        self.disc = int(sympy.discriminant(poly)) if self.degree > 1 else 1

        roots = isolate_real_roots(self.min_poly)
        if len(roots) != self.degree:
            raise InputError(
                f"field is not totally real: {len(roots)} real roots, degree {self.degree}")
        self.roots = [IsolatedRoot(self.min_poly, lo, hi)
                      for lo, hi in sorted(roots, key=lambda ab: ab[0], reverse=True)]

        self._certify_power_basis_maximal()

        # theta^k for k = 0 .. 2d-2 as integer coordinate vectors
        d = self.degree
        self._pow = []
        vec = [0] * d
        vec[0] = 1
        for k in range(2 * d - 1):
            self._pow.append(list(vec))
            vec = self._shift_reduce(vec)

    def _shift_reduce(self, vec):
        d = self.degree
        out = [0] + vec[:-1]
        top = vec[-1]
        if top:
            for k in range(d):
                out[k] -= top * self.min_poly[k]
        return out

    def _certify_power_basis_maximal(self):
        """Dedekind criterion at every prime p with p^2 | disc(m)."""
        if self.degree == 1:
            return
        for p, e in sympy.factorint(abs(self.disc)).items():
            if e < 2:
                continue
            if not self._dedekind_ok(int(p)):
                raise InputError(
                    f"Z[theta] is not maximal at p={p}; only monogenic fields with "
                    f"polynomial discriminant equal to the field discriminant are supported")

    def _dedekind_ok(self, p: int) -> bool:
        mono = [ZZ(c) for c in reversed(self.min_poly)]
        _, factors = gf_factor(mono, p, ZZ)
        g_lift = [Fraction(1)]
        h_lift = [Fraction(1)]
        for fac, e in factors:
            fac_asc = [int(c) for c in reversed(fac)]
            g_lift = _poly_mul_q(g_lift, [Fraction(c) for c in fac_asc])
            for _ in range(e - 1):
                h_lift = _poly_mul_q(h_lift, [Fraction(c) for c in fac_asc])
        gh = _poly_mul_q(g_lift, h_lift)
        m_asc = [Fraction(c) for c in self.min_poly]
        diff = [a - b for a, b in zip(_pad(gh, len(m_asc)), m_asc)]
        big_f = [int(c) // p for c in diff]  # all entries divisible by p by construction
        fbar = _to_gf(big_f, p)
        gbar = _to_gf([int(c) for c in g_lift], p)
        hbar = _to_gf([int(c) for c in h_lift], p)
        g1 = gf_gcd(fbar, gbar, p, ZZ)
        g2 = gf_gcd(g1, hbar, p, ZZ)
        return len(g2) == 1  # gcd == constant

    # -- element constructors -------------------------------------------

    def element(self, coords) -> "FieldElement":
        coords = list(coords)
        if len(coords) != self.degree:
            raise InputError(f"expected {self.degree} coordinates, got {len(coords)}")
        return FieldElement(self, [Fraction(c) for c in coords])

    def zero(self):
        return self.element([0] * self.degree)

    def one(self):
        return self.from_rational(1)

    def from_rational(self, r):
        coords = [Fraction(r)] + [Q0] * (self.degree - 1)
        return FieldElement(self, coords)

    def gen(self):
        if self.degree == 1:
            return self.from_rational(-self.min_poly[0])
        coords = [Q0] * self.degree
        coords[1] = Q1
        return FieldElement(self, coords)

    # -- embeddings -------------------------------------------------------

    def embedding_interval(self, place: int, bits: int = 53) -> RatInterval:
        if not 0 <= place < self.degree:
            raise InputError(f"place index {place} out of range")
        return self.roots[place].refine_bits(bits)

    def whole_ring(self) -> "IdealHNF":
        eye = [[1 if i == j else 0 for j in range(self.degree)] for i in range(self.degree)]
        return IdealHNF(self, eye)

    def __repr__(self):
        return f"NumberField({list(reversed(self.min_poly))}, name={self.name!r})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(tuple(self.min_poly))


def rationals() -> NumberField:
    """Q presented as the degree-1 field with minimal polynomial t."""
    return NumberField([1, 0], name="Q", class_number_one=True)


def hurwitz_field() -> NumberField:
    """The real subfield of the 7th cyclotomic field, Q(2*cos(2*pi/7)).

    The generator eta = 2*cos(2*pi/7) has minimal polynomial
    t^3 + t^2 - 2t - 1; the ring of integers Z[eta] is a principal ideal
    domain, which the constructor records as an assumption flag.
    """
    return NumberField([1, 1, -2, -1], name="Q(eta)", class_number_one=True)


def _poly_mul_q(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pad(a, n):
    return list(a) + [Fraction(0)] * (n - len(a))


def _to_gf(asc_coeffs, p):
    desc = [ZZ(int(c) % p) for c in reversed(asc_coeffs)]
    while len(desc) > 1 and desc[0] == 0:
        desc.pop(0)
    return desc


class FieldElement:
    """Element of K as an exact rational coordinate vector over the power basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        self.field = field
        self.coords = tuple(Fraction(c) for c in coords)

    # -- ring structure ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self.field.degree
        conv = [Q0] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        conv[i + j] += a * b
        out = [Q0] * d
        for k, c in enumerate(conv):
            if c:
                for m, w in enumerate(self.field._pow[k]):
                    if w:
                        out[m] += c * w
        return FieldElement(self.field, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InputError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        return isinstance(other, FieldElement) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)

    def denominator(self) -> int:
        den = 1
        for c in self.coords:
            den = den * c.denominator // _gcd(den, c.denominator)
        return den

    # -- invariants ---------------------------------------------------------

    def mult_matrix(self):
        """Matrix of multiplication by self on the power basis (rows = images)."""
        d = self.field.degree
        rows = []
        power = self.field.one()
        theta = self.field.gen()
        cur = self
        for k in range(d):
            rows.append(list(cur.coords))
            if k < d - 1:
                cur = cur * theta
        return rows

    def norm(self) -> Fraction:
        return _det_fraction(self.mult_matrix())

    def trace(self) -> Fraction:
        return sum(row[k] for k, row in enumerate(self.mult_matrix()))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid of the coordinate polynomial against the minimal polynomial
        m = [Fraction(c) for c in self.field.min_poly]
        a = list(self.coords)
        g, inv = _poly_xgcd_mod(a, m)
        if len(g) != 1:
            raise InvariantViolation("minimal polynomial not coprime to nonzero element")
        scale = g[0]
        coords = [c / scale for c in _pad(inv, self.field.degree)[: self.field.degree]]
        return FieldElement(self.field, coords)

    # -- embeddings -----------------------------------------------------------

    def embed(self, place: int, bits: int = 53) -> RatInterval:
        """Certified interval containing the image at the given real place."""
        target = Fraction(1, 2 ** bits)
        root = self.field.roots[place]
        width = root.hi - root.lo
        while True:
            box = poly_eval_interval(self.coords, root.interval(width))
            if box.width <= target or self.is_rational():
                return box
            width = width / 4

    def embeddings(self, bits: int = 53):
        return [self.embed(s, bits) for s in range(self.field.degree)]

    def sign_at(self, place: int) -> int:
        """Certified sign of the image at a real place (0 only for the zero element)."""
        if self.is_zero():
            return 0
        bits = 30
        while True:
            s = self.embed(place, bits).sign()
            if s is not None:
                return s
            bits *= 2

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"FieldElement{self}"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _det_fraction(rows) -> Fraction:
    n = len(rows)
    mat = [list(map(Fraction, r)) for r in rows]
    det = Q1
    for col in range(n):
        piv = next((r for r in range(col, n) if mat[r][col] != 0), None)
        if piv is None:
            return Q0
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, n):
            f = mat[r][col] * inv
            if f:
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[col])]
    return det


def _poly_xgcd_mod(a, m):
    """(gcd, u) with u*a = gcd modulo m, over Q[t]; gcd returned unnormalized."""
    from .realroots import poly_divmod, poly_degree, _trim

    r0, r1 = _trim(m), _trim(a)
    s0, s1 = [Q0], [Q1]
    while poly_degree(r1) > 0:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, _trim(r) or [Q0]
        s0, s1 = s1, _poly_sub(s0, _poly_mul_q(q, s1))
        if poly_degree(r1) < 0:
            raise InvariantViolation("element shares a factor with the minimal polynomial")
    return r1, s1


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return [x - y for x, y in zip(_pad(a, n), _pad(b, n))]


# ---------------------------------------------------------------------------
# Ideals
# ---------------------------------------------------------------------------


class IdealHNF:
    """Nonzero integral ideal as a full-rank integer lattice in row HNF."""

    __slots__ = ("field", "mat", "norm")

    def __init__(self, field: NumberField, rows):
        self.field = field
        d = field.degree
        mat = lattice.hnf(rows, d)
        if not lattice.is_full_rank_hnf(mat, d):
            raise InputError("zero ideal (or rank-deficient lattice) rejected")
        self.mat = tuple(tuple(r) for r in mat)
        self.norm = lattice.det_upper_triangular(mat)
        self._check_module()

    def _check_module(self):
        theta = self.field.gen()
        for row in self.mat:
            elem = self.field.element(row) * theta
            if not self.contains(elem):
                raise InvariantViolation("lattice is not closed under multiplication by theta")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_generators(cls, field: NumberField, gens) -> "IdealHNF":
        gens = [g if isinstance(g, FieldElement) else field.from_rational(g) for g in gens]
        if not gens or all(g.is_zero() for g in gens):
            raise InputError("need at least one nonzero generator")
        for g in gens:
            if not g.is_integral():
                raise InputError(f"generator {g} is not an algebraic integer")
        rows = []
        theta = field.gen()
        for g in gens:
            cur = g
            for _ in range(field.degree):
                rows.append([int(c) for c in cur.coords])
                cur = cur * theta
        return cls(field, rows)

    @classmethod
    def principal(cls, field: NumberField, g) -> "IdealHNF":
        return cls.from_generators(field, [g])

    # -- structure -----------------------------------------------------------

    def basis_elements(self):
        return [self.field.element(r) for r in self.mat]

    def contains(self, elem: FieldElement) -> bool:
        if not elem.is_integral():
            return False
        return lattice.contains([list(r) for r in self.mat], [int(c) for c in elem.coords])

    def reduce(self, coords):
        return lattice.reduce_mod([list(r) for r in self.mat], coords)

    def residues(self):
        """Deterministic iterator over coset representatives of O_K modulo self."""
        diag = [self.mat[i][i] for i in range(self.field.degree)]
        for tup in itertools.product(*(range(x) for x in diag)):
            yield self.reduce(list(tup))

    def __eq__(self, other):
        return (isinstance(other, IdealHNF) and self.field == other.field
                and self.mat == other.mat)

    def __hash__(self):
        return hash((self.field, self.mat))

    def is_whole_ring(self) -> bool:
        return self.norm == 1

    def __repr__(self):
        return f"IdealHNF(norm={self.norm}, mat={[list(r) for r in self.mat]})"

    def __str__(self):
        return "; ".join(" ".join(str(x) for x in row) for row in self.mat)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "IdealHNF") -> "IdealHNF":
        rows = [list(r) for r in self.mat] + [list(r) for r in other.mat]
        return IdealHNF(self.field, rows)

    def __mul__(self, other: "IdealHNF") -> "IdealHNF":
        rows = []
        for a in self.basis_elements():
            for b in other.basis_elements():
                rows.append([int(c) for c in (a * b).coords])
        return IdealHNF(self.field, rows)

    def __pow__(self, n: int) -> "IdealHNF":
        if n < 0:
            raise InputError("negative ideal powers are fractional; use inverse()")
        result = self.field.whole_ring()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def intersect(self, other: "IdealHNF") -> "IdealHNF":
        rows = lattice.intersect([list(r) for r in self.mat],
                                 [list(r) for r in other.mat], self.field.degree)
        return IdealHNF(self.field, rows)

    def divides(self, other: "IdealHNF") -> bool:
        """self | other, equivalently other is contained in self."""
        return all(lattice.contains([list(r) for r in self.mat], list(row))
                   for row in other.mat)

    def inverse(self) -> "FractionalIdeal":
        """The fractional ideal {u in K : u * self is integral}."""
        d = self.field.degree
        n = self.norm
        basis = self.basis_elements()
        # membership of w: w * b ranges over N * O_K for every ideal basis element b
        big = []
        for k in range(d):
            theta_k = self.field.element([1 if i == k else 0 for i in range(d)])
            row = []
            for b in basis:
                prod = theta_k * b
                row.extend(int(c) for c in prod.coords)
            big.append(row)
        ncols = d * d
        stacked = big + [[n if i == j else 0 for j in range(ncols)] for i in range(ncols)]
        ker = lattice.kernel(stacked, ncols)
        num_rows = [u[:d] for u in ker if any(u[:d])]
        num = IdealHNF(self.field, num_rows)
        return FractionalIdeal(num, n).normalize()

    def valuation(self, prime: "IdealHNF") -> int:
        """Exponent of a prime ideal in self (by repeated divisibility)."""
        v = 0
        power = prime
        while power.divides(self):
            v += 1
            power = power * prime
        return v


class FractionalIdeal:
    """Integral numerator over a positive integer denominator, kept minimal."""

    __slots__ = ("num", "den")

    def __init__(self, num: IdealHNF, den: int = 1):
        if den <= 0:
            raise InputError("denominator must be positive")
        self.num = num
        self.den = int(den)

    def normalize(self) -> "FractionalIdeal":
        g = _gcd(lattice.content([list(r) for r in self.num.mat]), self.den)
        if g <= 1:
            return self
        rows = [[x // g for x in row] for row in self.num.mat]
        return FractionalIdeal(IdealHNF(self.num.field, rows), self.den // g)

    @classmethod
    def from_integral(cls, ideal: IdealHNF) -> "FractionalIdeal":
        return cls(ideal, 1)

    def contains(self, elem: FieldElement) -> bool:
        scaled = elem * self.den
        return scaled.is_integral() and self.num.contains(scaled)

    def __mul__(self, other):
        if isinstance(other, IdealHNF):
            other = FractionalIdeal.from_integral(other)
        return FractionalIdeal(self.num * other.num, self.den * other.den).normalize()

    def __eq__(self, other):
        if isinstance(other, IdealHNF):
            other = FractionalIdeal.from_integral(other)
        a = self.normalize()
        b = other.normalize()
        return a.den == b.den and a.num == b.num

    def is_whole_ring(self) -> bool:
        return self.den == 1 and self.num.is_whole_ring()

    def norm(self) -> Fraction:
        return Fraction(self.num.norm, self.den ** self.num.field.degree)

    def __repr__(self):
        return f"FractionalIdeal(1/{self.den} * {self.num!r})"


# ---------------------------------------------------------------------------
# Prime factorization above a rational prime
# ---------------------------------------------------------------------------


def factor_rational_prime(field: NumberField, p: int):
    """Factor pO_K into primes; returns [(prime ideal, e, f)] deterministically.

    Valid because construction certified Z[theta] maximal: the factorization
    mirrors the factorization of the minimal polynomial modulo p.
    """
    p = int(p)
    if p < 2 or not sympy.isprime(p):
        raise InputError(f"{p} is not a rational prime")
    mono = [ZZ(c) for c in reversed(field.min_poly)]
    _, factors = gf_factor(mono, p, ZZ)
    out = []
    theta = field.gen()
    for fac, e in factors:
        asc = [int(c) for c in reversed(fac)]
        g_theta = field.zero()
        power = field.one()
        for c in asc:
            g_theta = g_theta + power * c
            power = power * theta
        prime = IdealHNF.from_generators(field, [field.from_rational(p), g_theta])
        f = len(asc) - 1
        out.append((prime, int(e), f))
    out.sort(key=lambda t: (t[2], t[0].mat))

    total = sum(e * f for _, e, f in out)
    if total != field.degree:
        raise InvariantViolation(f"sum of e*f is {total}, expected {field.degree}")
    recombined = field.whole_ring()
    for prime, e, _ in out:
        recombined = recombined * prime ** e
    if recombined != IdealHNF.principal(field, field.from_rational(p)):
        raise InvariantViolation(f"prime factors of {p} do not recombine")
    return out


def primes_up_to_norm(field: NumberField, bound: int):
    """All prime ideals of norm <= bound, sorted by (norm, HNF)."""
    out = []
    for p in sympy.primerange(2, bound + 1):
        for prime, _e, f in factor_rational_prime(field, int(p)):
            if prime.norm <= bound:
                out.append(prime)
    out.sort(key=lambda pr: (pr.norm, pr.mat))
    return out


def factor_ideal(field: NumberField, ideal: IdealHNF):
    """Prime factorization of an integral ideal as [(prime, exponent)]."""
    out = []
    for p in sorted(sympy.factorint(ideal.norm)):
        for prime, _e, _f in factor_rational_prime(field, int(p)):
            v = ideal.valuation(prime)
            if v > 0:
                out.append((prime, v))
    check = field.whole_ring()
    for prime, v in out:
        check = check * prime ** v
    if check != ideal:
        raise InvariantViolation("ideal does not factor into primes as computed")
    return out
