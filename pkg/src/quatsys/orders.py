"""Orders in a quaternion algebra as certified rank-4d integer lattices.

An order is stored over the scaled standard basis (1/kappa) * {1,i,j,ij} x
(power basis of K), with kappa the least positive integer clearing all
denominators of the supplied basis.  Construction never trusts its input:
module generators are closed under multiplication until the lattice
stabilizes, and the result is certified to contain 1, to be closed under
multiplication and under the standard involution, to have integral reduced
traces and norms, and to satisfy kappa | 2ab.

Congruence structure: for an ideal I of the center, I*Q is the two-sided
ideal spanned by products of an ideal basis with an order basis, and the
level-I congruence group consists of the norm-one elements x with
x - 1 in I*Q.  Membership tests are integer lattice solves, hence exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from . import lattice
from .errors import InputError, InvariantViolation
from .numfield import FieldElement, IdealHNF, NumberField, hurwitz_field
from .quatalg import QuatElement, QuaternionAlgebra


def flatten(x: QuatElement):
    """4d rational coordinates of a quaternion over the standard basis."""
    out = []
    for c in x.coords:
        out.extend(c.coords)
    return out


def unflatten(algebra: QuaternionAlgebra, vec) -> QuatElement:
    d = algebra.field.degree
    parts = [algebra.field.element(vec[l * d:(l + 1) * d]) for l in range(4)]
    return QuatElement(algebra, parts)


class OrderLattice:
    """An order containing O_K, with certified multiplicative closure."""

    def __init__(self, algebra: QuaternionAlgebra, generators, name=None,
                 assume_maximal=False, max_close_iters=12):
        self.algebra = algebra
        self.name = name or "order"
        self.assume_maximal = bool(assume_maximal)
        basis = _module_span(algebra, generators)
        for _ in range(max_close_iters):
            products = [w1 * w2 for w1 in basis for w2 in basis]
            new_basis = _hnf_span(algebra, basis + products)
            if _same_span(algebra, basis, new_basis):
                basis = new_basis
                break
            basis = new_basis
        else:
            raise InputError("generators do not span an order: closure did not stabilize")
        dim = 4 * algebra.field.degree
        if len(basis) != dim:
            raise InputError(f"order lattice has rank {len(basis)}, expected {dim}")

        self.kappa = _lcd(basis)
        rows = [[_as_int(c * self.kappa) for c in flatten(w)] for w in basis]
        mat = lattice.hnf(rows, dim)
        if not lattice.is_full_rank_hnf(mat, dim):
            raise InvariantViolation("order lattice lost rank during normalization")
        self.mat = tuple(tuple(r) for r in mat)
        self._certify()

    # -- certification ------------------------------------------------------

    def _certify(self):
        algebra = self.algebra
        if not self.contains(algebra.one()):
            raise InvariantViolation("order does not contain 1")
        basis = self.basis_elements()
        for w1 in basis:
            for w2 in basis:
                if not self.contains(w1 * w2):
                    raise InvariantViolation("order is not closed under multiplication")
        for w in basis:
            if not self.contains(w.conj()):
                raise InvariantViolation("order is not closed under the involution")
            if not w.reduced_trace().is_integral() or not w.reduced_norm().is_integral():
                raise InvariantViolation("order element with non-integral trace or norm")
        quota = algebra.a * algebra.b * 2
        if not (quota * Fraction(1, self.kappa)).is_integral():
            raise InvariantViolation(f"kappa={self.kappa} does not divide 2ab")

    # -- basic structure ------------------------------------------------------

    @property
    def dim(self):
        return 4 * self.algebra.field.degree

    def kappa_element(self) -> FieldElement:
        return self.algebra.field.from_rational(self.kappa)

    def basis_elements(self):
        inv = Fraction(1, self.kappa)
        return [unflatten(self.algebra, [c * inv for c in row]) for row in self.mat]

    def scaled_coords(self, x: QuatElement):
        """Integer coordinates of kappa*x over the standard basis, or None."""
        vec = [c * self.kappa for c in flatten(x)]
        if any(c.denominator != 1 for c in vec):
            return None
        return [int(c) for c in vec]

    def contains(self, x: QuatElement) -> bool:
        vec = self.scaled_coords(x)
        if vec is None:
            return False
        return lattice.contains([list(r) for r in self.mat], vec)

    def is_norm_one(self, x: QuatElement) -> bool:
        return self.contains(x) and x.reduced_norm() == self.algebra.field.one()

    def index_in(self, larger: "OrderLattice") -> int:
        """Lattice index [larger : self]; requires self to be a sublattice."""
        scale = lcm(self.kappa, larger.kappa)
        mine = [[x * (scale // self.kappa) for x in row] for row in self.mat]
        theirs = [[x * (scale // larger.kappa) for x in row] for row in larger.mat]
        for row in mine:
            if not lattice.contains(theirs, row):
                raise InputError("not a sublattice")
        return lattice.lattice_index(theirs, lattice.hnf(mine, self.dim))

    def intersect(self, other: "OrderLattice"):
        """Basis elements of the intersection lattice (not itself an OrderLattice)."""
        scale = lcm(self.kappa, other.kappa)
        mine = [[x * (scale // self.kappa) for x in row] for row in self.mat]
        theirs = [[x * (scale // other.kappa) for x in row] for row in other.mat]
        meet = lattice.intersect(mine, theirs, self.dim)
        inv = Fraction(1, scale)
        return [unflatten(self.algebra, [c * inv for c in row]) for row in meet]

    def __eq__(self, other):
        return (isinstance(other, OrderLattice) and self.algebra == other.algebra
                and self.kappa == other.kappa and self.mat == other.mat)

    def __repr__(self):
        return f"OrderLattice({self.name}, kappa={self.kappa})"

    # -- congruence structure ---------------------------------------------------

    def congruence_lattice(self, ideal: IdealHNF) -> "CongruenceIdealLattice":
        return CongruenceIdealLattice(self, ideal)

    def in_gamma(self, ideal: IdealHNF, x: QuatElement,
                 _cong: "CongruenceIdealLattice | None" = None) -> bool:
        """Norm-one and congruent to 1 modulo ideal*self."""
        if not self.is_norm_one(x):
            return False
        cong = _cong if _cong is not None else self.congruence_lattice(ideal)
        return cong.contains(x - self.algebra.one())

    def minus_one_in_gamma(self, ideal: IdealHNF) -> bool:
        return self.in_gamma(ideal, -self.algebra.one())


class CongruenceIdealLattice:
    """The two-sided ideal I*Q as a rank-4d sublattice of the order Q."""

    def __init__(self, order: OrderLattice, ideal: IdealHNF):
        if ideal.field != order.algebra.field:
            raise InputError("ideal and order live over different fields")
        self.order = order
        self.ideal = ideal
        rows = []
        for alpha in ideal.basis_elements():
            for w in order.basis_elements():
                rows.append(order.scaled_coords(alpha * w))
        mat = lattice.hnf(rows, order.dim)
        if not lattice.is_full_rank_hnf(mat, order.dim):
            raise InvariantViolation("congruence lattice lost rank")
        self.mat = tuple(tuple(r) for r in mat)
        self._certify()

    def _certify(self):
        basis = self.basis_elements()
        order_basis = self.order.basis_elements()
        for z in basis:
            if not self.contains(z.conj()):
                raise InvariantViolation("I*Q is not stable under the involution")
            for w in order_basis:
                if not (self.contains(w * z) and self.contains(z * w)):
                    raise InvariantViolation("I*Q is not a two-sided ideal")

    def basis_elements(self):
        inv = Fraction(1, self.order.kappa)
        return [unflatten(self.order.algebra, [c * inv for c in row]) for row in self.mat]

    def contains(self, x: QuatElement) -> bool:
        vec = self.order.scaled_coords(x)
        if vec is None:
            return False
        return lattice.contains([list(r) for r in self.mat], vec)

    def index_in_order(self) -> int:
        return lattice.lattice_index([list(r) for r in self.order.mat],
                                     [list(r) for r in self.mat])

    def random_element(self, rng, spread=6) -> QuatElement:
        coeffs = [rng.randrange(-spread, spread + 1) for _ in range(self.order.dim)]
        vec = [0] * self.order.dim
        for c, row in zip(coeffs, self.mat):
            if c:
                vec = [a + c * b for a, b in zip(vec, row)]
        inv = Fraction(1, self.order.kappa)
        return unflatten(self.order.algebra, [c * inv for c in vec])


# ---------------------------------------------------------------------------
# Named constructions
# ---------------------------------------------------------------------------


def standard_order(algebra: QuaternionAlgebra) -> OrderLattice:
    """O_K + O_K i + O_K j + O_K ij."""
    gens = [algebra.one(), algebra.gen_i(), algebra.gen_j(), algebra.gen_ij()]
    return OrderLattice(algebra, gens, name="standard")


def hurwitz_algebra(field: NumberField | None = None) -> QuaternionAlgebra:
    """(eta, eta) over Q(eta), the algebra of the (2,3,7) triangle lattice."""
    K = field if field is not None else hurwitz_field()
    eta = K.gen()
    return QuaternionAlgebra(K, eta, eta)


def hurwitz_order(algebra: QuaternionAlgebra | None = None) -> OrderLattice:
    """The maximal order Z[eta][i, j, j'] with j' = (1 + eta*i + tau*j)/2.

    tau = 1 + eta + eta^2.  Maximality is recorded as an assumption flag; it
    is cross-validated downstream by the quotient-counting identities that
    hold only for maximal orders.
    """
    if algebra is None:
        algebra = hurwitz_algebra()
    K = algebra.field
    eta = K.gen()
    if K.min_poly != [-1, -2, 1, 1] or algebra.a != eta or algebra.b != eta:
        raise InputError("the Hurwitz order lives in (eta,eta) over Q(eta)")
    tau = K.one() + eta + eta * eta
    half = Fraction(1, 2)
    j_prime = QuatElement(algebra, (K.from_rational(half), eta * half, tau * half, K.zero()))
    gens = [algebra.one(), algebra.gen_i(), algebra.gen_j(), j_prime]
    order = OrderLattice(algebra, gens, name="hurwitz", assume_maximal=True)
    if order.kappa != 2:
        raise InvariantViolation(f"Hurwitz order should have kappa=2, got {order.kappa}")
    return order


def hurwitz_j_prime(algebra: QuaternionAlgebra) -> QuatElement:
    K = algebra.field
    eta = K.gen()
    tau = K.one() + eta + eta * eta
    half = Fraction(1, 2)
    return QuatElement(algebra, (K.from_rational(half), eta * half, tau * half, K.zero()))


# ---------------------------------------------------------------------------
# Trace/norm containment checks for congruence ideals
# ---------------------------------------------------------------------------


def verify_trace_norm_containment(order: OrderLattice, ideal: IdealHNF,
                                  n_samples: int, rng, gamma_elements=()):
    """Certify, on random I*Q samples and supplied congruence-group elements:

    * Tr(z) in I and N(z) in I^2 for z in I*Q;
    * x0 - 1 in (<2> + kappa*I)^{-1} * I^2 for x in the congruence group;
    * the identity 2*y0 = -N(x - 1) with y0 = x0 - 1, exactly.

    Raises InvariantViolation with the witness on any failure; returns a
    summary dict otherwise.
    """
    K = order.algebra.field
    cong = order.congruence_lattice(ideal)
    i_sq = ideal * ideal
    for _ in range(n_samples):
        z = cong.random_element(rng)
        if not ideal.contains(z.reduced_trace()):
            raise InvariantViolation(f"trace of {z} escapes the ideal")
        if not i_sq.contains(z.reduced_norm()):
            raise InvariantViolation(f"norm of {z} escapes the ideal square")

    two = IdealHNF.principal(K, K.from_rational(2))
    kappa_ideal = IdealHNF.principal(K, order.kappa_element())
    denom = two + kappa_ideal * ideal
    target = denom.inverse() * i_sq

    one = order.algebra.one()
    checked = 0
    for x in gamma_elements:
        if not order.in_gamma(ideal, x, _cong=cong):
            raise InvariantViolation(f"{x} is not in the congruence group")
        y0 = x.coords[0] - K.one()
        if not target.contains(y0):
            raise InvariantViolation(f"x0-1 of {x} escapes (2+kappa*I)^-1 * I^2")
        if y0 * 2 != -((x - one).reduced_norm()):
            raise InvariantViolation(f"2*y0 != -N(x-1) for {x}")
        checked += 1
    return {
        "random_samples": n_samples,
        "gamma_checked": checked,
        "trace_in_ideal": True,
        "norm_in_ideal_square": True,
        "coefficient_membership": True,
    }


# ---------------------------------------------------------------------------
# internals
# ---------------------------------------------------------------------------


def _module_span(algebra, generators):
    theta = algebra.field.gen()
    d = algebra.field.degree
    elems = []
    for g in generators:
        cur = g
        for _ in range(d):
            elems.append(cur)
            cur = cur * theta
    return _hnf_span(algebra, elems)


def _hnf_span(algebra, elems):
    den = 1
    flat = []
    for e in elems:
        vec = flatten(e)
        flat.append(vec)
        for c in vec:
            den = lcm(den, c.denominator)
    rows = [[int(c * den) for c in vec] for vec in flat]
    mat = lattice.hnf(rows, 4 * algebra.field.degree)
    inv = Fraction(1, den)
    return [unflatten(algebra, [c * inv for c in row]) for row in mat]


def _same_span(algebra, basis_a, basis_b):
    def canon(basis):
        den = 1
        for e in basis:
            for c in flatten(e):
                den = lcm(den, c.denominator)
        rows = [[int(c * den) for c in flatten(e)] for e in basis]
        g = lattice.content(rows)
        g = gcd(g, den)
        if g > 1:
            rows = [[x // g for x in r] for r in rows]
            den //= g
        return den, lattice.hnf(rows, 4 * algebra.field.degree)

    return canon(basis_a) == canon(basis_b)


def _lcd(basis) -> int:
    den = 1
    for e in basis:
        for c in flatten(e):
            den = lcm(den, c.denominator)
    return den


def _as_int(f: Fraction) -> int:
    if f.denominator != 1:
        raise InvariantViolation("expected an integer coordinate")
    return int(f)
