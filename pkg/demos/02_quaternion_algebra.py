"""The algebra (eta, eta) over Q(eta) and its ramification.

Cocompactness of the norm-one group needs the algebra split at exactly one
real place and a division algebra at the others; that and the absence of
finite ramification are decided here by certified sign tests and
bounded-exhaustive isotropy searches with Hensel-checked witnesses.
"""

from quatsys import IdealHNF, QuaternionAlgebra, rationals
from quatsys.orders import hurwitz_algebra, hurwitz_j_prime

D = hurwitz_algebra()
K = D.field
eta = K.gen()

print("real places:", [D.real_place_status(s) for s in range(3)])
print("cocompact presentation:", D.is_cocompact_presentation())

# the half-integral generator of the maximal order
jp = hurwitz_j_prime(D)
print("\nj' =", jp)
print("reduced trace:", jp.reduced_trace())
print("reduced norm: ", jp.reduced_norm(), "(= -1 - 3 eta)")
print("j'^2 == j' + (1 + 3 eta):", jp * jp == jp + (K.one() + eta * 3))

# finite ramification is empty; the even prime needs a level-8 witness
p2 = IdealHNF.principal(K, K.from_rational(2))
status, witness = D.finite_prime_status_witnessed(p2)
print(f"\nstatus at <2>: {status} (witness found at level {witness[0]})")
lam = [K.one(), K.one() + eta * 3 + eta * eta, eta, K.zero()]
print("1 - eta(1+3eta+eta^2)^2 - eta*eta^2 = 0 mod 8 accepted as witness:",
      D.is_isotropy_witness(p2, 3, lam))

report = D.ramification_report(norm_bound=50)
for line in report.records():
    print(" ", line)

# a rational comparison point: (2,3) over Q ramifies exactly at 2 and 3
Dq = QuaternionAlgebra(rationals(), rationals().from_rational(2),
                       rationals().from_rational(3))
print("\n(2,3) over Q, finite ramification <= 13:",
      [p.norm for p in Dq.ramification_report(13).finite_ramified])
