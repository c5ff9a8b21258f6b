"""The dual grid: a weakly holomorphic family f_{n1} and a harmonic family
G_{n2} whose coefficients satisfy the antisymmetric identity

    a_{n1}(n2) = -b_{n2}(n1),

plus the two operator images: the (k+1)-st normalized derivative sends G to
a scaled Poincare series of the same index, and the anti-linear raising
operator sends it to a scaled series of the paired index n2'.
"""

import mpmath

from mgrid import (
    AutomorphyData,
    PrecisionContext,
    TrivialMultiplier,
    TruncationParams,
    apply_Dk1,
    apply_xi,
    build_G,
    conjugate,
    n_prime,
    poincare_series,
    sl2z,
    trivial_representation,
    verify_duality,
)

k = 10
ctx = PrecisionContext(mantissa_bits=113, target_tol=1e-25)
data = AutomorphyData(weight=k + 2, chi=TrivialMultiplier(),
                      rho=trivial_representation(), group=sl2z())
trunc = TruncationParams(c_max=250, tail_tol=1e-2, ctx=ctx)

print(f"=== duality matrix, weight {k + 2} on SL2(Z) ===")
print(f"{'n1':>3} {'n2':>3} {'a_n1(n2)':>20} {'-b_n2(n1)':>20} {'residual':>10}")
for n1 in (0, 1, 2):
    for n2 in (1, 2):
        tr = TruncationParams(c_max=3000 if n1 == 0 else 400,
                              tail_tol=1e-2, ctx=ctx)
        rep = verify_duality(data, k, n1, 1, n2, 1, tr)
        print(f"{n1:>3} {n2:>3} {rep.lhs.real:>20.8f} {rep.rhs.real:>20.8f} "
              f"{rep.residual:>10.1e}")

print()
print("=== operator images of G_1 ===")
G = build_G(data, k, 1, 1, trunc, lmax=4)
print("holomorphic part: leading coefficient",
      complex(G.holo.coefficient(-1, 1)).real, "at q^-1")
print("constant term b(0) =", complex(G.holo.coefficient(0, 1)).real)

D = apply_Dk1(G)
p_ref = poincare_series(conjugate(data), k + 2, 1, 1, range(1, 5), trunc)
print("\nD^{k+1} G against (-n2)^{k+1} P_{n2} (conjugate automorphy):")
for l in (1, 2, 3):
    lhs = complex(D.coefficient(l, 1))
    rhs = complex(p_ref.coefficient(l, 1)) * (-1.0) ** (k + 1)
    print(f"  l={l}: {lhs:.6e}  vs  {rhs:.6e}")

xi = apply_xi(G)
n2p = n_prime(1, 0)
shadow_ref = poincare_series(data, k + 2, n2p, 1, range(1, 5), trunc)
scale = complex((-4 * mpmath.pi) ** (k + 1) / mpmath.factorial(k)) * (-1) ** (k + 1)
print("\nxi_{-k} G against the scaled shadow P_{n2'} (n2' = %d):" % n2p)
for l in (1, 2, 3):
    lhs = complex(xi.coefficient(l, 1))
    rhs = complex(shadow_ref.coefficient(l, 1)) * scale
    print(f"  l={l}: ratio lhs/rhs = {lhs / rhs:.12f}")
print("\nthe kernel statement: a G with empty non-holomorphic part maps to 0")
