"""Fourier coefficients of Poincare series, checked against classics.

The weight-4 series of order 0 is the Eisenstein series E_4, whose
coefficients are 240 sigma_3(l); the weight-12 series of order -1 is
proportional to the discriminant form, whose coefficients are the tau
values.  Both drop out of the same Kloosterman/Bessel machinery, summed
over the double-coset boxes C+(c) in ascending c with a certified tail.
"""

from mgrid import (
    AutomorphyData,
    PrecisionContext,
    TrivialMultiplier,
    TruncationParams,
    poincare_series,
    sl2z,
    trivial_representation,
)

ctx = PrecisionContext(mantissa_bits=113, target_tol=1e-25)


def sigma(power, n):
    return sum(d**power for d in range(1, n + 1) if n % d == 0)


print("=== weight 4, order 0: the Eisenstein direction ===")
data4 = AutomorphyData(weight=4, chi=TrivialMultiplier(),
                       rho=trivial_representation(), group=sl2z())
trunc = TruncationParams(c_max=3000, tail_tol=1e-2, ctx=ctx)
e4 = poincare_series(data4, 4, 0, 1, range(1, 7), trunc)
print(f"{'l':>3} {'computed':>22} {'240 sigma_3(l)':>15} {'tail bound':>12}")
for l in range(1, 7):
    got = complex(e4.coefficient(l, 1))
    print(f"{l:>3} {got.real:>22.12f} {240 * sigma(3, l):>15} "
          f"{e4.tail_bound(l, 1):>12.2e}")

print()
print("=== weight 12, order -1: the cusp-form direction ===")
data12 = AutomorphyData(weight=12, chi=TrivialMultiplier(),
                        rho=trivial_representation(), group=sl2z())
trunc12 = TruncationParams(c_max=120, tail_tol=1e-8, ctx=ctx)
p = poincare_series(data12, 12, -1, 1, range(1, 7), trunc12)
tau = [1, -24, 252, -1472, 4830, -6048]
a1 = complex(p.coefficient(1, 1))
print(f"normalizing coefficient a(1) = {a1.real:.12f}")
print(f"{'l':>3} {'a(l)/a(1)':>22} {'tau(l)':>8}")
for l in range(1, 7):
    ratio = complex(p.coefficient(l, 1)) / a1
    print(f"{l:>3} {ratio.real:>22.12f} {tau[l - 1]:>8}")

print()
print("=== weight 12, order +1: a weakly holomorphic form (pole q^-1) ===")
wh = poincare_series(data12, 12, 1, 1, range(1, 5), trunc12)
print("principal part indices:", wh.principal_support())
for l in range(1, 5):
    got = complex(wh.coefficient(l, 1))
    print(f"  a({l}) = {got.real:>24.6f}  (tail {wh.tail_bound(l, 1):.1e})")
print("these grow like e^{4 pi sqrt(l)}: the I-Bessel regime")
