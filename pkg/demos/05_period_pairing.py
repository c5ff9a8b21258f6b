"""Quadric relations: Petersson products from critical L-values.

On a one-dimensional cusp space the Gram matrix of Poincare series has a
closed unfolding form.  Expressing each period polynomial through the
twisted L-values of the supplementary functions turns every Gram entry
into a sesquilinear expression in those L-values; fitting the form on one
entry predicts the others.  This is the desk-scale content of the quadric
relation between critical values.
"""

from mgrid import (
    AutomorphyData,
    PrecisionContext,
    TrivialMultiplier,
    TruncationParams,
    fit_pairing,
    period_rH,
    petersson_poincare,
    poincare_series,
    predict_gram,
    sl2z,
    supplementary,
    trivial_representation,
)

ctx = PrecisionContext(mantissa_bits=113, target_tol=1e-25)

for k in (10, 14):
    weight = k + 2
    print(f"=== weight {weight} (dim S = 1) ===")
    data = AutomorphyData(weight=weight, chi=TrivialMultiplier(),
                          rho=trivial_representation(), group=sl2z())
    trunc = TruncationParams(c_max=60, tail_tol=1e-9, ctx=ctx)

    pm = fit_pairing([(-1, 1)], data, k, trunc, lmax=60)
    print(f"  fitted on (P_-1, P_-1); lstsq rank {pm.rank}, "
          f"residual {pm.residual:.1e}")

    rh = {}
    for n in (-1, -2):
        fstar = supplementary([(1, n, 1)], data, k, trunc, lmax=60)
        rh[n] = [period_rH(fstar, g, k, trunc) for g in pm.gens]

    pred = predict_gram(pm, rh[-1], rh[-2])
    p1 = poincare_series(data, weight, -1, 1, range(1, 4), trunc)
    truth = complex(petersson_poincare(p1, -2, 1, data, k))
    print(f"  held-out (P_-1, P_-2): predicted {pred.real:.10e}")
    print(f"                         unfolding {truth.real:.10e}")
    print(f"  relative error {abs(pred - truth) / abs(truth):.2e}")
    print()
