"""Grid construction: normalization, operator images against independently
truncated Poincare runs, duality and the shadow-pairing symmetry."""

import mpmath
import numpy as np
import pytest

from mgrid.automorphy import (
    AutomorphyData,
    DiagonalRepresentation,
    EtaPowerMultiplier,
    TrivialMultiplier,
    conjugate,
    trivial_representation,
)
from mgrid.gridforms import (
    HarmonicForm,
    apply_Dk1,
    apply_xi,
    build_G,
    build_f,
    check_main2_symmetry,
    verify_duality,
)
from mgrid.groups import sl2z
from mgrid.poincare import poincare_series
from mgrid.precision import PrecisionContext
from mgrid.series import FourierSeries, TruncationParams

CTX = PrecisionContext(mantissa_bits=113, target_tol=1e-25)
TR = TruncationParams(c_max=100, tail_tol=1e-5, ctx=CTX)
TR_INDEP = TruncationParams(c_max=151, tail_tol=1e-5, ctx=CTX)


def trivial_data(weight):
    return AutomorphyData(weight=weight, chi=TrivialMultiplier(),
                          rho=trivial_representation(), group=sl2z())


def sigma(power, n):
    return sum(d**power for d in range(1, n + 1) if n % d == 0)


DATA12 = trivial_data(12)


def test_build_f_leading_coefficient():
    f = build_f(DATA12, 10, 1, 1, TR, lmax=3)
    assert f.coefficient(-1, 1) == 1
    assert f.weight == 12


def test_build_f_index_precondition():
    with pytest.raises(ValueError):
        build_f(DATA12, 10, -1, 1, TR)
    eta_data = AutomorphyData(weight=5, chi=EtaPowerMultiplier(2),
                              rho=trivial_representation(), group=sl2z())
    with pytest.raises(ValueError):
        build_f(eta_data, 3, 0, 1, TR)  # 0 - 1/12 < 0


def test_build_f_eisenstein_direction_ratio():
    f = build_f(DATA12, 10, 0, 1, TruncationParams(c_max=2000, tail_tol=1e-2,
                                                   ctx=CTX), lmax=2)
    ratio = complex(f.coefficient(2, 1)) / complex(f.coefficient(1, 1))
    assert ratio.real == pytest.approx(sigma(11, 2) / sigma(11, 1), rel=1e-5)


def test_build_G_leading_and_b_values():
    G = build_G(DATA12, 10, 1, 1, TR, lmax=4)
    assert G.holo.coefficient(-1, 1) == 1
    p_indep = poincare_series(conjugate(DATA12), 12, 1, 1, range(1, 5), TR_INDEP)
    for l in range(1, 5):
        expected = complex(p_indep.coefficient(l, 1)) * (-1 / l) ** 11
        got = complex(G.holo.coefficient(l, 1))
        assert got == pytest.approx(expected, rel=1e-8)


def test_build_G_index_precondition():
    with pytest.raises(ValueError):
        build_G(DATA12, 10, 0, 1, TR)
    with pytest.raises(ValueError):
        build_G(DATA12, 10, -1, 1, TR)


def test_build_G_constant_term_vanishes_for_positive_kappa():
    eta_data = AutomorphyData(weight=5, chi=EtaPowerMultiplier(2),
                              rho=trivial_representation(), group=sl2z())
    G = build_G(eta_data, 3, 1, 1, TruncationParams(c_max=120, tail_tol=1e-3,
                                                    ctx=CTX), lmax=3)
    # kappa' = 11/12 > 0: no frequency-zero coefficient may appear at all
    assert all(G.holo.freq(n, j) != 0 for (n, j) in G.holo.coeffs)
    assert G.holo.has_zero_constant_term()


def test_duality_matrix_small():
    for (n1, n2) in ((1, 1), (1, 2), (2, 1), (0, 1)):
        trunc = TruncationParams(c_max=2500 if n1 == 0 else 250,
                                 tail_tol=1e-2, ctx=CTX)
        rep = verify_duality(DATA12, 10, n1, 1, n2, 1, trunc)
        assert rep.residual < 1e-6


def test_duality_index_preconditions():
    with pytest.raises(ValueError):
        verify_duality(DATA12, 10, -1, 1, 1, 1, TR)
    with pytest.raises(ValueError):
        verify_duality(DATA12, 10, 1, 1, 0, 1, TR)


def test_apply_Dk1_kills_constant_and_matches_scaled_series():
    G = build_G(DATA12, 10, 1, 1, TR, lmax=4)
    D = apply_Dk1(G)
    assert (0, 1) not in D.coeffs
    p_indep = poincare_series(conjugate(DATA12), 12, 1, 1, range(1, 5), TR_INDEP)
    scale = mpmath.mpf(-1) ** 11
    for l in range(1, 5):
        expected = complex(p_indep.coefficient(l, 1)) * float(scale)
        assert complex(D.coefficient(l, 1)) == pytest.approx(expected, rel=1e-7)
    # leading term: (-1)^{k+1} q^{-1}
    assert complex(D.coefficient(-1, 1)) == pytest.approx(-1.0)


def test_apply_xi_scaled_shadow_and_kernel():
    G = build_G(DATA12, 10, 1, 1, TR, lmax=4)
    xi = apply_xi(G)
    shadow_indep = poincare_series(DATA12, 12, -1, 1, range(1, 5), TR_INDEP)
    scale = complex((-4 * mpmath.pi) ** 11 / mpmath.factorial(10)) * (-1.0) ** 11
    for l in range(1, 5):
        expected = complex(shadow_indep.coefficient(l, 1)) * scale
        assert complex(xi.coefficient(l, 1)) == pytest.approx(expected, rel=1e-7)
    # empty non-holomorphic part maps to the zero series
    empty = HarmonicForm(k=10, n2=1, alpha2=1, holo=G.holo, nonholo={},
                         nonholo_tails={}, shadow=G.shadow)
    assert apply_xi(empty).coeffs == {}


def test_apply_xi_synthetic_single_term():
    cdata = conjugate(trivial_data(4))
    holo = FourierSeries(-2, cdata, coeffs={(-1, 1): mpmath.mpc(1)})
    G = HarmonicForm(k=2, n2=1, alpha2=1, holo=holo,
                     nonholo={(-1, 1): mpmath.mpc(1)}, nonholo_tails={},
                     shadow=holo)
    xi = apply_xi(G)
    expected = -((-4 * np.pi * -1.0) ** 3)
    assert complex(xi.coefficient(1, 1)) == pytest.approx(expected)


def test_main2_symmetry_pairs():
    G1 = build_G(DATA12, 10, 1, 1, TR, lmax=3)
    G2 = build_G(DATA12, 10, 2, 1, TR, lmax=3)
    assert check_main2_symmetry(G1, G2) < 1e-6
    # self-pairing forces b^-(-n2)(-n2)^{k+1} to be real
    assert check_main2_symmetry(G1, G1) < 1e-12
    val = complex(G1.b_minus(-1, 1)) * (-1.0) ** 11
    assert abs(val.imag) < 1e-10 * abs(val.real)


def test_duality_zero_cross_block_component():
    # diagonal rho: coefficients across components vanish identically, so
    # both duality sides are exact zeros and the residual is 0
    rep = DiagonalRepresentation((TrivialMultiplier(), TrivialMultiplier()))
    data2 = AutomorphyData(weight=12, chi=TrivialMultiplier(), rho=rep,
                           group=sl2z())
    rep_ = verify_duality(data2, 10, 1, 1, 1, 2, TR)
    assert rep_.lhs == 0 and rep_.rhs == 0 and rep_.residual == 0.0


def test_main2_symmetry_zero_overlap():
    rep = DiagonalRepresentation((TrivialMultiplier(), TrivialMultiplier()))
    data2 = AutomorphyData(weight=12, chi=TrivialMultiplier(), rho=rep,
                           group=sl2z())
    Ga = build_G(data2, 10, 1, 1, TR, lmax=2)
    Gb = build_G(data2, 10, 2, 2, TR, lmax=2)
    # b^- of Ga lives in component 1 only, Gb in component 2 only
    assert check_main2_symmetry(Ga, Gb) == 0.0
