"""End-to-end checks beyond the scalar level-one case: a genuinely
two-component diagonal representation and Gamma_0(2), both validated
against a direct coset-sum evaluation of the defining series."""

import math

import numpy as np
import pytest

from mgrid import (
    AutomorphyData,
    DiagonalRepresentation,
    EtaPowerMultiplier,
    TrivialMultiplier,
    TruncationParams,
    gamma0,
    poincare_series,
    sl2z,
    trivial_representation,
    verify_duality,
)
from mgrid.precision import PrecisionContext

CTX = PrecisionContext(mantissa_bits=113, target_tol=1e-25)


def direct_poincare_sum(level, n, weight, tau, radius=80.0):
    """(1/2) sum over distinct lower rows in Gamma_0(level), trivial
    character; brute force with a |c tau + d| cutoff."""
    tau = complex(tau)
    total = np.exp(2j * np.pi * (-n) * tau)
    cmax = int(radius / tau.imag) + 1
    for c in range(level, cmax + 1, level):
        rows = []
        for d0 in range(c):
            if math.gcd(d0, c) != 1:
                continue
            a = pow(d0, -1, c)
            b = (a * d0 - 1) // c
            mmax = int(radius / c) + 2
            for m in range(-mmax, mmax + 1):
                rows.append((a, b + a * m, d0 + m * c))
        if not rows:
            continue
        arr = np.array(rows, float)
        cz = c * tau + arr[:, 2]
        keep = np.abs(cz) <= radius
        gt = (arr[keep, 0] * tau + arr[keep, 1]) / cz[keep]
        total += np.sum(np.exp(2j * np.pi * (-n) * gt) / cz[keep] ** weight)
    return total


@pytest.fixture(scope="module")
def eta_pm4_data():
    rep = DiagonalRepresentation((EtaPowerMultiplier(4), EtaPowerMultiplier(-4)))
    return AutomorphyData(weight=12, chi=TrivialMultiplier(), rho=rep,
                          group=sl2z())


def test_two_component_kappa(eta_pm4_data):
    from fractions import Fraction

    assert eta_pm4_data.kappa == (Fraction(1, 6), Fraction(5, 6))
    assert eta_pm4_data.conjugate().kappa == (Fraction(5, 6), Fraction(1, 6))


def test_two_component_duality(eta_pm4_data):
    tr = TruncationParams(c_max=120, tail_tol=1e-2, ctx=CTX)
    for (n1, a1, n2, a2) in ((1, 1, 1, 1), (1, 2, 1, 2), (2, 1, 1, 1)):
        rep = verify_duality(eta_pm4_data, 10, n1, a1, n2, a2, tr)
        assert rep.residual < 1e-8
    cross = verify_duality(eta_pm4_data, 10, 1, 1, 1, 2, tr)
    assert cross.lhs == 0 and cross.rhs == 0


def test_level2_expansion_matches_direct_sum():
    data = AutomorphyData(weight=12, chi=TrivialMultiplier(),
                          rho=trivial_representation(), group=gamma0(2))
    tr = TruncationParams(c_max=300, tail_tol=1e-8, ctx=CTX)
    series = poincare_series(data, 12, -1, 1, range(1, 41), tr)
    tau = 0.27 + 0.9j
    qval = sum(complex(v) * np.exp(2j * np.pi * l * tau)
               for (l, _j), v in series.items())
    direct = direct_poincare_sum(2, -1, 12, tau)
    assert abs(qval - direct) / abs(direct) < 1e-12


def test_level1_expansion_matches_direct_sum():
    # the same oracle on SL2(Z), weakly holomorphic direction
    data = AutomorphyData(weight=12, chi=TrivialMultiplier(),
                          rho=trivial_representation(), group=sl2z())
    tr = TruncationParams(c_max=300, tail_tol=1e-8, ctx=CTX)
    series = poincare_series(data, 12, 1, 1, range(1, 41), tr)
    tau = 0.3 + 1.1j
    qval = sum(complex(v) * np.exp(2j * np.pi * l * tau)
               for (l, _j), v in series.items())
    direct = direct_poincare_sum(1, 1, 12, tau, radius=100.0)
    assert abs(qval - direct) / abs(direct) < 1e-12


def test_level2_duality():
    data = AutomorphyData(weight=12, chi=TrivialMultiplier(),
                          rho=trivial_representation(), group=gamma0(2))
    tr = TruncationParams(c_max=300, tail_tol=1e-2, ctx=CTX)
    for (n1, n2) in ((1, 1), (1, 2), (2, 1)):
        rep = verify_duality(data, 10, n1, 1, n2, 1, tr)
        assert rep.residual < 1e-8
