"""The dual grid: weakly holomorphic forms f and harmonic partners G.

For k > 0 and indices n1 - kappa_{alpha_1} >= 0, n2 - kappa'_{alpha_2} > 0:

  * f_{n1,alpha1} is the weight-(k+2) Poincare series on (chi, rho);
  * G_{n2,alpha2} lives at weight -k on (chi-bar, rho-bar).  Its holomorphic
    part is the order-(k+1) Eichler primitive of the weight-(k+2) Poincare
    series on the conjugate data, rescaled so the leading coefficient is 1:

        b(l, j) = a_{n2,alpha2,conj}(l, j) * ((-n2+kappa'_a2)/(l+kappa'_j))^{k+1},

    plus a constant term (present only in components with kappa_j = 0); its
    non-holomorphic coefficients are read off the shadow Poincare series
    P_{n2', alpha2} on (chi, rho) through the weight-raising image of the
    incomplete-gamma factor:

        b^-(l, j) = (-1)^k / k! * ((-n2+kappa'_a2)/(m+kappa_j))^{k+1}
                    * conj(a_{n2',alpha2}(m, j)),
        with l + kappa'_j = -(m + kappa_j).

The two families pair off through the antisymmetric coefficient identity
(`verify_duality`), and the operator images `apply_Dk1` / `apply_xi`
reproduce scaled Poincare series, which is what the checks here verify.

Integer weights only, k >= 1, rho(-I) = I.  The half-integer prototype of
the duality (theta multiplier, plus space) and Weil representations are
out of scope; vanishing at cusps other than i-infinity holds for the
built-in construction and is not re-verified numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .automorphy import AutomorphyData, conjugate, n_prime
from .poincare import constant_term_cf, poincare_coefficient, poincare_series
from .series import FourierSeries, TruncationParams

__all__ = [
    "HarmonicForm",
    "GridPair",
    "build_pair",
    "build_f",
    "build_G",
    "verify_duality",
    "apply_Dk1",
    "apply_xi",
    "check_main2_symmetry",
    "DualityReport",
]


@dataclass
class HarmonicForm:
    """Harmonic weak Maass form of weight -k on the conjugate automorphy.

    holo:    FourierSeries of the holomorphic part (leading coefficient 1
             at (-n2, alpha2), constant term included).
    nonholo: map (l, j) -> b^-(l, j) on indices with l + kappa'_j < 0.
    shadow:  the cusp-form Poincare series P_{n2',alpha2} on (chi, rho).
    """

    k: int
    n2: int
    alpha2: int
    holo: FourierSeries
    nonholo: dict
    nonholo_tails: dict
    shadow: FourierSeries

    @property
    def conj_data(self) -> AutomorphyData:
        return self.holo.automorphy

    def kappa_prime(self, j: int) -> Fraction:
        return self.conj_data.kappa_of(j)

    def b_minus(self, l: int, j: int = 1):
        return self.nonholo.get((l, j), mpmath.mpc(0))


@dataclass
class GridPair:
    f: FourierSeries
    G: HarmonicForm
    duality: "DualityReport"


def build_pair(data: AutomorphyData, k: int, n1: int, alpha1: int, n2: int,
               alpha2: int, trunc: TruncationParams, lmax: int = 12) -> GridPair:
    """Both grid members plus the checked (not assumed) duality residual."""
    f = build_f(data, k, n1, alpha1, trunc, lmax)
    G = build_G(data, k, n2, alpha2, trunc, lmax)
    rep = verify_duality(data, k, n1, alpha1, n2, alpha2, trunc)
    return GridPair(f=f, G=G, duality=rep)


def build_f(data: AutomorphyData, k: int, n1: int, alpha1: int,
            trunc: TruncationParams, lmax: int = 12) -> FourierSeries:
    """f_{n1,alpha1}: the weight-(k+2) Poincare series on (chi, rho)."""
    if k < 1:
        raise ValueError("grid weight parameter k must be a positive integer")
    if not n1 - data.kappa_of(alpha1) >= 0:
        raise ValueError(
            f"grid index requires n1 - kappa_alpha1 >= 0, got "
            f"{n1} - {data.kappa_of(alpha1)}"
        )
    return poincare_series(data, k + 2, n1, alpha1, range(0, lmax + 1), trunc)


def build_G(data: AutomorphyData, k: int, n2: int, alpha2: int,
            trunc: TruncationParams, lmax: int = 12) -> HarmonicForm:
    """G_{n2,alpha2}: the harmonic partner on the conjugate automorphy."""
    if k < 1:
        raise ValueError("grid weight parameter k must be a positive integer")
    cdata = conjugate(data)
    mu = -n2 + cdata.kappa_of(alpha2)  # = -n2 + kappa'_{alpha2} < 0
    if not mu < 0:
        raise ValueError(
            f"grid index requires n2 - kappa'_alpha2 > 0, got {n2} - "
            f"{cdata.kappa_of(alpha2)}"
        )
    p_conj = poincare_series(cdata, k + 2, n2, alpha2, range(0, lmax + 1), trunc)
    cf_vals, cf_tails = constant_term_cf(p_conj, trunc)
    n2p = n_prime(n2, data.kappa_of(alpha2))
    shadow = poincare_series(data, k + 2, n2p, alpha2, range(0, lmax + 1), trunc)
    holo = FourierSeries(-k, cdata, truncation=trunc)
    nonholo, nh_tails = {}, {}
    with trunc.ctx.working():
        mu_mp = mpmath.mpf(mu.numerator) / mu.denominator
        for (l, j), a in p_conj.items():
            yp = p_conj.freq(l, j)
            if (l, j) == (-n2, alpha2):
                holo.coeffs[(l, j)] = mpmath.mpc(1)
                holo.tails[(l, j)] = 0.0
                continue
            ratio = mu_mp / (mpmath.mpf(yp.numerator) / yp.denominator)
            holo.coeffs[(l, j)] = a * ratio ** (k + 1)
            holo.tails[(l, j)] = p_conj.tails[(l, j)] * abs(float(ratio)) ** (k + 1)
        mu_pow = mu_mp ** (k + 1)
        for j in range(1, cdata.dim + 1):
            if cdata.kappa_of(j) == 0:
                holo.coeffs[(0, j)] = mu_pow * cf_vals[j - 1]
                holo.tails[(0, j)] = cf_tails[j - 1] * abs(float(mu_pow))
        # non-holomorphic coefficients read off the shadow
        sign_fact = mpmath.mpf(-1) ** k / mpmath.factorial(k)
        for (m, j), a in shadow.items():
            ym = shadow.freq(m, j)  # = m + kappa_j > 0
            l = -m if data.kappa_of(j) == 0 else -m - 1
            ratio = mu_mp / (mpmath.mpf(ym.numerator) / ym.denominator)
            nonholo[(l, j)] = sign_fact * ratio ** (k + 1) * mpmath.conj(a)
            nh_tails[(l, j)] = shadow.tails[(m, j)] * abs(float(ratio)) ** (k + 1) \
                / math.factorial(k)
    return HarmonicForm(k=k, n2=n2, alpha2=alpha2, holo=holo, nonholo=nonholo,
                        nonholo_tails=nh_tails, shadow=shadow)


@dataclass
class DualityReport:
    n1: int
    alpha1: int
    n2: int
    alpha2: int
    lhs: complex
    rhs: complex
    residual: float


def _holo_b_coefficient(data: AutomorphyData, k: int, n2: int, alpha2: int,
                        l: int, j: int, trunc: TruncationParams):
    """b_{n2,alpha2}(l, j) of G+ without building the whole form."""
    cdata = conjugate(data)
    mu = -n2 + cdata.kappa_of(alpha2)
    yp = l + cdata.kappa_of(j)
    if (l, j) == (-n2, alpha2):
        return mpmath.mpc(1)
    with trunc.ctx.working():
        mu_mp = mpmath.mpf(mu.numerator) / mu.denominator
        if yp > 0:
            a, _ = poincare_coefficient(cdata, k + 2, n2, alpha2, l, j, trunc)
            ymp = mpmath.mpf(yp.numerator) / yp.denominator
            return a * (mu_mp / ymp) ** (k + 1)
        if yp == 0:
            series = FourierSeries(k + 2, cdata,
                                   coeffs={(-n2, alpha2): mpmath.mpc(1)},
                                   truncation=trunc)
            cf_vals, _ = constant_term_cf(series, trunc)
            return mu_mp ** (k + 1) * cf_vals[j - 1]
    raise ValueError(f"G+ has no coefficient at l + kappa'_j = {yp} < 0")


def verify_duality(data: AutomorphyData, k: int, n1: int, alpha1: int,
                   n2: int, alpha2: int, trunc: TruncationParams) -> DualityReport:
    """Residual of a(n1; idx2) = -b(n2; idx1), both sides computed afresh.

    idx2 = n2 - (kappa_{a2} + kappa'_{a2}) on the f side, idx1 mirrored;
    the two sides run through independent (chi, rho) / (chi-bar, rho-bar)
    coefficient sums.
    """
    cdata = conjugate(data)
    if not n1 - data.kappa_of(alpha1) >= 0:
        raise ValueError("n1 index out of grid range")
    if not n2 - cdata.kappa_of(alpha2) > 0:
        raise ValueError("n2 index out of grid range")
    idx2 = n2 - int(data.kappa_of(alpha2) + cdata.kappa_of(alpha2))
    idx1 = n1 - int(data.kappa_of(alpha1) + cdata.kappa_of(alpha1))
    lhs, _ = poincare_coefficient(data, k + 2, n1, alpha1, idx2, alpha2, trunc)
    b = _holo_b_coefficient(data, k, n2, alpha2, idx1, alpha1, trunc)
    rhs = -b
    lhs_c, rhs_c = complex(lhs), complex(rhs)
    denom = max(abs(lhs_c), abs(rhs_c), 1.0)
    return DualityReport(n1, alpha1, n2, alpha2, lhs_c, rhs_c,
                         abs(lhs_c - rhs_c) / denom)


def apply_Dk1(G: HarmonicForm) -> FourierSeries:
    """(k+1)-fold normalized derivative of G: kills the constant term and
    multiplies a+(l, j) by ((l + kappa'_j)/lambda)^{k+1}."""
    k = G.k
    cdata = G.conj_data
    lam = cdata.lam
    out = FourierSeries(k + 2, cdata, truncation=G.holo.truncation)
    ctx = G.holo.truncation.ctx if G.holo.truncation else None
    with (ctx.working() if ctx else mpmath.workprec(120)):
        for (l, j), b in G.holo.items():
            f = G.holo.freq(l, j) / lam
            if f == 0:
                continue
            fmp = mpmath.mpf(f.numerator) / f.denominator
            out.coeffs[(l, j)] = b * fmp ** (k + 1)
            out.tails[(l, j)] = G.holo.tails.get((l, j), 0.0) * abs(float(fmp)) ** (k + 1)
    return out


def apply_xi(G: HarmonicForm) -> FourierSeries:
    """Anti-linear weight-raising image of G, determined by the b^-(l, j):

        coefficient -conj(b^-(l,j)) (-4 pi (l+kappa'_j)/lambda)^{k+1}
        at the frequency -(l + kappa'_j).

    The result must match the scaled shadow within truncation bounds.
    """
    k = G.k
    cdata = G.conj_data
    data = conjugate(cdata)
    lam = cdata.lam
    out = FourierSeries(k + 2, data, truncation=G.holo.truncation)
    ctx = G.holo.truncation.ctx if G.holo.truncation else None
    with (ctx.working() if ctx else mpmath.workprec(120)):
        for (l, j), bm in sorted(G.nonholo.items()):
            fp = (l + cdata.kappa_of(j)) / lam  # negative
            m = -l if cdata.kappa_of(j) == 0 else -l - 1  # -(l+kappa'_j) = m+kappa_j
            fmp = mpmath.mpf(fp.numerator) / fp.denominator
            val = -mpmath.conj(bm) * (-4 * mpmath.pi * fmp) ** (k + 1)
            out.coeffs[(m, j)] = val
            out.tails[(m, j)] = G.nonholo_tails.get((l, j), 0.0) \
                * float(4 * mpmath.pi * abs(fmp)) ** (k + 1)
    return out


def check_main2_symmetry(G1: HarmonicForm, G2: HarmonicForm) -> float:
    """Residual of the shadow-pairing symmetry between two grid members:

        b1^-(-n2~, a2~) (-n2~ + kappa'_{a2~})^{k+1}
          = conj(b2^-(-n2, a2)) (-n2 + kappa'_{a2})^{k+1}.
    """
    if G1.k != G2.k:
        raise ValueError("grid members must share the same weight")
    k = G1.k
    lhs_b = G1.b_minus(-G2.n2, G2.alpha2)
    rhs_b = G2.b_minus(-G1.n2, G1.alpha2)
    x1 = -G2.n2 + G1.kappa_prime(G2.alpha2)
    x2 = -G1.n2 + G2.kappa_prime(G1.alpha2)
    lhs = complex(lhs_b) * float(x1) ** (k + 1)
    rhs = complex(mpmath.conj(rhs_b)) * float(x2) ** (k + 1)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)
