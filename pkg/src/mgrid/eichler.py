"""Eichler integrals, supplementary functions and period polynomials.

For f = sum a(n,j) e^{2 pi i (n+kappa_j) tau/lambda} of weight k+2 with
vanishing constant term, the order-(k+1) primitive and its variants are

    E_f:  coefficient map a(n,j) -> a(n,j) ((n+kappa_j)/lambda)^{-(k+1)},
    E^H_f = E_f + c_f            (c_f the constant forced by the principal part),
    E^N_f = (1/c_{k+2}) [ int_tau^{i inf} f(z) (conj(tau)-z)^k dz ]^-   (cusp f),

with c_{k+2} = -k!/(2 pi i)^{k+1}.  The period polynomials

    r   = c_{k+2} (E_f  - E_f |_{-k} gamma),
    r^H = c_{k+2} (E^H_f - E^H_f |_{-k} gamma),
    r^N = c_{k+2} (E^N_f - E^N_f |_{-k} gamma)

have degree <= k; r is assembled from k+1 critical twisted L-values, r^N
from quadrature moments, and r^H differs from r by the constant-term
correction  c_{k+2} c_f (1 - chi(gamma)^{-1} c^k (tau + d/c)^k).

Period routines are implemented for scalar series (p = 1); a diagonal
representation reduces componentwise to this case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .automorphy import AutomorphyData, conjugate
from .groups import GroupElement, moebius
from .poincare import constant_term_cf, poincare_series
from .quadrature import regularized_moment, vertical_poly_integral
from .series import FourierSeries, TruncationParams

__all__ = [
    "PeriodPolynomial",
    "c_weight",
    "eichler_E",
    "eichler_EH",
    "eichler_EN",
    "supplementary",
    "period_r",
    "period_r_parabolic",
    "period_rH",
    "period_r_quadrature",
    "period_rN",
    "check_supplementary_identity",
    "slash_poly_value",
    "SAMPLE_POINTS",
]

# Fixed generic sample points, away from the real axis.
SAMPLE_POINTS = (1j, 1 / 3 + 1j, -0.25 + 2j, 0.1 + 0.7j, -0.6 + 1.5j)


def c_weight(w: int) -> complex:
    """c_w = -(w-2)!/(2 pi i)^{w-1}; period normalization for weight w."""
    return complex(-mpmath.factorial(w - 2) / (2j * mpmath.pi) ** (w - 1))


@dataclass
class PeriodPolynomial:
    """Degree <= k polynomial sum_i coeffs[i] (tau + shift)^i.

    shift = d/c for a hyperbolic/elliptic gamma, 0 for parabolic ones.
    """

    gamma: GroupElement
    k: int
    coeffs: np.ndarray
    shift: float = field(default=0.0)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.k + 1,):
            raise ValueError("need exactly k+1 coefficients")

    def __call__(self, tau) -> complex:
        return complex(np.polyval(self.coeffs[::-1], complex(tau) + self.shift))

    def conjugate_reflected(self) -> "PeriodPolynomial":
        """tau -> conj(P(conj(tau))): conjugates the coefficients (real shift)."""
        return PeriodPolynomial(self.gamma, self.k, np.conj(self.coeffs), self.shift)

    def __add__(self, other: "PeriodPolynomial") -> "PeriodPolynomial":
        if other.k != self.k or other.shift != self.shift:
            raise ValueError("incompatible period polynomials")
        return PeriodPolynomial(self.gamma, self.k, self.coeffs + other.coeffs,
                                self.shift)

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0


def _require_scalar(f: FourierSeries):
    if f.automorphy.dim != 1:
        raise NotImplementedError(
            "period/Eichler routines act on scalar series; apply them "
            "componentwise through a diagonal representation"
        )


def eichler_E(f: FourierSeries, k: int) -> FourierSeries:
    """Coefficient-level Eichler primitive of order k+1 (weight -k series)."""
    if f.weight != k + 2:
        raise ValueError(f"series weight {f.weight} != k+2 = {k + 2}")
    if not f.has_zero_constant_term():
        raise ValueError("Eichler primitive needs a vanishing constant term")
    lam = f.automorphy.lam
    out = FourierSeries(-k, f.automorphy, truncation=f.truncation)
    ctx = f.truncation.ctx if f.truncation else None
    with (ctx.working() if ctx else mpmath.workprec(120)):
        for (n, j), a in f.items():
            fr = f.freq(n, j) / lam
            if fr == 0:
                continue
            fmp = mpmath.mpf(fr.numerator) / fr.denominator
            out.coeffs[(n, j)] = a * fmp ** (-(k + 1))
            out.tails[(n, j)] = f.tails.get((n, j), 0.0) * abs(float(fmp)) ** (-(k + 1))
    return out


def eichler_EH(f: FourierSeries, k: int, trunc: TruncationParams):
    """(E_f, c_f): the primitive plus the constant its principal part forces."""
    e = eichler_E(f, k)
    cf_vals, cf_tails = constant_term_cf(f, trunc)
    return e, cf_vals, cf_tails


def eichler_EN(f: FourierSeries, tau, k: int, tol: float = 1e-12) -> complex:
    """E^N_f(tau) for a genuine cusp form, by vertical-ray quadrature."""
    _require_scalar(f)
    if f.weight != k + 2:
        raise ValueError(f"series weight {f.weight} != k+2 = {k + 2}")
    if not f.is_cusp_form():
        raise ValueError("E^N is defined only for cusp forms")
    tau = complex(tau)
    integral = vertical_poly_integral(f, 1, tau, tau.conjugate() - tau, -1j, k,
                                      tol=tol)
    return integral.conjugate() / c_weight(k + 2)


def supplementary(combo, data: AutomorphyData, k: int, trunc: TruncationParams,
                  lmax: int = 12) -> FourierSeries:
    """f* = sum conj(b_i) P_{n_i', alpha_i} on the conjugate automorphy.

    combo is a list of (b_i, n_i, alpha_i) describing the cusp form
    f = sum b_i P_{n_i, alpha_i}; each index must satisfy
    -n_i + kappa_{alpha_i} > 0.
    """
    from .automorphy import n_prime

    cdata = conjugate(data)
    out = FourierSeries(k + 2, cdata, truncation=trunc)
    for (b, n, alpha) in combo:
        if not -n + data.kappa_of(alpha) > 0:
            raise ValueError(f"(n, alpha) = ({n}, {alpha}) is not a cusp direction")
        npr = n_prime(n, data.kappa_of(alpha))
        p = poincare_series(cdata, k + 2, npr, alpha, range(0, lmax + 1), trunc)
        out = out + p.scale(mpmath.conj(mpmath.mpc(b)))
    return out


def period_r_parabolic(f: FourierSeries, gamma: GroupElement, k: int) -> PeriodPolynomial:
    """Zero polynomial: the Eichler primitive is periodic under +-T^m."""
    if gamma.c != 0:
        raise ValueError("parabolic period requested for c != 0")
    if abs(gamma.a) != 1:
        raise ValueError(f"{gamma.as_tuple()} is not +-T^m")
    return PeriodPolynomial(gamma, k, np.zeros(k + 1, dtype=complex), 0.0)


def period_r(f: FourierSeries, gamma: GroupElement, k: int,
             trunc: TruncationParams, t0: float = 1.0) -> PeriodPolynomial:
    """r(f, gamma; tau) from the k+1 critical twisted L-values:

        sum_{n=0}^k i^{1-n} binom(k,n) L*(f, zeta_{c lam}^{-d}, n+1)
                    (tau + d/c)^{k-n}.
    """
    _require_scalar(f)
    if gamma.c == 0:
        return period_r_parabolic(f, gamma, k)
    from .lfun import TwistSpec, lvalue_series

    twist = TwistSpec.from_element(gamma, f.automorphy.lam)
    g = twist.gamma
    coeffs = np.zeros(k + 1, dtype=complex)
    for n in range(k + 1):
        lv = lvalue_series(f, twist, n + 1, t0=t0, trunc=trunc)
        coeffs[k - n] = complex(1j ** (1 - n)) * math.comb(k, n) * complex(lv.lstar)
    return PeriodPolynomial(g, k, coeffs, shift=g.d / g.c)


def _constant_correction(f: FourierSeries, gamma: GroupElement, k: int,
                         trunc: TruncationParams) -> np.ndarray:
    """Coefficients of c_{k+2} c_f (1 - chi(g)^{-1} c^k (tau + d/c)^k)."""
    cf_vals, _ = constant_term_cf(f, trunc)
    cf = complex(cf_vals[0])
    out = np.zeros(k + 1, dtype=complex)
    if cf == 0:
        return out
    ck2 = c_weight(k + 2)
    chi_inv = complex(f.automorphy.scalar_character(1).value(gamma)) ** -1
    out[0] = ck2 * cf
    out[k] += -ck2 * cf * chi_inv * gamma.c**k
    return out


def period_rH(f: FourierSeries, gamma: GroupElement, k: int,
              trunc: TruncationParams, t0: float = 1.0) -> PeriodPolynomial:
    """r^H = r + constant-term correction (nonzero only when kappa_1 = 0
    and f has a pole; in particular r^H = r for genuine cusp forms)."""
    _require_scalar(f)
    if gamma.c == 0:
        return period_r_parabolic(f, gamma, k)
    base = period_r(f, gamma, k, trunc, t0)
    if gamma.c < 0:
        gamma = -gamma
    corr = _constant_correction(f, gamma, k, trunc)
    return PeriodPolynomial(base.gamma, k, base.coeffs + corr, base.shift)


def period_r_quadrature(f: FourierSeries, gamma: GroupElement, k: int,
                        t0: float = 1.0, tol: float = 1e-12) -> PeriodPolynomial:
    """r(f, gamma; tau) as the regularized path integral

        R.int_{gamma^{-1}(i inf)}^{i inf} f(z) (tau - z)^k dz,

    expanded through the moments R.int f(z) (z + d/c)^m dz computed by
    Gauss-Legendre quadrature.  Independent of the L-series route.
    """
    _require_scalar(f)
    if gamma.c == 0:
        return period_r_parabolic(f, gamma, k)
    if gamma.c < 0:
        gamma = -gamma
    shift = gamma.d / gamma.c
    coeffs = np.zeros(k + 1, dtype=complex)
    for m in range(k + 1):
        mom = regularized_moment(f, gamma, m, t0=t0, tol=tol)
        coeffs[k - m] += math.comb(k, m) * (-1) ** m * mom
    return PeriodPolynomial(gamma, k, coeffs, shift)


def period_rN(f: FourierSeries, gamma: GroupElement, k: int,
              t0: float = 1.0, tol: float = 1e-12) -> PeriodPolynomial:
    """r^N(f, gamma; tau) = [ int_{gamma^{-1}(i inf)}^{i inf} f(z)
    (conj(tau) - z)^k dz ]^-  for a genuine cusp form, by quadrature."""
    _require_scalar(f)
    if not f.is_cusp_form():
        raise ValueError("r^N is defined only for cusp forms")
    if gamma.c == 0:
        return period_r_parabolic(f, gamma, k)
    if gamma.c < 0:
        gamma = -gamma
    shift = gamma.d / gamma.c
    coeffs = np.zeros(k + 1, dtype=complex)
    for m in range(k + 1):
        mom = regularized_moment(f, gamma, m, t0=t0, tol=tol)
        coeffs[k - m] += math.comb(k, m) * (-1) ** m * mom.conjugate()
    return PeriodPolynomial(gamma, k, coeffs, shift)


def slash_poly_value(poly: PeriodPolynomial, data: AutomorphyData, k: int,
                     gamma: GroupElement, tau) -> complex:
    """(poly |_{-k, chi} gamma)(tau) = chi(g)^{-1} (c tau + d)^k poly(g tau)."""
    chi_inv = complex(data.scalar_character(1).value(gamma)) ** -1
    tau = complex(tau)
    jfac = (gamma.c * tau + gamma.d) ** k
    return chi_inv * jfac * poly(moebius(gamma, tau))


def check_supplementary_identity(combo, data: AutomorphyData, k: int,
                                 gamma: GroupElement, trunc: TruncationParams,
                                 samples=SAMPLE_POINTS, t0: float = 1.0,
                                 lmax: int = 60) -> float:
    """Max normalized residual of r^H(f, g; tau) = [r^H(f*, g; conj tau)]^-
    over the sample points, for f = sum b_i P_{n_i,alpha_i} a cusp form.

    Both sides run through their own L-value pipelines: the left on the
    coefficients of f, the right on those of the supplementary function.
    """
    f = None
    for (b, n, alpha) in combo:
        p = poincare_series(data, k + 2, n, alpha, range(0, lmax + 1), trunc)
        p = p.scale(mpmath.mpc(b))
        f = p if f is None else f + p
    if f is None:
        return 0.0
    fstar = supplementary(combo, data, k, trunc, lmax=lmax)
    lhs = period_rH(f, gamma, k, trunc, t0)
    rhs = period_rH(fstar, gamma, k, trunc, t0).conjugate_reflected()
    vals_l = [lhs(t) for t in samples]
    vals_r = [rhs(t) for t in samples]
    scale = max(max(abs(v) for v in vals_l), 1.0)
    return max(abs(a - b) for a, b in zip(vals_l, vals_r)) / scale
