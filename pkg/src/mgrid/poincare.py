"""Fourier coefficients of vector-valued Poincare series of weight >= 3.

The series attached to index (n, alpha) averages the exponential
e^{2 pi i (-n + kappa_alpha) gamma tau / lambda} over cosets; its expansion
at i-infinity is the Kronecker-delta leading term plus, for l + kappa_j > 0,
a sum over the double-coset boxes C+(c):

  x := -n + kappa_alpha,   y := l + kappa_j,
  K_c := sum_{(a b; c d) in C+} chi(g)^{-1} rho(g^{-1})_{j,alpha}
         e^{(2 pi i/(c lambda)) (x a + y d)}                 (Kloosterman layer)

  x > 0:  (2 pi/lambda) i^{-w} (y/x)^{(w-1)/2} sum_c c^{-1} K_c J_{w-1}(4 pi sqrt(xy)/(c lambda))
  x = 0:  (-2 pi i)^w / (Gamma(w) lambda^w)    sum_c c^{-w} K_c y^{w-1}
  x < 0:  (2 pi/lambda) i^{-w} (y/-x)^{(w-1)/2} sum_c c^{-1} K_c I_{w-1}(4 pi sqrt(-xy)/(c lambda))

(w = weight).  Layers are evaluated with exact rational phase reduction and
summed in ascending c with compensated accumulation; the returned tail bound
majorises the neglected c > c_max terms via |C+(c)| <= c and the series
bounds J_nu(z), I_nu(z) <= (z/2)^nu/nu! * geometric/exponential factors.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .automorphy import (
    AutomorphyData,
    CompositeMultiplier,
    DiagonalRepresentation,
    DirichletMultiplier,
    TrivialMultiplier,
)
from .groups import cplus_arrays, enumerate_cplus, units_mod
from .precision import compensated_sum, exp2pi
from .series import FourierSeries, TruncationParams

__all__ = [
    "kloosterman_layer",
    "layer_bits_for",
    "poincare_coefficient",
    "poincare_series",
    "constant_term_cf",
    "coefficient_envelope",
]

TWO_PI = 2 * math.pi


def _is_trivial_phase(chi) -> bool:
    if isinstance(chi, TrivialMultiplier):
        return True
    if isinstance(chi, CompositeMultiplier):
        return all(_is_trivial_phase(p) for p in chi.parts)
    return False


def _is_d_only_phase(chi) -> bool:
    """Characters whose phase depends on d alone (Dirichlet tables)."""
    if _is_trivial_phase(chi):
        return True
    if isinstance(chi, DirichletMultiplier):
        return True
    if isinstance(chi, CompositeMultiplier):
        return all(_is_d_only_phase(p) for p in chi.parts)
    return False


def _exponent_sum(nums: np.ndarray, den: int, bits: int = 53):
    """sum of e^{2 pi i num/den} over an int64 numerator array.

    bits <= 53 evaluates the unit phases in float64 (the exponents are
    already reduced exactly, so each phase is correct to an ulp); larger
    bits evaluate one mpmath exponential per distinct residue, which is
    what removes the layer noise floor in cancellation-heavy regimes.
    """
    if nums.size == 0:
        return 0j
    if bits <= 53:
        angles = (nums % den).astype(np.float64) * (TWO_PI / den)
        return complex(np.sum(np.cos(angles)) + 1j * np.sum(np.sin(angles)))
    # one exact root of unity, advanced along the sorted residues by gap
    # powers: D sequential multiplications cost ~D * 2^-prec accumulated
    # error, far below the context tolerance.
    residues, counts = np.unique(nums % den, return_counts=True)
    with mpmath.workprec(bits + 16):
        omega = exp2pi(Fraction(1, den))
        total = mpmath.mpc(0)
        cur = mpmath.mpc(1)
        prev = 0
        for r, cnt in zip(residues.tolist(), counts.tolist()):
            if r != prev:
                cur = cur * omega ** (r - prev)
                prev = r
            total += cnt * cur
        return +total


def _d_phase_numerators(chi, d_arr: np.ndarray, c: int):
    """(num, den) for phases of a d-only character along an element array."""
    if _is_trivial_phase(chi):
        return np.zeros(len(d_arr), dtype=np.int64), 1
    phases = {}

    def collect(m):
        if isinstance(m, DirichletMultiplier):
            for u, q in m.table:
                phases.setdefault(m.modulus, {}).setdefault(u, Fraction(0))
                phases[m.modulus][u] += q
        elif isinstance(m, CompositeMultiplier):
            for p in m.parts:
                collect(p)

    collect(chi)
    den = 1
    for tab in phases.values():
        for q in tab.values():
            den = den * q.denominator // math.gcd(den, q.denominator)
    num = np.zeros(len(d_arr), dtype=np.int64)
    for modulus, tab in phases.items():
        lut = np.zeros(modulus, dtype=np.int64)
        for u, q in tab.items():
            lut[u] = q.numerator * (den // q.denominator)
        num += lut[d_arr % modulus]
    return num, den


@lru_cache(maxsize=1 << 17)
def _scalar_layer_cached(spec, c, x: Fraction, y: Fraction, chi_eff, bits):
    return _scalar_layer_impl(spec, c, x, y, chi_eff, bits)


def _scalar_layer(data: AutomorphyData, c: int, x: Fraction, y: Fraction,
                  chi_eff, bits: int = 53):
    try:
        return _scalar_layer_cached(data.group, c, x, y, chi_eff, bits)
    except TypeError:  # unhashable custom multiplier
        return _scalar_layer_impl(data.group, c, x, y, chi_eff, bits)


def _scalar_layer_impl(spec, c: int, x: Fraction, y: Fraction,
                       chi_eff, bits: int):
    # exponent (x a + y d)/c over denominator D0 = qx qy c (lambda = 1 here)
    qx, qy = x.denominator, y.denominator
    d0 = qx * qy * c
    if _is_d_only_phase(chi_eff):
        if x == 0:
            d_arr = -units_mod(c)
            base = y.numerator * qx * d_arr
        elif y == 0 and _is_trivial_phase(chi_eff):
            a_arr = units_mod(c)
            base = x.numerator * qy * a_arr
            d_arr = None
        else:
            a_arr, d_arr = cplus_arrays(spec, c)
            base = x.numerator * qy * a_arr + y.numerator * qx * d_arr
        if d_arr is None:
            return _exponent_sum(base, d0, bits)
        chi_num, chi_den = _d_phase_numerators(chi_eff, d_arr, c)
        den = d0 * chi_den // math.gcd(d0, chi_den) if chi_den > 1 else d0
        nums = base * (den // d0) - chi_num * (den // chi_den)
        return _exponent_sum(nums, den, bits)
    # general rational-phase character: per-element exact Fraction exponents,
    # reduced to integers over one common denominator
    exps = []
    for g in enumerate_cplus(spec, c):
        e = Fraction(x * g.a + y * g.d, c) - chi_eff.phase(g)
        exps.append(e - math.floor(e))
    if not exps:
        return 0j
    den = 1
    for e in exps:
        den = den * e.denominator // math.gcd(den, e.denominator)
    nums = np.array([e.numerator * (den // e.denominator) for e in exps],
                    dtype=np.int64)
    return _exponent_sum(nums, den, bits)


# Element budget above which high-precision layers fall back to float64:
# the mp path costs one mp-exponential per box element.
MP_LAYER_ELEMENT_BUDGET = 40_000


def layer_bits_for(ctx, c_max: int, level: int = 1) -> int:
    """Working precision for the Kloosterman layers of one coefficient run.

    The layers are unit-modulus sums with exactly reduced rational phases,
    so float64 already gives ~1e-16 relative accuracy per element; that
    floor only matters when a downstream evaluation cancels many digits
    (regularized L-series at split heights away from 1).  When the context
    asks for more than double precision and the total box size
    sum_{c <= c_max} phi(c) ~ 0.31 c_max^2 / level stays within budget, the
    layers run at full context precision; otherwise they stay in float64.
    Deterministic for fixed (ctx, c_max, level).
    """
    if ctx.mantissa_bits <= 64:
        return 53
    est_elements = (31 * c_max * c_max) // (100 * level)
    return ctx.mantissa_bits if est_elements <= MP_LAYER_ELEMENT_BUDGET else 53


def kloosterman_layer(data: AutomorphyData, c: int, x: Fraction, y: Fraction,
                      j: int = 1, alpha: int = 1, bits: int = 53):
    """Inner sum over C+(c) with exponential weights x on a and y on d.

    For the trivial character and p = 1 this is the classical Kloosterman
    sum S(x, y; c).  Exact zero when rho is diagonal and j != alpha.
    bits selects the phase-evaluation precision (see layer_bits_for).
    """
    if data.group.lam != 1:
        raise NotImplementedError("built-in enumeration requires lambda == 1")
    if c % data.group.level != 0:
        return 0j
    x, y = Fraction(x), Fraction(y)
    if isinstance(data.rho, DiagonalRepresentation):
        if j != alpha:
            return 0j
        return _scalar_layer(data, c, x, y, data.scalar_character(alpha), bits)
    total = 0j
    for g in enumerate_cplus(data.group, c):
        w = complex(data.chi.value(g)) ** -1 * data.rho.inv_entry(g, j, alpha)
        total += w * np.exp(2j * np.pi * float((x * g.a + y * g.d) / c))
    return total


def _c_values(spec, c_max: int):
    return range(spec.level, c_max + 1, spec.level)


def _check_weight(weight: int, trunc: TruncationParams, level: int = 1):
    if weight < 3:
        raise ValueError("Poincare coefficient sums diverge for weight < 3")
    if trunc.c_max < level:
        raise ValueError(
            f"c_max = {trunc.c_max} is below the smallest positive c "
            f"(= level {level}) of the group"
        )
    if weight == 3 and not trunc.allow_slow_convergence:
        raise ValueError(
            "weight 3 converges only conditionally; pass "
            "allow_slow_convergence=True (CLI: --allow-slow-convergence)"
        )


def _bessel_tail(weight: int, zeta: float, c_max: int, rfac: float,
                 lam: float, modified: bool) -> float:
    """Certified bound on the neglected c > c_max Bessel-case terms."""
    nu = weight - 1
    q = (zeta / (c_max + 1)) ** 2 / (nu + 1)
    if q >= 0.5:
        return math.inf
    coef = (TWO_PI / lam) * rfac * zeta**nu / math.factorial(nu) / (1 - q)
    if modified:
        coef *= math.exp(q)
    return coef * c_max ** (1 - nu) / (nu - 1)


def poincare_coefficient(data: AutomorphyData, weight: int, n: int, alpha: int,
                         l: int, j: int, trunc: TruncationParams):
    """Coefficient a_{n,alpha}(l, j) of the weight-`weight` Poincare series.

    Returns (value, tail_bound).  The value is the c <= c_max partial sum in
    ascending c with compensated accumulation; tail_bound majorises the
    neglected remainder (math.inf when the bound cannot certify decay yet,
    which callers should treat as unconverged).  The Kronecker-delta leading
    term at (-n, alpha) is *not* included here; poincare_series adds it.
    """
    _check_weight(weight, trunc, data.group.level)
    x = -n + data.kappa_of(alpha)
    y = l + data.kappa_of(j)
    if not y > 0:
        raise ValueError(f"need l + kappa_j > 0, got {y}")
    lam = data.lam
    ctx = trunc.ctx
    w = weight
    bits = trunc.layer_bits or layer_bits_for(ctx, trunc.c_max, data.group.level)
    # float64 layers carry ~phi(c) ulps of absolute noise each; fold that
    # into the certified bound so the tail field stays an honest majorant.
    noise = 0.0
    with ctx.working():
        lam_mp = mpmath.mpf(lam.numerator) / lam.denominator
        phase = exp2pi(Fraction(-w, 4))  # i^{-w}
        terms = []
        if x == 0:
            pref0 = (2 * mpmath.pi / lam_mp) ** w / mpmath.factorial(w - 1) * phase
            ymp = mpmath.mpf(y.numerator) / y.denominator
            for c in _c_values(data.group, trunc.c_max):
                layer = kloosterman_layer(data, c, x, y, j, alpha, bits)
                pref_c = pref0 * ymp ** (w - 1) * mpmath.mpf(c) ** -w
                if bits <= 53:
                    noise += float(abs(pref_c)) * c * 2.0 ** -50
                if layer == 0:
                    continue
                terms.append(pref_c * mpmath.mpc(layer))
            value = compensated_sum(terms)
            a2 = (TWO_PI / float(lam)) ** w / math.factorial(w - 1) * float(y) ** (w - 1)
            tail = a2 * trunc.c_max ** (2 - w) / (w - 2)
            return value, tail + noise
        modified = x < 0
        xabs = abs(x)
        ratio = mpmath.mpf((y / xabs).numerator) / (y / xabs).denominator
        rfac = ratio ** (mpmath.mpf(w - 1) / 2)
        pref = 2 * mpmath.pi / lam_mp * phase * rfac
        arg_base = 4 * mpmath.pi * mpmath.sqrt(
            mpmath.mpf((xabs * y).numerator) / (xabs * y).denominator) / lam_mp
        from .specialfn import bessel_i, bessel_j
        bessel = bessel_i if modified else bessel_j
        for c in _c_values(data.group, trunc.c_max):
            layer = kloosterman_layer(data, c, x, y, j, alpha, bits)
            if layer == 0:
                continue
            bval = bessel(w - 1, arg_base / c, ctx)
            if bits <= 53:
                # layer error <= phi(c) ulps <= c * 2^-50, times |pref/c|
                noise += float(abs(pref * bval)) * 2.0 ** -50
            terms.append(pref / c * bval * mpmath.mpc(layer))
        value = compensated_sum(terms)
        zeta = float(arg_base) / 2
        tail = _bessel_tail(w, zeta, trunc.c_max, float(rfac), float(lam), modified)
        return value, tail + noise


def poincare_series(data: AutomorphyData, weight: int, n: int, alpha: int,
                    l_range, trunc: TruncationParams) -> FourierSeries:
    """Expansion of P_{n,alpha} at i-infinity over the requested l range.

    Includes the delta_{j,alpha} leading term at index (-n, alpha); indices
    with l + kappa_j <= 0 are skipped (they do not occur in the expansion).
    """
    _check_weight(weight, trunc, data.group.level)
    if not 1 <= alpha <= data.dim:
        raise ValueError(f"component alpha={alpha} outside 1..{data.dim}")
    series = FourierSeries(weight, data, truncation=trunc)
    for j in range(1, data.dim + 1):
        for l in l_range:
            if l + data.kappa_of(j) <= 0:
                continue
            val, tail = poincare_coefficient(data, weight, n, alpha, l, j, trunc)
            series.coeffs[(l, j)] = val
            series.tails[(l, j)] = tail
    key = (-n, alpha)
    series.coeffs[key] = series.coeffs.get(key, mpmath.mpc(0)) + 1
    series.tails.setdefault(key, 0.0)
    return series


def constant_term_cf(f: FourierSeries, trunc: TruncationParams):
    """Constant term of the order -(k+1) Eichler primitive of f (weight k+2).

    For f with poles only at i-infinity,

      (c_f)_j = delta_{kappa_j,0} / (lambda (k+1)!) *
                sum_t sum_{l + kappa_t < 0} sum_{C+} a(l,t) (-2 pi i/c)^{k+2}
                chi^{-1}(g) rho(g^{-1})_{j,t} e^{(2 pi i/(c lambda)) (l+kappa_t) a}.

    Returns (values, tails): one complex constant and one tail bound per
    component.
    """
    data = f.automorphy
    w = f.weight  # = k + 2
    lam = data.lam
    ctx = trunc.ctx
    principal = [(n, t) for (n, t) in f.principal_support() if f.coeffs[(n, t)] != 0]
    values, tails = [], []
    bits = layer_bits_for(ctx, trunc.c_max, data.group.level)
    with ctx.working():
        lam_mp = mpmath.mpf(lam.numerator) / lam.denominator
        pref_phase = exp2pi(Fraction(-w, 4))  # (-i)^w
        for j in range(1, data.dim + 1):
            if data.kappa_of(j) != 0:
                values.append(mpmath.mpc(0))
                tails.append(0.0)
                continue
            terms = []
            tail = 0.0
            for (n, t) in principal:
                a_nt = f.coeffs[(n, t)]
                x = f.freq(n, t)  # < 0; rides on the 'a' entry
                for c in _c_values(data.group, trunc.c_max):
                    layer = kloosterman_layer(data, c, x, Fraction(0), j, t,
                                              bits)
                    if layer == 0:
                        continue
                    pref = (2 * mpmath.pi / c) ** w * pref_phase \
                        / (lam_mp * mpmath.factorial(w - 1))
                    terms.append(a_nt * pref * mpmath.mpc(layer))
                amp = abs(complex(a_nt)) * (TWO_PI / float(lam)) ** w \
                    / math.factorial(w - 1) * float(lam) ** (w - 1)
                tail += amp * trunc.c_max ** (2 - w) / (w - 2)
            values.append(compensated_sum(terms))
            tails.append(tail)
    return values, tails


def coefficient_envelope(data: AutomorphyData, weight: int, n: int, alpha: int,
                         l: int, j: int) -> float:
    """Certified upper bound on |a_{n,alpha}(l, j)| (all three cases).

    Uses |C+(c)| <= c, |J_nu| <= I_nu and
    I_nu(z) <= (z/2)^nu e^z / nu!, so the c-sum is bounded by
    (2 pi/lambda) rfac (zeta)^nu e^{2 zeta} zeta(nu) / nu! with
    zeta = 2 pi sqrt(|x| y)/lambda.  Used to pick truncation points for
    L-series m-sums; deliberately crude but safe.
    """
    x = float(-n + data.kappa_of(alpha))
    y = float(l + data.kappa_of(j))
    if y <= 0:
        return 0.0
    lam = float(data.lam)
    w = weight
    if x == 0:
        return (TWO_PI / lam) ** w / math.factorial(w - 1) * y ** (w - 1) * 2.0
    nu = w - 1
    zeta = TWO_PI * math.sqrt(abs(x) * y) / lam
    rfac = (y / abs(x)) ** ((w - 1) / 2)
    zeta_nu = 1.7  # > zeta(2) >= zeta(nu) for every nu >= 2
    log_env = (math.log(TWO_PI / lam) + math.log(rfac) + nu * math.log(zeta)
               + 2 * zeta - math.lgamma(nu + 1) + math.log(zeta_nu))
    return math.exp(min(log_env, 700.0)) if log_env < 700 else math.inf
