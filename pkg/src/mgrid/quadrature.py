"""Vertical-ray quadrature for period integrals and integral L-values.

Every contour used here is a vertical ray [z0, z0 + i*infinity) carrying an
integrand  f(z) * (P + R t)^M  with z = z0 + i t and f given by a stored
q-expansion.  Decaying Fourier terms are integrated by composite
Gauss-Legendre on [0, V] plus the closed-form tail from height V; the
finitely many exponentially growing terms (the principal part, when f is
weakly holomorphic) are integrated in closed form over the full ray, which
is exactly their regularized value: the analytic continuation of
int_0^inf t^j e^{-beta t} dt = j! / beta^{j+1} to Re(beta) < 0.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .series import FourierSeries

__all__ = ["vertical_poly_integral", "regularized_moment", "eval_component_grid"]

_GL_NODES = 32


@lru_cache(maxsize=8)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def eval_component_grid(series: FourierSeries, j: int, zs: np.ndarray,
                        principal: bool = True) -> np.ndarray:
    """Component j of the series on a grid of points (complex128).

    principal=False drops the exponentially growing terms (freq < 0).
    """
    lam = float(series.automorphy.lam)
    freqs, coeffs = [], []
    for (n, jj), v in series.items():
        if jj != j:
            continue
        f = float(series.freq(n, jj))
        if not principal and f < 0:
            continue
        freqs.append(f)
        coeffs.append(complex(v))
    if not freqs:
        return np.zeros_like(zs, dtype=complex)
    freqs = np.asarray(freqs)
    coeffs = np.asarray(coeffs)
    phases = np.exp(2j * np.pi * np.outer(freqs, zs) / lam)
    return coeffs @ phases


def _closed_form_ray(series: FourierSeries, j: int, z0: complex, P: complex,
                     R: complex, M: int, select) -> complex:
    """Exact ray integral of the selected Fourier terms against (P + Rt)^M.

    For each term a e^{2 pi i F z / lambda}:
      i * a * e^{2 pi i F z0 / lambda} *
        sum_j binom(M, j) P^{M-j} R^j * j! / beta^{j+1},   beta = 2 pi F / lambda,
    the j!/beta^{j+1} factor being the regularized moment for beta < 0.
    """
    lam = float(series.automorphy.lam)
    total = 0j
    for (n, jj), v in series.items():
        if jj != j:
            continue
        F = float(series.freq(n, jj))
        if not select(F) or complex(v) == 0:
            continue
        if F == 0:
            raise ValueError("ray integrals require a vanishing constant term")
        beta = 2 * math.pi * F / lam
        inner = 0j
        for m in range(M + 1):
            inner += (math.comb(M, m) * P ** (M - m) * R**m
                      * math.factorial(m) / beta ** (m + 1))
        total += 1j * complex(v) * np.exp(2j * np.pi * F * z0 / lam) * inner
    return total


def vertical_poly_integral(series: FourierSeries, j: int, z0: complex,
                           P: complex, R: complex, M: int,
                           tol: float = 1e-12) -> complex:
    """int_{z0}^{z0 + i inf} f_j(z) (P + R t)^M dz  (z = z0 + i t), regularized.

    Principal-part terms are integrated exactly; the rest by composite
    Gauss-Legendre up to a height V where the first neglected contribution
    is below tol, with the closed-form tail of the stored series added.
    """
    lam = float(series.automorphy.lam)
    pos_freqs = [float(series.freq(n, jj)) for (n, jj) in series.coeffs
                 if jj == j and series.freq(n, jj) > 0]
    value = _closed_form_ray(series, j, z0, P, R, M, select=lambda F: F < 0)
    if not pos_freqs:
        return value
    fmin = min(pos_freqs)
    # height where the slowest-decaying term, times polynomial growth, dies
    V = 1.0
    scale = max(abs(P), 1.0) + abs(R)
    while (math.exp(-2 * math.pi * fmin * (z0.imag + V) / lam)
           * (scale * (1 + V)) ** M > tol * 1e-2) and V < 60:
        V *= 1.25
    nodes, weights = _leggauss(_GL_NODES)
    edges = [0.0]
    step = min(0.5, V / 4)
    while edges[-1] < V:
        edges.append(min(edges[-1] + step, V))
        step *= 2
    bulk = 0j
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = (hi - lo) / 2
        ts = lo + half * (nodes + 1)
        zs = z0 + 1j * ts
        fv = eval_component_grid(series, j, zs, principal=False)
        integrand = fv * (P + R * ts) ** M
        bulk += half * np.sum(weights * integrand)
    bulk *= 1j  # dz = i dt
    z_top = z0 + 1j * V
    tail = _closed_form_ray(series, j, z_top, P + R * V, R, M,
                            select=lambda F: F > 0)
    return value + bulk + tail


def regularized_moment(series: FourierSeries, gamma, m: int, t0: float = 1.0,
                       tol: float = 1e-12, j: int = 1) -> complex:
    """R. int_{-d/c}^{i inf} f(z) (z + d/c)^m dz for a scalar series f.

    Split at z1 = -d/c + i t0; the leg hugging the cusp is transported to a
    vertical ray at i-infinity by the group element itself:

      lower leg = -chi_f(gamma)^{-1} c^{-m} *
                  int_{gamma z1}^{i inf} f(w) (-c w + a)^{w_f - 2 - m} dw.

    Requires c != 0 and a vanishing constant term.
    """
    a, _, c, d = gamma.as_tuple()
    if c == 0:
        raise ValueError("regularized moments need a group element with c != 0")
    if c < 0:
        gamma = -gamma
        a, _, c, d = gamma.as_tuple()
    if not 0 <= m <= series.weight - 2:
        raise ValueError(
            f"moment order {m} outside 0..weight-2 = {series.weight - 2}")
    if not series.has_zero_constant_term():
        raise ValueError("the constant term must vanish")
    data = series.automorphy
    if data.dim != 1 and j == 1 and any(jj != 1 for (_, jj) in series.coeffs):
        raise NotImplementedError("moments are implemented per scalar component")
    chi_eff = data.scalar_character(j)
    z1 = -d / c + 1j * t0
    upper = vertical_poly_integral(series, j, z1, z1 + d / c, 1j, m, tol)
    w0 = (a * z1 + (a * d - 1) // c) / (c * z1 + d)
    Mlow = series.weight - 2 - m
    low_int = vertical_poly_integral(series, j, w0, -c * w0 + a, -1j * c,
                                     Mlow, tol)
    chi_val = complex(chi_eff.value(gamma))
    return upper - low_int * c ** (-m) / chi_val
