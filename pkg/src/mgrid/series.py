"""Vector-valued q-expansions at i-infinity and their truncation metadata.

A FourierSeries stores complex coefficients indexed by (n, j) where j is the
1-based component index and the attached exponential is

    e^{2 pi i (n + kappa_j) tau / lambda}.

Every stored coefficient carries a finite tail bound (the certified error of
the c-sum that produced it; exact coefficients carry 0.0).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .automorphy import AutomorphyData
from .precision import DEFAULT_CONTEXT, PrecisionContext

__all__ = ["TruncationParams", "FourierSeries"]


@dataclass(frozen=True)
class TruncationParams:
    """Cutoff of the c-sums, the tail tolerance they must certify, and the
    working precision used for Bessel/gamma prefactors and accumulation.

    layer_bits pins the phase-evaluation precision of the Kloosterman
    layers; None selects it automatically from the context and the box
    size (see poincare.layer_bits_for).  Runs being compared against each
    other's tail bounds should pin the same value.
    """

    c_max: int = 5000
    tail_tol: float = 1e-8
    ctx: PrecisionContext = DEFAULT_CONTEXT
    allow_slow_convergence: bool = False
    layer_bits: int | None = None

    def __post_init__(self):
        if self.c_max < 1:
            raise ValueError("c_max must be >= 1")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")
        if self.layer_bits is not None and self.layer_bits < 53:
            raise ValueError("layer_bits must be >= 53")


class FourierSeries:
    """Indexed coefficient table a(n, j) of a vector-valued expansion."""

    def __init__(self, weight: int, automorphy: AutomorphyData, coeffs=None,
                 tails=None, truncation: TruncationParams | None = None):
        self.weight = weight
        self.automorphy = automorphy
        self.coeffs: dict = dict(coeffs or {})
        self.tails: dict = dict(tails or {})
        self.truncation = truncation
        for (n, j) in self.coeffs:
            if not 1 <= j <= automorphy.dim:
                raise ValueError(f"component index {j} outside 1..{automorphy.dim}")

    @property
    def dim(self) -> int:
        return self.automorphy.dim

    def freq(self, n: int, j: int) -> Fraction:
        """n + kappa_j (the frequency in units of 1/lambda)."""
        return n + self.automorphy.kappa_of(j)

    def coefficient(self, n: int, j: int = 1):
        return self.coeffs.get((n, j), mpmath.mpc(0))

    def tail_bound(self, n: int, j: int = 1) -> float:
        return self.tails.get((n, j), 0.0)

    def items(self):
        """Deterministic iteration order: by component, then by n."""
        return sorted(self.coeffs.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def principal_support(self):
        """Indices with n + kappa_j < 0 (exponential growth at i-infinity)."""
        return [(n, j) for (n, j) in sorted(self.coeffs) if self.freq(n, j) < 0]

    def constant_indices(self):
        return [(n, j) for (n, j) in sorted(self.coeffs) if self.freq(n, j) == 0]

    def has_zero_constant_term(self) -> bool:
        return all(self.coeffs[idx] == 0 for idx in self.constant_indices())

    def is_cusp_form(self) -> bool:
        """No principal part and no constant term (all frequencies positive)."""
        return all(
            self.freq(n, j) > 0 or self.coeffs[(n, j)] == 0
            for (n, j) in self.coeffs
        )

    def unconverged_entries(self):
        tol = self.truncation.tail_tol if self.truncation else np.inf
        return [idx for idx in sorted(self.tails) if not self.tails[idx] <= tol]

    def _work_bits(self) -> int:
        if self.truncation is not None:
            return self.truncation.ctx.mantissa_bits + 20
        return 133

    def scale(self, factor) -> "FourierSeries":
        out = FourierSeries(self.weight, self.automorphy, truncation=self.truncation)
        af = abs(complex(factor))
        # coefficient arithmetic must not round stored values to ambient prec
        with mpmath.workprec(max(mpmath.mp.prec, self._work_bits())):
            out.coeffs = {k: v * factor for k, v in self.coeffs.items()}
        out.tails = {k: t * af for k, t in self.tails.items()}
        return out

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        if other.automorphy is not self.automorphy and other.automorphy != self.automorphy:
            raise ValueError("cannot add series with different automorphy data")
        if other.weight != self.weight:
            raise ValueError("cannot add series of different weights")
        out = FourierSeries(self.weight, self.automorphy, dict(self.coeffs),
                            dict(self.tails), self.truncation)
        with mpmath.workprec(max(mpmath.mp.prec, self._work_bits())):
            for k, v in other.coeffs.items():
                out.coeffs[k] = out.coeffs.get(k, mpmath.mpc(0)) + v
        for k, t in other.tails.items():
            out.tails[k] = out.tails.get(k, 0.0) + t
        return out

    def component_coefficients(self, j: int):
        return {n: v for (n, jj), v in self.coeffs.items() if jj == j}

    def evaluate(self, tau) -> np.ndarray:
        """Value of the q-expansion at tau (vector of length p, complex128).

        Plain truncated-series evaluation; the caller is responsible for
        choosing a coefficient range that has converged at Im(tau).
        """
        tau = complex(tau)
        if not tau.imag > 0:
            raise ValueError("tau must lie in the upper half-plane")
        lam = float(self.automorphy.lam)
        out = np.zeros(self.dim, dtype=complex)
        for (n, j), v in self.items():
            f = float(self.freq(n, j))
            out[j - 1] += complex(v) * np.exp(2j * np.pi * f * tau / lam)
        return out

    def evaluate_component(self, tau, j: int = 1) -> complex:
        return self.evaluate(tau)[j - 1]

    def __repr__(self):
        rng = sorted(n for (n, _) in self.coeffs)
        span = f"{rng[0]}..{rng[-1]}" if rng else "empty"
        return (f"FourierSeries(weight={self.weight}, p={self.dim}, "
                f"n={span}, {len(self.coeffs)} coefficients)")
