"""Multiplier systems, unitary representations and cusp parameters.

A multiplier here is a unitary character chi of the group satisfying the
non-triviality condition chi(-I) = e^{pi i k} at the weight k in use.  All
built-in multipliers (trivial, powers of the eta multiplier, Dirichlet
characters on Gamma_0(N)) have *rational* phases: chi(gamma) = e^{2 pi i q}
with q an exact Fraction.  That exactness is what keeps the Kloosterman-type
layer sums reproducible, and it makes the cusp parameters

    chi(T) rho(T) = diag(e^{2 pi i kappa_1}, ..., e^{2 pi i kappa_p}),
    0 <= kappa_j < 1,

exact rationals as well.  The eta-power multiplier is evaluated through the
closed Dedekind-sum formula for c > 0, with gamma replaced by -gamma for
c < 0 and chi(-I) = e^{pi i k} folding the sign back in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .groups import GroupElement, GroupSpec, T
from .precision import exp2pi

__all__ = [
    "dedekind_sum",
    "Multiplier",
    "TrivialMultiplier",
    "EtaPowerMultiplier",
    "DirichletMultiplier",
    "CompositeMultiplier",
    "DiagonalRepresentation",
    "MatrixRepresentation",
    "AutomorphyData",
    "chi_eval",
    "kappa_vector",
    "conjugate",
    "n_prime",
    "frac",
]


def frac(x: Fraction) -> Fraction:
    """Reduce a rational into [0, 1)."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@lru_cache(maxsize=None)
def dedekind_sum(h: int, k: int) -> Fraction:
    """Dedekind sum s(h, k) for k >= 1, computed by reciprocity.

    s(h, k) = sum_{r=1}^{k-1} ((r/k)) ((hr/k)); exact Fraction arithmetic.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    h %= k
    s = Fraction(0)
    sign = 1
    while h > 0:
        # s(h,k) = -1/4 + (h^2 + k^2 + 1)/(12hk) - s(k mod h, h)
        s += sign * (Fraction(-1, 4) + Fraction(h * h + k * k + 1, 12 * h * k))
        sign = -sign
        h, k = k % h, h
    return s


class Multiplier:
    """Base class: a unitary character with exact rational phase."""

    def phase(self, gamma: GroupElement) -> Fraction:
        raise NotImplementedError

    def value(self, gamma: GroupElement) -> mpmath.mpc:
        return exp2pi(self.phase(gamma))

    def conjugate(self) -> "Multiplier":
        raise NotImplementedError

    def nontriviality_ok(self, weight: int) -> bool:
        minus_i = GroupElement(-1, 0, 0, -1)
        return frac(self.phase(minus_i) - Fraction(weight, 2)) == 0

    def label(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class TrivialMultiplier(Multiplier):
    def phase(self, gamma: GroupElement) -> Fraction:
        return Fraction(0)

    def conjugate(self):
        return self

    def label(self):
        return "trivial"


@dataclass(frozen=True)
class EtaPowerMultiplier(Multiplier):
    """The eta multiplier raised to an even power r: the character of eta^r.

    For c > 0 the closed formula is

        chi_r(gamma) = exp( pi i r [ (a+d)/(12c) + s(-d, c) - 1/4 ] ),

    and chi_r(T) = e^{pi i r / 12}, chi_r(-I) = e^{pi i r / 2}.
    """

    r: int

    def __post_init__(self):
        if self.r % 2 != 0:
            raise ValueError("eta power must be even for an integer-weight character")

    def phase(self, gamma: GroupElement) -> Fraction:
        a, b, c, d = gamma.as_tuple()
        if c < 0:
            # chi(gamma) = chi(-I)^{-1} chi(-gamma)
            return frac(self._phase_cpos(GroupElement(-a, -b, -c, -d)) - Fraction(self.r, 4))
        if c == 0:
            if a == 1:
                return frac(Fraction(self.r * b, 24))
            # gamma = -T^{-b}
            return frac(Fraction(self.r, 4) + Fraction(self.r * (-b), 24))
        return self._phase_cpos(gamma)

    def _phase_cpos(self, gamma: GroupElement) -> Fraction:
        a, _, c, d = gamma.as_tuple()
        val = Fraction(self.r, 2) * (Fraction(a + d, 12 * c) + dedekind_sum(-d, c))
        return frac(val - Fraction(self.r, 8))

    def conjugate(self):
        return EtaPowerMultiplier(-self.r)

    def label(self):
        return f"eta:{self.r}"


@dataclass(frozen=True)
class DirichletMultiplier(Multiplier):
    """chi(gamma) = chi_D(d mod N) on Gamma_0(N), chi_D given by a phase table.

    table maps each unit u mod N to the exact exponent q_u with
    chi_D(u) = e^{2 pi i q_u}; it must be multiplicative with q_1 = 0.
    """

    modulus: int
    table: tuple  # ((unit, Fraction), ...) covering all units mod modulus

    def __post_init__(self):
        n = self.modulus
        tab = dict(self.table)
        units = [u for u in range(n) if np.gcd(u, n) == 1]
        if sorted(tab) != units:
            raise ValueError(f"phase table must cover exactly the units mod {n}")
        if frac(tab[1 % n]) != 0:
            raise ValueError("chi(1) must equal 1")
        for u in units:
            for v in units:
                if frac(tab[u * v % n] - tab[u] - tab[v]) != 0:
                    raise ValueError("phase table is not multiplicative")

    def _lookup(self, d: int) -> Fraction:
        n = self.modulus
        u = d % n
        if np.gcd(u, n) != 1:
            raise ValueError(f"d = {d} is not coprime to the modulus {n}")
        return dict(self.table)[u]

    def phase(self, gamma: GroupElement) -> Fraction:
        return frac(self._lookup(gamma.d))

    def conjugate(self):
        return DirichletMultiplier(self.modulus, tuple((u, frac(-q)) for u, q in self.table))

    def label(self):
        return f"dirichlet:{self.modulus}"


@dataclass(frozen=True)
class CompositeMultiplier(Multiplier):
    """Pointwise product of multipliers (used for per-component characters)."""

    parts: tuple

    def phase(self, gamma: GroupElement) -> Fraction:
        return frac(sum((p.phase(gamma) for p in self.parts), Fraction(0)))

    def conjugate(self):
        return CompositeMultiplier(tuple(p.conjugate() for p in self.parts))

    def label(self):
        return "*".join(p.label() for p in self.parts)


def chi_eval(m: Multiplier, gamma: GroupElement) -> mpmath.mpc:
    """Unit-modulus value of a multiplier at a group element."""
    return m.value(gamma)


@dataclass(frozen=True)
class DiagonalRepresentation:
    """Direct sum of multipliers: rho(gamma) = diag(mu_1, ..., mu_p)(gamma).

    Components are 1-indexed in the public API.  rho(-I) = I is required
    when the representation enters an AutomorphyData, not here, so that
    diagonal phase reads (kappa_vector) work on any multiplier stack.
    """

    components: tuple

    def __post_init__(self):
        if not self.components:
            raise ValueError("representation must have positive dimension")

    def minus_i_is_identity(self) -> bool:
        minus_i = GroupElement(-1, 0, 0, -1)
        return all(frac(mu.phase(minus_i)) == 0 for mu in self.components)

    @property
    def dim(self) -> int:
        return len(self.components)

    def component(self, j: int) -> Multiplier:
        return self.components[j - 1]

    def phase_T(self, j: int) -> Fraction:
        return self.components[j - 1].phase(T)

    def inv_entry_phase(self, gamma: GroupElement, j: int, alpha: int):
        """Exact phase of rho(gamma^{-1})_{j,alpha}; None for a structural zero."""
        if j != alpha:
            return None
        return frac(-self.components[j - 1].phase(gamma))

    def matrix(self, gamma: GroupElement) -> np.ndarray:
        return np.diag([complex(mu.value(gamma)) for mu in self.components])

    def conjugate(self):
        return DiagonalRepresentation(tuple(mu.conjugate() for mu in self.components))

    def label(self):
        return "diag(" + ",".join(mu.label() for mu in self.components) + ")"


class MatrixRepresentation:
    """Caller-supplied evaluator gamma -> unitary p x p matrix.

    rho(T) must be diagonal and the exact cusp parameters kappa_j must be
    supplied by the caller.  Invariants (unitarity, rho(-I) = I, diagonal
    rho(T)) are spot-checked on a sample, not proved.
    """

    def __init__(self, dim, evaluator, kappa_t_phases, _conj=False):
        self.dim = dim
        self._eval = evaluator
        self._conj = _conj
        self.kappa_t_phases = tuple(Fraction(k) for k in kappa_t_phases)
        if len(self.kappa_t_phases) != dim:
            raise ValueError("need one rho(T) phase per component")
        self._validate()

    def _validate(self):
        # Sampled checks only, on elements every Gamma_0(N) contains.
        rng = np.random.default_rng(7)
        minus_i = GroupElement(-1, 0, 0, -1)
        if not np.allclose(self.matrix(minus_i), np.eye(self.dim), atol=1e-9):
            raise ValueError("rho(-I) != I")
        mt = self.matrix(T)
        if not np.allclose(mt, np.diag(np.diag(mt)), atol=1e-9):
            raise ValueError("rho(T) is not diagonal")
        for g in (T, T * T, -T):
            m = self.matrix(g)
            if not np.allclose(m @ m.conj().T, np.eye(self.dim), atol=1e-8):
                raise ValueError(f"rho({g.as_tuple()}) is not unitary")
            v = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
            if not np.isclose(np.linalg.norm(m @ v), np.linalg.norm(v)):
                raise ValueError("rho does not preserve norms")

    def matrix(self, gamma: GroupElement) -> np.ndarray:
        m = np.asarray(self._eval(gamma), dtype=complex)
        return m.conj() if self._conj else m

    def component(self, j: int):
        raise ValueError("matrix representations have no scalar components")

    def phase_T(self, j: int) -> Fraction:
        return self.kappa_t_phases[j - 1]

    def inv_entry_phase(self, gamma, j, alpha):
        raise TypeError("matrix representations have no exact rational phases")

    def inv_entry(self, gamma: GroupElement, j: int, alpha: int) -> complex:
        return self.matrix(gamma.inverse())[j - 1, alpha - 1]

    def conjugate(self):
        return MatrixRepresentation(
            self.dim, self._eval, [frac(-k) for k in self.kappa_t_phases],
            _conj=not self._conj,
        )

    def label(self):
        return f"matrix(dim={self.dim})"


def trivial_representation(p: int = 1) -> DiagonalRepresentation:
    return DiagonalRepresentation((TrivialMultiplier(),) * p)


def kappa_vector(chi: Multiplier, rho) -> tuple:
    """Exact cusp parameters kappa_j in [0,1) from the diagonal of chi(T) rho(T)."""
    return tuple(frac(chi.phase(T) + rho.phase_T(j)) for j in range(1, rho.dim + 1))


@dataclass(frozen=True)
class AutomorphyData:
    """Weight, character, representation and group, with derived kappa vector."""

    weight: int
    chi: Multiplier
    rho: object
    group: GroupSpec
    kappa: tuple = field(init=False)

    def __post_init__(self):
        if not self.chi.nontriviality_ok(self.weight):
            raise ValueError(
                f"character {self.chi.label()} violates chi(-I) = e^(pi i k) "
                f"at weight {self.weight}"
            )
        if isinstance(self.rho, DiagonalRepresentation):
            if not self.rho.minus_i_is_identity():
                raise ValueError("rho(-I) must be the identity matrix")
        object.__setattr__(self, "kappa", kappa_vector(self.chi, self.rho))

    @property
    def lam(self) -> Fraction:
        return self.group.lam

    @property
    def dim(self) -> int:
        return self.rho.dim

    def kappa_of(self, j: int) -> Fraction:
        return self.kappa[j - 1]

    def scalar_character(self, j: int = 1) -> Multiplier:
        """Effective character chi * mu_j of the j-th component (diagonal rho)."""
        mu = self.rho.component(j)
        if isinstance(mu, TrivialMultiplier):
            return self.chi
        return CompositeMultiplier((self.chi, mu))

    def conjugate(self) -> "AutomorphyData":
        return AutomorphyData(self.weight, self.chi.conjugate(),
                              self.rho.conjugate(), self.group)


def conjugate(data: AutomorphyData) -> AutomorphyData:
    """Conjugate automorphy (chi-bar, rho-bar); kappa turns into kappa'."""
    return data.conjugate()


def n_prime(n: int, kappa_alpha) -> int:
    """Index map n -> n' pairing a form with its supplementary partner:
    -n when kappa_alpha = 0, else 1 - n."""
    return -n if frac(Fraction(kappa_alpha)) == 0 else 1 - n
