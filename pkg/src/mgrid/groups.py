"""Integer matrix groups Gamma_0(N) and their double-coset boxes.

The coefficient formulas sum over the set

    C+ = { (a b; c d) in Gamma : c > 0, 0 <= -d < c*lambda, 0 <= a < c*lambda },

a transversal of <T>\\Gamma/<T> restricted to positive lower-left entry.
For the built-in groups (Gamma_0(N), cusp width lambda = 1 at i-infinity)
the box at fixed c is parametrised by the units d in (-c, 0]: a is the
inverse of d mod c lifted into [0, c) and b = (a d - 1)/c.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "GroupElement",
    "GroupSpec",
    "sl2z",
    "gamma0",
    "S",
    "T",
    "enumerate_cplus",
    "units_mod",
    "moebius",
    "generators",
]


@dataclass(frozen=True)
class GroupElement:
    """Unimodular integer matrix (a b; c d)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.as_tuple()} is not 1")

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(-self.a, -self.b, -self.c, -self.d)


S = GroupElement(0, -1, 1, 0)
T = GroupElement(1, 1, 0, 1)
IDENTITY = GroupElement(1, 0, 0, 1)


@dataclass(frozen=True)
class GroupSpec:
    """Level N congruence group with cusp width lam at i-infinity.

    lam is kept symbolic in all formulas downstream, but the built-in
    element enumeration assumes integer matrices, i.e. lam == 1.
    For N > 1 the generator list must be supplied by the caller.
    """

    level: int = 1
    lam: Fraction = Fraction(1)
    gens: tuple = field(default=())

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be a positive integer")
        lam = self.lam if isinstance(self.lam, Fraction) else Fraction(self.lam)
        object.__setattr__(self, "lam", lam)
        if not lam > 0:
            raise ValueError("cusp width lambda must be positive")
        for g in self.gens:
            if not isinstance(g, GroupElement):
                raise ValueError("generators must be GroupElement instances")
            if g.c % self.level != 0:
                raise ValueError(f"generator {g.as_tuple()} is not in Gamma_0({self.level})")


def sl2z() -> GroupSpec:
    return GroupSpec(level=1)


def gamma0(n: int, gens=()) -> GroupSpec:
    return GroupSpec(level=n, gens=tuple(gens))


@lru_cache(maxsize=2048)
def _units_and_inverses(c: int):
    """Arrays (a, d) over the box at lower-left entry c, ordered by -d ascending.

    d runs through (-c, 0] coprime to c; a = d^{-1} mod c lifted to [0, c).
    """
    if c == 1:
        return np.array([0], dtype=np.int64), np.array([0], dtype=np.int64)
    nd = np.arange(c, dtype=np.int64)  # nd = -d
    mask = np.gcd(nd, c) == 1
    nd = nd[mask]
    a = np.array([pow(int(-x) % c, -1, c) for x in nd], dtype=np.int64)
    return a, -nd


@lru_cache(maxsize=2048)
def units_mod(c: int):
    """Units of Z/cZ in [0, c), ascending (c = 1 gives [0])."""
    if c == 1:
        return np.array([0], dtype=np.int64)
    u = np.arange(c, dtype=np.int64)
    return u[np.gcd(u, c) == 1]


def cplus_arrays(spec: GroupSpec, c: int):
    """(a, d) int64 arrays of the C+ box at this c, or empty if N does not divide c."""
    if c < 1:
        raise ValueError("c must be a positive integer")
    if spec.lam != 1:
        raise NotImplementedError("built-in enumeration requires lambda == 1")
    if c % spec.level != 0:
        e = np.array([], dtype=np.int64)
        return e, e
    return _units_and_inverses(c)


def enumerate_cplus(spec: GroupSpec, c: int):
    """The elements of C+ with lower-left entry c, ordered by -d ascending."""
    a, d = cplus_arrays(spec, c)
    out = []
    for ai, di in zip(a.tolist(), d.tolist()):
        b = (ai * di - 1) // c
        out.append(GroupElement(ai, b, c, di))
    return out


def moebius(gamma: GroupElement, tau):
    """(a tau + b)/(c tau + d); maps the upper half-plane to itself."""
    if not (tau.imag > 0):
        raise ValueError("tau must lie in the upper half-plane")
    return (gamma.a * tau + gamma.b) / (gamma.c * tau + gamma.d)


def generators(spec: GroupSpec):
    """Generator list: [S, T] for SL2(Z); the validated user list for N > 1."""
    if spec.level == 1 and not spec.gens:
        return [S, T]
    if not spec.gens:
        raise ValueError(f"no generator list supplied for Gamma_0({spec.level})")
    return list(spec.gens)
