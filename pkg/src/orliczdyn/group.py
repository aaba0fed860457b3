"""Discrete and lattice-discretized locally compact groups.

Five model kinds are supported; coordinates are stored as integer lattice
units, with real coordinates equal to units * h:

* ``int_line``            the integers, counting measure
* ``int_lattice``         Z^d, counting measure
* ``heisenberg_int``      integer Heisenberg group
* ``lattice_line``        h*Z discretizing the real line, cell mass h
* ``heisenberg_lattice``  h*Z^3 with the Heisenberg law, cell mass h^3

The Heisenberg product is (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x*y') and
the inverse is (x,y,z)^-1 = (-x,-y,xy-z).  On a lattice the twist x*y'
must land back on the lattice; products that do not raise OffLatticeError
(the check is exact, via a rational reading of h).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

KINDS = ("int_line", "int_lattice", "heisenberg_int", "lattice_line", "heisenberg_lattice")
_HEISENBERG_KINDS = ("heisenberg_int", "heisenberg_lattice")
_LATTICE_KINDS = ("lattice_line", "heisenberg_lattice")


class GroupError(Exception):
    pass


class ModelMismatchError(GroupError):
    pass


class OffLatticeError(GroupError):
    pass


class EmptySetError(GroupError):
    pass


@lru_cache(maxsize=64)
def _h_fraction(h: float) -> Fraction:
    return Fraction(h).limit_denominator(10**12)


@dataclass(frozen=True)
class GroupModel:
    kind: str
    dim: int
    h: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GroupError(f"unknown group kind: {self.kind!r}")
        if self.kind in _LATTICE_KINDS and not (self.h > 0):
            raise GroupError("cell width h must be positive")
        if self.kind not in _LATTICE_KINDS and self.h != 1.0:
            raise GroupError("counting-measure kinds have h = 1")

    @classmethod
    def int_line(cls) -> "GroupModel":
        return cls("int_line", 1)

    @classmethod
    def int_lattice(cls, d: int) -> "GroupModel":
        if d < 1:
            raise GroupError("lattice dimension must be >= 1")
        return cls("int_lattice", d)

    @classmethod
    def heisenberg_int(cls) -> "GroupModel":
        return cls("heisenberg_int", 3)

    @classmethod
    def lattice_line(cls, h: float) -> "GroupModel":
        return cls("lattice_line", 1, h)

    @classmethod
    def heisenberg_lattice(cls, h: float) -> "GroupModel":
        return cls("heisenberg_lattice", 3, h)

    @classmethod
    def from_config(cls, doc: dict) -> "GroupModel":
        kind = doc.get("kind")
        if kind == "int_line":
            return cls.int_line()
        if kind == "int_lattice":
            return cls.int_lattice(int(doc["d"]))
        if kind == "heisenberg_int":
            return cls.heisenberg_int()
        if kind == "lattice_line":
            return cls.lattice_line(float(doc["h"]))
        if kind == "heisenberg_lattice":
            return cls.heisenberg_lattice(float(doc["h"]))
        raise GroupError(f"unknown group kind: {kind!r}")

    @property
    def is_heisenberg(self) -> bool:
        return self.kind in _HEISENBERG_KINDS

    @property
    def haar_cell_mass(self) -> float:
        return self.h**self.dim

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.dim)

    def element_units(self, units) -> "GroupElement":
        units = tuple(int(u) for u in units)
        if len(units) != self.dim:
            raise GroupError(f"expected {self.dim} coordinates, got {len(units)}")
        return GroupElement(self, units)

    def element(self, coords) -> "GroupElement":
        """Build an element from real coordinates (must sit on the lattice)."""
        units = []
        for c in coords:
            u = round(c / self.h)
            if abs(u * self.h - c) > 1e-9 * max(1.0, abs(c)):
                raise OffLatticeError(f"coordinate {c} is not a multiple of h={self.h}")
            units.append(u)
        return self.element_units(units)

    def _twist_units(self, x_units, y_units) -> int:
        """z-units contributed by the Heisenberg twist x * y' (exact)."""
        if self.kind == "heisenberg_int":
            return x_units[0] * y_units[1]
        tw = x_units[0] * y_units[1] * _h_fraction(self.h)
        if tw.denominator != 1:
            raise OffLatticeError(
                f"Heisenberg twist {x_units[0]}*{y_units[1]}*h leaves the lattice"
            )
        return int(tw)


@dataclass(frozen=True)
class GroupElement:
    model: GroupModel
    units: tuple

    @property
    def real(self) -> tuple:
        h = self.model.h
        return tuple(u * h for u in self.units)

    @property
    def is_identity(self) -> bool:
        return all(u == 0 for u in self.units)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.model != other.model:
            raise ModelMismatchError("elements belong to different group models")
        a, b = self.units, other.units
        if self.model.is_heisenberg:
            tw = self.model._twist_units(a, b)
            return GroupElement(self.model, (a[0] + b[0], a[1] + b[1], a[2] + b[2] + tw))
        return GroupElement(self.model, tuple(x + y for x, y in zip(a, b)))

    def inverse(self) -> "GroupElement":
        u = self.units
        if self.model.is_heisenberg:
            tw = self.model._twist_units(u, u)
            return GroupElement(self.model, (-u[0], -u[1], tw - u[2]))
        return GroupElement(self.model, tuple(-x for x in u))

    def __pow__(self, n: int) -> "GroupElement":
        if n == 0:
            return self.model.identity()
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out


@dataclass(frozen=True)
class CompactSet:
    """Finite explicit set of group elements; Haar mass is exact."""

    model: GroupModel
    elements: frozenset

    @classmethod
    def from_elements(cls, model: GroupModel, elements) -> "CompactSet":
        elems = frozenset(elements)
        for e in elems:
            if e.model != model:
                raise ModelMismatchError("set element from a different model")
        return cls(model, elems)

    @classmethod
    def box(cls, model: GroupModel, lo, hi) -> "CompactSet":
        """All lattice points with real coordinates inside [lo_i, hi_i]."""
        if len(lo) != model.dim or len(hi) != model.dim:
            raise GroupError("box bounds must match the model dimension")
        ranges = []
        for a, b in zip(lo, hi):
            u0 = math.ceil(a / model.h - 1e-9)
            u1 = math.floor(b / model.h + 1e-9)
            if u1 < u0:
                return cls(model, frozenset())
            if u1 - u0 > 10**6:
                raise GroupError("box axis enumerates more than 1e6 lattice points")
            ranges.append(range(u0, u1 + 1))
        elems = frozenset(
            GroupElement(model, units) for units in itertools.product(*ranges)
        )
        if len(elems) > 2 * 10**6:
            raise GroupError("box enumerates more than 2e6 lattice points")
        return cls(model, elems)

    @property
    def measure(self) -> float:
        return len(self.elements) * self.model.haar_cell_mass

    def translate(self, a: GroupElement) -> "CompactSet":
        """Right translate K*a."""
        return CompactSet(self.model, frozenset(k * a for k in self.elements))

    def sorted_elements(self) -> list:
        return sorted(self.elements, key=lambda e: e.units)

    def __contains__(self, e) -> bool:
        return e in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def issubset(self, other: "CompactSet") -> bool:
        return self.elements <= other.elements


def haar(K: CompactSet) -> float:
    """Right Haar measure of a finite set: cell count times cell mass."""
    return K.measure


@dataclass(frozen=True)
class AperiodicityCertificate:
    """Outcome of the translate-disjointness scan K /\\ K*a^(+-n)."""

    status: str  # "aperiodic" | "periodic" | "not_within_bound"
    bound: int | None
    n_max: int

    @property
    def is_aperiodic(self) -> bool:
        return self.status == "aperiodic"


def aperiodicity_bound(a: GroupElement, K: CompactSet, n_max: int) -> AperiodicityCertificate:
    """Smallest M with K and K*a^(+-n) disjoint for all M < n <= n_max.

    Returns a "periodic" certificate if a is the identity or has finite
    order within n_max, and "not_within_bound" when the translates still
    meet K at n_max (no aperiodicity claim is made in that case).
    """
    if len(K) == 0:
        raise EmptySetError("aperiodicity scan needs a nonempty set")
    if n_max < 1:
        raise GroupError("n_max must be >= 1")
    if a.is_identity:
        return AperiodicityCertificate("periodic", None, n_max)
    base = K.elements
    last_hit = 0
    an = a.model.identity()
    for n in range(1, n_max + 1):
        an = an * a
        if an.is_identity:
            return AperiodicityCertificate("periodic", None, n_max)
        # K /\ K*a^-n is empty iff K /\ K*a^n is, so one direction suffices.
        if not base.isdisjoint(frozenset(k * an for k in base)):
            last_hit = n
    if last_hit >= n_max:
        return AperiodicityCertificate("not_within_bound", None, n_max)
    return AperiodicityCertificate("aperiodic", last_hit, n_max)
