"""Weighted translation operators and their weight-product cocycles.

The operator generated by a group element a and a weight w sends f to
w * (f translated by a); its right inverse divides by the weight and
translates back.  Along the orbit of a two scalar products control the
dynamics:

* forward cocycle   prod_{j=1..n} w(x * a^j)
* backward cocycle  1 / prod_{j=0..n-1} w(x * a^-j)

Products switch to log-space accumulation past 64 factors so that long
geometric products neither under- nor overflow midway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .group import CompactSet, EmptySetError, GroupElement, GroupModel, ModelMismatchError
from .orlicz import OrliczVector

LOG_SPACE_SWITCH = 64


class WeightError(Exception):
    pass


class Weight:
    """Strictly positive weight rule, evaluable on group elements."""

    def __call__(self, x: GroupElement) -> float:
        raise NotImplementedError

    def log_value(self, x: GroupElement) -> float:
        return math.log(self(x))

    def sup_bound(self) -> float:
        """Global upper bound for w (finite by construction)."""
        raise NotImplementedError

    def inf_bound(self) -> float:
        """Global lower bound for w (positive by construction)."""
        raise NotImplementedError

    @staticmethod
    def from_config(doc: dict) -> "Weight":
        rule = doc.get("rule")
        if rule == "constant":
            return ConstantWeight(float(doc["c"]))
        if rule == "clamp_exp":
            return ClampExpWeight(
                base=float(doc["base"]),
                coord=int(doc["coord"]),
                lo=float(doc["lo"]),
                hi=float(doc["hi"]),
            )
        if rule == "table":
            table = {tuple(int(u) for u in k): float(v) for k, v in doc["entries"]}
            return TableWeight(table, default=float(doc["default"]))
        raise WeightError(f"unknown weight rule: {rule!r}")


@dataclass(frozen=True)
class ConstantWeight(Weight):
    c: float

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise WeightError("constant weight must be positive and finite")

    def __call__(self, x: GroupElement) -> float:
        return self.c

    def sup_bound(self) -> float:
        return self.c

    def inf_bound(self) -> float:
        return self.c


@dataclass(frozen=True)
class ClampExpWeight(Weight):
    """w(x) = base ** (-clamp(x[coord], lo, hi)) on real coordinates.

    With base 2, coord z, clamp window [-1, 1] this is the step profile
    1/2 for z >= 1, 2**-z in between, 2 for z <= -1.
    """

    base: float
    coord: int
    lo: float
    hi: float

    def __post_init__(self):
        if not (self.base > 0 and self.base != 1.0 and math.isfinite(self.base)):
            raise WeightError("clamp_exp base must be positive and != 1")
        if not self.lo < self.hi:
            raise WeightError("clamp_exp needs lo < hi")
        if self.coord < 0:
            raise WeightError("coordinate index must be nonnegative")

    def __call__(self, x: GroupElement) -> float:
        c = x.real[self.coord]
        return self.base ** (-min(max(c, self.lo), self.hi))

    def sup_bound(self) -> float:
        return max(self.base**-self.lo, self.base**-self.hi)

    def inf_bound(self) -> float:
        return min(self.base**-self.lo, self.base**-self.hi)


class TableWeight(Weight):
    """Finite lookup table keyed by lattice units, with a default value."""

    def __init__(self, table: dict, default: float):
        if not (default > 0 and math.isfinite(default)):
            raise WeightError("table default must be positive and finite")
        for k, v in table.items():
            if not (v > 0 and math.isfinite(v)):
                raise WeightError(f"table value at {k} must be positive and finite")
        self.table = dict(table)
        self.default = float(default)

    def __call__(self, x: GroupElement) -> float:
        return self.table.get(x.units, self.default)

    def sup_bound(self) -> float:
        return max([self.default, *self.table.values()])

    def inf_bound(self) -> float:
        return min([self.default, *self.table.values()])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TableWeight)
            and self.table == other.table
            and self.default == other.default
        )

    def __repr__(self) -> str:
        return f"TableWeight({len(self.table)} entries, default={self.default})"


@dataclass(frozen=True)
class WeightedTranslation:
    """The operator f -> w * (f * delta_a) together with its right inverse."""

    model: GroupModel
    a: GroupElement
    weight: Weight

    def __post_init__(self):
        if self.a.model != self.model:
            raise ModelMismatchError("translation element from a different model")

    def apply(self, f: OrliczVector, n: int = 1) -> OrliczVector:
        """n-fold application of x -> w(x) f(x a^-1); n = 0 is the identity."""
        if n < 0:
            raise ValueError("n must be >= 0")
        w, a = self.weight, self.a
        out = f
        for _ in range(n):
            nxt = OrliczVector(self.model)
            nxt._entries = {}
            for x, v in out.items():
                y = x * a
                nxt._entries[y] = w(y) * v
            out = nxt
        return out

    def apply_inv(self, h: OrliczVector, n: int = 1) -> OrliczVector:
        """n-fold application of x -> h(x a) / w(x a), the right inverse.

        On finitely supported vectors both compositions with apply are
        the identity (the weighted composition is a bijection).
        """
        if n < 0:
            raise ValueError("n must be >= 0")
        w, a_inv = self.weight, self.a.inverse()
        out = h
        for _ in range(n):
            nxt = OrliczVector(self.model)
            nxt._entries = {}
            for x, v in out.items():
                nxt._entries[x * a_inv] = v / w(x)
            out = nxt
        return out

    def cocycle_fwd(self, n: int, x: GroupElement) -> float:
        """prod_{j=1..n} w(x * a^j)."""
        if n < 1:
            raise ValueError("cocycle index n must be >= 1")
        w, a = self.weight, self.a
        cur = x
        if n <= LOG_SPACE_SWITCH:
            out = 1.0
            for _ in range(n):
                cur = cur * a
                out *= w(cur)
            return out
        acc = 0.0
        for _ in range(n):
            cur = cur * a
            acc += w.log_value(cur)
        return math.exp(acc)

    def cocycle_bwd(self, n: int, x: GroupElement) -> float:
        """1 / prod_{j=0..n-1} w(x * a^-j)."""
        if n < 1:
            raise ValueError("cocycle index n must be >= 1")
        w, a_inv = self.weight, self.a.inverse()
        cur = x
        if n <= LOG_SPACE_SWITCH:
            out = 1.0
            for _ in range(n):
                out *= w(cur)
                cur = cur * a_inv
            return 1.0 / out
        acc = 0.0
        for _ in range(n):
            acc += w.log_value(cur)
            cur = cur * a_inv
        return math.exp(-acc)


def sup_abs_on(values, E: CompactSet) -> float:
    """Exact max of |values(x)| over a nonempty finite set."""
    if len(E) == 0:
        raise EmptySetError("sup over an empty set")
    return max(abs(values(x)) for x in E)
