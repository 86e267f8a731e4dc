"""The Bernoulli shift {0,1}^G over an ambient.

The action is (T_g z)(t) = z(t·g), so the return-time set of z to a cylinder
[u] on support K is {g : z(k·g) = u(k) for all k in K} and N(z, [1]) is just
the support of z.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HorizonError, PreconditionError
from .setcalc import (
    NO, YES, INCONCLUSIVE, Complement, Finite, Full, Intersection, Observed, SetExpr, Translate,
    Verdict, symmetric_intersection,
)
from .families import family_member

POINT_SCHEMA = "rl-point-1"


class SymbolicPoint:
    """A point z: G -> {0, 1}.

    ``level`` is the ball on which values are guaranteed; None means
    everywhere.  Evaluating outside it raises HorizonError.
    """

    ambient = None
    level = None

    def value(self, g):
        if self.level is not None and self.ambient.norm(g) > self.level:
            raise HorizonError(f"point known only on ball({self.level}), asked at {self.ambient.format(g)}")
        return self._value(g)

    def _value(self, g):
        raise NotImplementedError

    def __call__(self, g):
        return self.value(g)

    def support_set(self):
        """N(z, [1]) as a set expression when it is known symbolically."""
        return None

    def describe(self):
        return type(self).__name__


class IndicatorPoint(SymbolicPoint):
    def __init__(self, s):
        self.ambient = s.ambient
        self.set = s

    def _value(self, g):
        return 1 if self.set.contains(g) else 0

    def support_set(self):
        return self.set

    def describe(self):
        return f"ind({self.set.describe()})"


def indicator(s):
    return IndicatorPoint(s)


def explicit_point(ambient, ones, level=None):
    """Value 1 on the listed elements and 0 elsewhere, trusted on ball(level)."""
    ones = frozenset(ones)
    p = IndicatorPoint(Finite(ambient, ones) if ones else _empty(ambient))
    p.level = level
    return p


def cofinite_point(ambient, zeros):
    return IndicatorPoint(Complement(Finite(ambient, zeros)) if zeros else Full(ambient))


def _empty(ambient):
    return Complement(Full(ambient))


def all_ones(ambient):
    return IndicatorPoint(Full(ambient))


class ShiftedPoint(SymbolicPoint):
    def __init__(self, base, g):
        self.ambient = base.ambient
        self.base = base
        self.g = g
        lv = base.level
        self.level = None if lv is None else lv - self.ambient.norm(g)
        if self.level is not None and self.level < 0:
            raise HorizonError("the shifted point has no evaluable region left")

    def _value(self, t):
        return self.base.value(self.ambient.mul(t, self.g))

    def describe(self):
        return f"T[{self.ambient.format(self.g)}]({self.base.describe()})"


class TracePoint(SymbolicPoint):
    """The last stage of a builder, z^(k), which agrees with the limit point on
    the committed region.  Return sets are reported as observed windows."""

    def __init__(self, ambient, ones, committed, name="trace"):
        self.ambient = ambient
        self.ones = frozenset(ones)
        self.committed = committed
        self.name = name

    def _value(self, g):
        return 1 if g in self.ones else 0

    def describe(self):
        return self.name


def shift_apply(z, g):
    """T_g z, i.e. t -> z(t·g)."""
    a = z.ambient
    if g == a.identity:
        return z
    if isinstance(z, IndicatorPoint) and z.level is None:
        # T_g 1_A = 1_{A g^-1}
        return IndicatorPoint(Translate(z.set, g, inverse=True, right=True))
    return ShiftedPoint(z, g)


@dataclass(frozen=True)
class Cylinder:
    """[u] = {z : z(k) = u(k) for k in the support}."""

    ambient: object
    pattern: tuple

    @classmethod
    def of(cls, ambient, mapping):
        if not mapping:
            raise PreconditionError("a cylinder needs a nonempty support")
        items = tuple(sorted(((k, int(v)) for k, v in mapping.items()), key=lambda kv: ambient.index(kv[0])))
        return cls(ambient, items)

    @property
    def support(self):
        return [k for k, _ in self.pattern]

    def describe(self):
        return "[" + ",".join(f"{self.ambient.format(k)}:{v}" for k, v in self.pattern) + "]"


def one_cylinder(ambient):
    """[1]: the cylinder fixing the value 1 at the identity."""
    return Cylinder(ambient, ((ambient.identity, 1),))


def pattern_cylinder(z, elements):
    """The cylinder of z's own values on ``elements``."""
    return Cylinder.of(z.ambient, {k: z.value(k) for k in elements})


def return_set(z, c, horizon):
    """{g in ball(horizon) : z(k·g) = u(k) for every k in the support}."""
    a = z.ambient
    mul = a.mul
    return frozenset(g for g in a.ball(horizon) if all(z.value(mul(k, g)) == v for k, v in c.pattern))


def return_expr(z, c, horizon):
    """N(z, c) as a set expression: exact for indicator points, otherwise the
    set observed on ball(horizon)."""
    base = z.support_set()
    if base is not None and z.level is None:
        parts = [Translate(base if v else Complement(base), k, inverse=True) for k, v in c.pattern]
        return parts[0] if len(parts) == 1 else Intersection(parts)
    return Observed(z.ambient, return_set(z, c, horizon), horizon, name=f"N({z.describe()},{c.describe()})")


_RANK = {YES: 0, INCONCLUSIVE: 1, NO: 2}


def check_recurrence(z, family, basis_depth, horizon):
    """Family membership of the return sets to z's own cylinders on ball(r), r <= basis_depth.

    The reported status is the weakest one among the levels.
    """
    a = z.ambient
    per_level = {}
    worst = YES
    for r in range(0, basis_depth + 1):
        c = pattern_cylinder(z, a.ball(r))
        v = family_member(family, return_expr(z, c, horizon), horizon)
        per_level[r] = v
        if _RANK[v.status] > _RANK[worst]:
            worst = v.status
    return Verdict(f"recurrent:{family.name}", worst, horizon, a, exact=all(v.exact for v in per_level.values()),
                   level=basis_depth,
                   witness={str(r): v for r, v in per_level.items()} if worst != NO else {},
                   refuter={str(r): v for r, v in per_level.items() if v.no},
                   subject=z.describe())


def symmetric_set_check(a_set, family, f1, f2, horizon):
    """Family verdict for the intersection of f^-1 A (f in f1) and f^-1 (G minus A) (f in f2)."""
    amb = a_set.ambient
    for f in f1:
        if not a_set.contains(f):
            raise PreconditionError("f1 must lie inside the set", amb.format(f))
    for f in f2:
        if a_set.contains(f):
            raise PreconditionError("f2 must avoid the set", amb.format(f))
    inter = symmetric_intersection(a_set, f1, f2)
    return family_member(family, inter, horizon)


def joint_return(x, y, cx, cy, horizon):
    return return_set(x, cx, horizon) & return_set(y, cy, horizon)


# run-length serialization over an enumeration prefix

def to_rle(z, level):
    """Runs of z over the first ball_size(level) elements in enumeration order."""
    a = z.ambient
    runs = []
    for g in a.ball(level):
        bit = z.value(g)
        if runs and runs[-1][0] == bit:
            runs[-1][1] += 1
        else:
            runs.append([bit, 1])
    return {
        "schema": POINT_SCHEMA,
        "ambient": a.kind,
        "level": level,
        "default": 0,
        "runs": runs,
        "point": z.describe(),
    }


def from_rle(data, ambient=None):
    from .ambient import get_ambient

    if data.get("schema") != POINT_SCHEMA:
        raise PreconditionError("not a point file", data.get("schema"))
    a = ambient or get_ambient(data["ambient"])
    ones = []
    i = 0
    for bit, length in data["runs"]:
        if bit:
            ones.extend(a.enumerate(j) for j in range(i, i + length))
        i += length
    if i != a.ball_size(data["level"]):
        raise PreconditionError("runs do not cover the stated ball", i)
    return TracePoint(a, ones, data["level"], name=data.get("point", "loaded"))
