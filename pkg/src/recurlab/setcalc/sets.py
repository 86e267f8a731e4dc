"""Set expressions over an ambient.

Every variant answers membership queries.  Variants built only from finite,
eventually periodic and full sets (closed under boolean operations,
translation and the integer dilations) also expose an exact normal form via
:meth:`SetExpr.exact`, which the classifiers use to decide properties outright.
All other variants are classified from what is visible inside a ball.
"""

from __future__ import annotations

import bisect
from functools import cached_property

from . import forms
from ..ambient import N0
from ..errors import HorizonError, PreconditionError

ONE_DIMENSIONAL = ("N0", "Z")


def _fmt_set(ambient, elements):
    return "{" + ",".join(ambient.format(g) for g in ambient.sorted(elements)) + "}"


class SetExpr:
    ambient = None

    def contains(self, g):
        raise NotImplementedError

    def __contains__(self, g):
        return self.contains(g)

    def describe(self):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.describe()} over {self.ambient.kind}>"

    def cap(self):
        """Level of the largest ball on which membership is known; None if everywhere."""
        return None

    def _exact(self):
        return None

    @cached_property
    def _exact_cached(self):
        return self._exact()

    def exact(self):
        return self._exact_cached

    def members(self, elements):
        return [g for g in elements if self.contains(g)]

    def __and__(self, other):
        return Intersection((self, other))

    def __or__(self, other):
        return Union((self, other))

    def __invert__(self):
        return Complement(self)


def member(s, g):
    return s.contains(g)


def _min_cap(*caps):
    caps = [c for c in caps if c is not None]
    return min(caps) if caps else None


class Full(SetExpr):
    def __init__(self, ambient):
        self.ambient = ambient

    def contains(self, g):
        return True

    def describe(self):
        return "full"

    def _exact(self):
        if self.ambient.kind in ONE_DIMENSIONAL:
            return forms.PeriodicForm(self.ambient, 1, frozenset({0}))
        return forms.BoolForm(self.ambient, True, frozenset())


class Finite(SetExpr):
    def __init__(self, ambient, elements):
        self.ambient = ambient
        self.elements = frozenset(elements)

    def contains(self, g):
        return g in self.elements

    def describe(self):
        return "fin:" + _fmt_set(self.ambient, self.elements)

    def _exact(self):
        if self.ambient.kind in ONE_DIMENSIONAL:
            if not self.elements:
                return forms.PeriodicForm(self.ambient, 1, frozenset())
            return forms.make_periodic(
                self.ambient, 1, (), min(self.elements), max(self.elements) + 1, self.elements.__contains__
            )
        return forms.BoolForm(self.ambient, False, self.elements)


class EventuallyPeriodic(SetExpr):
    """Periodic pattern of residues.

    Over Z the pattern is two-sided: x belongs iff (x - offset) mod period is a
    residue.  Over N0 the rule only applies from ``offset`` on; below it the
    members are those listed in ``head``.
    """

    def __init__(self, ambient, offset, period, residues, head=()):
        if ambient.kind not in ONE_DIMENSIONAL:
            raise PreconditionError("eventually periodic sets live over N0 or Z", ambient.kind)
        if period <= 0:
            raise PreconditionError("period must be positive", period)
        bad = [r for r in residues if not 0 <= r < period]
        if bad:
            raise PreconditionError("residues must lie in [0, period)", bad[0])
        self.ambient = ambient
        self.offset = offset
        self.period = period
        self.residues = frozenset(residues)
        self.head = frozenset(h for h in head if h < offset) if ambient is N0 else frozenset()

    def contains(self, g):
        if self.ambient is N0:
            if g < 0:
                return False
            if g < self.offset:
                return g in self.head
        return (g - self.offset) % self.period in self.residues

    def describe(self):
        text = f"ep:{self.offset},{self.period}," + "{" + ",".join(map(str, sorted(self.residues))) + "}"
        if self.head:
            text = f"({text}|fin:" + _fmt_set(self.ambient, self.head) + ")"
        return text

    def _exact(self):
        shifted = {(r + self.offset) % self.period for r in self.residues}
        if self.ambient is N0:
            return forms.make_periodic(self.ambient, self.period, shifted, 0, self.offset, self.contains)
        return forms.make_periodic(self.ambient, self.period, shifted, 0, 0, self.contains)


def fs_generate(ambient, generators, depth=None):
    """All products over nonempty index subsets of the first ``depth`` generators.

    Factors are multiplied in increasing index order, so over F2 this is the
    finite-products set and over N0/Z the finite-sums set.
    """
    gens = list(generators)
    if depth is None:
        depth = len(gens)
    if not 1 <= depth <= len(gens):
        raise PreconditionError("depth must lie between 1 and the number of generators", depth)
    gens = gens[:depth]
    # grow the set index by index: every subset ending at i is (subset before i)·g_i
    out = set()
    for g in gens:
        out |= {ambient.mul(p, g) for p in out}
        out.add(g)
    return frozenset(out)


class FSGen(SetExpr):
    """Finite sums (or ordered finite products) of a generator list.

    The list is read as the observed prefix of an infinite generating
    sequence, so classification treats the set through windows only.
    """

    def __init__(self, ambient, generators):
        if not generators:
            raise PreconditionError("at least one generator is needed")
        self.ambient = ambient
        self.generators = tuple(generators)

    @cached_property
    def elements(self):
        return fs_generate(self.ambient, self.generators)

    def contains(self, g):
        return g in self.elements

    def describe(self):
        tag = "fs" if self.ambient.kind in ONE_DIMENSIONAL else "fp"
        return f"{tag}:" + ",".join(self.ambient.format(g) for g in self.generators)


FPGen = FSGen


class _Unary(SetExpr):
    def cap(self):
        return self.base.cap()


class Dilation(_Unary):
    """{factor * x : x in base} over N0 or Z."""

    def __init__(self, base, factor):
        if base.ambient.kind not in ONE_DIMENSIONAL or factor < 1:
            raise PreconditionError("dilation needs N0/Z and a positive factor", factor)
        self.ambient = base.ambient
        self.base = base
        self.factor = factor

    def contains(self, g):
        return g % self.factor == 0 and self.base.contains(g // self.factor)

    def describe(self):
        return f"dil:{self.factor},({self.base.describe()})"

    def cap(self):
        c = self.base.cap()
        return None if c is None else c * self.factor

    def _exact(self):
        f = self.base.exact()
        return None if f is None else forms.dilate(f, self.factor)


class Contraction(_Unary):
    """{x : factor * x in base} over N0 or Z."""

    def __init__(self, base, factor):
        if base.ambient.kind not in ONE_DIMENSIONAL or factor < 1:
            raise PreconditionError("contraction needs N0/Z and a positive factor", factor)
        self.ambient = base.ambient
        self.base = base
        self.factor = factor

    def contains(self, g):
        return self.base.contains(self.factor * g)

    def describe(self):
        return f"con:{self.factor},({self.base.describe()})"

    def cap(self):
        c = self.base.cap()
        return None if c is None else c // self.factor

    def _exact(self):
        f = self.base.exact()
        return None if f is None else forms.contract(f, self.factor)


class Inflation(_Unary):
    """{x : floor(x / factor) in base}, the union of factor*base + j for 0 <= j < factor."""

    def __init__(self, base, factor):
        if base.ambient.kind not in ONE_DIMENSIONAL or factor < 1:
            raise PreconditionError("inflation needs N0/Z and a positive factor", factor)
        self.ambient = base.ambient
        self.base = base
        self.factor = factor

    def contains(self, g):
        return self.base.contains(g // self.factor)

    def describe(self):
        return f"inf:{self.factor},({self.base.describe()})"

    def cap(self):
        c = self.base.cap()
        return None if c is None else c * self.factor

    def _exact(self):
        f = self.base.exact()
        return None if f is None else forms.inflate(f, self.factor)


class _Nary(SetExpr):
    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise PreconditionError("need at least one operand")
        kinds = {p.ambient.kind for p in parts}
        if len(kinds) != 1:
            raise PreconditionError("operands live in different ambients", sorted(kinds))
        self.ambient = parts[0].ambient
        self.parts = parts

    def cap(self):
        return _min_cap(*(p.cap() for p in self.parts))

    def _exact(self):
        fs = [p.exact() for p in self.parts]
        if any(f is None for f in fs):
            return None
        if isinstance(fs[0], forms.PeriodicForm):
            return forms.combine(self._op, fs)
        out = fs[0]
        for f in fs[1:]:
            out = self._bool(out, f)
        return out


class Union(_Nary):
    _op = staticmethod(any)
    _bool = staticmethod(forms.bool_union)

    def contains(self, g):
        return any(p.contains(g) for p in self.parts)

    def describe(self):
        return "(" + "|".join(p.describe() for p in self.parts) + ")"


class Intersection(_Nary):
    _op = staticmethod(all)
    _bool = staticmethod(forms.bool_intersection)

    def contains(self, g):
        return all(p.contains(g) for p in self.parts)

    def describe(self):
        return "(" + "&".join(p.describe() for p in self.parts) + ")"


class Complement(_Unary):
    def __init__(self, base):
        self.ambient = base.ambient
        self.base = base

    def contains(self, g):
        return not self.base.contains(g)

    def describe(self):
        return f"!({self.base.describe()})"

    def _exact(self):
        f = self.base.exact()
        if f is None:
            return None
        if isinstance(f, forms.PeriodicForm):
            return forms.complement(f)
        return forms.bool_complement(f)


class Translate(_Unary):
    """g·A (default), g^-1·A when ``inverse``; right translates A·g with ``right``.

    Over N0 the left translate g + A has no members below g and g^-1 A means
    {x : g + x in A}.
    """

    def __init__(self, base, g, inverse=False, right=False):
        self.ambient = base.ambient
        self.base = base
        self.g = g
        self.inverse = inverse
        self.right = right and self.ambient.kind not in ONE_DIMENSIONAL + ("Z2",)

    def contains(self, x):
        a = self.ambient
        if self.inverse:
            y = a.mul(x, self.g) if self.right else a.mul(self.g, x)
            return self.base.contains(y)
        if a is N0:
            return x >= self.g and self.base.contains(x - self.g)
        gi = a.inv(self.g)
        return self.base.contains(a.mul(x, gi) if self.right else a.mul(gi, x))

    def describe(self):
        g = self.ambient.format(self.g)
        if self.right:
            return f"rt:{'-' if self.inverse else ''}{g},({self.base.describe()})"
        return f"{g}{'<' if self.inverse else '>'}({self.base.describe()})"

    def cap(self):
        c = self.base.cap()
        return None if c is None else c - self.ambient.norm(self.g)

    def _exact(self):
        f = self.base.exact()
        if f is None:
            return None
        if isinstance(f, forms.PeriodicForm):
            return forms.translate(f, self.g, self.inverse)
        if self.right:
            return forms.bool_translate(f, self.g, inverse=self.inverse, right=True)
        return forms.bool_translate(f, self.g, inverse=self.inverse)


class Neighborhood(_Unary):
    """K^-1 A = {g : k·g in A for some k in K}."""

    def __init__(self, base, k_set):
        self.ambient = base.ambient
        self.base = base
        self.k_set = tuple(self.ambient.sorted(set(k_set)))

    def contains(self, g):
        mul = self.ambient.mul
        return any(self.base.contains(mul(k, g)) for k in self.k_set)

    def describe(self):
        return f"nbhd:{_fmt_set(self.ambient, self.k_set)},({self.base.describe()})"

    def cap(self):
        c = self.base.cap()
        return None if c is None else c - max(self.ambient.norm(k) for k in self.k_set)

    def _exact(self):
        parts = Union(tuple(Translate(self.base, k, inverse=True) for k in self.k_set))
        return parts.exact()


class Predicate(SetExpr):
    """A membership function, optionally only trusted on ball(cap)."""

    def __init__(self, ambient, fn, name="predicate", cap=None):
        self.ambient = ambient
        self.fn = fn
        self.name = name
        self._cap = cap

    def contains(self, g):
        if self._cap is not None and self.ambient.norm(g) > self._cap:
            raise HorizonError(f"{self.name}: {self.ambient.format(g)} lies outside ball({self._cap})")
        return bool(self.fn(g))

    def describe(self):
        return self.name

    def cap(self):
        return self._cap


class Observed(SetExpr):
    """A set known only on ball(level), e.g. a return-time set seen at a horizon."""

    def __init__(self, ambient, elements, level, name=None):
        self.ambient = ambient
        self.elements = frozenset(elements)
        self.level = level
        self.name = name

    def contains(self, g):
        if self.ambient.norm(g) > self.level:
            raise HorizonError(f"{self.ambient.format(g)} lies outside the observed ball({self.level})")
        return g in self.elements

    def describe(self):
        if self.name:
            return self.name
        return f"observed:{self.level}:" + _fmt_set(self.ambient, self.elements)

    def cap(self):
        return self.level


class IntervalUnion(SetExpr):
    """Union of integer intervals produced lazily in increasing order of left end."""

    def __init__(self, ambient, intervals, name):
        self.ambient = ambient
        self._source = intervals
        self._iter = None
        self._los = []
        self._his = []
        self._exhausted = False
        self._last_lo = float("-inf")
        self.name = name

    def _advance(self, x):
        if self._iter is None:
            self._iter = iter(self._source())
        # intervals arrive sorted by left end, so x is settled once one starts past it
        while not self._exhausted and self._last_lo <= x:
            try:
                lo, hi = next(self._iter)
            except StopIteration:
                self._exhausted = True
                break
            self._last_lo = lo
            if self._his and lo <= self._his[-1] + 1:
                self._his[-1] = max(self._his[-1], hi)
            else:
                self._los.append(lo)
                self._his.append(hi)

    def contains(self, g):
        self._advance(g)
        i = bisect.bisect_right(self._los, g) - 1
        return i >= 0 and g <= self._his[i]

    def describe(self):
        return self.name


def pow2_blocks(ambient=N0):
    """Union of the blocks [2^k, 2^k + k] for k >= 0."""

    def gen():
        k = 0
        while True:
            yield (2**k, 2**k + k)
            k += 1

    return IntervalUnion(ambient, gen, "blocks")


def chain_blocks(ambient, base, level, parity=None):
    """Union over j >= level (of the given parity) of [b^j, b^j + floor(b^j (1/2 + 2^-level))]."""

    def gen():
        j = level
        while True:
            if parity is None or j % 2 == parity:
                start = base**j
                yield (start, start + start // 2 + (start >> level))
            j += 1

    tag = "" if parity is None else (",even" if parity == 0 else ",odd")
    return IntervalUnion(ambient, gen, f"cblocks:{base},{level}{tag}")


class GreedySeparated(SetExpr):
    """Greedy maximal B inside ``base`` with the translates K·b pairwise disjoint.

    Candidates are scanned in enumeration order and the identity is treated as
    already chosen, so K·b must also avoid K.  The scan is prefix-stable:
    membership of g only depends on candidates enumerated before g.
    """

    def __init__(self, base, k_set):
        self.ambient = base.ambient
        self.base = base
        self.k_set = tuple(self.ambient.sorted(set(k_set)))
        a = self.ambient
        self._occupied = {a.mul(k, a.identity) for k in self.k_set}
        self._chosen = set()
        self._order = []
        self._next = 1

    def _advance(self, index):
        a = self.ambient
        while self._next <= index:
            g = a.enumerate(self._next)
            self._next += 1
            if not self.base.contains(g):
                continue
            shifted = {a.mul(k, g) for k in self.k_set}
            if shifted & self._occupied:
                continue
            self._occupied |= shifted
            self._chosen.add(g)
            self._order.append(g)

    def contains(self, g):
        self._advance(self.ambient.index(g))
        return g in self._chosen

    def chosen_up_to(self, level):
        self._advance(self.ambient.ball_size(level) - 1)
        return [g for g in self._order if self.ambient.norm(g) <= level]

    def describe(self):
        return f"sep:{_fmt_set(self.ambient, self.k_set)},({self.base.describe()})"

    def cap(self):
        return self.base.cap()


def even_words(ambient):
    return Predicate(ambient, lambda w: len(w) % 2 == 0, "evenlen")


def positive_integers(ambient=N0):
    return EventuallyPeriodic(ambient, 1, 1, {0})


def multiples(ambient, k, positive=None):
    """k·N over N0 (positive multiples) and kZ over Z."""
    if positive is None:
        positive = ambient is N0
    if positive:
        return EventuallyPeriodic(ambient, k, k, {0})
    return EventuallyPeriodic(ambient, 0, k, {0})


def symmetric_intersection(a, f1, f2):
    """The intersection of f^-1 A over f in f1 and of f^-1 (G minus A) over f in f2."""
    parts = [Translate(a, f, inverse=True) for f in f1]
    parts += [Translate(Complement(a), f, inverse=True) for f in f2]
    if not parts:
        return Full(a.ambient)
    return Intersection(parts)


def materialize(s, level):
    """Members of s inside ball(level), in enumeration order."""
    return [g for g in s.ambient.ball(level) if s.contains(g)]


__all__ = [
    "SetExpr", "Full", "Finite", "EventuallyPeriodic", "FSGen", "FPGen", "Dilation", "Contraction",
    "Inflation", "Union", "Intersection", "Complement", "Translate", "Neighborhood", "Predicate",
    "Observed", "IntervalUnion", "GreedySeparated", "pow2_blocks", "chain_blocks", "even_words",
    "positive_integers", "multiples", "symmetric_intersection", "materialize", "member", "fs_generate",
]
