"""Exact normal forms for sets that admit a finite description.

Over N0 and Z every finite boolean combination of eventually periodic sets,
finite sets, translates and dilations is again of the form

    x in A  <=>  x in window            if lo <= x < hi
                 x mod period in residues  otherwise

which is what :class:`PeriodicForm` stores.  Over Z^2 and F2 the only exact
sets are finite and cofinite ones (:class:`BoolForm`).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from ..ambient import N0


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class PeriodicForm:
    ambient: object
    period: int
    residues: frozenset
    lo: int = 0
    hi: int = 0
    window: frozenset = frozenset()

    def periodic_member(self, x):
        return x % self.period in self.residues

    def contains(self, x):
        if self.ambient is N0 and x < 0:
            return False
        if self.lo <= x < self.hi:
            return x in self.window
        return x % self.period in self.residues

    @property
    def all_residues(self):
        return len(self.residues) == self.period

    @property
    def no_residues(self):
        return not self.residues

    def density(self):
        from fractions import Fraction

        return Fraction(len(self.residues), self.period)


def make_periodic(ambient, period, residues, lo, hi, member):
    """Build a PeriodicForm, trimming the window and reducing the period."""
    residues = frozenset(r % period for r in residues)
    for d in _divisors(period):
        reduced = frozenset(s % d for s in residues)
        if len(reduced) * (period // d) == len(residues):
            residues, period = reduced, d
            break
    if ambient is N0:
        lo = max(lo, 0)
        hi = max(hi, lo)

    def rule(x):
        return x % period in residues

    while lo < hi and member(lo) == rule(lo):
        lo += 1
    while hi > lo and member(hi - 1) == rule(hi - 1):
        hi -= 1
    if lo >= hi:
        lo = hi = 0
        window = frozenset()
    else:
        window = frozenset(x for x in range(lo, hi) if member(x))
    return PeriodicForm(ambient, period, residues, lo, hi, window)


def _bounds(forms):
    spans = [(f.lo, f.hi) for f in forms if f.lo < f.hi]
    if not spans:
        return 0, 0
    return min(s[0] for s in spans), max(s[1] for s in spans)


def combine(op, forms):
    ambient = forms[0].ambient
    period = lcm(*(f.period for f in forms))
    lo, hi = _bounds(forms)
    residues = {r for r in range(period) if op([f.periodic_member(r) for f in forms])}
    return make_periodic(ambient, period, residues, lo, hi, lambda x: op([f.contains(x) for f in forms]))


def complement(form):
    return combine(lambda bits: not bits[0], [form])


def translate(form, g, inverse=False):
    """Left translate g + A, or g^-1 A = {x : g + x in A} when ``inverse``."""
    a, p = form.ambient, form.period
    if inverse:
        residues = {r for r in range(p) if (r + g) % p in form.residues}
        lo, hi = (form.lo - g, form.hi - g) if form.lo < form.hi else (0, 0)
        if a is N0:
            lo = max(lo, 0)
            hi = max(hi, lo)
        return make_periodic(a, p, residues, lo, hi, lambda x: form.contains(x + g))
    residues = {r for r in range(p) if (r - g) % p in form.residues}
    lo, hi = (form.lo + g, form.hi + g) if form.lo < form.hi else (0, 0)
    if a is N0:
        lo, hi = 0, max(hi, g)

        def member(x):
            return x >= g and form.contains(x - g)
    else:

        def member(x):
            return form.contains(x - g)

    return make_periodic(a, p, residues, lo, hi, member)


def dilate(form, k):
    """{k*x : x in A}."""
    p = form.period * k
    residues = {r for r in range(p) if r % k == 0 and (r // k) % form.period in form.residues}
    return make_periodic(
        form.ambient, p, residues, k * form.lo, k * form.hi,
        lambda x: x % k == 0 and form.contains(x // k),
    )


def contract(form, k):
    """{x : k*x in A}."""
    p = form.period
    residues = {r for r in range(p) if (k * r) % p in form.residues}
    lo, hi = -(-form.lo // k), -(-form.hi // k)
    return make_periodic(form.ambient, p, residues, lo, hi, lambda x: form.contains(k * x))


def inflate(form, k):
    """{x : floor(x / k) in A}, i.e. the union of k*A + j over 0 <= j < k."""
    p = form.period * k
    residues = {r for r in range(p) if (r // k) % form.period in form.residues}
    return make_periodic(form.ambient, p, residues, k * form.lo, k * form.hi, lambda x: form.contains(x // k))


@dataclass(frozen=True)
class BoolForm:
    """A finite set, or the complement of one when ``cofinite``."""

    ambient: object
    cofinite: bool
    elements: frozenset

    def contains(self, g):
        return (g in self.elements) != self.cofinite


def bool_union(x, y):
    if not x.cofinite and not y.cofinite:
        return BoolForm(x.ambient, False, x.elements | y.elements)
    if x.cofinite and y.cofinite:
        return BoolForm(x.ambient, True, x.elements & y.elements)
    fin, co = (x, y) if not x.cofinite else (y, x)
    return BoolForm(x.ambient, True, co.elements - fin.elements)


def bool_complement(x):
    return BoolForm(x.ambient, not x.cofinite, x.elements)


def bool_intersection(x, y):
    return bool_complement(bool_union(bool_complement(x), bool_complement(y)))


def bool_translate(x, g, inverse=False, right=False):
    a = x.ambient
    h = a.inv(g) if inverse else g
    moved = frozenset(a.mul(e, h) if right else a.mul(h, e) for e in x.elements)
    return BoolForm(a, x.cofinite, moved)
