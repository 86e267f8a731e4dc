"""Constructive witnesses: disjoint blocks in thick sets, separated subsets,
the dilation split over N0, and the separator search for finite sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import forms
from ..ambient import N0
from .classify import classify_syndetic, classify_thick
from ..errors import HorizonError, PreconditionError
from .sets import Dilation, GreedySeparated, Inflation, Intersection, SetExpr, positive_integers


def find_separator(ambient, finite, candidates):
    """First h among ``candidates`` with F ∩ F·h empty.

    Any candidate list with more than |F|^2 distinct elements contains one,
    since F·h meets F only when h lies in F^-1 F.
    """
    f = set(finite)
    for h in candidates:
        if not f & {ambient.mul(x, h) for x in f}:
            return h
    return None


def _difference_set(ambient, elements):
    """All b^-1 b' (b' - b over N0 and Z) for b, b' in the set."""
    if ambient.kind in ("N0", "Z"):
        return {y - x for x in elements for y in elements}
    return {ambient.mul(ambient.inv(x), y) for x in elements for y in elements}


@dataclass
class Block:
    n: int
    translator: object
    elements: list
    part: list = field(default_factory=list)


def iter_blocks(thick, horizon, keep=None, start=1, avoid=()):
    """Disjoint blocks ball(n)·g_n inside ``thick``, for n = start, start+1, ...

    With B_n the union of the earlier blocks, the elements of ``avoid`` and
    ball(n), g_n is the first element of ball(horizon) in enumeration order
    with ball(n)·g_n inside the set, g_n outside B_n^-1 B_n (so the new block
    misses B_n) and no element of ``avoid`` in the block.  ``keep`` maps a
    block to the part that is actually used (e.g. its intersection with a
    syndetic set); blocks whose part is empty are passed over.  Raises
    HorizonError once no translator is left.
    """
    a = thick.ambient
    union = set(avoid)
    avoid = set(avoid)
    n = start
    count = 0
    while True:
        ball = list(a.ball(n))
        b_n = union | set(ball)
        forbidden = _difference_set(a, b_n) if count or avoid else set()
        found = None
        for g in a.ball(horizon):
            if g in forbidden:
                continue
            elements = [a.mul(k, g) for k in ball]
            if avoid & set(elements):
                continue
            if not all(thick.contains(x) for x in elements):
                continue
            part = keep(elements) if keep else elements
            if not part:
                continue
            found = Block(n, g, elements, list(part))
            break
        if found is None:
            raise HorizonError(f"no translator for block {n} inside ball({horizon}) after {count} blocks")
        yield found
        count += 1
        union |= set(found.elements)
        n += 1


def block_sequence(thick, count, horizon, keep=None, start=1, avoid=()):
    """The first ``count`` blocks of iter_blocks as a list."""
    blocks = []
    for b in iter_blocks(thick, horizon, keep, start, avoid):
        blocks.append(b)
        if len(blocks) == count:
            break
    return blocks


def p1_witness_thick(s, count, horizon):
    """``count`` pairwise disjoint blocks ball(n)·g_n inside a thick set."""
    v = classify_thick(s, horizon)
    if v.no:
        raise PreconditionError("set is not thick", v.refuter)
    return [b.elements for b in block_sequence(s, count, horizon)]


@dataclass
class SeparationCertificate:
    k_set: list
    chosen: list
    horizon: int
    pairwise_disjoint: bool
    covering: bool
    uncovered: object = None

    @property
    def ok(self):
        return self.pairwise_disjoint and self.covering


def separated_subset(s, k_set, horizon):
    """Greedy maximal B ⊂ s ∩ ball(horizon) with the sets K·b pairwise disjoint
    and disjoint from K; returns (B as a finite list, certificate)."""
    greedy = GreedySeparated(s, k_set)
    chosen = greedy.chosen_up_to(horizon)
    return chosen, certify_separation(s, k_set, chosen, horizon)


def certify_separation(s, k_set, chosen, horizon):
    a = s.ambient
    k_set = list(k_set)
    translates = [{a.mul(k, b) for k in k_set} for b in [a.identity] + list(chosen)]
    seen = set()
    disjoint = True
    for t in translates:
        if t & seen:
            disjoint = False
        seen |= t
    # maximality: every x in s meets some K·b with b in B ∪ {e}
    uncovered = None
    for x in a.ball(horizon):
        if s.contains(x) and not any(a.mul(k, x) in seen for k in k_set):
            uncovered = x
            break
    return SeparationCertificate(k_set, list(chosen), horizon, disjoint, uncovered is None, uncovered)


class BlockInterior(SetExpr):
    """{x : k·x + j lies in base for every 0 <= j < k}, so that inflating it by k stays inside base."""

    def __init__(self, base, factor):
        self.ambient = base.ambient
        self.base = base
        self.factor = factor
        self._memo = lru_cache(maxsize=None)(self._compute)

    def _compute(self, x):
        k = self.factor
        return all(self.base.contains(k * x + j) for j in range(k))

    def contains(self, g):
        return self._memo(g)

    def describe(self):
        return f"int:{self.factor},({self.base.describe()})"

    def cap(self):
        c = self.base.cap()
        return None if c is None else c // self.factor - 1

    def _exact(self):
        f = self.base.exact()
        if f is None:
            return None
        k = self.factor
        parts = [forms.contract(forms.translate(f, j, inverse=True), k) for j in range(k)]
        return forms.combine(all, parts)


@dataclass
class DilationCertificate:
    factor: int
    horizon: int
    h_thick: object
    s_syndetic: object
    s_in_multiples: bool
    inside_target: bool
    offending: object = None

    @property
    def ok(self):
        return self.h_thick.yes and self.s_syndetic.yes and self.s_in_multiples and self.inside_target


def dilation_split(n_set, a, hprime, sprime, horizon, check_inputs=True):
    """Return H = ∪_{j<=a} ((a+1)H' + j) and S = (a+1)S' with a certificate.

    S' is read without 0 so that S lies in (a+1)N.
    """
    if n_set.ambient is not N0:
        raise PreconditionError("the dilation split works over N0", n_set.ambient.kind)
    if a < 0:
        raise PreconditionError("a must be non-negative", a)
    k = a + 1
    if check_inputs:
        hv = classify_thick(hprime, horizon)
        if not hv.yes:
            raise PreconditionError("H' is not thick-certified", hv.status)
        sv = classify_syndetic(sprime, horizon)
        if not sv.yes:
            raise PreconditionError("S' is not syndetic-certified", sv.status)
    for x in range(horizon // k + 1):
        if hprime.contains(x) and sprime.contains(x) and not n_set.contains(k * x):
            raise PreconditionError("(a+1)(H' ∩ S') is not inside the target set", k * x)
    s_pos = sprime if not sprime.contains(0) else Intersection((sprime, positive_integers()))
    big_h = hprime if k == 1 else Inflation(hprime, k)
    big_s = s_pos if k == 1 else Dilation(s_pos, k)
    return big_h, big_s, certify_dilation(n_set, k, big_h, big_s, horizon)


def certify_dilation(n_set, k, big_h, big_s, horizon):
    s_members = [x for x in range(horizon + 1) if big_s.contains(x)]
    multiples = all(x > 0 and x % k == 0 for x in s_members)
    offending = next((x for x in s_members if big_h.contains(x) and not n_set.contains(x)), None)
    return DilationCertificate(
        k, horizon, classify_thick(big_h, horizon), classify_syndetic(big_s, horizon),
        multiples, offending is None, offending,
    )
