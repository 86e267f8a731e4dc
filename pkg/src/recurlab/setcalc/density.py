"""Upper densities along Følner sequences, Banach density windows and
disjointification of fast-growing Følner sequences.  All values are exact
rationals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import forms
from ..errors import PreconditionError, UnsupportedOperation


@dataclass
class FolnerSeq:
    ambient: object
    shape: str = "boxes"
    sets: list | None = None

    def __post_init__(self):
        if self.ambient.kind not in ("Z", "Z2"):
            raise UnsupportedOperation("Følner sequences are provided for Z and Z2 only")
        if self.sets is not None:
            self.shape = "explicit"
            if any(not s for s in self.sets):
                raise PreconditionError("Følner sets must be nonempty")

    def member(self, n):
        """F_n for n >= 1."""
        if self.sets is not None:
            return set(self.sets[n - 1])
        return set(self.ambient.ball(n))

    def __len__(self):
        if self.sets is None:
            raise TypeError("the box sequence is infinite")
        return len(self.sets)


@dataclass
class DensityReport:
    value: Fraction
    exact: bool
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "value": f"{self.value.numerator}/{self.value.denominator}",
            "float": float(self.value),
            "exact": self.exact,
            **self.detail,
        }


def _closed_form(s):
    form = s.exact()
    if isinstance(form, forms.PeriodicForm):
        return form.density()
    if isinstance(form, forms.BoolForm):
        return Fraction(1 if form.cofinite else 0)
    return None


def _box_counts(s, n_max):
    """Yield (n, |F_n ∩ A|, |F_n|) for the boxes, counting shell by shell."""
    a = s.ambient
    count = 1 if s.contains(a.identity) else 0
    prev = 1
    for n in range(1, n_max + 1):
        size = a.ball_size(n)
        count += sum(1 for i in range(prev, size) if s.contains(a.enumerate(i)))
        prev = size
        yield n, count, size


def upper_density(s, folner, n_max):
    if s.ambient.kind not in ("Z", "Z2"):
        raise UnsupportedOperation("upper density is provided over Z and Z2")
    closed = _closed_form(s)
    if closed is not None:
        return DensityReport(closed, True, {"folner": folner.shape})
    lower = max(1, (n_max + 1) // 2)
    best = Fraction(0)
    if folner.sets is None:
        counts = _box_counts(s, n_max)
    else:
        counts = ((n, sum(1 for g in folner.member(n) if s.contains(g)), len(folner.member(n)))
                  for n in range(1, min(n_max, len(folner)) + 1))
    for n, c, size in counts:
        if n >= lower:
            best = max(best, Fraction(c, size))
    return DensityReport(best, False, {"folner": folner.shape, "n_max": n_max, "tail_from": lower})


def banach_density(s, window_max, radius=None):
    """Exact for sets with a periodic normal form; otherwise the largest density
    of a window of length ``window_max`` inside [-radius, radius]."""
    if s.ambient.kind != "Z":
        raise UnsupportedOperation("Banach density windows are provided over Z")
    closed = _closed_form(s)
    if closed is not None:
        return DensityReport(closed, True)
    w = window_max
    radius = 4 * w if radius is None else radius
    bits = [1 if s.contains(x) else 0 for x in range(-radius, radius + 1)]
    if len(bits) < w:
        raise PreconditionError("window longer than the scanned range", w)
    cur = sum(bits[:w])
    best = cur
    for i in range(w, len(bits)):
        cur += bits[i] - bits[i - w]
        best = max(best, cur)
    return DensityReport(Fraction(best, w), False, {"window": w, "radius": radius})


def folner_quotient(ambient, finite, g):
    """|gF Δ F| / |F|."""
    f = set(finite)
    moved = {ambient.mul(g, x) for x in f}
    return Fraction(len(moved ^ f), len(f))


class GrowthError(PreconditionError):
    def __init__(self, n, size, bound):
        super().__init__(f"growth inequality fails at n={n}: |F_n| = {size} is not > {bound}", n)
        self.n = n
        self.size = size
        self.bound = bound


@dataclass
class Disjointified:
    sets: list
    quotients: list

    def to_json(self, ambient):
        return {
            "sizes": [len(e) for e in self.sets],
            "quotients": [
                {ambient.format(g): f"{q.numerator}/{q.denominator}" for g, q in row.items()}
                for row in self.quotients
            ],
        }


def check_growth(sets):
    """|F_n| > (n+1)(|F_1| + ... + |F_{n-1}|) for every n >= 2 (1-indexed)."""
    total = 0
    for n, f in enumerate(sets, start=1):
        if n >= 2 and not len(f) > (n + 1) * total:
            raise GrowthError(n, len(f), (n + 1) * total)
        total += len(f)


def folner_disjointify(folner, count=None, growth_checked=True):
    """E_n = F_n minus the earlier F_i, with translation quotients per generator."""
    sets = [folner.member(n) for n in range(1, (count or len(folner)) + 1)]
    if growth_checked:
        check_growth(sets)
    out, quotients, seen = [], [], set()
    for f in sets:
        e = f - seen
        seen |= f
        out.append(e)
        quotients.append({g: folner_quotient(folner.ambient, e, g) for g in folner.ambient.generators()})
    return Disjointified(out, quotients)
