"""Thick / syndetic / piecewise syndetic / infinite classification.

Sets with an exact normal form are decided outright.  Anything else is judged
from a ball of radius ``horizon``:

* thick: translates ball(l)·g inside the set are searched for l = 1, 2, ...;
  the verdict is CertifiedYes once the required level is reached.
* syndetic: the least r such that ball(r)·g meets the set for every g whose
  translate stays inside the window; if even r = syndetic_cap(horizon) leaves
  an empty window, that window is reported and the verdict is CertifiedNo
  at this horizon.
* piecewise syndetic: a set A is piecewise syndetic exactly when K^-1 A is
  thick for some finite K; then B = A ∪ K^-1 A and C = A ∪ (G minus K^-1 A)
  are a thick and a syndetic set with B ∩ C = A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import forms
from .sets import Complement, Full, Neighborhood, SetExpr, Union

YES = "CertifiedYes"
NO = "CertifiedNo"
INCONCLUSIVE = "Inconclusive"

CERT_SCHEMA = "rl-cert-1"


def default_level(ambient, horizon):
    """Thickness level required before a windowed verdict says yes."""
    if ambient.kind == "F2":
        return max(1, horizon // 3)
    return max(1, (max(horizon, 1).bit_length() - 1) // 3)


def syndetic_cap(ambient, horizon):
    """Largest syndeticity radius tried inside ball(horizon)."""
    if ambient.kind == "F2":
        return horizon // 2
    return horizon // 4


@dataclass
class Verdict:
    prop: str
    status: str
    horizon: int
    ambient: object
    exact: bool = False
    level: int | None = None
    witness: dict = field(default_factory=dict)
    refuter: dict = field(default_factory=dict)
    subject: str = ""

    @property
    def yes(self):
        return self.status == YES

    @property
    def no(self):
        return self.status == NO

    def to_json(self):
        out = {
            "schema": CERT_SCHEMA,
            "property": self.prop,
            "status": self.status,
            "horizon": self.horizon,
            "ambient": self.ambient.kind,
            "exact": self.exact,
            "level": self.level,
            "set": self.subject,
            "witness": encode(self.witness, self.ambient),
            "refuter": encode(self.refuter, self.ambient),
        }
        return out


def encode(value, ambient):
    if isinstance(value, Verdict):
        return value.to_json()
    if isinstance(value, SetExpr):
        return value.describe()
    if isinstance(value, dict):
        return {str(k): encode(v, ambient) for k, v in value.items()}
    if isinstance(value, list):
        return [encode(v, ambient) for v in value]
    if isinstance(value, (tuple, str)):
        return ambient.format(value)
    return value


def _horizon(s, horizon):
    cap = s.cap()
    return horizon if cap is None else min(horizon, cap)


def _ball_translate_inside(s, level, g):
    a = s.ambient
    return all(s.contains(a.mul(k, g)) for k in a.ball(level))


def _first_translator(s, level, limit=None):
    """First g in enumeration order with ball(level)·g inside s (exact sets only)."""
    a = s.ambient
    i = 0
    while limit is None or i < limit:
        g = a.enumerate(i)
        if _ball_translate_inside(s, level, g):
            return g
        i += 1
    return None


# ---------------------------------------------------------------- windows

class _Window1D:
    """Membership bits of a set over [lo, hi] for N0 or Z."""

    def __init__(self, s, h):
        self.s = s
        self.n0 = s.ambient.kind == "N0"
        self.lo = 0 if self.n0 else -h
        self.hi = h
        self.bits = [s.contains(x) for x in range(self.lo, h + 1)]

    def __getitem__(self, x):
        return self.bits[x - self.lo]

    def run_right(self):
        """run[x - lo] = length of the run of members starting at x."""
        n = len(self.bits)
        run = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            run[i] = run[i + 1] + 1 if self.bits[i] else 0
        return run

    def next_distance(self):
        """Distance from x to the next member >= x inside the window (inf if none)."""
        n = len(self.bits)
        inf = float("inf")
        out = [inf] * n
        nxt = inf
        for i in range(n - 1, -1, -1):
            if self.bits[i]:
                nxt = i
            out[i] = nxt - i
        return out

    def nearest_distance(self):
        n = len(self.bits)
        inf = float("inf")
        right = self.next_distance()
        out = [inf] * n
        prev = -inf
        for i in range(n):
            if self.bits[i]:
                prev = i
            out[i] = min(i - prev, right[i])
        return out

    def cover_distance(self):
        """d[x] = least r with ball(r) + x meeting the set (within the window)."""
        return self.next_distance() if self.n0 else self.nearest_distance()

    def ball_span(self, r):
        """Offsets of ball(r) relative to its anchor: [0, r] over N0, [-r, r] over Z."""
        return (0, r) if self.n0 else (-r, r)


def _anchor_order(ambient, radius):
    """Elements of ball(radius) in enumeration order."""
    return ambient.ball(radius)


# ---------------------------------------------------------------- thick

def classify_thick(s, horizon, level=None):
    a = s.ambient
    need = level if level is not None else default_level(a, horizon)
    form = s.exact()
    if form is not None:
        return _thick_exact(s, form, horizon, need)
    h = _horizon(s, horizon)
    if a.kind in ("N0", "Z"):
        translators = _thick_runs_1d(s, h)
    else:
        translators = {}
        for lv in range(1, need + 1):
            g = next((g for g in a.ball(h - lv) if _ball_translate_inside(s, lv, g)), None)
            if g is None:
                break
            translators[lv] = g
    found = max(translators) if translators else 0
    status = YES if found >= need else INCONCLUSIVE
    return Verdict(
        "thick", status, h, a, level=found,
        witness={"translators": translators, "required_level": need},
        subject=s.describe(),
    )


def _thick_runs_1d(s, h):
    w = _Window1D(s, h)
    run = w.run_right()
    translators = {}
    lv = 1
    while True:
        lo_off, hi_off = w.ball_span(lv)
        span = hi_off - lo_off + 1
        best = None
        for g in _anchor_order(s.ambient, h - lv):
            start = g + lo_off
            if start < w.lo:
                continue
            if run[start - w.lo] >= span:
                best = g
                break
        if best is None or len(translators) >= 64:
            return translators
        translators[lv] = best
        lv += 1


def _thick_exact(s, form, horizon, need):
    a = s.ambient
    if isinstance(form, forms.PeriodicForm):
        if form.all_residues:
            limit = a.ball_size(abs(form.lo) + abs(form.hi) + need + 2)
            translators = {lv: _first_translator(s, lv, limit) for lv in range(1, need + 1)}
            return Verdict("thick", YES, horizon, a, exact=True, level=need,
                           witness={"translators": translators}, subject=s.describe())
        p = form.period
        lo = 0 if a.kind == "N0" else min(form.lo, 0) - 2 * p
        hi = max(form.hi, 0) + 2 * p
        best = cur = 0
        for x in range(lo, hi + 1):
            cur = cur + 1 if form.contains(x) else 0
            best = max(best, cur)
        fits = _max_level_for_run(a, best)
        return Verdict("thick", NO, horizon, a, exact=True, level=fits,
                       refuter={"max_run": best, "first_missing_level": fits + 1},
                       subject=s.describe())
    if form.cofinite:
        limit = None
        translators = {lv: _first_translator(s, lv, limit) for lv in range(1, need + 1)}
        return Verdict("thick", YES, horizon, a, exact=True, level=need,
                       witness={"translators": translators}, subject=s.describe())
    return Verdict("thick", NO, horizon, a, exact=True, level=0,
                   refuter={"finite_size": len(form.elements)}, subject=s.describe())


def _max_level_for_run(a, max_run):
    """Largest l such that ball(l) fits in a run of the given length."""
    if a.kind == "N0":
        return max(max_run - 1, 0)
    return max((max_run - 1) // 2, 0)


# ---------------------------------------------------------------- syndetic

def classify_syndetic(s, horizon):
    a = s.ambient
    form = s.exact()
    if form is not None:
        return _syndetic_exact(s, form, horizon)
    h = _horizon(s, horizon)
    cap = syndetic_cap(a, h)
    if cap < 0 or h < 1:
        return Verdict("syndetic", INCONCLUSIVE, h, a, subject=s.describe(),
                       refuter={"reason": "horizon too small"})
    if a.kind in ("N0", "Z"):
        r, gap_at = _syndetic_1d(s, h, cap)
    else:
        r, gap_at = _syndetic_generic(s, h, cap)
    if r is not None:
        return Verdict("syndetic", YES, h, a, level=r,
                       witness={"K": list(a.ball(r)), "covered_level": h - r},
                       subject=s.describe())
    return Verdict("syndetic", NO, h, a, level=cap,
                   refuter={"empty_window_at": gap_at, "radius": cap}, subject=s.describe())


def _syndetic_1d(s, h, cap):
    w = _Window1D(s, h)
    dist = w.cover_distance()
    n0 = w.n0
    # worst[t] = max distance over anchors g with norm(g) <= t
    worst = []
    cur = 0
    for t in range(h + 1):
        vals = [dist[t - w.lo]] if (n0 or t == 0) else [dist[t - w.lo], dist[-t - w.lo]]
        cur = max([cur] + vals)
        worst.append(cur)
    for r in range(cap + 1):
        if worst[h - r] <= r:
            return r, None
    t = h - cap
    candidates = range(0, t + 1) if n0 else _anchor_order(s.ambient, t)
    gap_at = next(g for g in candidates if dist[g - w.lo] > cap)
    return None, gap_at


def _syndetic_generic(s, h, cap):
    a = s.ambient
    memo = {}

    def member(x):
        if x not in memo:
            memo[x] = s.contains(x)
        return memo[x]

    for r in range(cap + 1):
        k = a.ball(r)
        bad = next((g for g in a.ball(h - r) if not any(member(a.mul(x, g)) for x in k)), None)
        if bad is None:
            return r, None
        if r == cap:
            return None, bad
    return None, None


def _syndetic_exact(s, form, horizon):
    a = s.ambient
    if isinstance(form, forms.PeriodicForm):
        if form.no_residues:
            top = max(form.window) if form.window else 0
            return Verdict("syndetic", NO, horizon, a, exact=True,
                           refuter={"finite": True, "beyond": top + 1}, subject=s.describe())
        p = form.period
        lo = 0 if a.kind == "N0" else min(form.lo, 0) - p
        hi = max(form.hi, 0) + p
        d = p - 1
        for g in range(lo, hi + 1):
            x = g
            while not form.contains(x):
                x += 1
            d = max(d, x - g)
        return Verdict("syndetic", YES, horizon, a, exact=True, level=d,
                       witness={"K": list(range(d + 1)), "covered_level": horizon},
                       subject=s.describe())
    if not form.cofinite:
        return Verdict("syndetic", NO, horizon, a, exact=True,
                       refuter={"finite": True, "size": len(form.elements)}, subject=s.describe())
    k = [a.enumerate(i) for i in range(len(form.elements) + 1)]
    return Verdict("syndetic", YES, horizon, a, exact=True, level=len(k),
                   witness={"K": k, "covered_level": horizon}, subject=s.describe())


# ---------------------------------------------------------------- piecewise syndetic

def classify_pws(s, horizon, decomposition=None):
    a = s.ambient
    if decomposition is not None:
        return _pws_from_decomposition(s, horizon, *decomposition)
    form = s.exact()
    if form is not None:
        syn = classify_syndetic(s, horizon)
        if syn.yes:
            thick = classify_thick(Full(a), horizon)
            return Verdict("pws", YES, horizon, a, exact=True, level=thick.level,
                           witness={"B": Full(a), "C": s, "thick": thick, "syndetic": syn,
                                    "inclusion_level": horizon},
                           subject=s.describe())
        return Verdict("pws", NO, horizon, a, exact=True,
                       refuter={"reason": "finite sets are not piecewise syndetic", "syndetic": syn},
                       subject=s.describe())
    h = _horizon(s, horizon)
    need = default_level(a, h)
    r = _pws_radius(s, h, need)
    if r is None:
        return Verdict("pws", INCONCLUSIVE, h, a, subject=s.describe(),
                       refuter={"reason": "no K = ball(r) with K^-1 A thick inside the window",
                                "radius_tried": syndetic_cap(a, h)})
    k = list(a.ball(r))
    nb = Neighborhood(s, k)
    return _pws_from_decomposition(s, h, Union((s, nb)), Union((s, Complement(nb))), extra={"K": k})


def _pws_radius(s, h, need):
    a = s.ambient
    cap = syndetic_cap(a, h)
    if a.kind in ("N0", "Z"):
        w = _Window1D(s, h)
        dist = w.cover_distance()
        for r in range(cap + 1):
            inner = h - r
            lo_w = 0 if w.n0 else -inner
            cur = best = 0
            for x in range(lo_w, inner + 1):
                cur = cur + 1 if dist[x - w.lo] <= r else 0
                best = max(best, cur)
            if _max_level_for_run(a, best) >= need:
                return r
        return None
    for r in range(cap + 1):
        nb = Neighborhood(s, a.ball(r))
        inner = h - r
        if any(_ball_translate_inside(nb, need, g) for g in a.ball(inner - need)):
            return r
    return None


def _pws_from_decomposition(s, horizon, thick_part, syndetic_part, extra=None):
    a = s.ambient
    h = min(_horizon(s, horizon), _horizon(thick_part, horizon), _horizon(syndetic_part, horizon))
    tv = classify_thick(thick_part, h)
    sv = classify_syndetic(syndetic_part, h)
    bad = next((g for g in a.ball(h) if thick_part.contains(g) and syndetic_part.contains(g)
                and not s.contains(g)), None)
    witness = {"B": thick_part, "C": syndetic_part, "thick": tv, "syndetic": sv, "inclusion_level": h}
    witness.update(extra or {})
    if bad is not None:
        return Verdict("pws", INCONCLUSIVE, h, a, subject=s.describe(), witness=witness,
                       refuter={"reason": "B ∩ C is not inside the set", "element": bad})
    exact = tv.exact and sv.exact
    if tv.yes and sv.yes:
        return Verdict("pws", YES, h, a, exact=exact, level=tv.level, witness=witness, subject=s.describe())
    if exact and s.exact() is not None:
        return classify_pws(s, horizon)
    return Verdict("pws", INCONCLUSIVE, h, a, witness=witness, subject=s.describe(),
                   refuter={"reason": "decomposition not certified at this horizon"})


# ---------------------------------------------------------------- infinite

def classify_infinite(s, horizon):
    a = s.ambient
    form = s.exact()
    if form is not None:
        if isinstance(form, forms.PeriodicForm):
            infinite = not form.no_residues
            size = None if infinite else len(form.window)
        else:
            infinite = form.cofinite
            size = None if infinite else len(form.elements)
        if infinite:
            return Verdict("infinite", YES, horizon, a, exact=True, subject=s.describe())
        return Verdict("infinite", NO, horizon, a, exact=True, refuter={"size": size}, subject=s.describe())
    h = _horizon(s, horizon)
    inner = a.ball_size(h // 2)
    far = next((g for g in a.ball(h)[inner:] if s.contains(g)), None) if a.kind != "N0" else next(
        (g for g in range(h // 2 + 1, h + 1) if s.contains(g)), None)
    if far is not None:
        return Verdict("infinite", YES, h, a, witness={"far_member": far}, subject=s.describe())
    return Verdict("infinite", INCONCLUSIVE, h, a, subject=s.describe(),
                   refuter={"reason": "no member between the half horizon and the horizon"})


CLASSIFIERS = {
    "thick": classify_thick,
    "syndetic": classify_syndetic,
    "pws": classify_pws,
    "infinite": classify_infinite,
}


def classify(s, prop, horizon):
    return CLASSIFIERS[prop](s, horizon)


# ---------------------------------------------------------------- re-checking

def recheck(verdict, s):
    """Re-verify a CertifiedYes witness by direct membership queries."""
    a = s.ambient
    if not verdict.yes:
        return True
    w = verdict.witness
    if verdict.prop == "thick":
        return all(_ball_translate_inside(s, lv, g) for lv, g in w["translators"].items())
    if verdict.prop == "syndetic":
        k = w["K"]
        return all(any(s.contains(a.mul(x, g)) for x in k) for g in a.ball(w["covered_level"]))
    if verdict.prop == "pws":
        b, c = w["B"], w["C"]
        inside = all(s.contains(g) for g in a.ball(w["inclusion_level"]) if b.contains(g) and c.contains(g))
        return inside and recheck(w["thick"], b) and recheck(w["syndetic"], c)
    if verdict.prop == "infinite":
        if verdict.exact:
            form = s.exact()
            return not form.no_residues if isinstance(form, forms.PeriodicForm) else form.cofinite
        return s.contains(w["far_member"])
    raise ValueError(verdict.prop)
