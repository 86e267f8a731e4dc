"""Furstenberg families, Ramsey checks and chain presentations.

A chain presentation is a decreasing sequence F_1 ⊃ F_2 ⊃ ... together with a
shift witness m(n, f) such that f·F_m ⊂ F_n for every f in F_n.  Chains are how
quasi-central and essential-F sets are handed to the builders.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .ambient import N0, Z
from .errors import HorizonError, PreconditionError, UnsupportedOperation
from .setcalc import (
    NO, YES, INCONCLUSIVE, EventuallyPeriodic, Finite, FolnerSeq, Full, Intersection, Observed,
    Union, Verdict, banach_density, chain_blocks, classify_infinite, classify_pws, classify_syndetic,
    classify_thick, even_words, upper_density,
)


@dataclass(frozen=True)
class Family:
    name: str
    test: object
    ramsey: bool
    shift_invariant: bool
    folner: object = None

    def __repr__(self):
        return f"<family {self.name}>"


def _density_verdict(prop, s, horizon, report, positive_means_yes):
    status = INCONCLUSIVE
    if report.exact:
        status = YES if report.value > 0 else NO
    elif positive_means_yes:
        status = YES
    return Verdict(prop, status, horizon, s.ambient, exact=report.exact,
                   witness={"density": str(report.value), **report.detail} if status == YES else {},
                   refuter={"density": str(report.value)} if status == NO else {},
                   subject=s.describe())


def _pud_test(folner):
    def test(s, horizon):
        if s.ambient.kind not in ("Z", "Z2"):
            raise UnsupportedOperation(f"upper density needs Z or Z2, not {s.ambient.kind}")
        f = folner or FolnerSeq(s.ambient)
        report = upper_density(s, f, horizon)
        v = _density_verdict("pud", s, horizon, report, False)
        if v.status == INCONCLUSIVE:
            v.witness = {"estimate": str(report.value), "n_max": horizon}
        return v
    return test


def _pubd_test(s, horizon):
    if s.ambient.kind != "Z":
        raise UnsupportedOperation(f"Banach density needs Z, not {s.ambient.kind}")
    if s.exact() is None:
        thick = classify_thick(s, horizon)
        if thick.yes:
            return Verdict("pubd", YES, horizon, s.ambient, level=thick.level,
                           witness={"density": "1", "thick": thick}, subject=s.describe())
    report = banach_density(s, max(1, horizon // 8))
    v = _density_verdict("pubd", s, horizon, report, False)
    if v.status == INCONCLUSIVE:
        v.witness = {"window_estimate": str(report.value)}
    return v


F_INF = Family("F_inf", classify_infinite, ramsey=True, shift_invariant=True)
F_T = Family("F_t", classify_thick, ramsey=False, shift_invariant=True)
F_S = Family("F_s", classify_syndetic, ramsey=False, shift_invariant=True)
F_PS = Family("F_ps", classify_pws, ramsey=True, shift_invariant=True)
F_PUBD = Family("F_pubd", _pubd_test, ramsey=True, shift_invariant=True)


def F_pud(folner=None):
    return Family("F_pud", _pud_test(folner), ramsey=True, shift_invariant=True, folner=folner)


FAMILIES = {"F_inf": F_INF, "F_t": F_T, "F_s": F_S, "F_ps": F_PS, "F_pubd": F_PUBD}


def get_family(name):
    if name == "F_pud":
        return F_pud()
    try:
        return FAMILIES[name]
    except KeyError:
        raise PreconditionError(f"unknown family (choose from {sorted(FAMILIES) + ['F_pud']})", name) from None


def family_member(family, s, horizon, decomposition=None):
    """Verdict on whether ``s`` belongs to the family, judged at ``horizon``."""
    if family is F_PS and decomposition is not None:
        return classify_pws(s, horizon, decomposition=decomposition)
    return family.test(s, horizon)


@dataclass
class RamseyResult:
    status: str
    index: int | None
    verdicts: list
    family: str

    def to_json(self):
        return {
            "family": self.family,
            "status": self.status,
            "index": self.index,
            "parts": [v.to_json() for v in self.verdicts],
        }


def ramsey_check(family, s, parts, horizon):
    """Which of two parts partitioning ``s`` stays in the family.

    Returns the lowest index (1 or 2) whose part is certified.  Families
    without the Ramsey property get status "not-applicable" together with the
    part verdicts.
    """
    p1, p2 = parts
    a = s.ambient
    for g in a.ball(horizon):
        in1, in2, ins = p1.contains(g), p2.contains(g), s.contains(g)
        if (in1 or in2) != ins or (in1 and in2):
            raise PreconditionError("parts do not partition the set", a.format(g))
    verdicts = [family_member(family, p, horizon) for p in (p1, p2)]
    if not family.ramsey:
        return RamseyResult("not-applicable", None, verdicts, family.name)
    whole = family_member(family, s, horizon)
    if not whole.yes:
        raise PreconditionError("the set is not certified in the family", whole.status)
    for i, v in enumerate(verdicts, start=1):
        if v.yes:
            return RamseyResult(YES, i, verdicts, family.name)
    return RamseyResult(INCONCLUSIVE, None, verdicts, family.name)


@dataclass
class ChainPresentation:
    """Decreasing sets F_n (n >= 1) with shift witnesses.

    ``decomposition(n)``, when given, returns a thick set and a syndetic set
    whose intersection lies in F_n; builders for the piecewise syndetic
    family need it.
    """

    ambient: object
    chain: object
    shift: object
    family: Family
    name: str = "chain"
    decomposition: object = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self._sets = {}

    def at(self, n):
        if n < 1:
            raise PreconditionError("chains are indexed from 1", n)
        if n not in self._sets:
            self._sets[n] = self.chain(n)
        return self._sets[n]

    def witness(self, n, f):
        return self.shift(n, f)

    def verdict(self, n, horizon):
        dec = self.decomposition(n) if self.decomposition else None
        return family_member(self.family, self.at(n), horizon, decomposition=dec)


@dataclass
class ChainFailure:
    check: str
    n: int
    f: object = None
    offending: object = None
    detail: str = ""

    def to_json(self, ambient):
        fmt = lambda g: None if g is None else ambient.format(g)
        return {"check": self.check, "n": self.n, "f": fmt(self.f),
                "offending": fmt(self.offending), "detail": self.detail}


@dataclass
class ChainCertificate:
    chain: str
    ambient: object
    n_max: int
    sample_count: int
    horizon: int
    verdicts: dict
    samples: dict
    failures: list

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        a = self.ambient
        return {
            "schema": "rl-cert-1",
            "kind": "chain",
            "chain": self.chain,
            "ambient": a.kind,
            "n_max": self.n_max,
            "sample_count": self.sample_count,
            "horizon": self.horizon,
            "ok": self.ok,
            "family_status": {str(n): v for n, v in self.verdicts.items()},
            "samples": {str(n): [[a.format(f), m] for f, m in s] for n, s in self.samples.items()},
            "failures": [x.to_json(a) for x in self.failures],
        }


def chain_validate(chain, n_max, sample_count, horizon):
    """Check nesting, family membership and sampled shift witnesses on ball(horizon)."""
    if n_max < 1:
        raise PreconditionError("n_max must be at least 1", n_max)
    a = chain.ambient
    ball = list(a.ball(horizon))
    failures = []
    verdicts = {}
    samples = {}
    members = {}

    def in_ball(n):
        if n not in members:
            members[n] = [g for g in ball if chain.at(n).contains(g)]
        return members[n]

    for n in range(1, n_max + 1):
        current = in_ball(n)
        bigger = set(current)
        nxt = in_ball(n + 1)
        bad = next((g for g in nxt if g not in bigger), None)
        if bad is not None:
            failures.append(ChainFailure("nested", n, offending=bad,
                                         detail=f"member of F_{n + 1} missing from F_{n}"))
        v = chain.verdict(n, horizon)
        verdicts[n] = v.status
        if not v.yes:
            failures.append(ChainFailure("family", n, detail=f"{chain.family.name}: {v.status}"))
        samples[n] = []
        for f in current[:sample_count]:
            m = chain.witness(n, f)
            samples[n].append((f, m))
            target = chain.at(n)
            for x in in_ball(m):
                y = a.mul(f, x)
                if a.norm(y) > horizon:
                    continue
                if not target.contains(y):
                    failures.append(ChainFailure("shift", n, f=f, offending=y,
                                                 detail=f"f·x with x = {a.format(x)} in F_{m}"))
                    break
    return ChainCertificate(chain.name, a, n_max, sample_count, horizon, verdicts, samples, failures)


def const_chain(s, family=None, decomposition=None, name=None):
    """F_n = s for every n with m(n, f) = 1; valid when s is closed under products."""
    family = family or F_PS
    if decomposition is None and family is F_PS:
        decomposition = _default_decomposition(s)
    dec = (lambda n: decomposition) if decomposition is not None else None
    return ChainPresentation(s.ambient, lambda n: s, lambda n, f: 1, family,
                             name=name or f"const:{s.describe()}", decomposition=dec)


def _default_decomposition(s):
    v = classify_syndetic(s, 64)
    if v.yes:
        return (Full(s.ambient), s)
    return None


def scaled_chain(k, ambient=N0):
    """F_n = k·N0 (kZ over Z), closed under addition."""
    s = EventuallyPeriodic(ambient, 0, k, {0})
    return const_chain(s, F_PS, (Full(ambient), s), name=f"scaled:{k}")


def block_chain(base=2, step=1, parity=None, ambient=N0):
    """A piecewise syndetic chain that is not syndetic.

    F_n = {0} ∪ (step·N ∩ ∪_{j>=n} [b^j, b^j + b^j//2 + b^j//2^n]), with j
    restricted to one parity when asked.  For f in F_n, the first m > n with
    b^m >= (f + 1)·2^(n+1) satisfies f + F_m ⊂ F_n.
    """
    if base < 2 or step < 1:
        raise PreconditionError("base >= 2 and step >= 1 are required", (base, step))
    if ambient not in (N0, Z):
        raise UnsupportedOperation("block chains live on N0 or Z")
    mult = EventuallyPeriodic(ambient, 0, step, {0})

    def thick(n):
        return Union((Finite(ambient, [0]), chain_blocks(ambient, base, n, parity)))

    def chain(n):
        return Intersection((thick(n), mult))

    def shift(n, f):
        m = n + 1
        while base**m < (f + 1) * 2 ** (n + 1):
            m += 1
        return m

    tag = "" if parity is None else (",even" if parity == 0 else ",odd")
    return ChainPresentation(ambient, chain, shift, F_PS, name=f"blocks:{base},{step}{tag}",
                             decomposition=lambda n: (thick(n), mult))


def evenlen_chain(ambient):
    s = even_words(ambient)
    return const_chain(s, F_PS, (Full(ambient), s), name="evenlen")


def index_count(delta):
    """Smallest k with 2^-k < delta: points within delta agree on the first k coordinates."""
    delta = Fraction(delta)
    k = 0
    while Fraction(1, 2**k) >= delta:
        k += 1
    return k


@dataclass
class CentralCertificate:
    epsilon: Fraction
    horizon: int
    levels: dict

    @property
    def ok(self):
        return all(r["inclusion"] and r["syndetic"] == YES and r["thick"] == YES for r in self.levels.values())

    def to_json(self):
        return {"schema": "rl-cert-1", "kind": "central_chain", "epsilon": str(self.epsilon),
                "horizon": self.horizon, "ok": self.ok,
                "levels": {str(n): r for n, r in self.levels.items()}}


def central_chain(x, y, epsilon, n_max, horizon):
    """Chain of joint return times of (x, y) to shrinking cylinders around y.

    F_n = {g : x(t·g) = y(t) and y(t·g) = y(t) for t among the first
    index_count(epsilon/n) elements}.  A = return times of y to the finer
    cylinder (syndetic when y is almost periodic) and B = times where x and y
    agree on that finer window (thick when the pair is proximal) give A ∩ B ⊂ F_n.
    """
    a = x.ambient
    epsilon = Fraction(epsilon)
    ball = list(a.ball(horizon))

    @lru_cache(maxsize=None)
    def window(n):
        return tuple(a.enumerate(i) for i in range(index_count(epsilon / n)))

    @lru_cache(maxsize=None)
    def members(n):
        e = window(n)
        ys = [y.value(t) for t in e]
        return frozenset(
            g for g in ball
            if all(x.value(a.mul(t, g)) == v and y.value(a.mul(t, g)) == v for t, v in zip(e, ys))
        )

    def finer(n):
        e = window(2 * n)
        ys = [y.value(t) for t in e]
        syn = frozenset(g for g in ball if all(y.value(a.mul(t, g)) == v for t, v in zip(e, ys)))
        thick = frozenset(g for g in ball if all(x.value(a.mul(t, g)) == y.value(a.mul(t, g)) for t in e))
        return syn, thick

    levels = {}
    for n in range(1, n_max + 1):
        syn, thick = finer(n)
        if not thick:
            raise PreconditionError("proximality not witnessed inside the horizon", n)
        tv = classify_thick(Observed(a, thick, horizon), horizon)
        if not tv.yes:
            raise PreconditionError("proximality not witnessed inside the horizon", {"n": n, "thick": tv.status})
        sv = classify_syndetic(Observed(a, syn, horizon), horizon)
        levels[n] = {"window": len(window(n)), "syndetic": sv.status, "thick": tv.status,
                     "inclusion": syn & thick <= members(n), "size": len(members(n))}

    def chain(n):
        return Observed(a, members(n), horizon, name=f"central:{n}")

    def decomposition(n):
        syn, thick = finer(n)
        return Observed(a, thick, horizon), Observed(a, syn, horizon)

    def shift(n, f):
        top = max(a.index(a.mul(t, f)) for t in window(n))
        return max(1, -((-epsilon * 2**top).numerator // (epsilon * 2**top).denominator))

    chain_obj = ChainPresentation(a, chain, shift, F_PS, name=f"central:{epsilon}", decomposition=decomposition)
    return chain_obj, CentralCertificate(epsilon, horizon, levels)
