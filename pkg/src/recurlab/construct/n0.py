"""Inductive construction over N0 of a point z with N(z, [1]) inside F ∪ {0}.

Stage i picks a thick H_i and a syndetic S_i whose intersection consists of
times n with n + A_{i-1} ⊂ F, forces S_i into multiples of a_{i-1} + 1 by the
dilation split, then places intervals I_i^(j) ⊂ H_j and writes

* z^(i) = z^(i-1) on [0, a_{i-1}],
* 1 on I_i^(1) ∩ S_1,
* a copy of z^(j-1)|[0, a_{j-1}] at every n in I_i^(j) ∩ S_j (j >= 2),
* 0 everywhere else.

Every stage is recorded; ``check_n0_trace`` re-derives everything from the
record and the chain alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..ambient import N0
from ..errors import HorizonError, PreconditionError, StageFailure
from ..setcalc import (
    BlockInterior, Contraction, Observed, classify_syndetic, classify_thick, dilation_split,
)
from ..subshift import TracePoint

TRACE_SCHEMA = "rl-trace-1"


class ChainStream:
    """Stage targets taken from a chain presentation.

    For stage i >= 2 the target is F_m with m = max over t in A_{i-1} minus 0
    of the shift witness m(1, t); then t + F_m ⊂ F_1 for each such t.
    """

    def __init__(self, chain):
        if chain.ambient is not N0:
            raise PreconditionError("the N0 builder needs a chain over N0", chain.ambient.kind)
        if chain.decomposition is None:
            raise PreconditionError("the chain has no thick/syndetic decomposition", chain.name)
        self.chain = chain
        self.name = chain.name

    def target(self):
        return self.chain.at(1)

    def stage(self, i, previous):
        m = 1
        if i > 1:
            m = max([1] + [self.chain.witness(1, t) for t in previous if t != 0])
        thick, syndetic = self.chain.decomposition(m)
        return m, thick, syndetic


def _runs(members):
    out = []
    for x in members:
        if out and out[-1][1] == x - 1:
            out[-1][1] = x
        else:
            out.append([x, x])
    return out


def _from_runs(runs):
    s = set()
    for lo, hi in runs:
        s.update(range(lo, hi + 1))
    return s


@dataclass
class StageN0:
    i: int
    m: int
    a_prev: int
    h_members: set
    s_members: set
    intervals: list
    meets: list
    ones: set
    dilation: dict = field(default_factory=dict)
    u_switch: int = 0

    @property
    def a(self):
        return max(self.ones)


@dataclass
class TraceN0:
    stream: str
    depth: int
    horizon: int
    stages: list

    def point(self):
        if not self.stages:
            return TracePoint(N0, [0], 0, name="ind({0})")
        last = self.stages[-1]
        return TracePoint(N0, last.ones, last.a, name=f"build_n0({self.stream},{self.depth})")

    def coverage(self):
        """For r < j: the set I_j^(r+1) ∩ S_{r+1}, keyed by (r, j)."""
        out = {}
        for st in self.stages:
            for idx in range(2, st.i + 1):
                lo, hi = st.intervals[idx - 1]
                r = idx - 1
                s_next = self.stages[r].s_members
                out[(r, st.i)] = sorted(x for x in range(lo, hi + 1) if x in s_next)
        return out

    def to_json(self):
        return {
            "schema": TRACE_SCHEMA,
            "kind": "n0",
            "stream": self.stream,
            "depth": self.depth,
            "horizon": self.horizon,
            "stages": [
                {
                    "i": st.i,
                    "m": st.m,
                    "a_prev": st.a_prev,
                    "U_index": sorted(self.stages[st.i - 2].ones) if st.i > 1 else [],
                    "u": st.u_switch,
                    "H": _runs(sorted(st.h_members)),
                    "S": _runs(sorted(st.s_members)),
                    "intervals": [list(iv) for iv in st.intervals],
                    "meets_S": st.meets,
                    "A": sorted(st.ones),
                    "a": st.a,
                    "dilation": st.dilation,
                }
                for st in self.stages
            ],
            "coverage": [[r, j, v] for (r, j), v in sorted(self.coverage().items())],
        }


def _find_interval(h, s, size, lower, horizon, need_s):
    """Leftmost [lo, lo + size - 1] inside h with lo > lower; prefer ones meeting s.

    Returns (interval, meets) or None.
    """
    first_any = None
    run = 0
    for x in range(lower + 1, horizon + 1):
        run = run + 1 if x in h else 0
        if run >= size:
            lo = x - size + 1
            if any(y in s for y in range(lo, x + 1)):
                return (lo, x), True
            if first_any is None:
                first_any = (lo, x)
    if need_s or first_any is None:
        return None
    return first_any, False


def build_n0(source, depth, horizon):
    """Run ``depth`` stages; return (TracePoint, TraceN0)."""
    stream = source if hasattr(source, "stage") else ChainStream(source)
    if depth < 0:
        raise PreconditionError("depth must be non-negative", depth)
    stages = []
    for i in range(1, depth + 1):
        stages.append(_stage(stream, stages, i, horizon))
    trace = TraceN0(stream.name, depth, horizon, stages)
    return trace.point(), trace


def _stage(stream, stages, i, horizon):
    previous = stages[-1].ones if stages else {0}
    m, thick, syndetic = stream.stage(i, previous)
    target = stream.target()
    if i == 1:
        a_prev = 0
        h_set, s_set = thick, syndetic
        dil = {}
    else:
        a_prev = stages[-1].a
        k = a_prev + 1
        hprime = BlockInterior(thick, k)
        sprime = Contraction(syndetic, k)
        admissible = _ShiftedTarget(target, previous)
        try:
            h_set, s_set, cert = dilation_split(admissible, a_prev, hprime, sprime, horizon, check_inputs=False)
        except PreconditionError as exc:
            raise StageFailure("dilation split rejected", stage=i, constraint="dilation inclusion",
                               detail=str(exc)) from None
        dil = {"factor": k, "H_thick": cert.h_thick.status, "S_syndetic": cert.s_syndetic.status,
               "S_in_multiples": cert.s_in_multiples, "inside_target": cert.inside_target}
    h_members = {x for x in range(horizon + 1) if h_set.contains(x)}
    s_members = {x for x in range(horizon + 1) if s_set.contains(x)}
    size = i + 1
    intervals, meets = [], []
    u_switch = 0
    for j in range(1, i + 1):
        hj = h_members if j == i else stages[j - 1].h_members
        sj = s_members if j == i else stages[j - 1].s_members
        if j == 1:
            lower = 1 if i == 1 else a_prev
            if i > 1:
                u_switch = 0 if i == 2 else stages[i - 3].a
                lower = max(lower, stages[-1].intervals[i - 2][1] + u_switch)
        else:
            lower = intervals[-1][1]
            if j >= 3:
                lower = max(lower, intervals[-1][1] + stages[j - 3].a)
                if i > 2:
                    # also keep clear of the previous stage's interval j-1 by a_{j-2}
                    lower = max(lower, stages[-1].intervals[j - 2][1] + stages[j - 3].a)
        found = _find_interval(hj, sj, size, lower, horizon, need_s=(j == 1))
        if found is None:
            raise StageFailure("no admissible interval", stage=i, interval=j, constraint="interval placement",
                               search_bound=horizon, lower=lower, size=size)
        intervals.append(found[0])
        meets.append(found[1])
    ones = _write_word(stages, i, intervals, s_members, previous)
    a_new = max(ones)
    if a_new > horizon:
        raise StageFailure("committed word leaves the horizon", stage=i, a=a_new, search_bound=horizon)
    return StageN0(i, m, a_prev, h_members, s_members, intervals, meets, ones, dil, u_switch)


class _ShiftedTarget:
    """{n : n + t in F ∪ {0} for every t in the previous return set}."""

    ambient = N0

    def __init__(self, target, previous):
        self.target = target
        self.previous = sorted(previous)

    def contains(self, n):
        return all(n + t == 0 or self.target.contains(n + t) for t in self.previous)


def _write_word(stages, i, intervals, s_members, previous):
    value = {}

    def put(x, bit):
        if value.get(x, bit) != bit:
            raise StageFailure("conflicting assignments", stage=i, position=x)
        value[x] = bit

    a_prev = stages[-1].a if stages else 0
    if i == 1:
        put(0, 1)
    else:
        for x in range(a_prev + 1):
            put(x, 1 if x in previous else 0)
    lo, hi = intervals[0]
    s1 = s_members if i == 1 else stages[0].s_members
    for n in range(lo, hi + 1):
        if n in s1:
            put(n, 1)
    for j in range(2, i + 1):
        sj = s_members if j == i else stages[j - 1].s_members
        src = stages[j - 2]
        lo, hi = intervals[j - 1]
        for n in range(lo, hi + 1):
            if n in sj:
                for t in range(src.a + 1):
                    put(n + t, 1 if t in src.ones else 0)
    return {x for x, bit in value.items() if bit}


# independent re-validation from the serialized trace


@dataclass
class CheckReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def note(self, name, value):
        self.notes[name] = value

    def record(self, name, ok, detail=None):
        self.checks[name] = self.checks.get(name, True) and bool(ok)
        if not ok:
            self.failures.append({"check": name, "detail": detail})

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        return {"ok": self.ok, "checks": dict(sorted(self.checks.items())), "failures": self.failures,
                "notes": {k: self.notes[k] for k in sorted(self.notes)}}


def check_n0_trace(data, target):
    """Re-assert every stage condition of a serialized N0 trace.

    ``target`` is F (the set whose return times are prescribed); nothing from
    the builder is trusted beyond the recorded data.
    """
    rep = CheckReport()
    if data.get("schema") != TRACE_SCHEMA or data.get("kind") != "n0":
        rep.record("schema", False, data.get("schema"))
        return rep
    horizon = data["horizon"]
    stages = data["stages"]
    words = []
    h_sets, s_sets, a_vals = [], [], []
    for st in stages:
        i = st["i"]
        h = _from_runs(st["H"])
        s = _from_runs(st["S"])
        h_sets.append(h)
        s_sets.append(s)
        ivs = [tuple(iv) for iv in st["intervals"]]
        prev_a = a_vals[-1] if a_vals else None
        prev_word = words[-1] if words else None
        word = set(st["A"])
        rep.record(f"return set inside target, stage {i}", all(x == 0 or target.contains(x) for x in word),
                   sorted(x for x in word if x and not target.contains(x))[:5])
        rep.record(f"a_{i} = max A_{i}", st["a"] == max(word))
        if i > 1:
            rep.record(f"return sets nested, stage {i}", prev_word <= word and prev_a < st["a"])
            rep.record(f"cylinder index is previous return set, stage {i}", st["U_index"] == sorted(prev_word))
        # H_i ∩ S_i lands in F after every shift by A_{i-1}
        shifts = sorted(prev_word) if i > 1 else [0]
        bad = [n for n in sorted(h & s) if any(n + t and not target.contains(n + t) for t in shifts)]
        rep.record(f"H ∩ S shifted into target, stage {i}", not bad, bad[:5])
        tv = classify_thick(Observed(N0, h, horizon), horizon)
        sv = classify_syndetic(Observed(N0, s, horizon), horizon)
        # thick/syndetic can only be judged on the window; kept as notes
        rep.note(f"H_{i} thick on the window", tv.status)
        rep.note(f"S_{i} syndetic on the window", sv.status)
        if i > 1:
            k = prev_a + 1
            rep.record(f"S inside multiples of a+1, stage {i}", all(x > 0 and x % k == 0 for x in s), k)
        for j, (lo, hi) in enumerate(ivs, start=1):
            rep.record(f"interval size, stage {i}", hi - lo + 1 > i, (j, lo, hi))
            rep.record(f"interval inside H, stage {i}", all(x in h_sets[j - 1] for x in range(lo, hi + 1)), (j, lo, hi))
        rep.record(f"first interval meets S_1, stage {i}", any(x in s_sets[0] for x in range(ivs[0][0], ivs[0][1] + 1)))
        if i == 1:
            rep.record("stage 1 interval starts past 1", ivs[0][0] > 1)
        if i > 1:
            rep.record(f"intervals start past a_prev, stage {i}", ivs[0][0] > prev_a and ivs[1][0] > ivs[0][1])
        # gaps to the intervals of the previous stage
        if i > 2:
            prev_ivs = [tuple(iv) for iv in stages[i - 2]["intervals"]]
            ok = ivs[0][0] > prev_ivs[i - 2][1] + a_vals[i - 3]
            for j in range(3, i + 1):
                ok &= ivs[j - 1][0] > prev_ivs[j - 2][1] + a_vals[j - 3]
            rep.record(f"gap to previous stage, stage {i}", ok)
            rep.record(f"gap constant u = a_{i - 2} recorded, stage {i}", st["u"] == a_vals[i - 3])
        for j in range(2, len(ivs) + 1):
            ok = ivs[j - 1][0] > ivs[j - 2][1]
            if j >= 3:
                ok &= ivs[j - 1][0] > ivs[j - 2][1] + a_vals[j - 3]
            rep.record(f"interval order stage {i}", ok, j)
        # rebuild z^(i) from the rules and compare
        rebuilt = {}
        conflict = []

        def put(x, bit):
            if rebuilt.get(x, bit) != bit:
                conflict.append(x)
            rebuilt[x] = bit

        if i == 1:
            put(0, 1)
        else:
            for x in range(prev_a + 1):
                put(x, 1 if x in prev_word else 0)
        for n in range(ivs[0][0], ivs[0][1] + 1):
            if n in s_sets[0]:
                put(n, 1)
        for j in range(2, i + 1):
            src, src_a = words[j - 2], a_vals[j - 2]
            for n in range(ivs[j - 1][0], ivs[j - 1][1] + 1):
                if n in s_sets[j - 1]:
                    for t in range(src_a + 1):
                        put(n + t, 1 if t in src else 0)
        rep.record(f"word rules consistent, stage {i}", not conflict, conflict[:5])
        rep.record(f"word matches rules, stage {i}", {x for x, b in rebuilt.items() if b} == word)
        words.append(word)
        a_vals.append(st["a"])
    # coverage sets sit in the return set of the final word
    if words:
        z = words[-1]
        for r, j, cover in data.get("coverage", []):
            pattern, a_r = words[r - 1], a_vals[r - 1]
            expected = sorted(x for x in range(stages[j - 1]["intervals"][r][0], stages[j - 1]["intervals"][r][1] + 1)
                              if x in s_sets[r])
            rep.record(f"coverage recorded ({r},{j})", cover == expected)
            ok = all(((n + t) in z) == (t in pattern) for n in cover for t in range(a_r + 1))
            rep.record(f"coverage inside return set ({r},{j})", ok)
        # the final return set scanned against F over the horizon
        rep.record("N(z,[1]) inside F ∪ {0}", all(x == 0 or target.contains(x) for x in z if x <= horizon))
    return rep


def trace_word_return(data, r):
    """N(z^(k), [z^(r)|[0,a_r]]) on [0, horizon] for a serialized trace."""
    stages = data["stages"]
    z = set(stages[-1]["A"])
    pattern = set(stages[r - 1]["A"])
    a_r = stages[r - 1]["a"]
    return [n for n in range(data["horizon"] + 1)
            if all(((n + t) in z) == (t in pattern) for t in range(a_r + 1))]
