"""Inductive construction over a group G of a point z with N(z, [1]) ⊂ F_1.

Stage k+1 takes the current return set R = N(z^(k), [1]), moves deep enough
into the chain that R·F_m ⊂ F_1, asks the separation provider for F'_m ⊂ F_m
whose elements have pairwise disjoint B_{k+1}-translates, asks the block
provider for disjoint finite blocks C_n inside F'_m, and then selects one
block per earlier stage avoiding the forbidden sets.  The new pattern is

* z^(k) on B_{k+1} = R ∪ ball(k),
* 1 on the selected stage-1 block,
* z^(j-1)(h) at h·g for h in B_j and g in the block selected for stage j,
* 0 elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import HorizonError, PreconditionError, StageFailure
from ..families import F_INF, F_PS
from ..setcalc import GreedySeparated, Intersection, iter_blocks
from ..subshift import TracePoint
from .n0 import TRACE_SCHEMA, CheckReport

SEARCH_LIMIT = 64


class BlockStream:
    """Lazily computed blocks C_1, C_2, ... (1-based)."""

    def __init__(self, source, label):
        self._it = iter(source)
        self.blocks = []
        self.label = label

    def get(self, n):
        while len(self.blocks) < n:
            try:
                self.blocks.append(next(self._it))
            except HorizonError as exc:
                raise StageFailure("block provider exhausted", provider=self.label, produced=len(self.blocks),
                                   detail=str(exc)) from None
        return self.blocks[n - 1]


def separation_provider(chain, m, b_set):
    """F'_m: the thick part intersected with a greedy B-separated subset of the
    syndetic part (piecewise syndetic chains), or a greedy B-separated subset
    of F_m (the infinite-set family).  Returns (F', decomposition or None)."""
    if chain.family is F_PS:
        thick, syndetic = chain.decomposition(m)
        sep = GreedySeparated(syndetic, b_set)
        return Intersection((thick, sep)), (thick, sep)
    sep = GreedySeparated(chain.at(m), b_set)
    return sep, None


def block_provider(fprime, decomposition, search_level, avoid):
    """Disjoint blocks: ball(n)·g inside the thick part, cut down to the
    syndetic part; singletons of F' for the infinite-set family."""
    a = fprime.ambient
    if decomposition is not None:
        thick, syndetic = decomposition

        def keep(elements):
            return [x for x in elements if syndetic.contains(x)]

        return (b.part for b in iter_blocks(thick, search_level, keep=keep, start=0, avoid=avoid))

    def singles():
        for g in a.ball(search_level):
            if g not in avoid and fprime.contains(g):
                yield [g]
        raise HorizonError(f"no further members inside ball({search_level})")

    return singles()


@dataclass
class StageG:
    i: int
    m: int
    b_set: list
    blocks: BlockStream
    t: dict
    selected: dict
    ones: set
    forbidden_sizes: dict = field(default_factory=dict)


@dataclass
class TraceG:
    ambient: object
    chain: str
    depth: int
    ball_level: int
    stages: list

    def point(self):
        a = self.ambient
        if not self.stages:
            return TracePoint(a, [a.identity], 0, name="ind({e})")
        return TracePoint(a, self.stages[-1].ones, self.depth, name=f"build_group({self.chain},{self.depth})")

    def to_json(self):
        a = self.ambient
        fmt = lambda xs: [a.format(x) for x in a.sorted(xs)]
        return {
            "schema": TRACE_SCHEMA,
            "kind": "group",
            "ambient": a.kind,
            "chain": self.chain,
            "depth": self.depth,
            "ball_level": self.ball_level,
            "stages": [
                {
                    "i": st.i,
                    "m": st.m,
                    "B": fmt(st.b_set),
                    "C": [fmt(c) for c in st.blocks.blocks],
                    "t": {str(j): v for j, v in sorted(st.t.items())},
                    "A": {str(j): fmt(v) for j, v in sorted(st.selected.items())},
                    "forbidden_sizes": {str(j): v for j, v in sorted(st.forbidden_sizes.items())},
                    "N": fmt(st.ones),
                }
                for st in self.stages
            ],
        }


def _products(a, left, right):
    return {a.mul(x, y) for x in left for y in right}


def build_group(chain, depth, ball_level, p1_provider=None, p2_provider=None):
    """Run ``depth`` stages; return (TracePoint, TraceG)."""
    a = chain.ambient
    if depth < 0:
        raise PreconditionError("depth must be non-negative", depth)
    if chain.family not in (F_PS, F_INF):
        raise PreconditionError("no default providers for this family", chain.family.name)
    if chain.family is F_PS and chain.decomposition is None:
        raise PreconditionError("piecewise syndetic chains need a thick/syndetic decomposition", chain.name)
    p1 = p1_provider or block_provider
    p2 = p2_provider or separation_provider
    e = a.identity
    stages = []
    if depth == 0:
        trace = TraceG(a, chain.name, 0, ball_level, [])
        return trace.point(), trace
    if not chain.at(1).contains(e):
        raise PreconditionError("the chain must contain the identity in every F_n", 1)
    # stage 1: F'_1 = F_1 and A_1^(1) = C_1^(1)
    dec = chain.decomposition(1) if chain.family is F_PS else None
    blocks = BlockStream(p1(chain.at(1), dec, ball_level, {e}), "stage 1")
    first = set(blocks.get(1))
    stages.append(StageG(1, 1, [e], blocks, {1: 1}, {1: first}, {e} | first))
    for i in range(2, depth + 1):
        stages.append(_stage(a, chain, stages, i, ball_level, p1, p2))
    trace = TraceG(a, chain.name, depth, ball_level, stages)
    return trace.point(), trace


def _stage(a, chain, stages, i, ball_level, p1, p2):
    k = i - 1
    e = a.identity
    prev = stages[-1]
    r_set = prev.ones
    m = max(chain.witness(1, f) for f in r_set)
    if not chain.at(m).contains(e):
        raise PreconditionError("the chain must contain the identity in every F_n", m)
    b_new = set(r_set) | set(a.ball(k))
    fprime, dec = p2(chain, m, b_new)
    blocks = BlockStream(p1(fprime, dec, ball_level, {e}), f"stage {i}")
    b_sets = {s.i: set(s.b_set) for s in stages}
    b_sets[i] = b_new
    inv = lambda xs: {a.inv(x) for x in xs}
    # later-stage copies already placed: B_t A_s^(t) for 2 <= t <= k, t <= s <= k
    placed = set()
    for t in range(2, k + 1):
        for s in range(t, k + 1):
            placed |= _products(a, b_sets[t], stages[s - 1].selected[t])
    selected, t_idx, sizes = {}, {}, {}
    for j in range(1, i + 1):
        if j == 1:
            forbidden = b_new | placed
        else:
            bj_inv = inv(b_sets[j])
            base = set(b_new) | selected[1]
            for l in range(2, j):
                base |= _products(a, b_sets[l], selected[l])
            forbidden = _products(a, bj_inv, base | placed)
        sizes[j] = len(forbidden)
        source = blocks if j == i else stages[j - 1].blocks
        start = (k + 1) if j == i else stages[-1].t[j] + 1
        chosen = None
        for n in range(start, start + SEARCH_LIMIT):
            c = source.get(n)
            if not forbidden & set(c):
                chosen = n
                break
        if chosen is None:
            raise StageFailure("no block avoids the forbidden set", stage=i, j=j, forbidden=len(forbidden),
                               provider_progress=len(source.blocks))
        t_idx[j] = chosen
        selected[j] = set(source.get(chosen))
    # the stage-i blocks with index below i are recorded as A_j^(i) = C_j^(i)
    for n in range(1, i):
        blocks.get(n)
    ones = _write_pattern(a, stages, i, b_new, selected, b_sets)
    return StageG(i, m, sorted(b_new, key=a.index), blocks, t_idx, selected, ones, sizes)


def _write_pattern(a, stages, i, b_new, selected, b_sets):
    value = {}

    def put(g, bit):
        if value.get(g, bit) != bit:
            raise StageFailure("conflicting assignments", stage=i, position=a.format(g))
        value[g] = bit

    prev_ones = stages[-1].ones
    for g in b_new:
        put(g, 1 if g in prev_ones else 0)
    for g in selected[1]:
        put(g, 1)
    for j in range(2, i + 1):
        src = stages[j - 2].ones
        for h in b_sets[j]:
            bit = 1 if h in src else 0
            for g in selected[j]:
                put(a.mul(h, g), bit)
    return {g for g, bit in value.items() if bit}


# independent re-validation from the serialized trace


def check_group_trace(data, chain):
    """Re-assert every stage condition of a serialized group trace against ``chain``."""
    from ..ambient import get_ambient

    rep = CheckReport()
    if data.get("schema") != TRACE_SCHEMA or data.get("kind") != "group":
        rep.record("schema", False, data.get("schema"))
        return rep
    a = get_ambient(data["ambient"])
    parse = lambda xs: {a.parse(x) for x in xs}
    level = data["ball_level"]
    f1 = chain.at(1)
    e = a.identity
    stages = data["stages"]
    ns, bs, cs, sel, ts = [], [], [], [], []
    for st in stages:
        i = st["i"]
        n_i = parse(st["N"])
        b_i = parse(st["B"])
        c_i = [parse(c) for c in st["C"]]
        a_i = {int(j): parse(v) for j, v in st["A"].items()}
        t_i = {int(j): v for j, v in st["t"].items()}
        ns.append(n_i)
        bs.append(b_i)
        cs.append(c_i)
        sel.append(a_i)
        ts.append(t_i)
        if i == 1:
            rep.record("B_1 = {e}", b_i == {e})
        else:
            rep.record(f"B is previous support plus ball, stage {i}", b_i == ns[-2] | set(a.ball(i - 1)))
        rep.record(f"support inside F_1, stage {i}", all(f1.contains(g) for g in n_i),
                   [a.format(g) for g in n_i if not f1.contains(g)][:5])
        if i > 1:
            expect = ns[-2] | a_i[1]
            for j in range(1, i):
                expect |= _products(a, ns[j - 1], a_i[j + 1])
            rep.record(f"support update rule, stage {i}", n_i == expect)
        # recorded blocks lie in F_m; the shifted F_m lies in F_1 on the checked ball
        fm = chain.at(st["m"])
        rep.record(f"blocks inside F_m, stage {i}", all(fm.contains(g) for c in c_i for g in c))
        if i > 1:
            bad = [g for g in a.ball(level) if fm.contains(g)
                   and any(not f1.contains(a.mul(f, g)) for f in ns[-2])]
            rep.record(f"shifted F_m inside F_1, stage {i}", not bad, [a.format(g) for g in bad[:5]])
        # separation on the recorded members of F'
        members = [g for c in c_i for g in c]
        seen = set()
        ok6 = True
        for f in members:
            tr = {a.mul(b, f) for b in b_i}
            if tr & seen:
                ok6 = False
            seen |= tr
        rep.record(f"B-translates disjoint, stage {i}", ok6)
        flat = [g for c in c_i for g in c]
        rep.record(f"blocks disjoint and nonempty, stage {i}", len(flat) == len(set(flat)) and all(c for c in c_i))
        rep.note(f"block unions, stage {i}", "union of a block subsequence is judged only through the provider")
        if i == 1:
            rep.record("first block index", t_i == {1: 1})
        else:
            rep.record(f"indices increase, stage {i}", all(t_i[j] > ts[-2][j] for j in range(1, i)))
            rep.record(f"new block index, stage {i}", t_i[i] > i - 1)
        for j in range(1, i + 1):
            src = cs[j - 1] if j < i else c_i
            idx = t_i[j]
            rep.record(f"selected block matches index, stage {i}", idx <= len(src) and src[idx - 1] == a_i[j], (i, j))
        # disjointness batteries
        if i > 1:
            inv = lambda xs: {a.inv(x) for x in xs}
            placed = set()
            for t in range(2, i):
                for s in range(t, i):
                    placed |= _products(a, bs[t - 1], sel[s - 1][t])
            rep.record(f"disjoint from new support j=1, stage {i}", not a_i[1] & b_i)
            if i >= 3:
                rep.record(f"disjoint from earlier copies j=1, stage {i}", not a_i[1] & placed)
            for j in range(2, i + 1):
                bj_inv = inv(bs[j - 1])
                base = b_i | a_i[1]
                for l in range(2, j):
                    base |= _products(a, bs[l - 1], a_i[l])
                rep.record(f"disjoint from new support j={j}, stage {i}", not a_i[j] & _products(a, bj_inv, base))
                if i >= 3:
                    rep.record(f"disjoint from earlier copies j={j}, stage {i}", not a_i[j] & _products(a, bj_inv, placed))
        # rebuild the pattern
        if i == 1:
            rebuilt = {e} | a_i[1]
            rep.record("stage 1 pattern", n_i == rebuilt)
        else:
            value = {}
            conflict = []

            def put(g, bit):
                if value.get(g, bit) != bit:
                    conflict.append(g)
                value[g] = bit

            for g in b_i:
                put(g, 1 if g in ns[-2] else 0)
            for g in a_i[1]:
                put(g, 1)
            for j in range(2, i + 1):
                for h in bs[j - 1]:
                    for g in a_i[j]:
                        put(a.mul(h, g), 1 if h in ns[j - 2] else 0)
            rep.record(f"pattern rules consistent, stage {i}", not conflict)
            rep.record(f"pattern matches rules, stage {i}", {g for g, b in value.items() if b} == n_i)
    # copy rule: z^(j)(h·g) = z^(r)(h) for h in B_{r+1}, g in A_{r+1}^(r+1) ∪ ... ∪ A_j^(r+1)
    pairs = 0
    ok = True
    for r in range(1, len(stages)):
        for j in range(r + 1, len(stages) + 1):
            for s in range(r + 1, j + 1):
                for h in bs[r]:
                    for g in sel[s - 1][r + 1]:
                        pairs += 1
                        if ((a.mul(h, g) in ns[j - 1]) != (h in ns[r - 1])):
                            ok = False
    rep.record("copy rule", ok, pairs)
    rep.note("copy rule pairs", pairs)
    return rep
