"""Acceptance suite: nine criteria, each checked against an independent oracle.

Run with ``pytest tests/test_acceptance.py -v``; a pass/fail line per
criterion is printed in the terminal summary.
"""

import random
import time
from fractions import Fraction
from itertools import combinations

import pytest

from recurlab.ambient import F2, N0, Z, Z2
from recurlab.cli import main
from recurlab.construct import build_group, build_n0, check_group_trace, check_n0_trace
from recurlab.families import F_PS, block_chain, const_chain, evenlen_chain, ramsey_check, scaled_chain
from recurlab.semigroup import all_tables, associative_tables, ideal_structure, order_four_catalog, validate
from recurlab.setcalc import (
    NO, YES, Complement, EventuallyPeriodic, FolnerSeq, Full, GrowthError, Intersection, classify_pws,
    classify_syndetic, classify_thick, find_separator, folner_disjointify, folner_quotient, upper_density,
)
from recurlab.subshift import Cylinder, check_recurrence, indicator, one_cylinder, return_set

SEED = 20240601


def random_ep(rng, max_period=30, nonempty=False):
    p = rng.randint(1, max_period)
    roll = rng.random()
    if roll < 0.1:
        residues = set(range(p))
    elif roll < 0.2 and not nonempty:
        residues = set()
    else:
        residues = {r for r in range(p) if rng.random() < 0.5}
        if nonempty and not residues:
            residues = {rng.randrange(p)}
    return EventuallyPeriodic(Z, rng.randint(-50, 50), p, residues)


def ep_member(s, x):
    return (x - s.offset) % s.period in s.residues


# 1


@pytest.mark.criterion(1, "indicator identity on 200 random periodic sets")
def test_indicator_identity():
    rng = random.Random(SEED)
    start = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        a = random_ep(rng)
        got = return_set(indicator(a), one_cylinder(Z), 1000)
        expected = {x for x in range(-1000, 1001) if ep_member(a, x)}
        mismatches += len(got ^ expected)
    assert mismatches == 0
    assert time.perf_counter() - start < 5


# 2


def block_oracle(base, step, parity):
    """F_1 of a block chain by interval arithmetic."""
    spans = []
    j = 1
    while base**j <= 10**5:
        if parity is None or j % 2 == parity:
            lo = base**j
            spans.append((lo, lo + lo // 2 + (lo >> 1)))
        j += 1
    return lambda n: n % step == 0 and any(lo <= n <= hi for lo, hi in spans)


N0_CHAINS = [
    (scaled_chain(1), lambda n: True),
    (scaled_chain(2), lambda n: n % 2 == 0),
    (scaled_chain(3), lambda n: n % 3 == 0),
    (scaled_chain(5), lambda n: n % 5 == 0),
    (block_chain(2, 1), block_oracle(2, 1, None)),
    (block_chain(2, 2), block_oracle(2, 2, None)),
    (block_chain(3, 1), block_oracle(3, 1, None)),
    (block_chain(3, 2), block_oracle(3, 2, None)),
    (block_chain(6, 1), block_oracle(6, 1, None)),
    (block_chain(2, 4), block_oracle(2, 4, None)),
    (block_chain(3, 1, 1), block_oracle(3, 1, 1)),
    (block_chain(3, 1, 0), block_oracle(3, 1, 0)),
]


@pytest.mark.criterion(2, "N0 builder soundness on 12 chains, depth 4, horizon 10^4")
def test_n0_builder_soundness():
    horizon = 10**4
    start = time.perf_counter()
    assert len(N0_CHAINS) >= 10
    for chain, oracle in N0_CHAINS:
        z, trace = build_n0(chain, 4, horizon)
        # (a) full scan against an arithmetic oracle for F
        violations = [n for n in range(1, horizon + 1) if z.value(n) and not oracle(n)]
        assert violations == [], chain.name
        assert z.value(0) == 1
        # (b) every stored stage condition re-validates from the serialized record
        data = trace.to_json()
        report = check_n0_trace(data, chain.at(1))
        assert report.ok, (chain.name, report.failures)
        # (c) coverage sets return to the earlier words, scanned on z itself
        seen = set()
        for r, j, cover in data["coverage"]:
            seen.add(r)
            a_r = data["stages"][r - 1]["a"]
            word = set(data["stages"][r - 1]["A"])
            for n in cover:
                assert all(z.value(n + t) == (1 if t in word else 0) for t in range(a_r + 1)), (chain.name, r, n)
        assert seen == {1, 2, 3}
    assert time.perf_counter() - start < 60


# 3


def full_chain(ambient):
    return const_chain(Full(ambient), F_PS, (Full(ambient), Full(ambient)), name="const:full")


GROUP_CHAINS = [
    (scaled_chain(2, Z), 3, 1000, lambda g: g % 2 == 0),
    (scaled_chain(1, Z), 3, 1000, lambda g: True),
    (scaled_chain(3, Z), 3, 1000, lambda g: g % 3 == 0),
    (block_chain(2, 1, ambient=Z), 3, 1000, lambda g: g == 0 or block_oracle(2, 1, None)(g)),
    (evenlen_chain(F2), 2, 5, lambda w: len(w) % 2 == 0),
    (full_chain(F2), 2, 5, lambda w: True),
]


@pytest.mark.criterion(3, "group builder soundness over Z and F2")
def test_group_builder_soundness():
    start = time.perf_counter()
    for chain, depth, ball, oracle in GROUP_CHAINS:
        a = chain.ambient
        z, trace = build_group(chain, depth, ball)
        assert all(oracle(g) for g in z.ones), chain.name
        report = check_group_trace(trace.to_json(), chain)
        battery = {k: v for k, v in report.checks.items() if k.startswith("disjoint from")}
        assert battery and all(battery.values()), chain.name
        assert report.ok, (chain.name, report.failures)
        # copy rule evaluated directly on the point
        stages = trace.stages
        pairs = 0
        for r in range(1, len(stages)):
            for s in range(r + 1, len(stages) + 1):
                for h in stages[r].b_set:
                    for g in stages[s - 1].selected[r + 1]:
                        pairs += 1
                        assert z.value(a.mul(h, g)) == (1 if h in stages[r - 1].ones else 0)
        assert pairs > 0
    assert time.perf_counter() - start < 120


# 4


@pytest.mark.criterion(4, "separator search on 500 random pairs in Z^2")
def test_separator_search():
    rng = random.Random(SEED + 4)
    start = time.perf_counter()
    for _ in range(500):
        size = rng.randint(1, 6)
        f = set()
        while len(f) < size:
            f.add((rng.randint(-5, 5), rng.randint(-5, 5)))
        h = []
        while len(h) < size * size + 1:
            c = (rng.randint(-8, 8), rng.randint(-8, 8))
            if c not in h:
                h.append(c)
        found = find_separator(Z2, f, h)
        brute = [c for c in h if not f & {(x + c[0], y + c[1]) for x, y in f}]
        assert found is not None and brute and found == brute[0]
    assert time.perf_counter() - start < 10


# 5


def window_scan(s, radius=10**4, long_run=1000):
    bits = [ep_member(s, x) for x in range(-radius, radius + 1)]
    best = run = 0
    gap = worst_gap = 0
    for b in bits:
        run = run + 1 if b else 0
        best = max(best, run)
        gap = 0 if b else gap + 1
        worst_gap = max(worst_gap, gap)
    thick = best >= long_run
    syndetic = any(bits) and worst_gap < long_run
    return thick, syndetic, syndetic


@pytest.mark.criterion(5, "exact classifiers agree with a window scan on [-10^4, 10^4]")
def test_exact_classifier_agreement():
    rng = random.Random(SEED + 5)
    agree = 0
    for _ in range(100):
        s = random_ep(rng)
        thick, syndetic, pws = window_scan(s)
        got = (classify_thick(s, 10**4).status == YES, classify_syndetic(s, 10**4).status == YES,
               classify_pws(s, 10**4).status == YES)
        agree += got == (thick, syndetic, pws)
    assert agree == 100


# 6


@pytest.mark.criterion(6, "Ramsey property of F_ps on 100 random splits")
def test_ramsey_on_pws():
    rng = random.Random(SEED + 6)
    for _ in range(100):
        s = random_ep(rng, max_period=12, nonempty=True)
        mask = random_ep(rng, max_period=12)
        parts = (Intersection((s, mask)), Intersection((s, Complement(mask))))
        result = ramsey_check(F_PS, s, parts, 2000)
        assert result.status == YES
        # a periodic part is pws exactly when it is nonempty, and one period covers it
        span = range(-200, 201)
        brute = next(i for i, p in enumerate(parts, start=1) if any(p.contains(x) for x in span))
        assert result.index == brute


# 7


def brute_kernel(s):
    n = range(s.order)
    subsets = [frozenset(c) for r in range(1, s.order + 1) for c in combinations(n, r)]
    lefts = [x for x in subsets if all(s.mul(y, a) in x for y in n for a in x)]
    rights = [x for x in subsets if all(s.mul(a, y) in x for y in n for a in x)]
    minimal = lambda sets: [x for x in sets if not any(y < x for y in sets)]
    return minimal(lefts), minimal(rights)


@pytest.mark.criterion(7, "ideal structure of every semigroup of order <= 3 and an order-4 catalog")
def test_finite_algebra():
    start = time.perf_counter()
    assert sum(1 for _ in all_tables(3)) == 3**9
    tables = [t for n in (1, 2, 3) for t in associative_tables(n)]
    assert len(tables) == 1 + 8 + 113
    semigroups = [validate(t) for t in tables] + list(order_four_catalog().values())
    failures = 0
    for s in semigroups:
        st = ideal_structure(s)
        lefts, rights = brute_kernel(s)
        idem = {x for x in range(s.order) if s.mul(x, x) == x}
        ok = bool(idem) and st.idempotents == idem
        ok &= st.kernel == frozenset().union(*lefts) == frozenset().union(*rights)
        ok &= all(l & idem for l in lefts)
        failures += not ok
    assert failures == 0
    assert time.perf_counter() - start < 30


# 8


@pytest.mark.criterion(8, "exact densities, box Folner quotient, growth-check rejection")
def test_densities():
    boxes = FolnerSeq(Z)
    for k in range(1, 13):
        for r in range(k):
            s = EventuallyPeriodic(Z, r, k, {0})
            report = upper_density(s, boxes, 1000)
            assert report.exact and report.value == Fraction(1, k)
            count = sum(1 for x in range(-1000, 1001) if (x - r) % k == 0)
            assert abs(Fraction(count, 2001) - Fraction(1, k)) <= Fraction(1, 2001)
    n = 10**5
    box = range(-n, n + 1)
    q = folner_quotient(Z, box, 1)
    assert q == Fraction(len(set(box) ^ {x + 1 for x in box}), len(box))
    assert q < Fraction(1, 10**4)
    sets = [list(range(-m, m + 1)) for m in range(1, 8)]
    expected = next(m for m in range(2, 8)
                    if not len(sets[m - 1]) > (m + 1) * sum(len(f) for f in sets[:m - 1]))
    with pytest.raises(GrowthError) as info:
        folner_disjointify(FolnerSeq(Z, sets=sets))
    assert info.value.n == expected == 2


# 9


@pytest.mark.criterion(9, "product-recurrence demonstration (finite horizon)")
def test_product_demonstration(capsys):
    horizon = 10**4
    y_chain, x_chain = block_chain(4, 1, 0), block_chain(4, 1, 1)
    y, y_trace = build_n0(y_chain, 3, horizon)
    x, x_trace = build_n0(x_chain, 3, horizon)
    assert check_n0_trace(y_trace.to_json(), y_chain.at(1)).ok
    assert check_n0_trace(x_trace.to_json(), x_chain.at(1)).ok
    assert check_recurrence(y, F_PS, 2, horizon).status != NO
    ny = {n for n in range(horizon + 1) if y.value(n)}
    nx = {n for n in range(horizon + 1) if x.value(n)}
    assert not nx & (ny - {0})
    code = main(["experiment-product", "--x", "n0:3:blocks:4,1,odd", "--y", "n0:3:blocks:4,1,even",
                 "--horizon", str(horizon)])
    import json
    data = json.loads(capsys.readouterr().out)
    assert code == 2 and data["outcome"] == "refuted-at-horizon"
    assert data["joint_is_identity"] and data["joint_sample"] == ["0"]
    assert data["label"] == "finite-horizon demonstration"
    code = main(["experiment-product", "--x", "ones", "--y", "n0:3:blocks:4,1,even", "--horizon", str(horizon)])
    data = json.loads(capsys.readouterr().out)
    assert code == 0 and data["outcome"] == "witnessed" and data["joint_equals_y_returns"]
    assert data["joint_size"] == len(ny)
