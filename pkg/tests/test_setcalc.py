from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from recurlab.ambient import F2, N0, Z, Z2
from recurlab.errors import PreconditionError
from recurlab.setcalc import (
    NO, YES, Complement, EventuallyPeriodic, Finite, FolnerSeq, FSGen, Full, GrowthError, Intersection,
    Translate, Union, banach_density, block_sequence, classify_infinite, classify_pws, classify_syndetic,
    classify_thick, dilation_split, find_separator, folner_disjointify, folner_quotient, fs_generate,
    iter_blocks, materialize, member, p1_witness_thick, positive_integers, pow2_blocks, recheck,
    separated_subset, upper_density,
)


def ep(offset, period, residues, ambient=Z):
    return EventuallyPeriodic(ambient, offset, period, set(residues))


def max_run(s, lo, hi):
    best = cur = 0
    for x in range(lo, hi + 1):
        cur = cur + 1 if s.contains(x) else 0
        best = max(best, cur)
    return best


def test_membership_examples():
    assert member(ep(0, 4, {0, 1}), 5)
    assert member(FSGen(N0, [1, 2, 4, 8]), 15)
    assert not member(Complement(Full(Z)), 7)


def test_fs_generate_by_subset_sums():
    gens = [1, 2, 4, 8]
    sums = {sum(c) for r in range(1, 5) for c in combinations(gens, r)}
    assert fs_generate(N0, gens) == frozenset(sums) == frozenset(range(1, 16))
    assert fs_generate(N0, [1]) == {1}
    assert fs_generate(F2, ["a", "b"]) == {"a", "b", "ab"}


def test_thick_examples():
    assert classify_thick(Full(Z), 50).status == YES
    v = classify_thick(ep(0, 4, {0, 1}), 10**4)
    assert v.status == NO
    assert v.refuter["max_run"] == max_run(ep(0, 4, {0, 1}), -10**4, 10**4) == 2
    blocks = pow2_blocks(N0)
    v = classify_thick(blocks, 10**4)
    assert v.status == YES and recheck(v, blocks)


def test_fs_of_powers_has_long_runs():
    k = 8
    fs = FSGen(N0, [2**i for i in range(k + 1)])
    assert max_run(fs, 0, 2 ** (k + 1)) >= k - 1
    v = classify_thick(fs, 2 ** (k + 1))
    assert v.status == YES and recheck(v, fs)


def test_syndetic_examples():
    v = classify_syndetic(ep(0, 4, {0, 1}), 1000)
    assert v.status == YES and sorted(v.witness["K"]) == [0, 1, 2, 3]
    assert recheck(v, ep(0, 4, {0, 1}))
    assert classify_syndetic(ep(0, 3, set()), 100).status == NO
    # long gaps between the blocks exceed every candidate K inside the window
    assert classify_syndetic(pow2_blocks(N0), 10**4).status == NO


def test_pws_examples():
    v = classify_pws(ep(0, 2, {0}), 100)
    assert v.status == YES
    assert v.witness["B"].describe() == "full" and v.witness["C"].describe() == "ep:0,2,{0}"
    assert classify_pws(Finite(Z, [1, 5]), 100).status == NO
    s = Intersection((pow2_blocks(N0), ep(0, 2, {0}, N0)))
    v = classify_pws(s, 10**4)
    assert v.status == YES and recheck(v, s)


def test_infinite():
    assert classify_infinite(ep(0, 7, {3}), 10).status == YES
    assert classify_infinite(Finite(Z, [1, 2]), 10).status == NO


@pytest.mark.parametrize("s", [ep(0, 2, {0}), ep(3, 5, {0, 4}), Complement(Finite(Z, [0, 1]))])
def test_exact_verdicts_never_inconclusive(s):
    for classify in (classify_thick, classify_syndetic, classify_pws):
        v = classify(s, 100)
        assert v.exact and v.status in (YES, NO)


residue_sets = st.integers(1, 9).flatmap(
    lambda p: st.tuples(st.just(p), st.integers(-20, 20), st.sets(st.integers(0, p - 1))))


@given(residue_sets, residue_sets)
@settings(max_examples=60, deadline=None)
def test_boolean_combinators_match_pointwise(a, b):
    (p, o, r), (q, u, t) = a, b
    x, y = ep(o, p, r), ep(u, q, t)
    window = range(-60, 61)
    union, inter, comp = Union((x, y)), Intersection((x, y)), Complement(x)
    for g in window:
        assert union.contains(g) == (x.contains(g) or y.contains(g))
        assert inter.contains(g) == (x.contains(g) and y.contains(g))
        assert comp.contains(g) != x.contains(g)
        assert Translate(x, 3).contains(g) == x.contains(g - 3)
        assert Translate(x, 3, inverse=True).contains(g) == x.contains(g + 3)


def test_density_examples():
    boxes = FolnerSeq(Z)
    evens = ep(0, 2, {0})
    r = upper_density(evens, boxes, 1000)
    assert r.exact and r.value == Fraction(1, 2)
    count = sum(1 for x in range(-1000, 1001) if evens.contains(x))
    assert abs(Fraction(count, 2001) - r.value) < Fraction(1, 1000)
    assert upper_density(Full(Z), boxes, 10).value == 1
    assert upper_density(ep(0, 5, {0, 1}), boxes, 10).value == Fraction(2, 5)


def test_banach_windows():
    evens = ep(0, 2, {0})
    assert banach_density(evens, 10).value == Fraction(1, 2)
    assert banach_density(Complement(Finite(Z, [0, 3])), 10).value == 1
    # windows of length w fit inside the run [2^k, 2^k + k] once k >= w - 1
    blocks = pow2_blocks(Z)
    for w in range(1, 10):
        assert banach_density(blocks, w, radius=2**12).value == 1


def test_folner_disjointify():
    boxes = FolnerSeq(Z, sets=[list(range(-16**n, 16**n + 1)) for n in range(1, 5)])
    d = folner_disjointify(boxes)
    for e1, e2 in combinations(d.sets, 2):
        assert not set(e1) & set(e2)
    assert max(d.quotients[-1].values()) < Fraction(1, 100)
    single = folner_disjointify(FolnerSeq(Z, sets=[[0, 1]]))
    assert single.sets == [{0, 1}]
    with pytest.raises(GrowthError) as info:
        folner_disjointify(FolnerSeq(Z, sets=[list(range(-n, n + 1)) for n in range(1, 6)]))
    assert info.value.n == 2 and info.value.size == 5 and info.value.bound == 9


def test_folner_quotient_of_large_box():
    n = 10**5
    q = folner_quotient(Z, range(-n, n + 1), 1)
    assert q == Fraction(2, 2 * n + 1) and q < Fraction(1, 10**4)


def test_find_separator_matches_brute_force():
    f = [(0, 0), (1, 0), (0, 1)]
    cands = list(Z2.ball(2))
    h = find_separator(Z2, f, cands)
    brute = next(c for c in cands if not {(x + c[0], y + c[1]) for x, y in f} & set(f))
    assert h == brute


def test_p1_blocks():
    blocks = p1_witness_thick(Full(Z), 3, 100)
    assert len(blocks) == 3
    for b1, b2 in combinations(blocks, 2):
        assert not set(b1) & set(b2)
    thick = pow2_blocks(N0)
    blocks = p1_witness_thick(thick, 4, 10**4)
    assert all(thick.contains(x) for b in blocks for x in b)
    for b1, b2 in combinations(blocks, 2):
        assert not set(b1) & set(b2)
    with pytest.raises(PreconditionError):
        p1_witness_thick(ep(0, 2, {0}), 2, 100)


def test_iter_blocks_respects_avoid_and_keep():
    evens = ep(0, 2, {0})
    blocks = block_sequence(Full(Z), 4, 200, keep=lambda xs: [x for x in xs if evens.contains(x)], avoid={0})
    for b in blocks:
        assert 0 not in b.elements
        assert b.part == [x for x in b.elements if x % 2 == 0]
        assert sorted(b.elements) == sorted(b.translator + k for k in Z.ball(b.n))
    gen = iter_blocks(Full(Z), 3)
    next(gen)


def greedy_oracle(members, k_set):
    occupied = set(k_set)
    out = []
    for g in members:
        shifted = {k + g for k in k_set}
        if not shifted & occupied:
            occupied |= shifted
            out.append(g)
    return out


def test_separated_subset_examples():
    chosen, cert = separated_subset(positive_integers(), [0, 1], 30)
    assert chosen == list(range(2, 31, 2)) == greedy_oracle(range(1, 31), [0, 1])
    assert cert.ok
    chosen, cert = separated_subset(ep(0, 2, {0}), [0], 10)
    assert sorted(chosen) == [x for x in range(-10, 11, 2) if x != 0]
    chosen, cert = separated_subset(ep(0, 2, {0}), [0, 1, 2], 20)
    assert cert.ok
    assert all(abs(x - y) >= 3 for x, y in combinations(chosen + [0], 2))


def test_dilation_split_examples():
    evens = ep(0, 2, {0}, N0)
    h, s, cert = dilation_split(evens, 1, positive_integers(), positive_integers(), 10**4)
    assert cert.ok
    members = materialize(s, 10**4)
    assert members == list(range(2, 10**4 + 1, 2))
    assert all(evens.contains(x) for x in members if h.contains(x))
    # a = 0 keeps H' and S' (S' read without 0)
    h, s, cert = dilation_split(Full(N0), 0, Full(N0), evens, 100)
    assert materialize(h, 100) == list(range(101))
    assert materialize(s, 100) == list(range(2, 101, 2))
    # 6N from a = 2 and H' = S' = 2N; H' is not thick, so the input check must be skipped
    with pytest.raises(PreconditionError):
        dilation_split(ep(0, 6, {0}, N0), 2, evens, evens, 1000)
    h, s, cert = dilation_split(ep(0, 6, {0}, N0), 2, evens, evens, 1000, check_inputs=False)
    assert materialize(s, 1000) == list(range(6, 1001, 6))
    assert cert.s_in_multiples and cert.inside_target
