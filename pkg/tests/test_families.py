from fractions import Fraction

import pytest

from recurlab.ambient import N0, Z
from recurlab.errors import PreconditionError
from recurlab.families import (
    F_INF, F_PS, F_S, F_T, ChainPresentation, block_chain, central_chain, chain_validate, const_chain,
    family_member, get_family, index_count, ramsey_check, scaled_chain,
)
from recurlab.setcalc import (
    NO, YES, Complement, EventuallyPeriodic, Finite, Full, Union, pow2_blocks,
)
from recurlab.subshift import all_ones, indicator


def ep(offset, period, residues, ambient=Z):
    return EventuallyPeriodic(ambient, offset, period, set(residues))


def test_family_member_examples():
    v = family_member(F_S, ep(0, 2, {0}), 100)
    assert v.status == YES and sorted(v.witness["K"]) == [0, 1]
    assert family_member(F_T, ep(0, 2, {0}), 100).status == NO
    assert family_member(F_INF, Finite(Z, [1, 2, 3]), 100).status == NO
    assert get_family("F_ps") is F_PS
    with pytest.raises(PreconditionError):
        get_family("F_nope")


def test_ramsey_examples():
    evens = ep(0, 2, {0})
    r = ramsey_check(F_PS, evens, (ep(0, 4, {0}), ep(2, 4, {0})), 200)
    assert r.status == YES and r.index == 1
    empty = Complement(Full(Z))
    assert ramsey_check(F_PS, evens, (evens, empty), 200).index == 1
    r = ramsey_check(F_T, Full(Z), (evens, ep(1, 2, {0})), 200)
    assert r.status == "not-applicable"
    assert [v.status for v in r.verdicts] == [NO, NO]


def test_ramsey_rejects_non_partitions():
    evens = ep(0, 2, {0})
    with pytest.raises(PreconditionError):
        ramsey_check(F_PS, evens, (evens, evens), 50)


def test_chain_validate_examples():
    assert chain_validate(scaled_chain(2, Z), 3, 5, 200).ok
    assert chain_validate(const_chain(Full(N0)), 3, 5, 100).ok
    bad_set = Union((Finite(N0, [1]), ep(2, 2, {0}, N0)))
    bad = ChainPresentation(N0, lambda n: bad_set, lambda n, f: 1, F_PS, name="bad",
                            decomposition=lambda n: (Full(N0), bad_set))
    cert = chain_validate(bad, 1, 3, 100)
    assert not cert.ok
    shift = [f for f in cert.failures if f.check == "shift"]
    # 1 + 2 = 3 is the first sum leaving {1} ∪ 2N
    assert shift[0].f == 1 and shift[0].offending == 3


@pytest.mark.parametrize("args", [(2, 1), (3, 1), (2, 2), (3, 1, 1)])
def test_block_chains_validate(args):
    chain = block_chain(*args)
    assert chain_validate(chain, 3, 6, 4000).ok


def test_block_chain_shift_witness_by_scan():
    chain = block_chain(2, 1)
    for f in [0, 2, 3, 5, 9]:
        if not chain.at(1).contains(f):
            continue
        m = chain.witness(1, f)
        for x in range(3000):
            if chain.at(m).contains(x):
                assert chain.at(1).contains(f + x)


def test_index_count():
    assert index_count(Fraction(1, 2)) == 2
    assert index_count(1) == 1
    for k in range(1, 8):
        d = Fraction(1, 2**k)
        n = index_count(d)
        assert Fraction(1, 2**n) < d <= Fraction(1, 2 ** (n - 1))


def test_central_chain_blocks_against_ones():
    x = indicator(pow2_blocks(Z))
    y = all_ones(Z)
    chain, cert = central_chain(x, y, Fraction(1, 2), 3, 1024)
    assert cert.ok
    for n in range(1, 4):
        members = {g for g in Z.ball(1024) if chain.at(n).contains(g)}
        window = [Z.enumerate(i) for i in range(index_count(Fraction(1, 2) / n))]
        brute = {g for g in Z.ball(1024) if all(x.value(t + g) == 1 for t in window)}
        assert members == brute and members
    assert chain_validate(chain, 2, 4, 1024).ok


def test_central_chain_without_proximality():
    x = indicator(Complement(Full(Z)))
    with pytest.raises(PreconditionError):
        central_chain(x, all_ones(Z), Fraction(1, 2), 2, 256)


def test_central_chain_distal_fixed_point():
    chain, cert = central_chain(all_ones(Z), all_ones(Z), Fraction(1, 2), 2, 100)
    assert cert.ok
    assert all(chain.at(1).contains(g) for g in Z.ball(100))
