"""Builder-level invariants over randomly drawn targets."""

import json

from hypothesis import HealthCheck, given, settings, strategies as st

from recurlab.ambient import N0, Z
from recurlab.construct import build_group, build_n0, check_group_trace, check_n0_trace
from recurlab.families import const_chain, scaled_chain
from recurlab.setcalc import Complement, EventuallyPeriodic, Finite, Intersection, Union
from recurlab.subshift import from_rle, return_set, one_cylinder, to_rle


def closed_target(d, c):
    """{0} together with the multiples of d that are >= c; closed under addition."""
    tail = Intersection((EventuallyPeriodic(N0, 0, d, {0}), Complement(Finite(N0, range(c)))))
    return Union((Finite(N0, [0]), tail))


@given(st.integers(1, 6), st.integers(0, 40))
@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_n0_points_stay_in_closed_targets(d, c):
    f = closed_target(d, c)
    z, trace = build_n0(const_chain(f), 3, 3000)
    assert all(f.contains(n) for n in range(3001) if z.value(n))
    assert check_n0_trace(trace.to_json(), f).ok


@given(st.integers(1, 4))
@settings(max_examples=4, deadline=None)
def test_group_builds_are_deterministic(k):
    chain = scaled_chain(k, Z)
    first = json.dumps(build_group(chain, 3, 1000)[1].to_json(), sort_keys=True)
    second_trace = build_group(scaled_chain(k, Z), 3, 1000)[1]
    assert first == json.dumps(second_trace.to_json(), sort_keys=True)
    assert check_group_trace(json.loads(first), chain).ok


@given(st.integers(1, 5))
@settings(max_examples=5, deadline=None)
def test_rle_round_trip_preserves_returns(k):
    z, _ = build_n0(scaled_chain(k), 3, 2000)
    back = from_rle(json.loads(json.dumps(to_rle(z, 2000))))
    assert return_set(back, one_cylinder(N0), 2000) == return_set(z, one_cylinder(N0), 2000)
