"""Train track switch conditions, carried curves, and approximation."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatel.curves import (
    Branch,
    BranchWeights,
    Region,
    Switch,
    TrainTrack,
    approximate,
    canonical_class,
    slope_curve,
    switch_check,
    torus_theta_track,
    trace_strands,
    weights_to_multicurve,
)
from flatel.errors import InputError, ValidationError


def theta(torus):
    return torus_theta_track(torus)


def test_track_validation_catches_loose_ends(torus):
    with pytest.raises(ValidationError):
        TrainTrack(
            torus,
            (Branch(((0, 1),)), Branch(())),
            (Switch(left=((0, 0),), right=((0, 1),)),),
        )


def test_switch_check_theta(torus):
    tt = theta(torus)
    assert switch_check(tt, BranchWeights((1, 1, 2), "integral"))
    assert switch_check(tt, BranchWeights((2, 3, 5), "integral"))
    assert not switch_check(tt, BranchWeights((1, 1, 1), "integral"))
    assert switch_check(tt, BranchWeights((0.25, 0.5, 0.75)))


def test_switch_check_rational_is_exact(torus):
    tt = theta(torus)
    w = BranchWeights((Fraction(1, 3), Fraction(1, 3), Fraction(2, 3)), "rational")
    assert switch_check(tt, w)


def test_taut_flag(torus):
    tt = theta(torus)
    assert tt.taut
    bad = TrainTrack(tt.surface, tt.branches, tt.switches, (Region("disk", 1),))
    assert not bad.taut


def test_trace_strands_counts(torus):
    tt = theta(torus)
    loops = trace_strands(tt, (1, 1, 2))
    total = sum(len(lp) for lp in loops)
    assert total == 4  # one strand per unit of weight
    assert len(loops) == 1


def test_carried_curve_matches_slope(torus):
    tt = theta(torus)
    mc = weights_to_multicurve(tt, BranchWeights((1, 1, 2), "integral"))
    assert len(mc) == 1
    want = slope_curve(torus, 2, 1)
    assert canonical_class(torus, mc.components[0].crossings, "loop") == (
        canonical_class(torus, want.components[0].crossings, "loop")
    )


def test_carried_multiples_split_into_parallel_copies(torus):
    tt = theta(torus)
    mc = weights_to_multicurve(tt, BranchWeights((2, 2, 4), "integral"))
    # Two parallel copies of the same loop, merged by weight.
    assert sum(c.weight for c in mc) == 2.0


def test_approximate_integral_fixed_point(torus):
    tt = theta(torus)
    w = BranchWeights((1, 1, 2), "integral")
    lam, curve = approximate(tt, w, 8)
    assert lam == 1
    assert len(curve) == 1


def test_approximate_converges(torus):
    tt = theta(torus)
    w = BranchWeights((0.3, 0.41, 0.71))
    sup = max(w.values)
    for n in (1, 3, 6, 10):
        lam, curve = approximate(tt, w, n)
        assert lam > 0
        # Rebuild the branch weights of lam * curve and compare.
        approx = _carried_weights(tt, curve, lam)
        err = max(abs(a - b) for a, b in zip(approx, w.values))
        assert err <= 2.0**-n * sup + 1e-12, (n, err)


def _carried_weights(track, curve, lam):
    weights = [0.0] * len(track.branches)
    for comp in curve:
        # Recover branch usage by walking the crossing word through the
        # branch paths; the theta track has distinct single-edge paths.
        for p, i in comp.crossings:
            for bi, br in enumerate(track.branches):
                if (p, i) in br.path:
                    weights[bi] += comp.weight
    # The connector branch has an empty path; its weight follows from the
    # switch balance weight(connector) = weight(climbing) - weight(crossing).
    weights[1] = weights[2] - weights[0]
    return [float(lam) * v for v in weights]


def test_approximate_respects_denominator_cap(torus):
    tt = theta(torus)
    w = BranchWeights((0.3, 0.41, 0.71))
    with pytest.raises(InputError):
        approximate(tt, w, 40, denominator_cap=10)


def test_approximate_rejects_non_switch_weights(torus):
    tt = theta(torus)
    with pytest.raises(InputError):
        approximate(tt, BranchWeights((1.0, 1.0, 1.0)), 4)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(p=st.integers(0, 6), extra=st.integers(0, 6))
def test_integral_switch_measures_are_carried(p, extra):
    from flatel.examples import make_example_surface

    torus = make_example_surface("torus")
    tt = theta(torus)
    q = p + extra
    if q == 0:
        return
    w = BranchWeights((p, q - p, q), "integral")
    assert switch_check(tt, w)
    mc = weights_to_multicurve(tt, w)
    assert sum(c.weight * len(c.crossings) for c in mc) == p + q
