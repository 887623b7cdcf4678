"""Survivor checks, decay, transversal measures, boundary conjugacy."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ribbonflow.dynamics import from_edge, iet_step, resolve
from ribbonflow.eigen import (character, character_eigen, gz_constant,
                              gz_exponential, tripod_family)
from ribbonflow.exact import QVec2, QuadNum, sqrt_rational
from ribbonflow.freegrp import rho
from ribbonflow.graphs import (IntegersZ, OracleFun, upsilon_eval,
                               vertices_in_ball)
from ribbonflow.measures import (DecayProfile, MeasureClass, Witness,
                                 conjugate_boundary_point, critical_times,
                                 decay_profile, maharam_check, plane_point,
                                 survivor_check, transposed_surface,
                                 transversal_measure, verified_measure_class)
from ribbonflow.renorm import shrinking_sequence
from ribbonflow.surface import Surface

THETA2 = (QuadNum(1), sqrt_rational(2) - 1)
THETA41 = (QuadNum(4), sqrt_rational(41) - 5)
THETA34 = (QuadNum(3), sqrt_rational(34) - 5)


def gz_pair():
    """Two weightings of the half-line graph with matched sign data."""
    w1, w2 = gz_constant(), gz_exponential(2)
    return w1, w2, shrinking_sequence(QuadNum(2), THETA2), THETA41


def tripod_pair():
    w1, w2 = tripod_family(2), tripod_family(3)
    return w1, w2, shrinking_sequence(QuadNum('5/2'), THETA41), THETA34


def ball_window(graph, radius):
    return sorted(vertices_in_ball(graph, graph.root(), radius), key=repr)


def test_plane_point_scales_by_class():
    fam = gz_constant()
    f = plane_point(fam.graph, fam.weight, (QuadNum(3), QuadNum(-2)))
    assert f(0) == 3 * fam.weight(0)
    assert f(1) == -2 * fam.weight(1)
    assert f(-4) == 3 * fam.weight(-4)


def test_plane_point_intertwines_word_action():
    fam = gz_exponential(2)
    v = QVec2(QuadNum(2), QuadNum(-3))
    data = shrinking_sequence(fam.lam, THETA41)
    f = plane_point(fam.graph, fam.weight, v)
    for n in (0, 1, 2, 5):
        word = data.group_element(n)
        moved = rho(fam.lam, word) * v
        g = plane_point(fam.graph, fam.weight, moved)
        for u in (0, 1, -2, 3):
            assert upsilon_eval(fam.graph, word, f, u) == g(u)


def test_matched_pairs_share_sign_data():
    d1 = shrinking_sequence(QuadNum(2), THETA2)
    d2 = shrinking_sequence(QuadNum('5/2'), THETA41)
    d3 = shrinking_sequence(QuadNum('10/3'), THETA34)
    assert d1.increments[:13] == d2.increments[:13] == d3.increments[:13]
    assert d1.signs[:13] == d2.signs[:13] == d3.signs[:13]
    assert d1.period == d2.period == d3.period == (0, 2)


def test_gz_pair_survives_depth_twelve():
    w1, w2, data, theta2 = gz_pair()
    f = plane_point(w1.graph, w2.weight, theta2)
    window = ball_window(w1.graph, 12)
    assert survivor_check(w1.graph, f, data, 12, window) is None


def test_tripod_pair_survives_depth_twelve():
    w1, w2, data, theta2 = tripod_pair()
    f = plane_point(w1.graph, w2.weight, theta2)
    window = ball_window(w1.graph, 12)
    assert survivor_check(w1.graph, f, data, 12, window) is None


@pytest.mark.parametrize('pair', [gz_pair, tripod_pair])
def test_perturbed_direction_is_rejected(pair):
    w1, w2, data, theta2 = pair()
    nudged = (theta2[0], theta2[1] + QuadNum('1/1000'))
    f = plane_point(w1.graph, w2.weight, nudged)
    witness = survivor_check(w1.graph, f, data, 12, ball_window(w1.graph, 12))
    assert witness is not None
    assert witness.n <= 12
    assert witness.sign in (-1, 1)


def test_wrong_vector_is_rejected():
    w1, w2, data, theta2 = gz_pair()
    window = ball_window(w1.graph, 10)
    for v in ((QuadNum(1), QuadNum(0)), (QuadNum(1), QuadNum('1/3'))):
        f = plane_point(w1.graph, w2.weight, v)
        assert survivor_check(w1.graph, f, data, 10, window) is not None


def test_positive_function_passes_depth_zero():
    w1, _, data, _ = gz_pair()
    f = OracleFun(lambda v: QuadNum(1))
    assert survivor_check(w1.graph, f, data, 0, ball_window(w1.graph, 6)) \
        is None


def test_survivor_cone_is_convex():
    w1, w2, data, theta2 = gz_pair()
    other = gz_exponential(QuadNum('1/2'))
    assert other.lam == w2.lam
    f1 = plane_point(w1.graph, w2.weight, theta2)
    f2 = plane_point(w1.graph, other.weight, theta2)
    window = ball_window(w1.graph, 8)
    for q in (QuadNum(1), QuadNum('1/3'), QuadNum(5)):
        mix = OracleFun(lambda v, q=q: f1(v) + q * f2(v))
        assert survivor_check(w1.graph, mix, data, 8, window) is None


def test_square_minus_identity_preserves_survivors():
    w1, w2, data, theta2 = gz_pair()
    f = plane_point(w1.graph, w2.weight, theta2)
    graph = w1.graph

    def two_step(v):
        total = -f(v)
        for u in graph.neighbors(v):
            for u2 in graph.neighbors(u):
                total = total + f(u2)
        return total

    g = OracleFun(two_step)
    lam2 = w2.lam * w2.lam
    for v in (0, 1, -3, 6):
        assert g(v) == (lam2 - 1) * f(v)
    assert survivor_check(graph, g, data, 8, ball_window(graph, 8)) is None


def test_depth_beyond_sign_data_raises():
    w1, w2, data, theta2 = gz_pair()
    f = plane_point(w1.graph, w2.weight, theta2)
    with pytest.raises(ValueError):
        survivor_check(w1.graph, f, data, len(data.signs), (0,))


def test_decay_profile_monotone_with_halving():
    fam = gz_constant()
    data = shrinking_sequence(fam.lam, THETA2)
    f = plane_point(fam.graph, fam.weight, THETA2)
    prof = decay_profile(fam.graph, f, 0, data, 12)
    assert prof.values[0] == abs(f(0))
    assert all(prof.nonincreasing)
    assert prof.survivor_ok
    assert prof.critical == tuple(range(1, 13))
    assert prof.halving_index == 1
    assert prof.values[prof.halving_index] <= prof.values[0] / 2


def test_decay_profile_flags_non_survivor():
    w1, w2, data, theta2 = gz_pair()
    nudged = (theta2[0], theta2[1] + QuadNum('1/1000'))
    f = plane_point(w1.graph, w2.weight, nudged)
    witness = survivor_check(w1.graph, f, data, 12, ball_window(w1.graph, 12))
    prof = decay_profile(w1.graph, f, witness.vertex, data, 12)
    assert not prof.survivor_ok


def test_critical_times_need_repeated_quadrant():
    data = shrinking_sequence(QuadNum(2), THETA2)
    assert critical_times(data, 6) == (1, 2, 3, 4, 5, 6)


def lebesgue_staircase():
    fam = gz_constant()
    s = Surface.from_family(fam)
    f = plane_point(fam.graph, fam.weight, THETA2)
    return s, f


def test_transversal_full_edge_is_exact():
    s, f = lebesgue_staircase()
    for e in (0, -1, 3):
        tm = transversal_measure(s, f, THETA2, e, s.width(e), 5)
        assert tm.error == 0
        assert tm.value == abs(f(s.graph.beta(e)))


def test_transversal_matches_length_on_grid():
    s, f = lebesgue_staircase()
    y = THETA2[1]
    tm = transversal_measure(s, f, THETA2, 0, s.width(0), 10)
    assert len(tm.cuts) >= 10
    for q, m in tm.cuts:
        assert m == q * y


def test_transversal_adds_up_around_circle():
    s, f = lebesgue_staircase()
    y = THETA2[1]
    a = s.graph.alpha(0)
    total = QuadNum(0)
    for e in s.circle_edges(a):
        total += transversal_measure(s, f, THETA2, e, s.width(e), 4).value
    assert total == s.circle_length(a) * y


def test_transversal_monotone_and_bracketing():
    s, f = lebesgue_staircase()
    y = THETA2[1]
    last = QuadNum(0)
    for num in range(1, 8):
        t = s.width(0) * QuadNum(Fraction(num, 8))
        tm = transversal_measure(s, f, THETA2, 0, t, 8)
        assert tm.value <= t * y <= tm.value + tm.error
        assert tm.value >= last
        last = tm.value


def test_transversal_error_nonincreasing_in_depth():
    s, f = lebesgue_staircase()
    t = s.width(0) / 3
    errors = [transversal_measure(s, f, THETA2, 0, t, k).error
              for k in (2, 4, 6, 8, 10)]
    assert all(b <= a for a, b in zip(errors, errors[1:]))


def test_transversal_rejects_point_outside_edge():
    s, f = lebesgue_staircase()
    with pytest.raises(ValueError):
        transversal_measure(s, f, THETA2, 0, s.width(0) + 1, 2)


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=0, max_value=1),
       st.fractions(min_value=0, max_value=1))
def test_transversal_monotone_in_endpoint(p, q):
    s, f = lebesgue_staircase()
    lo, hi = sorted((p, q))
    w = s.width(0)
    a = transversal_measure(s, f, THETA2, 0, w * QuadNum(lo), 6)
    b = transversal_measure(s, f, THETA2, 0, w * QuadNum(hi), 6)
    assert a.value <= b.value
    assert a.value + a.error <= b.value + b.error


def test_transposed_surface_swaps_roles():
    s = Surface.from_family(gz_exponential(2))
    ts = transposed_surface(s)
    for e in (0, 1, -2):
        assert ts.width(e) == s.height(e)
        assert ts.height(e) == s.width(e)
        assert ts.north(e) == s.east(e)
        assert ts.east(e) == s.north(e)


def test_conjugacy_full_bottom_edge_exact():
    w1, w2, _, theta2 = gz_pair()
    s1, s2 = Surface.from_family(w1), Surface.from_family(w2)
    p = conjugate_boundary_point(s1, s2, THETA2, theta2, 0, 'bottom',
                                 s1.width(0), 6)
    assert p.x == s2.width(0)
    assert p.y == 0
    assert p.error == 0


def test_conjugacy_tripod_pair_bottom_edge():
    w1, w2, _, theta2 = tripod_pair()
    s1, s2 = Surface.from_family(w1), Surface.from_family(w2)
    e = w1.graph.edges_at(w1.graph.root())[0]
    p = conjugate_boundary_point(s1, s2, THETA41, theta2, e, 'bottom',
                                 s1.width(e), 6)
    assert p.x == s2.width(e)
    assert p.error == 0


def test_conjugacy_sends_corners_to_corners():
    w1, w2, _, theta2 = gz_pair()
    s1, s2 = Surface.from_family(w1), Surface.from_family(w2)
    e = 0
    zero = conjugate_boundary_point(s1, s2, THETA2, theta2, e, 'bottom', 0, 4)
    assert (zero.x, zero.y, zero.error) == (0, 0, 0)
    top = conjugate_boundary_point(s1, s2, THETA2, theta2, e, 'top',
                                   s1.width(e), 4)
    assert (top.x, top.y) == (s2.width(e), s2.height(e))
    left = conjugate_boundary_point(s1, s2, THETA2, theta2, e, 'left',
                                    s1.height(e), 4)
    assert (left.x, left.y, left.error) == (0, s2.height(e), 0)
    right = conjugate_boundary_point(s1, s2, THETA2, theta2, e, 'right',
                                     s1.height(e), 4)
    assert (right.x, right.y) == (s2.width(e), s2.height(e))


def test_conjugacy_identity_brackets_the_point():
    fam = gz_constant()
    s = Surface.from_family(fam)
    t = s.width(0) / 3
    p = conjugate_boundary_point(s, s, THETA2, THETA2, 0, 'bottom', t, 8)
    assert p.x <= t <= p.x + p.error


def test_conjugacy_rejects_unknown_side():
    s = Surface.from_family(gz_constant())
    with pytest.raises(ValueError):
        conjugate_boundary_point(s, s, THETA2, THETA2, 0, 'north', 0, 2)


def test_boundary_map_intertwines_return_maps():
    w1, w2, _, theta2 = gz_pair()
    s1, s2 = Surface.from_family(w1), Surface.from_family(w2)
    y2 = abs(theta2[1])
    f = plane_point(w1.graph, w2.weight, theta2)

    def phi(e, t):
        tm = transversal_measure(s1, f, THETA2, e, t, 12)
        return from_edge(s2, e, tm.value / y2), tm.error

    checked = 0
    for q, j in sorted(transversal_measure(
            s1, f, THETA2, 0, s1.width(0), 6).cuts):
        if q == 0 or q == s1.width(0):
            continue
        p1 = from_edge(s1, 0, q)
        e1, o1 = resolve(s1, iet_step(s1, THETA2, p1))
        lhs, err = phi(e1, o1)
        img, err0 = phi(0, q)
        assert err0 == 0
        rhs = iet_step(s2, theta2, img)
        if err == 0:
            assert (lhs.a, lhs.t) == (rhs.a, rhs.t)
            checked += 1
    assert checked >= 4


def test_maharam_scaling_on_skew_family():
    fam = character_eigen(IntegersZ(), (1, -1), 4)
    chi = character(IntegersZ(), 4)
    assert maharam_check(fam.graph, chi, fam.weight, range(-8, 9)) is None
    broken = OracleFun(lambda v: fam.weight(v) + 1 if v == ('b', 3)
                       else fam.weight(v))
    assert maharam_check(fam.graph, chi, broken, range(-8, 9)) == 3


def test_verified_measure_class_packaging():
    w1, w2, data, theta2 = gz_pair()
    f = plane_point(w1.graph, w2.weight, theta2)
    mc = verified_measure_class(w1.graph, f, data, 8, ball_window(w1.graph, 8),
                                QuadNum(2), 'gz pair')
    assert isinstance(mc, MeasureClass)
    assert mc.verified_depth == 8
    nudged = plane_point(w1.graph, w2.weight,
                         (theta2[0], theta2[1] + QuadNum('1/1000')))
    with pytest.raises(ValueError):
        verified_measure_class(w1.graph, nudged, data, 8,
                               ball_window(w1.graph, 8), QuadNum(2), 'bad')
