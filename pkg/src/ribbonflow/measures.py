"""Invariant transverse measures through vertex functions.

A direction with a shrinking sequence turns sign bookkeeping into
measure theory: a vertex function f encodes a transverse measure
exactly when every renormalized image keeps one sign per bipartition
class.  This module checks that property to finite depth, tracks how
fast the renormalized values decay, evaluates the measures of
horizontal segments by refining the symbolic coding, and exposes the
finite-depth boundary map that conjugates the flows of two weightings
of the same graph.

Measures of segments come from chains joining vertices: an initial
piece of a top-edge interval followed by a flow segment.  The chain's
value against f is a signed count of core-circle crossings, and the
flow part contributes nothing transverse, so the absolute value is the
measure.  Every cut point of the coding refinement gets an exact value
this way; arbitrary segment ends are bracketed between cuts, with the
straddling gap as the error bound.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass

from .dynamics import HPoint, _theta_parts, iet_step, resolve
from .exact import QuadNum
from .graphs import OracleFun, RibbonGraph, SparseFun, pairing, upsilon_eval
from .surface import Surface

_ZERO = QuadNum(0)
_ONE = QuadNum(1)


def plane_point(graph: RibbonGraph, f, v) -> OracleFun:
    """The vertex function x*f on the A side and y*f on the B side."""
    x, y = (v.x, v.y) if hasattr(v, 'x') else v
    x, y = QuadNum(x), QuadNum(y)

    def value(vertex):
        scale = x if graph.vertex_class(vertex) == 'a' else y
        return scale * f(vertex)

    return OracleFun(value)


Witness = namedtuple('Witness', 'n vertex sign')


def _class_sign(graph: RibbonGraph, sign_pair, vertex) -> int:
    return (sign_pair.sx if graph.vertex_class(vertex) == 'a'
            else sign_pair.sy)


def survivor_check(graph: RibbonGraph, f, data, depth: int, window):
    """Verify the one-sign-per-class property of the renormalized
    images of f over a finite window.

    For each n up to depth, every window value of the word action of
    g_n on f must vanish or carry the sign the n-th quadrant assigns to
    its bipartition class.  Returns None on a pass, else the first
    violation as Witness(n, vertex, sign).
    """
    if depth >= len(data.signs):
        raise ValueError('shrinking data shorter than requested depth')
    window = tuple(window)
    for n in range(depth + 1):
        s = data.signs[n]
        if s is None:
            continue
        word = data.group_element(n)
        for v in window:
            val = upsilon_eval(graph, word, f, v)
            sign = val.sign()
            if sign and sign != _class_sign(graph, s, v):
                return Witness(n, v, sign)
    return None


def critical_times(data, depth: int) -> tuple:
    """Indices n >= 1 in the prefix whose quadrant repeats the previous
    one."""
    out = []
    for n in range(1, depth + 1):
        if data.signs[n] is not None and data.signs[n] == data.signs[n - 1]:
            out.append(n)
    return tuple(out)


@dataclass(frozen=True)
class DecayProfile:
    """Renormalized absolute values at one vertex along the ray."""

    values: tuple
    nonincreasing: tuple
    critical: tuple
    halving_index: object
    survivor_ok: bool


def decay_profile(graph: RibbonGraph, f, vertex, data, depth: int
                  ) -> DecayProfile:
    """Track |word action of g_n on f| at a vertex for n = 0..depth.

    Flags where the sequence fails to be nonincreasing, and reports the
    first critical time whose value has dropped to half the start.  A
    sign violation at the vertex marks the input as a non-survivor.
    """
    values = []
    ok = True
    for n in range(depth + 1):
        val = upsilon_eval(graph, data.group_element(n), f, vertex)
        s = data.signs[n]
        if s is not None and val.sign() and \
                val.sign() != _class_sign(graph, s, vertex):
            ok = False
        values.append(abs(val))
    flags = tuple(values[i] <= values[i - 1] for i in range(1, len(values)))
    crit = critical_times(data, depth)
    half = values[0] / 2
    halving = None
    for n in crit:
        if values[n] <= half:
            halving = n
            break
    return DecayProfile(tuple(values), flags, crit, halving, ok)


def _endpoint_ladder(surface: Surface, a) -> list:
    cums = [_ZERO]
    for e in surface.circle_edges(a):
        cums.append(cums[-1] + surface.width(e))
    return cums


def _coding_grid(surface: Surface, theta, e, depth: int) -> dict:
    """Offsets in the top interval of e whose forward orbit meets an
    interval endpoint within the given number of steps, mapped to the
    step count of the first hit."""
    w = surface.width(e)
    a0 = surface.graph.alpha(e)
    t0 = surface.edge_offsets(a0)[e]
    cells = [(_ZERO, w, a0, t0)]
    grid = {_ZERO: 0, w: 0}
    for step in range(1, depth + 1):
        refined = []
        for q, ln, a, t in cells:
            img = iet_step(surface, theta, HPoint(a, t))
            a2, t2 = img.a, img.t
            length = surface.circle_length(a2)
            ladder = _endpoint_ladder(surface, a2)
            cuts = [c for c in ladder if t2 < c < t2 + ln]
            cuts += [length + c for c in ladder if _ZERO < length + c < t2 + ln]
            prev_q, prev_t = q, t2
            for c in sorted(set(cuts)):
                off = q + (c - t2)
                grid.setdefault(off, step)
                refined.append((prev_q, off - prev_q, a2, prev_t % length))
                prev_q, prev_t = off, c
            refined.append((prev_q, q + ln - prev_q, a2, prev_t % length))
        cells = refined
    return grid


def _chain_crossings(surface: Surface, theta, e, q, steps: int) -> SparseFun:
    """Signed core-circle crossing counts of the chain running along
    the top interval of e to offset q and then flowing for the given
    number of return steps."""
    x, y = _theta_parts(theta)
    u = x / y
    counts = {}

    def bump(v, k):
        counts[v] = counts.get(v, 0) + k

    w = surface.width(e)
    if 2 * q >= w and q > 0:
        bump(surface.graph.beta(e), 1)
    a = surface.graph.alpha(e)
    t = surface.edge_offsets(a)[e] + q
    for _ in range(steps):
        e1, o = resolve(surface, HPoint(a, t % surface.circle_length(a)))
        r = surface.north(e1)
        a2 = surface.graph.alpha(r)
        cx, cy = o, _ZERO
        while True:
            wr = surface.width(r)
            h = surface.height(r)
            x_top = cx + u * (h - cy)
            topped = _ZERO <= x_top <= wr if u >= 0 else _ZERO <= x_top < wr
            if u > 0:
                x_end = x_top if topped else wr
                if cx < wr / 2 <= x_end:
                    bump(surface.graph.beta(r), 1)
            elif u < 0:
                x_end = x_top if topped else _ZERO
                if x_end <= wr / 2 < cx:
                    bump(surface.graph.beta(r), -1)
            y_end = h if topped else cy + (x_end - cx) / u
            if cy < h / 2 <= y_end:
                bump(a2, -1)
            if topped:
                base = surface.edge_offsets(a2)[r]
                a, t = a2, (base + x_top) % surface.circle_length(a2)
                break
            if u > 0:
                cy = y_end
                r, cx = surface.east(r), _ZERO
            else:
                cy = y_end
                r = surface.west(r)
                cx = surface.width(r)
    return SparseFun(counts)


@dataclass(frozen=True)
class TransMeasure:
    """Measure of an initial segment, with the straddling-cell error."""

    value: QuadNum
    error: QuadNum
    cuts: tuple


def transversal_measure(surface: Surface, f, theta, e, t, depth: int
                        ) -> TransMeasure:
    """Measure of [0, t] inside the top interval of e for the measure
    encoded by f, refined through `depth` return steps.

    Every cut point of the coding refinement gets an exact value; a t
    between cuts is bracketed and the gap reported as the error.
    """
    t = QuadNum(t)
    w = surface.width(e)
    if not (_ZERO <= t <= w):
        raise ValueError('segment end outside the edge')
    grid = _coding_grid(surface, theta, e, depth)
    cuts = []
    for q in sorted(grid):
        chain = _chain_crossings(surface, theta, e, q, grid[q])
        cuts.append((q, abs(pairing(f, chain))))
    value = _ZERO
    error = _ZERO
    for i, (q, m) in enumerate(cuts):
        if q == t:
            value, error = m, _ZERO
            break
        if q < t:
            value = m
        else:
            error = m - value
            break
    return TransMeasure(value, error, tuple(cuts))


class _Transposed(RibbonGraph):
    """The same graph with the two vertex classes swapped.

    Geometrically this is the mirror surface: vertical cylinders become
    horizontal, so vertical transversals can reuse the horizontal
    machinery.
    """

    def __init__(self, graph: RibbonGraph):
        self._graph = graph

    def vertex_class(self, v) -> str:
        return 'b' if self._graph.vertex_class(v) == 'a' else 'a'

    def edges_at(self, v) -> tuple:
        return self._graph.edges_at(v)

    def alpha(self, e):
        return self._graph.beta(e)

    def beta(self, e):
        return self._graph.alpha(e)

    def root(self):
        return self._graph.root()


def transposed_surface(surface: Surface) -> Surface:
    return Surface(_Transposed(surface.graph), surface.weight, surface.lam)


@dataclass(frozen=True)
class BoundaryImage:
    """Image of a rectangle-side point, exact up to the error field."""

    x: QuadNum
    y: QuadNum
    error: QuadNum


def conjugate_boundary_point(surface1: Surface, surface2: Surface,
                             theta1, theta2, e, side: str, t,
                             depth: int) -> BoundaryImage:
    """Finite-depth boundary conjugacy between the two weightings.

    A point at arc length t along the named side of the rectangle over
    e in the first surface maps to the matching side in the second; the
    coordinate is the measure of the initial segment under the plane
    function of the second direction, rescaled by that direction's
    transverse component.
    """
    if side not in ('bottom', 'top', 'left', 'right'):
        raise ValueError('side must be bottom, top, left or right')
    f = plane_point(surface1.graph, surface2.weight, theta2)
    x2, y2 = _theta_parts(theta2)
    x1, y1 = _theta_parts(theta1)
    if side in ('bottom', 'top'):
        m = transversal_measure(surface1, f, (x1, y1), surface1.south(e), t,
                                depth)
        img = m.value / abs(y2)
        height = surface2.height(e) if side == 'top' else _ZERO
        return BoundaryImage(img, height, m.error / abs(y2))
    flipped = (y1, x1) if x1 > 0 else (-y1, -x1)
    ts = transposed_surface(surface1)
    edge = e if side == 'right' else surface1.west(e)
    m = transversal_measure(ts, f, flipped, edge, t, depth)
    img = m.value / abs(x2)
    width = surface2.width(e) if side == 'right' else _ZERO
    return BoundaryImage(width, img, m.error / abs(x2))


def maharam_check(graph, chi, f, elements):
    """For a skew graph, f scales across B-fibers by the inverse of the
    character: f(b_g) * chi(g) must be constant.  Returns the first
    violating group element, or None."""
    base = f(('b', graph.group.identity)) * chi(graph.group.identity)
    for g in elements:
        if f(('b', g)) * chi(g) != base:
            return g
    return None


@dataclass(frozen=True)
class MeasureClass:
    """A measure candidate with the depth to which it survived."""

    f: object
    theta: tuple
    lam: QuadNum
    label: str
    verified_depth: int


def verified_measure_class(graph: RibbonGraph, f, data, depth: int, window,
                           lam, label: str) -> MeasureClass:
    """Run survivor_check and package the result; a witness raises."""
    witness = survivor_check(graph, f, data, depth, window)
    if witness is not None:
        raise ValueError('not a survivor at depth %d: %r'
                         % (witness.n, witness))
    return MeasureClass(f, (data.theta.x, data.theta.y), QuadNum(lam),
                        label, depth)
