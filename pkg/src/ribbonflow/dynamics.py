"""Straight-line flow, its return map on the horizontal circles, and
skew rotations.

Points of the section live on the circles of top edges of horizontal
cylinders.  The return map factors as a combinatorial jump S (each top
edge to the next one counterclockwise around its B-vertex) followed by a
rotation R^u of each circle by u times its cylinder height, u = x/y.
Exact quadratic arithmetic reproduces orbits bit for bit; the float mode
exists for long statistical runs and is checked against the exact one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import QuadNum
from .surface import Surface


class OrbitEscapedBudget(Exception):
    """The orbit left the allowed expansion of the graph."""

    def __init__(self, steps_done: int, visited: int):
        super().__init__('orbit escaped after %d steps (%d vertices '
                         'expanded)' % (steps_done, visited))
        self.steps_done = steps_done
        self.visited = visited


class SingularHitError(Exception):
    """The orbit landed exactly on an interval endpoint and no branch
    was chosen."""


@dataclass(frozen=True)
class HPoint:
    """A point of the horizontal section: circle of the A-vertex a,
    coordinate t in [0, lam * w(a))."""

    a: object
    t: QuadNum


@dataclass(frozen=True)
class SurfacePoint:
    """A point inside the rectangle over an edge."""

    edge: object
    x: QuadNum
    y: QuadNum


@dataclass(frozen=True)
class SingularHit:
    """A trajectory that ran into a rectangle corner.

    The two fields give the one-sided continuations: each is the pair
    (edge whose top interval is approached, offset within it).  The
    right offset is 0; the left offset equals the full edge width.
    """

    point: HPoint
    left: tuple
    right: tuple


def _theta_parts(theta):
    if hasattr(theta, 'x'):
        x, y = theta.x, theta.y
    else:
        x, y = theta
    x, y = QuadNum(x), QuadNum(y)
    if not y > 0:
        raise ValueError('direction must point upward')
    return x, y


def hpoint(surface: Surface, a, t) -> HPoint:
    """Wrap a circle coordinate, reducing it modulo the circle length."""
    if surface.graph.vertex_class(a) != 'a':
        raise ValueError('section circles sit at A-vertices')
    return HPoint(a, QuadNum(t) % surface.circle_length(a))

def resolve(surface: Surface, p: HPoint):
    """The edge whose top interval contains the point, plus the offset
    inside it.  Intervals are half open on the right."""
    t = p.t
    for e in surface.circle_edges(p.a):
        w = surface.width(e)
        if t < w:
            return e, t
        t = t - w
    raise ValueError('coordinate beyond circle length at %r' % (p.a,))


def _resolve_left(surface: Surface, a, t):
    # left-limit resolution: intervals taken half open on the left, so
    # a boundary coordinate belongs to the edge ending there
    edges = surface.circle_edges(a)
    if not t:
        t = surface.circle_length(a)
    for e in edges:
        w = surface.width(e)
        if t <= w:
            return e, t
        t = t - w
    raise ValueError('coordinate beyond circle length at %r' % (a,))


def from_edge(surface: Surface, e, offset) -> HPoint:
    """The circle point at a given offset inside the top interval of e."""
    offset = QuadNum(offset)
    a = surface.graph.alpha(e)
    return HPoint(a, surface.edge_offsets(a)[e] + offset)


def iet_step(surface: Surface, theta, p: HPoint) -> HPoint:
    """One step of the return map: jump to the next interval around the
    B-vertex, then rotate the target circle by (x/y) times its height."""
    x, y = _theta_parts(theta)
    e, o = resolve(surface, p)
    e2 = surface.north(e)
    a2 = surface.graph.alpha(e2)
    t2 = surface.edge_offsets(a2)[e2] + o + (x / y) * surface.weight(a2)
    return HPoint(a2, t2 % surface.circle_length(a2))


def return_time(surface: Surface, theta, p: HPoint) -> QuadNum:
    """Flow time spent crossing the cylinder above the point."""
    x, y = _theta_parts(theta)
    e, _ = resolve(surface, p)
    return surface.weight(surface.graph.alpha(surface.north(e))) / y


def flow_to_next_edge(surface: Surface, theta, p: SurfacePoint):
    """Follow the straight line up to its first crossing of a top edge,
    passing through side gluings on the way.

    Returns the crossing as an HPoint, or a SingularHit when the line
    runs exactly into a rectangle corner.
    """
    x, y = _theta_parts(theta)
    u = x / y
    e = p.edge
    cx, cy = QuadNum(p.x), QuadNum(p.y)
    while True:
        w = surface.width(e)
        h = surface.height(e)
        x_top = cx + u * (h - cy)
        if 0 < x_top < w:
            return from_edge(surface, e, x_top)
        if x_top == 0 or x_top == w:
            if x_top == 0:
                left_e = surface.west(e)
                hit = (from_edge(surface, e, 0),
                       (left_e, surface.width(left_e)), (e, QuadNum(0)))
            else:
                hit = (from_edge(surface, surface.east(e), 0),
                       (e, w), (surface.east(e), QuadNum(0)))
            return SingularHit(*hit)
        if x_top > w:
            cy = cy + (w - cx) / u
            e, cx = surface.east(e), QuadNum(0)
        else:
            cy = cy + (0 - cx) / u
            e = surface.west(e)
            cx = surface.width(e)


def flow_to_next_edge_float(surface: Surface, theta, edge, x: float,
                            y: float):
    """Float version of the geometric flow; returns (A-vertex, circle
    coordinate).  Corner hits are not detected in float mode."""
    tx, ty = (theta.x, theta.y) if hasattr(theta, 'x') else theta
    u = float(tx) / float(ty)
    e, cx, cy = edge, float(x), float(y)
    while True:
        w = float(surface.width(e))
        h = float(surface.height(e))
        x_top = cx + u * (h - cy)
        if 0.0 <= x_top < w:
            a = surface.graph.alpha(e)
            off = 0.0
            for e2 in surface.circle_edges(a):
                if e2 == e:
                    break
                off += float(surface.width(e2))
            return a, off + x_top
        if x_top >= w:
            cy += (w - cx) / u
            e, cx = surface.east(e), 0.0
        else:
            cy += (0.0 - cx) / u
            e = surface.west(e)
            cx = float(surface.width(e))


def code_orbit(surface: Surface, theta, p: HPoint, steps: int,
               branch=None, budget=None):
    """The itinerary of top-edge symbols along an orbit of the return
    map.

    A landing exactly on an interval endpoint is singular: the symbol
    depends on the side, so it raises unless a branch ('left' or
    'right') picks one.  A vertex budget bounds how much of the graph
    the orbit may expand before OrbitEscapedBudget.
    """
    if branch not in (None, 'left', 'right'):
        raise ValueError("branch must be None, 'left' or 'right'")
    x, y = _theta_parts(theta)
    u = x / y
    symbols = []
    points = []
    visited = {p.a}
    a, t = p.a, p.t
    for k in range(steps):
        boundary = _is_boundary(surface, a, t)
        if boundary and branch is None:
            raise SingularHitError(
                'orbit hit an interval endpoint at step %d' % k)
        if boundary and branch == 'left':
            e, o = _resolve_left(surface, a, t)
        else:
            e, o = resolve(surface, HPoint(a, t))
        symbols.append(e)
        points.append(HPoint(a, t))
        e2 = surface.north(e)
        a2 = surface.graph.alpha(e2)
        t = (surface.edge_offsets(a2)[e2] + o
             + u * surface.weight(a2)) % surface.circle_length(a2)
        a = a2
        if budget is not None and a not in visited:
            visited.add(a)
            if len(visited) > budget:
                raise OrbitEscapedBudget(k + 1, len(visited))
    return symbols, points


def _is_boundary(surface: Surface, a, t) -> bool:
    acc = QuadNum(0)
    if t == acc:
        return True
    for e in surface.circle_edges(a):
        acc = acc + surface.width(e)
        if t == acc:
            return True
    return False


def occupation_stats(points, cells):
    """Visit counts for cells given as (A-vertex, lo, hi) coordinate
    windows on the circles."""
    cells = tuple(cells)
    lohi = [(a, QuadNum(lo), QuadNum(hi)) for a, lo, hi in cells]
    counts = [0] * len(cells)
    for p in points:
        for i, (a, lo, hi) in enumerate(lohi):
            if p.a == a and lo <= p.t < hi:
                counts[i] += 1
    return counts


def skew_step(n: int, alpha, group, generators, state):
    """One step of the skew rotation: rotate the circle coordinate and
    multiply the group coordinate by the generator of the subinterval
    the point was in."""
    x, g = state
    x = QuadNum(x)
    if n != len(generators):
        raise ValueError('generator count does not match n')
    if not (0 <= x < 1):
        raise ValueError('circle coordinate must lie in [0, 1)')
    i = 0
    acc = QuadNum(0)
    step = QuadNum(1) / n
    while acc + step <= x:
        acc = acc + step
        i += 1
    mult = generators[i]
    return ((x + QuadNum(alpha)) % 1, group.op(mult, g))


def skew_orbit(n: int, alpha, group, generators, state, steps: int,
               budget=None):
    """Exact skew-rotation orbit; yields successive states after the
    initial one."""
    out = []
    visited = {state[1]}
    for k in range(steps):
        state = skew_step(n, alpha, group, generators, state)
        out.append(state)
        if budget is not None and state[1] not in visited:
            visited.add(state[1])
            if len(visited) > budget:
                raise OrbitEscapedBudget(k + 1, len(visited))
    return out


def skew_orbit_float(n: int, alpha: float, group, generators, state,
                     steps: int):
    """Float skew orbit with compensated circle summation, for long
    statistical runs; the exact path stays authoritative."""
    x, g = state
    x = float(x)
    alpha = float(alpha)
    comp = 0.0
    out = []
    for _ in range(steps):
        i = min(int(x * n), n - 1)
        g = group.op(generators[i], g)
        add = alpha - comp
        nxt = x + add
        comp = (nxt - x) - add
        x = nxt
        if x >= 1.0:
            x -= 1.0
        out.append((x, g))
    return out


@dataclass
class FloatState:
    """Float-mode section point with a Kahan compensation term."""

    a: object
    t: float
    comp: float = 0.0


def iet_step_float(surface: Surface, theta, st: FloatState) -> FloatState:
    """Float version of the return map, compensating the accumulated
    rotation error on each circle coordinate."""
    x, y = (theta.x, theta.y) if hasattr(theta, 'x') else theta
    u = float(x) / float(y)
    t = st.t
    acc = 0.0
    edge = None
    for e in surface.circle_edges(st.a):
        w = float(surface.width(e))
        if t < acc + w:
            edge = e
            break
        acc += w
    if edge is None:
        edge = e
        acc -= w
    o = t - acc
    e2 = surface.north(edge)
    a2 = surface.graph.alpha(e2)
    off = 0.0
    for e3 in surface.circle_edges(a2):
        if e3 == e2:
            break
        off += float(surface.width(e3))
    length = float(surface.circle_length(a2))
    base = off + o
    add = u * float(surface.weight(a2)) - st.comp
    t2 = base + add
    comp = (t2 - base) - add
    t2 = t2 % length
    return FloatState(a2, t2, comp)
