"""Closed-form positive eigenfunctions of the adjacency operator.

Each family packages a graph, an eigenvalue, and a value oracle that
satisfies A(w) = lam * w exactly at every vertex.  verify_eigen walks a
ball and reports the residuals, which must be identically zero; nothing
here is approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .exact import QuadNum, quad_sqrt, sqrt_rational
from .graphs import (Cyclic, FreeGroup, Group, Heisenberg, IntegerLattice,
                     IntegersZ, OracleFun, PathGraph, RegularTree,
                     RibbonGraph, SkewGraph, TripodGraph, make_group,
                     vertices_in_ball)

_ONE = QuadNum(1)
_ZERO = QuadNum(0)


def qpow(base: QuadNum, k: int) -> QuadNum:
    """Exact integer power; negative exponents invert."""
    if k < 0:
        base = _ONE / base
        k = -k
    out = _ONE
    while k:
        if k & 1:
            out = out * base
        base = base * base
        k >>= 1
    return out


def _power_cache(base: QuadNum) -> Callable[[int], QuadNum]:
    table = {0: _ONE, 1: base}

    def power(k: int) -> QuadNum:
        got = table.get(k)
        if got is None:
            got = table[k] = qpow(base, k)
        return got

    return power


def _product(values) -> QuadNum:
    out = _ONE
    for v in values:
        out = out * v
    return out


@dataclass(frozen=True)
class EigenFamily:
    """A graph together with a positive adjacency eigenfunction."""

    name: str
    graph: RibbonGraph
    lam: QuadNum
    weight: OracleFun
    root: object
    params: tuple = ()

    def __call__(self, v) -> QuadNum:
        return self.weight(v)

    def describe(self) -> str:
        extra = ' '.join('%s=%s' % (k, val) for k, val in self.params)
        return ('%s %s' % (self.name, extra)).strip()


def gz_constant() -> EigenFamily:
    return EigenFamily('gz_constant', PathGraph(), QuadNum(2),
                       OracleFun(lambda v: _ONE), 0)


def gz_exponential(t) -> EigenFamily:
    """f(n) = t^n on the integer path, eigenvalue t + 1/t."""
    t = QuadNum(t)
    if not t > 0:
        raise ValueError('growth rate must be positive')
    power = _power_cache(t)
    return EigenFamily('gz_exponential', PathGraph(), t + _ONE / t,
                       OracleFun(power), 0, (('t', t),))


def tripod_family(t) -> EigenFamily:
    """Exponentially decaying values along three rays, matched at the center.

    The center takes the value 3 and ray position k takes a*t^k + b*t^-k,
    with a, b pinned by the recurrence and the matching condition.  Both
    coefficients stay nonnegative only for t^2 >= 2.
    """
    t = QuadNum(t)
    if not t > 0:
        raise ValueError('decay rate must be positive')
    tt = t * t
    if tt < 2:
        raise ValueError('values go negative down the rays for t^2 < 2')
    a = (tt - 2) / (tt - 1)
    b = (2 * tt - 1) / (tt - 1)
    power = _power_cache(t)

    def value(v):
        if v == ('c',):
            return QuadNum(3)
        k = v[2]
        return a * power(k) + b * power(-k)

    return EigenFamily('tripod', TripodGraph(), t + _ONE / t,
                       OracleFun(value), ('c',), (('t', t),))


def ntree_constant(n: int) -> EigenFamily:
    return EigenFamily('ntree_constant', RegularTree(n), QuadNum(n),
                       OracleFun(lambda v: _ONE), (), (('n', n),))


def _toward_end(v) -> int:
    """Signed distance against the all-zeros ray: depth minus twice the
    length of the leading zero run."""
    z = 0
    for j in v:
        if j:
            break
        z += 1
    return len(v) - 2 * z


def ntree_horofunction(n: int, s) -> EigenFamily:
    """f = s^(horofunction toward the all-zeros end) on the regular n-tree.

    Every vertex sees exactly one neighbor one step nearer the end and
    n - 1 neighbors one step farther, so the eigenvalue is 1/s + (n-1)s.
    """
    s = QuadNum(s)
    if not s > 0:
        raise ValueError('ratio must be positive')
    lam = _ONE / s + (n - 1) * s
    power = _power_cache(s)
    return EigenFamily('ntree_horo', RegularTree(n), lam,
                       OracleFun(lambda v: power(_toward_end(v))), (),
                       (('n', n), ('s', s)))


def character(group: Group, values) -> Callable:
    """The multiplicative extension of positive values on the standard
    generators: one value for Z or a cyclic group, d for Z^d, k for the
    free group, and two (the x and y shifts) for Heisenberg.

    The extension uses the canonical coordinates of each encoding, so on
    a torsion group values other than 1 fail the relation check done by
    character_eigen rather than here.
    """
    vals = [QuadNum(v) for v in
            (values if isinstance(values, (list, tuple)) else [values])]
    for v in vals:
        if not v > 0:
            raise ValueError('character values must be positive')
    if isinstance(group, (IntegersZ, Cyclic)):
        need = 1
    elif isinstance(group, IntegerLattice):
        need = group.d
    elif isinstance(group, Heisenberg):
        need = 2
    elif isinstance(group, FreeGroup):
        need = group.k
    else:
        raise ValueError('no character encoding for %s'
                         % type(group).__name__)
    if len(vals) != need:
        raise ValueError('expected %d character values, got %d'
                         % (need, len(vals)))
    powers = [_power_cache(v) for v in vals]
    if isinstance(group, (IntegersZ, Cyclic)):
        return lambda g: powers[0](g)
    if isinstance(group, IntegerLattice):
        return lambda g: _product(p(x) for p, x in zip(powers, g))
    if isinstance(group, Heisenberg):
        return lambda g: powers[0](g[0]) * powers[1](g[1])

    def on_word(g):
        return _product(powers[abs(j) - 1](1 if j > 0 else -1) for j in g)

    return on_word


def character_eigen(group, generators, values) -> EigenFamily:
    """The eigenfunction chi(g)^-1 on the A-vertices of a skew graph,
    lifted to the B-side by averaging neighbors against the eigenvalue.

    With delta and eps the sums of chi over the partial products and
    their inverses, the eigenvalue is sqrt(delta * eps).  The square
    root may widen a rational field by one radical; it must not leave a
    quadratic one.
    """
    if isinstance(group, str):
        group = make_group(group)
    graph = SkewGraph(group, generators)
    chi = character(group, values)
    if _product(chi(g) for g in graph.generators) != 1:
        raise ValueError('character does not respect the defining relation')
    eta_vals = [chi(g) for g in graph.etas]
    eps = _ZERO
    delta = _ZERO
    for val in eta_vals:
        eps = eps + val
        delta = delta + _ONE / val
    square = delta * eps
    if square.is_rational:
        lam = sqrt_rational(square.as_fraction())
    else:
        lam = quad_sqrt(square)
    discs = {x.field_disc for x in eta_vals + [lam] if x.field_disc}
    if len(discs) > 1:
        raise ValueError('eigenvalue leaves the quadratic coefficient field')
    inv_lam = _ONE / lam

    def weight(v):
        kind, g = v
        if kind == 'a':
            return _ONE / chi(g)
        total = _ZERO
        for a in graph.neighbors(v):
            total = total + _ONE / chi(a[1])
        return inv_lam * total

    vals = tuple(QuadNum(v) for v in
                 (values if isinstance(values, (list, tuple)) else [values]))
    shown = ','.join(str(v) for v in vals)
    return EigenFamily('character', graph, lam, OracleFun(weight),
                       graph.root(), (('chi', shown),))


def family_eigen(name: str, **params) -> EigenFamily:
    """Build a named family: gz_constant, gz_exponential, tripod,
    ntree_constant, ntree_horo, or character."""
    if name == 'gz_constant':
        return gz_constant()
    if name == 'gz_exponential':
        return gz_exponential(params['t'])
    if name == 'tripod':
        return tripod_family(params['t'])
    if name == 'ntree_constant':
        return ntree_constant(params['n'])
    if name == 'ntree_horo':
        return ntree_horofunction(params['n'], params['s'])
    if name == 'character':
        return character_eigen(params['group'], params['generators'],
                               params['chi'])
    raise ValueError('unknown eigenfamily %r' % name)


def builtin_families() -> tuple:
    """The stock instances exercised by the verification suites."""
    x, y = (1, 0, 0), (0, 1, 0)
    return (
        gz_constant(),
        gz_exponential(2),
        gz_exponential(QuadNum(0, 1, 2)),
        tripod_family(QuadNum(0, 1, 2)),
        tripod_family(2),
        tripod_family(3),
        ntree_constant(3),
        ntree_horofunction(3, QuadNum('1/2')),
        character_eigen(IntegersZ(), (1, -1), 4),
        character_eigen(Heisenberg(), (x, (-1, 0, 0), y, (0, -1, 0)),
                        (1, 1)),
        character_eigen(Heisenberg(), (x, (-1, 0, 0), y, (0, -1, 0)),
                        (2, 1)),
    )


@dataclass(frozen=True)
class ResidualReport:
    """Exact accounting of A f - lam f over a ball."""

    radius: int
    vertex_count: int
    nonzero: tuple
    nonzero_count: int
    max_abs: QuadNum

    @property
    def ok(self) -> bool:
        return self.nonzero_count == 0

    def __str__(self):
        state = 'all zero' if self.ok else \
            '%d nonzero, max |residual| %s' % (self.nonzero_count,
                                               self.max_abs)
        return 'residuals on %d vertices (radius %d): %s' % (
            self.vertex_count, self.radius, state)


def verify_eigen(graph: RibbonGraph, fn, lam, radius: int, root=None,
                 keep: int = 64) -> ResidualReport:
    """Residual A f - lam f at every vertex within the radius.

    Walks the ball breadth-first and memoizes oracle values, so each
    vertex is evaluated once.  Nonzero residuals are collected up to the
    keep limit; the count and max are over all of them.
    """
    lam = QuadNum(lam)
    if root is None:
        root = graph.root()
    cache = {}

    def val(v):
        got = cache.get(v)
        if got is None:
            got = fn(v)
            if not isinstance(got, QuadNum):
                got = QuadNum(got)
            cache[v] = got
        return got

    nonzero = []
    count = 0
    max_abs = _ZERO
    ball = vertices_in_ball(graph, root, radius)
    for v in ball:
        total = _ZERO
        for w in graph.neighbors(v):
            total = total + val(w)
        res = total - lam * val(v)
        if res:
            count += 1
            mag = abs(res)
            if mag > max_abs:
                max_abs = mag
            if len(nonzero) < keep:
                nonzero.append((v, res))
    return ResidualReport(radius, len(ball), tuple(nonzero), count, max_abs)


def verify_eigen_tree(tree: RegularTree, fn, lam, depth: int,
                      keep: int = 64) -> ResidualReport:
    """verify_eigen specialized to the regular tree rooted at ().

    Streams a depth-first walk instead of materializing the ball, since
    a radius-20 ball of the 3-tree has millions of vertices.  Each
    oracle value is computed once and handed down the stack.
    """
    lam = QuadNum(lam)
    n = tree.n
    nonzero = []
    count = 0
    max_abs = _ZERO
    visited = 0
    root = ()
    stack = [(root, QuadNum(fn(root)), None, 0)]
    while stack:
        v, fv, f_parent, d = stack.pop()
        visited += 1
        kids = [v + (j,) for j in range(n if v == root else n - 1)]
        total = _ZERO if f_parent is None else f_parent
        kid_vals = []
        for w in kids:
            fw = fn(w)
            kid_vals.append(fw)
            total = total + fw
        res = total - lam * fv
        if res:
            count += 1
            mag = abs(res)
            if mag > max_abs:
                max_abs = mag
            if len(nonzero) < keep:
                nonzero.append((v, res))
        if d < depth:
            for w, fw in zip(kids, kid_vals):
                stack.append((w, fw, fv, d + 1))
    return ResidualReport(depth, visited, tuple(nonzero), count, max_abs)


def verify_family(family: EigenFamily, radius: int) -> ResidualReport:
    """Residual check with the traversal suited to the family's graph."""
    if isinstance(family.graph, RegularTree) and radius > 12:
        return verify_eigen_tree(family.graph, family.weight, family.lam,
                                 radius)
    return verify_eigen(family.graph, family.weight, family.lam, radius,
                        family.root)


def spoke_profile(lam, k: int) -> tuple:
    """Values 1, lam, lam^2 - 1, ... of the eigen-recurrence along a path
    hanging off a graph, normalized to start at 1.

    At lam = 2 this is 1, 2, 3, ...; above 2 it grows like the larger
    root of z^2 - lam z + 1.
    """
    lam = QuadNum(lam)
    if lam < 2:
        raise ValueError('profile needs an eigenvalue of at least 2')
    if k < 1:
        raise ValueError('need a positive length')
    prev, cur = _ZERO, _ONE
    out = []
    for _ in range(k):
        out.append(cur)
        prev, cur = cur, lam * cur - prev
    return tuple(out)


def spoke_threshold(lam) -> QuadNum:
    """The contraction bound (lam - sqrt(lam^2 - 4)) / 2.

    Away from hanging paths, no neighbor ratio of a positive
    eigenfunction drops below this value.
    """
    lam = QuadNum(lam)
    if lam < 2:
        raise ValueError('threshold needs an eigenvalue of at least 2')
    disc = lam * lam - 4
    if disc.is_rational:
        root = sqrt_rational(disc.as_fraction())
    else:
        root = quad_sqrt(disc)
    return (lam - root) / 2
