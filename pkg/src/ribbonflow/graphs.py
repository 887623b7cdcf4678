"""Bipartite ribbon graphs and the operator calculus on vertex functions.

Graphs are lazy and label-based: a vertex or edge is a small hashable tuple
whose structure (class, incident edges, endpoints) is computed on demand, so
infinite families cost nothing until walked.  Every edge joins an A-vertex
to a B-vertex, and each vertex carries a cyclic order on its incident edges;
the two rotations (about the A-end and about the B-end) are what the surface
construction consumes.

Vertex functions come in two flavors: exact sparse dictionaries with finite
support, and closed-form oracles.  All operators here (adjacency, the shears
H and V, their word action, and the perturbed action) keep sparse functions
sparse and exact.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections import deque
from typing import Callable, Iterable

from .exact import QuadNum
from .freegrp import Letter, Word, gamma


class RibbonGraph(ABC):
    """A connected bipartite graph with cyclically ordered edge ends."""

    @abstractmethod
    def vertex_class(self, v) -> str:
        """'a' or 'b'."""

    @abstractmethod
    def edges_at(self, v) -> tuple:
        """Incident edges in cyclic order."""

    @abstractmethod
    def alpha(self, e):
        """The A-endpoint of the edge."""

    @abstractmethod
    def beta(self, e):
        """The B-endpoint of the edge."""

    def endpoints(self, e) -> tuple:
        return self.alpha(e), self.beta(e)

    def other_end(self, e, v):
        a, b = self.alpha(e), self.beta(e)
        if v == a:
            return b
        if v == b:
            return a
        raise ValueError('%r is not an endpoint of %r' % (v, e))

    def _rotate(self, e, v, step: int):
        edges = self.edges_at(v)
        i = edges.index(e)
        return edges[(i + step) % len(edges)]

    def next_at_a(self, e):
        """One step counterclockwise about the A-end."""
        return self._rotate(e, self.alpha(e), 1)

    def prev_at_a(self, e):
        return self._rotate(e, self.alpha(e), -1)

    def next_at_b(self, e):
        """One step counterclockwise about the B-end."""
        return self._rotate(e, self.beta(e), 1)

    def prev_at_b(self, e):
        return self._rotate(e, self.beta(e), -1)

    def base_edge(self, v):
        return self.edges_at(v)[0]

    def root(self):
        """A canonical starting vertex for walks and truncations."""
        raise NotImplementedError('family has no canonical root')

    def neighbors(self, v) -> tuple:
        """Adjacent vertices in cyclic order, with multiplicity."""
        return tuple(self.other_end(e, v) for e in self.edges_at(v))

    def valence(self, v) -> int:
        return len(self.edges_at(v))


def vertices_in_ball(graph: RibbonGraph, root, radius: int) -> set:
    """All vertices within the given graph distance of the root."""
    seen = {root}
    frontier = deque([(root, 0)])
    while frontier:
        v, d = frontier.popleft()
        if d == radius:
            continue
        for w in graph.neighbors(v):
            if w not in seen:
                seen.add(w)
                frontier.append((w, d + 1))
    return seen


def edges_incident(graph: RibbonGraph, vertices: Iterable) -> set:
    """All edges touching the vertex set."""
    out = set()
    for v in vertices:
        out.update(graph.edges_at(v))
    return out


class PathGraph(RibbonGraph):
    """The two-sided infinite path on the integers; even vertices are A.

    Edge n joins vertices n and n + 1.
    """

    def root(self):
        return 0

    def vertex_class(self, v) -> str:
        return 'a' if v % 2 == 0 else 'b'

    def edges_at(self, v) -> tuple:
        return (v - 1, v)

    def alpha(self, e):
        return e if e % 2 == 0 else e + 1

    def beta(self, e):
        return e + 1 if e % 2 == 0 else e


class TripodGraph(RibbonGraph):
    """Three rays joined at a central A-vertex.

    Vertices: ('c',) and ('r', i, k) for ray i in {0,1,2} and k >= 1.
    Edge ('e', i, k) joins position k-1 to position k along ray i.
    """

    def root(self):
        return ('c',)

    def vertex_class(self, v) -> str:
        if v == ('c',):
            return 'a'
        return 'b' if v[2] % 2 == 1 else 'a'

    def edges_at(self, v) -> tuple:
        if v == ('c',):
            return (('e', 0, 1), ('e', 1, 1), ('e', 2, 1))
        _, i, k = v
        return (('e', i, k), ('e', i, k + 1))

    def _endpoint(self, e, offset):
        _, i, k = e
        k += offset
        return ('c',) if k == 0 else ('r', i, k)

    def alpha(self, e):
        return self._endpoint(e, -1 if e[2] % 2 == 1 else 0)

    def beta(self, e):
        return self._endpoint(e, 0 if e[2] % 2 == 1 else -1)


class RegularTree(RibbonGraph):
    """The infinite tree with constant valence n >= 2.

    Vertices are tuples of child indices from the root (); class is the
    parity of the depth.  The edge to a vertex from its parent is labeled
    by the child vertex.
    """

    def __init__(self, n: int):
        if n < 2:
            raise ValueError('valence must be at least 2')
        self.n = n

    def root(self):
        return ()

    def vertex_class(self, v) -> str:
        return 'a' if len(v) % 2 == 0 else 'b'

    def edges_at(self, v) -> tuple:
        down = tuple(('e', v + (j,)) for j in
                     range(self.n if v == () else self.n - 1))
        if v == ():
            return down
        return (('e', v),) + down

    def alpha(self, e):
        child = e[1]
        return child if len(child) % 2 == 0 else child[:-1]

    def beta(self, e):
        child = e[1]
        return child if len(child) % 2 == 1 else child[:-1]


class Group(ABC):
    """A countable group with hashable canonical element encodings."""

    @property
    @abstractmethod
    def identity(self): ...

    @abstractmethod
    def op(self, a, b): ...

    @abstractmethod
    def inv(self, a): ...


class IntegersZ(Group):
    identity = 0

    def op(self, a, b):
        return a + b

    def inv(self, a):
        return -a


class Cyclic(Group):
    def __init__(self, m: int):
        if m < 1:
            raise ValueError('order must be positive')
        self.m = m

    identity = 0

    def op(self, a, b):
        return (a + b) % self.m

    def inv(self, a):
        return (-a) % self.m


class IntegerLattice(Group):
    """Z^d with componentwise addition on d-tuples."""

    def __init__(self, d: int):
        if d < 1:
            raise ValueError('rank must be positive')
        self.d = d

    @property
    def identity(self):
        return (0,) * self.d

    def op(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)


class Heisenberg(Group):
    """Integer triples with (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x*y')."""

    identity = (0, 0, 0)

    def op(self, a, b):
        return (a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1])

    def inv(self, a):
        return (-a[0], -a[1], -a[2] + a[0] * a[1])


class FreeGroup(Group):
    """Free group on k letters; elements are reduced tuples of nonzero
    signed indices in {-k..-1, 1..k}."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError('rank must be positive')
        self.k = k

    identity = ()

    def op(self, a, b):
        out = list(a)
        for s in b:
            if out and out[-1] == -s:
                out.pop()
            else:
                out.append(s)
        return tuple(out)

    def inv(self, a):
        return tuple(-s for s in reversed(a))


class SkewGraph(RibbonGraph):
    """The ribbon graph of a group with a cyclically trivial generator tuple.

    Generators (g_1, ..., g_n) must compose to the identity as g_n...g_1.
    A-vertices ('a', g) and B-vertices ('b', g) are indexed by the group;
    edge ('e', g, i), i = 1..n, joins a at eta_i * g to b at g, where
    eta_1 = e and eta_i = g_{i-1}...g_1.  The cyclic order at a B-vertex is
    the tuple position; at an A-vertex it is the eta index.
    """

    def __init__(self, group: Group, generators):
        self.group = group
        self.generators = tuple(generators)
        n = len(self.generators)
        if n < 1:
            raise ValueError('need at least one generator')
        acc = group.identity
        etas = []
        for gen in self.generators:
            etas.append(acc)
            acc = group.op(gen, acc)
        if acc != group.identity:
            raise ValueError('generator product g_n...g_1 is not the identity')
        self.etas = tuple(etas)  # etas[i-1] = eta_i
        self.n = n

    def root(self):
        return ('a', self.group.identity)

    def vertex_class(self, v) -> str:
        return v[0]

    def edges_at(self, v) -> tuple:
        kind, g = v
        if kind == 'b':
            return tuple(('e', g, i) for i in range(1, self.n + 1))
        inv = self.group.inv
        op = self.group.op
        return tuple(('e', op(inv(self.etas[i - 1]), g), i)
                     for i in range(1, self.n + 1))

    def alpha(self, e):
        _, g, i = e
        return ('a', self.group.op(self.etas[i - 1], g))

    def beta(self, e):
        _, g, i = e
        return ('b', g)


_GROUPS = {
    'Z': lambda **kw: IntegersZ(),
    'Z^d': lambda d, **kw: IntegerLattice(d),
    'cyclic': lambda m, **kw: Cyclic(m),
    'free': lambda k, **kw: FreeGroup(k),
    'heisenberg': lambda **kw: Heisenberg(),
}


def make_group(name: str, **params) -> Group:
    if name not in _GROUPS:
        raise ValueError('unknown group %r' % name)
    return _GROUPS[name](**params)


def make_family(name: str, **params) -> RibbonGraph:
    """Build a graph family by name: gz, tripod, ntree, skew."""
    if name == 'gz':
        return PathGraph()
    if name == 'tripod':
        return TripodGraph()
    if name == 'ntree':
        return RegularTree(params['n'])
    if name == 'skew':
        group = params.get('group')
        if isinstance(group, str):
            group = make_group(group, **params.get('group_params', {}))
        gens = [tuple(g) if isinstance(g, list) else g
                for g in params['generators']]
        return SkewGraph(group, gens)
    raise ValueError('unknown family %r' % name)


class SparseFun:
    """An exact, finitely supported vertex function."""

    __slots__ = ('_data',)

    def __init__(self, data=()):
        store = {}
        for v, val in (data.items() if isinstance(data, dict) else data):
            val = val if isinstance(val, QuadNum) else QuadNum(val)
            if val:
                store[v] = store.get(v, QuadNum(0)) + val
        self._data = {v: c for v, c in store.items() if c}

    @classmethod
    def basis(cls, v) -> 'SparseFun':
        return cls([(v, 1)])

    @classmethod
    def zero(cls) -> 'SparseFun':
        return cls()

    def support(self) -> frozenset:
        return frozenset(self._data)

    def items(self):
        return self._data.items()

    def __call__(self, v) -> QuadNum:
        return self._data.get(v, QuadNum(0))

    def __add__(self, other: 'SparseFun') -> 'SparseFun':
        out = dict(self._data)
        for v, c in other._data.items():
            out[v] = out.get(v, QuadNum(0)) + c
        return SparseFun(out)

    def __sub__(self, other: 'SparseFun') -> 'SparseFun':
        return self + (-1) * other

    def __rmul__(self, scalar) -> 'SparseFun':
        return SparseFun([(v, scalar * c) for v, c in self._data.items()])

    def __eq__(self, other):
        if not isinstance(other, SparseFun):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def __bool__(self):
        return bool(self._data)

    def __repr__(self):
        body = ', '.join('%r: %s' % (v, c) for v, c in sorted(
            self._data.items(), key=repr))
        return 'SparseFun({%s})' % body


class OracleFun:
    """A vertex function given by a closed form."""

    __slots__ = ('_fn',)

    def __init__(self, fn: Callable):
        self._fn = fn

    def __call__(self, v) -> QuadNum:
        out = self._fn(v)
        return out if isinstance(out, QuadNum) else QuadNum(out)


def project_class(graph: RibbonGraph, x: SparseFun, cls: str) -> SparseFun:
    """Restrict a sparse function to the A- or B-vertices."""
    return SparseFun([(v, c) for v, c in x.items()
                      if graph.vertex_class(v) == cls])


def adjacency(graph: RibbonGraph, x: SparseFun) -> SparseFun:
    """A(x)(v) = sum of x over the neighbors of v, with multiplicity."""
    out: list = []
    for v, c in x.items():
        for w in graph.neighbors(v):
            out.append((w, c))
    return SparseFun(out)


def pairing(f, x: SparseFun) -> QuadNum:
    """Sum of x(v) * f(v) over the support of x."""
    total = QuadNum(0)
    for v, c in x.items():
        total = total + c * f(v)
    return total


def _shear(graph: RibbonGraph, letter: Letter, x: SparseFun) -> SparseFun:
    cls = 'a' if letter.gen == 'h' else 'b'
    bump = project_class(graph, adjacency(graph, x), cls)
    return x + letter.exp * bump


def upsilon(graph: RibbonGraph, word: Word, x: SparseFun) -> SparseFun:
    """The word action generated by h -> H and v -> V, rightmost first.

    One letter sends x to x +- (the class-projected adjacency image), so
    support grows by at most one ball per letter and stays finite.
    """
    for letter in reversed(tuple(word)):
        x = _shear(graph, letter, x)
    return x


def upsilon_eval(graph: RibbonGraph, word: Word, f, v) -> QuadNum:
    """Value of the word action on a (possibly non-compact) function.

    Uses the adjoint identity: the action of g on f, evaluated at v, pairs
    f against the action of gamma(g^{-1}) on the basis function at v.
    """
    dual = upsilon(graph, gamma(word.inverse()), SparseFun.basis(v))
    return pairing(f, dual)


def chi(graph: RibbonGraph, y: SparseFun, word: Word,
        z: SparseFun) -> SparseFun:
    """The y-perturbed word action applied to z, rightmost letter first.

    Each h-letter adds its exponent times the A-part of y after shearing,
    each v-letter the B-part.
    """
    for letter in reversed(tuple(word)):
        cls = 'a' if letter.gen == 'h' else 'b'
        z = _shear(graph, letter, z) + \
            letter.exp * project_class(graph, y, cls)
    return z
