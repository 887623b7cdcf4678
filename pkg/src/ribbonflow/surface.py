"""The translation surface built from a ribbon graph and an eigenfunction.

Every edge e carries a rectangle of width w(beta(e)) and height
w(alpha(e)).  The right side of a rectangle is glued to the left side of
its east neighbor (rotation about the A-end), the top to the bottom of
its north neighbor (rotation about the B-end).  Horizontal cylinders are
the east-orbits, one per A-vertex; vertical cylinders the north-orbits,
one per B-vertex.  The eigen-relation makes every cylinder have inverse
modulus lam.

Relative homology classes are integer combinations of oriented rectangle
sides; z_class pairs them with cylinder cores, giving a vertex function,
and phi_homology is the shear action on classes.
"""

from __future__ import annotations

from .exact import QuadNum
from .freegrp import Letter, Word
from .graphs import RibbonGraph, SparseFun, pairing

_ZERO = QuadNum(0)


class Surface:
    """Rectangles over the edges of a graph, glued by the ribbon structure."""

    def __init__(self, graph: RibbonGraph, weight, lam):
        self.graph = graph
        self.weight = weight
        self.lam = QuadNum(lam)

    @classmethod
    def from_family(cls, family) -> 'Surface':
        return cls(family.graph, family.weight, family.lam)

    def width(self, e) -> QuadNum:
        return self.weight(self.graph.beta(e))

    def height(self, e) -> QuadNum:
        return self.weight(self.graph.alpha(e))

    def east(self, e):
        return self.graph.next_at_a(e)

    def west(self, e):
        return self.graph.prev_at_a(e)

    def north(self, e):
        return self.graph.next_at_b(e)

    def south(self, e):
        return self.graph.prev_at_b(e)

    def circle_edges(self, v) -> tuple:
        """The rotation orbit of the base edge at a vertex, in cyclic
        order.

        At an A-vertex these are the bottom edges making up the
        horizontal circle; at a B-vertex, the left edges of the vertical
        circle.
        """
        return self.graph.edges_at(v)

    def circle_length(self, v) -> QuadNum:
        return self.lam * self.weight(v)

    def edge_offsets(self, a) -> dict:
        """Left-endpoint coordinate of each bottom edge along the
        horizontal circle at an A-vertex."""
        out = {}
        t = _ZERO
        for e in self.circle_edges(a):
            out[e] = t
            t = t + self.width(e)
        return out

    def circle_defect(self, v) -> QuadNum:
        """Total crossing-edge length minus lam * w(v); zero iff the
        eigen-relation holds at v."""
        total = _ZERO
        for e in self.circle_edges(v):
            total = total + self.weight(self.graph.other_end(e, v))
        return total - self.circle_length(v)


class HomologyVec:
    """An integer combination of oriented rectangle sides.

    ('h', e) is the bottom edge of the rectangle over e, oriented
    rightward; ('v', e) is its left edge, oriented upward.  Tops and
    right sides are the same surface edges as their north/east
    neighbors' bottoms and lefts, so this indexing hits each edge once.
    """

    __slots__ = ('_data',)

    def __init__(self, data=()):
        store = {}
        for sym, c in (data.items() if isinstance(data, dict) else data):
            c = int(c)
            if c:
                store[sym] = store.get(sym, 0) + c
        self._data = {s: c for s, c in store.items() if c}

    @classmethod
    def horizontal(cls, e, k: int = 1) -> 'HomologyVec':
        return cls([(('h', e), k)])

    @classmethod
    def vertical(cls, e, k: int = 1) -> 'HomologyVec':
        return cls([(('v', e), k)])

    def items(self):
        return self._data.items()

    def __add__(self, other: 'HomologyVec') -> 'HomologyVec':
        out = dict(self._data)
        for s, c in other._data.items():
            out[s] = out.get(s, 0) + c
        return HomologyVec(out)

    def __sub__(self, other: 'HomologyVec') -> 'HomologyVec':
        return self + (-1) * other

    def __rmul__(self, k: int) -> 'HomologyVec':
        return HomologyVec([(s, k * c) for s, c in self._data.items()])

    def __eq__(self, other):
        if not isinstance(other, HomologyVec):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def __bool__(self):
        return bool(self._data)

    def __repr__(self):
        body = ', '.join('%r: %d' % (s, c) for s, c in
                         sorted(self._data.items(), key=repr))
        return 'HomologyVec({%s})' % body


def z_class(surface: Surface, h: HomologyVec) -> SparseFun:
    """Intersection numbers with cylinder cores, as a vertex function.

    A rightward bottom edge sits in the vertical cylinder of its
    B-vertex and crosses the core once positively; an upward left edge
    sits in the horizontal cylinder of its A-vertex and crosses
    negatively.
    """
    graph = surface.graph
    out = []
    for (kind, e), c in h.items():
        if kind == 'h':
            out.append((graph.beta(e), c))
        else:
            out.append((graph.alpha(e), -c))
    return SparseFun(out)


def xi_pair(surface: Surface, f, h: HomologyVec) -> QuadNum:
    """The holonomy-style pairing of a vertex function with a class."""
    return pairing(f, z_class(surface, h))


def _cylinder_class(surface: Surface, kind: str, v) -> HomologyVec:
    # core of the horizontal cylinder at an A-vertex is homologous to the
    # full circle of bottom edges; dually for vertical cylinders
    if kind == 'h':
        return HomologyVec([(('h', e), 1) for e in surface.graph.edges_at(v)])
    return HomologyVec([(('v', e), 1) for e in surface.graph.edges_at(v)])


def phi_letter(surface: Surface, letter: Letter,
               h: HomologyVec) -> HomologyVec:
    """One shear letter acting on homology: an h-power fixes horizontal
    classes and pushes vertical ones around their horizontal cylinder,
    and dually for v-powers."""
    graph = surface.graph
    out = HomologyVec()
    for (kind, e), c in h.items():
        out = out + HomologyVec([((kind, e), c)])
        if letter.gen == 'h' and kind == 'v':
            out = out + (c * letter.exp) * _cylinder_class(
                surface, 'h', graph.alpha(e))
        elif letter.gen == 'v' and kind == 'h':
            out = out + (c * letter.exp) * _cylinder_class(
                surface, 'v', graph.beta(e))
    return out


def phi_homology(surface: Surface, word: Word,
                 h: HomologyVec) -> HomologyVec:
    """The word action on classes, rightmost letter first."""
    for letter in reversed(tuple(word)):
        h = phi_letter(surface, letter, h)
    return h


def _svg_escape(s: str) -> str:
    return (s.replace('&', '&amp;').replace('<', '&lt;').replace('>', '&gt;'))


def svg_truncation(surface: Surface, center=None, radius: int = 3,
                   scale: float = 48.0) -> str:
    """A staircase-style SVG of the rectangles within a few east/north
    steps of a center edge.

    Rectangles are laid out so east neighbors sit to the right and north
    neighbors above.  Side pairs glued in the surface but not adjacent
    in the drawing get matching labels.
    """
    graph = surface.graph
    if center is None:
        center = graph.base_edge(graph.root())
    placed = {center: (_ZERO, _ZERO)}

    def collides(x2, y2, e2):
        w2, h2 = surface.width(e2), surface.height(e2)
        for e3, (x3, y3) in placed.items():
            if (x2 < x3 + surface.width(e3) and x3 < x2 + w2
                    and y2 < y3 + surface.height(e3) and y3 < y2 + h2):
                return True
        return False

    frontier = [center]
    for _ in range(radius):
        nxt = []
        for e in frontier:
            x, y = placed[e]
            moves = (
                (surface.east(e), x + surface.width(e), y),
                (surface.north(e), x, y + surface.height(e)),
                (surface.west(e), x - surface.width(surface.west(e)), y),
                (surface.south(e), x, y - surface.height(surface.south(e))),
            )
            for e2, x2, y2 in moves:
                if e2 not in placed and not collides(x2, y2, e2):
                    placed[e2] = (x2, y2)
                    nxt.append(e2)
        frontier = nxt

    order = sorted(placed, key=repr)
    # sides whose glued partner is drawn elsewhere get matching labels
    labels = {}
    counter = [0]

    def label_for(e, side, partner, pside):
        key = (e, side)
        if key in labels:
            return labels[key]
        counter[0] += 1
        name = str(counter[0])
        labels[key] = name
        labels[(partner, pside)] = name
        return name

    rects = []
    texts = []
    for e in order:
        x, y = placed[e]
        w, h = surface.width(e), surface.height(e)
        rects.append((float(x), float(y), float(w), float(h)))
        texts.append((float(x) + float(w) / 2, float(y) + float(h) / 2,
                      _svg_escape(str(e)), 'middle'))
        east = surface.east(e)
        if east in placed and placed[east] != (x + w, y):
            name = label_for(e, 'r', east, 'l')
            texts.append((float(x + w), float(y) + float(h) / 2,
                          name, 'end'))
        west = surface.west(e)
        if west in placed and placed[west] != (x - surface.width(west), y):
            name = label_for(west, 'r', e, 'l')
            texts.append((float(x), float(y) + float(h) / 2,
                          name, 'start'))
        north = surface.north(e)
        if north in placed and placed[north] != (x, y + h):
            name = label_for(e, 't', north, 'b')
            texts.append((float(x) + float(w) / 2, float(y + h),
                          name, 'middle'))
        south = surface.south(e)
        if south in placed and placed[south] != (x, y - surface.height(south)):
            name = label_for(south, 't', e, 'b')
            texts.append((float(x) + float(w) / 2, float(y),
                          name, 'middle'))

    xs = [r[0] for r in rects] + [r[0] + r[2] for r in rects]
    ys = [r[1] for r in rects] + [r[1] + r[3] for r in rects]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad = 0.5
    width = (x1 - x0 + 2 * pad) * scale
    height = (y1 - y0 + 2 * pad) * scale

    def sx(x):
        return (x - x0 + pad) * scale

    def sy(y):
        # svg y axis points down
        return (y1 - y + pad) * scale

    out = ['<svg xmlns="http://www.w3.org/2000/svg" '
           'width="%.1f" height="%.1f" viewBox="0 0 %.1f %.1f">'
           % (width, height, width, height)]
    out.append('<g fill="none" stroke="black" stroke-width="1">')
    for x, y, w, h in rects:
        out.append('<rect x="%.2f" y="%.2f" width="%.2f" height="%.2f"/>'
                   % (sx(x), sy(y + h), w * scale, h * scale))
    out.append('</g>')
    out.append('<g font-family="monospace" font-size="%.1f" fill="black">'
               % (scale / 4))
    for x, y, s, anchor in texts:
        out.append('<text x="%.2f" y="%.2f" text-anchor="%s">%s</text>'
                   % (sx(x), sy(y), anchor, s))
    out.append('</g>')
    out.append('</svg>')
    return '\n'.join(out)


def ball_growth(graph: RibbonGraph, weight, lam, root, n_max: int):
    """Boundary lengths and largest rectangle sides of the nested
    cylinder unions grown from one A-vertex.

    Layer 0 is the root's horizontal cylinder; layer n collects the
    cylinders of all neighbors of layer n-1, alternating between
    vertical and horizontal.  Returns (lengths, max_sides), each a tuple
    of n_max + 1 exact values; lengths obey
    length[n+1] <= lam * length[n] - length[n-1], with equality on
    trees.
    """
    if graph.vertex_class(root) != 'a':
        raise ValueError('growth layers start from an A-vertex')
    lam = QuadNum(lam)
    lengths = []
    max_sides = []
    layer = {root}
    for n in range(n_max + 1):
        if n:
            layer = {w for v in layer for w in graph.neighbors(v)}
        rect = set()
        for v in layer:
            rect.update(graph.edges_at(v))
        boundary = _ZERO
        widest = _ZERO
        for e in rect:
            width = QuadNum(weight(graph.beta(e)))
            height = QuadNum(weight(graph.alpha(e)))
            if graph.next_at_b(e) not in rect:
                boundary = boundary + width
            if graph.prev_at_b(e) not in rect:
                boundary = boundary + width
            if graph.next_at_a(e) not in rect:
                boundary = boundary + height
            if graph.prev_at_a(e) not in rect:
                boundary = boundary + height
            side = width if width > height else height
            if side > widest:
                widest = side
        lengths.append(boundary)
        max_sides.append(widest)
    return tuple(lengths), tuple(max_sides)
