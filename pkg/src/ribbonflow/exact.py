"""Exact arithmetic in real quadratic fields, with small vectors and matrices.

Every scalar is a number a + b*sqrt(d) with rational a, b and a fixed
squarefree integer d >= 0.  All operations are exact: no floats enter any
computation unless the caller explicitly asks for one.  Mixing two scalars
from genuinely different fields raises :class:`FieldMixError`; rational
scalars (b == 0) are compatible with every field.
"""

from __future__ import annotations

import math
import re
from enum import Enum
from fractions import Fraction
from functools import total_ordering


class FieldMixError(ArithmeticError):
    """Arithmetic attempted between scalars of two different quadratic fields."""


def _square_split(n: int) -> tuple[int, int]:
    """Return (s, d) with n = s*s*d and d squarefree, for n >= 1."""
    s, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            s *= p ** (k // 2)
            if k % 2:
                d *= p
        p += 1 if p == 2 else 2
    return s, d * m


@total_ordering
class QuadNum:
    """An exact element a + b*sqrt(d) of the real quadratic field Q(sqrt(d)).

    The representation is canonical: d is squarefree, and d == 0 whenever
    b == 0.  Construction accepts ints, Fractions and textual forms like
    ``"3-2*sqrt(2)"`` (see :func:`parse_quad`).
    """

    __slots__ = ('_a', '_b', '_d')

    def __init__(self, a=0, b=0, d: int = 0):
        if isinstance(a, str):
            if b != 0 or d != 0:
                raise ValueError('textual form takes no extra arguments')
            a, b, d = _parse_components(a)
        elif isinstance(a, QuadNum):
            if b != 0 or d != 0:
                raise ValueError('copy construction takes no extra arguments')
            a, b, d = a._a, a._b, a._d
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if d < 0:
            raise ValueError('imaginary fields are not supported')
        if d in (0, 1):
            a += b * d
            b = Fraction(0)
            d = 0
        elif b == 0:
            d = 0
        else:
            s, sf = _square_split(d)
            if sf == 1:
                a += b * s
                b = Fraction(0)
                d = 0
            else:
                b *= s
                d = sf
        self._a = a
        self._b = b
        self._d = d

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, d: int) -> 'QuadNum':
        # arithmetic fast path: a, b are Fractions and d is already
        # squarefree, so only the b == 0 collapse needs enforcing
        out = object.__new__(cls)
        out._a = a
        out._b = b
        out._d = d if b else 0
        return out

    @property
    def rational_part(self) -> Fraction:
        return self._a

    @property
    def radical_part(self) -> Fraction:
        return self._b

    @property
    def field_disc(self) -> int:
        """The squarefree d, or 0 for rationals."""
        return self._d

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    def as_fraction(self) -> Fraction:
        if self._b != 0:
            raise ValueError('%s is irrational' % self)
        return self._a

    def _field_with(self, other: 'QuadNum') -> int:
        if self._d == other._d:
            return self._d
        if self._d == 0:
            return other._d
        if other._d == 0:
            return self._d
        raise FieldMixError(
            'cannot combine sqrt(%d) with sqrt(%d)' % (self._d, other._d))

    @staticmethod
    def _lift(value) -> 'QuadNum | None':
        if isinstance(value, QuadNum):
            return value
        if isinstance(value, (int, Fraction)):
            return QuadNum(value)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self._field_with(o)
        return QuadNum._make(self._a + o._a, self._b + o._b, d)

    __radd__ = __add__

    def __neg__(self) -> 'QuadNum':
        return QuadNum._make(-self._a, -self._b, self._d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self._field_with(o)
        return QuadNum._make(self._a - o._a, self._b - o._b, d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self._field_with(o)
        return QuadNum._make(self._a * o._a + self._b * o._b * d,
                             self._a * o._b + self._b * o._a, d)

    __rmul__ = __mul__

    def inverse(self) -> 'QuadNum':
        n = self._a * self._a - self._b * self._b * self._d
        if n == 0:
            raise ZeroDivisionError('division by zero')
        return QuadNum._make(self._a / n, -self._b / n, self._d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conjugate(self) -> 'QuadNum':
        """The Galois conjugate a - b*sqrt(d)."""
        return QuadNum._make(self._a, -self._b, self._d)

    def field_norm(self) -> Fraction:
        """a**2 - b**2 * d, the product with the Galois conjugate."""
        return self._a * self._a - self._b * self._b * self._d

    def sign(self) -> int:
        a, b = self._a, self._b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: |a| vs |b|*sqrt(d) decided by squaring
        lhs, rhs = a * a, b * b * self._d
        if lhs == rhs:
            return 0
        winner = a if lhs > rhs else b
        return 1 if winner > 0 else -1

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self._a, self._b, self._d) == (o._a, o._b, o._d)

    def __lt__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def __abs__(self) -> 'QuadNum':
        return -self if self.sign() < 0 else QuadNum(self)

    def __float__(self) -> float:
        return float(self._a) + float(self._b) * math.sqrt(self._d)

    def __floor__(self) -> int:
        if self._b == 0:
            return math.floor(self._a)
        n = math.floor(float(self))
        # float was only an estimate; fix it exactly
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def __mod__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.sign() <= 0:
            raise ValueError('modulus must be positive')
        return self - math.floor(self / o) * o

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        root = 'sqrt(%d)' % self._d
        mag = abs(self._b)
        term = root if mag == 1 else '%s*%s' % (mag, root)
        if self._a == 0:
            return term if self._b > 0 else '-' + term
        return '%s%s%s' % (self._a, '+' if self._b > 0 else '-', term)

    def __repr__(self) -> str:
        return "QuadNum('%s')" % self


_ROOT_PART = r'(?:(?P<b>\d+(?:\s*/\s*\d+)?)\s*\*\s*)?sqrt\(\s*(?P<d>\d+)\s*\)'
# when a rational term is present the sign separating the terms is mandatory
_BOTH_RE = re.compile(
    r'^\s*(?P<a>[+-]?\s*\d+(?:\s*/\s*\d+)?)\s*'
    r'(?:(?P<sign>[+-])\s*' + _ROOT_PART + r')?\s*$')
_ROOT_RE = re.compile(r'^\s*(?P<sign>[+-])?\s*' + _ROOT_PART + r'\s*$')


def _parse_components(text: str) -> tuple[Fraction, Fraction, int]:
    m = _BOTH_RE.match(text) or _ROOT_RE.match(text)
    if m is None:
        raise ValueError('cannot parse %r as a quadratic number' % text)
    groups = m.groupdict()
    a_s = groups.get('a')
    sign, b_s, d_s = groups['sign'], groups['b'], groups['d']
    a = Fraction(a_s.replace(' ', '')) if a_s is not None else Fraction(0)
    if d_s is None:
        return a, Fraction(0), 0
    b = Fraction(b_s.replace(' ', '')) if b_s is not None else Fraction(1)
    if sign == '-':
        b = -b
    return a, b, int(d_s)


def parse_quad(text: str) -> QuadNum:
    """Parse textual forms like ``"3"``, ``"-1/2"``, ``"3-2*sqrt(2)"``.

    Inverse of ``str`` on :class:`QuadNum`.
    """
    return QuadNum(text)


def sqrt_rational(q) -> QuadNum:
    """Exact square root of a nonnegative rational, as a QuadNum."""
    q = Fraction(q)
    if q < 0:
        raise ValueError('square root of a negative number')
    if q == 0:
        return QuadNum(0)
    s, d = _square_split(q.numerator * q.denominator)
    # sqrt(p/r) = sqrt(p*r)/r = s*sqrt(d)/r
    if d == 1:
        return QuadNum(Fraction(s, q.denominator))
    return QuadNum(0, Fraction(s, q.denominator), d)


def quad_sqrt(x: QuadNum) -> QuadNum:
    """Square root of x staying inside degree <= 2 over the rationals.

    For rational x this always succeeds (possibly landing in a new field).
    For irrational x = a + b*sqrt(d) it succeeds only when x is a perfect
    square inside Q(sqrt(d)); otherwise the root would generate a degree-4
    extension and ValueError is raised.
    """
    x = QuadNum(x) if not isinstance(x, QuadNum) else x
    if x.sign() < 0:
        raise ValueError('square root of a negative number')
    if x.is_rational:
        return sqrt_rational(x.as_fraction())
    a, b, d = x._a, x._b, x._d
    # want (c + e*sqrt(d))**2 = x: c*c + e*e*d = a and 2*c*e = b
    norm = a * a - b * b * d
    root_norm = sqrt_rational(norm) if norm >= 0 else None
    if root_norm is None or not root_norm.is_rational:
        raise ValueError('%s has no square root in its own field' % x)
    n = root_norm.as_fraction()
    for c_sq in ((a + n) / 2, (a - n) / 2):
        if c_sq <= 0:
            continue
        c_root = sqrt_rational(c_sq)
        if not c_root.is_rational:
            continue
        c = c_root.as_fraction()
        e = b / (2 * c)
        cand = QuadNum(c, e, d)
        if cand * cand == x:
            return cand if cand.sign() > 0 else -cand
    raise ValueError('%s has no square root in its own field' % x)


class SignPair(Enum):
    """A pair of strict signs, one per coordinate, naming an open quadrant."""

    PP = (1, 1)
    PM = (1, -1)
    MP = (-1, 1)
    MM = (-1, -1)

    @property
    def sx(self) -> int:
        return self.value[0]

    @property
    def sy(self) -> int:
        return self.value[1]

    @classmethod
    def from_signs(cls, sx: int, sy: int) -> 'SignPair':
        return cls((sx, sy))

    def rotate(self) -> 'SignPair':
        """Image under the quarter turn (x, y) -> (-y, x)."""
        return SignPair((-self.sy, self.sx))

    def opposite(self) -> 'SignPair':
        return SignPair((-self.sx, -self.sy))

    def __str__(self) -> str:
        return ('+' if self.sx > 0 else '-') + ('+' if self.sy > 0 else '-')

    @classmethod
    def from_str(cls, text: str) -> 'SignPair':
        if len(text) != 2 or any(ch not in '+-' for ch in text):
            raise ValueError('expected two signs, got %r' % text)
        return cls((1 if text[0] == '+' else -1, 1 if text[1] == '+' else -1))


class QVec2:
    """A column vector with two QuadNum entries."""

    __slots__ = ('x', 'y')

    def __init__(self, x, y):
        self.x = x if isinstance(x, QuadNum) else QuadNum(x)
        self.y = y if isinstance(y, QuadNum) else QuadNum(y)

    def __add__(self, other: 'QVec2') -> 'QVec2':
        return QVec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: 'QVec2') -> 'QVec2':
        return QVec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> 'QVec2':
        return QVec2(-self.x, -self.y)

    def __rmul__(self, scalar) -> 'QVec2':
        return QVec2(scalar * self.x, scalar * self.y)

    def __eq__(self, other):
        if not isinstance(other, QVec2):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def dot(self, other: 'QVec2') -> QuadNum:
        return self.x * other.x + self.y * other.y

    def wedge(self, other: 'QVec2') -> QuadNum:
        """The determinant of the 2x2 matrix with columns (self, other)."""
        return self.x * other.y - self.y * other.x

    def norm_sq(self) -> QuadNum:
        return self.dot(self)

    def is_parallel(self, other: 'QVec2') -> bool:
        return self.wedge(other) == QuadNum(0)

    def quadrant(self) -> 'SignPair | None':
        """The open quadrant containing the vector, or None on an axis."""
        sx, sy = self.x.sign(), self.y.sign()
        if sx == 0 or sy == 0:
            return None
        return SignPair.from_signs(sx, sy)

    def __str__(self) -> str:
        return '(%s, %s)' % (self.x, self.y)

    def __repr__(self) -> str:
        return 'QVec2(%r, %r)' % (self.x, self.y)


class QMat2:
    """A 2x2 matrix with QuadNum entries, stored row-major."""

    __slots__ = ('a', 'b', 'c', 'd')

    def __init__(self, a, b, c, d):
        self.a = a if isinstance(a, QuadNum) else QuadNum(a)
        self.b = b if isinstance(b, QuadNum) else QuadNum(b)
        self.c = c if isinstance(c, QuadNum) else QuadNum(c)
        self.d = d if isinstance(d, QuadNum) else QuadNum(d)

    @classmethod
    def identity(cls) -> 'QMat2':
        return cls(1, 0, 0, 1)

    def __mul__(self, other):
        if isinstance(other, QMat2):
            return QMat2(self.a * other.a + self.b * other.c,
                         self.a * other.b + self.b * other.d,
                         self.c * other.a + self.d * other.c,
                         self.c * other.b + self.d * other.d)
        if isinstance(other, QVec2):
            return self.apply(other)
        return NotImplemented

    def apply(self, v: QVec2) -> QVec2:
        return QVec2(self.a * v.x + self.b * v.y,
                     self.c * v.x + self.d * v.y)

    def __eq__(self, other):
        if not isinstance(other, QMat2):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def det(self) -> QuadNum:
        return self.a * self.d - self.b * self.c

    def trace(self) -> QuadNum:
        return self.a + self.d

    def transpose(self) -> 'QMat2':
        return QMat2(self.a, self.c, self.b, self.d)

    def inverse(self) -> 'QMat2':
        det = self.det()
        if not det:
            raise ZeroDivisionError('matrix is singular')
        inv = det.inverse()
        return QMat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def inverse_transpose(self) -> 'QMat2':
        return self.inverse().transpose()

    def __pow__(self, n: int) -> 'QMat2':
        if n < 0:
            return self.inverse() ** (-n)
        out = QMat2.identity()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self) -> str:
        return '[[%s, %s], [%s, %s]]' % (self.a, self.b, self.c, self.d)

    def __repr__(self) -> str:
        return 'QMat2(%r, %r, %r, %r)' % (self.a, self.b, self.c, self.d)
