"""Greedy renormalization of directions under the rank-2 shear group.

A direction is repeatedly shrunk by the unique generator that strictly
decreases its length, producing a geodesic ray in the group together with a
quadrant (sign) sequence and its critical times.  Rays whose tails are
constant, or alternate between h and v^-1 (or between h^-1 and v), do not
renormalize; everything here classifies directions and sequences against
those exclusions in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .exact import QMat2, QuadNum, QVec2, SignPair, quad_sqrt
from .freegrp import H, H_INV, LETTERS, V, V_INV, Letter, Word, rho, rho_letter


def _as_quad(value) -> QuadNum:
    return value if isinstance(value, QuadNum) else QuadNum(value)


def _as_vec(value) -> QVec2:
    if isinstance(value, QVec2):
        return value
    x, y = value
    return QVec2(x, y)


def shrink_membership(lam, letter: Letter, theta) -> bool:
    """Whether the generator strictly shrinks the vector (norm route)."""
    theta = _as_vec(theta)
    if not (theta.x or theta.y):
        raise ValueError('zero vector has no direction')
    image = rho_letter(lam, letter).apply(theta)
    return (image.norm_sq() - theta.norm_sq()).sign() < 0


def shrink_membership_slope(lam, letter: Letter, theta) -> bool:
    """Whether the vector's slope lies in the generator's shrinking interval.

    Independent route kept alongside :func:`shrink_membership`; the two must
    agree everywhere (axes belong to no shrinking interval).
    """
    theta = _as_vec(theta)
    if not (theta.x or theta.y):
        raise ValueError('zero vector has no direction')
    lam = _as_quad(lam)
    if theta.x.sign() == 0:
        return False
    slope = theta.y / theta.x
    zero = QuadNum(0)
    if letter == H:
        return -2 / lam < slope < zero
    if letter == H_INV:
        return zero < slope < 2 / lam
    if letter == V:
        return slope < -lam / 2
    if letter == V_INV:
        return slope > lam / 2
    raise ValueError('bad letter %r' % (letter,))


def shrink_cone(lam, letter: Letter) -> tuple[QVec2, QVec2]:
    """Boundary direction vectors of the generator's shrinking cone.

    Returned as (lo, hi) with the open cone between them (modulo the
    antipodal map) equal to the shrinking set of the generator.
    """
    lam = _as_quad(lam)
    if letter == H:
        return QVec2(lam, -2), QVec2(1, 0)
    if letter == H_INV:
        return QVec2(1, 0), QVec2(lam, 2)
    if letter == V:
        return QVec2(2, -lam), QVec2(0, -1)
    if letter == V_INV:
        return QVec2(2, lam), QVec2(0, 1)
    raise ValueError('bad letter %r' % (letter,))


class TailStatus(Enum):
    CONTINUES = 'continues'
    NO_STRICT_SHRINKER = 'no-strict-shrinker'
    PERIODIC = 'periodic'
    EXCLUDED_TAIL = 'excluded-tail'


@dataclass(frozen=True)
class ShrinkData:
    """A greedy shrinking prefix of one direction.

    vectors[n] is the image of theta after the first n increments, so
    vectors has one more entry than increments.  signs[n] is its open
    quadrant, or None on an axis.  period, when set, is (start, length) of
    an exact projective revisit; excluded_id names the non-renormalizing
    tail family when status is EXCLUDED_TAIL.
    """

    lam: QuadNum
    theta: QVec2
    increments: tuple[Letter, ...]
    vectors: tuple[QVec2, ...]
    signs: tuple
    status: TailStatus
    period: tuple[int, int] | None = None
    excluded_id: str | None = None

    def group_element(self, n: int) -> Word:
        """The ray element after n increments, as a reduced word."""
        return Word(reversed(self.increments[:n]))

    def __len__(self) -> int:
        return len(self.increments)


def _canonical_projective(v: QVec2):
    if v.y.sign() != 0:
        return (v.x / v.y, None)
    return (None, QuadNum(1))


def _cyclic_excluded_id(period_letters: Sequence[Letter]) -> str | None:
    letters = tuple(period_letters)
    if not letters:
        return None
    if all(l == letters[0] for l in letters):
        return str(letters[0])
    for pair, name in (((H, V_INV), 'h v^-1'), ((H_INV, V), 'h^-1 v')):
        if set(letters) == set(pair) and len(letters) % 2 == 0:
            if all(letters[i] != letters[(i + 1) % len(letters)]
                   for i in range(len(letters))):
                return name
    return None


def shrinking_sequence(lam, theta, max_steps: int = 64) -> ShrinkData:
    """Greedily shrink a direction, stopping on a terminal configuration.

    At each step at most one generator strictly shrinks the current vector;
    it is applied and recorded.  Stops early only when no generator shrinks.
    An exact projective revisit is recorded as a period and classified as an
    excluded tail when the period word is a constant or one of the two
    alternating families, but iteration continues to max_steps so the
    returned prefix is usable at full length.
    """
    lam = _as_quad(lam)
    theta = _as_vec(theta)
    if not (theta.x or theta.y):
        raise ValueError('zero vector has no direction')
    increments: list[Letter] = []
    vectors = [theta]
    signs = [theta.quadrant()]
    seen = {_canonical_projective(theta): 0}
    status = TailStatus.CONTINUES
    period = None
    excluded_id = None
    current = theta
    for n in range(max_steps):
        shrinkers = [l for l in LETTERS if shrink_membership(lam, l, current)]
        if not shrinkers:
            status = TailStatus.NO_STRICT_SHRINKER
            break
        if len(shrinkers) > 1:
            raise ArithmeticError(
                'two generators shrink %s at once' % current)
        letter = shrinkers[0]
        current = rho_letter(lam, letter).apply(current)
        increments.append(letter)
        vectors.append(current)
        signs.append(current.quadrant())
        if period is None:
            key = _canonical_projective(current)
            if key in seen:
                start = seen[key]
                period = (start, n + 1 - start)
                excluded_id = _cyclic_excluded_id(increments[start:])
            else:
                seen[key] = n + 1
    if status is TailStatus.CONTINUES and period is not None:
        status = (TailStatus.EXCLUDED_TAIL if excluded_id
                  else TailStatus.PERIODIC)
    return ShrinkData(lam=lam, theta=theta, increments=tuple(increments),
                      vectors=tuple(vectors), signs=tuple(signs),
                      status=status, period=period, excluded_id=excluded_id)


# quadrants a generator can shrink, and where it can send them
_ADMISSIBLE = {
    H: (SignPair.PM, SignPair.MP),
    V: (SignPair.PM, SignPair.MP),
    H_INV: (SignPair.PP, SignPair.MM),
    V_INV: (SignPair.PP, SignPair.MM),
}
_TRANSITIONS = {
    (SignPair.PM, H): {SignPair.PM, SignPair.MM},
    (SignPair.MP, H): {SignPair.PP, SignPair.MP},
    (SignPair.PM, V): {SignPair.PP, SignPair.PM},
    (SignPair.MP, V): {SignPair.MP, SignPair.MM},
    (SignPair.PP, H_INV): {SignPair.PP, SignPair.MP},
    (SignPair.MM, H_INV): {SignPair.PM, SignPair.MM},
    (SignPair.PP, V_INV): {SignPair.PP, SignPair.PM},
    (SignPair.MM, V_INV): {SignPair.MP, SignPair.MM},
}


def _reconstruct_signs(s0: SignPair,
                       increments: Sequence[Letter]) -> list[SignPair]:
    """Rebuild s_1..s_{N-1} from s_0 and the increments alone.

    The letter applied next confines a vector to two quadrants, and the
    transition table of the letter just applied allows two images; the
    intersection is always a single quadrant.
    """
    out = [s0]
    for i in range(len(increments) - 1):
        allowed = _TRANSITIONS[(out[-1], increments[i])]
        confined = set(_ADMISSIBLE[increments[i + 1]])
        meet = allowed & confined
        if len(meet) != 1:
            raise ArithmeticError('sign reconstruction is ambiguous')
        out.append(meet.pop())
    return out


def sign_sequence(data: ShrinkData) -> tuple[SignPair, ...]:
    """Quadrants along the prefix, cross-checked against reconstruction."""
    if not data.increments:
        raise ValueError('empty prefix has no sign sequence')
    if any(s is None for s in data.signs):
        raise ValueError('direction meets an axis; it does not renormalize')
    rebuilt = _reconstruct_signs(data.signs[0], data.increments)
    if tuple(rebuilt) != data.signs[:len(rebuilt)]:
        raise ArithmeticError(
            'sign reconstruction disagrees with direct evaluation')
    return tuple(data.signs)


_SAME_EXP_PAIRS = {
    (H, H), (H, V), (V, H), (V, V),
    (H_INV, H_INV), (H_INV, V_INV), (V_INV, H_INV), (V_INV, V_INV),
}


def critical_times(data: ShrinkData) -> tuple[int, ...]:
    """Times n >= 1 with signs[n-1] == signs[n].

    Cross-checked against the word characterization: n is critical exactly
    when the n-th and (n+1)-th increments share an exponent sign.
    """
    signs = sign_sequence(data)
    from_signs = tuple(n for n in range(1, len(signs))
                       if signs[n - 1] == signs[n])
    limit = len(data.increments)
    from_words = tuple(
        n for n in range(1, limit)
        if (data.increments[n], data.increments[n - 1]) in _SAME_EXP_PAIRS)
    if tuple(t for t in from_signs if t < limit) != from_words:
        raise ArithmeticError(
            'critical times disagree between sign and word routes')
    return from_signs


class Verdict(Enum):
    YES = 'yes'
    NO = 'no'
    UNDETERMINED = 'undetermined'


@dataclass(frozen=True)
class RenormVerdict:
    verdict: Verdict
    reason: str | None = None


def _validate_geodesic(increments: Sequence[Letter],
                       period: Sequence[Letter] | None) -> None:
    chain = list(increments) + (list(period) * 2 if period else [])
    for prev, nxt in zip(chain, chain[1:]):
        if nxt == prev.inverse():
            raise ValueError('increments cancel; not a geodesic ray')


def is_renormalizing(increments: Sequence[Letter] = (),
                     period: Sequence[Letter] | None = None) -> RenormVerdict:
    """Classify a geodesic ray given by increments and an optional period.

    With a period the answer is decidable: the ray fails exactly when its
    tail is a constant generator or one of the two alternating families.
    A bare finite prefix is always UNDETERMINED since both exclusions are
    tail conditions.
    """
    increments = tuple(increments)
    period = tuple(period) if period is not None else None
    _validate_geodesic(increments, period)
    if period is None:
        return RenormVerdict(Verdict.UNDETERMINED, 'finite prefix')
    if not period:
        raise ValueError('period must be nonempty')
    excluded = _cyclic_excluded_id(period)
    if excluded is not None:
        return RenormVerdict(Verdict.NO, excluded)
    return RenormVerdict(Verdict.YES)


def classify_data(data: ShrinkData) -> RenormVerdict:
    """Verdict for a computed shrinking prefix."""
    if data.status is TailStatus.PERIODIC:
        start, length = data.period
        return is_renormalizing(data.increments[:start],
                                data.increments[start:start + length])
    if data.status is TailStatus.EXCLUDED_TAIL:
        return RenormVerdict(Verdict.NO, data.excluded_id)
    if data.status is TailStatus.NO_STRICT_SHRINKER:
        return RenormVerdict(Verdict.NO, 'no strict shrinker')
    return RenormVerdict(Verdict.UNDETERMINED, 'budget exhausted')


def _canonical_direction(v: QVec2) -> QVec2:
    sy = v.y.sign()
    if sy < 0 or (sy == 0 and v.x.sign() < 0):
        return -v
    return v


@dataclass(frozen=True)
class DirectionCone:
    """An open cone of directions bounded by two exact vectors."""

    lo: QVec2
    hi: QVec2

    def contains(self, theta) -> bool:
        theta = _as_vec(theta)
        d = self.lo.wedge(self.hi).sign()
        for cand in (theta, -theta):
            if (self.lo.wedge(cand).sign() == d
                    and cand.wedge(self.hi).sign() == d):
                return True
        return False

    def width(self) -> float:
        """Angular width in radians, for reporting only."""
        a = math.atan2(float(self.lo.y), float(self.lo.x))
        b = math.atan2(float(self.hi.y), float(self.hi.x))
        return abs(math.remainder(b - a, math.pi))


def direction_from_sequence(lam, prefix: Sequence[Letter] = (),
                            period: Sequence[Letter] | None = None):
    """Recover the direction shrunk by a renormalizing sequence.

    With a period: the exact contracting eigendirection of the period
    matrix, pulled back through the prefix, canonicalized to y > 0 (or
    x > 0 on the horizontal axis).  Quadratic eigenvalues must live in a
    degree <= 2 field or ValueError is raised.  Without a period: the cone
    of directions consistent with the prefix, as a :class:`DirectionCone`.
    """
    lam = _as_quad(lam)
    prefix = tuple(prefix)
    verdict = is_renormalizing(prefix, period)
    if verdict.verdict is Verdict.NO:
        raise ValueError('sequence does not renormalize: %s' % verdict.reason)
    if period is None:
        if not prefix:
            raise ValueError('empty prefix constrains nothing')
        last = prefix[-1]
        lo, hi = shrink_cone(lam, last)
        back = rho(lam, Word(reversed(prefix[:-1]))).inverse()
        return DirectionCone(back.apply(lo), back.apply(hi))
    period = tuple(period)
    pmat = rho(lam, Word(reversed(period)))
    tr = pmat.trace()
    disc = tr * tr - 4
    if disc.sign() <= 0:
        raise ValueError('period matrix is not hyperbolic')
    root = quad_sqrt(disc)
    mu = (tr - root) / 2 if tr.sign() > 0 else (tr + root) / 2
    if pmat.b.sign() != 0 or (mu - pmat.a).sign() != 0:
        eigvec = QVec2(pmat.b, mu - pmat.a)
    else:
        eigvec = QVec2(mu - pmat.d, pmat.c)
    if prefix:
        eigvec = rho(lam, Word(reversed(prefix))).inverse().apply(eigvec)
    return _canonical_direction(eigvec)


class OmegaKind(Enum):
    IN_OMEGA = 'in-omega'
    NOT_IN_OMEGA = 'not-in-omega'
    UNDETERMINED = 'undetermined'


@dataclass(frozen=True)
class OmegaResult:
    kind: OmegaKind
    reason: str
    data: ShrinkData | None = None


def omega_test(n: int, alpha, max_steps: int = 64) -> OmegaResult:
    """Membership of alpha in the renormalizable parameter set at level n.

    The direction (alpha - 1/n, 1/n) is shrunk greedily at parameter n.
    Rationals never belong; an exact periodic non-excluded tail certifies
    membership; a dead end or excluded tail certifies exclusion.
    """
    if n < 2:
        raise ValueError('level must be at least 2')
    alpha = _as_quad(alpha)
    if alpha.is_rational:
        return OmegaResult(OmegaKind.NOT_IN_OMEGA, 'alpha is rational')
    theta = QVec2(alpha - Fraction(1, n), Fraction(1, n))
    data = shrinking_sequence(QuadNum(n), theta, max_steps)
    if data.status is TailStatus.PERIODIC:
        return OmegaResult(OmegaKind.IN_OMEGA, 'periodic renormalizing tail',
                           data)
    if data.status is TailStatus.EXCLUDED_TAIL:
        return OmegaResult(OmegaKind.NOT_IN_OMEGA,
                           'excluded tail %s' % data.excluded_id, data)
    if data.status is TailStatus.NO_STRICT_SHRINKER:
        return OmegaResult(OmegaKind.NOT_IN_OMEGA, 'no strict shrinker', data)
    return OmegaResult(OmegaKind.UNDETERMINED, 'budget exhausted', data)


def decay_products(data: ShrinkData) -> tuple[float, ...]:
    """omega^n * |vectors[n]| / |theta| at each critical time n.

    omega is the large root of x^2 - lam*x + 1; the products staying
    bounded by 1 from some index on is the expected decay profile.  Float
    precision is fine here: this is a diagnostic, not a certificate.
    """
    lam = float(data.lam)
    if lam < 2:
        raise ValueError('decay rate needs lam >= 2')
    omega = (lam + math.sqrt(lam * lam - 4)) / 2
    base = math.sqrt(float(data.theta.norm_sq()))
    out = []
    for n in critical_times(data):
        norm = math.sqrt(float(data.vectors[n].norm_sq()))
        out.append(omega ** n * norm / base)
    return tuple(out)
