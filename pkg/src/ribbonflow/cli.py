"""Batch front-end over the library.

Subcommands build the named graph families, analyze directions, run the
invariant-measure machinery, simulate orbits, and emit small SVG
renders.  All numeric input is exact: rationals or a+b*sqrt(D)
literals, never floats.  Runs are deterministic; every artifact records
the package version and the seed it was invoked with, and identical
configurations produce byte-identical output.

Exit codes: 0 on success, 2 for unusable arguments, 3 when an orbit or
search budget runs out, 4 when an input direction fails to be
renormalizable where the subcommand requires it.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import os
import sys

from . import __version__
from .dynamics import (OrbitEscapedBudget, code_orbit, from_edge, resolve,
                       skew_orbit, skew_orbit_float)
from .eigen import EigenFamily, family_eigen, verify_family
from .exact import QuadNum, QVec2, parse_quad, sqrt_rational
from .freegrp import H, H_INV, V, V_INV, Word, rho
from .graphs import make_group, vertices_in_ball
from .measures import (conjugate_boundary_point, decay_profile, plane_point,
                       survivor_check)
from .renorm import OmegaKind, TailStatus, omega_test, shrinking_sequence
from .surface import Surface, ball_growth, svg_truncation

BUDGET_ENV = 'RIBBONFLOW_BUDGET'

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_NOT_RENORM = 4


class NotRenormalizableInput(Exception):
    pass


def _exact(text: str) -> QuadNum:
    return parse_quad(text)


def _theta(text: str) -> tuple:
    parts = text.split(',')
    if len(parts) != 2:
        raise ValueError('direction needs two comma-separated entries')
    return (_exact(parts[0]), _exact(parts[1]))


def _literal(text: str):
    """Generator tuples and character values, e.g. "(1,-1)" or "4"."""
    value = ast.literal_eval(text)
    if isinstance(value, list):
        value = tuple(value)
    if isinstance(value, tuple):
        value = tuple(tuple(v) if isinstance(v, list) else v for v in value)
    return value


def _scalar(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return _exact(text)
    except ValueError:
        return text


def _family(spec: str, flags: dict | None = None) -> EigenFamily:
    """Resolve "name" or "name:key=value,key=value" plus flag overrides.

    Inline parameters cover the scalar knobs (t, s, n, m, d, k, chi,
    group); generator tuples come in through --generators.
    """
    name, _, tail = spec.partition(':')
    params: dict = {}
    if tail:
        for part in tail.split(','):
            key, eq, raw = part.partition('=')
            if not eq:
                raise ValueError('bad family parameter %r' % part)
            params[key.strip()] = _scalar(raw.strip())
    for key, value in (flags or {}).items():
        if value is not None:
            params[key] = value
    if name == 'character':
        group_params = {k: params.pop(k) for k in ('m', 'd', 'k')
                        if k in params}
        group = params.get('group')
        if isinstance(group, str):
            params['group'] = make_group(group, **group_params)
    return family_eigen(name, **params)


def _sign_str(pair) -> str:
    if pair is None:
        return ''
    return ('+' if pair.sx > 0 else '-') + ('+' if pair.sy > 0 else '-')


def _emit_text(args, text: str) -> None:
    if args.out:
        with open(args.out, 'w') as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit_table(args, meta: dict, header: list, rows: list) -> None:
    meta = {k: v if isinstance(v, (int, str)) else str(v)
            for k, v in meta.items()}
    if getattr(args, 'format', 'csv') == 'json':
        doc = {'version': __version__, 'seed': args.seed}
        doc.update(meta)
        doc['columns'] = list(header)
        doc['rows'] = [list(r) for r in rows]
        _emit_text(args, json.dumps(doc, sort_keys=True, indent=2) + '\n')
        return
    buf = io.StringIO()
    buf.write('# ribbonflow %s\n' % __version__)
    buf.write('# seed %d\n' % args.seed)
    for key in sorted(meta):
        buf.write('# %s %s\n' % (key, meta[key]))
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    _emit_text(args, buf.getvalue())


def _shrink_rows(data, depth: int):
    rows = []
    last = min(depth, len(data.vectors) - 1)
    for n in range(last + 1):
        letter = str(data.increments[n - 1]) if n else ''
        v = data.vectors[n]
        critical = ''
        if n:
            critical = int(data.signs[n] is not None
                           and data.signs[n] == data.signs[n - 1])
        rows.append([n, letter, str(v.x), str(v.y),
                     _sign_str(data.signs[n]), critical])
    return rows


def cmd_shrink(args) -> int:
    lam = _exact(args.lam)
    theta = _theta(args.theta)
    data = shrinking_sequence(lam, theta, max_steps=args.depth)
    meta = {'lambda': lam, 'status': data.status.name.lower(),
            'period': '%d+%d' % data.period if data.period else ''}
    header = ['n', 'letter', 'x', 'y', 'sign', 'critical']
    _emit_table(args, meta, header, _shrink_rows(data, args.depth))
    return EXIT_OK


def cmd_omega(args) -> int:
    result = omega_test(args.n, _exact(args.alpha), max_steps=args.depth)
    period = ''
    if result.data is not None and result.data.period:
        period = '%d+%d' % result.data.period
    meta = {'n': args.n, 'alpha': args.alpha}
    _emit_table(args, meta, ['kind', 'reason', 'period'],
                [[result.kind.value, result.reason, period]])
    if result.kind is OmegaKind.IN_OMEGA:
        return EXIT_OK
    if result.kind is OmegaKind.UNDETERMINED:
        return EXIT_BUDGET
    return EXIT_NOT_RENORM


def cmd_eigen(args) -> int:
    flags = {'t': args.t, 's': args.s, 'n': args.n, 'group': args.group,
             'chi': args.chi, 'm': args.m, 'd': args.d, 'k': args.k}
    if args.generators:
        flags['generators'] = _literal(args.generators)
    fam = _family(args.family, flags)
    report = verify_family(fam, args.window)
    ball = sorted(vertices_in_ball(fam.graph, fam.root, args.window),
                  key=repr)
    rows = [[repr(v), fam.graph.vertex_class(v), str(fam.weight(v))]
            for v in ball]
    meta = {'family': fam.name, 'lambda': fam.lam,
            'residual_max': report.max_abs,
            'residual_ok': int(report.ok)}
    _emit_table(args, meta, ['vertex', 'class', 'weight'], rows)
    return EXIT_OK


def cmd_simulate(args) -> int:
    budget = args.budget
    if args.group:
        generators = _literal(args.generators)
        group = make_group(args.group, **{k: v for k, v in
                                          (('m', args.m), ('d', args.d),
                                           ('k', args.k)) if v is not None})
        state = (QuadNum(0), group.identity)
        n = len(generators)
        alpha = _exact(args.alpha)
        if args.mode == 'float':
            states = skew_orbit_float(n, float(alpha), group, generators,
                                      (0.0, group.identity), args.steps)
            rows = [[k + 1, repr(x), repr(g)]
                    for k, (x, g) in enumerate(states)]
        else:
            states = skew_orbit(n, alpha, group, generators, state,
                                args.steps, budget=budget)
            rows = [[k + 1, str(x), repr(g)]
                    for k, (x, g) in enumerate(states)]
        meta = {'group': args.group, 'alpha': args.alpha, 'steps': args.steps}
        _emit_table(args, meta, ['step', 'x', 'g'], rows)
        return EXIT_OK
    fam = _family(args.family, {'t': args.t, 'n': args.n, 's': args.s})
    surface = Surface.from_family(fam)
    theta = _theta(args.theta)
    edge = fam.graph.base_edge(fam.root)
    start = from_edge(surface, edge, surface.width(edge) / 2)
    symbols, points = code_orbit(surface, theta, start, args.steps,
                                 branch=args.branch, budget=budget)
    rows = []
    for k, p in enumerate(points):
        e, o = resolve(surface, p)
        rows.append([k, repr(p.a), str(p.t), repr(e), str(o)])
    meta = {'family': fam.name, 'theta': args.theta, 'steps': args.steps}
    _emit_table(args, meta, ['step', 'circle', 't', 'edge', 'offset'], rows)
    return EXIT_OK


def _pair(args):
    fam1 = _family(args.family, {'t': args.t, 'n': args.n, 's': args.s})
    fam2 = _family(args.family2)
    theta1 = _theta(args.theta)
    theta2 = _theta(args.theta2)
    return fam1, fam2, theta1, theta2


def _sign_data(fam, theta, depth):
    data = shrinking_sequence(fam.lam, theta, max_steps=max(depth + 8, 64))
    if data.status is not TailStatus.PERIODIC:
        raise NotRenormalizableInput(
            'direction has no periodic renormalizing tail (%s)'
            % data.status.name.lower())
    return data


def cmd_survivor(args) -> int:
    fam1, fam2, theta1, theta2 = _pair(args)
    data = _sign_data(fam1, theta1, args.depth)
    f = plane_point(fam1.graph, fam2.weight, theta2)
    window = sorted(vertices_in_ball(fam1.graph, fam1.root, args.window),
                    key=repr)
    witness = survivor_check(fam1.graph, f, data, args.depth, window)
    meta = {'depth': args.depth, 'window': args.window,
            'lambda1': fam1.lam, 'lambda2': fam2.lam}
    header = ['result', 'n', 'vertex', 'sign']
    if witness is None:
        rows = [['pass', '', '', '']]
    else:
        rows = [['witness', witness.n, repr(witness.vertex),
                 '+' if witness.sign > 0 else '-']]
    _emit_table(args, meta, header, rows)
    return EXIT_OK


def cmd_decay(args) -> int:
    fam1, fam2, theta1, theta2 = _pair(args)
    data = _sign_data(fam1, theta1, args.depth)
    f = plane_point(fam1.graph, fam2.weight, theta2)
    window = sorted(vertices_in_ball(fam1.graph, fam1.root, args.window),
                    key=repr)
    rows = []
    for v in window:
        prof = decay_profile(fam1.graph, f, v, data, args.depth)
        halving = '' if prof.halving_index is None else prof.halving_index
        for n, value in enumerate(prof.values):
            rows.append([repr(v), n, str(value),
                         int(n in prof.critical), halving,
                         int(prof.survivor_ok)])
    meta = {'depth': args.depth, 'window': args.window,
            'lambda1': fam1.lam, 'lambda2': fam2.lam}
    header = ['vertex', 'n', 'value', 'critical', 'halving', 'survivor_ok']
    _emit_table(args, meta, header, rows)
    return EXIT_OK


def cmd_growth(args) -> int:
    fam = _family(args.family, {'t': args.t, 'n': args.n, 's': args.s})
    lengths, sides = ball_growth(fam.graph, fam.weight, fam.lam, fam.root,
                                 args.depth)
    lam = fam.lam
    rows = []
    for n, (ln, side) in enumerate(zip(lengths, sides)):
        ok = eq = ''
        if n >= 2:
            bound = lam * lengths[n - 1] - lengths[n - 2]
            ok, eq = int(ln <= bound), int(ln == bound)
        rows.append([n, str(ln), str(side), ok, eq])
    meta = {'family': fam.name, 'lambda': lam}
    _emit_table(args, meta, ['n', 'length', 'max_side', 'concave', 'tight'],
                rows)
    return EXIT_OK


def cmd_conjugate(args) -> int:
    fam1, fam2, theta1, theta2 = _pair(args)
    s1 = Surface.from_family(fam1)
    s2 = Surface.from_family(fam2)
    edge = fam1.graph.base_edge(fam1.root)
    if args.t is not None:
        jobs = [(args.side, _exact(args.t))]
    else:
        w, h = s1.width(edge), s1.height(edge)
        jobs = [('bottom', QuadNum(0)), ('bottom', w / 2), ('bottom', w),
                ('top', w), ('left', h), ('right', h)]
    rows = []
    for side, t in jobs:
        img = conjugate_boundary_point(s1, s2, theta1, theta2, edge, side, t,
                                       args.depth)
        rows.append([side, str(t), str(img.x), str(img.y), str(img.error)])
    meta = {'edge': repr(edge), 'depth': args.depth,
            'lambda1': fam1.lam, 'lambda2': fam2.lam}
    _emit_table(args, meta, ['side', 't', 'x', 'y', 'error'], rows)
    return EXIT_OK


def _limit_set_svg(lam: QuadNum, depth: int, seed: int) -> str:
    gap = lam * lam - 4
    if not gap.is_rational or gap <= 0:
        raise ValueError('limit-set render needs rational lambda > 2')
    root = sqrt_rational(gap.as_fraction())
    ends = (QVec2(QuadNum(2), lam - root), QVec2(QuadNum(2), lam + root))

    def chart(v: QVec2) -> float:
        if v.x == 0:
            return 1.0 if v.y >= 0 else -1.0
        return (2 / math.pi) * math.atan(float(v.y) / float(v.x))

    words = [Word()]
    frontier = [Word()]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for letter in (H, H_INV, V, V_INV):
                ext = w * Word([letter])
                if len(ext) > len(w):
                    nxt.append(ext)
        words.extend(nxt)
        frontier = nxt
    width, height, pad = 800, 120, 10
    parts = ['<!-- ribbonflow %s seed %d -->' % (__version__, seed),
             '<svg xmlns="http://www.w3.org/2000/svg" '
             'width="%d" height="%d">' % (width, height),
             '<line x1="%d" y1="60" x2="%d" y2="60" '
             'stroke="black" stroke-width="1"/>' % (pad, width - pad)]
    for w in words:
        mat = rho(lam, w)
        a, b = mat * ends[0], mat * ends[1]
        lo, hi = sorted((chart(a), chart(b)))
        x1 = pad + (lo + 1) / 2 * (width - 2 * pad)
        x2 = pad + (hi + 1) / 2 * (width - 2 * pad)
        parts.append('<g><title>%s: %s,%s to %s,%s</title>'
                     '<line x1="%.3f" y1="60" x2="%.3f" y2="60" '
                     'stroke="white" stroke-width="5"/></g>'
                     % (w, a.x, a.y, b.x, b.y, x1, x2))
    parts.append('</svg>')
    return '\n'.join(parts) + '\n'


def cmd_render(args) -> int:
    if args.format not in ('svg',):
        raise ValueError('render emits svg only')
    if args.style == 'limitset':
        if not args.lam:
            raise ValueError('limit-set render needs --lambda')
        _emit_text(args, _limit_set_svg(_exact(args.lam), args.depth,
                                        args.seed))
        return EXIT_OK
    fam = _family(args.family, {'t': args.t, 'n': args.n, 's': args.s})
    surface = Surface.from_family(fam)
    svg = svg_truncation(surface, radius=args.depth)
    header = '<!-- ribbonflow %s seed %d -->\n' % (__version__, args.seed)
    _emit_text(args, header + svg)
    return EXIT_OK


def _add_common(sub, fmt_default='csv'):
    sub.add_argument('--out')
    sub.add_argument('--format', choices=('csv', 'json', 'svg'),
                     default=fmt_default)
    sub.add_argument('--seed', type=int, default=0)
    sub.add_argument('--budget', type=int,
                     default=int(os.environ.get(BUDGET_ENV, 0)) or None)


def _add_family_knobs(sub):
    sub.add_argument('--family')
    sub.add_argument('--t')
    sub.add_argument('--s')
    sub.add_argument('--n', type=int)
    sub.add_argument('--m', type=int)
    sub.add_argument('--d', type=int)
    sub.add_argument('--k', type=int)
    sub.add_argument('--group')
    sub.add_argument('--generators')
    sub.add_argument('--chi', type=_literal)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='ribbonflow',
        description='renormalization toolkit for graph-built interval '
                    'exchanges')
    parser.add_argument('--version', action='version',
                        version='ribbonflow %s' % __version__)
    subs = parser.add_subparsers(dest='subcommand', required=True)

    p = subs.add_parser('shrink', help='greedy shrinking sequence table')
    p.add_argument('--lambda', dest='lam', required=True)
    p.add_argument('--theta', required=True)
    p.add_argument('--depth', type=int, default=32)
    _add_common(p)
    p.set_defaults(handler=cmd_shrink)

    p = subs.add_parser('omega', help='renormalizable parameter test')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--alpha', required=True)
    p.add_argument('--depth', type=int, default=64)
    _add_common(p)
    p.set_defaults(handler=cmd_omega)

    p = subs.add_parser('eigen', help='eigenfunction family dump')
    _add_family_knobs(p)
    p.add_argument('--window', type=int, default=6)
    _add_common(p)
    p.set_defaults(handler=cmd_eigen)

    p = subs.add_parser('simulate', help='orbit of the return map or a '
                                         'skew rotation')
    _add_family_knobs(p)
    p.add_argument('--theta')
    p.add_argument('--alpha')
    p.add_argument('--steps', type=int, default=100)
    p.add_argument('--mode', choices=('exact', 'float'), default='exact')
    p.add_argument('--branch', choices=('left', 'right'), default='right')
    _add_common(p)
    p.set_defaults(handler=cmd_simulate)

    for name, handler in (('survivor', cmd_survivor), ('decay', cmd_decay)):
        p = subs.add_parser(name, help='%s analysis of a matched pair'
                            % name)
        _add_family_knobs(p)
        p.add_argument('--family2', required=True)
        p.add_argument('--theta', required=True)
        p.add_argument('--theta2', required=True)
        p.add_argument('--depth', type=int, default=12)
        p.add_argument('--window', type=int, default=12)
        _add_common(p)
        p.set_defaults(handler=handler)

    p = subs.add_parser('growth', help='cylinder-union boundary growth')
    _add_family_knobs(p)
    p.add_argument('--depth', type=int, default=10)
    _add_common(p)
    p.set_defaults(handler=cmd_growth)

    p = subs.add_parser('conjugate', help='boundary conjugacy images')
    _add_family_knobs(p)
    p.add_argument('--family2', required=True)
    p.add_argument('--theta', required=True)
    p.add_argument('--theta2', required=True)
    p.add_argument('--depth', type=int, default=14)
    p.add_argument('--side', choices=('bottom', 'top', 'left', 'right'),
                   default='bottom')
    _add_common(p)
    p.set_defaults(handler=cmd_conjugate)

    p = subs.add_parser('render', help='svg of a truncated surface or '
                                       'limit set')
    _add_family_knobs(p)
    p.add_argument('--style', choices=('surface', 'limitset'),
                   default='surface')
    p.add_argument('--lambda', dest='lam')
    p.add_argument('--depth', type=int, default=3)
    _add_common(p, fmt_default='svg')
    p.set_defaults(handler=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    try:
        return args.handler(args)
    except OrbitEscapedBudget as exc:
        print('budget exhausted after %d steps' % exc.steps_done,
              file=sys.stderr)
        return EXIT_BUDGET
    except NotRenormalizableInput as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_RENORM
    except (ValueError, KeyError, TypeError) as exc:
        print('error: %s' % exc, file=sys.stderr)
        return EXIT_PARSE


if __name__ == '__main__':
    sys.exit(main())
