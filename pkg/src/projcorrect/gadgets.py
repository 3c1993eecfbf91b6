"""Chart coordinates on marked lines, transfer gadgets, and Desargues machinery.

A *marked line* (L, {P, Q, R}) carries the canonical chart

    chart: F_q -> L - {R},   0 -> P,  1 -> Q,

realized by vectors as a -> [v_P + a v_R], where v_P is the normalized
representative of P and v_R is the unique representative of R with
[v_P + v_R] = Q.

Two planar gadgets transfer field arithmetic through incidence alone:

* the multiplicative gadget meets the line through T and R with the line
  joining the chart points of a and b on two marked lines sharing P; the
  meet has chart coordinate -a/b on the (T, T+R, R) frame;
* the additive gadget runs a two-triangle construction from a marked line
  and an external point S, producing a meet with chart coordinate a + b
  on the derived (W, V, R) frame.

Conjugating a line-to-line map through charts on both sides yields the
induced map sigma on F_q (`sigma_from_line`); for a map induced by a
semilinear transformation this is the same field automorphism whichever
marked line is used.

The Desargues utilities build 10-point/10-line configurations from four
independent vectors (all pairwise differences of {0, a, b, c, d}) and
verify the two-triangle theorem, which the corrector relies on to certify
that corrected maps take lines to lines.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateConfigError
from .field import FieldElement, FieldSpec
from .projspace import (
    PointMap,
    ProjLine,
    ProjPoint,
    ProjSpace,
    express_in_span,
    intersect_lines,
    line_through,
    normalize_codes,
    points_on_line,
    rank_of,
    span_dimension,
    vec_add,
    vec_scale,
)


@dataclass(frozen=True)
class MarkedLine:
    """A line with three pairwise-distinct marked points (chart 0, 1, infinity)."""

    line: ProjLine
    p: ProjPoint
    q: ProjPoint
    r: ProjPoint

    def __post_init__(self):
        if len({self.p, self.q, self.r}) != 3:
            raise ValueError("marked points must be pairwise distinct")
        for pt in (self.p, self.q, self.r):
            if not self.line.contains(pt):
                raise ValueError(f"marked point {pt} is not on the line")

    @classmethod
    def from_points(cls, p: ProjPoint, q: ProjPoint, r: ProjPoint) -> "MarkedLine":
        if span_dimension([p, q, r]) != 1:
            raise ValueError("marked points must be collinear (and span a line)")
        return cls(line_through(p, r), p, q, r)

    @property
    def spec(self) -> FieldSpec:
        return self.line.spec


def _chart_basis(m: MarkedLine) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(v_P, v_R) with v_P the normalized rep of P and [v_P + v_R] = Q."""
    spec = m.spec
    coeffs = express_in_span(spec, [m.p.codes, m.r.codes], m.q.codes)
    assert coeffs is not None  # Q lies on the line through P and R
    alpha, beta = coeffs
    # Q != R gives alpha != 0; Q != P gives beta != 0
    scale = spec.mul_codes(beta, spec.inv_code(alpha))
    return m.p.codes, vec_scale(spec, scale, m.r.codes)


def chart_eval(m: MarkedLine, a: FieldElement) -> ProjPoint:
    """The point of L - {R} with chart coordinate a."""
    spec = m.spec
    if a.spec != spec:
        raise ValueError("chart argument from the wrong field")
    v_p, v_r = _chart_basis(m)
    return ProjPoint(spec, normalize_codes(spec, vec_add(spec, v_p, vec_scale(spec, a.code, v_r))), _normalized=True)


def chart_inv(m: MarkedLine, x: ProjPoint) -> FieldElement:
    """Chart coordinate of a point of L - {R}; errors off the line or at R."""
    spec = m.spec
    if x == m.r:
        raise ValueError("the chart does not cover R")
    v_p, v_r = _chart_basis(m)
    coeffs = express_in_span(spec, [v_p, v_r], x.codes)
    if coeffs is None:
        raise ValueError(f"{x} is not on the marked line")
    lam, mu = coeffs
    assert lam != 0  # x != R
    return FieldElement(spec, spec.mul_codes(mu, spec.inv_code(lam)))


# -- multiplicative gadget ---------------------------------------------------------


def _mult_frame(m1: MarkedLine, m2: MarkedLine):
    if m1.spec != m2.spec or m1.line.n != m2.line.n:
        raise ValueError("marked lines live in different spaces")
    if m1.p != m2.p:
        raise DegenerateConfigError("the two marked lines must share their chart origin P")
    if m1.line == m2.line:
        raise DegenerateConfigError("the two marked lines must be distinct")
    spec = m1.spec
    v_p, v_r = _chart_basis(m1)
    _, v_t = _chart_basis(m2)
    return spec, v_p, v_r, v_t


def mult_gadget(m1: MarkedLine, m2: MarkedLine, a: FieldElement, b: FieldElement) -> ProjPoint:
    """Meet of the line through (m2.R, m1.R) with the line joining the chart
    points of a on m1 and b on m2.

    The meet has chart coordinate -a/b on the frame returned by
    :func:`mult_gadget_chart`.  Requires b != 0.
    """
    spec, v_p, v_r, v_t = _mult_frame(m1, m2)
    if b.code == 0:
        raise ValueError("b must be nonzero")
    x_a = ProjPoint(spec, normalize_codes(spec, vec_add(spec, v_p, vec_scale(spec, a.code, v_r))), _normalized=True)
    x_b = ProjPoint(spec, normalize_codes(spec, vec_add(spec, v_p, vec_scale(spec, b.code, v_t))), _normalized=True)
    if x_a == x_b:
        raise DegenerateConfigError("chart points coincide")
    meet = intersect_lines(line_through(m2.r, m1.r), line_through(x_a, x_b))
    if not isinstance(meet, ProjPoint):
        raise DegenerateConfigError("gadget lines do not meet in a unique point")
    return meet


def mult_gadget_chart(m1: MarkedLine, m2: MarkedLine) -> MarkedLine:
    """The induced frame (T, T+R, R) on the line through m2.R and m1.R."""
    spec, v_p, v_r, v_t = _mult_frame(m1, m2)
    mid = ProjPoint(spec, normalize_codes(spec, vec_add(spec, v_t, v_r)), _normalized=True)
    return MarkedLine(line_through(m2.r, m1.r), p=m2.r, q=mid, r=m1.r)


# -- additive gadget ------------------------------------------------------------------


def _add_frame(m: MarkedLine, s: ProjPoint, t: ProjPoint):
    spec = m.spec
    if m.line.contains(s):
        raise DegenerateConfigError("S must lie off the marked line")
    if t == s or t == m.r:
        raise DegenerateConfigError("T must differ from S and R")
    if not line_through(s, m.r).contains(t):
        raise DegenerateConfigError("T must lie on the line through S and R")
    v_p, v_r = _chart_basis(m)
    # scale S so that [v_s + v_r] = T
    coeffs = express_in_span(spec, [s.codes, v_r], t.codes)
    assert coeffs is not None
    gamma, delta = coeffs
    v_s = vec_scale(spec, spec.mul_codes(gamma, spec.inv_code(delta)), s.codes)

    v_pt = intersect_lines(line_through(m.p, t), line_through(m.q, s))
    if not isinstance(v_pt, ProjPoint):
        raise DegenerateConfigError("auxiliary point V is not a unique meet")
    line_vr = line_through(v_pt, m.r)
    w_pt = intersect_lines(line_vr, line_through(m.p, s))
    if not isinstance(w_pt, ProjPoint):
        raise DegenerateConfigError("auxiliary point W is not a unique meet")
    return spec, v_p, v_r, v_s, v_pt, w_pt, line_vr


def add_gadget(
    m: MarkedLine, s: ProjPoint, t: ProjPoint, a: FieldElement, b: FieldElement
) -> ProjPoint:
    """Meet encoding a + b: join the chart points of a (on the marked line)
    and b (on the line through S and R, framed by S and T), then meet with
    the derived line through V and R.

    The meet has chart coordinate a + b on the frame returned by
    :func:`add_gadget_chart`.
    """
    spec, v_p, v_r, v_s, v_pt, w_pt, line_vr = _add_frame(m, s, t)
    pt_a = ProjPoint(spec, normalize_codes(spec, vec_add(spec, v_p, vec_scale(spec, a.code, v_r))), _normalized=True)
    pt_b = ProjPoint(spec, normalize_codes(spec, vec_add(spec, v_s, vec_scale(spec, b.code, v_r))), _normalized=True)
    meet = intersect_lines(line_through(pt_a, pt_b), line_vr)
    if not isinstance(meet, ProjPoint):
        raise DegenerateConfigError("gadget lines do not meet in a unique point")
    return meet


def add_gadget_chart(m: MarkedLine, s: ProjPoint, t: ProjPoint) -> MarkedLine:
    """The induced frame (W, V, R) on the derived line through V and R."""
    _, _, _, _, v_pt, w_pt, line_vr = _add_frame(m, s, t)
    return MarkedLine(line_vr, p=w_pt, q=v_pt, r=m.r)


# -- chart conjugation --------------------------------------------------------------


def sigma_from_line(f: PointMap, m: MarkedLine) -> list[int]:
    """The map F_q -> F_q obtained by conjugating f through the charts of a
    marked line and its image.

    Returned as a code table: entry a is the code of sigma(a).  Fixes 0
    and 1.  Errors if f does not send the marked line to a line.
    """
    spec = m.spec
    dom_pts = points_on_line(m.line)
    imgs = [f.apply(p) for p in dom_pts]
    if span_dimension(imgs) != 1:
        raise ValueError("the image of the marked line is not a line")
    img_m = MarkedLine.from_points(f.apply(m.p), f.apply(m.q), f.apply(m.r))
    table = []
    for code in range(spec.q):
        x = chart_eval(m, FieldElement(spec, code))
        table.append(chart_inv(img_m, f.apply(x)).code)
    return table


# -- Desargues configurations ---------------------------------------------------------


@dataclass(frozen=True)
class DesarguesConfig:
    """Ten points and ten lines, three points per line and three lines per point."""

    points: tuple[ProjPoint, ...]
    lines: tuple[ProjLine, ...]


def desargues_build(space: ProjSpace, a, b, c, d) -> DesarguesConfig:
    """Configuration from four linearly independent vectors: the points are
    the pairwise differences of {0, a, b, c, d} and the lines are the spans
    of differences of each 3-subset.
    """
    spec = space.field
    vecs = [tuple(int(x) for x in v) for v in (a, b, c, d)]
    if any(len(v) != space.n + 1 for v in vecs):
        raise ValueError(f"vectors must have {space.n + 1} coordinates")
    if rank_of(spec, vecs) != 4:
        raise ValueError("the four vectors must be linearly independent (needs n >= 3)")
    zero = (0,) * (space.n + 1)
    elems = [zero] + vecs

    def diff_pt(i: int, j: int) -> ProjPoint:
        return ProjPoint(spec, normalize_codes(spec, tuple(
            spec.sub_codes(x, y) for x, y in zip(elems[j], elems[i])
        )), _normalized=True)

    # differences of two elements of {0, a, b, c, d}
    pairs = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    points = tuple(diff_pt(i, j) for i, j in pairs)

    lines = []
    for tri in itertools.combinations(range(5), 3):
        i, j, k = tri
        rows = [
            tuple(spec.sub_codes(x, y) for x, y in zip(elems[j], elems[i])),
            tuple(spec.sub_codes(x, y) for x, y in zip(elems[k], elems[i])),
        ]
        lines.append(ProjLine(spec, rows))
    return DesarguesConfig(points=points, lines=tuple(lines))


def desargues_check(config: DesarguesConfig) -> bool:
    """Incidence axioms: 10 distinct points, 10 distinct lines, exactly three
    configuration points per line and three configuration lines per point."""
    pts, lns = config.points, config.lines
    if len(set(pts)) != 10 or len(set(lns)) != 10:
        return False
    incidence = [[ln.contains(p) for p in pts] for ln in lns]
    if any(sum(row) != 3 for row in incidence):
        return False
    return all(sum(incidence[i][j] for i in range(10)) == 3 for j in range(10))


def desargues_theorem_check(
    a: ProjPoint, b: ProjPoint, c: ProjPoint, d: ProjPoint, e: ProjPoint, f: ProjPoint
) -> bool:
    """Whether (AD, BE, CF concurrent) <=> (AB^DE, AC^DF, BC^EF collinear).

    Over a field plane both directions of the two-triangle theorem hold, so
    this returns True for every valid input: six pairwise-distinct points
    forming two genuine (non-collinear) triangles whose corresponding sides
    are distinct lines.  Degenerate inputs raise.
    """
    pts = (a, b, c, d, e, f)
    if len(set(pts)) != 6:
        raise DegenerateConfigError("the six points must be pairwise distinct")
    if span_dimension([a, b, c]) != 2 or span_dimension([d, e, f]) != 2:
        raise DegenerateConfigError("each vertex triple must form a genuine triangle")
    ab, ac, bc = line_through(a, b), line_through(a, c), line_through(b, c)
    de, df, ef = line_through(d, e), line_through(d, f), line_through(e, f)
    ad, be, cf = line_through(a, d), line_through(b, e), line_through(c, f)

    meets = []
    for l1, l2 in [(ab, de), (ac, df), (bc, ef)]:
        x = intersect_lines(l1, l2)
        if not isinstance(x, ProjPoint):
            raise DegenerateConfigError("a pair of corresponding sides has no unique meet")
        meets.append(x)
    collinear = span_dimension(meets) <= 1

    common = set(points_on_line(ad)) & set(points_on_line(be)) & set(points_on_line(cf))
    concurrent = len(common) >= 1
    return concurrent == collinear


# -- exhaustive planar gadget verification ---------------------------------------------


def mult_gadget_exhaustive_check(space: ProjSpace) -> tuple[int, int]:
    """Run the multiplicative gadget over every configuration of a plane.

    Returns (configurations checked, failures); a configuration is a base
    point, an ordered pair of distinct marked lines through it, and a pair
    (a, b) with b != 0.
    """
    if space.n != 2:
        raise ValueError("exhaustive gadget checks run on projective planes")
    t = space.field.tables()
    pencils = np.stack([space.pencil(i) for i in range(space.num_points)])
    return kernels.mult_gadget_exhaustive(
        space.coords_arr(), pencils, space.line_pts_arr(), t.add, t.mul, t.inv, t.neg
    )


def add_gadget_exhaustive_check(space: ProjSpace) -> tuple[int, int]:
    """Run the additive gadget over every configuration of a plane.

    Returns (configurations checked, failures); a configuration is a marked
    line, an external point S, a third point T on the S-R line, and any
    pair (a, b).
    """
    if space.n != 2:
        raise ValueError("exhaustive gadget checks run on projective planes")
    t = space.field.tables()
    return kernels.add_gadget_exhaustive(
        space.coords_arr(), space.line_pts_arr(), space.line_of_arr(), t.add, t.mul, t.inv, t.neg
    )
