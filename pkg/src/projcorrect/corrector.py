"""Majority-vote self-correction and semilinear reconstruction.

Given a tabulated injection f between projective spaces that sends most
lines to lines, the corrector reassigns each point x by voting over all
ordered pairs of pointed lines at x: a pair ((L1, y1, y2), (L2, y3, y4))
votes for the unique meet z of the spans of (f(y1), f(y2)) and
(f(y3), f(y4)) whenever the cross spans through (y1, y3) and (y2, y4) are
preserved lines and that meet is a single point.  If some z collects a
strict majority of all (q^(n+1) - q)^2 pairs, x is corrected to z;
otherwise x is "uncorrectable" and falls back to f(x).

Exact mode enumerates every pair via the table kernels; sampled mode draws
uniform pairs with a per-point seed derived from (master seed, point
index), so results are independent of scheduling.

A map that takes every line to a line is induced by a semilinear
transformation (Frobenius power + invertible matrix up to scalar);
`reconstruct_semilinear` recovers it from the images of the standard
basis points and certifies it at every point.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import kernels
from .bounds import BoundReport, hypotheses
from .errors import CorrectionCollisionError, EnumerationLimitError, NotSemilinearError
from .field import FieldSpec, Frobenius
from .gadgets import MarkedLine, sigma_from_line
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
    vec_scale,
)

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 output for state x (the fixed 64-bit mixing function)."""
    x = (x + _GOLDEN) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Deterministic sub-seed: splitmix64(master + (index + 1) * golden ratio)."""
    return splitmix64((master + (index + 1) * _GOLDEN) & MASK64)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PROJCORRECT_THREADS", "1")))
    except ValueError:
        return 1


# -- semilinear maps -----------------------------------------------------------------


@dataclass(frozen=True)
class SemilinearMap:
    """Frobenius power + invertible matrix modulo scalar, acting on points.

    The action is [v] -> [matrix . sigma(v)] (sigma applied coordinatewise),
    which is well-defined on projective points since sigma is multiplicative.
    The matrix is normalized so its first nonzero entry in row-major order
    is 1, making equality-up-to-scalar plain equality.
    """

    sigma: Frobenius
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        spec = self.sigma.spec
        w = len(self.matrix)
        if any(len(row) != w for row in self.matrix):
            raise ValueError("matrix must be square")
        flat = [c for row in self.matrix for c in row]
        if any(not 0 <= c < spec.q for c in flat):
            raise ValueError("matrix entries must be element codes")
        lead = next((c for c in flat if c != 0), None)
        if lead is None:
            raise ValueError("matrix must be nonzero")
        if lead != 1:
            s = spec.inv_code(lead)
            normalized = tuple(
                tuple(spec.mul_codes(s, c) for c in row) for row in self.matrix
            )
            object.__setattr__(self, "matrix", normalized)
        else:
            object.__setattr__(self, "matrix", tuple(tuple(row) for row in self.matrix))
        if rank_of(spec, self.matrix) != w:
            raise ValueError("matrix is singular")

    @property
    def spec(self) -> FieldSpec:
        return self.sigma.spec

    @property
    def dim(self) -> int:
        return len(self.matrix) - 1

    def apply_point(self, x: ProjPoint) -> ProjPoint:
        spec = self.spec
        if x.spec != spec or len(x.codes) != len(self.matrix):
            raise ValueError("point has the wrong field or dimension")
        sv = [spec.frob_code(self.sigma.exponent, c) for c in x.codes]
        out = []
        for row in self.matrix:
            acc = 0
            for m, v in zip(row, sv):
                acc = spec.add_codes(acc, spec.mul_codes(m, v))
            out.append(acc)
        return ProjPoint(spec, normalize_codes(spec, out), _normalized=True)

    def as_point_map(self, space: ProjSpace) -> PointMap:
        """Tabulate the action over a whole space (vectorized)."""
        spec = self.spec
        if space.field != spec or space.n != self.dim:
            raise ValueError("space has the wrong field or dimension")
        t = spec.tables()
        pts = space.coords_arr()
        sv = t.frob[self.sigma.exponent][pts]
        w = space.n + 1
        n_pts = pts.shape[0]
        out = np.empty((n_pts, w), dtype=np.int16)
        for r in range(w):
            acc = t.mul[self.matrix[r][0], sv[:, 0]]
            for c in range(1, w):
                acc = t.add[acc, t.mul[self.matrix[r][c], sv[:, c]]]
            out[:, r] = acc
        lead = np.take_along_axis(out, (out != 0).argmax(axis=1)[:, None], axis=1)[:, 0]
        out = t.mul[t.inv[lead][:, None], out]
        table = [space.index_of_codes(tuple(row)) for row in out.tolist()]
        return PointMap(space, space, table)

    def to_json_dict(self) -> dict:
        return {
            "sigma_exponent": self.sigma.exponent,
            "matrix": [list(row) for row in self.matrix],
        }


def apply_semilinear(m: SemilinearMap, x: ProjPoint) -> ProjPoint:
    """Normalized [matrix . sigma(coords)]."""
    return m.apply_point(x)


# -- line preservation ------------------------------------------------------------------


class LineCheck:
    """Result of a whole-map line-preservation scan."""

    __slots__ = ("ok", "witness")

    def __init__(self, ok: bool, witness: Optional[ProjLine]):
        self.ok = ok
        self.witness = witness

    def __bool__(self) -> bool:
        return self.ok


def _preserved(f: PointMap) -> np.ndarray:
    """uint8 mask over domain lines: image point set is a line."""
    return kernels.preserved_mask(
        f.table, f.domain.line_pts_arr(), f.codomain.line_of_arr()
    )


def preserved_line_fraction_exact(f: PointMap) -> Fraction:
    """Exact fraction of domain lines whose image under f is a line."""
    try:
        mask = _preserved(f)
    except EnumerationLimitError as e:
        raise EnumerationLimitError(
            f"{e}; use preserved_line_fraction_sampled for spaces this large"
        ) from e
    return Fraction(int(mask.sum()), f.domain.num_lines)


def _line_image_is_line(f: PointMap, line: ProjLine) -> bool:
    return span_dimension([f.apply(p) for p in points_on_line(line)]) == 1


def preserved_line_fraction_sampled(
    f: PointMap, samples: int, seed: int
) -> tuple[float, float]:
    """Unbiased Monte Carlo estimate of the preserved-line fraction.

    Returns (estimate, standard error); deterministic for a fixed seed.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = random.Random(seed)
    dom = f.domain
    n_pts = dom.num_points
    hits = 0
    for _ in range(samples):
        i = rng.randrange(n_pts)
        j = rng.randrange(n_pts - 1)
        if j >= i:
            j += 1
        line = line_through(dom.points[i], dom.points[j])
        if _line_image_is_line(f, line):
            hits += 1
    est = hits / samples
    stderr = (est * (1.0 - est) / samples) ** 0.5
    return est, stderr


def is_line_preserving(f: PointMap) -> LineCheck:
    """True iff every line's image is a line; on failure carries a witness line."""
    try:
        mask = _preserved(f)
    except EnumerationLimitError:
        for line in f.domain.lines:
            if not _line_image_is_line(f, line):
                return LineCheck(False, line)
        return LineCheck(True, None)
    bad = np.flatnonzero(mask == 0)
    if bad.size:
        return LineCheck(False, f.domain.lines[int(bad[0])])
    return LineCheck(True, None)


# -- correction ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorrectionOutcome:
    """Per-point result of the majority vote."""

    x: ProjPoint
    z: Optional[ProjPoint]           # None means uncorrectable
    majority_fraction: Union[Fraction, float]
    quadruples_examined: int


@dataclass(frozen=True)
class ExactMode:
    kind = "exact"


@dataclass(frozen=True)
class SampledMode:
    kind = "sampled"
    samples: int = 200
    threshold: float = 0.6
    seed: int = 0

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.threshold > 0.5:
            raise ValueError("threshold must exceed 1/2")


Mode = Union[ExactMode, SampledMode]


@dataclass(frozen=True)
class CorrectionReport:
    """Whole-map correction accounting."""

    eps: Union[Fraction, float]
    eps_is_exact: bool
    eps_stderr: Optional[float]
    outcomes: tuple[CorrectionOutcome, ...]
    agreement_with_input: Fraction
    uncorrectable_count: int
    bound_report: BoundReport
    guarantee_applicable: bool
    elapsed: float


class ExactCorrector:
    """Shared tables for exact per-point correction of one map."""

    def __init__(self, f: PointMap):
        dom, cod = f.domain, f.codomain
        try:
            self.dom_line_of = dom.line_of_arr()
            self.cod_line_of = cod.line_of_arr()
            self.cod_line_pts = cod.line_pts_arr()
            self.preserved = _preserved(f)
        except EnumerationLimitError as e:
            raise EnumerationLimitError(
                f"{e}; use sampled mode for spaces this large"
            ) from e
        self.f = f
        self.n_pairs = (dom.q ** (dom.n + 1) - dom.q) ** 2

    def correct_index(self, xi: int) -> CorrectionOutcome:
        f = self.f
        dom, cod = f.domain, f.codomain
        p1, p2 = dom.pointed_pairs(xi)
        clines = self.cod_line_of[f.table[p1], f.table[p2]]
        cod_pts = self.cod_line_pts[clines]
        counts = kernels.vote_pairs(
            p1, p2, cod_pts, self.dom_line_of, self.preserved, cod.num_points
        )
        total = p1.shape[0] ** 2
        assert total == self.n_pairs
        best = int(counts.argmax())
        best_count = int(counts[best])
        # vote sets per candidate are disjoint, so at most one candidate can
        # reach half of all pairs
        assert int(np.count_nonzero(2 * counts >= total)) <= 1
        z = cod.points[best] if 2 * best_count > total else None
        return CorrectionOutcome(
            x=dom.points[xi],
            z=z,
            majority_fraction=Fraction(best_count, total),
            quadruples_examined=total,
        )


def correct_point_exact(f: PointMap, x: ProjPoint) -> CorrectionOutcome:
    """Majority vote over all ordered pairs of pointed lines at x."""
    return ExactCorrector(f).correct_index(f.domain.point_index(x))


def _sample_pointed(rng: random.Random, dom: ProjSpace, xi: int):
    """One uniform pointed line at the point with index xi."""
    n_pts = dom.num_points
    x = dom.points[xi]
    j = rng.randrange(n_pts - 1)
    if j >= xi:
        j += 1
    y1 = dom.points[j]
    line = line_through(x, y1)
    others = [p for p in points_on_line(line) if p != x and p != y1]
    y2 = others[rng.randrange(len(others))]
    return line, y1, y2


def correct_point_sampled(
    f: PointMap, x: ProjPoint, samples: int, threshold: float, seed: int
) -> CorrectionOutcome:
    """Sampled surrogate of the exact vote: `samples` uniform pairs of pointed
    lines; the modal candidate wins if its empirical fraction reaches
    `threshold` (which must exceed 1/2)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if not threshold > 0.5:
        raise ValueError("threshold must exceed 1/2")
    rng = random.Random(seed)
    dom, cod = f.domain, f.codomain
    xi = dom.point_index(x)
    counts: dict[ProjPoint, int] = {}
    preserved_cache: dict[ProjLine, bool] = {}

    def cross_ok(u: ProjPoint, v: ProjPoint) -> bool:
        if u == v:
            return False
        span = line_through(u, v)
        if span not in preserved_cache:
            preserved_cache[span] = _line_image_is_line(f, span)
        return preserved_cache[span]

    for _ in range(samples):
        _, y1, y2 = _sample_pointed(rng, dom, xi)
        _, y3, y4 = _sample_pointed(rng, dom, xi)
        if not (cross_ok(y1, y3) and cross_ok(y2, y4)):
            continue
        m1 = line_through(f.apply(y1), f.apply(y2))
        m2 = line_through(f.apply(y3), f.apply(y4))
        if m1 == m2:
            continue
        meet = intersect_lines(m1, m2)
        if isinstance(meet, ProjPoint):
            counts[meet] = counts.get(meet, 0) + 1
    if counts:
        z, best = max(counts.items(), key=lambda kv: (kv[1], cod.point_index(kv[0])))
    else:
        z, best = None, 0
    ok = z is not None and Fraction(best, samples) >= Fraction(threshold)
    return CorrectionOutcome(
        x=x,
        z=z if ok else None,
        majority_fraction=best / samples,
        quadruples_examined=samples,
    )


def correct_map(f: PointMap, mode: Mode) -> tuple[PointMap, CorrectionReport]:
    """Correct every point; uncorrectable points fall back to f(x).

    Exact mode computes the preserved-line fraction exactly; sampled mode
    estimates it (seeded) and uses the empirical fraction, as an exact
    rational, for the bound report.  Per-point work is independent and may
    run on PROJCORRECT_THREADS threads; results are merged by point index,
    so the output never depends on scheduling.

    Raises ValueError if the corrected assignment is not injective, which
    can only happen far outside the guarantee regime.
    """
    t0 = time.perf_counter()
    dom, cod = f.domain, f.codomain
    eps_stderr: Optional[float] = None
    if isinstance(mode, ExactMode):
        eps = 1 - preserved_line_fraction_exact(f)
        eps_exact = True
        corrector = ExactCorrector(f)

        def run(xi: int) -> CorrectionOutcome:
            return corrector.correct_index(xi)

    else:
        n_eps = mode.samples
        est, eps_stderr = preserved_line_fraction_sampled(
            f, n_eps, derive_seed(mode.seed, 0)
        )
        eps = 1.0 - est
        eps_exact = False

        def run(xi: int) -> CorrectionOutcome:
            return correct_point_sampled(
                f,
                dom.points[xi],
                mode.samples,
                mode.threshold,
                derive_seed(mode.seed, 1 + xi),
            )

    workers = _threads()
    indices = range(dom.num_points)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            outcomes = tuple(ex.map(run, indices))
    else:
        outcomes = tuple(run(xi) for xi in indices)

    table = [
        cod.point_index(o.z) if o.z is not None else int(f.table[xi])
        for xi, o in enumerate(outcomes)
    ]
    agree = sum(1 for xi in indices if table[xi] == f.table[xi])
    eps_rational = eps if eps_exact else Fraction(round((eps) * n_eps), n_eps)
    bound = hypotheses(dom.q, dom.n, eps_rational)
    report = CorrectionReport(
        eps=eps,
        eps_is_exact=eps_exact,
        eps_stderr=eps_stderr,
        outcomes=outcomes,
        agreement_with_input=Fraction(agree, dom.num_points),
        uncorrectable_count=sum(1 for o in outcomes if o.z is None),
        bound_report=bound,
        guarantee_applicable=(
            eps_exact
            and dom.n > 3
            and dom.n == cod.n
            and bound.hyp1_strict
            and bound.hyp2
        ),
        elapsed=time.perf_counter() - t0,
    )
    if len(set(table)) != len(table):
        raise CorrectionCollisionError(
            "corrected assignments collide; the input is outside the regime "
            "where the corrected map is injective",
            report=report,
            table=table,
        )
    return PointMap(dom, cod, table), report


# -- semilinear reconstruction ------------------------------------------------------------


def reconstruct_semilinear(f: PointMap) -> SemilinearMap:
    """Recover (sigma, matrix) from a line-preserving bijection.

    Fixes a representative for f([e_0]); scales a representative for each
    f([e_i]) by requiring [e_0' + e_i'] = f([e_0 + e_i]); reads sigma off
    the chart conjugation on the line through [e_0] and [e_1] and matches
    it against every Frobenius power; then verifies [v] -> [M sigma(v)]
    against f at EVERY point.  Any failure raises NotSemilinearError (with
    a witness point where applicable).
    """
    dom, cod = f.domain, f.codomain
    if dom.n != cod.n:
        raise ValueError("reconstruction requires equal dimensions")
    spec = dom.field
    w = dom.n + 1

    def unit(i: int) -> ProjPoint:
        codes = [0] * w
        codes[i] = 1
        return ProjPoint(spec, tuple(codes), _normalized=True)

    def unit_sum(i: int) -> ProjPoint:
        codes = [0] * w
        codes[0] = 1
        codes[i] = 1
        return ProjPoint(spec, tuple(codes), _normalized=True)

    basis_imgs = [f.apply(unit(i)).codes for i in range(w)]
    cols = [basis_imgs[0]]
    for i in range(1, w):
        target = f.apply(unit_sum(i)).codes
        try:
            coeffs = express_in_span(spec, [basis_imgs[0], basis_imgs[i]], target)
        except ValueError:
            coeffs = None
        if coeffs is None or coeffs[0] == 0 or coeffs[1] == 0:
            raise NotSemilinearError(
                f"image of [e_0 + e_{i}] is off the image of the basis line",
                witness=unit_sum(i),
            )
        alpha, beta = coeffs
        cols.append(vec_scale(spec, spec.mul_codes(beta, spec.inv_code(alpha)), basis_imgs[i]))

    marked = MarkedLine.from_points(unit(0), unit_sum(1), unit(1))
    try:
        sigma_table = sigma_from_line(f, marked)
    except ValueError as e:
        raise NotSemilinearError(str(e), witness=unit_sum(1)) from e
    exponent = None
    for j in range(spec.k):
        if all(sigma_table[a] == spec.frob_code(j, a) for a in range(spec.q)):
            exponent = j
            break
    if exponent is None:
        raise NotSemilinearError("chart-conjugated map is not a Frobenius power")

    matrix = tuple(tuple(cols[c][r] for c in range(w)) for r in range(w))
    try:
        candidate = SemilinearMap(Frobenius(spec, exponent), matrix)
    except ValueError as e:
        raise NotSemilinearError(f"assembled matrix is singular: {e}") from e

    tabulated = candidate.as_point_map(dom)
    mismatch = np.flatnonzero(tabulated.table != f.table)
    if mismatch.size:
        raise NotSemilinearError(
            "map disagrees with its semilinear model",
            witness=dom.points[int(mismatch[0])],
        )
    return candidate
