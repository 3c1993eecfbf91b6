"""Combinatorics of the projective space P^n(F_q).

Points are nonzero coordinate vectors up to scalar, normalized so the
lowest-index nonzero coordinate is 1; lines are 2-dimensional spans in
reduced row-echelon form, so equal lines compare equal bitwise.  The
point index (rank in lexicographic order of normalized coordinate codes)
and the dense incidence tables built here are the currency of every
numeric kernel downstream.

Closed forms used throughout:

    #points  = (q^(n+1) - 1) / (q - 1)
    #lines   = (q^(n+1) - 1)(q^(n+1) - q) / (q (q+1) (q-1)^2)
    #lines through a point      = (q^n - 1) / (q - 1)
    #pointed lines at a point   = q^(n+1) - q

Spaces are interned via :func:`proj_space` so enumeration caches are
shared; all types are immutable values after construction.
"""

from __future__ import annotations

import itertools
import json
import random
from typing import Optional, Sequence, Union

import numpy as np

from .errors import EnumerationLimitError
from .field import FieldElement, FieldSpec

MAX_ENUM_POINTS = 200_000
MAX_ENUM_LINES = 10_000_000
MAX_TABLE_POINTS = 8_000       # dense point-pair tables: Np^2 int32
MAX_TABLE_LINES = 5_000_000    # line -> points table rows


# -- small exact linear algebra over element codes ------------------------------


def normalize_codes(spec: FieldSpec, codes: Sequence[int]) -> tuple[int, ...]:
    """Scale so the lowest-index nonzero coordinate is 1."""
    for c in codes:
        if c != 0:
            if c == 1:
                return tuple(codes)
            s = spec.inv_code(c)
            return tuple(spec.mul_codes(s, x) for x in codes)
    raise ValueError("cannot normalize the zero vector")


def vec_add(spec: FieldSpec, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(spec.add_codes(a, b) for a, b in zip(u, v))


def vec_sub(spec: FieldSpec, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(spec.sub_codes(a, b) for a, b in zip(u, v))


def vec_scale(spec: FieldSpec, s: int, u: Sequence[int]) -> tuple[int, ...]:
    return tuple(spec.mul_codes(s, a) for a in u)


def rref(spec: FieldSpec, rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Reduced row echelon form; returns the nonzero rows."""
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0]) if m else 0
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        s = spec.inv_code(m[r][col])
        if s != 1:
            m[r] = [spec.mul_codes(s, x) for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][col] != 0:
                c = m[i][col]
                m[i] = [spec.sub_codes(x, spec.mul_codes(c, y)) for x, y in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return [tuple(row) for row in m[:r] if any(row)]


def rank_of(spec: FieldSpec, rows: Sequence[Sequence[int]]) -> int:
    return len(rref(spec, rows))


def express_in_span(
    spec: FieldSpec, basis: Sequence[Sequence[int]], target: Sequence[int]
) -> Optional[tuple[int, ...]]:
    """Coefficients c with sum(c_i * basis_i) = target, or None if outside the span.

    The basis rows must be linearly independent.
    """
    ncols = len(target)
    nb = len(basis)
    # eliminate on the augmented system [basis^T | target^T]
    m = [[basis[j][i] for j in range(nb)] + [target[i]] for i in range(ncols)]
    piv_cols: list[int] = []
    r = 0
    for col in range(nb):
        pivot = next((i for i in range(r, ncols) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        s = spec.inv_code(m[r][col])
        if s != 1:
            m[r] = [spec.mul_codes(s, x) for x in m[r]]
        for i in range(ncols):
            if i != r and m[i][col] != 0:
                c = m[i][col]
                m[i] = [spec.sub_codes(x, spec.mul_codes(c, y)) for x, y in zip(m[i], m[r])]
        piv_cols.append(col)
        r += 1
    if len(piv_cols) != nb:
        raise ValueError("basis rows are linearly dependent")
    # inconsistent rows mean the target is outside the span
    for i in range(r, ncols):
        if m[i][nb] != 0:
            return None
    coeffs = [0] * nb
    for i, col in enumerate(piv_cols):
        coeffs[col] = m[i][nb]
    return tuple(coeffs)


# -- core types ------------------------------------------------------------------


class ProjPoint:
    """A point of P^n(F_q): normalized homogeneous coordinates."""

    __slots__ = ("spec", "codes")

    def __init__(self, spec: FieldSpec, codes: Sequence[int], _normalized: bool = False):
        cs = tuple(int(c) for c in codes)
        if not _normalized:
            if any(not 0 <= c < spec.q for c in cs):
                raise ValueError("coordinate codes out of range")
            cs = normalize_codes(spec, cs)
        self.spec = spec
        self.codes = cs

    @classmethod
    def from_elements(cls, coords: Sequence[FieldElement]) -> "ProjPoint":
        if not coords:
            raise ValueError("empty coordinate vector")
        spec = coords[0].spec
        return cls(spec, [c.code for c in coords])

    @property
    def coords(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.spec, c) for c in self.codes)

    @property
    def n(self) -> int:
        return len(self.codes) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.spec == other.spec and self.codes == other.codes

    def __hash__(self) -> int:
        return hash((self.spec, self.codes))

    def __repr__(self) -> str:
        return "[" + ":".join(str(c) for c in self.codes) + "]"


class ProjLine:
    """A line of P^n(F_q): the canonical RREF basis of a 2-dimensional span."""

    __slots__ = ("spec", "rows")

    def __init__(self, spec: FieldSpec, rows: Sequence[Sequence[int]], _canonical: bool = False):
        if _canonical:
            rs = tuple(tuple(r) for r in rows)
        else:
            reduced = rref(spec, rows)
            if len(reduced) != 2:
                raise ValueError(f"spanning set has rank {len(reduced)}, expected 2")
            rs = tuple(reduced)
        self.spec = spec
        self.rows = rs

    @property
    def n(self) -> int:
        return len(self.rows[0]) - 1

    def contains(self, point: ProjPoint) -> bool:
        return express_in_span(self.spec, self.rows, point.codes) is not None

    def points(self) -> tuple[ProjPoint, ...]:
        """All q+1 points on the line, sorted by point index (lex on codes)."""
        return points_on_line(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjLine):
            return NotImplemented
        return self.spec == other.spec and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.spec, self.rows))

    def __repr__(self) -> str:
        return f"Line{self.rows}"


class PointedLine:
    """A line through x together with an ordered pair of other points on it."""

    __slots__ = ("line", "x", "y1", "y2")

    def __init__(self, line: ProjLine, x: ProjPoint, y1: ProjPoint, y2: ProjPoint):
        if len({x, y1, y2}) != 3:
            raise ValueError("x, y1, y2 must be pairwise distinct")
        for pt in (x, y1, y2):
            if not line.contains(pt):
                raise ValueError(f"{pt} does not lie on the line")
        self.line = line
        self.x = x
        self.y1 = y1
        self.y2 = y2

    def __repr__(self) -> str:
        return f"PointedLine(x={self.x}, y1={self.y1}, y2={self.y2})"


# -- the space and its caches ------------------------------------------------------


def count_points(q: int, n: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def count_lines(q: int, n: int) -> int:
    num = (q ** (n + 1) - 1) * (q ** (n + 1) - q)
    den = q * (q + 1) * (q - 1) ** 2
    return num // den


class ProjSpace:
    """P^n over a fixed finite field, with lazily built enumeration caches."""

    __slots__ = (
        "field", "n",
        "_points", "_point_index", "_codes_index", "_coords_arr",
        "_lines", "_line_index", "_line_pts_arr", "_line_of_arr", "_pencils",
        "_pointed_arrays",
        "__weakref__",
    )

    def __init__(self, field: FieldSpec, n: int):
        if n < 1:
            raise ValueError("projective dimension must be >= 1")
        self.field = field
        self.n = n
        self._points = None
        self._point_index = None
        self._codes_index = None
        self._coords_arr = None
        self._lines = None
        self._line_index = None
        self._line_pts_arr = None
        self._line_of_arr = None
        self._pencils = None
        self._pointed_arrays = {}

    # identity ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjSpace):
            return NotImplemented
        return self.field == other.field and self.n == other.n

    def __hash__(self) -> int:
        return hash((self.field, self.n))

    def __repr__(self) -> str:
        return f"P^{self.n}({self.field!r})"

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def num_points(self) -> int:
        return count_points(self.q, self.n)

    @property
    def num_lines(self) -> int:
        return count_lines(self.q, self.n)

    # point enumeration --------------------------------------------------------

    @property
    def points(self) -> tuple[ProjPoint, ...]:
        if self._points is None:
            if self.num_points > MAX_ENUM_POINTS:
                raise EnumerationLimitError(
                    f"{self.num_points} points exceeds enumeration limit {MAX_ENUM_POINTS}"
                )
            q, width = self.q, self.n + 1
            tuples = []
            for lead in range(width):
                prefix = (0,) * lead + (1,)
                for tail in itertools.product(range(q), repeat=width - lead - 1):
                    tuples.append(prefix + tail)
            tuples.sort()
            self._points = tuple(ProjPoint(self.field, t, _normalized=True) for t in tuples)
        return self._points

    def point_index(self, point: ProjPoint) -> int:
        if self._point_index is None:
            self._point_index = {pt: i for i, pt in enumerate(self.points)}
        return self._point_index[point]

    def index_of_codes(self, codes: tuple[int, ...]) -> int:
        """Point index from a normalized coordinate-code tuple."""
        if self._codes_index is None:
            self._codes_index = {pt.codes: i for i, pt in enumerate(self.points)}
        return self._codes_index[codes]

    def coords_arr(self) -> np.ndarray:
        """(Np, n+1) int16 array of normalized coordinate codes."""
        if self._coords_arr is None:
            arr = np.array([p.codes for p in self.points], dtype=np.int16)
            arr.setflags(write=False)
            self._coords_arr = arr
        return self._coords_arr

    # line enumeration ----------------------------------------------------------

    @property
    def lines(self) -> tuple[ProjLine, ...]:
        """All lines, by direct generation of canonical RREF bases."""
        if self._lines is None:
            if self.num_lines > MAX_ENUM_LINES:
                raise EnumerationLimitError(
                    f"{self.num_lines} lines exceeds enumeration limit {MAX_ENUM_LINES}"
                )
            q, width = self.q, self.n + 1
            rows_list = []
            for i in range(width):
                for j in range(i + 1, width):
                    free1 = [c for c in range(i + 1, width) if c != j]
                    free2 = list(range(j + 1, width))
                    for vals1 in itertools.product(range(q), repeat=len(free1)):
                        r1 = [0] * width
                        r1[i] = 1
                        for c, v in zip(free1, vals1):
                            r1[c] = v
                        t1 = tuple(r1)
                        for vals2 in itertools.product(range(q), repeat=len(free2)):
                            r2 = [0] * width
                            r2[j] = 1
                            for c, v in zip(free2, vals2):
                                r2[c] = v
                            rows_list.append((t1, tuple(r2)))
            rows_list.sort()
            self._lines = tuple(ProjLine(self.field, rs, _canonical=True) for rs in rows_list)
        return self._lines

    def line_index(self, line: ProjLine) -> int:
        if self._line_index is None:
            self._line_index = {ln: i for i, ln in enumerate(self.lines)}
        return self._line_index[line]

    # incidence tables ------------------------------------------------------------

    def line_pts_arr(self) -> np.ndarray:
        """(Nl, q+1) int32: sorted point indices on each line."""
        if self._line_pts_arr is None:
            if self.num_lines > MAX_TABLE_LINES:
                raise EnumerationLimitError(
                    f"{self.num_lines} lines exceeds incidence-table limit {MAX_TABLE_LINES}"
                )
            arr = np.empty((self.num_lines, self.q + 1), dtype=np.int32)
            for i, ln in enumerate(self.lines):
                arr[i] = sorted(self.point_index(p) for p in _raw_points_on(ln))
            arr.setflags(write=False)
            self._line_pts_arr = arr
        return self._line_pts_arr

    def line_of_arr(self) -> np.ndarray:
        """(Np, Np) int32: index of the line through two distinct points, -1 on the diagonal."""
        if self._line_of_arr is None:
            np_pts = self.num_points
            if np_pts > MAX_TABLE_POINTS:
                raise EnumerationLimitError(
                    f"{np_pts} points exceeds point-pair table limit {MAX_TABLE_POINTS}"
                )
            table = np.full((np_pts, np_pts), -1, dtype=np.int32)
            lp = self.line_pts_arr()
            for li in range(lp.shape[0]):
                pts = lp[li]
                sub = table[np.ix_(pts, pts)]
                sub[:] = li
                table[np.ix_(pts, pts)] = sub
            np.fill_diagonal(table, -1)
            table.setflags(write=False)
            self._line_of_arr = table
        return self._line_of_arr

    def pencil(self, point_idx: int) -> np.ndarray:
        """Sorted indices of the lines through the given point."""
        if self._pencils is None:
            per_point: list[list[int]] = [[] for _ in range(self.num_points)]
            lp = self.line_pts_arr()
            for li in range(lp.shape[0]):
                for pi in lp[li]:
                    per_point[pi].append(li)
            self._pencils = [np.array(ls, dtype=np.int32) for ls in per_point]
        return self._pencils[point_idx]

    def pointed_pairs(self, point_idx: int) -> tuple[np.ndarray, np.ndarray]:
        """(p1, p2) int32 arrays over the q^(n+1) - q pointed lines at a point.

        Entry t is the ordered pair of marked points of pointed line t; the
        enumeration order is lines of the pencil in index order, then marked
        pairs in nested point-index order.
        """
        if point_idx not in self._pointed_arrays:
            lp = self.line_pts_arr()
            q = self.q
            p1_parts, p2_parts = [], []
            for li in self.pencil(point_idx):
                others = lp[li][lp[li] != point_idx]
                a = np.repeat(others, q)
                b = np.tile(others, q)
                keep = a != b
                p1_parts.append(a[keep])
                p2_parts.append(b[keep])
            self._pointed_arrays[point_idx] = (
                np.concatenate(p1_parts).astype(np.int32),
                np.concatenate(p2_parts).astype(np.int32),
            )
        return self._pointed_arrays[point_idx]


_SPACE_CACHE: dict[tuple[FieldSpec, int], ProjSpace] = {}


def proj_space(field: FieldSpec, n: int) -> ProjSpace:
    """Interning factory so enumeration caches are shared per (field, n)."""
    key = (field, n)
    if key not in _SPACE_CACHE:
        _SPACE_CACHE[key] = ProjSpace(field, n)
    return _SPACE_CACHE[key]


# -- operations ---------------------------------------------------------------------


def enumerate_points(space: ProjSpace) -> tuple[ProjPoint, ...]:
    """All points, sorted lexicographically by coordinate codes."""
    return space.points


def enumerate_lines(space: ProjSpace) -> tuple[ProjLine, ...]:
    """All lines, deduplicated via the RREF canonical form."""
    return space.lines


def line_through(p: ProjPoint, q: ProjPoint) -> ProjLine:
    """The unique line containing two distinct points."""
    if p == q:
        raise ValueError("line_through requires two distinct points")
    if p.spec != q.spec or len(p.codes) != len(q.codes):
        raise ValueError("points live in different spaces")
    return ProjLine(p.spec, [p.codes, q.codes])


def _raw_points_on(line: ProjLine) -> list[ProjPoint]:
    spec = line.spec
    r0, r1 = line.rows
    pts = [ProjPoint(spec, r1, _normalized=True)]  # RREF rows are normalized
    for a in range(spec.q):
        pts.append(ProjPoint(spec, normalize_codes(spec, vec_add(spec, r0, vec_scale(spec, a, r1))), _normalized=True))
    return pts


def points_on_line(line: ProjLine) -> tuple[ProjPoint, ...]:
    """The q+1 points of a line, sorted by point index (lex order on codes)."""
    return tuple(sorted(_raw_points_on(line), key=lambda p: p.codes))


def lines_through_point(space: ProjSpace, x: ProjPoint) -> tuple[ProjLine, ...]:
    """The (q^n - 1)/(q - 1) lines through x, in canonical order."""
    seen: set[ProjLine] = set()
    for y in space.points:
        if y != x:
            seen.add(line_through(x, y))
    return tuple(sorted(seen, key=lambda ln: ln.rows))


def pointed_lines_at(space: ProjSpace, x: ProjPoint) -> tuple[PointedLine, ...]:
    """All q^(n+1) - q triples (L, y1, y2) with x on L and y1 != y2 in L - {x}."""
    out = []
    for ln in lines_through_point(space, x):
        others = [p for p in points_on_line(ln) if p != x]
        for y1, y2 in itertools.permutations(others, 2):
            out.append(PointedLine(ln, x, y1, y2))
    return tuple(out)


def intersect_lines(l1: ProjLine, l2: ProjLine) -> Union[None, ProjPoint, ProjLine]:
    """Set-theoretic intersection: None (skew), a single point, or the shared line."""
    if l1.spec != l2.spec or l1.n != l2.n:
        raise ValueError("lines live in different spaces")
    if l1 == l2:
        return l1
    r = rank_of(l1.spec, list(l1.rows) + list(l2.rows))
    if r == 4:
        return None
    # rank 3: the lines are coplanar and distinct, so they share exactly one point
    common = set(_raw_points_on(l1)) & set(_raw_points_on(l2))
    assert len(common) == 1
    return common.pop()


def span_dimension(points: Sequence[ProjPoint]) -> int:
    """Projective dimension of the linear span of a nonempty point set."""
    pts = list(points)
    if not pts:
        raise ValueError("span of the empty set is undefined")
    return rank_of(pts[0].spec, [p.codes for p in pts]) - 1


def sample_point(space: ProjSpace, seed: int) -> ProjPoint:
    """Uniform random point; deterministic for a fixed seed."""
    rng = random.Random(seed)
    return space.points[rng.randrange(space.num_points)]


def sample_line(space: ProjSpace, seed: int) -> ProjLine:
    """Uniform random line, drawn as the span of two random distinct points.

    Every line is the span of exactly (q+1)q ordered pairs of distinct
    points, so uniform pairs induce uniform lines; no line enumeration is
    required.
    """
    rng = random.Random(seed)
    npts = space.num_points
    i = rng.randrange(npts)
    j = rng.randrange(npts - 1)
    if j >= i:
        j += 1
    return line_through(space.points[i], space.points[j])


# -- tabulated point maps --------------------------------------------------------------


class PointMap:
    """A total tabulated injection between projective spaces over one field."""

    __slots__ = ("domain", "codomain", "table")

    def __init__(self, domain: ProjSpace, codomain: ProjSpace, table: Sequence[int]):
        if domain.field != codomain.field:
            raise ValueError("domain and codomain must share the same field")
        arr = np.asarray(table, dtype=np.int64)
        if arr.ndim != 1 or arr.shape[0] != domain.num_points:
            raise ValueError(
                f"table must assign every one of {domain.num_points} domain points"
            )
        if arr.min(initial=0) < 0 or arr.max(initial=0) >= codomain.num_points:
            raise ValueError("table entry out of codomain range")
        if np.unique(arr).shape[0] != arr.shape[0]:
            raise ValueError("table is not injective")
        arr = arr.astype(np.int32)
        arr.setflags(write=False)
        self.domain = domain
        self.codomain = codomain
        self.table = arr

    def apply(self, point: ProjPoint) -> ProjPoint:
        return self.codomain.points[self.table[self.domain.point_index(point)]]

    def image_index(self, i: int) -> int:
        return int(self.table[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointMap):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and bool(np.array_equal(self.table, other.table))
        )

    def __hash__(self):
        raise TypeError("PointMap is not hashable")

    def __repr__(self) -> str:
        return f"PointMap({self.domain!r} -> {self.codomain!r}, {self.domain.num_points} points)"

    # serialization: {"field": ..., "n_domain": ..., "n_codomain": ..., "table": [...]}

    def to_json_dict(self) -> dict:
        return {
            "field": self.domain.field.to_json_dict(),
            "n_domain": self.domain.n,
            "n_codomain": self.codomain.n,
            "table": [int(t) for t in self.table],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PointMap":
        field = FieldSpec.from_json_dict(d["field"])
        dom = proj_space(field, int(d["n_domain"]))
        cod = proj_space(field, int(d["n_codomain"]))
        return cls(dom, cod, d["table"])

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def loads(cls, s: str) -> "PointMap":
        return cls.from_json_dict(json.loads(s))


def identity_map(space: ProjSpace) -> PointMap:
    return PointMap(space, space, np.arange(space.num_points, dtype=np.int32))
