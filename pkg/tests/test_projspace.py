import itertools
import json
import random

import pytest

from projcorrect import (
    GF,
    PointMap,
    ProjPoint,
    ProjSpace,
    enumerate_lines,
    enumerate_points,
    identity_map,
    intersect_lines,
    line_through,
    lines_through_point,
    pointed_lines_at,
    points_on_line,
    proj_space,
    sample_line,
    sample_point,
    span_dimension,
)
from projcorrect.projspace import count_lines


def _fields():
    return {2: GF(2), 3: GF(3), 4: GF(2, 2), 5: GF(5)}


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_counting_closed_forms(q, n):
    space = proj_space(_fields()[q], n)
    assert len(enumerate_points(space)) == (q ** (n + 1) - 1) // (q - 1)
    assert len(enumerate_lines(space)) == count_lines(q, n)
    # closed form for lines, written out
    assert count_lines(q, n) == (q ** (n + 1) - 1) * (q ** (n + 1) - q) // (
        q * (q + 1) * (q - 1) ** 2
    )


def test_point_counting_examples(gf2, gf3):
    assert len(enumerate_points(proj_space(gf2, 2))) == 7
    assert len(enumerate_points(proj_space(gf2, 4))) == 31
    assert len(enumerate_points(proj_space(gf3, 1))) == 4


def test_line_counting_examples(gf2, gf3):
    assert len(enumerate_lines(proj_space(gf2, 2))) == 7  # 7*6/(2*3*1)
    assert len(enumerate_lines(proj_space(gf2, 4))) == 155  # 31*30/6
    assert len(enumerate_lines(proj_space(gf3, 1))) == 1


def test_points_sorted_lexicographically(p2f3):
    pts = enumerate_points(p2f3)
    codes = [p.codes for p in pts]
    assert codes == sorted(codes)
    for i, p in enumerate(pts):
        assert p2f3.point_index(p) == i
        assert p2f3.index_of_codes(p.codes) == i


def test_point_normalization(gf3):
    assert ProjPoint(gf3, (0, 2, 1)).codes == (0, 1, 2)  # scale by inv(2) = 2
    assert ProjPoint(gf3, (2, 2, 0)).codes == (1, 1, 0)
    with pytest.raises(ValueError):
        ProjPoint(gf3, (0, 0, 0))


def test_line_through_symmetry_and_example(gf2):
    space = proj_space(gf2, 2)
    p = ProjPoint(gf2, (1, 0, 0))
    q = ProjPoint(gf2, (0, 1, 0))
    line = line_through(p, q)
    assert line == line_through(q, p)
    on = set(points_on_line(line))
    assert on == {p, q, ProjPoint(gf2, (1, 1, 0))}
    with pytest.raises(ValueError):
        line_through(p, p)


def test_line_canonical_form_independent_of_spanning_pair(p2f3):
    for line in enumerate_lines(p2f3):
        pts = points_on_line(line)
        for a, b in itertools.combinations(pts, 2):
            assert line_through(a, b) == line


@pytest.mark.parametrize("q,n", [(2, 2), (3, 3), (5, 2)])
def test_points_on_line_count(q, n):
    space = proj_space(_fields()[q], n)
    for line in enumerate_lines(space)[:20]:
        pts = points_on_line(line)
        assert len(pts) == q + 1
        assert len(set(pts)) == q + 1
        idx = [space.point_index(p) for p in pts]
        assert idx == sorted(idx)


def test_lines_through_point_counts(gf2):
    for n, expected in [(2, 3), (4, 15)]:
        space = proj_space(gf2, n)
        x = space.points[5 % space.num_points]
        pencil = lines_through_point(space, x)
        assert len(pencil) == (2**n - 1)
        assert all(line.contains(x) for line in pencil)


def test_pointed_lines_counts(gf2, gf3):
    space = proj_space(gf2, 4)
    x = space.points[7]
    triples = pointed_lines_at(space, x)
    assert len(triples) == 2**5 - 2  # 30
    space3 = proj_space(gf3, 2)
    x3 = space3.points[0]
    triples3 = pointed_lines_at(space3, x3)
    assert len(triples3) == 3**3 - 3  # 24
    for t in triples3:
        assert span_dimension([t.x, t.y1, t.y2]) == 1
        assert len({t.x, t.y1, t.y2}) == 3


def test_pointed_pairs_match_pointed_lines(p2f3):
    x = p2f3.points[4]
    xi = p2f3.point_index(x)
    p1, p2 = p2f3.pointed_pairs(xi)
    triples = pointed_lines_at(p2f3, x)
    got = {(int(a), int(b)) for a, b in zip(p1, p2)}
    want = {(p2f3.point_index(t.y1), p2f3.point_index(t.y2)) for t in triples}
    assert got == want
    assert len(p1) == len(triples)


def test_intersect_lines_in_plane(gf2):
    space = proj_space(gf2, 2)
    lines = enumerate_lines(space)
    for l1, l2 in itertools.combinations(lines, 2):
        meet = intersect_lines(l1, l2)
        assert isinstance(meet, ProjPoint)
    assert intersect_lines(lines[0], lines[0]) == lines[0]


def test_skew_lines_exist_in_p3(gf2):
    space = proj_space(gf2, 3)
    lines = enumerate_lines(space)
    skew = [
        (l1, l2)
        for l1, l2 in itertools.combinations(lines, 2)
        if intersect_lines(l1, l2) is None
    ]
    assert skew
    l1, l2 = skew[0]
    assert not set(points_on_line(l1)) & set(points_on_line(l2))


def test_intersection_iff_coplanar(gf2):
    space = proj_space(gf2, 3)
    lines = enumerate_lines(space)
    rng = random.Random(0)
    for _ in range(200):
        l1, l2 = rng.sample(lines, 2)
        meet = intersect_lines(l1, l2)
        union = list(points_on_line(l1)) + list(points_on_line(l2))
        coplanar = span_dimension(union) == 2
        assert (isinstance(meet, ProjPoint)) == coplanar


def test_span_dimension_examples(gf2):
    space = proj_space(gf2, 3)
    assert span_dimension([space.points[0]]) == 0
    line = enumerate_lines(space)[0]
    assert span_dimension(points_on_line(line)) == 1
    basis = [ProjPoint(gf2, tuple(1 if i == j else 0 for i in range(4))) for j in range(4)]
    assert span_dimension(basis) == 3
    with pytest.raises(ValueError):
        span_dimension([])


def test_unique_line_through_every_pair():
    for field, n in [(GF(2), 3), (GF(3), 2)]:
        space = proj_space(field, n)
        lines = enumerate_lines(space)
        for a, b in itertools.combinations(space.points, 2):
            containing = [ln for ln in lines if ln.contains(a) and ln.contains(b)]
            assert len(containing) == 1


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_plane_duality_point_line_counts(q):
    space = proj_space(_fields()[q], 2)
    assert len(enumerate_points(space)) == len(enumerate_lines(space))


def test_sampling_determinism_and_membership(p2f3):
    assert sample_line(p2f3, 123) == sample_line(p2f3, 123)
    assert sample_point(p2f3, 9) == sample_point(p2f3, 9)
    lines = set(enumerate_lines(p2f3))
    for seed in range(50):
        assert sample_line(p2f3, seed) in lines


def test_sample_line_uniform(p2f3):
    # 13 lines in P^2(F_3); frequency of a fixed line over 10^5 draws
    # must fall within 5 standard errors of 1/13
    draws = 100_000
    target = enumerate_lines(p2f3)[4]
    hits = sum(1 for seed in range(draws) if sample_line(p2f3, seed) == target)
    p = 1 / 13
    stderr = (p * (1 - p) / draws) ** 0.5
    assert abs(hits / draws - p) < 5 * stderr


def test_incidence_tables_consistent(p2f3):
    lp = p2f3.line_pts_arr()
    lof = p2f3.line_of_arr()
    lines = enumerate_lines(p2f3)
    for li, line in enumerate(lines):
        idx = sorted(p2f3.point_index(p) for p in points_on_line(line))
        assert list(lp[li]) == idx
    for i in range(p2f3.num_points):
        assert lof[i, i] == -1
        for j in range(p2f3.num_points):
            if i != j:
                line = lines[lof[i, j]]
                assert line.contains(p2f3.points[i]) and line.contains(p2f3.points[j])
    x = 3
    pencil = p2f3.pencil(x)
    assert len(pencil) == (3**2 - 1) // 2  # 4 lines through a point


def test_point_map_validation(p2f3):
    n = p2f3.num_points
    with pytest.raises(ValueError):
        PointMap(p2f3, p2f3, list(range(n - 1)))  # not total
    bad = list(range(n))
    bad[0] = 1  # collides with entry 1
    with pytest.raises(ValueError):
        PointMap(p2f3, p2f3, bad)
    with pytest.raises(ValueError):
        PointMap(p2f3, p2f3, [n + 5] + list(range(1, n)))  # out of range
    with pytest.raises(ValueError):
        PointMap(p2f3, proj_space(GF(2), 2), list(range(n)))  # field mismatch


def test_point_map_roundtrip_bit_exact(p2f3):
    rng = random.Random(1)
    table = list(range(p2f3.num_points))
    rng.shuffle(table)
    f = PointMap(p2f3, p2f3, table)
    blob = f.dumps()
    g = PointMap.loads(blob)
    assert g == f
    assert g.dumps() == blob
    doc = json.loads(blob)
    assert doc["n_domain"] == 2 and doc["n_codomain"] == 2
    assert doc["table"] == table


def test_point_map_apply(p2f3):
    f = identity_map(p2f3)
    for p in p2f3.points[:5]:
        assert f.apply(p) == p


def test_fresh_space_equalities(gf3):
    assert ProjSpace(gf3, 2) == proj_space(gf3, 2)
    assert proj_space(gf3, 2) is proj_space(gf3, 2)
