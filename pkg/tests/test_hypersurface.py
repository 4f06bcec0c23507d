import random

import pytest

from veryfree.fields import embed, make_field
from veryfree.hypersurface import (CUSPIDAL_INTEGRAL, LINE_CONIC_TANGENT,
                                   LINE_CONIC_TRANSVERSE, LINE_DOUBLE_LINE,
                                   NODAL_INTEGRAL, SMOOTH_CUBIC,
                                   THREE_LINES_CONCURRENT,
                                   THREE_LINES_TRIANGLE, TRIPLE_LINE,
                                   Hyperplane, Hypersurface, LineP3,
                                   ProjPoint, classify_plane_cubic,
                                   eckardt_points, is_smooth,
                                   lines_on_cubic_surface, plane_section,
                                   singular_points_scan, surface_points,
                                   tangent_hyperplane)
from veryfree.poly import parse_poly

from helpers import (F2, F3, F5, F7, QQ, random_cubic_form, random_form,
                     random_invertible, F5_SURFACE_SEEDS)


def fermat(field, nvars=4):
    return Hypersurface(parse_poly("+".join(f"X{i}^3" for i in range(nvars)),
                                   nvars, field))


def clebsch(field):
    return Hypersurface(parse_poly(
        "X0^3+X1^3+X2^3+X3^3-(X0+X1+X2+X3)^3", 4, field))


# -- smoothness ----------------------------------------------------------------

def test_is_smooth_examples():
    assert is_smooth(fermat(F7))
    assert not is_smooth(fermat(F3))
    cone = Hypersurface(parse_poly("X0^3+X1^3+X2^3", 4, F7))
    assert not is_smooth(cone)
    assert is_smooth(fermat(QQ))


def test_scan_finds_cone_vertex():
    cone = Hypersurface(parse_poly("X0^3+X1^3+X2^3", 4, F7))
    pts = singular_points_scan(cone, 1)
    assert any(p == ProjPoint(F7, [0, 0, 0, 1]) for p, _ in pts)
    no_x3 = Hypersurface(parse_poly("X0*X1*X2+X1^3+X2^3", 4, F7))
    assert any(p == ProjPoint(F7, [0, 0, 0, 1])
               for p, _ in singular_points_scan(no_x3, 1))


def test_scan_empty_on_smooth_fermat():
    assert singular_points_scan(fermat(F7), 2) == []


def test_smooth_gb_vs_scan_agreement():
    # criterion: on random cubics over F_5 a scan witness forces the
    # chart-ideal test to answer False
    rng = random.Random(30)
    seen_singular = 0
    for trial in range(30):
        f = random_form(F5, 4, 3, rng)
        if f.is_zero():
            continue
        x = Hypersurface(f)
        witnesses = singular_points_scan(x, 1)
        gb_answer = is_smooth(Hypersurface(f), scan_first=False)
        if witnesses:
            seen_singular += 1
            assert not gb_answer
        else:
            x2 = Hypersurface(f)
            assert is_smooth(x2) == gb_answer
    assert seen_singular >= 1


# -- tangent hyperplanes --------------------------------------------------------

def test_tangent_hyperplane_examples():
    x = Hypersurface(parse_poly("X0*X1*X2+X1^3+X2^3+X3*X0^2", 4, F7))
    pt = ProjPoint(F7, [1, 0, 0, 0])
    assert tangent_hyperplane(x, pt) == Hyperplane(F7, [0, 0, 0, 1])
    f2 = fermat(F2)
    pt2 = ProjPoint(F2, [0, 0, 1, 1])
    # oracle: gradient of the char-2 Fermat is (X0^2, X1^2, X2^2, X3^2)
    assert tangent_hyperplane(f2, pt2) == Hyperplane(F2, [0, 0, 1, 1])


def test_point_lies_on_own_tangent_plane():
    for x in (fermat(F7), fermat(F2), clebsch(F7)):
        count = 0
        for pt in surface_points(x):
            if all(not g for g in x.gradient(pt)):
                continue
            assert tangent_hyperplane(x, pt).contains(pt)
            count += 1
            if count >= 25:
                break


def test_tangent_hyperplane_errors():
    x = fermat(F7)
    with pytest.raises(ValueError):
        tangent_hyperplane(x, ProjPoint(F7, [1, 0, 0, 0]))
    cone = Hypersurface(parse_poly("X0^3+X1^3+X2^3", 4, F7))
    with pytest.raises(ValueError):
        tangent_hyperplane(cone, ProjPoint(F7, [0, 0, 0, 1]))


# -- plane sections ---------------------------------------------------------------

def test_plane_section_examples():
    x = Hypersurface(parse_poly("X0*X1*X2+X1^3+X2^3+X3*X0^2", 4, F7))
    section, chart = plane_section(x, Hyperplane(F7, [0, 0, 0, 1]))
    assert section == parse_poly("X0*X1*X2+X1^3+X2^3", 3, F7)

    f2 = fermat(F2)
    section2, _ = plane_section(f2, Hyperplane(F2, [0, 0, 1, 1]))
    assert section2 == parse_poly("X0^3+X1^3", 3, F2)

    section3, _ = plane_section(fermat(F7), Hyperplane(F7, [1, 0, 0, 0]))
    assert section3 == parse_poly("X0^3+X1^3+X2^3", 3, F7)


def test_section_chart_roundtrip():
    x = fermat(F7)
    plane = Hyperplane(F7, [1, 2, 0, 3])
    section, chart = plane_section(x, plane)
    pt = chart.to_ambient([F7.one, F7.scalar(2), F7.scalar(5)])
    assert plane.contains(pt)
    assert chart.to_plane(pt) == ProjPoint(F7, [1, 2, 5])


# -- classification ----------------------------------------------------------------

def test_classify_examples():
    cls = classify_plane_cubic(parse_poly("X0*X1*X2+X1^3+X2^3", 3, F7))
    assert cls.tag == NODAL_INTEGRAL
    assert cls.singular_point == ProjPoint(F7, [1, 0, 0])

    cls2 = classify_plane_cubic(parse_poly("X0*X2^2+X1^3", 3, F7))
    assert cls2.tag == CUSPIDAL_INTEGRAL
    assert cls2.singular_point == ProjPoint(F7, [1, 0, 0])

    cls3 = classify_plane_cubic(parse_poly("X0^3+X1^3", 3, F2))
    assert cls3.tag == THREE_LINES_CONCURRENT
    assert cls3.singular_point == ProjPoint(F2, [0, 0, 1])
    assert cls3.ext_degree_used == 2


def test_classify_full_zoo():
    assert classify_plane_cubic(
        parse_poly("X0^3+X1^3+X2^3", 3, F7)).tag == SMOOTH_CUBIC
    assert classify_plane_cubic(
        parse_poly("X0^3", 3, F7)).tag == TRIPLE_LINE
    assert classify_plane_cubic(
        parse_poly("X0^2*X1", 3, F7)).tag == LINE_DOUBLE_LINE
    assert classify_plane_cubic(
        parse_poly("X0*X1*X2", 3, F7)).tag == THREE_LINES_TRIANGLE
    assert classify_plane_cubic(
        parse_poly("X1*X2*(X1+X2)", 3, F7)).tag == THREE_LINES_CONCURRENT
    # tangent line: conic X1^2 - X0 X2 touches X2 = 0 at (1:0:0)
    assert classify_plane_cubic(
        parse_poly("X2*(X1^2-X0*X2)", 3, F7)).tag == LINE_CONIC_TANGENT
    # transverse line: X1 = 0 meets X1^2 - X0 X2 at (1:0:0) and (0:0:1)
    assert classify_plane_cubic(
        parse_poly("X1*(X1^2-X0*X2)", 3, F7)).tag == LINE_CONIC_TRANSVERSE


def test_classify_char2_tangency():
    # characteristic-2 tangency needs the b != 0 criterion, not the
    # discriminant
    f2 = fermat(F2)
    section, _ = plane_section(f2, Hyperplane(F2, [0, 0, 1, 1]))
    cls = classify_plane_cubic(section)
    assert cls.tag == THREE_LINES_CONCURRENT


def test_classify_invariance_under_plane_coordinates():
    rng = random.Random(8)
    fixtures = [
        parse_poly("X0*X1*X2+X1^3+X2^3", 3, F7),
        parse_poly("X0*X2^2+X1^3", 3, F7),
        parse_poly("X2*(X1^2-X0*X2)", 3, F7),
        parse_poly("X0*X1*X2", 3, F5),
    ]
    for cub in fixtures:
        base = classify_plane_cubic(cub)
        field = cub.field
        for _ in range(20):
            m = random_invertible(field, 3, rng)
            from veryfree.poly import linear_substitute
            moved = linear_substitute(cub, m)
            cls = classify_plane_cubic(moved)
            assert cls.tag == base.tag
            if base.singular_point is not None:
                # transport the singular point through the substitution
                K = cls.singular_point.field
                m_k = [[embed(c, K) for c in row] for row in m]
                image = ProjPoint(K, [
                    sum((m_k[i][j] * cls.singular_point.coords[j]
                         for j in range(1, 3)),
                        m_k[i][0] * cls.singular_point.coords[0])
                    for i in range(3)])
                if base.tag in (NODAL_INTEGRAL, CUSPIDAL_INTEGRAL,
                                LINE_CONIC_TANGENT,
                                THREE_LINES_CONCURRENT):
                    # these classes have one distinguished singular point
                    assert image == base.singular_point.map_field(K)
                else:
                    # otherwise the recorded point is a canonical pick
                    # among several; the transport must still be singular
                    emb = lambda s, K=K: embed(s, K)
                    cub_k = cub.map_field(K, emb)
                    assert not cub_k.evaluate(image.coords)
                    for i in range(3):
                        assert not cub_k.partial(i).evaluate(image.coords)


# -- lines and Eckardt points ---------------------------------------------------

def test_lines_on_f7_fermat():
    lines, work, ext = lines_on_cubic_surface(fermat(F7))
    assert len(lines) == 27 and ext == 1
    target = LineP3(F7, [[1, -1, 0, 0], [0, 0, 1, -1]])
    assert target in set(lines)
    for line in lines:
        from veryfree.poly import compose_with_curve
        assert compose_with_curve(fermat(F7).f, line.param_forms()).is_zero()
    assert len(set(lines)) == 27


def test_lines_on_char2_fermat():
    lines, work, ext = lines_on_cubic_surface(fermat(F2))
    assert len(lines) == 27 and ext == 2 and work is make_field(2, 2)


def test_lines_on_seeded_f5_cubics():
    for seed in F5_SURFACE_SEEDS[:1]:
        x = Hypersurface(random_cubic_form(F5, 4, seed))
        assert is_smooth(x)
        lines, work, ext = lines_on_cubic_surface(x)
        assert len(lines) == 27


def test_lines_reject_singular_surface():
    cone = Hypersurface(parse_poly("X0^3+X1^3+X2^3", 4, F7))
    with pytest.raises(ValueError):
        lines_on_cubic_surface(cone)


def test_eckardt_census_f7_fermat():
    x = fermat(F7)
    lines, work, _ = lines_on_cubic_surface(x)
    rep = eckardt_points(x, lines)
    assert rep.incident_pairs == 135
    assert rep.incident_pairs == 3 * len(rep.eckardt) + len(rep.two_line)
    assert len(rep.eckardt) == 18 and len(rep.two_line) == 81


def test_eckardt_clebsch_contains_permutation_points():
    import itertools
    x = clebsch(F7)
    lines, work, _ = lines_on_cubic_surface(x)
    rep = eckardt_points(x.map_field(work), lines)
    assert len(rep.eckardt) == 10
    expected = set()
    for i, j in itertools.combinations(range(5), 2):
        v = [F7.zero] * 5
        v[i], v[j] = F7.one, F7.scalar(-1)
        expected.add(ProjPoint(F7, v[:4]).map_field(work))
    assert expected == {p for p, _ in rep.eckardt}


def test_eckardt_char2_fermat_all_triple():
    x = fermat(F2)
    lines, work, _ = lines_on_cubic_surface(x)
    rep = eckardt_points(x.map_field(work), lines)
    assert len(rep.two_line) == 0
    assert 3 * len(rep.eckardt) == rep.incident_pairs == 135


def test_scan_reports_each_point_once_across_levels():
    cone = Hypersurface(parse_poly("X0^3+X1^3+X2^3", 4, F7))
    pts = singular_points_scan(cone, 2)
    # the vertex is the only singular point; found at level 1, not
    # re-reported by the level-2 scan
    assert len(pts) == 1
    point, level = pts[0]
    assert level == 1 and point == ProjPoint(F7, [0, 0, 0, 1])


def test_hyperplane_section_chart_in_p4():
    from veryfree.hypersurface import hyperplane_section
    x = Hypersurface(parse_poly("X0^3+X1^3+X2^3+X3^3+X4^3", 5, F7))
    plane = Hyperplane(F7, [1, 1, 0, 2, 0])
    section, chart = hyperplane_section(x, plane)
    assert section.nvars == 4 and section.total_degree == 3
    pt = chart.to_ambient([F7.one, F7.scalar(3), F7.zero, F7.scalar(2)])
    assert plane.contains(pt)
    assert chart.to_plane(pt) == ProjPoint(F7, [1, 3, 0, 2])
