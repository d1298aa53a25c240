import math

import pytest

from zetazeros.config import EvalConfig, DEFAULT_CONFIG
from zetazeros.errors import NearZeroOnContour, PoleProximity
from zetazeros.expr import parse_expr
from zetazeros.zeros import (
    ContourConfig,
    DEFAULT_CONTOUR,
    Rectangle,
    _split_cell,
    _Walker,
    critical_line_check,
    density_scan,
    expression_fn,
    localize_zeros,
    winding_number,
)

ZETA = parse_expr("zeta(s)")


def test_rectangle_validation():
    with pytest.raises(ValueError):
        Rectangle(1.0, 0.5, 0, 1)
    r = Rectangle(0, 1, 2, 4)
    assert r.center == 0.5 + 3j
    assert r.boundary_distance(0.5 + 3j) == 0.5
    assert r.boundary_distance(2.0 + 3j) == 1.0


def test_winding_first_zero_cell():
    # Coarse |zeta| scan over (0.4,0.6) x (14,14.3) puts the minimum near
    # t = 14.13; the cell must contain exactly one zero.
    assert winding_number(ZETA, Rectangle(0.4, 0.6, 14.0, 14.3)) == 1


def test_winding_zero_free_cell():
    assert winding_number(ZETA, Rectangle(2.0, 3.0, 1.0, 2.0)) == 0


def test_winding_pole_cell():
    assert winding_number(ZETA, Rectangle(0.8, 1.2, -0.2, 0.2)) == -1


def test_winding_rejects_pole_near_contour():
    with pytest.raises(PoleProximity):
        winding_number(ZETA, Rectangle(1.0 - 5e-8, 2.0, -1.0, 1.0))


def test_subdivision_conservation():
    e = parse_expr("zeta(s)^2-zeta(2*s)")
    rect = Rectangle(0.55, 2.0, 30.0, 60.0)
    walker = _Walker(expression_fn(e, DEFAULT_CONFIG), DEFAULT_CONTOUR)
    w = walker.winding(rect)
    kids = _split_cell(walker, rect, w, DEFAULT_CONTOUR)
    assert sum(wc for _, wc in kids) == w
    assert w >= 1


def test_localize_first_zeta_zero():
    res = localize_zeros(ZETA, Rectangle(0.4, 0.6, 14.0, 15.0))
    assert len(res.records) == 1 and not res.unresolved
    rec = res.records[0]
    assert rec.winding_mult == 1
    assert rec.residual < 1e-10
    assert abs(rec.location.re - 0.5) < 1e-9
    assert abs(rec.location.im - 14.134725141734693) < 1e-8
    assert rec.rect.contains(rec.location.z)


def test_localize_double_zero_multiplicity():
    res = localize_zeros(parse_expr("zeta(s)^2"), Rectangle(0.4, 0.6, 14.0, 15.0))
    assert len(res.records) == 1
    rec = res.records[0]
    assert rec.winding_mult == 2
    assert abs(rec.location.z - (0.5 + 14.134725141734693j)) < 1e-6
    assert rec.residual < 1e-8


def test_record_reverification():
    # The isolating box around each record must reproduce its multiplicity.
    for text in ("zeta(s)", "zeta(s)^2"):
        e = parse_expr(text)
        res = localize_zeros(e, Rectangle(0.4, 0.6, 14.0, 15.0))
        for rec in res.records:
            r = max(1e-9, 100 * rec.location.abs_err)
            z = rec.location.z
            box = Rectangle(z.real - r, z.real + r, z.imag - r, z.imag + r)
            assert winding_number(e, box) == rec.winding_mult


def test_conjugate_pairing():
    e = parse_expr("zeta(s)^2-zeta(2*s)")
    upper = localize_zeros(e, Rectangle(0.55, 2.0, 20.0, 45.0))
    lower = localize_zeros(e, Rectangle(0.55, 2.0, -45.0, -20.0))
    assert len(upper.records) == len(lower.records) >= 2
    for u, l in zip(upper.records, reversed(lower.records)):
        assert abs(u.location.z - l.location.z.conjugate()) < 1e-9


def test_near_zero_on_contour_jitter():
    # 1 - 2^{-s} vanishes at s = 0; a rectangle with the zero on its edge
    # must be jittered outward and still produce the record.
    e = parse_expr("dirichlet[(1,0),(-1,0.6931471805599453)]")
    res = localize_zeros(e, Rectangle(0.0, 1.0, -1.0, 1.0))
    assert len(res.records) == 1
    assert abs(res.records[0].location.z) < 1e-10


def test_localize_requires_pole_free_rect():
    with pytest.raises(PoleProximity):
        localize_zeros(ZETA, Rectangle(0.5, 1.5, -0.5, 0.5))


def test_first_offline_zero_of_zeta_plus_zeta2s():
    # The lowest zero of zeta(s)+zeta(2s) strictly right of the critical line
    # (located by a coarse |F| scan during development, then Newton-polished).
    e = parse_expr("zeta(s)+zeta(2*s)")
    res = localize_zeros(e, Rectangle(0.505, 1.0, 100.0, 120.0))
    assert len(res.records) == 1 and not res.unresolved
    rec = res.records[0]
    assert abs(rec.location.z - (0.5140997687 + 110.7767800j)) < 1e-6
    assert rec.residual < 1e-10


def test_thread_determinism_small():
    e = parse_expr("zeta(s)^2-zeta(2*s)")
    rect = Rectangle(0.55, 2.0, 60.0, 80.0)
    assert localize_zeros(e, rect, threads=1) == localize_zeros(e, rect, threads=8)


def test_density_scan_basic():
    e = parse_expr("zeta(s)^2-zeta(2*s)")
    scan = density_scan(e, 0.55, (50.0, 100.0))
    assert scan.counts[0] <= scan.counts[1]
    assert scan.counts == (3, 13)
    assert scan.complete
    assert scan.fit_slope == pytest.approx((13 - 3) / 50.0)


def test_density_scan_zeta_is_zero_free():
    scan = density_scan(ZETA, 0.55, (50.0,))
    assert scan.counts == (0,)


def test_density_scan_trivial_T():
    scan = density_scan(ZETA, 0.55, (0.0,))
    assert scan.counts == (0,)
    assert scan.fit_slope == 0.0


def test_density_scan_validation():
    with pytest.raises(ValueError):
        density_scan(ZETA, 0.4, (10.0,))
    with pytest.raises(ValueError):
        density_scan(ZETA, 0.55, (100.0, 50.0))


def test_critical_line_check_vacuous():
    e = parse_expr("dirichlet[(1,0)]")       # constant 1: no zeros anywhere
    rep = critical_line_check(e, 10.0, 1e-6)
    assert rep.passed and not rep.records and rep.max_offline == 0.0


def test_exact_zero_count_dirichlet_polynomial():
    # 1 - 2^{-s} vanishes exactly at s = 2 pi i k / ln 2; three zeros have
    # 0 < t < 30 (t = 9.0647, 18.1294, 27.1941).
    e = parse_expr("dirichlet[(1,0),(-1,0.6931471805599453)]")
    assert winding_number(e, Rectangle(-1.0, 1.0, 1.0, 30.0)) == 3
    res = localize_zeros(e, Rectangle(-1.0, 1.0, 1.0, 30.0))
    assert len(res.records) == 3
    ln2 = math.log(2.0)
    for k, rec in enumerate(res.records, start=1):
        expected = complex(0.0, 2 * math.pi * k / ln2)
        assert abs(rec.location.z - expected) < 1e-9


def test_near_zero_error_carries_point():
    # A sample placed exactly on a zero must raise rather than wind silently.
    e = parse_expr("dirichlet[(1,0),(-1,0.6931471805599453)]")
    walker = _Walker(expression_fn(e, DEFAULT_CONFIG), DEFAULT_CONTOUR)
    with pytest.raises(NearZeroOnContour):
        walker.winding(Rectangle(0.0, 1.0, -1.0, 1.0))
