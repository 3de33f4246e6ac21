import csv
import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilherm.complex_structures import build_two_step, classify_algebra_from_coeffs
from nilherm.hermitian import skt_condition
from nilherm.lie import classify_by_fingerprint
from nilherm.region import GridAxis, RegionPoint, grid_nodes, ovaloid_value, scan_region, skt_region_classify
from nilherm.scalar import Q

from conftest import rationals


@pytest.mark.parametrize("rho, p, q, y, tag", [
    (1, 0, 0, 0, "h5"), (1, 1, 0, 0, "h4"), (0, 0, 0, 0, "h8"), (0, 0, 0, 1, "h2"),
    (1, 2, 0, 0, "h2"), (1, Q(1, 2), Q(1, 2), Q(1, 2), "h5"),
])
def test_classify_examples(rho, p, q, y, tag):
    assert skt_region_classify(RegionPoint(rho, p, q, y)).tag == tag


def test_exact_boundary_through_y_squared():
    pt = RegionPoint(1, 0, 0, 0.8660254037844386, y2=Q(3, 4))
    assert ovaloid_value(pt) == 0
    assert skt_region_classify(pt).tag == "h4"


@given(st.integers(0, 1), rationals(2, 4), rationals(2, 4), rationals(2, 4))
def test_region_points_are_skt_and_classified_consistently(rho, p, q, y):
    pt = RegionPoint(rho, p, q, y)
    c = pt.coeffs()
    assert skt_condition(c)
    assert skt_region_classify(pt) == classify_algebra_from_coeffs(c)


@given(st.integers(0, 1), rationals(1, 2), rationals(1, 2), rationals(1, 2))
def test_region_matches_fingerprint(rho, p, q, y):
    pt = RegionPoint(rho, p, q, y)
    assert skt_region_classify(pt) == classify_by_fingerprint(build_two_step(pt.coeffs()).algebra)


def test_grid_nodes():
    assert [v.re for v in grid_nodes(GridAxis(-1, 1, 3), exact=True)] == [-1, 0, 1]
    assert [v.re for v in grid_nodes(GridAxis(Q(1, 2), 5, 1), exact=True)] == [Q(1, 2)]
    with pytest.raises(ValueError):
        GridAxis(0, 1, 0)


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_figure_grid_against_ovaloid():
    text = scan_region(1, GridAxis(-2, 2, 41), GridAxis(0, 0, 1), GridAxis(-2, 2, 41), exact=True)
    rows = _rows(text)
    assert len(rows) == 1681
    assert text.startswith("p,q,y,class\n")
    for row in rows:
        p, y = Q(row["p"]), Q(row["y"])
        val = 4 * y * y - 4 + (1 + p * p) ** 2
        assert row["class"] == ("h2" if val > 0 else "h4" if val == 0 else "h5")
    keys = [(Q(r["p"]), Q(r["y"])) for r in rows]
    assert keys == sorted(keys)


def test_single_point_grid():
    rows = _rows(scan_region(0, GridAxis(0, 0, 1), GridAxis(0, 0, 1), GridAxis(0, 0, 1)))
    assert [r["class"] for r in rows] == ["h8"]


def test_grid_containing_boundary_point():
    rows = _rows(scan_region(1, GridAxis(-1, 1, 3), GridAxis(0, 0, 1), GridAxis(-1, 1, 3)))
    hit = [r for r in rows if float(r["p"]) == 1 and float(r["y"]) == 0]
    assert [r["class"] for r in hit] == ["h4"]


def test_deterministic_and_parallel(tmp_path):
    axes = (GridAxis(-2, 2, 9), GridAxis(-1, 1, 5), GridAxis(-2, 2, 9))
    out = tmp_path / "grid.csv"
    a = scan_region(1, *axes, out=out)
    b = scan_region(1, *axes, jobs=2)
    assert a == b == out.read_bytes().decode("utf-8")
    assert len(_rows(a)) == 9 * 5 * 9


def test_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        scan_region(0, GridAxis(0, 0, 1), GridAxis(0, 0, 1), GridAxis(0, 0, 1), out=tmp_path / "no" / "x.csv")
