import math

import mpmath
import numpy as np
import pytest

from excheck import embedding as em
from excheck.errors import InvalidArgument, InvalidParameter
from oracles import det3, ec_multiples


@pytest.fixture(scope="module")
def emb3():
    return em.embed_real(3)


def test_real_root():
    e0 = em.real_root()
    assert abs(em.curve(e0)) < 1e-15
    assert e0 == pytest.approx(float(mpmath.findroot(lambda x: x ** 3 - x + 1, -1.3)), abs=1e-15)


def test_half_period_against_mpmath():
    emb = em.embed_real(1)
    # t = e0 + v^2 and f(t) = (t - e0)(t^2 + e0 t + e0^2 - 1)
    with mpmath.workdps(30):
        e0 = mpmath.findroot(lambda x: x ** 3 - x + 1, -1.3)
        ref = mpmath.quad(lambda v: 2 / mpmath.sqrt((e0 + v * v) ** 2 + e0 * (e0 + v * v) + e0 ** 2 - 1),
                          [0, 1, 4, mpmath.inf])
    assert emb.half_period == pytest.approx(float(ref), rel=1e-10)


def test_points_lie_on_curve(emb3):
    assert emb3.max_residual < 1e-13
    for t in emb3.affine_residues():
        x, y = emb3.point(t)
        assert y * y == pytest.approx(x ** 3 - x + 1, abs=1e-12)


def test_identity_and_mirror(emb3):
    assert emb3.point(0) is None
    for t in range(1, 21):
        assert emb3.point(-t) == (emb3.point(t)[0], -emb3.point(t)[1])


@pytest.mark.parametrize("m", [1, 2, 5])
def test_uniformisation_is_a_homomorphism(m):
    """t*P from the chord-tangent law must land on the embedded point t."""
    emb = em.embed_real(m)
    mult = ec_multiples(emb.point(1), 7 * m - 1)
    for t in range(1, 7 * m):
        x, y = mult[t - 1]
        px, py = emb.point(t)
        assert float(abs(x - px)) < 1e-6 * max(1, abs(px))
        assert float(abs(y - py)) < 1e-6 * max(1, abs(py))


def test_embed_rejects_bad_parameters():
    with pytest.raises(InvalidParameter):
        em.embed_real(0)
    with pytest.raises(InvalidParameter):
        em.embed_real(16)
    with pytest.raises(InvalidParameter):
        em.embed_real(2, tol=0)


def test_collinearity_check_examples(emb3):
    rec = em.collinearity_check(emb3, 1, 2, 18)
    assert rec.collinear and rec.predicted and rec.agrees
    rec = em.collinearity_check(emb3, 1, 2, 3)
    assert not rec.collinear and not rec.predicted
    # line through O is vertical
    assert em.collinearity_check(emb3, 0, 5, 16).collinear
    assert not em.collinearity_check(emb3, 0, 5, 15).collinear
    with pytest.raises(InvalidArgument):
        em.collinearity_check(emb3, 1, 1, 19)


def test_det_against_pure_python(emb3):
    rows = emb3.normalized_rows([1, 2, 18])
    assert abs(det3(rows.tolist())) < 1e-12
    rows = emb3.normalized_rows([1, 2, 4])
    assert abs(det3(rows.tolist())) == pytest.approx(abs(np.linalg.det(rows)), rel=1e-9)


@pytest.mark.parametrize("m", [1, 2, 4, 7])
def test_scan_agrees_with_group_law(m):
    emb = em.embed_real(m)
    scan = em.scan_triples(emb)
    assert scan.triples == math.comb(7 * m - 1, 3)
    assert scan.mismatches == 0
    assert em.scan_vertical_lines(emb) == 0
    assert scan.gap_ratio >= em.MIN_GAP_RATIO


@pytest.mark.parametrize("m", [1, 2, 3])
def test_pair_line_scan_matches_literal_quadruples(m):
    emb = em.embed_real(m)
    assert em.collinear_quadruples(emb) == []
    assert em.max_points_on_pair_lines(emb) <= 3


def test_separation_shrinks_with_m():
    # non-collinear determinants decay roughly like m^-4; the measured values
    # stay far above the collinear ones
    mins = [em.scan_triples(em.embed_real(m)).min_noncollinear_det for m in (1, 4, 8)]
    assert mins[0] > mins[1] > mins[2] > 1e-5
