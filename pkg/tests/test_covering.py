"""Covering ratios, covering numbers, indices, and certificates."""

import math

import numpy as np
import pytest

from homothety_lab.bodies import DomainError, Polytope
from homothety_lab.covering import (
    CoverConfig,
    Homothet,
    coin,
    coin_product_bounds,
    coin_report,
    covering_parameter_report,
    covers,
    gamma_m,
    n_lambda,
    tightly_covered_report,
    weak_coin,
)
from homothety_lab.sampling import random_polygon
from homothety_lab.search import SearchConfig

from oracles import segment_coin, segment_gamma

CFG = SearchConfig(restarts=10)
SEGMENT = Polytope([[-1.0], [1.0]])


# ---------------------------------------------------------------------------
# covers() gate

def test_covers_square_quadrants(square):
    quads = [Homothet(0.5, (0.0, 0.0)), Homothet(0.5, (0.5, 0.0)),
             Homothet(0.5, (0.0, 0.5)), Homothet(0.5, (0.5, 0.5))]
    ok, wit = covers(CoverConfig(square, tuple(quads)))
    assert ok and wit is None


def test_covers_detects_gap(square):
    three = [Homothet(0.5, (0.0, 0.0)), Homothet(0.5, (0.5, 0.0)),
             Homothet(0.5, (0.0, 0.5))]
    ok, wit = covers(CoverConfig(square, tuple(three)))
    assert not ok
    assert wit is not None
    # witness sits in the uncovered quadrant
    assert wit[0] > 0.5 - 1e-9 and wit[1] > 0.5 - 1e-9


def test_covers_segment_intervals():
    ok, _ = covers(CoverConfig(SEGMENT, (Homothet(0.5, (-0.5,)),
                                         Homothet(0.5, (0.5,)))))
    assert ok
    ok2, wit = covers(CoverConfig(SEGMENT, (Homothet(0.4, (-0.6,)),
                                            Homothet(0.4, (0.6,)))))
    assert not ok2 and wit is not None


def test_covers_disk_by_disks(disk):
    k, lam = 6, 0.505  # ring-plus-center cover with slack off the tight ratio
    ring_r = math.cos(math.pi / k)
    hs = [Homothet(lam, (ring_r * math.cos(2 * math.pi * i / k),
                         ring_r * math.sin(2 * math.pi * i / k)))
          for i in range(k)]
    hs.append(Homothet(lam, (0.0, 0.0)))
    ok, _ = covers(CoverConfig(disk, tuple(hs)))
    assert ok
    ok2, wit = covers(CoverConfig(disk, tuple(hs[:-1])))  # drop the middle
    assert not ok2 and wit is not None


# ---------------------------------------------------------------------------
# gamma_m pinned values

def test_gamma_segment_tiles():
    for m in (2, 3, 5):
        val, cert = gamma_m(SEGMENT, m, CFG)
        assert val == pytest.approx(segment_gamma(m), abs=1e-6)
        assert cert.status == "verified"


def test_gamma_square_grid(square):
    val, cert = gamma_m(square, 4, CFG)
    assert val == pytest.approx(0.5, abs=1e-6)
    ok, _ = covers(cert.to_config(square))
    assert ok
    val9, _ = gamma_m(square, 9, CFG)
    assert val9 == pytest.approx(1.0 / 3.0, abs=1e-6)
    # between perfect squares the grid cannot improve
    val5, _ = gamma_m(square, 5, CFG)
    assert val5 == pytest.approx(0.5, abs=1e-6)


def test_gamma_triangle_three_and_four(triangle):
    val3, cert3 = gamma_m(triangle, 3, CFG)
    assert val3 == pytest.approx(2.0 / 3.0, abs=5e-3)
    ok, _ = covers(cert3.to_config(triangle))
    assert ok
    val4, cert4 = gamma_m(triangle, 4, CFG)
    assert val4 == pytest.approx(4.0 / 7.0, abs=5e-3)
    ok4, _ = covers(cert4.to_config(triangle))
    assert ok4


def test_gamma_monotone_in_m(triangle):
    prev = 1.1
    for m in (2, 3, 4, 5, 6):
        val, _ = gamma_m(triangle, m, CFG)
        assert val <= prev + 1e-9
        prev = val


def test_gamma_certificate_replays_through_covers():
    rng = np.random.default_rng(77)
    P = random_polygon(rng)
    val, cert = gamma_m(P, 5, CFG)
    ok, wit = covers(cert.to_config(P))
    assert ok, wit
    assert cert.lam == pytest.approx(val)


def test_gamma_rejects_bad_m(square):
    with pytest.raises(DomainError):
        gamma_m(square, 0, CFG)
    with pytest.raises(DomainError):
        gamma_m(square, 2.5, CFG)


# ---------------------------------------------------------------------------
# covering number

def test_n_lambda_square(square):
    n, cert = n_lambda(square, 0.5, CFG)
    assert n == 4
    assert cert.m == 4
    ok, _ = covers(cert.to_config(square))
    assert ok
    n3, _ = n_lambda(square, 1.0 / 3.0, CFG)
    assert n3 == 9


def test_n_lambda_segment():
    n, _ = n_lambda(SEGMENT, 0.5, CFG)
    assert n == 2
    n, _ = n_lambda(SEGMENT, 0.26, CFG)
    assert n == 4


def test_n_lambda_identity_and_domain(square):
    n, cert = n_lambda(square, 1.0, CFG)
    assert n == 1 and cert.lam == pytest.approx(1.0)
    with pytest.raises(DomainError):
        n_lambda(square, 0.0, CFG)
    with pytest.raises(DomainError):
        n_lambda(square, 1.5, CFG)


# ---------------------------------------------------------------------------
# indices

def test_coin_square_is_eight(square):
    value, (m, lam) = coin(square, CFG)
    assert value == pytest.approx(8.0, abs=1e-6)
    assert m == 4 and lam == pytest.approx(0.5, abs=1e-6)


def test_coin_segment_is_four():
    value, (m, lam) = coin(SEGMENT, CFG)
    assert value == pytest.approx(segment_coin(), abs=1e-6)
    assert m == 2


def test_coin_report_table_is_upper_bound_consistent(square):
    rep = coin_report(square, CFG)
    assert rep.value == pytest.approx(8.0, abs=1e-6)
    for m, val in rep.table:
        assert 0.0 < val <= 1.0
    ok, _ = covers(rep.certificate.to_config(square))
    assert ok


def test_weak_coin_le_coin(square, triangle):
    for K in (square, triangle):
        w = weak_coin(K, CFG)
        c, _ = coin(K, CFG)
        assert w <= c + 1e-9


def test_weak_coin_triangle_value(triangle):
    # best relaxed term uses gamma_3 = 2/3: 3 / (1 - 2/3) = 9
    w = weak_coin(triangle, CFG)
    assert w == pytest.approx(9.0, abs=0.15)


# ---------------------------------------------------------------------------
# covering parameter

def test_covering_parameter_square(square):
    rep = covering_parameter_report(square, CFG)
    # four half-size tiles give sum 4 / (1 - 1/2) = 8; nothing beats the tile
    assert rep.value <= 8.0 + 1e-6
    assert rep.value >= 4.0
    assert rep.converged


def test_covering_parameter_homothets_cover(square):
    rep = covering_parameter_report(square, CFG)
    ok, _ = covers(CoverConfig(square, rep.homothets))
    assert ok


# ---------------------------------------------------------------------------
# tightly covered

def test_tightly_covered_square_supported(square):
    rep = tightly_covered_report(square, (0.4, 0.5, 0.7), CFG)
    assert rep.status == "supported"


def test_tightly_covered_segment_supported():
    rep = tightly_covered_report(SEGMENT, (0.3, 0.5, 0.8), CFG)
    assert rep.status == "supported"


def test_tightly_covered_disk_refuted(disk):
    rep = tightly_covered_report(disk, (0.7,), CFG)
    assert rep.status == "refuted"
    assert rep.witness_lambda == pytest.approx(0.7)
    detail = rep.details[0]
    assert detail.points is None and detail.exhausted


# ---------------------------------------------------------------------------
# products

def test_coin_product_bounds_square_segment(square):
    rep = coin_product_bounds([square, SEGMENT], CFG)
    assert rep.max_coin == pytest.approx(8.0, abs=1e-6)
    assert rep.chain_ok
    # best mixed term: N_{1/2}(square) * N_{1/2}(segment) / (1 - 1/2) = 16
    assert rep.inf_term == pytest.approx(16.0, abs=1e-6)
    assert rep.lambda_star == pytest.approx(0.5)
    assert rep.product_term == pytest.approx(32.0, abs=1e-3)
    # the square x segment prism is a box, so its coin is exact
    assert rep.direct_sum_coin == pytest.approx(16.0, abs=1e-6)
    assert rep.max_coin <= rep.direct_sum_coin <= rep.inf_term + 1e-9


def test_cover_certificate_jsonable_roundtrip(square):
    _, cert = gamma_m(square, 4, CFG)
    doc = cert.to_jsonable()
    assert doc["m"] == 4
    assert doc["lambda"] == pytest.approx(0.5, abs=1e-6)
    assert len(doc["translations"]) == 4
    assert doc["status"] == "verified"
