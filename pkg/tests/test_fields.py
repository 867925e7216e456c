"""Test-function catalog: analytic derivatives against finite differences,
exact sphere means against fixed-order angular quadrature, sign tags."""

import math

import numpy as np
import pytest

from mvlab.errors import UnsupportedError
from mvlab.fields import angular_quadrature_mean, classification_check, make_field

EUCLIDEAN_FIELDS = ["constant-1", "linear", "harmonic-quadratic",
                    "subharmonic", "superharmonic", "caloric-quadratic",
                    "gaussian-translate"]


def _fd_laplacian_euclidean(field, y, t, h=1e-4):
    """Cartesian 5-point Laplacian of a euclidean catalog field."""
    n = len(y)

    def v(pt):
        rho = float(np.linalg.norm(pt))
        omega = tuple(pt / rho) if rho > 0 else None
        return field.value(rho, t, omega)

    total = -2.0 * n * v(y)
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        total += v(y + e) + v(y - e)
    return total / (h * h)


def _fd_laplacian_radial(field, geom, rho, t, h=1e-4):
    f = lambda r: field.value(r, t, None)
    d2 = (f(rho + h) - 2.0 * f(rho) + f(rho - h)) / (h * h)
    d1 = (f(rho + h) - f(rho - h)) / (2.0 * h)
    return d2 + (geom.n - 1) * geom.warp_dr(rho, t) / geom.warp(rho, t) * d1


def test_catalog_values(e2, e3, h3):
    cq = make_field("caloric-quadratic", e2)
    assert cq.dt(1.0, 0.3) - cq.laplacian(1.0, 0.3) == 0.0
    assert cq.value(1.0, 0.5) == pytest.approx(1.0 + 2.0 * 2 * 0.5)

    sup = make_field("superharmonic", e3, C=10.0)
    assert sup.laplacian(0.7, 0.0) == -6.0
    assert sup.center_value() == 10.0

    er = make_field("exp-radial", h3)
    d = 0.8
    expect = math.exp(-d) * (1.0 - 2.0 / math.tanh(d))
    assert er.laplacian(d, 0.0) == pytest.approx(expect, rel=1e-14)
    assert expect < 0.0


@pytest.mark.parametrize("name", EUCLIDEAN_FIELDS)
@pytest.mark.parametrize("n", [2, 3])
def test_fd_laplacian_euclidean(name, n, rng):
    from mvlab.geometry import FlowGeometry
    geom = FlowGeometry.euclidean(n)
    field = make_field(name, geom)
    worst = 0.0
    for _ in range(20):
        y = rng.uniform(-1.2, 1.2, size=n)
        if np.linalg.norm(y) < 0.15:
            y += 0.4
        t = float(rng.uniform(-0.1, 0.3))
        fd = _fd_laplacian_euclidean(field, y, t)
        rho = float(np.linalg.norm(y))
        omega = tuple(y / rho)
        worst = max(worst, abs(fd - field.laplacian(rho, t, omega)))
    assert worst <= 1e-5  # O(h^2) central differences at h = 1e-4


def test_fd_laplacian_hyperbolic(h3, rng):
    for name in ("exp-radial", "subharmonic"):
        field = make_field(name, h3)
        for _ in range(20):
            rho = float(rng.uniform(0.3, 2.0))
            fd = _fd_laplacian_radial(field, h3, rho, 0.0)
            assert abs(fd - field.laplacian(rho, 0.0)) <= 1e-6


@pytest.mark.parametrize("name", EUCLIDEAN_FIELDS)
@pytest.mark.parametrize("n", [2, 3])
def test_sphere_means_match_angular_quadrature(name, n, rng):
    from mvlab.geometry import FlowGeometry
    geom = FlowGeometry.euclidean(n)
    field = make_field(name, geom)
    worst = 0.0
    for _ in range(20):
        rho = float(rng.uniform(0.1, 1.8))
        t = float(rng.uniform(-0.1, 0.4))
        oracle = angular_quadrature_mean(field, rho, t, order=48)
        worst = max(worst, abs(oracle - field.mean_value(rho, t)))
    assert worst <= 1e-10


def test_gaussian_translate_mean_dt_consistency(e2):
    # the mean of the Laplacian equals d/dt of the mean for a caloric field
    f = make_field("gaussian-translate", e2)
    h = 1e-5
    for rho in (0.3, 0.9, 1.5):
        fd = (f.mean_value(rho, h) - f.mean_value(rho, -h)) / (2.0 * h)
        assert abs(fd - f.mean_laplacian(rho, 0.0)) <= 1e-9


def test_classification_checks(e3):
    one = make_field("constant-1", e3)
    pts = [(0.5, 0.0, None), (1.5, 0.2, None)]
    assert classification_check(one, pts) == 0.0

    sub = make_field("subharmonic", e3)
    assert classification_check(sub, pts) == 0.0

    hq = make_field("harmonic-quadratic", e3)
    assert classification_check(hq, pts) == 0.0
    assert hq.mean_value(1.0, 0.0) == 0.0  # odd harmonics average to zero

    with pytest.raises(ValueError):
        classification_check(one, [])


def test_unsupported_pairs(e2, h3, s3):
    with pytest.raises(UnsupportedError):
        make_field("exp-radial", e2)
    with pytest.raises(UnsupportedError):
        make_field("harmonic-quadratic", h3)
    with pytest.raises(UnsupportedError):
        make_field("power", e2)  # needs n >= 3
    with pytest.raises(UnsupportedError):
        make_field("no-such-field", e2)
    with pytest.raises(UnsupportedError):
        make_field("caloric-quadratic", s3)
