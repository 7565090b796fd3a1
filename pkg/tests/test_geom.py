import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from ortho import geom
from ortho.geom import INF, Geodesic, Horoball, UhsPoint, UnitTangent, uhs

from conftest import N_SAMPLES, random_boundary, random_point, random_sl2c, random_sl2r


# --- distances ------------------------------------------------------------------


def test_vertical_distance():
    assert geom.dist(uhs(0, 1), uhs(0, math.e)) == pytest.approx(1, abs=1e-12)


def test_hyperboloid_distance():
    x = geom.HyperboloidPoint([1, 0, 0])
    y = geom.HyperboloidPoint([math.cosh(1), math.sinh(1), 0])
    assert geom.dist(x, y) == pytest.approx(1, abs=1e-12)


def test_horizontal_distance_matches_hyperboloid():
    x, y = uhs(0, 1), uhs(3, 1)
    via_h = geom.dist(geom.to_hyperboloid(x), geom.to_hyperboloid(y))
    assert geom.dist(x, y) == pytest.approx(math.acosh(1 + 9 / 2), abs=1e-12)
    assert via_h == pytest.approx(math.acosh(5.5), abs=1e-12)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        geom.dist(uhs(0, 1), uhs(0, 0, 1))


@pytest.mark.parametrize("dim", [2, 3, 5])
def test_distance_symmetry_and_zero(rng, dim):
    for _ in range(100):
        x, y = random_point(rng, dim), random_point(rng, dim)
        assert geom.dist(x, y) == pytest.approx(geom.dist(y, x), abs=1e-12)
        assert geom.dist(x, x) == 0


# --- Busemann cocycle -------------------------------------------------------------


def test_busemann_examples():
    assert geom.busemann([0.0], uhs(0, 1), uhs(0, 1)) == 0
    assert geom.busemann([0.0], uhs(0, 1), uhs(0, 1 / math.e)) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("dim", [2, 3])
def test_busemann_cocycle_and_bound(rng, dim):
    for _ in range(N_SAMPLES):
        xi = random_boundary(rng, dim) if rng.random() < 0.8 else INF
        x, y, z = (random_point(rng, dim) for _ in range(3))
        bxy, byz, bxz = (geom.busemann(xi, p, q) for p, q in ((x, y), (y, z), (x, z)))
        assert bxy + byz - bxz == pytest.approx(0, abs=1e-10)
        assert geom.busemann(xi, y, x) == pytest.approx(-bxy, abs=1e-10)
        assert abs(bxy) <= geom.dist(x, y) + 1e-10


def test_busemann_is_a_limit():
    xi, x, y = np.array([0.7]), uhs(0.1, 0.5), uhs(-1.2, 2.0)
    far = UhsPoint(xi, 1e-7)
    assert geom.dist(x, far) - geom.dist(y, far) == pytest.approx(geom.busemann(xi, x, y), abs=1e-6)


# --- isometry invariance --------------------------------------------------------------


def _random_object(rng, dim):
    kind = rng.integers(3)
    if kind == 0:
        return random_point(rng, dim)
    if kind == 1:
        if rng.random() < 0.3:
            return Horoball(INF, float(rng.uniform(0.5, 3)))
        return Horoball(random_boundary(rng, dim), float(rng.uniform(0.1, 2)))
    if rng.random() < 0.2:
        return Geodesic(INF, random_boundary(rng, dim))
    return Geodesic(random_boundary(rng, dim), random_boundary(rng, dim))


@pytest.mark.parametrize("dim", [2, 3])
def test_isometry_invariance(rng, dim):
    make = random_sl2r if dim == 2 else random_sl2c
    checked = 0
    while checked < N_SAMPLES:
        a, b = _random_object(rng, dim), _random_object(rng, dim)
        if isinstance(a, Geodesic) and isinstance(b, Geodesic):
            continue
        g = make(rng)
        try:
            before = geom.dist_between(a, b)
        except ValueError:
            continue  # a geodesic ending at a horoball's center
        after = geom.dist_between(geom.moebius_apply_object(g, a, dim),
                                  geom.moebius_apply_object(g, b, dim))
        assert after == pytest.approx(before, abs=1e-9 * max(1, abs(before)))
        checked += 1


@pytest.mark.parametrize("dim", [2, 3])
def test_busemann_equivariance(rng, dim):
    make = random_sl2r if dim == 2 else random_sl2c
    for _ in range(N_SAMPLES):
        g = make(rng)
        xi = random_boundary(rng, dim)
        x, y = random_point(rng, dim), random_point(rng, dim)
        gxi = geom.moebius_apply(g, xi)
        lhs = geom.busemann(gxi, geom.moebius_apply(g, x), geom.moebius_apply(g, y))
        assert lhs == pytest.approx(geom.busemann(xi, x, y), abs=1e-8)


# --- visual distance --------------------------------------------------------------------


def test_visual_example():
    assert geom.visual_dist(uhs(0, 1), [1.0], [-1.0]) == pytest.approx(1, abs=1e-12)
    assert geom.visual_dist(uhs(0, 1), [1.0], [1.0]) == 0


def test_visual_conformal_ratio_and_sandwich(rng):
    for _ in range(N_SAMPLES):
        xi, eta = random_boundary(rng), random_boundary(rng)
        x, y = random_point(rng), random_point(rng)
        ratio = geom.visual_dist(x, xi, eta) / geom.visual_dist(y, xi, eta)
        expected = math.exp(-(geom.busemann(xi, x, y) + geom.busemann(eta, x, y)) / 2)
        assert ratio == pytest.approx(expected, rel=1e-9)
        d = max(geom.dist_between(x, Geodesic(xi, eta)), 0.0)
        v = geom.visual_dist(x, xi, eta)
        assert math.exp(-d) <= v * (1 + 1e-9)
        assert v <= (1 + math.sqrt(2)) * math.exp(-d) * (1 + 1e-9)


def test_visual_moebius_invariance(rng):
    for _ in range(N_SAMPLES):
        g = random_sl2r(rng)
        xi, eta, x = random_boundary(rng), random_boundary(rng), random_point(rng)
        gxi, geta = geom.moebius_apply(g, xi), geom.moebius_apply(g, eta)
        if gxi is INF or geta is INF:
            continue
        lhs = geom.visual_dist(geom.moebius_apply(g, x), gxi, geta)
        assert lhs == pytest.approx(geom.visual_dist(x, xi, eta), rel=1e-8)


# --- Hamenstädt distance ---------------------------------------------------------------------


def test_hamenstadt_standard():
    hb = Horoball(INF, 1.0)
    assert geom.hamenstadt_dist(hb, [0.0], [3.0]) == pytest.approx(3)
    assert geom.hamenstadt_limit(hb, [0.0], [3.0]) == pytest.approx(3, rel=1e-9)
    assert geom.hamenstadt_dist(hb, [2.0], [2.0]) == 0


def test_hamenstadt_scaling():
    for s in (0.5, 1.0, 2.3):
        d = geom.hamenstadt_dist(Horoball(INF, math.exp(s)), [0.0], [3.0])
        assert d == pytest.approx(3 * math.exp(-s), rel=1e-12)


def test_hamenstadt_finite_center_matches_limit(rng):
    for _ in range(50):
        dim = int(rng.choice([2, 3]))
        hb = Horoball(random_boundary(rng, dim), float(rng.uniform(0.3, 2)))
        xi, eta = random_boundary(rng, dim), random_boundary(rng, dim)
        closed = geom.hamenstadt_dist(hb, xi, eta)
        assert geom.hamenstadt_limit(hb, xi, eta) == pytest.approx(closed, rel=1e-8)


def test_hamenstadt_rejects_center():
    with pytest.raises(ValueError):
        geom.hamenstadt_dist(Horoball([0.0], 1.0), [0.0], [1.0])


# --- Möbius action --------------------------------------------------------------------------


def test_moebius_examples():
    S = geom.MoebiusMap(0.0, -1.0, 1.0, 0.0)
    p = geom.moebius_apply(S, uhs(0, 1))
    assert np.allclose(p.coords(), [0, 1])
    T = geom.MoebiusMap(1.0, 1.0, 0.0, 1.0)
    q = geom.moebius_apply(T, uhs(0.25, 2))
    assert np.allclose(q.coords(), [1.25, 2])
    ident = geom.MoebiusMap(1.0, 0.0, 0.0, 1.0)
    assert np.allclose(geom.moebius_apply(ident, uhs(0.3, 0.7)).coords(), [0.3, 0.7])
    assert geom.moebius_apply(S, [0.0]) is INF
    assert np.allclose(geom.moebius_apply(S, (INF, 2)), [0.0])


def test_moebius_determinant_check():
    with pytest.raises(ValueError):
        geom.MoebiusMap(2.0, 0.0, 0.0, 1.0)


def test_boundary_action_is_limit(rng):
    for _ in range(200):
        g = random_sl2c(rng)
        xi = random_boundary(rng, 3)
        img = geom.moebius_apply(g, xi)
        near = geom.moebius_apply(g, UhsPoint(xi, 1e-9))
        assert np.allclose(near.horizontal, img, atol=1e-6 * max(1, np.abs(img).max()))


# --- perpendiculars -------------------------------------------------------------------------------


def test_horoball_semicircle_perpendicular():
    hb, geo = Horoball(INF, 1.0), Geodesic([-0.5], [0.5])
    assert geom.dist_between(hb, geo) == pytest.approx(math.log(2))
    fa, fb, length = geom.common_perpendicular(hb, geo)
    assert np.allclose(fa.coords(), [0, 1]) and np.allclose(fb.coords(), [0, 0.5])
    assert length == pytest.approx(math.log(2))


@pytest.mark.parametrize("q", [2, 3, 7])
def test_horoball_horoball(q):
    d = geom.dist_between(Horoball(INF, 1.0), Horoball([0.0], 1 / q**2))
    assert d == pytest.approx(2 * math.log(q), abs=1e-12)


def test_overlap_is_negative_and_identical_rejected():
    geo = Geodesic([-2.0], [2.0])
    assert geom.dist_between(Horoball(INF, 1.0), geo) == pytest.approx(-math.log(2))
    with pytest.raises(geom.NoPerpendicularError):
        geom.common_perpendicular(Horoball(INF, 1.0), geo)
    with pytest.raises(ValueError):
        geom.dist_between(geo, geo)


def test_point_to_vertical_line():
    x, line = uhs(0, 1), Geodesic([5.0], INF)
    fa, fb, length = geom.common_perpendicular(x, line)
    res = minimize_scalar(lambda t: geom.dist(x, uhs(5, math.exp(t))), bounds=(-5, 10),
                          method="bounded", options={"xatol": 1e-12})
    assert length == pytest.approx(res.fun, abs=1e-9)
    assert geom.dist(x, fb) == pytest.approx(length, abs=1e-9)
    assert np.allclose(fb.coords(), [5, math.sqrt(26)])


@pytest.mark.parametrize("dim", [2, 3])
def test_perpendicular_consistency(rng, dim):
    done = 0
    while done < N_SAMPLES:
        a, b = _random_object(rng, dim), _random_object(rng, dim)
        if isinstance(a, UhsPoint) and isinstance(b, UhsPoint):
            continue
        try:
            d = geom.dist_between(a, b)
        except ValueError:
            continue
        if d < 1e-3:
            continue
        fa, fb, length = geom.common_perpendicular(a, b)
        assert length == pytest.approx(d, abs=1e-9 * max(1, d))
        assert geom.dist(fa, fb) == pytest.approx(d, abs=1e-7 * max(1, d))
        done += 1


# --- Hopf coordinates ------------------------------------------------------------------------------


def _random_tangent(rng, dim=2):
    base = random_point(rng, dim)
    d = rng.normal(size=dim)
    return UnitTangent(base, d / np.linalg.norm(d) * base.height)


def test_hopf_vertical():
    vm, vp, t = geom.hopf(UnitTangent(uhs(0, 1), [0.0, 1.0]))
    assert np.allclose(vm, [0]) and vp is INF and t == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize("dim", [2, 3])
def test_flow_conjugacy_and_antipode(rng, dim):
    for _ in range(N_SAMPLES):
        v = _random_tangent(rng, dim)
        s = float(rng.uniform(-3, 3))
        vm, vp, t = geom.hopf(v)
        wm, wp, t2 = geom.hopf(geom.geodesic_flow(v, s))
        assert np.allclose(wm, vm, atol=1e-8) and np.allclose(wp, vp, atol=1e-8)
        assert t2 - t == pytest.approx(s, abs=1e-9)
        am, ap, ta = geom.hopf(-v)
        assert np.allclose(am, vp, atol=1e-9) and np.allclose(ap, vm, atol=1e-9)
        assert ta == pytest.approx(-t, abs=1e-9)


def test_flow_moves_unit_speed(rng):
    for _ in range(100):
        v = _random_tangent(rng)
        s = float(rng.uniform(0, 4))
        assert geom.dist(v.base, geom.geodesic_flow(v, s).base) == pytest.approx(s, abs=1e-9)


# --- model conversion -----------------------------------------------------------------------------


def test_base_point_correspondence():
    x = uhs(0, 0, 1)
    assert np.allclose(geom.convert(x, "uhs", "ball"), [0, 0, 0], atol=1e-15)
    assert np.allclose(geom.convert(x, "uhs", "hyperboloid").coords, [1, 0, 0, 0])
    assert np.allclose(geom.boundary_to_ball(INF, 3), [0, 0, 1])
    assert geom.convert(np.array([0.0, 0.0, 1.0]), "ball", "uhs") is INF


@pytest.mark.parametrize("dim", [2, 3, 5])
def test_model_coherence(rng, dim):
    for _ in range(N_SAMPLES):
        x, y = random_point(rng, dim), random_point(rng, dim)
        bx, by = geom.convert(x, "uhs", "ball"), geom.convert(y, "uhs", "ball")
        back = geom.convert(bx, "ball", "uhs")
        assert np.allclose(back.coords(), x.coords(), rtol=1e-12, atol=1e-12)
        hx = geom.convert(bx, "ball", "hyperboloid")
        hy = geom.convert(by, "ball", "hyperboloid")
        assert geom.dist(hx, hy) == pytest.approx(geom.dist(x, y), rel=1e-9, abs=1e-9)


def test_boundary_round_trip(rng):
    for _ in range(100):
        xi = random_boundary(rng, 3)
        ball = geom.boundary_to_ball(xi, 3)
        assert np.linalg.norm(ball) == pytest.approx(1)
        assert np.allclose(geom.convert(ball, "ball", "uhs"), xi)


# --- hyperboloid level sets and curvature ------------------------------------------------------------


def test_level_point():
    x = geom.HyperboloidPoint([1, 0, 0])
    assert geom.hyperboloid_level_dist([1, 0, 0], x) == 0


@pytest.mark.parametrize("w0", [0.5, 1.0, 3.0, 10.0])
def test_level_horosphere(w0):
    # the null vector (w0, w0, 0) is the horoball at 1 of diameter 2/w0
    x = geom.HyperboloidPoint([1, 0, 0])
    w = np.array([w0, w0, 0.0])
    hb = Horoball([1.0], 2 / w0)
    assert np.allclose(geom.horoball_vector(hb, 2), w)
    d = geom.hyperboloid_level_dist(w, x)
    assert d == pytest.approx(math.log(w0), abs=1e-12)
    assert d == pytest.approx(geom.dist_between(uhs(0, 1), hb), abs=1e-12)
    assert d == pytest.approx(math.log(np.linalg.norm(w)) - 0.5 * math.log(2), abs=1e-12)


def test_level_hyperplane(rng):
    x = geom.HyperboloidPoint([1, 0, 0])
    assert geom.hyperboloid_level_dist([0, 1, 0], x) == 0
    # w = (0, 1, 0) cuts out the vertical geodesic over 0
    for _ in range(100):
        p = random_point(rng)
        d = geom.hyperboloid_level_dist([0, 1, 0], geom.to_hyperboloid(p))
        res = minimize_scalar(lambda t: geom.dist(p, uhs(0, math.exp(t))), bounds=(-20, 20),
                              method="bounded", options={"xatol": 1e-12})
        assert d == pytest.approx(res.fun, abs=1e-7)


def test_level_rejects_other_norms():
    with pytest.raises(ValueError):
        geom.hyperboloid_level_dist([0, 2, 0], geom.HyperboloidPoint([1, 0, 0]))


def test_curv_to_dist():
    assert geom.curv_to_dist(math.e, "horoball") == pytest.approx(1)
    assert geom.curv_to_dist(0.0, "point_tangency") == 0
    assert geom.curv_to_dist(math.sinh(2), "point_tangency") == pytest.approx(2)
