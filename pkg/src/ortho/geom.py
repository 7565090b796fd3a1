"""Hyperbolic geometry in the upper half-space, ball and hyperboloid models.

Upper half-space points are (horizontal, height) with horizontal in R^(n-1).
The hyperboloid model lives in R^(n+1) with the form
<x, y> = -x0 y0 + x1 y1 + ... + xn yn.  Every distance computation between
points, geodesics and horoballs goes through that model, where each case
has a closed form in terms of inner products with null vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .quat import Quaternion, dieudonne_det, moebius_boundary, moebius_h5

TOL = 1e-9


class NoPerpendicularError(ValueError):
    """Raised when two objects overlap, so no common perpendicular exists."""


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
BoundaryPoint = Union[np.ndarray, _Infinity]


def boundary(xi) -> BoundaryPoint:
    """Normalize a boundary point: INF stays INF, anything else becomes a float vector."""
    if xi is INF:
        return INF
    if isinstance(xi, complex):
        return np.array([xi.real, xi.imag])
    if isinstance(xi, Quaternion):
        return np.array([float(c) for c in xi.coords()])
    return np.atleast_1d(np.asarray(xi, dtype=float))


def _same_boundary(xi, eta) -> bool:
    if xi is INF or eta is INF:
        return xi is eta
    return bool(np.allclose(xi, eta, rtol=0, atol=1e-14))


@dataclass(frozen=True, eq=False)
class UhsPoint:
    horizontal: np.ndarray
    height: float

    def __post_init__(self):
        object.__setattr__(self, "horizontal", boundary(self.horizontal))
        object.__setattr__(self, "height", float(self.height))
        if not self.height > 0:
            raise ValueError(f"height must be positive, got {self.height}")

    @property
    def dim(self) -> int:
        return self.horizontal.size + 1

    def coords(self) -> np.ndarray:
        return np.append(self.horizontal, self.height)

    def __repr__(self):
        return f"UhsPoint({self.horizontal.tolist()}, {self.height!r})"


def uhs(*coords) -> UhsPoint:
    """uhs(x1, ..., x_{n-1}, height)."""
    return UhsPoint(np.array(coords[:-1], dtype=float), coords[-1])


@dataclass(frozen=True, eq=False)
class Geodesic:
    start: BoundaryPoint
    end: BoundaryPoint

    def __post_init__(self):
        object.__setattr__(self, "start", boundary(self.start))
        object.__setattr__(self, "end", boundary(self.end))
        if _same_boundary(self.start, self.end):
            raise ValueError("geodesic endpoints must be distinct")
        dims = {p.size for p in (self.start, self.end) if p is not INF}
        if len(dims) > 1:
            raise ValueError("endpoint dimensions differ")

    @property
    def dim(self) -> int:
        p = self.end if self.start is INF else self.start
        return p.size + 1

    @property
    def vertical(self) -> bool:
        return self.start is INF or self.end is INF

    @property
    def center(self) -> np.ndarray:
        if self.vertical:
            return self.end if self.start is INF else self.start
        return (self.start + self.end) / 2

    @property
    def radius(self) -> float:
        if self.vertical:
            return math.inf
        return float(np.linalg.norm(self.start - self.end)) / 2

    def reversed(self) -> "Geodesic":
        return Geodesic(self.end, self.start)


@dataclass(frozen=True, eq=False)
class Horoball:
    """Euclidean ball of diameter `size` tangent at a finite center, or {height >= size} at INF."""

    center: BoundaryPoint
    size: float

    def __post_init__(self):
        object.__setattr__(self, "center", boundary(self.center))
        if not self.size > 0:
            raise ValueError("horoball size must be positive")


@dataclass(frozen=True, eq=False)
class UnitTangent:
    base: UhsPoint
    direction: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        object.__setattr__(self, "direction", d)
        if d.size != self.base.dim:
            raise ValueError("direction has the wrong dimension")
        if abs(np.linalg.norm(d) - self.base.height) > 1e-9 * self.base.height:
            raise ValueError("direction must have Euclidean norm equal to the base height")

    def __neg__(self) -> "UnitTangent":
        return UnitTangent(self.base, -self.direction)


@dataclass(frozen=True, eq=False)
class HyperboloidPoint:
    coords: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", x)
        if x[0] <= 0 or abs(minkowski(x, x) + 1) > 1e-9 * max(1.0, x[0] ** 2):
            raise ValueError("not a point of the upper sheet of the hyperboloid")


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """2x2 matrix over R, C or H acting by homography and Poincaré extension."""

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        scale = sum(float(Quaternion.coerce(x).n()) for x in self.entries())
        if abs(self.det() - 1) > 1e-12 * max(1.0, scale):
            raise ValueError(f"determinant {self.det()} is not 1")

    @property
    def quaternionic(self) -> bool:
        return any(isinstance(x, Quaternion) for x in self.entries())

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> complex | float:
        """ad - bc, or the Dieudonné determinant for quaternionic entries."""
        if self.quaternionic:
            return dieudonne_det(self.entries())
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        if self.quaternionic or other.quaternionic:
            from .quat import qmatmul
            return MoebiusMap(*qmatmul(self.entries(), other.entries()))
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "MoebiusMap":
        if self.quaternionic:
            raise NotImplementedError("quaternionic inverse is not needed")
        return MoebiusMap(self.d, -self.b, -self.c, self.a)


# --- hyperboloid core -------------------------------------------------------


def minkowski(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(-x[0] * y[0] + x[1:] @ y[1:])


def _uhs_vec(p: UhsPoint) -> np.ndarray:
    h = p.height
    r2 = float(p.horizontal @ p.horizontal)
    return np.concatenate(([(1 + r2 + h * h) / (2 * h)], p.horizontal / h,
                           [(r2 + h * h - 1) / (2 * h)]))


def _null(xi: BoundaryPoint, dim: int) -> np.ndarray:
    """Null vector of a boundary point: N_xi = (1+|xi|^2, 2 xi, |xi|^2-1), N_inf = (1, 0, ..., 1)."""
    if xi is INF:
        v = np.zeros(dim + 1)
        v[0] = v[-1] = 1.0
        return v
    r2 = float(xi @ xi)
    return np.concatenate(([1 + r2], 2 * xi, [r2 - 1]))


def _null_pair(xi: BoundaryPoint, eta: BoundaryPoint) -> float:
    """-<N_xi, N_eta>, evaluated without cancellation."""
    if xi is INF and eta is INF:
        return 0.0
    if xi is INF or eta is INF:
        return 2.0
    diff = xi - eta
    return 2 * float(diff @ diff)


def _horo_vec(hb: Horoball, dim: int) -> np.ndarray:
    if hb.center is INF:
        return hb.size * _null(INF, dim)
    return _null(hb.center, dim) / hb.size


def _vec_to_uhs(x: np.ndarray) -> UhsPoint:
    h = 1 / (x[0] - x[-1])
    return UhsPoint(x[1:-1] * h, h)


# --- model conversion ---------------------------------------------------------


def convert(p, from_model: str, to_model: str):
    """Convert an interior or boundary point between 'uhs', 'ball' and 'hyperboloid'.

    Interior points: UhsPoint / ball vector of norm < 1 / HyperboloidPoint.
    Boundary points: BoundaryPoint / unit vector / null vector (any positive scale).
    """
    models = ("uhs", "ball", "hyperboloid")
    if from_model not in models or to_model not in models:
        raise ValueError(f"models must be among {models}")
    if from_model == to_model:
        return p
    vec, is_boundary = _to_hyperboloid(p, from_model)
    return _from_hyperboloid(vec, is_boundary, to_model)


def _to_hyperboloid(p, model):
    if model == "uhs":
        if isinstance(p, UhsPoint):
            return _uhs_vec(p), False
        raise ValueError("boundary points of the upper half-space need an explicit dimension")
    if model == "hyperboloid":
        if isinstance(p, HyperboloidPoint):
            return p.coords, False
        x = np.asarray(p, dtype=float)
        if abs(minkowski(x, x)) > 1e-9 * x[0] ** 2:
            raise ValueError("not a null vector")
        return x / x[0], True
    b = np.asarray(p, dtype=float)
    r2 = float(b @ b)
    if abs(r2 - 1) <= 1e-12:
        return np.concatenate(([1.0], b)), True
    if r2 > 1:
        raise ValueError("point outside the unit ball")
    return np.concatenate(([1 + r2], 2 * b)) / (1 - r2), False


def _from_hyperboloid(x, is_boundary, model):
    if model == "hyperboloid":
        return x if is_boundary else HyperboloidPoint(x)
    if model == "ball":
        return x[1:] / x[0] if is_boundary else x[1:] / (1 + x[0])
    if is_boundary:
        return uhs_boundary_from_null(x)
    return _vec_to_uhs(x)


def uhs_boundary_from_null(x) -> BoundaryPoint:
    x = np.asarray(x, dtype=float)
    den = x[0] - x[-1]
    if abs(den) <= 1e-14 * abs(x[0]):
        return INF
    return x[1:-1] / den


def boundary_to_ball(xi: BoundaryPoint, dim: int) -> np.ndarray:
    v = _null(xi, dim)
    return v[1:] / v[0]


def boundary_to_null(xi: BoundaryPoint, dim: int) -> np.ndarray:
    return _null(boundary(xi), dim)


def to_hyperboloid(p: UhsPoint) -> HyperboloidPoint:
    return HyperboloidPoint(_uhs_vec(p))


def horoball_vector(hb: Horoball, dim: int) -> np.ndarray:
    """The null vector w with hb = {x : -<x, w> <= 1}."""
    return _horo_vec(hb, dim)


# --- distances and cocycles -----------------------------------------------------


def _check_dims(*objs):
    dims = {o.dim for o in objs if hasattr(o, "dim")}
    if len(dims) > 1:
        raise ValueError(f"dimension mismatch: {sorted(dims)}")


def dist(x, y) -> float:
    """Hyperbolic distance between two points of the same model."""
    if isinstance(x, HyperboloidPoint) and isinstance(y, HyperboloidPoint):
        if x.coords.size != y.coords.size:
            raise ValueError("dimension mismatch")
        return math.acosh(max(1.0, -minkowski(x.coords, y.coords)))
    if isinstance(x, UhsPoint) and isinstance(y, UhsPoint):
        _check_dims(x, y)
        diff = x.coords() - y.coords()
        return math.acosh(1 + float(diff @ diff) / (2 * x.height * y.height))
    raise ValueError("dist needs two points of the same model")


def busemann(xi, x: UhsPoint, y: UhsPoint) -> float:
    """Busemann cocycle beta_xi(x, y) = lim d(x, z) - d(y, z) as z -> xi."""
    _check_dims(x, y)
    xi = boundary(xi)
    if xi is INF:
        return math.log(y.height / x.height)
    dx = x.horizontal - xi
    dy = y.horizontal - xi
    nx = float(dx @ dx) + x.height**2
    ny = float(dy @ dy) + y.height**2
    return math.log(y.height / x.height * nx / ny)


def visual_dist(x: UhsPoint, xi, eta) -> float:
    """Visual distance d_x(xi, eta) seen from x; 0 when xi = eta."""
    xi, eta = boundary(xi), boundary(eta)
    if _same_boundary(xi, eta):
        return 0.0

    def gap(p):
        d = x.horizontal - p
        return math.sqrt(float(d @ d) + x.height**2)

    if xi is INF:
        return x.height / gap(eta)
    if eta is INF:
        return x.height / gap(xi)
    return x.height * float(np.linalg.norm(xi - eta)) / (gap(xi) * gap(eta))


def hamenstadt_dist(hb: Horoball, xi, eta) -> float:
    """Hamenstädt distance on the boundary of hb, seen from the horosphere."""
    xi, eta = boundary(xi), boundary(eta)
    if _same_boundary(xi, hb.center) or _same_boundary(eta, hb.center):
        raise ValueError("boundary points must differ from the horoball center")
    if hb.center is INF:
        return float(np.linalg.norm(xi - eta)) / hb.size

    def inv(p):
        d = p - hb.center
        return d / float(d @ d)

    return hb.size * float(np.linalg.norm(inv(xi) - inv(eta)))


def _ray_point(hb: Horoball, xi: np.ndarray, t: float) -> UhsPoint:
    """Point at distance t inside hb's horosphere on the geodesic from hb.center to xi."""
    if hb.center is INF:
        return UhsPoint(xi, hb.size * math.exp(-t))
    off = xi - hb.center
    length = float(np.linalg.norm(off))
    tau = math.log(hb.size / length) + t
    return UhsPoint(hb.center + off / (1 + math.exp(-2 * tau)), length / (2 * math.cosh(tau)))


def hamenstadt_limit(hb: Horoball, xi, eta, t_max: float = 30.0, tol: float = 1e-10) -> float:
    """Numeric evaluation of exp(d(x_t, y_t)/2 - t) as t grows, x_t and y_t on the rays to xi, eta."""
    xi, eta = boundary(xi), boundary(eta)
    if _same_boundary(xi, eta):
        return 0.0
    prev = None
    t = 1.0
    while t <= t_max:
        d = dist(_ray_point(hb, xi, t), _ray_point(hb, eta, t))
        val = math.exp(d / 2 - t)
        if prev is not None and abs(val - prev) < tol * max(1.0, val):
            return val
        prev = val
        t += 1.0
    return prev


def _as_number(p: np.ndarray):
    if p.size == 1:
        return float(p[0])
    if p.size == 2:
        return complex(p[0], p[1])
    if p.size == 4:
        return Quaternion(*map(float, p))
    raise ValueError(f"no coefficient ring for horizontal dimension {p.size}")


def _from_number(z, size: int) -> np.ndarray:
    q = Quaternion.coerce(z)
    return np.array([float(c) for c in q.coords()[:size]])


def moebius_apply(g: MoebiusMap, p):
    """Act on a UhsPoint by Poincaré extension, or on a BoundaryPoint by homography.

    Boundary points at INF need the dimension, so pass (INF, dim) for them.
    """
    if isinstance(p, UhsPoint):
        z = _as_number(p.horizontal)
        w, r = moebius_h5(g.entries(), z, p.height)
        return UhsPoint(_from_number(w, p.horizontal.size), r)
    if isinstance(p, tuple) and p[0] is INF:
        w = moebius_boundary(g.entries(), None)
        return INF if w is None else _from_number(w, p[1] - 1)
    xi = boundary(p)
    w = moebius_boundary(g.entries(), _as_number(xi))
    return INF if w is None else _from_number(w, xi.size)


def _apply_boundary(g, xi, dim):
    return moebius_apply(g, (INF, dim)) if xi is INF else moebius_apply(g, xi)


def moebius_apply_object(g: MoebiusMap, obj, dim: int | None = None):
    """Image of a point, geodesic or horoball under g."""
    if isinstance(obj, UhsPoint):
        return moebius_apply(g, obj)
    if isinstance(obj, Geodesic):
        return Geodesic(_apply_boundary(g, obj.start, obj.dim), _apply_boundary(g, obj.end, obj.dim))
    if isinstance(obj, Horoball):
        if dim is None:
            raise ValueError("horoball images need the dimension")
        top = _horoball_top(obj, dim)
        center = _apply_boundary(g, obj.center, dim)
        image_top = moebius_apply(g, top)
        if center is INF:
            return Horoball(INF, image_top.height)
        # the image of top lies on the image horosphere; recover the diameter from it
        off = image_top.horizontal - center
        diameter = (float(off @ off) + image_top.height**2) / image_top.height
        return Horoball(center, diameter)
    raise TypeError(f"cannot move {type(obj).__name__}")


def _horoball_top(hb: Horoball, dim: int) -> UhsPoint:
    if hb.center is INF:
        return UhsPoint(np.zeros(dim - 1), hb.size)
    return UhsPoint(hb.center, hb.size)


# --- distances between points, geodesics and horoballs -------------------------------


def _dim_of(obj) -> int | None:
    if isinstance(obj, (UhsPoint, Geodesic)):
        return obj.dim
    if isinstance(obj, Horoball) and obj.center is not INF:
        return obj.center.size + 1
    return None


def _geo_nulls(g: Geodesic, dim: int):
    n1, n2 = _null(g.start, dim), _null(g.end, dim)
    return n1, n2, math.sqrt(2 * _null_pair(g.start, g.end))


def _kind(obj) -> int:
    order = {UhsPoint: 0, Horoball: 1, Geodesic: 2}
    for cls, k in order.items():
        if isinstance(obj, cls):
            return k
    raise TypeError(f"unsupported object {type(obj).__name__}")


def _identical(a, b) -> bool:
    if a is b:
        return True
    if isinstance(a, UhsPoint) and isinstance(b, UhsPoint):
        return bool(np.allclose(a.coords(), b.coords(), rtol=0, atol=1e-15))
    if isinstance(a, Horoball) and isinstance(b, Horoball):
        return _same_boundary(a.center, b.center) and a.size == b.size
    if isinstance(a, Geodesic) and isinstance(b, Geodesic):
        return ((_same_boundary(a.start, b.start) and _same_boundary(a.end, b.end))
                or (_same_boundary(a.start, b.end) and _same_boundary(a.end, b.start)))
    return False


def _solve(a, b):
    """Closed-form data for the pair (a, b) with kind(a) <= kind(b).

    Returns (length, foot_a, foot_b) where feet are hyperboloid vectors.
    """
    dims = {d for d in (_dim_of(a), _dim_of(b)) if d is not None}
    if len(dims) > 1:
        raise ValueError("dimension mismatch")
    dim = dims.pop() if dims else 2
    ka, kb = _kind(a), _kind(b)

    if ka == 0 and kb == 0:
        x, y = _uhs_vec(a), _uhs_vec(b)
        return dist(a, b), x, y

    if ka == 0 and kb == 1:
        x, w = _uhs_vec(a), _horo_vec(b, dim)
        length = math.log(-minkowski(x, w))
        return length, x, _toward(x, w, length)

    if kb == 2:
        n1, n2, norm = _geo_nulls(b, dim)
        if ka == 0:
            src = _uhs_vec(a)
        else:
            src = _horo_vec(a, dim)
        A = -minkowski(src, n1) / norm
        B = -minkowski(src, n2) / norm
        if ka == 1 and a.center is not INF:
            # exact values for the finite-center horoball against the endpoints
            A = _null_pair(a.center, b.start) / a.size / norm
            B = _null_pair(a.center, b.end) / a.size / norm
        elif ka == 1:
            A = _null_pair(INF, b.start) * a.size / norm
            B = _null_pair(INF, b.end) * a.size / norm
        if A <= 0 or B <= 0:
            raise ValueError("geodesic ends at the horoball center")
        s = 0.5 * math.log(B / A)
        foot_b = (math.exp(s) * n1 + math.exp(-s) * n2) / norm
        value = 2 * math.sqrt(A * B)
        if ka == 0:
            return math.acosh(max(1.0, value)), src, foot_b
        length = math.log(value)
        return length, _toward(foot_b, src, length), foot_b

    if ka == 1 and kb == 1:
        pair = _null_pair(a.center, b.center)
        if pair == 0:
            raise ValueError("horoballs with a common center are nested")
        scale_a = a.size if a.center is INF else 1 / a.size
        scale_b = b.size if b.center is INF else 1 / b.size
        length = math.log(pair * scale_a * scale_b / 2)
        # points on the geodesic between the centers, at the two horospheres
        na, nb = _null(a.center, dim), _null(b.center, dim)
        norm = math.sqrt(2 * pair)
        # P(s) = (e^s na + e^-s nb)/norm; -<P, wa> = e^-s (-<nb, wa>)/norm
        s_a = math.log(pair * scale_a / norm)
        s_b = -math.log(pair * scale_b / norm)
        foot_a = (math.exp(s_a) * na + math.exp(-s_a) * nb) / norm
        foot_b = (math.exp(s_b) * na + math.exp(-s_b) * nb) / norm
        return length, foot_a, foot_b

    raise TypeError("unsupported pair")


def _toward(x: np.ndarray, w: np.ndarray, t: float) -> np.ndarray:
    """Move from x a signed distance t toward the center of the null vector w."""
    c = -minkowski(x, w)
    u = w / c - x
    return math.cosh(t) * x + math.sinh(t) * u


def _geo_geo(a: Geodesic, b: Geodesic):
    dim = a.dim
    if b.dim != dim:
        raise ValueError("dimension mismatch")
    n1, n2, na = _geo_nulls(a, dim)
    m1, m2, nb = _geo_nulls(b, dim)
    scale = na * nb
    p = _null_pair(a.start, b.start) / scale
    q = _null_pair(a.start, b.end) / scale
    r = _null_pair(a.end, b.start) / scale
    t = _null_pair(a.end, b.end) / scale
    value = 2 * (math.sqrt(p * t) + math.sqrt(q * r))
    length = math.acosh(max(1.0, value))
    if min(p, q, r, t) <= 0:
        return length, None, None
    u = math.log(t / p) / 2   # 2(s + t')
    v = math.log(r / q) / 2   # 2(s - t')
    s, s2 = (u + v) / 2, (u - v) / 2
    foot_a = (math.exp(s) * n1 + math.exp(-s) * n2) / na
    foot_b = (math.exp(s2) * m1 + math.exp(-s2) * m2) / nb
    return length, foot_a, foot_b


def dist_between(a, b) -> float:
    """Signed distance between points, geodesics and horoballs.

    Positive values are distances between disjoint closures.  Horoball
    cases return ln(-<x, w>)-type values that turn negative on overlap; for
    the standard horoball against a semicircle of radius r this is ln(1/r).
    """
    if _identical(a, b):
        raise ValueError("distance between identical objects is undefined")
    if isinstance(a, Geodesic) and isinstance(b, Geodesic):
        return _geo_geo(a, b)[0]
    if _kind(a) > _kind(b):
        a, b = b, a
    return _solve(a, b)[0]


def common_perpendicular(a, b) -> tuple[UhsPoint, UhsPoint, float]:
    """Feet on a and b and the length of the shortest segment between them."""
    if _identical(a, b):
        raise ValueError("identical objects")
    swap = False
    if isinstance(a, Geodesic) and isinstance(b, Geodesic):
        length, fa, fb = _geo_geo(a, b)
        if fa is None:
            raise NoPerpendicularError("asymptotic geodesics have no common perpendicular")
    else:
        if _kind(a) > _kind(b):
            a, b, swap = b, a, True
        length, fa, fb = _solve(a, b)
    if not length > 0:
        raise NoPerpendicularError(f"objects overlap (signed distance {length:.6g})")
    pa, pb = _vec_to_uhs(fa), _vec_to_uhs(fb)
    return (pb, pa, length) if swap else (pa, pb, length)


# --- unit tangent bundle -------------------------------------------------------------


def _endpoints(v: UnitTangent):
    x = v.base
    hor = v.direction[:-1]
    vert = v.direction[-1]
    p = float(np.linalg.norm(hor))
    if p <= 1e-15 * x.height:
        return (x.horizontal, INF) if vert > 0 else (INF, x.horizontal)
    e = hor / p
    s_c = x.height * vert / p
    center = x.horizontal + s_c * e
    radius = math.hypot(s_c, x.height)
    return center - radius * e, center + radius * e


def hopf(v: UnitTangent) -> tuple[BoundaryPoint, BoundaryPoint, float]:
    """(v_-, v_+, t), with t measured from the base point (0, ..., 0, 1)."""
    v_minus, v_plus = _endpoints(v)
    x0 = UhsPoint(np.zeros(v.base.dim - 1), 1.0)
    t = 0.5 * (busemann(v_plus, x0, v.base) - busemann(v_minus, x0, v.base))
    return v_minus, v_plus, t


def geodesic_flow(v: UnitTangent, t: float) -> UnitTangent:
    v_minus, v_plus = _endpoints(v)
    x = v.base
    if v_plus is INF or v_minus is INF:
        sign = 1.0 if v_plus is INF else -1.0
        h = x.height * math.exp(sign * t)
        direction = np.zeros(x.dim)
        direction[-1] = sign * h
        return UnitTangent(UhsPoint(x.horizontal, h), direction)
    mid = (v_minus + v_plus) / 2
    half = (v_plus - v_minus) / 2
    half_len = float(np.linalg.norm(half))
    e = half / half_len
    tau = math.asinh(float((x.horizontal - mid) @ e) / x.height) + t
    sech = 1 / math.cosh(tau)
    base = UhsPoint(mid + half * math.tanh(tau), half_len * sech)
    direction = np.append(half * sech**2, -half_len * math.tanh(tau) * sech)
    return UnitTangent(base, direction)


# --- hyperboloid level sets and curvature conversions ----------------------------------


def hyperboloid_level_dist(w, x) -> float:
    """Distance from x to the set attached to w, dispatched on q(w) in {-1, 0, 1}.

    q(w) = -1: the point w.  q(w) = 0: the horosphere {<y, w> = -1} (signed,
    positive outside the horoball).  q(w) = 1: the hyperplane w-perp.
    """
    w = np.asarray(w, dtype=float)
    xc = x.coords if isinstance(x, HyperboloidPoint) else np.asarray(x, dtype=float)
    if w.size != xc.size:
        raise ValueError("dimension mismatch")
    qw = minkowski(w, w)
    scale = max(1.0, float(w @ w))
    ip = minkowski(xc, w)
    if abs(qw + 1) <= 1e-10 * scale:
        return math.acosh(max(1.0, abs(ip)))
    if abs(qw) <= 1e-10 * scale:
        return math.log(-ip)
    if abs(qw - 1) <= 1e-10 * scale:
        return math.asinh(abs(ip))
    raise ValueError(f"q(w) = {qw} is not in {{-1, 0, 1}}")


def curv_to_dist(curv: float, kind: str) -> float:
    if kind == "point_tangency":
        return math.asinh(curv)
    if kind == "horoball":
        return math.log(curv)
    raise ValueError(f"unknown kind {kind!r}")
