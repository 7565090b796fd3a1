"""Integral binary quadratic forms: Pell units, automorphs, exact orbit
canonicalization, representation counts, Gauss reduction and quadratic
irrationals of bounded complexity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy.ntheory import sqrt_mod

from . import geom


class CapacityError(RuntimeError):
    """An enumeration would exceed safe integer or memory bounds."""


@dataclass(frozen=True)
class BinaryQF:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __neg__(self) -> "BinaryQF":
        return BinaryQF(-self.a, -self.b, -self.c)

    def compose(self, g) -> "BinaryQF":
        """Q∘g, i.e. (x, y) -> Q(g (x, y)) for g = ((p, q), (r, s))."""
        (p, q), (r, s) = g
        return BinaryQF(self(p, r), 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
                        self(q, s))

    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    def roots(self) -> tuple[float, float]:
        """Roots of Q(X, 1), the smaller-sqrt one first: (-b - √Δ)/2a, (-b + √Δ)/2a."""
        sq = math.sqrt(self.disc)
        return (-self.b - sq) / (2 * self.a), (-self.b + sq) / (2 * self.a)

    def geodesic(self) -> geom.Geodesic:
        r_minus, r_plus = self.roots()
        return geom.Geodesic([r_minus], [r_plus])


def _require_indefinite(disc: int):
    if disc <= 0 or math.isqrt(disc) ** 2 == disc:
        raise ValueError(f"discriminant {disc} must be positive and not a square")


def _require_counting_form(q: BinaryQF):
    _require_indefinite(q.disc)
    if not q.is_primitive():
        raise ValueError(f"{q} is not primitive")


# --- exact arithmetic in Q(√Δ) ---------------------------------------------------


@dataclass(frozen=True)
class QuadFieldElem:
    """p + q√Δ with rational p, q."""

    p: Fraction
    q: Fraction
    disc: int

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))

    def _check(self, other):
        if isinstance(other, QuadFieldElem):
            if other.disc != self.disc:
                raise ValueError("mixed discriminants")
            return other
        return QuadFieldElem(Fraction(other), 0, self.disc)

    def __add__(self, other):
        o = self._check(other)
        return QuadFieldElem(self.p + o.p, self.q + o.q, self.disc)

    def __sub__(self, other):
        o = self._check(other)
        return QuadFieldElem(self.p - o.p, self.q - o.q, self.disc)

    def __neg__(self):
        return QuadFieldElem(-self.p, -self.q, self.disc)

    def __mul__(self, other):
        o = self._check(other)
        return QuadFieldElem(self.p * o.p + self.q * o.q * self.disc,
                             self.p * o.q + self.q * o.p, self.disc)

    __rmul__ = __mul__

    def conj(self):
        return QuadFieldElem(self.p, -self.q, self.disc)

    def norm(self) -> Fraction:
        return self.p * self.p - self.q * self.q * self.disc

    def inverse(self):
        nn = self.norm()
        if nn == 0:
            raise ZeroDivisionError("zero has no inverse")
        c = self.conj()
        return QuadFieldElem(c.p / nn, c.q / nn, self.disc)

    def sign(self) -> int:
        return sign_sqrt(self.p, self.q, self.disc)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.disc)


def sign_sqrt(p, q, disc) -> int:
    """Exact sign of p + q√disc."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare p^2 with q^2 disc
    diff = p * p - q * q * disc
    return sp if diff > 0 else (-sp if diff < 0 else 0)


# --- Pell equation, regulator and automorphs -----------------------------------------


@dataclass(frozen=True)
class PellSolution:
    t: int
    u: int


@lru_cache(maxsize=None)
def pell_fundamental(disc: int) -> PellSolution:
    """Minimal positive solution of t^2 - Δ u^2 = 4, from the continued fraction of (σ+√Δ)/2."""
    _require_indefinite(disc)
    if disc % 4 not in (0, 1):
        raise ValueError("discriminant must be 0 or 1 mod 4")
    sigma = disc % 2
    root = math.isqrt(disc)
    # complete quotients (P + √Δ)/Q with Q | Δ - P^2
    P, Q = sigma, 2
    h_prev, h = 0, 1      # convergent numerators h_{-2}, h_{-1}
    k_prev, k = 1, 0      # convergent denominators
    for _ in range(10**7):
        a = (P + root) // Q
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        x, y = 2 * h - sigma * k, k
        value = x * x - disc * y * y
        if value == 4:
            return PellSolution(x, y)
        if value == -4:
            return PellSolution((x * x + disc * y * y) // 2, x * y)
        P = a * Q - P
        Q = (disc - P * P) // Q
    raise CapacityError(f"no Pell solution found for {disc}")


def fundamental_unit(disc: int) -> QuadFieldElem:
    sol = pell_fundamental(disc)
    return QuadFieldElem(Fraction(sol.t, 2), Fraction(sol.u, 2), disc)


def regulator(q: BinaryQF | int) -> float:
    disc = q.disc if isinstance(q, BinaryQF) else q
    sol = pell_fundamental(disc)
    return math.log((sol.t + sol.u * math.sqrt(disc)) / 2)


def automorph(q: BinaryQF, t: int, u: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """The automorph attached to a solution (t, u) of t^2 - Δu^2 = 4."""
    if t * t - q.disc * u * u != 4:
        raise ValueError("(t, u) does not solve the Pell equation")
    if (t - q.b * u) % 2:
        raise RuntimeError("parity failure in the automorph; Pell solution is inconsistent")
    return (((t - q.b * u) // 2, -q.c * u), (q.a * u, (t + q.b * u) // 2))


def automorph_generator(q: BinaryQF):
    _require_indefinite(q.disc)
    sol = pell_fundamental(q.disc)
    return automorph(q, sol.t, sol.u)


def _apply(g, x, y):
    (p, q), (r, s) = g
    return p * x + q * y, r * x + s * y


def _inverse(g):
    (p, q), (r, s) = g
    return ((s, -q), (-r, p))


# --- canonical orbit representatives ------------------------------------------------------


@dataclass(frozen=True)
class Representation:
    x: int
    y: int
    value: int

    @property
    def primitive(self) -> bool:
        return math.gcd(self.x, self.y) == 1


def linear_forms(q: BinaryQF, x: int, y: int) -> tuple[QuadFieldElem, QuadFieldElem]:
    """(L1, L2) with 2a L1 = (2ax+by) - y√Δ, 2a L2 = (2ax+by) + y√Δ, so Q = a L1 L2."""
    u = 2 * q.a * x + q.b * y
    den = 2 * q.a
    return (QuadFieldElem(Fraction(u, den), Fraction(-y, den), q.disc),
            QuadFieldElem(Fraction(u, den), Fraction(y, den), q.disc))


def canonical_rep(q: BinaryQF, xy: tuple[int, int]) -> Representation:
    """The representative of the SO(Q, Z)-orbit of (x, y) with |L1/L2| in [1, ε^2) and L2 > 0."""
    x, y = map(int, xy)
    value = q(x, y)
    if value == 0:
        raise ValueError("Q(x, y) = 0")
    gamma = automorph_generator(q)
    gamma_inv = _inverse(gamma)
    eps2 = fundamental_unit(q.disc) * fundamental_unit(q.disc)
    # applying gamma multiplies L1 by 1/ε and L2 by ε
    while True:
        l1, l2 = linear_forms(q, x, y)
        ratio_num, ratio_den = abs(l1), abs(l2)
        if ratio_num < ratio_den:
            x, y = _apply(gamma_inv, x, y)
        elif not ratio_num < eps2 * ratio_den:
            x, y = _apply(gamma, x, y)
        else:
            break
    if l2.sign() < 0:
        x, y = -x, -y
    return Representation(x, y, value)


def _sign_sqrt_vec(p, q, disc):
    """Vectorized exact sign of p + q√disc for integer arrays."""
    sp, sq = np.sign(p), np.sign(q)
    out = np.where(sq == 0, sp, sq)
    mixed = (sp != 0) & (sq != 0) & (sp != sq)
    if np.any(mixed):
        diff = p[mixed] * p[mixed] - q[mixed] * q[mixed] * disc
        out = out.copy()
        out[mixed] = sp[mixed] * np.sign(diff)
    return out


_SAFE = 2**62


def in_window(q: BinaryQF, x, y):
    """Vectorized test that (x, y) is its own canonical representative.

    With U = 2ax + by, V = y and W± = U ± V√Δ (so 2a L1 = W-, 2a L2 = W+):
      L2 > 0            iff sign(a) sign(W+) > 0
      |L1| >= |L2|      iff U V <= 0
      |L1| < ε^2 |L2|   iff X + Y√Δ > 0, where 2ε^2 = P + T√Δ and
                        X + Y√Δ = s+ (P + T√Δ) W+ - 2 s- W-.
    Everything is integer arithmetic.
    """
    sol = pell_fundamental(q.disc)
    disc = q.disc
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    U = 2 * q.a * x + q.b * y
    V = y
    P, T = sol.t * sol.t - 2, sol.t * sol.u
    bound = float(np.max(np.abs(U), initial=0)) + float(np.max(np.abs(V), initial=0)) * math.sqrt(disc)
    if (abs(P) + abs(T) * disc + 2) * bound * math.sqrt(disc) > 2**31 or bound > 2**30:
        U = U.astype(object)
        V = V.astype(object)
    s_plus = _sign_sqrt_vec(U, V, disc)
    s_minus = _sign_sqrt_vec(U, -V, disc)
    ok_sign = np.sign(q.a) * s_plus > 0
    ok_low = U * V <= 0
    X = s_plus * (P * U + T * V * disc) - 2 * s_minus * U
    Y = s_plus * (P * V + T * U) + 2 * s_minus * V
    ok_high = _sign_sqrt_vec(X, Y, disc) > 0
    return np.asarray(ok_sign & ok_low & ok_high, dtype=bool)


def _window_box(q: BinaryQF, s: float, slack: float = 1.05):
    """y-range and per-y x-ranges covering the window region with |Q| <= s.

    In L-coordinates the region is |L2| <= √(s/|a|) and |L1| < ε √(s/|a|);
    since L1 = x - r1 y and L2 = x - r2 y with r1 - r2 = √Δ/a, the y-range is
    |y| <= |a| (B1 + B2)/√Δ and each y gives two x-intervals to intersect.
    """
    eps = float(fundamental_unit(q.disc))
    base = math.sqrt(s / abs(q.a))
    b1, b2 = slack * eps * base, slack * base
    r_minus, r_plus = q.roots()
    # L1 vanishes on the root with +√Δ, L2 on the one with -√Δ
    r1, r2 = r_plus, r_minus
    y_max = int(math.floor(abs(q.a) * (b1 + b2) / math.sqrt(q.disc))) + 1
    ys = np.arange(-y_max, y_max + 1, dtype=np.int64)
    lo = np.maximum(r1 * ys - b1, r2 * ys - b2)
    hi = np.minimum(r1 * ys + b1, r2 * ys + b2)
    lo = np.floor(lo).astype(np.int64)
    hi = np.ceil(hi).astype(np.int64)
    return ys, lo, hi


def _enumerate_window(q: BinaryQF, s: float, y_part: tuple[int, int] | None = None,
                      max_points: int = 5 * 10**7):
    ys, lo, hi = _window_box(q, s)
    if y_part is not None:
        k, parts = y_part
        ys, lo, hi = ys[k::parts], lo[k::parts], hi[k::parts]
    lengths = np.maximum(hi - lo + 1, 0)
    total = int(lengths.sum())
    if total > max_points:
        raise CapacityError(f"window enumeration needs {total} points (limit {max_points})")
    y = np.repeat(ys, lengths)
    offsets = np.arange(total) - np.repeat(np.cumsum(lengths) - lengths, lengths)
    x = np.repeat(lo, lengths) + offsets
    return x, y


def _window_points(q: BinaryQF, s: float, primitive: bool, y_part=None):
    x, y = _enumerate_window(q, s, y_part)
    if x.size and max(np.abs(x).max(), np.abs(y).max()) > 2**20:
        xo, yo = x.astype(object), y.astype(object)
        vals = q.a * xo * xo + q.b * xo * yo + q.c * yo * yo
        vals = np.array([int(v) for v in vals], dtype=object)
        keep = (np.abs(vals) <= s) & (vals != 0)
    else:
        vals = q.a * x * x + q.b * x * y + q.c * y * y
        keep = (np.abs(vals) <= s) & (vals != 0)
    if primitive:
        keep &= np.gcd(x, y) == 1
    x, y = x[keep], y[keep]
    win = in_window(q, x, y)
    return x[win], y[win]


def count_primitive_reps(q: BinaryQF, s: float, parts: int = 1) -> int:
    """Ψ_Q(s): SO(Q, Z)-orbits of primitive (x, y) with 0 < |Q(x, y)| <= s.

    `parts` splits the y-range into interleaved pieces counted separately
    and summed, which must not change the result.
    """
    _require_counting_form(q)
    if s < 1:
        return 0
    return sum(_window_points(q, s, True, (k, parts))[0].size for k in range(parts))


def primitive_rep_values(q: BinaryQF, s: float) -> np.ndarray:
    """Sorted |Q|-values of the canonical primitive representatives with |Q| <= s."""
    _require_counting_form(q)
    x, y = _window_points(q, s, True)
    return np.sort(np.abs(q.a * x * x + q.b * x * y + q.c * y * y))


def count_primitive_reps_grid(q: BinaryQF, s_values) -> np.ndarray:
    """Ψ_Q at several s at once (one enumeration at the largest s)."""
    vals = primitive_rep_values(q, max(s_values))
    return np.searchsorted(vals, np.asarray(s_values, dtype=float), side="right")


def count_all_reps(q: BinaryQF, s: float) -> int:
    """Ψ~_Q(s) = sum over k >= 1 of Ψ_Q(s/k^2)."""
    _require_counting_form(q)
    vals = primitive_rep_values(q, s)
    if vals.size == 0:
        return 0
    kmax = math.isqrt(int(s // vals[0]))
    ks = np.arange(1, kmax + 2, dtype=float)
    return int(np.searchsorted(vals, s / ks**2, side="right").sum())


def count_window_points(q: BinaryQF, s: float) -> int:
    """All nonzero (x, y) in the canonical window with |Q| <= s (equals Ψ~_Q(s))."""
    _require_counting_form(q)
    return _window_points(q, s, False)[0].size


def count_primitive_reps_bruteforce(q: BinaryQF, s: float, box: int | None = None) -> int:
    return len(bruteforce_orbit_values(q, s, box))


def bruteforce_orbit_values(q: BinaryQF, s: float, box: int | None = None) -> dict:
    """Orbit-closure oracle, no window logic: orbit label -> |Q| on that orbit.

    Every primitive (x, y) in a box with |Q| <= s is labeled by the smallest
    element (in a fixed order) of {±γ^k (x, y)} among orbit points of
    Euclidean norm at most M.  Along an orbit the squared norm is a convex
    function of k, so walking both ways until the norm exceeds M collects
    all such points, and the label is an orbit invariant.
    """
    _require_counting_form(q)
    gamma = automorph_generator(q)
    gamma_inv = _inverse(gamma)
    if box is None:
        ys, lo, hi = _window_box(q, s, slack=1.5)
        box = int(max(np.abs(ys).max(), np.abs(lo).max(), np.abs(hi).max())) + 1
    limit = 2 * box * box

    def label(x, y):
        best = min((x, y), (-x, -y))
        for g in (gamma, gamma_inv):
            px, py = x, y
            prev = px * px + py * py
            while True:
                px, py = _apply(g, px, py)
                norm = px * px + py * py
                if norm > limit and norm > prev:
                    break
                prev = norm
                if norm <= limit:
                    best = min(best, (px, py), (-px, -py))
        return best

    labels = {}
    for x in range(-box, box + 1):
        for y in range(-box, box + 1):
            v = q(x, y)
            if v != 0 and abs(v) <= s and math.gcd(x, y) == 1:
                labels[label(x, y)] = abs(v)
    return labels


def psi_prediction(q: BinaryQF, s: float) -> float:
    return 12 * regulator(q) / (math.pi**2 * math.sqrt(q.disc)) * s


# --- perpendicular lengths --------------------------------------------------------------


def perp_length(q: BinaryQF, gamma) -> float:
    """ln((2/√Δ)|Q(D, -C)|) for γ = ((A, B), (C, D))."""
    (A, B), (C, D) = gamma
    if A * D - B * C != 1:
        raise ValueError("γ must have determinant 1")
    val = q(D, -C)
    if val == 0:
        raise ValueError("γ·C_Q ends at infinity")
    return math.log(2 / math.sqrt(q.disc) * abs(val))


def perp_length_geometric(q: BinaryQF, gamma) -> float:
    """Signed distance from {height >= 1} to γ·C_Q, computed in geom."""
    (A, B), (C, D) = gamma
    g = geom.MoebiusMap(float(A), float(B), float(C), float(D))
    image = geom.moebius_apply_object(g, q.geodesic())
    return geom.dist_between(geom.Horoball(geom.INF, 1.0), image)


def random_sl2z(rng: np.random.Generator, length: int = 6, tmax: int = 3):
    """Random word in T^k and S."""
    m = ((1, 0), (0, 1))
    for _ in range(length):
        k = int(rng.integers(-tmax, tmax + 1))
        step = ((1, k), (0, 1)) if rng.random() < 0.5 else ((0, -1), (1, k))
        m = _mul(m, step)
    return m


def _mul(g, h):
    (a, b), (c, d) = g
    (e, f), (p, q) = h
    return ((a * e + b * p, a * f + b * q), (c * e + d * p, c * f + d * q))


# --- positive definite forms --------------------------------------------------------------


def gauss_count(q: BinaryQF, t: int) -> int:
    """#{(x, y) in Z^2 : Q(x, y) <= t}, origin included, for positive definite Q."""
    if q.disc >= 0 or q.a <= 0:
        raise ValueError("gauss_count needs a positive definite form")
    t = int(math.floor(t))
    if t < 0:
        return 0
    nd = -q.disc
    y_max = math.isqrt(4 * q.a * t // nd) + 1
    total = 0
    for y in range(-y_max, y_max + 1):
        rad = nd * -y * y + 4 * q.a * t   # discriminant in x: b^2y^2 - 4a(cy^2 - t)
        if rad < 0:
            continue
        m = math.isqrt(rad)
        lo = (-q.b * y - m) // (2 * q.a)
        hi = (-q.b * y + m) // (2 * q.a) + 1
        while q(lo, y) > t:
            lo += 1
        while q(lo - 1, y) <= t:
            lo -= 1
        while q(hi, y) > t:
            hi -= 1
        while q(hi + 1, y) <= t:
            hi += 1
        if hi >= lo:
            total += hi - lo + 1
    return total


# --- reduction theory for indefinite forms ------------------------------------------------


def is_reduced(q: BinaryQF) -> bool:
    r = math.isqrt(q.disc)
    return 0 < q.b <= r and 2 * abs(q.a) + q.b > r and 2 * abs(q.a) - q.b <= r


def rho(q: BinaryQF) -> tuple[BinaryQF, int]:
    """One reduction step (a, b, c) -> (c, b', .) with b' = -b + 2cr; returns the form and r."""
    a, b, c = q.a, q.b, q.c
    disc, root = q.disc, math.isqrt(q.disc)
    ac = abs(c)
    if ac > root:
        nb = (-b) % (2 * ac)
        if nb > ac:
            nb -= 2 * ac
    else:
        nb = root - ((root + b) % (2 * ac))
    r = (nb + b) // (2 * c)
    return BinaryQF(c, nb, (nb * nb - disc) // (4 * c)), r


def reduce_form(q: BinaryQF) -> tuple[BinaryQF, tuple]:
    """A reduced form R and γ in SL_2(Z) with Q∘γ = R."""
    _require_indefinite(q.disc)
    g = ((1, 0), (0, 1))
    for _ in range(10**6):
        if is_reduced(q):
            return q, g
        q, r = rho(q)
        g = _mul(g, ((0, -1), (1, r)))
    raise CapacityError("reduction did not terminate")


@lru_cache(maxsize=None)
def reduction_cycle(q: BinaryQF) -> tuple[BinaryQF, ...]:
    """The cycle of reduced forms in the proper class of q."""
    start, _ = reduce_form(q)
    cycle = [start]
    cur, _ = rho(start)
    while cur != start:
        cycle.append(cur)
        cur, _ = rho(cur)
        if len(cycle) > 10**6:
            raise CapacityError("reduction cycle too long")
    return tuple(cycle)


def equivalent(q1: BinaryQF, q2: BinaryQF) -> bool:
    if q1.disc != q2.disc:
        return False
    return reduce_form(q2)[0] in set(reduction_cycle(q1))


def equivalence_witness(q1: BinaryQF, q2: BinaryQF):
    """γ in SL_2(Z) with q1∘γ = q2, or None."""
    if q1.disc != q2.disc:
        return None
    r1, g1 = reduce_form(q1)
    r2, g2 = reduce_form(q2)
    walk = ((1, 0), (0, 1))
    cur = r1
    for _ in range(len(reduction_cycle(q1)) + 1):
        if cur == r2:
            return _mul(_mul(g1, walk), _inverse(g2))
        cur, r = rho(cur)
        walk = _mul(walk, ((0, -1), (1, r)))
    return None


def _reduce_vec(a, b, c, disc):
    """Vectorized reduction to a reduced (a, b) pair; c is recomputed from Δ."""
    root = math.isqrt(disc)
    a, b, c = a.copy(), b.copy(), c.copy()
    for _ in range(10**5):
        red = (b > 0) & (b <= root) & (2 * np.abs(a) + b > root) & (2 * np.abs(a) - b <= root)
        todo = ~red
        if not todo.any():
            return a, b
        ta, tb, tc = a[todo], b[todo], c[todo]
        ac = np.abs(tc)
        big = ac > root
        nb = np.where(big, np.mod(-tb, 2 * ac), root - np.mod(root + tb, 2 * ac))
        nb = np.where(big & (nb > ac), nb - 2 * ac, nb)
        a[todo] = tc
        b[todo] = nb
        c[todo] = (nb * nb - disc) // (4 * tc)
    raise CapacityError("vectorized reduction did not terminate")


def forms_of_disc(disc: int, a_max: int):
    """All (a, b, c) with 0 < a <= a_max, b^2 - 4ac = disc and -2a < b <= 0.

    These are the forms with positive leading coefficient whose root-center
    -b/2a lies in [0, 1).
    """
    # b^2 = disc mod 4a is invariant under b -> b + 2a, so each root class mod 2a
    # gives exactly one b in (-2a, 0]
    a_out, b_out = [], []
    for a in range(1, a_max + 1):
        roots = sqrt_mod(disc % (4 * a), 4 * a, all_roots=True)
        if roots:
            sel = np.array(sorted({-((-r) % (2 * a)) for r in roots}), dtype=np.int64)
            a_out.append(np.full(sel.size, a, dtype=np.int64))
            b_out.append(sel)
    if not a_out:
        e = np.zeros(0, dtype=np.int64)
        return e, e, e
    a = np.concatenate(a_out)
    b = np.concatenate(b_out)
    c = (b * b - disc) // (4 * a)
    return a, b, c


def _orbit_forms(q0: BinaryQF, a_max: int):
    """Normalized forms (a > 0, center in [0, 1)) whose roots lie in the orbit of q0's roots."""
    _require_counting_form(q0)
    disc = q0.disc
    a, b, c = forms_of_disc(disc, a_max)
    prim = np.gcd(np.gcd(a, b), c) == 1
    a, b, c = a[prim], b[prim], c[prim]
    ra, rb = _reduce_vec(a, b, c, disc)
    targets = {(f.a, f.b) for f in reduction_cycle(q0)} | {(f.a, f.b) for f in reduction_cycle(-q0)}
    key = ra * (4 * disc + 1) + rb
    tkeys = np.array([ta * (4 * disc + 1) + tb for ta, tb in targets], dtype=np.int64)
    keep = np.isin(key, tkeys)
    return a[keep], b[keep], c[keep]


def count_orbit_irrationals(q0: BinaryQF, s: float) -> int:
    """α in PSL_2(Z)·{roots of q0}, modulo Z, with h(α) = 2/|α - α^σ| <= s."""
    if s <= 0:
        return 0
    a_max = int(math.floor(s * math.sqrt(q0.disc) / 2))
    a, _, _ = _orbit_forms(q0, a_max)
    return 2 * int(a.size)


def count_orbit_irrationals_grid(q0: BinaryQF, s_values) -> np.ndarray:
    s_values = np.asarray(s_values, dtype=float)
    a_max = int(math.floor(s_values.max() * math.sqrt(q0.disc) / 2))
    a, _, _ = _orbit_forms(q0, a_max)
    heights = np.sort(2 * a / math.sqrt(q0.disc))
    return 2 * np.searchsorted(heights, s_values * (1 + 1e-15), side="right")


def irrationals_prediction(q0: BinaryQF, s: float) -> float:
    """Main term of count_orbit_irrationals. A root of height <= s is a form with
    |a'| <= s√Δ/2, so the count is Ψ(s√Δ/2), doubled when Q0 and -Q0 lie in
    different classes."""
    k = 1 if equivalent(q0, -q0) else 2
    return k * psi_prediction(q0, s * math.sqrt(q0.disc) / 2)


def orbit_irrationals(q0: BinaryQF, s: float) -> list[tuple[float, BinaryQF]]:
    """The counted irrationals with the form each is a root of."""
    a_max = int(math.floor(s * math.sqrt(q0.disc) / 2))
    out = []
    for ai, bi, ci in zip(*_orbit_forms(q0, a_max)):
        f = BinaryQF(int(ai), int(bi), int(ci))
        for r in f.roots():
            out.append((r, f))
    return out


def feet_distribution(q: BinaryQF, s: float) -> np.ndarray:
    """Horizontal coordinates mod 1 of the feet on the height-1 horosphere of the
    common perpendiculars of length in (0, s] between {height >= 1} and the
    orbit of C_Q."""
    a_max = int(math.floor(math.exp(s) * math.sqrt(q.disc) / 2))
    a, b, _ = _orbit_forms(q, a_max)
    positive = 2 * a > math.sqrt(q.disc)
    centers = -b[positive] / (2.0 * a[positive])
    return np.mod(centers, 1.0)
