"""Indefinite binary Hermitian forms over Z[i] and their SL_2(Z[i])-orbits.

A form f(u, v) = a|u|² + 2 Re(conj(u) b v) + c|v|² has matrix M = (a, b; conj b, c),
so f = (u, v)* M (u, v) and M(f∘g) = g* M(f) g. Its zero set on the boundary of
H^3 is the circle of center -b/a and radius √Δ/|a|, Δ = |b|² - ac.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import constants, geom
from .report import CountReport, fit_constant, fit_exponent

MAX_STATES = 6 * 10**7
_CHUNK = 4 * 10**6


class StabilizationError(RuntimeError):
    pass


class CapacityError(RuntimeError):
    pass


def _g(z) -> tuple[int, int]:
    """Gaussian integer from complex, (re, im) or int, checked integral."""
    if isinstance(z, tuple):
        re, im = z
    elif isinstance(z, complex):
        re, im = z.real, z.imag
    else:
        re, im = z, 0
    if re != int(re) or im != int(im):
        raise ValueError(f"{z} is not a Gaussian integer")
    return int(re), int(im)


def _mul(x, y):
    return x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]


def _conj(x):
    return x[0], -x[1]


def _add(x, y):
    return x[0] + y[0], x[1] + y[1]


def _scale(k, x):
    return k * x[0], k * x[1]


@dataclass(frozen=True)
class HermForm:
    a: int
    b: tuple[int, int]
    c: int

    def __post_init__(self):
        object.__setattr__(self, "b", _g(self.b))

    @property
    def disc(self) -> int:
        return self.b[0] ** 2 + self.b[1] ** 2 - self.a * self.c

    def __call__(self, u, v) -> int:
        u, v = _g(u), _g(v)
        cross = _mul(_mul(_conj(u), self.b), v)
        return self.a * (u[0] ** 2 + u[1] ** 2) + 2 * cross[0] + self.c * (v[0] ** 2 + v[1] ** 2)

    def matrix(self) -> np.ndarray:
        b = complex(*self.b)
        return np.array([[self.a, b], [b.conjugate(), self.c]])

    def __neg__(self):
        return HermForm(-self.a, (-self.b[0], -self.b[1]), -self.c)


def act(f: HermForm, g) -> HermForm:
    """f∘g for g = (p, q, r, t) in SL_2(Z[i]), i.e. (u, v) ↦ f(pu + qv, ru + tv)."""
    p, q, r, t = (_g(x) for x in g)
    det = _add(_mul(p, t), _scale(-1, _mul(q, r)))
    if det != (1, 0):
        raise ValueError("g must have determinant 1")
    cb = _conj(f.b)
    b_new = _add(_mul(_conj(p), _add(_scale(f.a, q), _mul(f.b, t))),
                 _mul(_conj(r), _add(_mul(cb, q), _scale(f.c, t))))
    return HermForm(f(p, r), b_new, f(q, t))


GENERATORS = {
    "T": ((1, 0), (1, 0), (0, 0), (1, 0)),
    "Ti": ((1, 0), (0, 1), (0, 0), (1, 0)),
    "S": ((0, 0), (-1, 0), (1, 0), (0, 0)),
    "L": ((0, 1), (0, 0), (0, 0), (0, -1)),
}


# --- circles -------------------------------------------------------------------


LINE = "line"


@dataclass(frozen=True)
class OrbitCircle:
    """Boundary circle with exact Gaussian-rational center and rational radius²."""

    center: tuple[Fraction, Fraction]
    radius2: Fraction

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius2)

    @property
    def key(self) -> tuple:
        """Center modulo Z[i] and z ↦ -z, together with radius²."""
        x, y = self.center
        c1 = (x % 1, y % 1)
        c2 = ((-x) % 1, (-y) % 1)
        return (min(c1, c2), self.radius2)


def circle_of(f: HermForm):
    """Zero circle of f on C ∪ {∞}; LINE when a = 0."""
    if f.disc <= 0:
        raise ValueError("form is not indefinite")
    if f.a == 0:
        return LINE
    return OrbitCircle((Fraction(-f.b[0], f.a), Fraction(-f.b[1], f.a)), Fraction(f.disc, f.a**2))


def perp_length_herm(f: HermForm, g, tau: float = 1.0) -> float:
    """Signed distance from {height >= 1/tau} to the hemisphere over the circle of f∘g."""
    h = act(f, g)
    if h.a == 0:
        raise ValueError("f∘g has a = 0: its circle passes through ∞")
    return math.log(abs(h.a) / (tau * math.sqrt(f.disc)))


def perp_length_herm_geometric(f: HermForm, g, tau: float = 1.0) -> float:
    """Same quantity measured in H^3: a vertical slice of the hemisphere is a geodesic
    whose top is the closest point to a horoball centered at ∞."""
    circ = circle_of(act(f, g))
    if circ is LINE:
        raise ValueError("f∘g has a = 0: its circle passes through ∞")
    cx, cy = float(circ.center[0]), float(circ.center[1])
    r = circ.radius
    geo = geom.Geodesic(np.array([cx - r, cy]), np.array([cx + r, cy]))
    return geom.dist_between(geom.Horoball(geom.INF, 1.0 / tau), geo)


# --- orbit enumeration ----------------------------------------------------------


def _canon(a, br, bi):
    """Translate forms with a != 0 so that b lies in [0, |a|)²."""
    m = np.abs(a)
    return a, br % m, bi % m


def _pack(a, br, bi, bound):
    w = bound + 1
    return ((a + bound) * w + br) * w + bi


def _unpack(keys, bound):
    w = bound + 1
    bi = keys % w
    rest = keys // w
    return rest // w - bound, rest % w, bi


def _line_canon(b, c):
    g = math.gcd(b[0], b[1])
    return (b, c % (2 * g))


def _moves(a, br, bi, disc, bound):
    """All S∘T_t images with |a'| <= bound, for states with a != 0; plus L images."""
    out_a, out_br, out_bi = [_canon(a, -br, -bi)[0]], [(-br) % np.abs(a)], [(-bi) % np.abs(a)]
    lines = []
    absa = np.abs(a)
    c = (br * br + bi * bi - disc) // a
    half = np.ceil(np.sqrt(disc / absa**2 + bound / absa)).astype(np.int64) + 1
    tr0 = np.rint(-br / a).astype(np.int64)
    ti0 = np.rint(-bi / a).astype(np.int64)
    for w in np.unique(half):
        sel = np.nonzero(half == w)[0]
        d = np.arange(-w, w + 1, dtype=np.int64)
        dx, dy = np.meshgrid(d, d, indexing="ij")
        dx, dy = dx.ravel(), dy.ravel()
        step = max(1, _CHUNK // dx.size)
        for lo in range(0, sel.size, step):
            idx = sel[lo:lo + step]
            A = a[idx][:, None]
            BR, BI, C = br[idx][:, None], bi[idx][:, None], c[idx][:, None]
            tr = tr0[idx][:, None] + dx[None, :]
            ti = ti0[idx][:, None] + dy[None, :]
            ct = A * (tr * tr + ti * ti) + 2 * (tr * BR + ti * BI) + C
            keep = np.abs(ct) <= bound
            if not keep.any():
                continue
            A = np.broadcast_to(A, ct.shape)[keep]
            nbr = -(np.broadcast_to(BR, ct.shape)[keep] + A * tr[keep])
            nbi = np.broadcast_to(BI, ct.shape)[keep] + A * ti[keep]
            na = ct[keep]
            circ = na != 0
            ca, cbr, cbi = _canon(na[circ], nbr[circ], nbi[circ])
            out_a.append(ca)
            out_br.append(cbr)
            out_bi.append(cbi)
            if (~circ).any():
                # image (0, -conj(b + a t), a) is a line
                for x, y, cc in zip(nbr[~circ].tolist(), nbi[~circ].tolist(), A[~circ].tolist()):
                    lines.append(_line_canon((x, y), cc))
    return np.concatenate(out_a), np.concatenate(out_br), np.concatenate(out_bi), lines


def _line_moves(line, bound):
    (br, bi), c = line
    g = math.gcd(br, bi)
    nb = (-br, bi)
    out = [((-br, -bi), c % (2 * g))]  # L
    circles = []
    # values of c + 2 Re(conj(t) b) are c + 2g k
    k_lo = math.ceil((-bound - c) / (2 * g))
    k_hi = math.floor((bound - c) / (2 * g))
    for k in range(k_lo, k_hi + 1):
        v = c + 2 * g * k
        if v == 0:
            out.append(_line_canon(nb, 0))
        else:
            circles.append((v, nb[0] % abs(v), nb[1] % abs(v)))
    return out, circles


@dataclass
class OrbitForms:
    """Forms f∘g modulo translations z ↦ z + t, with |a| <= bound."""

    disc: int
    bound: int
    a: np.ndarray
    br: np.ndarray
    bi: np.ndarray
    lines: frozenset

    def restrict(self, s: int) -> "OrbitForms":
        m = np.abs(self.a) <= s
        return OrbitForms(self.disc, s, self.a[m], self.br[m], self.bi[m], self.lines)

    def keys(self) -> np.ndarray:
        return np.sort(_pack(self.a, self.br, self.bi, self.bound))

    def psi(self, s: float) -> int:
        """Primitive pairs (u, v) up to automorphs with |f(u, v)| <= s."""
        return int(np.count_nonzero(np.abs(self.a) <= s)) + len(self.lines)

    def circles(self, s: float) -> set[OrbitCircle]:
        m = (np.abs(self.a) <= s)
        out = set()
        for a, br, bi in zip(self.a[m].tolist(), self.br[m].tolist(), self.bi[m].tolist()):
            c = circle_of(HermForm(a, (br, bi), (br * br + bi * bi - self.disc) // a))
            out.add(c.key)
        return out


def orbit_forms(f: HermForm, bound: int, threads: int = 1, progress=None) -> OrbitForms:
    """Breadth-first search of the orbit of f, pruned to forms with |a| <= bound."""
    disc = f.disc
    if disc <= 0:
        raise ValueError("form is not indefinite")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    bound = int(bound)
    visited = np.empty(0, dtype=np.int64)
    lines_seen: set = set()
    frontier_keys = np.empty(0, dtype=np.int64)
    frontier_lines: list = []
    if f.a == 0:
        frontier_lines = [_line_canon(f.b, f.c)]
        lines_seen.update(frontier_lines)
    elif abs(f.a) <= bound:
        frontier_keys = _pack(*_canon(np.array([f.a]), np.array([f.b[0]]), np.array([f.b[1]])), bound)
        visited = frontier_keys.copy()
    else:
        raise ValueError("|a(f)| exceeds the bound")
    depth = 0
    while frontier_keys.size or frontier_lines:
        new_keys = []
        new_lines = []
        if frontier_keys.size:
            a, br, bi = _unpack(frontier_keys, bound)
            na, nbr, nbi, lines = _moves(a, br, bi, disc, bound)
            new_keys.append(_pack(na, nbr, nbi, bound))
            new_lines.extend(lines)
        for ln in frontier_lines:
            out, circs = _line_moves(ln, bound)
            new_lines.extend(out)
            if circs:
                arr = np.array(circs, dtype=np.int64)
                new_keys.append(_pack(arr[:, 0], arr[:, 1], arr[:, 2], bound))
        cand = np.unique(np.concatenate(new_keys)) if new_keys else np.empty(0, dtype=np.int64)
        fresh = cand[~np.isin(cand, visited, assume_unique=True)]
        visited = np.union1d(visited, fresh)
        frontier_keys = fresh
        frontier_lines = sorted(set(new_lines) - lines_seen)
        lines_seen.update(frontier_lines)
        depth += 1
        if visited.size > MAX_STATES:
            raise CapacityError(f"visited set exceeds {MAX_STATES} forms")
        if progress:
            progress(f"depth {depth}: {visited.size} forms, frontier {fresh.size}")
    a, br, bi = _unpack(visited, bound)
    return OrbitForms(disc, bound, a, br, bi, frozenset(lines_seen))


def stable_orbit_forms(f: HermForm, s: float, slack: float = 2.0, progress=None) -> OrbitForms:
    """Orbit forms with |a| <= s, checked to be identical under pruning slack σ and 2σ."""
    if slack < 1:
        raise ValueError("slack must be >= 1")
    s = int(math.floor(s))
    runs = [orbit_forms(f, math.ceil(k * slack * s), progress=progress).restrict(s)
            for k in (1, 2)]
    if not np.array_equal(runs[0].keys(), runs[1].keys()) or runs[0].lines != runs[1].lines:
        raise StabilizationError(
            f"orbit enumeration changed between slack {slack} and {2 * slack}")
    return runs[0]


def orbit_circles(f: HermForm, r_min: float, slack: float = 2.0) -> set:
    """Keys of orbit circles of radius >= r_min modulo translations and z ↦ -z."""
    if r_min <= 0:
        raise ValueError("r_min must be positive")
    s = math.sqrt(f.disc) / r_min
    return stable_orbit_forms(f, s, slack).circles(s)


def psi_prediction(f: HermForm) -> float:
    return constants.special_constant(
        "hermitian_qi", {"iota": constants.iota(f.a, f.b, f.c), "Delta": f.disc})


def herm_count_report(f: HermForm, s_grid, slack: float = 2.0, progress=None) -> CountReport:
    """ψ(s) over the grid against the Z[i] constant times s²; circle counts ride along."""
    s_grid = sorted(s_grid)
    forms = stable_orbit_forms(f, max(s_grid), slack, progress=progress)
    c = psi_prediction(f)
    rep = CountReport("herm-count", {"form": [f.a, f.b[0], f.b[1], f.c], "Delta": f.disc,
                                     "slack": slack, "iota": constants.iota(f.a, f.b, f.c)},
                      delta=2)
    circles = []
    for s in s_grid:
        rep.add(s, forms.psi(s), c * s * s)
        circles.append(len(forms.circles(s)))
    rep.params["circles"] = circles
    # power law: fit in log s
    constant, drift = fit_constant([(math.log(r[0]), r[1]) for r in rep.rows], 2)
    exponent, _ = fit_exponent(rep.rows)
    rep.fit = {"constant": constant, "drift": drift, "exponent": exponent}
    return rep


def forms_mod_translation(disc: int, s: int, both_even: bool | None = None) -> int:
    """Direct count of integral forms of discriminant disc with 0 < |a| <= s, modulo
    translations, optionally restricted by whether a and c are both even."""
    total = 0
    for a in range(-s, s + 1):
        if a == 0:
            continue
        m = abs(a)
        r = np.arange(m, dtype=np.int64)
        br, bi = np.meshgrid(r, r, indexing="ij")
        num = br * br + bi * bi - disc
        ok = num % a == 0
        if both_even is not None:
            even = (a % 2 == 0) & ((num // a) % 2 == 0)
            ok &= even if both_even else ~even
        total += int(np.count_nonzero(ok))
    return total
