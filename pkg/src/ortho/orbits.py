"""Orbit points of PSL_2(Z) and PSL_2(Z[i]) in hyperbolic balls.

For g in SL_2, cosh d(base, g base) = (sum of |entries|^2) / 2, with base
point i in H^2 or j in H^3, so a ball count is a count of integral matrices
of bounded Frobenius norm.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import constants
from .report import CountReport

RINGS = ("Z", "Z[i]")
STABILIZER = {"Z": 2, "Z[i]": 4}  # order of the stabilizer of the base point in PSL
MAX_PAIRS = 2 * 10**8


class CapacityError(RuntimeError):
    pass


def norm_bound(s: float) -> int:
    """Largest integer Σ with Σ <= 2 cosh s (cosh 0 = 1 is kept exact)."""
    x = 2 * math.cosh(s)
    n = math.floor(x)
    if x - n > 1 - 1e-12 * x:
        n += 1
    return n


def _check(ring, s):
    if ring not in RINGS:
        raise ValueError(f"ring must be one of {RINGS}")
    if s < 0:
        raise ValueError("s must be nonnegative")


# --- Z -------------------------------------------------------------------------


def _egcd_vec(a, c):
    """Vectorized extended gcd: (g, x, y) with a x + c y = g >= 0."""
    r0, r1 = a.copy(), c.copy()
    x0, x1 = np.ones_like(a), np.zeros_like(a)
    y0, y1 = np.zeros_like(a), np.ones_like(a)
    while np.any(r1 != 0):
        nz = r1 != 0
        q = np.zeros_like(r0)
        q[nz] = r0[nz] // r1[nz]
        r0, r1 = np.where(nz, r1, r0), np.where(nz, r0 - q * r1, r1)
        x0, x1 = np.where(nz, x1, x0), np.where(nz, x0 - q * x1, x1)
        y0, y1 = np.where(nz, y1, y0), np.where(nz, y0 - q * y1, y1)
    sign = np.where(r0 < 0, -1, 1)
    return r0 * sign, x0 * sign, y0 * sign


def _count_z(a, c, bound):
    """Number of (b, d) with a d - b c = 1 and a²+b²+c²+d² <= bound, per column (a, c)."""
    g, x, y = _egcd_vec(a, c)
    ok = g == 1
    a, c, x, y = a[ok], c[ok], x[ok], y[ok]
    # a x + c y = 1, so (b, d) = (-y, x) + k (a, c)
    b0, d0 = -y, x
    S = a * a + c * c
    R = bound - S
    kstar = -(a * b0 + c * d0) / S
    # b² + d² = S (k - k*)² + 1/S
    rad2 = (R - 1.0 / S) / S
    good = rad2 >= -1e-9
    half = np.sqrt(np.clip(rad2, 0, None))
    lo = np.ceil(kstar - half - 1e-9).astype(np.int64)
    hi = np.floor(kstar + half + 1e-9).astype(np.int64)

    def fits(k):
        b, d = b0 + k * a, d0 + k * c
        return b * b + d * d <= R

    lo = np.where(good & ~fits(lo), lo + 1, lo)
    hi = np.where(good & ~fits(hi), hi - 1, hi)
    return int(np.where(good, np.maximum(hi - lo + 1, 0), 0).sum())


def _pairs_z(bound):
    m = math.isqrt(bound)
    r = np.arange(-m, m + 1, dtype=np.int64)
    A, C = np.meshgrid(r, r, indexing="ij")
    A, C = A.ravel(), C.ravel()
    keep = (A * A + C * C <= bound) & ((A != 0) | (C != 0))
    return A[keep], C[keep]


# --- Z[i] ------------------------------------------------------------------------


def _gmul(ar, ai, br, bi):
    return ar * br - ai * bi, ar * bi + ai * br


def _gauss_egcd_vec(ar, ai, cr, ci):
    """Vectorized Euclid in Z[i]: (g, x, y) with a x + c y = g, componentwise arrays."""
    r0r, r0i, r1r, r1i = ar.copy(), ai.copy(), cr.copy(), ci.copy()
    one, zero = np.ones_like(ar), np.zeros_like(ar)
    x0r, x0i, x1r, x1i = one.copy(), zero.copy(), zero.copy(), zero.copy()
    y0r, y0i, y1r, y1i = zero.copy(), zero.copy(), one.copy(), zero.copy()
    while True:
        nz = (r1r != 0) | (r1i != 0)
        if not nz.any():
            break
        n1 = np.where(nz, r1r * r1r + r1i * r1i, 1)
        pr, pi = _gmul(r0r, r0i, r1r, -r1i)
        # rounded quotient p / n1
        qr = np.where(nz, (2 * pr + n1) // (2 * n1), 0)
        qi = np.where(nz, (2 * pi + n1) // (2 * n1), 0)
        tr, ti = _gmul(qr, qi, r1r, r1i)
        nr, ni = r0r - tr, r0i - ti
        ur, ui = _gmul(qr, qi, x1r, x1i)
        vr, vi = _gmul(qr, qi, y1r, y1i)
        r0r, r0i, r1r, r1i = (np.where(nz, r1r, r0r), np.where(nz, r1i, r0i),
                              np.where(nz, nr, r1r), np.where(nz, ni, r1i))
        x0r, x0i, x1r, x1i = (np.where(nz, x1r, x0r), np.where(nz, x1i, x0i),
                              np.where(nz, x0r - ur, x1r), np.where(nz, x0i - ui, x1i))
        y0r, y0i, y1r, y1i = (np.where(nz, y1r, y0r), np.where(nz, y1i, y0i),
                              np.where(nz, y0r - vr, y1r), np.where(nz, y0i - vi, y1i))
    return (r0r, r0i), (x0r, x0i), (y0r, y0i)


def _count_zi(ar, ai, cr, ci, bound):
    (gr, gi), (xr, xi), (yr, yi) = _gauss_egcd_vec(ar, ai, cr, ci)
    ok = gr * gr + gi * gi == 1
    ar, ai, cr, ci, gr, gi = ar[ok], ai[ok], cr[ok], ci[ok], gr[ok], gi[ok]
    xr, xi, yr, yi = xr[ok], xi[ok], yr[ok], yi[ok]
    # divide the Bezout relation by the unit g: a (x/g) + c (y/g) = 1
    xr, xi = _gmul(xr, xi, gr, -gi)
    yr, yi = _gmul(yr, yi, gr, -gi)
    # a d - b c = 1 with d = x/g, b = -y/g, plus k (a, c) for k in Z[i]
    b0r, b0i, d0r, d0i = -yr, -yi, xr, xi
    S = ar * ar + ai * ai + cr * cr + ci * ci
    R = bound - S
    # k* = -(conj(a) b0 + conj(c) d0) / S
    pr1, pi1 = _gmul(ar, -ai, b0r, b0i)
    pr2, pi2 = _gmul(cr, -ci, d0r, d0i)
    kx, ky = -(pr1 + pr2) / S, -(pi1 + pi2) / S
    rad2 = (R - 1.0 / S) / S
    good = rad2 >= -1e-9
    rad = np.sqrt(np.clip(rad2, 0, None))

    def cost(kr, ki, idx):
        tr, ti = _gmul(kr, ki, ar[idx], ai[idx])
        ur, ui = _gmul(kr, ki, cr[idx], ci[idx])
        br, bi = b0r[idx] + tr, b0i[idx] + ti
        dr, di = d0r[idx] + ur, d0i[idx] + ui
        return br * br + bi * bi + dr * dr + di * di

    idx = np.nonzero(good)[0]
    total = 0
    x_lo = np.ceil(kx[idx] - rad[idx] - 1e-9).astype(np.int64)
    x_hi = np.floor(kx[idx] + rad[idx] + 1e-9).astype(np.int64)
    width = x_hi - x_lo + 1
    for w in np.unique(width):
        if w <= 0:
            continue
        sel = idx[width == w]
        base = x_lo[width == w]
        for off in range(int(w)):
            kr = base + off
            h2 = rad[sel] ** 2 - (kr - kx[sel]) ** 2
            h = np.sqrt(np.clip(h2, 0, None))
            lo = np.ceil(ky[sel] - h - 1e-9).astype(np.int64)
            hi = np.floor(ky[sel] + h + 1e-9).astype(np.int64)
            # exact integer trimming at both ends
            for _ in range(2):
                bad_lo = (lo <= hi) & (cost(kr, lo, sel) > R[sel])
                lo = np.where(bad_lo, lo + 1, lo)
                bad_hi = (lo <= hi) & (cost(kr, hi, sel) > R[sel])
                hi = np.where(bad_hi, hi - 1, hi)
            total += int(np.maximum(hi - lo + 1, 0).sum())
    return total


def _pairs_zi(bound):
    m = math.isqrt(bound)
    r = np.arange(-m, m + 1, dtype=np.int64)
    if r.size**4 > 8 * MAX_PAIRS:
        raise CapacityError(f"norm bound {bound} too large for Z[i] enumeration")
    A, B = np.meshgrid(r, r, indexing="ij")
    A, B = A.ravel(), B.ravel()
    n1 = A * A + B * B
    keep = n1 <= bound
    A, B, n1 = A[keep], B[keep], n1[keep]
    order = np.argsort(n1)
    A, B, n1 = A[order], B[order], n1[order]
    out = []
    for j in range(A.size):
        # second entry with |a|² + |c|² <= bound
        k = np.searchsorted(n1, bound - n1[j], side="right")
        out.append((np.full(k, A[j]), np.full(k, B[j]), A[:k], B[:k]))
    ar, ai, cr, ci = (np.concatenate(p) for p in zip(*out))
    keep = (ar != 0) | (ai != 0) | (cr != 0) | (ci != 0)
    return ar[keep], ai[keep], cr[keep], ci[keep]


# --- public API ------------------------------------------------------------------


def _chunks(n, parts):
    edges = np.linspace(0, n, parts + 1).astype(int)
    return [slice(edges[i], edges[i + 1]) for i in range(parts)]


def ball_matrices(ring: str, s: float, threads: int = 1) -> int:
    """Elements γ of PSL_2(ring) with d(base, γ base) <= s, counted as matrices.

    Orbit points are this number divided by STABILIZER[ring].
    """
    _check(ring, s)
    bound = norm_bound(s)
    if ring == "Z":
        cols = _pairs_z(bound)
        fn = _count_z
    else:
        cols = _pairs_zi(bound)
        fn = _count_zi
    n = cols[0].size
    if n > MAX_PAIRS:
        raise CapacityError(f"{n} columns exceed capacity")
    parts = max(1, min(threads, n // 50000 + 1))
    jobs = [tuple(c[sl] for c in cols) + (bound,) for sl in _chunks(n, parts)]
    if parts == 1:
        total = fn(*jobs[0])
    else:
        with ThreadPoolExecutor(parts) as ex:
            total = sum(ex.map(lambda j: fn(*j), jobs))
    # ±I collapse to one element of PSL
    return total // 2


def ball_matrices_bruteforce(ring: str, s: float) -> int:
    """Oracle: loop over three entries, solve the fourth from the determinant."""
    _check(ring, s)
    bound = norm_bound(s)
    m = math.isqrt(bound)
    count = 0
    if ring == "Z":
        r = range(-m, m + 1)
        for a in r:
            for b in r:
                for c in r:
                    rest = bound - a * a - b * b - c * c
                    if rest < 0:
                        continue
                    if a != 0:
                        if (1 + b * c) % a == 0:
                            d = (1 + b * c) // a
                            count += d * d <= rest
                    elif b * c == -1:
                        count += sum(1 for d in r if d * d <= rest)
        return count // 2
    gs = [(x, y) for x in range(-m, m + 1) for y in range(-m, m + 1)
          if x * x + y * y <= bound]

    def n2(z):
        return z[0] * z[0] + z[1] * z[1]

    for a in gs:
        na = n2(a)
        for b in gs:
            for c in gs:
                rest = bound - na - n2(b) - n2(c)
                if rest < 0:
                    continue
                bc = _gmul(b[0], b[1], c[0], c[1])
                num = (1 + bc[0], bc[1])
                if na:
                    # d = num / a, exactly
                    pr, pi = _gmul(num[0], num[1], a[0], -a[1])
                    if pr % na == 0 and pi % na == 0:
                        count += (pr // na) ** 2 + (pi // na) ** 2 <= rest
                elif num == (0, 0):
                    count += sum(1 for d in gs if n2(d) <= rest)
    return count // 2


def prediction_constant(ring: str) -> float:
    """Constant C in N(s) ~ C e^{(n-1)s} for the matrix count."""
    if ring == "Z":
        return constants.master_for(2, math.pi / 3, ("point",), ("point",))
    return constants.master_for(3, constants.humbert_volume(-4), ("point",), ("point",))


def orbit_ball_report(ring: str, s_grid, threads: int = 1, progress=None) -> CountReport:
    delta = 1 if ring == "Z" else 2
    c = prediction_constant(ring)
    rep = CountReport("orbit-ball", {"group": "PSL2(Z)" if ring == "Z" else "PSL2(Z[i])",
                                     "stabilizer": STABILIZER[ring]}, delta=delta)
    for s in s_grid:
        n = ball_matrices(ring, s, threads)
        rep.add(s, n, c * math.exp(delta * s))
        if progress:
            progress(f"s={s:.4g} count={n}")
    rep.refit()
    return rep
