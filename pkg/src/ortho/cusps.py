"""Cusp-to-cusp counting: totient sums over Z and over class-number-one
imaginary quadratic rings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from . import constants, geom

SUPPORTED_DK = (-3, -4, -7, -8, -11)

# Limit on sieve sizes; beyond it the caller gets a CapacityError.
MAX_SIEVE = 5 * 10**8


class CapacityError(RuntimeError):
    pass


def floor_exp(x: float) -> int:
    """floor(e^x), robust to rounding when e^x is (nearly) an integer."""
    n = int(math.floor(math.exp(x)))
    if math.log(n + 1) <= x + 1e-12:
        n += 1
    elif n > 0 and math.log(n) > x + 1e-12:
        n -= 1
    return n


# --- rational case ------------------------------------------------------------------


def totients(n: int) -> np.ndarray:
    """phi(0..n) by the product sieve phi(k) = k prod (1 - 1/p)."""
    if n + 1 > MAX_SIEVE:
        raise CapacityError(f"sieve of size {n} exceeds {MAX_SIEVE}")
    phi = np.arange(n + 1, dtype=np.int64)
    is_comp = np.zeros(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if is_comp[p]:
            continue
        is_comp[p * p::p] = True
        phi[p::p] -= phi[p::p] // p
    return phi


def phi_summatory(n: int) -> int:
    if n < 1:
        return 0
    return int(totients(n)[1:].sum())


def mertens_count(s: float) -> int:
    """Horoballs of the PSL_2(Z)-orbit of {height >= 1}, modulo Z, at distance <= s."""
    if s < 0:
        return 0
    return phi_summatory(floor_exp(s / 2))


def mertens_counts(s_values) -> np.ndarray:
    n_max = floor_exp(max(s_values) / 2)
    cums = np.cumsum(totients(n_max)[1:])
    return np.array([int(cums[floor_exp(s / 2) - 1]) if s >= 0 else 0 for s in s_values])


# --- imaginary quadratic integers --------------------------------------------------------


@dataclass(frozen=True)
class ImagQuadInt:
    """m + n ω in O_K, with ω = √D/2 for D ≡ 0 mod 4 and (1 + √D)/2 for D ≡ 1 mod 4."""

    m: int
    n: int
    d_k: int

    @property
    def _odd(self) -> bool:
        return self.d_k % 4 == 1

    def norm(self) -> int:
        return int(norm(self.d_k, self.m, self.n))

    def __mul__(self, other: "ImagQuadInt") -> "ImagQuadInt":
        m, n = mul(self.d_k, self.m, self.n, other.m, other.n)
        return ImagQuadInt(int(m), int(n), self.d_k)

    def __add__(self, other):
        return ImagQuadInt(self.m + other.m, self.n + other.n, self.d_k)

    def __sub__(self, other):
        return ImagQuadInt(self.m - other.m, self.n - other.n, self.d_k)

    def conj(self) -> "ImagQuadInt":
        m, n = conj(self.d_k, self.m, self.n)
        return ImagQuadInt(int(m), int(n), self.d_k)

    def is_zero(self) -> bool:
        return self.m == 0 and self.n == 0

    def to_complex(self) -> complex:
        return complex(*to_xy(self.d_k, self.m, self.n))

    def divides(self, other: "ImagQuadInt") -> bool:
        return exact_div(other, self) is not None


def norm(d, m, n):
    if d % 4 == 1:
        return m * m + m * n + n * n * ((1 - d) // 4)
    return m * m + n * n * (-d // 4)


def mul(d, m1, n1, m2, n2):
    if d % 4 == 1:
        return m1 * m2 + n1 * n2 * ((d - 1) // 4), m1 * n2 + m2 * n1 + n1 * n2
    return m1 * m2 + n1 * n2 * (d // 4), m1 * n2 + m2 * n1


def conj(d, m, n):
    if d % 4 == 1:
        return m + n, -n
    return m, -n


def to_xy(d, m, n):
    """Real and imaginary parts of m + n ω."""
    im = math.sqrt(-d) / 2
    if d % 4 == 1:
        return m + n / 2, n * im
    return m, n * im


def exact_div(a: ImagQuadInt, b: ImagQuadInt) -> ImagQuadInt | None:
    """a / b if b divides a in O_K."""
    nb = b.norm()
    m, n = mul(a.d_k, a.m, a.n, *conj(a.d_k, b.m, b.n))
    if m % nb or n % nb:
        return None
    return ImagQuadInt(m // nb, n // nb, a.d_k)


def units(d_k: int) -> list[ImagQuadInt]:
    return [ImagQuadInt(m, n, d_k) for m, n in _small_elements(d_k, 1) if norm(d_k, m, n) == 1]


def _small_elements(d, bound):
    """Coordinates (m, n) of all elements with norm <= bound, as a list."""
    m, n = elements_up_to(d, bound)
    return list(zip(m.tolist(), n.tolist()))


def elements_up_to(d: int, bound: float) -> tuple[np.ndarray, np.ndarray]:
    """All (m, n) with N(m + n ω) <= bound, including 0."""
    bound = int(math.floor(bound))
    n_max = math.isqrt(4 * bound // -d) + 1
    m_max = math.isqrt(bound) + n_max + 1
    ns = np.arange(-n_max, n_max + 1, dtype=np.int64)
    ms = np.arange(-m_max, m_max + 1, dtype=np.int64)
    if ns.size * ms.size > MAX_SIEVE:
        raise CapacityError("element box too large")
    M, N = np.meshgrid(ms, ns, indexing="ij")
    M, N = M.ravel(), N.ravel()
    keep = norm(d, M, N) <= bound
    return M[keep], N[keep]


def _round_div(a: ImagQuadInt, b: ImagQuadInt) -> ImagQuadInt:
    """Nearest-lattice-point quotient, for the Euclidean algorithm."""
    nb = b.norm()
    m, n = mul(a.d_k, a.m, a.n, *conj(a.d_k, b.m, b.n))
    qm, qn = Fraction(m, nb), Fraction(n, nb)
    best = None
    for dm in (0, 1):
        for dn in (0, 1):
            cand = ImagQuadInt(math.floor(qm) + dm, math.floor(qn) + dn, a.d_k)
            r = a - cand * b
            if best is None or r.norm() < best[1]:
                best = (cand, r.norm())
    return best[0]


def egcd(a: ImagQuadInt, b: ImagQuadInt):
    """(g, x, y) with a x + b y = g, using norm-Euclidean division."""
    d = a.d_k
    zero, one = ImagQuadInt(0, 0, d), ImagQuadInt(1, 0, d)
    r0, r1, x0, x1, y0, y1 = a, b, one, zero, zero, one
    while not r1.is_zero():
        q = _round_div(r0, r1)
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
        if r1.norm() >= r0.norm() and not r1.is_zero():
            raise ValueError(f"O_K with D = {d} is not norm-Euclidean")
    return r0, x0, y0


def phi_k(q: ImagQuadInt) -> int:
    """#(O_K / q)^×, from the factorization of q into prime ideals."""
    if q.is_zero():
        raise ValueError("q must be nonzero")
    d = q.d_k
    if d not in constants.UNITS:
        raise ValueError(f"class number of D = {d} is not one")
    nq = q.norm()
    result = Fraction(nq)
    for p in sympy.factorint(nq):
        chi = constants.kronecker(d, p)
        if chi == -1:
            result *= Fraction(p * p - 1, p * p)
        elif chi == 0:
            result *= Fraction(p - 1, p)
        else:
            pi = _prime_above(d, p)
            for cand in (pi, pi.conj()):
                if cand.divides(q):
                    result *= Fraction(p - 1, p)
    assert result.denominator == 1
    return int(result)


def _prime_above(d: int, p: int) -> ImagQuadInt:
    m, n = elements_up_to(d, p)
    hit = np.nonzero(norm(d, m, n) == p)[0]
    if hit.size == 0:
        raise ValueError(f"no element of norm {p}; is the class number one?")
    return ImagQuadInt(int(m[hit[0]]), int(n[hit[0]]), d)


def _phi_k_table(d: int, bound: int):
    """φ_K on all nonzero elements of norm <= bound, by sieving over prime ideals."""
    m, n = elements_up_to(d, bound)
    nz = (m != 0) | (n != 0)
    m, n = m[nz], n[nz]
    norms = norm(d, m, n)
    phi = norms.copy()
    m_off = int(np.abs(m).max()) + 1
    width = 2 * (int(np.abs(n).max()) + 1) + 1
    n_off = width // 2
    index = np.full((2 * m_off + 1) * width, -1, dtype=np.int64)
    index[(m + m_off) * width + (n + n_off)] = np.arange(m.size)

    primes = np.array(list(sympy.primerange(2, bound + 1)), dtype=np.int64)
    # one generator per prime ideal of norm <= bound
    prime_norm = np.isin(norms, primes)
    gen = {}
    for mm, nn, p in zip(m[prime_norm].tolist(), n[prime_norm].tolist(), norms[prime_norm].tolist()):
        if p not in gen:
            gen[p] = (mm, nn)
    ideals = []
    for p in primes.tolist():
        chi = constants.kronecker(d, p)
        if chi == -1:
            if p * p <= bound:
                ideals.append(((p, 0), p * p))
        elif chi == 0:
            ideals.append((gen[p], p))
        else:
            g = gen[p]
            ideals.append((g, p))
            ideals.append((conj(d, *g), p))

    for (gm, gn), npr in ideals:
        mu_m, mu_n = elements_up_to(d, bound // npr)
        keep = (mu_m != 0) | (mu_n != 0)
        qm, qn = mul(d, gm, gn, mu_m[keep], mu_n[keep])
        idx = index[(qm + m_off) * width + (qn + n_off)]
        phi[idx] -= phi[idx] // npr
    return norms, phi


def bianchi_cusp_count(d_k: int, s: float) -> int:
    """Horoballs of the PSL_2(O_K)-orbit of {height >= 1}, modulo translations by O_K,
    at distance <= s: the sum of φ_K(q) over q up to units with N(q) <= e^s."""
    return int(bianchi_cusp_counts(d_k, [s])[0])


def bianchi_cusp_counts(d_k: int, s_values) -> np.ndarray:
    if d_k not in SUPPORTED_DK:
        raise ValueError(f"D_K = {d_k} is not supported; choose from {SUPPORTED_DK}")
    s_values = np.asarray(s_values, dtype=float)
    bound = floor_exp(float(s_values.max()))
    norms, phi = _phi_k_table(d_k, bound)
    order = np.argsort(norms, kind="stable")
    norms, cums = norms[order], np.cumsum(phi[order])
    w = constants.UNITS[d_k]
    out = []
    for s in s_values:
        k = np.searchsorted(norms, floor_exp(s), side="right")
        total = int(cums[k - 1]) if k else 0
        assert total % w == 0
        out.append(total // w)
    return np.array(out, dtype=np.int64)


def horoball_image(d_k: int, p: ImagQuadInt, q: ImagQuadInt) -> tuple[ImagQuadInt, geom.Horoball]:
    """Image of {height >= 1} under g = (p, r; q, t) in SL_2(O_K); returns (t, horoball)."""
    g, x, y = egcd(p, q)
    if g.norm() != 1:
        raise ValueError("p and q are not coprime")
    # p x + q y = g (a unit): scale so that p t - r q = 1 with t = x/g, r = -y/g
    ginv = exact_div(ImagQuadInt(1, 0, d_k), g)
    t, r = x * ginv, ImagQuadInt(0, 0, d_k) - y * ginv
    mat = geom.MoebiusMap(p.to_complex(), r.to_complex(), q.to_complex(), t.to_complex())
    return t, geom.moebius_apply_object(mat, geom.Horoball(geom.INF, 1.0), dim=3)


def bianchi_cusp_count_geometric(d_k: int, s: float) -> int:
    """Geometric oracle: map {height >= 1} through (p, *; q, *) for coprime (p, q) and
    count distinct images modulo translations with distance at most s."""
    bound = floor_exp(s)
    qs = [ImagQuadInt(m, n, d_k) for m, n in _small_elements(d_k, bound) if (m, n) != (0, 0)]
    seen = set()
    for q in qs:
        nq = q.norm()
        qc = conj(d_k, q.m, q.n)
        tried = set()
        for pm in range(nq):
            for pn in range(nq):
                # p/q mod O_K is p·conj(q) mod nq; the box hits each class many times
                m, n = mul(d_k, pm, pn, *qc)
                local = (m % nq, n % nq)
                if local in tried:
                    continue
                tried.add(local)
                p = ImagQuadInt(pm, pn, d_k)
                if egcd(p, q)[0].norm() != 1:
                    continue
                _, hb = horoball_image(d_k, p, q)
                length = geom.dist_between(geom.Horoball(geom.INF, 1.0), hb)
                if length > s + 1e-9:
                    continue
                seen.add(_center_key(d_k, p, q))
    return len(seen)


def _center_key(d_k, p: ImagQuadInt, q: ImagQuadInt):
    """p/q in coordinates (1, ω), reduced mod 1: exact rationals."""
    nq = q.norm()
    m, n = mul(d_k, p.m, p.n, *conj(d_k, q.m, q.n))
    return (Fraction(m, nq) % 1, Fraction(n, nq) % 1)


def bianchi_prediction_constants(d_k: int) -> dict[str, float]:
    w = constants.UNITS[d_k]
    zk = constants.dedekind_zeta2(d_k)
    return {
        "cosentino_refined": constants.special_constant("cosentino_refined", {"D_K": d_k}),
        "cosentino": constants.special_constant("cosentino", {"D_K": d_k}),
        "lattice_average": math.pi / (w * math.sqrt(abs(d_k)) * zk),
    }
