"""Closed-form counting constants, measure masses and zeta values."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gamma, zeta

# Negative fundamental discriminants of class number one, with unit counts.
UNITS = {-3: 6, -4: 4, -7: 2, -8: 2, -11: 2, -19: 2, -43: 2, -67: 2, -163: 2}


@dataclass(frozen=True)
class FieldData:
    d_k: int

    def __post_init__(self):
        if not is_fundamental_discriminant(self.d_k) or self.d_k >= 0:
            raise ValueError(f"{self.d_k} is not a negative fundamental discriminant")

    @property
    def units(self) -> int:
        return {-3: 6, -4: 4}.get(self.d_k, 2)

    @property
    def class_number_one(self) -> bool:
        return self.d_k in UNITS


@dataclass(frozen=True)
class ManifoldData:
    n: int
    volume: float
    submanifolds: tuple[tuple[int, float], ...] = field(default_factory=tuple)
    cusps: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 2 or self.volume <= 0:
            raise ValueError("need n >= 2 and a positive volume")
        for k, vol in self.submanifolds:
            if not 1 <= k <= self.n - 1 or vol <= 0:
                raise ValueError(f"bad submanifold record {(k, vol)}")
        if any(v <= 0 for v in self.cusps):
            raise ValueError("cusp volumes must be positive")


def is_fundamental_discriminant(d: int) -> bool:
    if d % 4 == 1:
        return _squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(abs(m))
    return False


def _squarefree(m: int) -> bool:
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        p += 1
    return m != 0


def kronecker(d: int, m: int) -> int:
    """Kronecker symbol (d/m) for integer d and m >= 1."""
    if m <= 0:
        raise ValueError("m must be positive")
    result = 1
    while m % 2 == 0:
        m //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
    # Jacobi symbol (d/m) for odd m
    a = d % m
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


# --- measures ---------------------------------------------------------------


def sphere_vol(m: int) -> float:
    """Volume of the unit sphere S^m."""
    if m < 0:
        raise ValueError("sphere dimension must be >= 0")
    return 2 * math.pi ** ((m + 1) / 2) / math.gamma((m + 1) / 2)


def bm_mass(n: int, vol_m: float) -> float:
    """Total Bowen-Margulis mass 2^(n-1) Vol(S^(n-1)) Vol(M)."""
    return 2 ** (n - 1) * sphere_vol(n - 1) * vol_m


def skinning_mass(kind: str, n: int, k: int = 0, vol: float = 1.0) -> float:
    if kind == "point":
        return sphere_vol(n - 1)
    if kind == "cusp":
        return 2 ** (n - 1) * (n - 1) * vol
    if kind == "geodesic":
        if not 1 <= k <= n - 1:
            raise ValueError("totally geodesic dimension k must lie in [1, n-1]")
        return sphere_vol(n - k - 1) * vol
    raise ValueError(f"unknown skinning kind {kind!r}")


def master_constant(sigma_minus: float, sigma_plus: float, delta: float, bm: float) -> float:
    if min(sigma_minus, sigma_plus, delta, bm) <= 0:
        raise ValueError("all inputs must be positive")
    return sigma_minus * sigma_plus / (delta * bm)


def master_for(n: int, vol_m: float, minus: tuple, plus: tuple) -> float:
    """master_constant with skinning masses built from (kind, k, vol) records."""
    sm = skinning_mass(minus[0], n, *minus[1:])
    sp = skinning_mass(plus[0], n, *plus[1:])
    return master_constant(sm, sp, n - 1, bm_mass(n, vol_m))


# --- zeta values ------------------------------------------------------------


ZETA2 = math.pi**2 / 6


def zeta3() -> float:
    return float(zeta(3.0))


@lru_cache(maxsize=None)
def dirichlet_l2(d: int) -> float:
    """L(2, chi_d) through Hurwitz zeta values over one period."""
    m = abs(d)
    total = 0.0
    for a in range(1, m + 1):
        chi = kronecker(d, a)
        if chi:
            total += chi * float(zeta(2.0, a / m))
    return total / m**2


def dirichlet_l2_series(d: int, terms: int = 10**6) -> float:
    """Partial sum of chi(n)/n^2 with a period-averaged integral tail.

    Independent of the Hurwitz route; used as a cross-check.
    """
    m = abs(d)
    chi_period = np.array([kronecker(d, a) for a in range(1, m + 1)], dtype=float)
    terms -= terms % m
    k = np.arange(1, terms + 1, dtype=float)
    chi = np.tile(chi_period, terms // m)
    head = float(np.sum(chi / k**2))
    # tail over whole periods: sum_a chi(a) sum_j 1/(N+a+jm)^2 ~ sum_a chi(a)/(m (N+a-m/2))
    tail = sum(c / (m * (terms + a - m / 2)) for a, c in enumerate(chi_period, start=1))
    return head + tail


def zeta_series(s: float = 3.0, terms: int = 10**6) -> float:
    """Partial sum with Euler-Maclaurin tail, a cross-check for scipy's zeta."""
    k = np.arange(1, terms + 1, dtype=float)
    n = float(terms)
    tail = n ** (1 - s) / (s - 1) - 0.5 * n ** (-s) + s / 12 * n ** (-s - 1)
    return float(np.sum(k**-s)) + tail


def dedekind_zeta2(d_k: int) -> float:
    """zeta_K(2) = zeta(2) L(2, chi_{D_K}) for the imaginary quadratic field of discriminant d_k."""
    return ZETA2 * dirichlet_l2(d_k)


def zeta_values(which: str, d_k: int | None = None) -> float:
    if which == "zeta2":
        return ZETA2
    if which == "zeta3":
        return zeta3()
    if which == "dedekind2":
        if d_k is None:
            raise ValueError("dedekind2 needs d_k")
        return dedekind_zeta2(d_k)
    raise ValueError(f"unknown zeta value {which!r}")


def humbert_volume(d_k: int) -> float:
    """Volume of PSL_2(O_K)\\H^3."""
    return abs(d_k) ** 1.5 * dedekind_zeta2(d_k) / (4 * math.pi**2)


# --- Hermitian and Hamiltonian data -------------------------------------------


def iota(a: int, b: complex | tuple[int, int], c: int) -> int:
    """The index ι(f) ∈ {1, 2, 3, 6} of an integral binary Hermitian form over Z[i]."""
    br, bi = (int(b.real), int(b.imag)) if isinstance(b, complex) else b
    disc = br * br + bi * bi - a * c
    if disc % 4 == 0:
        return 2
    if a % 2 == 0 and c % 2 == 0:
        if disc % 4 == 1:
            return 3
        if disc % 4 == 2:
            return disc % 8
    return 1


def _prime_divisors(m: int) -> list[int]:
    m = abs(m)
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def _cosentino(p):
    d = p["D_K"]
    return math.pi / (math.sqrt(abs(d)) * dedekind_zeta2(d))


def _cosentino_refined(p):
    d = p["D_K"]
    w = FieldData(d).units
    return math.pi * w**2 / (4 * math.sqrt(abs(d)) * dedekind_zeta2(d))


def _closed_geodesic_pair(p):
    n = p["n"]
    return (sphere_vol(n - 2) ** 2 * p["l_minus"] * p["l_plus"]
            / (2 ** (n - 1) * (n - 1) * sphere_vol(n - 1) * p["vol_M"]))


def _hermitian_qi(p):
    disc = p["Delta"]
    prod = 1.0
    for q in _prime_divisors(disc):
        if q != 2:
            prod *= 1 + kronecker(-4, q) / q
    return math.pi**2 / (8 * p["iota"] * dedekind_zeta2(-4)) * prod


def _hamiltonian_covolume(p):
    prod = 1
    for q in _prime_divisors(p["D_A"]):
        prod *= (q**3 - 1) * (q - 1)
    return zeta3() * prod / 11520


def _hamiltonian_theorem(p):
    prod = 1.0
    for q in _prime_divisors(p["D_A"]):
        prod *= (q**3 - 1) * (1 - 1 / q)
    return (540 * p["h_A"] * p["covol"]
            / (math.pi**2 * zeta3() * p["Delta"] ** 2 * prod))


_TABLE = {
    "huber": (("g",), lambda p: 1 / (4 * (p["g"] - 1))),
    "margulis": (("n", "vol_M"), lambda p: sphere_vol(p["n"] - 1)
                 / (2 ** (p["n"] - 1) * (p["n"] - 1) * p["vol_M"])),
    "herrmann": (("n", "k", "vol_C", "vol_M"), lambda p: sphere_vol(p["n"] - p["k"] - 1)
                 * p["vol_C"] / (2 ** (p["n"] - 1) * (p["n"] - 1) * p["vol_M"])),
    "horoball_geodesic": (("n", "k", "vol_H", "vol_C", "vol_M"), lambda p: sphere_vol(p["n"] - p["k"] - 1)
               * p["vol_H"] * p["vol_C"] / (sphere_vol(p["n"] - 1) * p["vol_M"])),
    "bigeodesic": (("n", "k_minus", "k_plus", "vol_minus", "vol_plus", "vol_M"),
                   lambda p: sphere_vol(p["n"] - p["k_minus"] - 1)
                   * sphere_vol(p["n"] - p["k_plus"] - 1) * p["vol_minus"] * p["vol_plus"]
                   / (2 ** (p["n"] - 1) * (p["n"] - 1) * sphere_vol(p["n"] - 1) * p["vol_M"])),
    "bicusp": (("n", "vol_minus", "vol_plus", "vol_M"),
               lambda p: 2 ** (p["n"] - 1) * (p["n"] - 1) * p["vol_minus"] * p["vol_plus"]
               / (sphere_vol(p["n"] - 1) * p["vol_M"])),
    "closed_geodesic_pair": (("n", "l_minus", "l_plus", "vol_M"), _closed_geodesic_pair),
    "quadratic_form": (("R", "Delta"), lambda p: 12 * p["R"] / (math.pi**2 * math.sqrt(p["Delta"]))),
    "mertens": ((), lambda p: 3 / math.pi**2),
    "cosentino": (("D_K",), _cosentino),
    "cosentino_refined": (("D_K",), _cosentino_refined),
    "hermitian_theorem": (("D_K", "covol", "Delta"), lambda p: math.pi * p["covol"]
                          / (2 * abs(p["D_K"]) * dedekind_zeta2(p["D_K"]) * p["Delta"])),
    "hermitian_qi": (("iota", "Delta"), _hermitian_qi),
    "hamiltonian_covolume": (("D_A",), _hamiltonian_covolume),
    "hamiltonian_theorem": (("h_A", "covol", "Delta", "D_A"), _hamiltonian_theorem),
}

SPECIAL_CONSTANTS = tuple(_TABLE)


def special_constant(name: str, params: dict | None = None) -> float:
    """Evaluate a named closed-form constant; see SPECIAL_CONSTANTS."""
    if name not in _TABLE:
        raise ValueError(f"unknown constant {name!r}; known: {', '.join(_TABLE)}")
    required, fn = _TABLE[name]
    params = dict(params or {})
    missing = [r for r in required if r not in params]
    if missing:
        raise ValueError(f"{name} needs parameters {missing}")
    value = fn(params)
    if not value > 0:
        raise ValueError(f"{name} is not positive for {params}")
    return value


def specialization(name: str, params: dict) -> float | None:
    """The same constant rebuilt from master_constant, when it is a specialization."""
    p = params
    if name == "huber":
        return master_for(2, 4 * math.pi * (p["g"] - 1), ("point",), ("point",))
    if name == "margulis":
        return master_for(p["n"], p["vol_M"], ("point",), ("point",))
    if name == "herrmann":
        return master_for(p["n"], p["vol_M"], ("point",), ("geodesic", p["k"], p["vol_C"]))
    if name == "horoball_geodesic":
        return master_for(p["n"], p["vol_M"], ("cusp", 0, p["vol_H"]),
                          ("geodesic", p["k"], p["vol_C"]))
    if name == "bigeodesic":
        return master_for(p["n"], p["vol_M"], ("geodesic", p["k_minus"], p["vol_minus"]),
                          ("geodesic", p["k_plus"], p["vol_plus"]))
    if name == "bicusp":
        return master_for(p["n"], p["vol_M"], ("cusp", 0, p["vol_minus"]),
                          ("cusp", 0, p["vol_plus"]))
    if name == "closed_geodesic_pair":
        return master_for(p["n"], p["vol_M"], ("geodesic", 1, p["l_minus"]),
                          ("geodesic", 1, p["l_plus"]))
    return None


def closed_geodesic_gamma_form(n: int, l_minus: float, l_plus: float, vol_m: float) -> float:
    """Gamma-function form of the closed-geodesic pair constant."""
    return (math.pi ** (n / 2 - 1) * gamma(n / 2) * l_minus * l_plus
            / (2 ** (n - 2) * (n - 1) * gamma((n - 1) / 2) ** 2 * vol_m))
