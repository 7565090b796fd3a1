"""Hamilton quaternions, the Hurwitz order, the Dieudonné determinant and
the Poincaré extension of quaternionic homographies to H^5."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from . import constants


@dataclass(frozen=True)
class Quaternion:
    """x0 + x1 i + x2 j + x3 k with real (float) or rational (Fraction) coordinates."""

    x0: Real = 0
    x1: Real = 0
    x2: Real = 0
    x3: Real = 0

    @classmethod
    def coerce(cls, z) -> "Quaternion":
        if isinstance(z, Quaternion):
            return z
        if isinstance(z, complex):
            return cls(z.real, z.imag, 0.0, 0.0)
        return cls(z, 0, 0, 0)

    def coords(self) -> tuple:
        return (self.x0, self.x1, self.x2, self.x3)

    def __add__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(*(p + q for p, q in zip(self.coords(), o.coords())))

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.x0, -self.x1, -self.x2, -self.x3)

    def __sub__(self, other):
        return self + (-Quaternion.coerce(other))

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (Quaternion, complex)):
            return Quaternion(*(p * other for p in self.coords()))
        a0, a1, a2, a3 = self.coords()
        b0, b1, b2, b3 = Quaternion.coerce(other).coords()
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def __rmul__(self, other):
        # scalars commute; complex numbers do not, so promote them
        return Quaternion.coerce(other) * self

    def __truediv__(self, other):
        if isinstance(other, (Quaternion, complex)):
            return self * Quaternion.coerce(other).inverse()
        return Quaternion(*(p / other for p in self.coords()))

    def conj(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def tr(self):
        """Reduced trace x + conj(x)."""
        return 2 * self.x0

    def n(self):
        """Reduced norm x conj(x)."""
        return sum(p * p for p in self.coords())

    def inverse(self) -> "Quaternion":
        nn = self.n()
        if nn == 0:
            raise ZeroDivisionError("quaternion 0 has no inverse")
        return self.conj() / nn

    def is_zero(self) -> bool:
        return all(p == 0 for p in self.coords())

    def __abs__(self) -> float:
        return math.sqrt(float(self.n()))


ONE = Quaternion(1, 0, 0, 0)
I = Quaternion(0, 1, 0, 0)
J = Quaternion(0, 0, 1, 0)
K = Quaternion(0, 0, 0, 1)


def n(x) -> Real:
    return Quaternion.coerce(x).n()


def tr(x) -> Real:
    return Quaternion.coerce(x).tr()


# --- Hurwitz order ---------------------------------------------------------


@dataclass(frozen=True)
class HurwitzInt:
    """Element of Z + Zi + Zj + Z(1+i+j+k)/2, stored as doubled coordinates.

    All four doubled coordinates share a parity: all even for Lipschitz
    integers, all odd for the half-integral coset.
    """

    d0: int
    d1: int
    d2: int
    d3: int

    def __post_init__(self):
        parities = {self.d0 & 1, self.d1 & 1, self.d2 & 1, self.d3 & 1}
        if len(parities) != 1:
            raise ValueError("coordinates are not all integral or all half-integral")

    @classmethod
    def from_quaternion(cls, q: Quaternion) -> "HurwitzInt":
        doubled = [Fraction(c) * 2 for c in q.coords()]
        if any(d.denominator != 1 for d in doubled):
            raise ValueError(f"{q} is not in the Hurwitz order")
        return cls(*(int(d) for d in doubled))

    def to_quaternion(self) -> Quaternion:
        return Quaternion(*(Fraction(d, 2) for d in (self.d0, self.d1, self.d2, self.d3)))

    def __mul__(self, other: "HurwitzInt") -> "HurwitzInt":
        return HurwitzInt.from_quaternion(self.to_quaternion() * other.to_quaternion())

    def __add__(self, other: "HurwitzInt") -> "HurwitzInt":
        return HurwitzInt(self.d0 + other.d0, self.d1 + other.d1,
                          self.d2 + other.d2, self.d3 + other.d3)

    def conj(self) -> "HurwitzInt":
        return HurwitzInt(self.d0, -self.d1, -self.d2, -self.d3)

    def n(self) -> int:
        total = self.d0**2 + self.d1**2 + self.d2**2 + self.d3**2
        assert total % 4 == 0
        return total // 4


def is_hurwitz(q: Quaternion) -> bool:
    try:
        HurwitzInt.from_quaternion(q)
    except ValueError:
        return False
    return True


def hurwitz_units() -> list[HurwitzInt]:
    """The 24 units: ±1, ±i, ±j, ±k and (±1±i±j±k)/2."""
    units = []
    for axis in range(4):
        for sign in (2, -2):
            d = [0, 0, 0, 0]
            d[axis] = sign
            units.append(HurwitzInt(*d))
    for signs in itertools.product((1, -1), repeat=4):
        units.append(HurwitzInt(*signs))
    return units


# --- matrices over H --------------------------------------------------------


QMatrix = tuple  # (a, b, c, d) of Quaternion-coercible entries


def qmatmul(m1: QMatrix, m2: QMatrix) -> QMatrix:
    a, b, c, d = (Quaternion.coerce(x) for x in m1)
    e, f, g, h = (Quaternion.coerce(x) for x in m2)
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def dieudonne_det_squared(m: QMatrix):
    a, b, c, d = (Quaternion.coerce(x) for x in m)
    return (a * d).n() + (b * c).n() - (a * c.conj() * d * b.conj()).tr()


def dieudonne_det_cases(m: QMatrix) -> dict[str, float]:
    """The closed forms of Det^2 that apply to m, keyed by the nonzero entry used."""
    a, b, c, d = (Quaternion.coerce(x) for x in m)
    out = {}
    if not a.is_zero():
        out["a"] = (a * d - a * c * a.inverse() * b).n()
    if not c.is_zero():
        out["c"] = (c * b - c * a * c.inverse() * d).n()
    if not b.is_zero():
        out["b"] = (c * b - d * b.inverse() * a * b).n()
    return out


def dieudonne_det(m: QMatrix) -> float:
    """Dieudonné determinant of a 2x2 quaternion matrix (a, b, c, d).

    The zero matrix gets determinant 0.
    """
    sq = dieudonne_det_squared(m)
    return math.sqrt(max(float(sq), 0.0))


def moebius_h5(g: QMatrix, z, r: float) -> tuple[Quaternion, float]:
    """Poincaré extension of the homography g to the point (z, r) of H^5."""
    a, b, c, d = (Quaternion.coerce(x) for x in g)
    z = Quaternion.coerce(z)
    czd = c * z + d
    den = czd.n() + r * r * c.n()
    num = (a * z + b) * czd.conj() + a * c.conj() * (r * r)
    return num / den, r / den


def moebius_boundary(g: QMatrix, z) -> Quaternion | None:
    """Homography on H ∪ {∞}; ∞ is represented by None."""
    a, b, c, d = (Quaternion.coerce(x) for x in g)
    if z is None:
        return None if c.is_zero() else a * c.inverse()
    z = Quaternion.coerce(z)
    den = c * z + d
    if den.is_zero():
        return None
    return (a * z + b) * den.inverse()


# --- Hamiltonian forms ------------------------------------------------------


@dataclass(frozen=True)
class HamForm:
    """f(u, v) = a n(u) + tr(conj(u) b v) + c n(v) with a, c real and b quaternionic."""

    a: Real
    b: Quaternion
    c: Real

    def disc(self):
        return Quaternion.coerce(self.b).n() - self.a * self.c

    def __call__(self, u, v):
        u, v = Quaternion.coerce(u), Quaternion.coerce(v)
        b = Quaternion.coerce(self.b)
        return self.a * u.n() + (u.conj() * b * v).tr() + self.c * v.n()

    def act(self, g: QMatrix) -> "HamForm":
        """Precomposition by g, via the matrix law M(f∘g) = g* M(f) g."""
        a, b, c, d = (Quaternion.coerce(x) for x in g)
        fb = Quaternion.coerce(self.b)
        # M(f) = (a_f, b_f; conj(b_f), c_f) so f(u,v) = (u,v)* M (u,v)
        def form(x, y):
            return self.a * x.n() + (x.conj() * fb * y).tr() + self.c * y.n()
        new_a = form(a, c)
        new_c = form(b, d)
        new_b = (a.conj() * (self.a * b + fb * d)) + (c.conj() * (fb.conj() * b + self.c * d))
        return HamForm(new_a, new_b, new_c)


def ham_invariants(f: HamForm) -> dict:
    """Discriminant, indefiniteness and the boundary 3-sphere of f."""
    disc = f.disc()
    out = {"disc": disc, "indefinite": disc > 0, "center": None, "radius": None}
    if f.a != 0 and disc > 0:
        out["center"] = -Quaternion.coerce(f.b) / f.a
        out["radius"] = math.sqrt(float(disc)) / abs(float(f.a))
    return out


def hamiltonian_covolume(d_a: int) -> float:
    return constants.special_constant("hamiltonian_covolume", {"D_A": d_a})


def hamiltonian_theorem_constant(h_a: int, covol: float, disc: float, d_a: int) -> float:
    return constants.special_constant(
        "hamiltonian_theorem", {"h_A": h_a, "covol": covol, "Delta": disc, "D_A": d_a}
    )


def selftest(seed: int = 0, samples: int = 200) -> dict[str, bool]:
    """Quick structural checks used by the command line."""
    import random

    rng = random.Random(seed)
    units = hurwitz_units()
    results = {
        "ij=k": I * J == K and J * I == -K,
        "24 units": len(set(units)) == 24 and all(u.n() == 1 for u in units),
        "unit closure": all(u * v in set(units) for u in units for v in units),
    }

    def rand_h():
        par = rng.randrange(2)
        return HurwitzInt(*(2 * rng.randint(-3, 3) + par for _ in range(4)))

    ok_mult = True
    ok_det = True
    for _ in range(samples):
        x, y = rand_h(), rand_h()
        ok_mult &= (x * y).n() == x.n() * y.n()
        m1 = tuple(rand_h().to_quaternion() for _ in range(4))
        m2 = tuple(rand_h().to_quaternion() for _ in range(4))
        lhs = float(dieudonne_det_squared(qmatmul(m1, m2)))
        rhs = float(dieudonne_det_squared(m1) * dieudonne_det_squared(m2))
        ok_det &= abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))
    results["norm multiplicative"] = ok_mult
    results["Det multiplicative"] = ok_det
    return results
