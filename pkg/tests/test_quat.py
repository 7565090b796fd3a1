import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ortho import constants, geom, quat
from ortho.quat import I, J, K, ONE, HamForm, HurwitzInt, Quaternion

floats = st.floats(-10, 10, allow_nan=False)
quats = st.builds(Quaternion, floats, floats, floats, floats)


def rand_hurwitz(rnd, span=4):
    par = rnd.randrange(2)
    return HurwitzInt(*(2 * rnd.randint(-span, span) + par for _ in range(4)))


def rand_quat(rnd):
    return Quaternion(*(rnd.uniform(-2, 2) for _ in range(4)))


def test_basic_products():
    assert I * J == K and J * I == -K
    assert I * I == J * J == K * K == -ONE
    assert I * J * K == -ONE
    assert quat.n(Quaternion(1, 1, 1, 1)) == 4
    assert quat.tr(Quaternion(3, 1, 2, 5)) == 6


@settings(max_examples=200, deadline=None)
@given(quats, quats)
def test_norm_multiplicative(x, y):
    assert (x * y).n() == pytest.approx(x.n() * y.n(), rel=1e-9, abs=1e-9)
    lhs, rhs = (x * y).conj(), y.conj() * x.conj()
    assert lhs.coords() == pytest.approx(rhs.coords(), abs=1e-9)
    assert isinstance(x.tr(), float)


def test_hurwitz_units():
    units = quat.hurwitz_units()
    expect = {HurwitzInt(*[2 * s if k == axis else 0 for k in range(4)])
              for axis in range(4) for s in (1, -1)}
    expect |= {HurwitzInt(a, b, c, d) for a in (1, -1) for b in (1, -1) for c in (1, -1) for d in (1, -1)}
    assert set(units) == expect and len(units) == 24
    assert all(u * v in expect for u in units for v in units)


def test_hurwitz_closure_random():
    rnd = random.Random(3)
    for _ in range(1000):
        x, y = rand_hurwitz(rnd), rand_hurwitz(rnd)
        z = x * y
        assert quat.is_hurwitz(z.to_quaternion())
        assert z.n() == x.n() * y.n()
    assert not quat.is_hurwitz(Quaternion(Fraction(1, 2), 0, 0, 0))
    with pytest.raises(ValueError):
        HurwitzInt(1, 0, 0, 0)


def test_dieudonne_examples():
    assert quat.dieudonne_det((1, 0, 0, 1)) == 1
    assert quat.dieudonne_det((1j, 0, 0, -1j)) == pytest.approx(1)
    assert quat.dieudonne_det((0, 0, 0, 0)) == 0
    rnd = random.Random(5)
    for _ in range(100):
        a, b, c, d = (complex(rnd.uniform(-2, 2), rnd.uniform(-2, 2)) for _ in range(4))
        assert quat.dieudonne_det((a, b, c, d)) == pytest.approx(abs(a * d - b * c), abs=1e-9)


def test_dieudonne_multiplicative_exact():
    rnd = random.Random(9)
    for _ in range(1000):
        m1 = tuple(rand_hurwitz(rnd, 2).to_quaternion() for _ in range(4))
        m2 = tuple(rand_hurwitz(rnd, 2).to_quaternion() for _ in range(4))
        assert quat.dieudonne_det_squared(quat.qmatmul(m1, m2)) == \
            quat.dieudonne_det_squared(m1) * quat.dieudonne_det_squared(m2)


def test_dieudonne_cases_agree():
    rnd = random.Random(10)
    for _ in range(1000):
        m = tuple(rand_quat(rnd) for _ in range(4))
        cases = quat.dieudonne_det_cases(m)
        sq = float(quat.dieudonne_det_squared(m))
        assert len(cases) == 3
        for v in cases.values():
            assert float(v) == pytest.approx(sq, rel=1e-9, abs=1e-9)


def _h5(z, r):
    return geom.UhsPoint([float(c) for c in z.coords()], r)


def test_moebius_h5_examples():
    z, r = Quaternion(0.3, -1, 2, 0.5), 0.7
    assert quat.moebius_h5((1, 0, 0, 1), z, r) == (z, r)
    b = Quaternion(1, 2, -1, 0)
    z2, r2 = quat.moebius_h5((1, b, 0, 1), z, r)
    assert z2 == z + b and r2 == r
    z3, r3 = quat.moebius_h5((0, 1, -1, 0), 0, 1.0)
    assert quat.n(z3) == pytest.approx(0) and r3 == pytest.approx(1)


def test_moebius_h5_isometry():
    rnd = random.Random(12)

    def rand_isometry():
        g = (ONE, 0, 0, ONE)
        for _ in range(4):
            kind = rnd.randrange(3)
            if kind == 0:
                h = (ONE, rand_quat(rnd), 0, ONE)
            elif kind == 1:
                h = (0, ONE, -ONE, 0)
            else:
                u, v = rand_quat(rnd), rand_quat(rnd)
                h = (u / abs(u), 0, 0, v / abs(v))
            g = quat.qmatmul(g, h)
        return g

    for _ in range(1000):
        g = rand_isometry()
        p = (rand_quat(rnd), rnd.uniform(0.2, 3))
        q = (rand_quat(rnd), rnd.uniform(0.2, 3))
        before = geom.dist(_h5(*p), _h5(*q))
        after = geom.dist(_h5(*quat.moebius_h5(g, *p)), _h5(*quat.moebius_h5(g, *q)))
        assert after == pytest.approx(before, abs=1e-9, rel=1e-9)


def test_ham_invariants():
    f = HamForm(1, Quaternion(), -1)
    inv = quat.ham_invariants(f)
    assert inv["disc"] == 1 and inv["indefinite"] and inv["radius"] == 1
    assert quat.n(inv["center"]) == 0
    rnd = random.Random(4)
    for _ in range(50):
        x = rand_quat(rnd)
        z = x / abs(x)
        assert f(z, ONE) == pytest.approx(0, abs=1e-12)
    assert not quat.ham_invariants(HamForm(1, Quaternion(), 1))["indefinite"]


def test_ham_disc_invariance_exact():
    rnd = random.Random(6)
    f = HamForm(Fraction(2), Quaternion(Fraction(1), Fraction(1, 2), 0, Fraction(-1)), Fraction(-3))
    for _ in range(200):
        b = rand_hurwitz(rnd).to_quaternion()
        c = rand_hurwitz(rnd).to_quaternion()
        for g in ((ONE, b, 0, ONE), (ONE, 0, c, ONE), (0, ONE, -ONE, 0)):
            h = f.act(g)
            assert h.disc() == f.disc()
            u, v = rand_hurwitz(rnd).to_quaternion(), rand_hurwitz(rnd).to_quaternion()
            a_, b_, c_, d_ = (Quaternion.coerce(t) for t in g)
            assert h(u, v) == f(a_ * u + b_ * v, c_ * u + d_ * v)


def test_hamiltonian_constants():
    z3 = constants.zeta3()
    assert quat.hamiltonian_covolume(2) == pytest.approx(7 * z3 / 11520, rel=1e-12)
    assert quat.hamiltonian_covolume(6) == pytest.approx(z3 * 7 * 1 * 26 * 2 / 11520, rel=1e-12)
    covol = quat.hamiltonian_covolume(2)
    vals = [quat.hamiltonian_theorem_constant(1, covol, d, 2) for d in (1, 2, 3, 5)]
    assert all(v > 0 for v in vals) and vals == sorted(vals, reverse=True)


def test_selftest_passes():
    assert all(quat.selftest(seed=1, samples=50).values())
