"""Counting on the modular surface.

Two experiments: orbit points of PSL_2(Z) in balls around i, and horoballs of
the orbit of {Im z >= 1} seen from that horoball (Farey circles).
"""
import math

import numpy as np

from ortho import constants, cusps, orbits

# %% Ball counts. cosh d(i, g i) is half the squared Frobenius norm of g,
# so this is a lattice count of integer matrices.
rep = orbits.orbit_ball_report("Z", np.linspace(4, 12, 9))
print("PSL_2(Z) ball counts, prediction 3 e^s")
for s, n, pred, ratio in rep.rows:
    print(f"  s={s:5.2f}  N={n:>9d}  ratio={ratio:.4f}")
print("fitted constant:", round(rep.fit["constant"], 4))

# %% Horoball counts: a horoball of diameter 1/q^2 sits at distance 2 ln q,
# and there are phi(q) of them modulo translation.
c = constants.special_constant("mertens")
for s in (10.0, 20.0, 27.6):
    n = cusps.mertens_count(s)
    print(f"s={s:5.1f}  N={n:>12d}  N / (3/pi^2 e^s) = {n / (c * math.exp(s)):.6f}")
