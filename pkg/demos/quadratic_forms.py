"""Indefinite binary quadratic forms and perpendiculars to the cusp."""
import math

import numpy as np

from ortho import qforms, report
from ortho.qforms import BinaryQF

q = BinaryQF(1, 0, -3)
pell = qforms.pell_fundamental(q.disc)
print(f"Q = x^2 - 3y^2, Pell (t, u) = ({pell.t}, {pell.u}), R_Q = {qforms.regulator(q):.6f}")
print("automorph generator:", qforms.automorph_generator(q))

# %% Primitive representations up to automorphs against 12 R_Q / (pi^2 sqrt D) s
grid = [10**k for k in range(2, 7)]
for s, n in zip(grid, qforms.count_primitive_reps_grid(q, grid)):
    print(f"s=1e{int(math.log10(s))}  Psi={n:>8d}  ratio={n / qforms.psi_prediction(q, s):.5f}")

# %% The length of a common perpendicular is ln(2|Q(D,-C)|/sqrt D)
gamma = ((1, 0), (2, 1))
print("perp length (algebraic):", qforms.perp_length(BinaryQF(1, 0, -2), gamma))
print("perp length (geometric):", qforms.perp_length_geometric(BinaryQF(1, 0, -2), gamma))

# %% Feet of the perpendiculars on the horosphere are evenly spread
feet = qforms.feet_distribution(BinaryQF(1, -1, -1), 10.5)
print(f"{feet.size} feet, KS distance to uniform = {report.ks_uniform(feet):.4f}")
hist, _ = np.histogram(feet, bins=10, range=(0, 1))
print("decile counts:", hist.tolist())
