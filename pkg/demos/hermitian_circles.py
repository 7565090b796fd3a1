"""Orbit of the form |u|^2 - |v|^2 under PSL_2(Z[i]) and its boundary circles."""
from ortho import hermitian
from ortho.hermitian import HermForm

f = HermForm(1, (0, 0), -1)
c = hermitian.psi_prediction(f)
rep = hermitian.herm_count_report(f, [50, 100, 200, 400], progress=None)
for (s, n, pred, ratio), circles in zip(rep.rows, rep.params["circles"]):
    print(f"s={s:5.0f}  psi={n:>8d}  ratio={ratio:.4f}  circles mod translation={circles}")
print(f"constant {rep.fit['constant']:.5f} vs {c:.5f}, exponent {rep.fit['exponent']:.4f}")

big = sorted(hermitian.orbit_circles(f, 0.3), key=lambda k: -k[1])[:8]
for (x, y), r2 in big:
    print(f"center {x} + {y}i, radius^2 {r2}")
