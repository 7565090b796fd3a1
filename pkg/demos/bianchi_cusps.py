"""Cusp horoballs for Bianchi groups of class number one."""
import numpy as np

from ortho import cusps, report

for d in cusps.SUPPORTED_DK:
    grid = list(np.linspace(6, 11, 6))
    counts = cusps.bianchi_cusp_counts(d, grid)
    fitted, drift = report.fit_constant(list(zip(grid, counts)), 2)
    consts = cusps.bianchi_prediction_constants(d)
    ratios = ", ".join(f"{k}={fitted / v:.4f}" for k, v in consts.items())
    print(f"D_K={d:>3}  N(e^11)={counts[-1]:>10d}  fitted={fitted:.5f}  fitted/constant: {ratios}")

# %% Small-s check against the direct horoball images
print("oracle at s=3:", cusps.bianchi_cusp_count(-4, 3.0), cusps.bianchi_cusp_count_geometric(-4, 3.0))
