"""Locate the coupling strength where the real spectrum is lost.

The decoupled frequencies stay real while (c1^2 - c2^2)^2 > c3^2.  Past
that line they form a complex-conjugate pair and so do the eigenvalues
of the truncated matrix.  Sweeping the coupling across the line shows
the transition directly: max |Im| over the low-lying levels jumps from
roundoff to order one within a grid step of the analytic boundary.

Writes phase_boundary.png next to this script when matplotlib is
available; the printed table carries the same content.
"""

import pathlib

import numpy as np

from etapt import phase_sweep

c1_sq, c2_sq = 2.0, 1.0
grid = np.arange(0.0, 1.5 + 0.025, 0.05)
report = phase_sweep(c1_sq, c2_sq, grid, dims=(16, 16), k=6, jobs=2)

print(f"stiffnesses ({c1_sq}, {c2_sq}): analytic boundary at c3 = {report.analytic_boundary}")
print()
print("   c3     max |Im|    analytic    numeric")
for p in report.points:
    mark = " <-- first loss of reality" if p.c3 == report.detected_boundary else ""
    a = "unbroken" if p.unbroken_analytic else "broken"
    n = "unbroken" if p.unbroken_numeric else "broken"
    print(f"  {p.c3:5.2f}  {p.max_imag:10.3e}  {a:8s}  {n:8s}{mark}")

print()
print(f"detected boundary: c3 = {report.detected_boundary}")
print(f"within one grid step of the analytic value: {report.within_one_step}")
if report.warning:
    print(f"warning: {report.warning}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed, skipping the figure")
else:
    fig, ax = plt.subplots(figsize=(6, 4))
    c3s = [p.c3 for p in report.points]
    ims = [max(p.max_imag, 1e-18) for p in report.points]
    ax.semilogy(c3s, ims, "o-", ms=4)
    ax.axvline(report.analytic_boundary, color="k", ls="--", lw=1,
               label="analytic boundary")
    ax.set_xlabel("coupling c3")
    ax.set_ylabel("max |Im| over the 6 lowest levels")
    ax.set_title("loss of spectral reality")
    ax.legend()
    fig.tight_layout()
    out = pathlib.Path(__file__).with_name("phase_boundary.png")
    fig.savefig(out, dpi=120)
    print(f"figure written to {out}")
