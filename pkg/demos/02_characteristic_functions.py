"""The smoothed characteristic functions that turn a level set into material.

chi_x is a C1 quintic step across the band |phi| < matw; chi_p lifts it to
the ersatz floor matd; chi_v uses a unit band and measures volume.

    python3 demos/02_characteristic_functions.py
"""
import numpy as np

from lsto.levelset import chi_p, chi_v, chi_x

phi = np.linspace(-1.0, 1.0, 11)
print(" phi     chi_x     chi_p     chi_v")
for s, a, b, c in zip(phi, chi_x(phi), chi_p(phi), chi_v(phi)):
    print(f"{s:5.1f}  {a:8.5f}  {b:8.5f}  {c:8.5f}")

h = 1e-5
for edge in (-0.8, 0.8):
    slope = (chi_x(edge + h) - chi_x(edge - h)) / (2 * h)
    print(f"slope of chi_x at the band edge {edge:+.1f}: {slope:.2e}")
print(f"void stiffness floor: chi_p(-1) = {chi_p(-1.0):.0e}")
