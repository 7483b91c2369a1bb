"""Cross-check a Tau solution against the fractional power series near t = 0.

The series is computed by an independent recursion and trusted only on half
its estimated convergence radius.
"""
import numpy as np

from abeltau import example, series_coeffs, solve

p = example(3)
ser = series_coeffs(p, 60)
print("radius estimates", np.array2string(ser.radius, precision=3), "window", f"{ser.window:.2e}")
t = np.linspace(0, ser.window, 201)
for N in (8, 12, 16):
    sol = solve(p, N)
    gap = np.max(np.abs(sol(t) - ser(t)))
    print(f"N={N:2d}  max |Y_N - series| on window = {gap:.2e}")
