"""Two systems whose exact solutions lie in the fractional polynomial space.

The Tau parameters vanish and Y_N reproduces the solution to rounding.
"""
import numpy as np

from abeltau import example, solve, sup_error

for k, N in ((1, 6), (2, 10)):
    p = example(k)
    sol = solve(p, N)
    print(f"{p.name}: N={N}, sigma={p.sigma}, tau system {sol.system_size}x{sol.system_size}")
    print("  taus      ", {key: f"{v:.1e}" for key, v in sol.taus.items()})
    print("  sup errors", np.array2string(sup_error(sol, p.exact), precision=2))
    for i, comp in enumerate(sol.y_n.entries, start=1):
        # monomial coefficients carry some cancellation noise; values are exact to rounding
        terms = {l: round(float(c), 9) for l, c in comp.to_map().items() if abs(c) > 1e-9}
        print(f"  y{i} = sum c t^(l*sigma), nonzero (l: c) = {terms}")
