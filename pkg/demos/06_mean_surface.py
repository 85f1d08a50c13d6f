"""The largest CHSH value compatible with given single-observable means.

f(a0, a1, b0, b1) = local part + sqrt(2) * sqrt(2 - a0^2 - a1^2)
                                         * sqrt(2 - b0^2 - b1^2)

Unbiased marginals (all means zero) are where the fluctuation budget is
largest: f has a stationary maximum 2*sqrt(2) there, falling off
quadratically along every mean axis.
"""

import numpy as np

from bellvar import statistical_chsh_surface, stationarity_check

rep = stationarity_check(step=1e-4)
print(f"value at the origin   {rep.value_at_origin:.12f}")
print(f"gradient              {rep.gradient}")
print(f"second partials       {tuple(round(s, 6) for s in rep.second_partials)}")
print(f"hessian eigenvalues   {tuple(round(w, 6) for w in rep.hessian_eigenvalues)}")

print()
print("cross-sections f(a0, 0, 0, 0) and f(t, t, t, t):")
print("   t      axis        diagonal")
for t in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0):
    axis = statistical_chsh_surface([t, 0.0], [0.0, 0.0])
    diag = statistical_chsh_surface([t, t], [t, t])
    print(f" {t:4.1f}   {axis:.6f}   {diag:.6f}")

print()
print("at sharp means the budget is gone and only the local part remains:")
print(f"  f(1, 1, 1, 1)  = {statistical_chsh_surface([1, 1], [1, 1]):.6f}")
print(f"  f(1,-1, 1, 1)  = {statistical_chsh_surface([1, -1], [1, 1]):.6f}")
