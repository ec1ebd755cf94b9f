"""How small can a twisted commutator of two g-dimensional unitaries get?

Walks the closed-form answer, the clock/shift pair that attains it, and a
gradient-descent search over unitary pairs that never falls below the formula.
"""

import numpy as np

from twistcert import (
    NormSpec,
    brute_min,
    lambda_min,
    lambda_upper_bound,
    optimal_pair,
    schatten_kyfan_norm,
)

op = NormSpec.operator()

# -- the floor as a function of the twisting parameter ----------------------
# zeros sit exactly at the twists g * alpha in Z, where exact twisted
# commutation is possible; between them the floor rises like a rectified sine
print("operator-norm minimum value, g = 5:")
print(f"{'alpha':>8} {'floor':>10} {'attained':>10}")
for alpha in np.linspace(0.0, 0.5, 11):
    floor = lambda_min(5, alpha)
    pair = optimal_pair(5, alpha)
    print(f"{alpha:8.3f} {floor:10.6f} {pair.delta:10.6f}")

# the twist-independent envelope from |x - round(x)| <= 1/2
print(f"\nenvelope 2 sin(pi/2g) at g=5: {lambda_upper_bound(5):.6f}")

# -- the same family saturates every (p, k) norm at once --------------------
# the twisted commutator of the optimal pair is a scalar times a unitary, so
# its singular values are flat and every Schatten-Ky Fan norm is extremal
g, alpha = 4, 0.3
pair = optimal_pair(g, alpha)
t = pair.commutator()
print(f"\n(p, k) saturation at g={g}, alpha={alpha}:")
for p in (2.0, 3.0, np.inf):
    for k in (1, g):
        spec = NormSpec(p, k)
        measured = schatten_kyfan_norm(t, spec)
        print(f"  p={p!s:>4} k={k}: measured {measured:.9f}"
              f"  closed form {lambda_min(g, alpha, spec):.9f}")

# -- a descent oracle that cannot beat the formula --------------------------
# random restarts of projected gradient descent over pairs of unitaries; the
# best value found always sits at or above the closed form
print("\ndescent search vs closed form (g = 3):")
for alpha in (1.0 / 3.0, 0.2, 0.45):
    found = brute_min(3, alpha, op, restarts=20, seed=0)
    print(f"  alpha={alpha:.3f}: best found {found:.8f},"
          f" floor {lambda_min(3, alpha):.8f}")
