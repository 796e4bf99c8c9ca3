"""Growth of character integrals over balls in a solvable extension.

The three regimes of the growth exponent are visible in the normalised
ratios, which stay bounded over the radii swept.
"""

from stripcalc.solvable import SolvableGroup, ball_integral_sweep

for Q, alpha in ((2, 1.0), (2, -1.0), (2, -2.0), (3, -4.0)):
    rows = ball_integral_sweep(SolvableGroup(Q, alpha), (4, 8, 12, 16))
    ratios = " ".join(f"{row.ratio:.4f}" for row in rows)
    print(f"Q={Q} alpha={alpha:+g} {rows[0].regime:10s} ratios {ratios}")
