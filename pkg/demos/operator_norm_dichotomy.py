"""Bounded versus unbounded multipliers on L^{3/2}(mu_X).

With ``|X| = 2`` the multiplier must be holomorphic on a strip of half width
``|2/p - 1| b_X = 1/3``. A resolvent power is holomorphic on a strip of
half width 1 and its empirical norm settles as the window grows. An
imaginary power with singularities at ``+-i/6`` is not, and its empirical
norm keeps growing. The probes give lower bounds for the true norms.
"""

from stripcalc.euclid import EuclidGroup
from stripcalc.verifier.multipliers import imaginary_power, resolvent_power
from stripcalc.verifier.operator_norm import operator_norm_scaling

G = EuclidGroup(1, (2.0,))
cases = [("resolvent power, b = 1", resolvent_power(1.0, 1.0), (12.0, 24.0, 48.0)),
         ("imaginary power, b = 1/6", imaginary_power(1.0, 1 / 6), (6.0, 12.0, 24.0, 48.0))]
for label, M, domains in cases:
    st = operator_norm_scaling(M, 1.5, G, domains)
    est = "  ".join(f"D={d:g}: {e:.3f}" for d, e in zip(st.domains, st.estimates))
    print(f"{label}: {est}  -> {st.verdict}")
