"""Constants of the three kernel assumptions on the real line with drift 2.

For each assumption the suite constant is computed on a base lambda grid,
on a refined grid and on a doubled domain. A ratio close to 1 means the
constant is a property of the multipliers, not of the discretisation.
"""

from fractions import Fraction

from stripcalc.euclid import EuclidGroup
from stripcalc.verifier import AssumptionParams
from stripcalc.verifier.assumptions import assumption_stability, band_suite, dyadic_suite

G = EuclidGroup(1, (2.0,))
params = AssumptionParams(beta=2, sigma=1, varpi=0, gamma=Fraction(3, 5), W=1)

for which, suite in (("A", dyadic_suite), ("B", dyadic_suite), ("C", band_suite)):
    st = assumption_stability(which, G, suite, params)
    consts = st.report.extra["suite_constants"]
    print(f"{which}: base {consts['base']:.5f}  refined {consts['refined']:.5f}  "
          f"doubled {consts['doubled']:.5f}  -> {st.report.verdict}")
    if which == "C":
        for case in st.base.per_case:
            print(f"   {case.id:8s} constant {case.constant:.5f}")
