"""The converse trap: perfect dependence, zero correlation.
========================================================

Successive iterates of the chaotic logistic map are locked together by
x_next = 4 x (1 - x), yet their linear correlation vanishes: under the
invariant density the covariance is exactly zero.  Low correlation does
not mean unrelated any more than high correlation means interchangeable.
"""

from eigenrank import UndefinedCorrelationError, logistic_map_correlation

for x0 in (0.2, 0.437, 0.713):
    rho = logistic_map_correlation(4.0, x0, n=1_000_000, burn_in=1000)
    print(f"r=4.0  x0={x0:<6} rho(x_k, x_k+1) = {rho:+.5f}")

# at r = 3.58 the orbit is chaotic but asymmetric: correlation returns
rho = logistic_map_correlation(3.58, 0.2, n=1_000_000, burn_in=1000)
print(f"r=3.58 x0=0.2    rho(x_k, x_k+1) = {rho:+.5f}")

# below the first bifurcation the orbit collapses to a fixed point and a
# correlation no longer exists at all
try:
    logistic_map_correlation(2.5, 0.2, n=10_000)
except UndefinedCorrelationError as exc:
    print(f"r=2.5: {exc}")
