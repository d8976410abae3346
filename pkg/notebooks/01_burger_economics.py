"""A correlation of 0.99 that tells you almost nothing.
====================================================

Burger prices and hourly wages across 22 countries correlate at 0.99,
yet the quantity anyone cares about -- how many burgers an hour of work
buys -- varies by a factor of 15.  The shared scale (currency
denomination) manufactures the headline correlation and says nothing
about the ratio.
"""

import numpy as np

from eigenrank import (bigmac_fixture, coefficient_of_variation, pearson,
                       spearman, tercile_median_ratio)

fixture = bigmac_fixture()
print(f"{len(fixture)} countries, x = {fixture.x_name}, y = {fixture.y_name}")

# the impressive-looking summary statistic
print(f"pearson rho  = {pearson(fixture).rho:.4f}")
print(f"spearman rho = {spearman(fixture).rho:.4f}")

# ... and the dispersion it hides
real_wage = fixture.y / fixture.x  # burgers per hour of work
order = np.argsort(real_wage)[::-1]
print("\nburgers per hour, best and worst:")
for i in (*order[:3], *order[-3:]):
    print(f"  {fixture.labels[i]:<14} {real_wage[i]:6.2f}")

print(f"\nreal-wage mean = {real_wage.mean():.2f}")
print(f"real-wage sd   = {real_wage.std(ddof=1):.2f}")
print(f"real-wage cv   = {coefficient_of_variation(real_wage):.2f}")

# a rote statistic nearly everyone understands: the top third of countries
# buys about five times as many burgers per hour as the bottom third
print(f"tercile median ratio = {tercile_median_ratio(real_wage):.2f}")
