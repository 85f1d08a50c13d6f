"""Finite-statistics side: Born-rule rounds and the empirical bound test.

Simulates a CHSH experiment round by round (uniform random settings,
outcomes from the Born distribution), builds plug-in estimates with
standard errors, and runs the bound check

    sqrt(2) R_A R_B + local - bell + z * SE >= 0

at z = 5.  The honest experiment passes; a fabricated Bell value with
the same error bars does not.
"""

import dataclasses

import numpy as np

from bellvar import empirical_check, estimate, preset, simulate_rounds

p = preset("chsh-optimal")

for rounds in (1_000, 10_000, 100_000, 1_000_000):
    batch = simulate_rounds(p.family, p.scenario, p.state, rounds=rounds, seed=7)
    est = estimate(batch)
    dev = (est.bell_value_hat - 2 * np.sqrt(2)) / est.se_bell_value
    print(f"{rounds:>9} rounds: bell_hat {est.bell_value_hat:.6f} "
          f"(se {est.se_bell_value:.2e}, {dev:+.2f} sigma)")

print()
batch = simulate_rounds(p.family, p.scenario, p.state, rounds=200_000, seed=7)
est = estimate(batch)
check = empirical_check(est, z=5.0)
print(f"empirical check at z=5: passed={check.passed}  margin {check.margin:+.4f}")
print(f"  bell_hat  {check.bell_value_hat:+.6f}")
print(f"  local_hat {check.local_part_hat:+.6f}")
print(f"  bound_hat {check.bound_hat:+.6f}")
print(f"  se(margin) {check.se_margin:.2e}")

# same error bars, impossible value: the check must fail
fake = dataclasses.replace(est, bell_value_hat=4.0)
bad = empirical_check(fake, z=5.0)
print(f"fabricated bell_hat = 4.0: passed={bad.passed}  margin {bad.margin:+.4f}")

# reproducibility: identical seed, identical bytes
again = simulate_rounds(p.family, p.scenario, p.state, rounds=200_000, seed=7)
print()
print(f"same seed reproduces counts exactly: "
      f"{np.array_equal(batch.counts, again.counts)}")
print("counts table (settings x outcomes):")
print(batch.counts)
