"""The CHSH value against its variance budget.

The CHSH combination of raw correlators can exceed the local bound 2,
but never by more than what the measurement fluctuations pay for:

    bell - local <= sqrt(2) * rms_a * rms_b

with rms_x the root-sum-square of that party's two spreads.  At maximal
violation the budget is spent exactly (slack zero) and five independent
structural conditions all hold.
"""

import numpy as np

from bellvar import chsh_family, chsh_report, preset, random_scan, saturation_check

p = preset("chsh-optimal")
rep = chsh_report(p.scenario, p.state)

print("diagonal settings on the Bell state")
print(f"  bell value        {rep.bell_value:+.12f}   (2*sqrt(2) = {2*np.sqrt(2):.12f})")
print(f"  local part        {rep.local_part:+.2e}")
print(f"  rms_a, rms_b      {rep.rms_a:.12f}  {rep.rms_b:.12f}")
print(f"  statistical bound {rep.bound_statistical:.12f}")
print(f"  slack             {rep.slack:+.2e}        <- saturated")
print(f"  lhv bound         {rep.bound_lhv}")

flags = saturation_check(p.scenario, p.state)
print()
print("saturation conditions at the optimum:")
for name in (
    "perp_alignment",
    "ratio_condition",
    "anticommutator_zero",
    "operator_relation",
    "overlap_orthogonal",
):
    print(f"  {name:20s} {getattr(flags, name)}")

# Away from the optimum the bound keeps a strictly positive slack.  A
# quick random scan; the library's acceptance tests push this to 1e5.
print()
summary = random_scan(chsh_family(), n_samples=2000, seed=0)
print(f"random scan, 2000 instances: min slack {summary.min_slack:.4f}, "
      f"mean {summary.mean_slack:.4f}, violations {summary.violations}")
