"""
Recovering over a weakly entangled GHZ channel
==============================================

Over ``a|000> + b|111>`` the corrected qubit carries skewed amplitudes.
Charlie can undo the skew with a two-outcome filter that sometimes fails.
"""
import math

from qisplit import equatorial, nonmax_ghz_recovery

secret = equatorial(1.0)

# %%
# Success probability across channel weights. The filter reaches
# 2 min(a^2, b^2), which is never below the commonly quoted 2 a^2 b^2.
print(" a^2   success  2min(a2,b2)  2a2b2   fidelity")
for k in range(1, 10):
    a2 = k / 10
    run = nonmax_ghz_recovery(secret, math.sqrt(a2), math.sqrt(1 - a2))
    print(
        f"{a2:4.1f}  {run.overall_success_probability:7.4f}  "
        f"{run.predicted_success_probability:11.4f}  {run.reference_success_probability:6.4f}  "
        f"{run.success_fidelity:.10f}"
    )
