"""
What a lone receiver learns, and what happens without the sender's bit
======================================================================
"""
import math

from qisplit import equatorial, equatorial_grid, leakage_report, real, run_controlled

# %%
# Phase-only secrets: after Alice's announcement, Bob's and Charlie's qubits
# are each maximally mixed, whatever the phase.
rep = leakage_report("zc1", equatorial_grid(16))
print("equatorial: max distance from I/2 =", rep.max_distance_from_mixed_b, rep.max_distance_from_mixed_c)

# %%
# Real secrets are another story: Charlie's qubit alone already tells
# theta = pi/3 from theta = 2 pi/3.
rep = leakage_report("zc1", [real(math.pi / 3), real(2 * math.pi / 3)])
print("real: max pairwise distance on c =", rep.max_pairwise_trace_distance_c)
w = rep.witness_c
print(f"witness: branch {w.branch}, {w.first} vs {w.second}")

# %%
# If Alice keeps her bit, the best the receivers can do on their own
# averages to fidelity one half.
run = run_controlled("zc1", equatorial(math.pi / 4))
print("withheld: average fidelity", run.average_fidelity, "broadcast bits", run.ledger.alice.cbits_broadcast)
