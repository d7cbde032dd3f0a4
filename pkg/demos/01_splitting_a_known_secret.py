"""
Splitting a secret the sender already knows
===========================================

When Alice knows which qubit she is splitting, she can measure her share of
the channel in a basis built from that qubit instead of doing a Bell
measurement. One measured qubit, one broadcast bit.
"""
import math

from qisplit import ProtocolId, equatorial, real, run_protocol

# %%
# A phase-only secret over a GHZ channel: four branches, each equally likely,
# and Charlie ends up with the secret after his correction.
secret = equatorial(math.pi / 3)
run = run_protocol(ProtocolId.ZC1, secret)
for b in run.branches:
    print(f"{'|'.join(b.key):6s} p={b.probability:.3f} ops={'+'.join(b.op_names):12s} F={b.fidelity:.12f}")

# %%
# The same with a real-amplitude secret: the corrections change but not the cost.
run = run_protocol(ProtocolId.ZC1, real(2.0))
print("real secret, worst fidelity:", run.min_fidelity)

# %%
# Cost per scheme. The sender-knows-the-secret schemes measure a single
# qubit and broadcast a single bit; the Bell-measurement baselines need two.
for p in ProtocolId:
    led = run_protocol(p, secret).ledger
    print(
        f"{p.value:6s} arity={led.alice.max_measurement_arity} "
        f"broadcast={led.alice.cbits_broadcast} bob->charlie={led.bob.cbits_point_to_point} "
        f"joint unitaries={led.receiver_joint_unitaries}"
    )
