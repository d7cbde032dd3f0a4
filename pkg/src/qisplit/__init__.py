"""Exact simulation of tripartite quantum information splitting.

Two sender-knows-the-secret schemes (``zc1`` over GHZ, ``zc2`` over an
asymmetric W state) and two Bell-measurement baselines (``hbb``, ``zheng``),
evaluated by exhaustive branch enumeration.
"""
from .analysis import (
    general_w_feasibility,
    leakage_report,
    nonmax_ghz_recovery,
    sweep_fidelity,
)
from .branches import ProtocolId
from .core import (
    DensityMatrix,
    KrausPair,
    OrthonormalBasis,
    StateVector,
    Unitary,
    apply_kraus,
    apply_unitary,
    fidelity,
    make_state,
    measure_in_basis,
    partial_trace,
    trace_distance,
)
from .corrections import derive_correction
from .ensembles import (
    ChannelSpec,
    Ensemble,
    OpName,
    SecretQubit,
    arbitrary,
    arbitrary_grid,
    equatorial,
    equatorial_grid,
    make_channel,
    make_secret,
    named_operator,
    real,
    real_grid,
    secret_basis,
)
from .protocols import (
    ProtocolRun,
    ResourceLedger,
    run_controlled,
    run_hbb,
    run_protocol,
    run_zc1,
    run_zc2,
    run_zheng,
)

__version__ = "0.1.0"
