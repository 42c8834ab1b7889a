"""Numerical demonstration of capacity superactivation with flagged Bell
states and an erasure channel."""

__version__ = "0.1.0"

from .capacity import (
    CoherentInfoReport,
    EntropyReport,
    Q1Result,
    Q1Search,
    channel_coherent_information,
    coherent_information_state,
    q1_search,
    von_neumann_entropy,
)
from .channels import (
    ChoiMatrix,
    KrausChannel,
    PPTResult,
    apply,
    choi,
    erasure_channel,
    identity_channel,
    is_ppt,
    ppt_distinguishability_bound,
)
from .qmat import (
    SystemLayout,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    partial_transpose,
    trace_norm,
)
from .states import (
    DensityMatrix,
    PureState,
    bell,
    classically_correlated,
    fidelity_with_pure,
    flagged_bell,
    hiding_flags,
    twisted_private_state,
)
from .superactivation import (
    ProtocolReport,
    run_protocol,
    run_protocol_full_simulation,
    sweep,
    untwist,
)
