"""Block-expansion entanglement signatures of bipartite density matrices."""
from densig._accel import BACKEND
from densig.entanglement_signature import (
    ExpansionBlocks,
    Signature,
    XMatrix,
    expand,
    product_test,
    reconstruct,
    signature,
    x_matrix,
)
from densig.errors import (
    BasisError,
    DensigError,
    DimsError,
    NotHermitianError,
    NumericalError,
    ParseError,
    StateError,
    UndefinedNameError,
    WeightError,
)
from densig.quantum_states import (
    BipartiteDensityMatrix,
    DensityMatrix,
    PureState,
    bell_channel,
    classical_corr_channel,
    density_from_pure,
    product_state,
    reduce_tripartite,
    separable_mixture,
    tripartite_pure,
)
from densig.teleportation_sim import InputStateC, TeleportOutcome, bell_basis, channel_comparison, teleport

__version__ = "0.1.0"
