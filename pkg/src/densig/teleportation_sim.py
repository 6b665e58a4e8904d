"""Bell measurement on A and C of ``channel_AB (x) |psi_C><psi_C|``.

No correction unitaries are applied: each outcome reports the raw
post-measurement state of B.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from densig import tensor_core as tc
from densig.errors import DimsError, NumericalError, StateError
from densig.quantum_states import (
    BipartiteDensityMatrix,
    DensityMatrix,
    PureState,
    as_bipartite,
    bell_channel,
    classical_corr_channel,
    density_from_pure,
)

P_FLOOR = 1e-12
_DIMS_ABC = (2, 2, 2)


@dataclass(frozen=True)
class InputStateC:
    c1: complex
    c2: complex

    def __post_init__(self):
        c1, c2 = complex(self.c1), complex(self.c2)
        norm2 = abs(c1) ** 2 + abs(c2) ** 2
        if abs(norm2 - 1.0) > 1e-10:
            raise StateError(f"|c1|^2 + |c2|^2 = {norm2:.12g}, expected 1")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)

    def vector(self) -> np.ndarray:
        return np.array([self.c1, self.c2], dtype=np.complex128)

    def density(self) -> DensityMatrix:
        v = self.vector()
        return DensityMatrix((2,), np.outer(v, v.conj()))


@dataclass(frozen=True, eq=False)
class TeleportOutcome:
    outcome_index: int  # 1..4, in bell_basis() order
    probability: float
    post_state_b: DensityMatrix | None


def bell_basis() -> list[PureState]:
    """The four measurement states on A (x) C, A-major over ``(a, c)``.

    Order: ``|A1C1>+|A2C2>``, ``|A1C1>-|A2C2>``, ``|A1C2>+|A2C1>``,
    ``|A1C2>-|A2C1>``, each over sqrt(2).
    """
    s = 1.0 / np.sqrt(2.0)
    return [
        PureState((2, 2), [s, 0, 0, s]),
        PureState((2, 2), [s, 0, 0, -s]),
        PureState((2, 2), [0, s, s, 0]),
        PureState((2, 2), [0, s, -s, 0]),
    ]


def _as_input(inp) -> InputStateC:
    if isinstance(inp, InputStateC):
        return inp
    c1, c2 = inp
    return InputStateC(c1, c2)


def teleport(channel: BipartiteDensityMatrix, inp) -> list[TeleportOutcome]:
    channel = as_bipartite(channel)
    if channel.dims != (2, 2):
        raise DimsError(f"channel must be 2 (x) 2, got {channel.dims}")
    inp = _as_input(inp)
    total = np.kron(channel.mat, inp.density().mat)
    outcomes = []
    for k, psi in enumerate(bell_basis(), start=1):
        proj = embed_projector(psi)
        post = proj @ total @ proj
        p = float(np.trace(post).real)
        state = None
        if p >= P_FLOOR:
            state = DensityMatrix((2,), tc.partial_trace(post, _DIMS_ABC, [1]) / p)
        outcomes.append(TeleportOutcome(k, p, state))
    psum = sum(o.probability for o in outcomes)
    if abs(psum - 1.0) > 1e-10:
        raise NumericalError(f"outcome probabilities sum to {psum:.15g}")
    return outcomes


def embed_projector(psi: PureState) -> np.ndarray:
    """``|psi><psi|`` on A, C of A (x) B (x) C, identity on B."""
    return tc.embed_op(np.outer(psi.amplitudes, psi.amplitudes.conj()), _DIMS_ABC, (0, 2))


def coherence_info(rho_b: DensityMatrix) -> float:
    """l1 off-diagonal mass ``|rho_01| + |rho_10|`` of a qubit state."""
    mat = rho_b.mat if isinstance(rho_b, DensityMatrix) else tc.as_matrix(rho_b)
    if mat.shape != (2, 2):
        raise DimsError(f"coherence_info needs a qubit state, got shape {mat.shape}")
    return float(abs(mat[0, 1]) + abs(mat[1, 0]))


def aggregate_coherence(outcomes: list[TeleportOutcome]) -> float:
    return sum(o.probability * coherence_info(o.post_state_b) for o in outcomes if o.post_state_b is not None)


@dataclass(frozen=True, eq=False)
class ChannelComparison:
    input: InputStateC
    classical: list[TeleportOutcome]
    bell: list[TeleportOutcome]
    classical_coherence: float
    bell_coherence: float


def channel_comparison(inp) -> ChannelComparison:
    """Teleport ``inp`` through the classically correlated and the Bell channel.

    The classical channel must carry no coherence and the Bell channel
    exactly ``2|c1 c2|``; a violation raises ``NumericalError``.
    """
    inp = _as_input(inp)
    classical = teleport(classical_corr_channel(), inp)
    bell = teleport(density_from_pure(bell_channel()), inp)
    cc = aggregate_coherence(classical)
    bc = aggregate_coherence(bell)
    expected = 2.0 * abs(inp.c1 * inp.c2)
    if abs(cc) > 1e-10 or abs(bc - expected) > 1e-10:
        raise NumericalError(f"coherence check failed: classical={cc:.3e}, bell={bc:.15g}, expected {expected:.15g}")
    return ChannelComparison(inp, classical, bell, cc, bc)
