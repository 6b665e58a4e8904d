"""Validated state types and the named constructors.

Basis kets ``|A_i>``, ``|B_i>``, ``|C_i>`` are computational basis vectors, so
``|A_1 B_1>`` is flat index 0 of a two-qubit register.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from densig import tensor_core as tc
from densig.errors import DimsError, NumericalError, StateError, WeightError

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
WEIGHT_TOL = 1e-10


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).ravel()
        dims = tc.check_dims(self.dims, amps.size)
        if not np.all(np.isfinite(amps)):
            raise StateError("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"state is not normalized (norm {norm:.12g})")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix with subsystem dims.

    Hermiticity noise under ``tensor_core.HERM_TOL`` is removed silently;
    anything worse is rejected with ``StateError``.
    """

    dims: tuple[int, ...]
    mat: np.ndarray
    _eigs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        try:
            mat = tc.as_matrix(self.mat, "density matrix")
        except (DimsError, NumericalError) as exc:
            raise StateError(str(exc)) from None
        dims = tc.check_dims(self.dims, mat.shape[0])
        if not tc.is_hermitian(mat):
            raise StateError("density matrix is not Hermitian")
        mat = 0.5 * (mat + mat.conj().T)
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateError(f"density matrix trace is {tr:.12g}, expected 1")
        eigs = np.linalg.eigvalsh(mat)
        if eigs[0] < -PSD_TOL:
            raise StateError(f"density matrix is not positive semidefinite (min eigenvalue {eigs[0]:.3e})")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", _frozen(mat))
        object.__setattr__(self, "_eigs", eigs[::-1].copy())

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigs.copy()

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def ptrace(self, keep) -> "DensityMatrix":
        keep = sorted(set(keep))
        return DensityMatrix(tuple(self.dims[k] for k in keep), tc.partial_trace(self.mat, self.dims, keep))


class BipartiteDensityMatrix(DensityMatrix):
    """Density matrix on A (dim ``n``) tensor B (dim ``m``)."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.dims) != 2:
            raise DimsError(f"bipartite state needs two subsystem dims, got {self.dims}")

    @classmethod
    def from_matrix(cls, mat, n: int, m: int) -> "BipartiteDensityMatrix":
        return cls((n, m), mat)

    @property
    def n(self) -> int:
        return self.dims[0]

    @property
    def m(self) -> int:
        return self.dims[1]

    def reduced_a(self) -> DensityMatrix:
        return self.ptrace([0])

    def reduced_b(self) -> DensityMatrix:
        return self.ptrace([1])


def as_bipartite(rho: DensityMatrix) -> BipartiteDensityMatrix:
    if isinstance(rho, BipartiteDensityMatrix):
        return rho
    if len(rho.dims) != 2:
        raise DimsError(f"expected a bipartite state, got dims {rho.dims}")
    return BipartiteDensityMatrix(rho.dims, rho.mat)


def ket(labels: Sequence[int], dims: Sequence[int]) -> PureState:
    """Computational basis vector ``|labels>`` (0-based)."""
    dims = tc.check_dims(dims)
    if len(labels) != len(dims) or any(not 0 <= l < d for l, d in zip(labels, dims)):
        raise DimsError(f"basis label {tuple(labels)} invalid for dims {dims}")
    amps = np.zeros(int(np.prod(dims)), dtype=np.complex128)
    amps[np.ravel_multi_index(tuple(labels), dims)] = 1.0
    return PureState(dims, amps)


def basis_projector(i: int, d: int) -> DensityMatrix:
    return density_from_pure(ket([i], [d]))


def maximally_mixed(d: int) -> DensityMatrix:
    return DensityMatrix((d,), np.eye(d) / d)


def density_from_pure(psi: PureState) -> DensityMatrix:
    if not isinstance(psi, PureState):
        raise StateError(f"expected a PureState, got {type(psi).__name__}")
    rho = np.outer(psi.amplitudes, psi.amplitudes.conj())
    if len(psi.dims) == 2:
        return BipartiteDensityMatrix(psi.dims, rho)
    return DensityMatrix(psi.dims, rho)


def product_state(rho_a: DensityMatrix, rho_b: DensityMatrix) -> BipartiteDensityMatrix:
    for r in (rho_a, rho_b):
        if not isinstance(r, DensityMatrix):
            raise StateError(f"product factors must be DensityMatrix, got {type(r).__name__}")
    return BipartiteDensityMatrix((rho_a.dim, rho_b.dim), np.kron(rho_a.mat, rho_b.mat))


def _check_weights(weights: Sequence[float]) -> np.ndarray:
    w = np.asarray(weights, dtype=float).ravel()
    if w.size == 0:
        raise WeightError("at least one weight is required")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise WeightError(f"weights must be finite and non-negative, got {w.tolist()}")
    if abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise WeightError(f"weights sum to {w.sum():.12g}, expected 1")
    return w


def mixture(weights: Sequence[float], states: Sequence[DensityMatrix]) -> DensityMatrix:
    """Convex combination of states sharing one set of dims."""
    w = _check_weights(weights)
    if len(states) != w.size:
        raise WeightError(f"{w.size} weights for {len(states)} states")
    dims = states[0].dims
    for s in states[1:]:
        if s.dims != dims:
            raise DimsError(f"cannot mix states with dims {dims} and {s.dims}")
    mat = sum(wi * s.mat for wi, s in zip(w, states))
    if len(dims) == 2:
        return BipartiteDensityMatrix(dims, mat)
    return DensityMatrix(dims, mat)


def separable_mixture(weights: Sequence[float], pairs) -> BipartiteDensityMatrix:
    """``sum_i p_i rho_i^A (x) rho_i^B`` over a shared ``(n, m)``."""
    w = _check_weights(weights)
    pairs = list(pairs)
    if len(pairs) != w.size:
        raise WeightError(f"{w.size} weights for {len(pairs)} pairs")
    n, m = pairs[0][0].dim, pairs[0][1].dim
    for a, b in pairs:
        if (a.dim, b.dim) != (n, m):
            raise DimsError(f"pair dims ({a.dim}, {b.dim}) differ from ({n}, {m})")
    mat = np.zeros((n * m, n * m), dtype=np.complex128)
    for wi, (a, b) in zip(w, pairs):
        mat += wi * np.kron(a.mat, b.mat)
    return BipartiteDensityMatrix((n, m), mat)


def classical_corr_channel() -> BipartiteDensityMatrix:
    """``(|A1 B1><A1 B1| + |A2 B2><A2 B2|) / 2`` on two qubits."""
    p0, p1 = basis_projector(0, 2), basis_projector(1, 2)
    return separable_mixture([0.5, 0.5], [(p0, p0), (p1, p1)])


def bell_channel() -> PureState:
    """``(|A1 B1> + |A2 B2>) / sqrt(2)``."""
    s = 1.0 / np.sqrt(2.0)
    return PureState((2, 2), [s, 0.0, 0.0, s])


def tripartite_pure(weights: Sequence[float], dims: Sequence[int] = (2, 2, 2)) -> PureState:
    """``sum_i sqrt(p_i) |A_i B_i C_i>`` with computational bases."""
    w = _check_weights(weights)
    dims = tc.check_dims(dims)
    if len(dims) != 3:
        raise DimsError(f"tripartite state needs three dims, got {dims}")
    if w.size > min(dims):
        raise DimsError(f"{w.size} terms do not fit in dims {dims}")
    amps = np.zeros(int(np.prod(dims)), dtype=np.complex128)
    for i, p in enumerate(w):
        amps[np.ravel_multi_index((i, i, i), dims)] = np.sqrt(p)
    return PureState(dims, amps / np.linalg.norm(amps))


_PAIRS = {"AB": (0, 1), "AC": (0, 2), "BC": (1, 2)}


def reduce_tripartite(psi: PureState, keep: str) -> BipartiteDensityMatrix:
    if len(psi.dims) != 3:
        raise DimsError(f"expected a three-factor state, got dims {psi.dims}")
    try:
        pair = _PAIRS[keep.upper()]
    except (KeyError, AttributeError):
        raise DimsError(f"keep must be one of AB, AC, BC, got {keep!r}") from None
    rho = np.outer(psi.amplitudes, psi.amplitudes.conj())
    red = tc.partial_trace(rho, psi.dims, pair)
    return BipartiteDensityMatrix(tuple(psi.dims[k] for k in pair), red)
