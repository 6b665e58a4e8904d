"""Dense complex linear algebra on small square matrices.

Composite indices are A-major everywhere: for dims ``(d0, d1, d2)`` the flat
index of ``|a, b, c>`` is ``a*d1*d2 + b*d2 + c``, which is numpy's C order on
``reshape(dims)``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from densig import _kernels
from densig.errors import DimsError, NotHermitianError, NumericalError

HERM_TOL = 1e-10
RECON_TOL = 1e-12
RANK_TOL = 1e-9

# Jacobi stops once the off-diagonal Frobenius mass is this small relative to ||h||_F.
_JACOBI_TOL = 1e-15
_MAX_SWEEPS = 100


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite square complex128 array."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimsError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericalError(f"{name} has non-finite entries")
    return arr


def check_dims(dims: Sequence[int], total: int | None = None) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimsError(f"dims must be positive integers, got {dims}")
    if total is not None and int(np.prod(dims)) != total:
        raise DimsError(f"dims {dims} have product {int(np.prod(dims))}, expected {total}")
    return dims


def _subsystems(idx: Iterable[int], nsys: int, what: str) -> list[int]:
    out = sorted(set(int(k) for k in idx))
    if not out:
        raise DimsError(f"{what} must be non-empty")
    if out[0] < 0 or out[-1] >= nsys:
        raise DimsError(f"{what} {out} out of range for {nsys} subsystems")
    return out


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    The kept factors stay in their original order.
    """
    m = as_matrix(m)
    dims = check_dims(dims, m.shape[0])
    nsys = len(dims)
    keep = _subsystems(keep, nsys, "keep")
    gone = [k for k in range(nsys) if k not in keep]
    t = m.reshape(dims + dims)
    # trace the highest axes first so lower axis numbers stay valid
    for k in reversed(gone):
        live = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + live)
    d = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d, d)


def embed_op(op, dims: Sequence[int], targets: Iterable[int]) -> np.ndarray:
    """Full-space operator acting as ``op`` on ``targets`` and identity elsewhere.

    ``op`` is indexed A-major over the targets in increasing subsystem order;
    targets need not be contiguous.
    """
    op = as_matrix(op, "op")
    dims = check_dims(dims)
    nsys = len(dims)
    targets = _subsystems(targets, nsys, "targets")
    tdims = tuple(dims[k] for k in targets)
    if int(np.prod(tdims)) != op.shape[0]:
        raise DimsError(f"op has dim {op.shape[0]} but targets {targets} span {int(np.prod(tdims))}")
    rest = [k for k in range(nsys) if k not in targets]
    rdim = int(np.prod([dims[k] for k in rest])) if rest else 1
    full = np.kron(op, np.eye(rdim, dtype=np.complex128))
    # full is laid out as (targets..., rest...); permute back to natural order
    order = targets + rest
    t = full.reshape(tuple(dims[k] for k in order) * 2)
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [nsys + k for k in inv])
    total = int(np.prod(dims))
    return t.reshape(total, total)


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``tr(a b^dagger)``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimsError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.trace(a @ b.conj().T))


def is_hermitian(h, tol: float = HERM_TOL) -> bool:
    h = np.asarray(h)
    return bool(np.linalg.norm(h - h.conj().T) <= tol * np.linalg.norm(h))


def hermitian_eig(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with ``w`` real and sorted descending and ``v`` unitary,
    ``h = v @ diag(w) @ v^dagger``. Input within ``HERM_TOL * ||h||_F`` of
    Hermitian is symmetrized first; anything further off raises
    ``NotHermitianError``.
    """
    h = as_matrix(h)
    if not is_hermitian(h):
        dev = np.linalg.norm(h - h.conj().T) / max(np.linalg.norm(h), 1e-300)
        raise NotHermitianError(f"matrix is not Hermitian (relative deviation {dev:.3e})")
    h = 0.5 * (h + h.conj().T)
    w, v, sweeps = _kernels.jacobi_eigh(np.ascontiguousarray(h), _JACOBI_TOL, _MAX_SWEEPS)
    if sweeps < 0:
        raise NumericalError(f"Jacobi did not converge in {_MAX_SWEEPS} sweeps")
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def rank_by_eigs(eigenvalues: Sequence[float], rel_tol: float = RANK_TOL) -> int:
    """Number of eigenvalues with ``|w| >= rel_tol * max|w|``; 0 for an all-zero list."""
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    w = np.abs(np.asarray(eigenvalues, dtype=float))
    if w.size == 0:
        return 0
    top = w.max()
    if top == 0.0:
        return 0
    return int(np.count_nonzero(w >= rel_tol * top))
