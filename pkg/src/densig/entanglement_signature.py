"""Block expansion of a bipartite state over an A basis and the block Gram matrix X.

For an orthonormal A basis ``{|A_i>}`` the state splits as
``rho = sum_{i,i'} |A_i><A_i'| (x) rho_{ii'}`` with ``m x m`` blocks
``rho_{ii'}``. X is the Gram matrix of those blocks under the Hilbert-Schmidt
inner product, rows and columns indexed by the pair ``(i, i')`` flattened as
``i*n + i'``. The state is a product exactly when every block is a multiple of
one operator, i.e. when X has rank 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from densig import _kernels
from densig import tensor_core as tc
from densig.errors import BasisError, DimsError, NumericalError
from densig.quantum_states import BipartiteDensityMatrix, as_bipartite

UNITARY_TOL = 1e-10
PRODUCT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ExpansionBlocks:
    n: int
    m: int
    blocks: np.ndarray  # shape (n, n, m, m); blocks[i, i'] is rho_{ii'}
    basis: np.ndarray  # columns are |A_i>

    def block(self, i: int, ip: int) -> np.ndarray:
        return self.blocks[i, ip]

    def p(self, i: int, ip: int, j: int, jp: int) -> complex:
        """Expansion coefficient: entry ``(j, j')`` of block ``(i, i')``."""
        return complex(self.blocks[i, ip, j, jp])

    def flat(self) -> np.ndarray:
        """Blocks as an ``(n*n, m, m)`` stack in ``i*n + i'`` order."""
        return self.blocks.reshape(self.n * self.n, self.m, self.m)


@dataclass(frozen=True, eq=False)
class XMatrix:
    n: int
    mat: np.ndarray


@dataclass(frozen=True)
class Signature:
    eigenvalues: tuple[float, ...]
    rank: int
    is_product: bool
    purity: float
    basis_label: str
    rel_tol: float = tc.RANK_TOL


def _check_basis(a_basis, n: int) -> np.ndarray:
    if a_basis is None:
        return np.eye(n, dtype=np.complex128)
    u = tc.as_matrix(a_basis, "A basis")
    if u.shape[0] != n:
        raise DimsError(f"A basis has dim {u.shape[0]}, subsystem A has dim {n}")
    if np.linalg.norm(u.conj().T @ u - np.eye(n)) > UNITARY_TOL:
        raise BasisError("A basis is not unitary")
    return u


def expand(rho: BipartiteDensityMatrix, a_basis=None) -> ExpansionBlocks:
    """Split ``rho`` into blocks ``(<A_i| (x) I) rho (|A_i'> (x) I)``.

    ``a_basis`` columns are the basis vectors; the identity (computational
    basis) when omitted.
    """
    rho = as_bipartite(rho)
    n, m = rho.n, rho.m
    u = _check_basis(a_basis, n)
    t = rho.mat.reshape(n, m, n, m)
    # blocks[i, i', j, j'] = sum_{a,b} conj(u[a,i]) t[a,j,b,j'] u[b,i']
    blocks = np.einsum("ai,ajbk,bl->iljk", u.conj(), t, u)
    blocks.setflags(write=False)
    return ExpansionBlocks(n, m, blocks, u)


def reconstruct(blocks: ExpansionBlocks) -> BipartiteDensityMatrix:
    n, m = blocks.n, blocks.m
    b = np.asarray(blocks.blocks)
    if b.shape != (n, n, m, m):
        raise DimsError(f"blocks have shape {b.shape}, expected {(n, n, m, m)}")
    u = blocks.basis
    t = np.einsum("ai,iljk,bl->ajbk", u, b, u.conj())
    return BipartiteDensityMatrix((n, m), t.reshape(n * m, n * m))


def x_matrix_trace_form(blocks: ExpansionBlocks) -> np.ndarray:
    """X by explicit ``tr(rho_a rho_b^dagger)`` over every block pair."""
    flat = blocks.flat()
    nb = flat.shape[0]
    x = np.empty((nb, nb), dtype=np.complex128)
    for a in range(nb):
        for b in range(nb):
            x[a, b] = tc.hs_inner(flat[a], flat[b])
    return x


def x_matrix(blocks: ExpansionBlocks) -> XMatrix:
    """X from the coefficient sum ``sum_{j,j'} p_{a,jj'} conj(p_{b,jj'})``."""
    coeffs = np.ascontiguousarray(blocks.flat())
    return XMatrix(blocks.n, _kernels.block_gram(coeffs))


def _basis_label(a_basis) -> str:
    return "computational" if a_basis is None else "custom"


def signature(rho: BipartiteDensityMatrix, a_basis=None, rel_tol: float = tc.RANK_TOL) -> Signature:
    rho = as_bipartite(rho)
    x = x_matrix(expand(rho, a_basis))
    w, _ = tc.hermitian_eig(x.mat)
    rank = tc.rank_by_eigs(w, rel_tol)
    purity = rho.purity()
    if abs(w.sum() - purity) > 1e-10:
        raise NumericalError(f"X spectrum sums to {w.sum():.15g}, purity is {purity:.15g}")
    return Signature(
        eigenvalues=tuple(float(v) for v in w),
        rank=rank,
        is_product=rank == 1,
        purity=purity,
        basis_label=_basis_label(a_basis),
        rel_tol=rel_tol,
    )


def product_test(rho: BipartiteDensityMatrix, tol: float = PRODUCT_TOL) -> tuple[bool, float]:
    """Compare ``rho`` with the product of its own marginals.

    Returns ``(deviation < tol, ||rho - rho_A (x) rho_B||_F)``.
    """
    rho = as_bipartite(rho)
    ra = tc.partial_trace(rho.mat, rho.dims, [0])
    rb = tc.partial_trace(rho.mat, rho.dims, [1])
    dev = float(np.linalg.norm(rho.mat - np.kron(ra, rb)))
    return dev < tol, dev


def independent_block_count(blocks: ExpansionBlocks, rel_tol: float = tc.RANK_TOL) -> int:
    """Gram-Schmidt count of linearly independent blocks under the HS product.

    A block is independent when its residual norm squared, after removing the
    span of the earlier ones, is at least ``rel_tol`` times the largest block
    norm squared.
    """
    flat = [np.array(b) for b in blocks.flat()]
    top = max(tc.hs_inner(b, b).real for b in flat)
    if top == 0.0:
        return 0
    ortho: list[np.ndarray] = []
    for b in flat:
        r = b.copy()
        for _ in range(2):  # second pass restores orthogonality lost to round-off
            for q in ortho:
                r = r - tc.hs_inner(r, q) * q
        nrm2 = tc.hs_inner(r, r).real
        if nrm2 >= rel_tol * top:
            ortho.append(r / np.sqrt(nrm2))
    return len(ortho)
