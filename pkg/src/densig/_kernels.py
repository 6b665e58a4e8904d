"""Inner loops: cyclic Jacobi for Hermitian matrices and the block Gram matrix.

Each kernel exists twice. The ``*_numba`` variant is scalar loops under
``njit``; the ``*_numpy`` variant runs the same algorithm with array slices
and is used when ``DENSIG_BACKEND=numpy``. Both are importable directly so
tests and the benchmark can compare them.
"""
import numpy as np

from densig._accel import BACKEND, njit

# Rotation is skipped below this magnitude relative to the Frobenius norm.
_SKIP = 1e-300


@njit
def jacobi_eigh_numba(h, tol, max_sweeps):
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    scale = np.sqrt(scale)
    w = np.empty(n)
    if scale == 0.0:
        for i in range(n):
            w[i] = 0.0
        return w, v, 0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        if np.sqrt(2.0 * off) <= tol * scale:
            for i in range(n):
                w[i] = a[i, i].real
            return w, v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= _SKIP * scale:
                    continue
                phase = apq / mag
                zeta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + np.sqrt(zeta * zeta + 1.0))
                else:
                    t = -1.0 / (-zeta + np.sqrt(zeta * zeta + 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                upp = c + 0j
                upq = s + 0j
                uqp = -s * np.conj(phase)
                uqq = c * np.conj(phase)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * upp + akq * uqp
                    a[k, q] = akp * upq + akq * uqq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = np.conj(upp) * apk + np.conj(uqp) * aqk
                    a[q, k] = np.conj(upq) * apk + np.conj(uqq) * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp * upp + vkq * uqp
                    v[k, q] = vkp * upq + vkq * uqq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, -1


def jacobi_eigh_numpy(h, tol, max_sweeps):
    n = h.shape[0]
    a = np.array(h, dtype=np.complex128, copy=True)
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v, 0
    upper = np.triu_indices(n, 1)
    for sweep in range(max_sweeps + 1):
        off = np.sqrt(2.0 * np.sum(np.abs(a[upper]) ** 2))
        if off <= tol * scale:
            return a.diagonal().real.copy(), v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= _SKIP * scale:
                    continue
                phase = apq / mag
                zeta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(zeta * zeta + 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                u = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ u
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    return a.diagonal().real.copy(), v, -1


@njit
def block_gram_numba(coeffs):
    nb = coeffs.shape[0]
    m = coeffs.shape[1]
    x = np.empty((nb, nb), dtype=np.complex128)
    for al in range(nb):
        for be in range(al, nb):
            acc = 0j
            for j in range(m):
                for jp in range(m):
                    acc += coeffs[al, j, jp] * np.conj(coeffs[be, j, jp])
            x[al, be] = acc
            x[be, al] = np.conj(acc)
        x[al, al] = x[al, al].real
    return x


def block_gram_numpy(coeffs):
    nb = coeffs.shape[0]
    flat = coeffs.reshape(nb, -1)
    x = flat @ flat.conj().T
    x = 0.5 * (x + x.conj().T)
    return x


if BACKEND == "numba":
    jacobi_eigh = jacobi_eigh_numba
    block_gram = block_gram_numba
else:
    jacobi_eigh = jacobi_eigh_numpy
    block_gram = block_gram_numpy
