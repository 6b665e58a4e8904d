"""Random unitaries and states for property tests and benchmarks."""
import numpy as np

from densig.quantum_states import BipartiteDensityMatrix, DensityMatrix, PureState, separable_mixture


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_pure(dims, rng: np.random.Generator) -> PureState:
    d = int(np.prod(dims))
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(tuple(dims), v / np.linalg.norm(v))


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Mixture of ``rank`` random pure states with Dirichlet weights."""
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    g /= np.linalg.norm(g, axis=0)
    w = rng.dirichlet(np.ones(rank))
    return DensityMatrix((d,), (g * w) @ g.conj().T)


def random_bipartite(n: int, m: int, rng: np.random.Generator, rank: int | None = None) -> BipartiteDensityMatrix:
    r = random_density(n * m, rng, rank)
    return BipartiteDensityMatrix((n, m), r.mat)


def random_product(n: int, m: int, rng: np.random.Generator) -> BipartiteDensityMatrix:
    a = random_density(n, rng, rank=int(rng.integers(1, n + 1)))
    b = random_density(m, rng, rank=int(rng.integers(1, m + 1)))
    return BipartiteDensityMatrix((n, m), np.kron(a.mat, b.mat))


def random_separable(n: int, m: int, terms: int, rng: np.random.Generator) -> BipartiteDensityMatrix:
    pairs = [(random_density(n, rng), random_density(m, rng)) for _ in range(terms)]
    return separable_mixture(rng.dirichlet(np.ones(terms)), pairs)
