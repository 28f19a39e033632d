"""Random states, unitaries and channels for property testing and sampling."""

from __future__ import annotations

import numpy as np

from .states import DensityOperator, StateVector

__all__ = [
    "random_state_vector",
    "random_density_operator",
    "random_unitary",
    "random_kraus_channel_operators",
]


def _gaussian_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_state_vector(dim: int, rng: np.random.Generator, dims=None) -> StateVector:
    """Haar-random pure state."""
    v = _gaussian_complex(rng, dim)
    return StateVector(v / np.linalg.norm(v), dims=dims)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Gaussian matrix with phase fixing."""
    q, r = np.linalg.qr(_gaussian_complex(rng, (dim, dim)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_density_operator(
    dim: int, rng: np.random.Generator, rank: int | None = None, dims=None
) -> DensityOperator:
    """Random mixed state: trace-normalized Wishart matrix of the given rank."""
    rank = dim if rank is None else rank
    g = _gaussian_complex(rng, (dim, rank))
    m = g @ g.conj().T
    return DensityOperator(m / m.trace(), dims=dims)


def random_kraus_channel_operators(
    dim: int, n_kraus: int, rng: np.random.Generator
) -> list:
    """Kraus operators of a random channel (isometry split into blocks)."""
    q, r = np.linalg.qr(_gaussian_complex(rng, (dim * n_kraus, dim)))
    iso = q * (np.diag(r) / np.abs(np.diag(r)))
    return [iso[k * dim : (k + 1) * dim, :] for k in range(n_kraus)]
