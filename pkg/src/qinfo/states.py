"""Finite-dimensional quantum states: vectors, density operators and metrics.

Everything is exact linear algebra on small dense matrices: composition,
reduction, purification, Schmidt decomposition, entropy, fidelity, trace
distance and the Hilbert-space angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, ValidationError
from .probability import LogBase, _as_base, _plogp

__all__ = [
    "StateVector",
    "DensityOperator",
    "SpectralDecomposition",
    "SchmidtForm",
    "tensor",
    "partial_trace",
    "purify",
    "schmidt_decompose",
    "von_neumann_entropy",
    "fidelity",
    "statistical_overlap",
    "trace_distance",
    "hilbert_angle",
    "EIGENVALUE_CLIP",
]

_NORM_TOL = 1e-12
_HERM_TOL = 1e-10
_TRACE_TOL = 1e-10
_PSD_TOL = 1e-10
EIGENVALUE_CLIP = 1e-12  # spectrum values below this count as zero


def _check_dims(dims, total: int) -> tuple:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValidationError("subsystem dimensions must be positive")
    if math.prod(dims) != total:
        raise ValidationError(
            f"factorization {dims} does not multiply out to dimension {total}"
        )
    return dims


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm complex amplitude vector, optionally factored into subsystems."""

    amps: np.ndarray
    dims: tuple = None

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex).ravel()
        if a.size < 1:
            raise ValidationError("state vector must be non-empty")
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValidationError(f"state vector norm is {norm!r}, not 1")
        dims = (a.size,) if self.dims is None else _check_dims(self.dims, a.size)
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amps.size

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amps, self.amps.conj()), dims=self.dims)

    def overlap(self, other: "StateVector") -> complex:
        if self.dim != other.dim:
            raise DimensionMismatchError("state vectors have different dimensions")
        return complex(np.vdot(self.amps, other.amps))

    @staticmethod
    def basis(dim: int, index: int, dims=None) -> "StateVector":
        a = np.zeros(dim, dtype=complex)
        a[index] = 1.0
        return StateVector(a, dims=dims)

    def to_json(self) -> dict:
        return {
            "amps": [[float(z.real), float(z.imag)] for z in self.amps],
            "dims": list(self.dims),
        }

    @classmethod
    def from_json(cls, data) -> "StateVector":
        amps = np.array([complex(re, im) for re, im in data["amps"]])
        return cls(amps, dims=tuple(data.get("dims") or (len(amps),)))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    matrix: np.ndarray
    dims: tuple = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValidationError("density operator must be a square matrix")
        if np.max(np.abs(m - m.conj().T)) > _HERM_TOL:
            raise ValidationError("density operator must be Hermitian")
        tr = m.trace()
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ValidationError(f"density operator trace is {tr!r}, not 1")
        if np.linalg.eigvalsh(m).min() < -_PSD_TOL:
            raise ValidationError("density operator has a negative eigenvalue")
        dims = (m.shape[0],) if self.dims is None else _check_dims(self.dims, m.shape[0])
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectral(self) -> "SpectralDecomposition":
        vals, vecs = np.linalg.eigh(self.matrix)
        order = np.argsort(vals)[::-1]
        return SpectralDecomposition(vals[order], vecs[:, order])

    def is_pure(self, tol: float = 1e-9) -> bool:
        return abs(np.trace(self.matrix @ self.matrix).real - 1.0) < tol

    @staticmethod
    def maximally_mixed(dim: int, dims=None) -> "DensityOperator":
        return DensityOperator(np.eye(dim) / dim, dims=dims)

    def to_json(self) -> dict:
        return {
            "matrix": [
                [[float(z.real), float(z.imag)] for z in row] for row in self.matrix
            ],
            "dims": list(self.dims),
        }

    @classmethod
    def from_json(cls, data) -> "DensityOperator":
        m = np.array(
            [[complex(re, im) for re, im in row] for row in data["matrix"]]
        )
        return cls(m, dims=tuple(data.get("dims") or (m.shape[0],)))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues in descending order with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T

    def rank(self, clip: float = EIGENVALUE_CLIP) -> int:
        return int(np.sum(self.eigenvalues > clip))


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """Bi-orthogonal form of a bipartite pure state.

    ``coefficients`` are the descending non-negative Schmidt coefficients
    (their squares sum to 1); the columns of ``left_basis`` / ``right_basis``
    are the matching orthonormal vectors.
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    schmidt_number: int

    def reconstruct(self) -> np.ndarray:
        terms = [
            c * np.kron(self.left_basis[:, i], self.right_basis[:, i])
            for i, c in enumerate(self.coefficients)
        ]
        return np.sum(terms, axis=0)


def tensor(a, b):
    """Kronecker composition of two states of the same kind."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amps, b.amps), dims=a.dims + b.dims)
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        return DensityOperator(np.kron(a.matrix, b.matrix), dims=a.dims + b.dims)
    raise ValidationError("tensor needs two StateVectors or two DensityOperators")


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Reduced state on the ``keep`` subsystem(s), tracing out the rest.

    ``keep`` is a subsystem index or tuple of indices into ``rho.dims``.
    """
    dims = rho.dims
    if len(dims) < 2:
        raise ValidationError("partial trace needs a factored density operator")
    keep = (keep,) if isinstance(keep, (int, np.integer)) else tuple(keep)
    if any(not 0 <= k < len(dims) for k in keep) or len(set(keep)) != len(keep):
        raise ValidationError(f"keep={keep} is not a valid subsystem subset")

    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    # contract each traced-out subsystem's ket index with its bra index
    for sys in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=sys, axis2=sys + (t.ndim // 2))
    kept_dims = tuple(dims[k] for k in sorted(keep))
    d = math.prod(kept_dims) if kept_dims else 1
    reduced = t.reshape(d, d)
    if sorted(keep) != list(keep):
        # reorder subsystems to the caller's order
        perm = np.argsort(np.argsort(keep))
        src = tuple(kept_dims[i] for i in range(len(keep)))
        t2 = reduced.reshape(src + src)
        axes = tuple(perm) + tuple(p + len(keep) for p in perm)
        t2 = np.transpose(t2, axes)
        kept_dims = tuple(dims[k] for k in keep)
        reduced = t2.reshape(d, d)
    return DensityOperator(reduced, dims=kept_dims if kept_dims else (1,))


def purify(rho: DensityOperator) -> StateVector:
    """Bipartite pure state whose first-subsystem reduction is ``rho``.

    The ancilla (second factor) has dimension rank(rho); tracing it out
    recovers ``rho``.
    """
    spec = rho.spectral()
    rank = max(spec.rank(), 1)
    amps = np.zeros(rho.dim * rank, dtype=complex)
    for i in range(rank):
        lam = max(spec.eigenvalues[i], 0.0)
        anc = np.zeros(rank)
        anc[i] = 1.0
        amps += math.sqrt(lam) * np.kron(spec.eigenvectors[:, i], anc)
    amps /= np.linalg.norm(amps)
    return StateVector(amps, dims=(rho.dim, rank))


def schmidt_decompose(psi: StateVector, split=None, clip: float = EIGENVALUE_CLIP) -> SchmidtForm:
    """Schmidt decomposition of a bipartite pure state.

    ``split`` defaults to the state's two-factor ``dims``; the squared
    coefficients equal the eigenvalues of either reduced density matrix.
    """
    if split is None:
        if len(psi.dims) != 2:
            raise ValidationError("state needs a bipartite factorization")
        split = psi.dims
    da, db = _check_dims(split, psi.dim)
    mat = psi.amps.reshape(da, db)
    u, s, vh = np.linalg.svd(mat)
    k = min(da, db)
    number = int(np.sum(s[:k] ** 2 > clip))
    # right vectors carry the amplitudes vh[i, :] so that
    # sum_i s_i kron(left_i, right_i) rebuilds the state
    return SchmidtForm(
        coefficients=s[:k],
        left_basis=u[:, :k],
        right_basis=vh.T[:, :k],
        schmidt_number=max(number, 1),
    )


def von_neumann_entropy(rho: DensityOperator, base=LogBase.BITS) -> float:
    """-Tr(rho log rho); zero iff pure, log(dim) iff maximally mixed."""
    vals = np.linalg.eigvalsh(rho.matrix)
    vals = vals[vals > EIGENVALUE_CLIP]
    return _plogp(vals, _as_base(base))


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(matrix)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(rho0: DensityOperator, rho1: DensityOperator) -> float:
    """Fidelity (Tr sqrt(sqrt(rho1) rho0 sqrt(rho1)))^2, in [0, 1]."""
    if rho0.dim != rho1.dim:
        raise DimensionMismatchError("states have different dimensions")
    s1 = _psd_sqrt(rho1.matrix)
    inner = s1 @ rho0.matrix @ s1
    vals = np.linalg.eigvalsh(inner)
    # rank-deficiency dust of order eps would blow up to sqrt(eps); drop it
    vals[vals < 1e-14 * max(vals.max(), 1e-3)] = 0.0
    root_sum = np.sqrt(vals).sum()
    return float(min(root_sum**2, 1.0))


def statistical_overlap(rho0: DensityOperator, rho1: DensityOperator) -> float:
    """Square root of the fidelity: the POVM-maximized classical overlap."""
    return math.sqrt(fidelity(rho0, rho1))


def trace_distance(rho0: DensityOperator, rho1: DensityOperator) -> float:
    """Trace-norm distortion ||rho0 - rho1|| = Tr|rho0 - rho1|.

    No 1/2 normalization is applied: orthogonal pure states are at distance 2.
    Halve the result if you prefer the normalized convention.
    """
    if rho0.dim != rho1.dim:
        raise DimensionMismatchError("states have different dimensions")
    vals = np.linalg.eigvalsh(rho0.matrix - rho1.matrix)
    return float(np.abs(vals).sum())


def hilbert_angle(psi0: StateVector, psi1: StateVector) -> float:
    """Ray angle arccos|<psi0|psi1>| in [0, pi/2]; zero iff equal up to phase."""
    overlap = abs(psi0.overlap(psi1))
    return float(math.acos(min(overlap, 1.0)))
