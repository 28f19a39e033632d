"""Measurements and open-system dynamics.

Projective measurements and POVMs with Born-rule probabilities and state
updates, operator-sum (Kraus) channels, a Choi-matrix complete-positivity
test, and the ancilla realization of an arbitrary POVM as a repeatable
measurement on a larger system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, ValidationError
from .probability import Distribution
from .states import DensityOperator, _psd_sqrt

__all__ = [
    "ProjectiveMeasurement",
    "Povm",
    "KrausChannel",
    "measure_probabilities",
    "projective_update",
    "apply_channel",
    "choi_matrix",
    "CompletePositivityResult",
    "is_completely_positive",
    "PovmRealization",
    "povm_via_ancilla",
]

_ORTHO_TOL = 1e-10
_COMPLETE_TOL = 1e-10
_PSD_TOL = 1e-10
_CHOI_TOL = 1e-9


def _as_matrices(items, name: str) -> list:
    mats = [np.asarray(m, dtype=complex) for m in items]
    if not mats:
        raise ValidationError(f"{name} needs at least one operator")
    if any(m.ndim != 2 for m in mats):
        raise ValidationError(f"{name} operators must be matrices")
    return mats


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Complete set of mutually orthogonal Hermitian projectors."""

    projectors: list

    def __post_init__(self):
        projs = _as_matrices(self.projectors, "projective measurement")
        d = projs[0].shape[0]
        if any(p.shape != (d, d) for p in projs):
            raise ValidationError("projectors must share one square dimension")
        for i, p in enumerate(projs):
            if np.max(np.abs(p - p.conj().T)) > _ORTHO_TOL:
                raise ValidationError("projectors must be Hermitian")
            for j, q in enumerate(projs):
                expect = p if i == j else np.zeros_like(p)
                if np.max(np.abs(p @ q - expect)) > _ORTHO_TOL:
                    raise ValidationError("projectors must be orthogonal idempotents")
        total = sum(projs)
        if np.max(np.abs(total - np.eye(d))) > _COMPLETE_TOL:
            raise ValidationError("projectors must sum to the identity")
        object.__setattr__(self, "projectors", projs)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.projectors)

    @staticmethod
    def computational(dim: int) -> "ProjectiveMeasurement":
        eye = np.eye(dim)
        return ProjectiveMeasurement([np.outer(eye[i], eye[i]) for i in range(dim)])

    @staticmethod
    def from_basis(vectors) -> "ProjectiveMeasurement":
        vecs = [np.asarray(v, dtype=complex).ravel() for v in vectors]
        return ProjectiveMeasurement([np.outer(v, v.conj()) for v in vecs])


@dataclass(frozen=True, eq=False)
class Povm:
    """Positive operator-valued measure: PSD elements summing to the identity."""

    elements: list

    def __post_init__(self):
        els = _as_matrices(self.elements, "POVM")
        d = els[0].shape[0]
        if any(e.shape != (d, d) for e in els):
            raise ValidationError("POVM elements must share one square dimension")
        for e in els:
            if np.max(np.abs(e - e.conj().T)) > _ORTHO_TOL:
                raise ValidationError("POVM elements must be Hermitian")
            if np.linalg.eigvalsh(e).min() < -_PSD_TOL:
                raise ValidationError("POVM elements must be positive semidefinite")
        if np.max(np.abs(sum(els) - np.eye(d))) > _COMPLETE_TOL:
            raise ValidationError("POVM elements must sum to the identity")
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)

    def to_json(self) -> list:
        return [
            [[[float(z.real), float(z.imag)] for z in row] for row in e]
            for e in self.elements
        ]

    @classmethod
    def from_json(cls, data) -> "Povm":
        return cls(
            [
                np.array([[complex(re, im) for re, im in row] for row in mat])
                for mat in data
            ]
        )


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Trace-preserving operator-sum map rho -> sum_k N_k rho N_k^dagger."""

    operators: list

    def __post_init__(self):
        ops = _as_matrices(self.operators, "Kraus channel")
        d_out, d_in = ops[0].shape
        if any(op.shape != (d_out, d_in) for op in ops):
            raise ValidationError("Kraus operators must share one shape")
        total = sum(op.conj().T @ op for op in ops)
        if np.max(np.abs(total - np.eye(d_in))) > _COMPLETE_TOL:
            raise ValidationError("Kraus operators must satisfy sum N^+ N = 1")
        object.__setattr__(self, "operators", ops)

    @property
    def dim_in(self) -> int:
        return self.operators[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.operators[0].shape[0]

    @staticmethod
    def identity(dim: int) -> "KrausChannel":
        return KrausChannel([np.eye(dim)])

    @staticmethod
    def depolarizing(p: float) -> "KrausChannel":
        """Qubit depolarizing channel; p = 1 sends every state to I/2."""
        if not 0.0 <= p <= 4.0 / 3.0:
            raise ValidationError("depolarizing strength out of range")
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        y = np.array([[0, -1j], [1j, 0]])
        z = np.array([[1, 0], [0, -1]], dtype=complex)
        return KrausChannel(
            [
                np.sqrt(1 - 3 * p / 4) * np.eye(2),
                np.sqrt(p / 4) * x,
                np.sqrt(p / 4) * y,
                np.sqrt(p / 4) * z,
            ]
        )

    @staticmethod
    def dephasing(p: float) -> "KrausChannel":
        """Qubit phase-damping channel; p = 1 kills all coherences."""
        if not 0.0 <= p <= 1.0:
            raise ValidationError("dephasing strength out of range")
        z = np.array([[1, 0], [0, -1]], dtype=complex)
        return KrausChannel([np.sqrt(1 - p / 2) * np.eye(2), np.sqrt(p / 2) * z])

    def to_json(self) -> list:
        return [
            [[[float(z.real), float(z.imag)] for z in row] for row in op]
            for op in self.operators
        ]

    @classmethod
    def from_json(cls, data) -> "KrausChannel":
        return cls(
            [
                np.array([[complex(re, im) for re, im in row] for row in mat])
                for mat in data
            ]
        )


def measure_probabilities(rho: DensityOperator, m) -> Distribution:
    """Born probabilities Tr(E rho) of every outcome of a measurement."""
    elements = m.projectors if isinstance(m, ProjectiveMeasurement) else m.elements
    if elements[0].shape[0] != rho.dim:
        raise DimensionMismatchError("measurement does not match state dimension")
    probs = np.array([np.trace(e @ rho.matrix) for e in elements])
    if np.max(np.abs(probs.imag)) > 1e-12:
        raise ValidationError("measurement produced non-real probabilities")
    p = np.clip(probs.real, 0.0, None)
    return Distribution(p / p.sum())


def projective_update(
    rho: DensityOperator, m: ProjectiveMeasurement, outcome: int | None = None
) -> DensityOperator:
    """Post-measurement state: one projector branch, or the unread mixture."""
    if m.dim != rho.dim:
        raise DimensionMismatchError("measurement does not match state dimension")
    if outcome is None:
        new = sum(p @ rho.matrix @ p for p in m.projectors)
        return DensityOperator(new, dims=rho.dims)
    if not 0 <= outcome < m.n_outcomes:
        raise ValidationError("outcome index out of range")
    p = m.projectors[outcome]
    num = p @ rho.matrix @ p
    prob = num.trace().real
    if prob <= 1e-14:
        raise ValidationError("cannot condition on a zero-probability outcome")
    return DensityOperator(num / prob, dims=rho.dims)


def apply_channel(rho: DensityOperator, ch: KrausChannel) -> DensityOperator:
    """Operator-sum action on a state; trace, Hermiticity and PSD survive."""
    if ch.dim_in != rho.dim:
        raise DimensionMismatchError("channel does not match state dimension")
    new = sum(op @ rho.matrix @ op.conj().T for op in ch.operators)
    dims = rho.dims if ch.dim_out == rho.dim else None
    return DensityOperator(new, dims=dims)


def choi_matrix(superop) -> np.ndarray:
    """Choi matrix of a map given as a KrausChannel or a D^2 x D^2 action matrix.

    The action-matrix convention is row-major vectorization: the matrix sends
    vec(rho) to vec(map(rho)).  The Choi matrix is normalized as the map's
    action on half of a maximally entangled pair, so a qubit transpose map has
    eigenvalues (1/2, 1/2, 1/2, -1/2).
    """
    if isinstance(superop, KrausChannel):
        d = superop.dim_in
        d_out = superop.dim_out
        apply = lambda m: sum(op @ m @ op.conj().T for op in superop.operators)
    else:
        action = np.asarray(superop, dtype=complex)
        if action.ndim != 2 or action.shape[0] != action.shape[1]:
            raise ValidationError("action matrix must be square")
        d = round(action.shape[0] ** 0.5)
        if d * d != action.shape[0]:
            raise ValidationError("action matrix side must be a perfect square")
        d_out = d
        apply = lambda m: (action @ m.reshape(-1)).reshape(d, d)

    choi = np.zeros((d * d_out, d * d_out), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            block = apply(unit)
            choi[i * d_out : (i + 1) * d_out, j * d_out : (j + 1) * d_out] = block
    return choi / d


@dataclass(frozen=True)
class CompletePositivityResult:
    """Outcome of the Choi positivity test."""

    is_cp: bool
    min_eigenvalue: float
    witness: np.ndarray | None  # eigenvector of the most negative eigenvalue

    def __bool__(self) -> bool:
        return self.is_cp


def is_completely_positive(superop, tol: float = _CHOI_TOL) -> CompletePositivityResult:
    """Choi test: the map is completely positive iff its Choi matrix is PSD.

    When it is not, the returned witness is the Choi eigenvector with the most
    negative eigenvalue.
    """
    choi = choi_matrix(superop)
    if np.max(np.abs(choi - choi.conj().T)) > 1e-9:
        # Non-Hermitian Choi: not even a Hermiticity-preserving map.
        sym = (choi + choi.conj().T) / 2
        vals, vecs = np.linalg.eigh(sym)
        return CompletePositivityResult(False, float(vals[0]), vecs[:, 0])
    vals, vecs = np.linalg.eigh(choi)
    if vals[0] < -tol:
        return CompletePositivityResult(False, float(vals[0]), vecs[:, 0])
    return CompletePositivityResult(True, float(vals[0]), None)


@dataclass(frozen=True, eq=False)
class PovmRealization:
    """POVM realized as unitary + projective measurement on system x ancilla."""

    ancilla_dim: int
    unitary: np.ndarray
    measurement: ProjectiveMeasurement  # acts on the composite space
    kraus: KrausChannel
    recovered_elements: list


def povm_via_ancilla(povm: Povm, tol: float = 1e-9) -> PovmRealization:
    """Realize a POVM as a repeatable measurement on system plus ancilla.

    Uses the square-root (efficient) Kraus choice M_a = sqrt(E_a), embeds the
    stacked isometry into a unitary on the D*N composite space, measures the
    ancilla projectively, and verifies the recovered elements reproduce the
    inputs to ``tol``.
    """
    d = povm.dim
    n = povm.n_outcomes
    kraus_ops = [_psd_sqrt(e) for e in povm.elements]

    # isometry V: |psi>|0> -> sum_a (M_a |psi>) (x) |a>, composite index s*N + a
    iso = np.zeros((d * n, d), dtype=complex)
    for a, m in enumerate(kraus_ops):
        for s_out in range(d):
            iso[s_out * n + a, :] = m[s_out, :]

    # the unitary must send column s*N+0 to iso[:, s]; the remaining columns
    # take any orthonormal basis of the complement of the isometry's range
    u_full = np.linalg.svd(iso)[0]
    complement = u_full[:, d:]
    unitary = np.zeros((d * n, d * n), dtype=complex)
    unitary[:, 0::n] = iso
    free_cols = [c for c in range(d * n) if c % n != 0]
    unitary[:, free_cols] = complement
    if np.max(np.abs(unitary.conj().T @ unitary - np.eye(d * n))) > 1e-9:
        raise RuntimeError("unitary completion of the POVM isometry failed")

    anc_projs = []
    for a in range(n):
        pa = np.zeros((n, n), dtype=complex)
        pa[a, a] = 1.0
        anc_projs.append(np.kron(np.eye(d), pa))
    measurement = ProjectiveMeasurement(anc_projs)

    recovered = []
    for a in range(n):
        m = unitary[a::n, 0::n]  # block (s_out*N + a, s_in*N + 0)
        recovered.append(m.conj().T @ m)
        if np.max(np.abs(recovered[-1] - povm.elements[a])) > tol:
            raise RuntimeError("POVM realization failed to reproduce an element")
    return PovmRealization(
        ancilla_dim=n,
        unitary=unitary,
        measurement=measurement,
        kraus=KrausChannel(kraus_ops),
        recovered_elements=recovered,
    )
