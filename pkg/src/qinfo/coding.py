"""Block compression onto typical subspaces, and error-correction checking.

Schumacher-style transposition of n-signal blocks through a smaller code
space with exact average-fidelity accounting, the pairwise codeword
conditions deciding whether a Pauli error set is correctable, a worked
three-qubit repetition-code recovery, and the Hamming bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .discrimination import Ensemble
from .exceptions import EnumerationCapError, ValidationError
from .states import DensityOperator, StateVector, von_neumann_entropy

__all__ = [
    "TypicalSubspace",
    "build_typical_subspace",
    "SchumacherResult",
    "schumacher_roundtrip",
    "CodeSubspace",
    "PauliErrorSet",
    "pauli_operator",
    "QeccCheckResult",
    "qecc_check",
    "RepetitionRecovery",
    "recovery_demo",
    "hamming_bound",
    "DEFAULT_BLOCK_CAP",
]

DEFAULT_BLOCK_CAP = 2**14

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1], [1, 0]], dtype=complex),  # XZ, real convention
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


# --------------------------------------------------------------------------
# Typical subspaces and compression
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TypicalSubspace:
    """Span of the block-state eigenvectors with near-2^(-nS) eigenvalues.

    The subspace is stored implicitly: ``strings`` indexes the selected
    eigenvector products of the single-system eigenbasis ``eigenvectors``
    (columns, eigenvalues descending in ``eigenvalues``).
    """

    n: int
    delta: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    strings: list
    weight: float

    @property
    def dimension(self) -> int:
        return len(self.strings)

    def projector(self, cap: int = DEFAULT_BLOCK_CAP) -> np.ndarray:
        """Dense projector onto the subspace (small n only)."""
        d = self.eigenvectors.shape[0]
        dim = d**self.n
        if dim > cap:
            raise EnumerationCapError(f"dense projector of size {dim} exceeds cap {cap}")
        proj = np.zeros((dim, dim), dtype=complex)
        for s in self.strings:
            vec = np.ones(1, dtype=complex)
            for ix in s:
                vec = np.kron(vec, self.eigenvectors[:, ix])
            proj += np.outer(vec, vec.conj())
        return proj


def build_typical_subspace(
    rho: DensityOperator, n: int, delta: float, cap: int = DEFAULT_BLOCK_CAP
) -> TypicalSubspace:
    """Select the block eigenvectors with 2^(-n(S+d)) < eigenvalue < 2^(-n(S-d)).

    Exhaustive over the dim(rho)^n product eigenvalues, so ``n`` is limited by
    ``cap``.  The subspace dimension always satisfies both
    (1-eta) 2^(n(S-delta)) <= dim <= 2^(n(S+delta)) with eta = 1 - weight.
    """
    if n < 1:
        raise ValidationError("block length must be at least 1")
    if delta <= 0:
        raise ValidationError("delta must be positive")
    d = rho.dim
    if d**n > cap:
        raise EnumerationCapError(
            f"{d}^{n} block eigenvalues exceed the enumeration cap {cap}"
        )
    spec = rho.spectral()
    s = von_neumann_entropy(rho)
    lo = 2.0 ** (-n * (s + delta))
    hi = 2.0 ** (-n * (s - delta))

    strings = []
    weight = 0.0
    single = np.clip(spec.eigenvalues, 0.0, None)
    for combo in product(range(d), repeat=n):
        lam = float(np.prod(single[list(combo)]))
        if lo < lam < hi:
            strings.append(combo)
            weight += lam

    sub = TypicalSubspace(
        n=n,
        delta=delta,
        eigenvalues=spec.eigenvalues,
        eigenvectors=spec.eigenvectors,
        strings=strings,
        weight=weight,
    )
    eta = 1.0 - weight
    if sub.dimension > 2.0 ** (n * (s + delta)) + 1e-9:
        raise RuntimeError("typical subspace exceeded its dimension bound")
    if sub.dimension < (1.0 - eta) * 2.0 ** (n * (s - delta)) - 1e-9:
        raise RuntimeError("typical subspace fell below its dimension bound")
    return sub


@dataclass(frozen=True)
class SchumacherResult:
    """Average transmission fidelity of block compression."""

    avg_fidelity: float
    rate_qubits_per_signal: float
    dimension: int
    weight: float
    eta: float
    n: int


def _ensemble_from_source(source) -> tuple:
    """Signal probabilities and pure-state vectors of a compression source."""
    if isinstance(source, DensityOperator):
        spec = source.spectral()
        probs = np.clip(spec.eigenvalues, 0.0, None)
        probs = probs / probs.sum()
        vectors = [spec.eigenvectors[:, i] for i in range(source.dim)]
        return probs, vectors, source
    if isinstance(source, Ensemble):
        vectors = []
        for st in source.states:
            spec = st.spectral()
            if spec.eigenvalues[0] < 1.0 - 1e-9:
                raise ValidationError("compression source must consist of pure states")
            vectors.append(spec.eigenvectors[:, 0])
        return source.probs.probs.copy(), vectors, source.average()
    raise ValidationError("source must be an Ensemble of pure states or a DensityOperator")


def schumacher_roundtrip(
    source,
    n: int,
    delta: float,
    rate_limit: float | None = None,
    cap: int = DEFAULT_BLOCK_CAP,
) -> SchumacherResult:
    """Compress n-signal blocks onto a typical subspace and score the fidelity.

    Encoding keeps the component of each block state inside the retained
    subspace; the atypical remainder is replaced by a fixed junk basis state
    inside the subspace.  The average fidelity then satisfies
    F >= 2*weight - 1, the usual guarantee when the retained weight is 1-eta.

    ``rate_limit`` (qubits per signal) forces truncation to the
    floor(2^(n*rate_limit)) largest block eigenvalues instead of the
    delta-window; pushing the rate below S - delta collapses the fidelity.
    """
    probs, vectors, rho = _ensemble_from_source(source)
    d = rho.dim
    k = len(vectors)
    if d**n > cap or k**n > cap:
        raise EnumerationCapError("block enumeration exceeds the configured cap")

    if rate_limit is None:
        sub = build_typical_subspace(rho, n, delta, cap=cap)
        strings = sub.strings
        basis = sub.eigenvectors
    else:
        keep = max(1, min(int(2.0 ** (n * rate_limit)), d**n))
        spec = rho.spectral()
        single = np.clip(spec.eigenvalues, 0.0, None)
        scored = sorted(
            (
                (-float(np.prod(single[list(combo)])), combo)
                for combo in product(range(d), repeat=n)
            ),
        )[:keep]
        strings = [combo for _, combo in scored]
        basis = spec.eigenvectors

    if not strings:
        raise ValidationError("retained subspace is empty; increase delta or the rate")

    # single-position overlap amplitudes <e_i | signal_j>
    sig = np.stack(vectors, axis=1)  # d x k
    olap = basis.conj().T @ sig  # <e_i|v_j>

    # q[a] = sum over retained strings of prod |<e_s|v_a>|^2, for every
    # signal string a; accumulate kron rows of the |olap|^2 matrix
    mag2 = np.abs(olap) ** 2
    q = np.zeros(k**n)
    for s in strings:
        row = np.ones(1)
        for ix in s:
            row = np.kron(row, mag2[ix, :])
        q += row

    # junk amplitude overlaps |<junk|a>|^2 with junk = first retained string
    junk = strings[0]
    junk_row = np.ones(1)
    for ix in junk:
        junk_row = np.kron(junk_row, mag2[ix, :])

    # block signal probabilities
    p_block = np.ones(1)
    for _ in range(n):
        p_block = np.kron(p_block, probs)

    fidelities = q**2 + (1.0 - q) * junk_row
    avg_f = float(np.dot(p_block, fidelities))
    weight = float(np.dot(p_block, q))  # equals Tr(rho^(x)n Pi)
    eta = 1.0 - weight
    if avg_f < 2.0 * weight - 1.0 - 1e-9:
        raise RuntimeError("fidelity fell below its compression guarantee")
    return SchumacherResult(
        avg_fidelity=avg_f,
        rate_qubits_per_signal=math.log2(len(strings)) / n,
        dimension=len(strings),
        weight=weight,
        eta=eta,
        n=n,
    )


# --------------------------------------------------------------------------
# Quantum error correction
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CodeSubspace:
    """Orthonormal codewords spanning a subspace of n qubits."""

    codewords: list  # StateVector entries

    def __post_init__(self):
        if not self.codewords:
            raise ValidationError("a code needs at least one codeword")
        dim = self.codewords[0].dim
        n = dim.bit_length() - 1
        if 2**n != dim:
            raise ValidationError("codewords must live on whole qubits")
        for i, u in enumerate(self.codewords):
            if u.dim != dim:
                raise ValidationError("codewords must share one dimension")
            for j, v in enumerate(self.codewords):
                target = 1.0 if i == j else 0.0
                if abs(abs(u.overlap(v)) - target) > 1e-10:
                    raise ValidationError("codewords must be orthonormal")

    @property
    def n_qubits(self) -> int:
        return self.codewords[0].dim.bit_length() - 1

    def to_json(self) -> dict:
        return {"codewords": [w.to_json()["amps"] for w in self.codewords]}

    @classmethod
    def from_json(cls, data) -> "CodeSubspace":
        return cls(
            [StateVector.from_json({"amps": a}) for a in data["codewords"]]
        )


@dataclass(frozen=True, eq=False)
class PauliErrorSet:
    """Errors as strings over I, X, Y, Z (one letter per qubit; Y = XZ)."""

    errors: list

    def __post_init__(self):
        if not self.errors:
            raise ValidationError("an error set needs at least one string")
        n = len(self.errors[0])
        for e in self.errors:
            if len(e) != n or any(c not in "IXYZ" for c in e):
                raise ValidationError(f"bad Pauli string {e!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.errors[0])

    @staticmethod
    def weight(error: str) -> int:
        return sum(c != "I" for c in error)

    @staticmethod
    def single_qubit(n: int, letter: str) -> "PauliErrorSet":
        """Identity plus every weight-1 error of one letter on n qubits."""
        errors = ["I" * n]
        for i in range(n):
            errors.append("I" * i + letter + "I" * (n - i - 1))
        return PauliErrorSet(errors)

    def to_json(self) -> dict:
        return {"errors": list(self.errors)}

    @classmethod
    def from_json(cls, data) -> "PauliErrorSet":
        return cls(list(data["errors"]))


def pauli_operator(error: str) -> np.ndarray:
    """Many-qubit operator for a Pauli string."""
    op = np.ones((1, 1), dtype=complex)
    for c in error:
        op = np.kron(op, _PAULI[c])
    return op


@dataclass(frozen=True)
class QeccCheckResult:
    correctable: bool
    witness: dict | None

    def __bool__(self) -> bool:
        return self.correctable


def qecc_check(code: CodeSubspace, errors: PauliErrorSet, tol: float = 1e-10) -> QeccCheckResult:
    """Decide whether the error set is correctable on the code subspace.

    For every pair of errors (M_s, M_t), distinct codewords must satisfy
    <u| M_s^+ M_t |v> = 0 and the diagonal values <u| M_s^+ M_t |u> must not
    depend on the codeword.  The first violated condition is returned as the
    witness.
    """
    if errors.n_qubits != code.n_qubits:
        raise ValidationError("error strings do not match the code's qubit count")
    words = [w.amps for w in code.codewords]
    ops = {e: pauli_operator(e) for e in errors.errors}
    for s in errors.errors:
        for t in errors.errors:
            m = ops[s].conj().T @ ops[t]
            diag = [complex(w.conj() @ m @ w) for w in words]
            for i, u in enumerate(words):
                for j, v in enumerate(words):
                    if i == j:
                        continue
                    val = complex(u.conj() @ m @ v)
                    if abs(val) > tol:
                        return QeccCheckResult(False, {
                            "condition": "off_diagonal",
                            "errors": (s, t),
                            "codewords": (i, j),
                            "value": val,
                        })
            spread = max(abs(x - diag[0]) for x in diag)
            if spread > tol:
                return QeccCheckResult(False, {
                    "condition": "codeword_dependence",
                    "errors": (s, t),
                    "values": diag,
                })
    return QeccCheckResult(True, None)


# --------------------------------------------------------------------------
# Three-qubit repetition code demo
# --------------------------------------------------------------------------

def repetition_code() -> CodeSubspace:
    """The |000>, |111> bit-flip code."""
    return CodeSubspace(
        [StateVector.basis(8, 0, dims=(2, 2, 2)), StateVector.basis(8, 7, dims=(2, 2, 2))]
    )


_SYNDROME_FLIP = {(1, 1): None, (-1, 1): 0, (-1, -1): 1, (1, -1): 2}
_CORRECTABLE = {"III", "XII", "IXI", "IIX"}


@dataclass(frozen=True)
class RepetitionRecovery:
    fidelity: float
    syndrome: tuple
    syndrome_probs: dict
    corrected: StateVector
    correctable: bool


def recovery_demo(alpha: complex, beta: complex, error: str = "III") -> RepetitionRecovery:
    """Encode a logical qubit in the repetition code, corrupt it, recover it.

    The syndrome is the pair of parities (Z1Z2, Z2Z3) measured projectively;
    the indicated qubit is flipped back.  Any single X error (or none) is
    corrected exactly; other errors are flagged and the surviving fidelity
    reported as-is.  The syndrome distribution carries no information about
    (alpha, beta).
    """
    if len(error) != 3 or any(c not in "IXYZ" for c in error):
        raise ValidationError("error must be a 3-letter Pauli string")
    norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    if norm < 1e-12:
        raise ValidationError("logical amplitudes cannot both vanish")
    alpha, beta = alpha / norm, beta / norm

    encoded = np.zeros(8, dtype=complex)
    encoded[0] = alpha
    encoded[7] = beta
    corrupted = pauli_operator(error) @ encoded

    z1z2 = pauli_operator("ZZI")
    z2z3 = pauli_operator("IZZ")
    probs = {}
    branches = {}
    for s1 in (1, -1):
        for s2 in (1, -1):
            p1 = (np.eye(8) + s1 * z1z2) / 2
            p2 = (np.eye(8) + s2 * z2z3) / 2
            branch = p2 @ p1 @ corrupted
            p = float(np.linalg.norm(branch) ** 2)
            probs[(s1, s2)] = p
            if p > 1e-12:
                branches[(s1, s2)] = branch / math.sqrt(p)

    # the corrupted state of a definite X error sits in one syndrome sector
    syndrome = max(probs, key=probs.get)
    branch = branches[syndrome]
    flip = _SYNDROME_FLIP[syndrome]
    if flip is not None:
        letters = ["I", "I", "I"]
        letters[flip] = "X"
        branch = pauli_operator("".join(letters)) @ branch
    corrected = StateVector(branch / np.linalg.norm(branch), dims=(2, 2, 2))
    fid = abs(np.vdot(encoded, corrected.amps)) ** 2
    return RepetitionRecovery(
        fidelity=float(fid),
        syndrome=syndrome,
        syndrome_probs={f"{k[0]},{k[1]}": v for k, v in probs.items()},
        corrected=corrected,
        correctable=error in _CORRECTABLE,
    )


def hamming_bound(n: int, t: int) -> float:
    """Largest k with k <= n - log2(sum of C(n, i) for i <= t)."""
    if not 0 <= t <= n:
        raise ValidationError("need 0 <= t <= n")
    total = sum(math.comb(n, i) for i in range(t + 1))
    return n - math.log2(total)
