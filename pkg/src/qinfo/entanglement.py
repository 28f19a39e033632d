"""Bell-basis algebra, entanglement measures, Werner states and CHSH values.

The unilateral/bilateral operation table used by entanglement purification
lives here: Pauli rotations by one party, matched pi/2 rotations by both, and
the bilateral CNOT acting pairwise across two shared pairs.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, ValidationError
from .probability import LogBase
from .rng import substream
from .states import (
    DensityOperator,
    StateVector,
    schmidt_decompose,
    von_neumann_entropy,
)
from .probability import Distribution, shannon_entropy

__all__ = [
    "BellLabel",
    "BELL_LABELS",
    "bell_state",
    "entanglement_entropy",
    "is_separable_pure",
    "pair_op_unitary",
    "apply_pair_op",
    "WernerState",
    "werner_density",
    "fidelity_to_phi_plus",
    "twirl",
    "ChshSetting",
    "chsh_value",
    "E91_SETTING",
    "e91_axes",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]])
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_PAULIS = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}


@dataclass(frozen=True)
class BellLabel:
    """Two-bit name of a Bell state: amplitude bit (psi=0, phi=1), phase bit (+=0, -=1)."""

    amplitude_bit: int
    phase_bit: int

    def __post_init__(self):
        if self.amplitude_bit not in (0, 1) or self.phase_bit not in (0, 1):
            raise ValidationError("Bell label bits must be 0 or 1")

    @property
    def name(self) -> str:
        letter = "phi" if self.amplitude_bit else "psi"
        sign = "minus" if self.phase_bit else "plus"
        return f"{letter}_{sign}"

    @classmethod
    def from_name(cls, name: str) -> "BellLabel":
        key = name.strip().lower().replace("-", "_").replace("+", "_plus")
        table = {
            "phi_plus": (1, 0),
            "psi_plus": (0, 0),
            "phi_minus": (1, 1),
            "psi_minus": (0, 1),
        }
        if key not in table:
            raise ValidationError(f"unknown Bell label {name!r}")
        return cls(*table[key])


PHI_PLUS = BellLabel(1, 0)
PSI_PLUS = BellLabel(0, 0)
PHI_MINUS = BellLabel(1, 1)
PSI_MINUS = BellLabel(0, 1)
BELL_LABELS = (PHI_PLUS, PSI_PLUS, PHI_MINUS, PSI_MINUS)


def bell_state(label: BellLabel) -> StateVector:
    """The Bell basis vector for a label, on two qubits."""
    amps = np.zeros(4, dtype=complex)
    sign = -1.0 if label.phase_bit else 1.0
    if label.amplitude_bit:  # phi states: |00> +- |11>
        amps[0], amps[3] = 1.0, sign
    else:  # psi states: |01> +- |10>
        amps[1], amps[2] = 1.0, sign
    return StateVector(amps / math.sqrt(2.0), dims=(2, 2))


def bell_vector(label: BellLabel) -> np.ndarray:
    return bell_state(label).amps


def entanglement_entropy(psi: StateVector, split=None, base=LogBase.BITS) -> float:
    """Entropy of either reduction of a bipartite pure state, in ebits by default."""
    form = schmidt_decompose(psi, split)
    lam = np.clip(form.coefficients**2, 0.0, None)
    lam = lam / lam.sum()
    return shannon_entropy(Distribution(lam), base)


def is_separable_pure(psi: StateVector, split=None, tol: float = 1e-9) -> bool:
    """A bipartite pure state is separable iff its Schmidt number is 1."""
    return schmidt_decompose(psi, split, clip=tol).schmidt_number == 1


# --------------------------------------------------------------------------
# Unilateral and bilateral pair operations
# --------------------------------------------------------------------------

def _rotation(axis: str) -> np.ndarray:
    """Single-qubit pi/2 rotation about a Pauli axis."""
    sigma = _PAULIS[axis]
    return (np.eye(2) - 1j * sigma) / math.sqrt(2.0)


def _cnot() -> np.ndarray:
    m = np.eye(4, dtype=complex)
    m[[2, 3]] = m[[3, 2]]
    return m


def pair_op_unitary(op: str) -> np.ndarray:
    """Unitary for a pair operation.

    Two-qubit ops act on one shared pair ordered (Alice, Bob):
    "sigma_x" / "sigma_y" / "sigma_z" are unilateral Pauli rotations on
    Alice's qubit, "bx" / "by" / "bz" are matched pi/2 rotations by both
    parties.  "bxor" acts on two pairs ordered (A1, B1, A2, B2), with pair 1
    as source: Alice applies CNOT A1->A2 and Bob applies CNOT B1->B2.
    """
    key = op.lower()
    if key in ("sigma_x", "sigma_y", "sigma_z"):
        return np.kron(_PAULIS[key[-1]], np.eye(2))
    if key in ("bx", "by", "bz"):
        r = _rotation(key[-1])
        return np.kron(r, r)
    if key == "bxor":
        cnot = _cnot()
        # reorder (A1, A2) and (B1, B2) CNOTs onto qubit order (A1, B1, A2, B2)
        u = np.eye(16, dtype=complex)
        u = _embed_two_qubit(cnot, 0, 2, 4) @ _embed_two_qubit(cnot, 1, 3, 4)
        return u
    raise ValidationError(f"unknown pair operation {op!r}")


def _embed_two_qubit(gate: np.ndarray, q_control: int, q_target: int, n: int) -> np.ndarray:
    """Embed a two-qubit gate acting on the given qubit slots of an n-qubit space."""
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub_in = 2 * bits[q_control] + bits[q_target]
        for sub_out in range(4):
            amp = gate[sub_out, sub_in]
            if amp == 0:
                continue
            new_bits = list(bits)
            new_bits[q_control] = sub_out >> 1
            new_bits[q_target] = sub_out & 1
            row = 0
            for b in new_bits:
                row = (row << 1) | b
            out[row, col] += amp
    return out


def apply_pair_op(state: DensityOperator, op: str) -> DensityOperator:
    """Apply a pair operation to a 2-qubit state (or 4-qubit state for bxor)."""
    u = pair_op_unitary(op)
    if state.dim != u.shape[0]:
        raise DimensionMismatchError(
            f"operation {op!r} needs dimension {u.shape[0]}, state has {state.dim}"
        )
    return DensityOperator(u @ state.matrix @ u.conj().T, dims=state.dims)


def classify_bell(psi: np.ndarray, tol: float = 1e-9) -> BellLabel | None:
    """Identify a 4-dim vector as a Bell state up to global phase."""
    for label in BELL_LABELS:
        if abs(abs(np.vdot(bell_vector(label), psi)) - 1.0) < tol:
            return label
    return None


@functools.cache
def bxor_label_map() -> dict:
    """Exact Bell-label bookkeeping of the bilateral CNOT.

    Maps (source_label, target_label) to (source_label', target_label'),
    derived from the unitary itself; global phases are discarded.
    """
    u = pair_op_unitary("bxor")
    table = {}
    for src in BELL_LABELS:
        for tgt in BELL_LABELS:
            joint = np.kron(bell_vector(src), bell_vector(tgt))
            # reorder (A1,B1)(A2,B2) -> (A1,B1,A2,B2) is already the layout
            out = u @ joint
            found = _classify_bell_pair(out)
            if found is None:
                raise RuntimeError("bilateral CNOT left the Bell-pair basis")
            table[(src, tgt)] = found
    return table


def _classify_bell_pair(vec: np.ndarray, tol: float = 1e-9):
    for src in BELL_LABELS:
        for tgt in BELL_LABELS:
            ref = np.kron(bell_vector(src), bell_vector(tgt))
            if abs(abs(np.vdot(ref, vec)) - 1.0) < tol:
                return (src, tgt)
    return None


# --------------------------------------------------------------------------
# Werner states and twirling
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WernerState:
    """Bell-diagonal two-qubit state with weight F on phi+ and the rest equal."""

    fidelity: float

    def __post_init__(self):
        if not 0.0 <= self.fidelity <= 1.0:
            raise ValidationError("Werner fidelity must lie in [0, 1]")

    def density(self) -> DensityOperator:
        return werner_density(self.fidelity)


def werner_density(f: float) -> DensityOperator:
    """Werner-form density: F on phi+, (1-F)/3 on each other Bell projector."""
    if not 0.0 <= f <= 1.0:
        raise ValidationError("Werner fidelity must lie in [0, 1]")
    m = np.zeros((4, 4), dtype=complex)
    for label in BELL_LABELS:
        weight = f if label == PHI_PLUS else (1.0 - f) / 3.0
        v = bell_vector(label)
        m += weight * np.outer(v, v.conj())
    return DensityOperator(m, dims=(2, 2))


def fidelity_to_phi_plus(rho: DensityOperator) -> float:
    """Overlap <phi+| rho |phi+>."""
    if rho.dim != 4:
        raise DimensionMismatchError("need a two-qubit state")
    v = bell_vector(PHI_PLUS)
    return float(np.real(v.conj() @ rho.matrix @ v))


@functools.cache
def _twirl_unitaries() -> tuple:
    """The two-qubit unitaries averaged by the twirl.

    Composites of the bilateral pi/2 rotations close (up to phase) into the
    24-element single-qubit Clifford group; applying them bilaterally and
    conjugating by a unilateral sigma_y swaps the roles of psi- and phi+, so
    the average fixes the phi+ weight and scrambles everything else.
    """
    gens = [_rotation(a) for a in "xyz"]
    cliffords = [np.eye(2, dtype=complex)]

    def canon(m: np.ndarray) -> bytes:
        ix = np.argmax(np.abs(m) > 1e-8)
        phase = m.flat[ix] / abs(m.flat[ix])
        rounded = np.round(m / phase, 8) + 0.0  # collapse -0.0 onto 0.0
        return rounded.tobytes()

    seen = {canon(cliffords[0])}
    frontier = list(cliffords)
    while frontier:
        new_frontier = []
        for m in frontier:
            for g in gens:
                cand = g @ m
                key = canon(cand)
                if key not in seen:
                    seen.add(key)
                    cliffords.append(cand)
                    new_frontier.append(cand)
        frontier = new_frontier
    if len(cliffords) != 24:
        raise RuntimeError(f"Clifford closure found {len(cliffords)} elements")
    w = np.kron(PAULI_Y, np.eye(2))
    return tuple(w.conj().T @ np.kron(c, c) @ w for c in cliffords)


def twirl(
    rho: DensityOperator,
    mode: str = "exact_projection",
    seed: int = 0,
    samples: int = 100_000,
) -> DensityOperator:
    """Average a two-qubit state into Werner form.

    "exact_projection" projects onto the Bell-diagonal algebra and equalizes
    the three non-phi+ weights, preserving <phi+|rho|phi+> exactly.
    "monte_carlo" draws ``samples`` random elements of the discrete twirl set
    (bilateral pi/2-rotation composites conjugated so phi+ is the fixed
    state) and averages their conjugation action; it converges to the exact
    projection at the usual 1/sqrt(samples) rate.
    """
    if rho.dim != 4:
        raise DimensionMismatchError("twirl acts on two-qubit states")
    if mode == "exact_projection":
        return werner_density(min(max(fidelity_to_phi_plus(rho), 0.0), 1.0))
    if mode == "monte_carlo":
        unitaries = _twirl_unitaries()
        counts = np.bincount(
            substream(seed, 0).integers(len(unitaries), size=samples),
            minlength=len(unitaries),
        )
        acc = np.zeros((4, 4), dtype=complex)
        for count, u in zip(counts, unitaries):
            if count:
                acc += count * (u @ rho.matrix @ u.conj().T)
        acc /= samples
        acc = (acc + acc.conj().T) / 2
        return DensityOperator(acc, dims=(2, 2))
    raise ValidationError(f"unknown twirl mode {mode!r}")


# --------------------------------------------------------------------------
# CHSH correlations
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ChshSetting:
    """Two measurement axes per party, as unit 3-vectors."""

    alice_axes: np.ndarray  # shape (2, 3)
    bob_axes: np.ndarray  # shape (2, 3)

    def __post_init__(self):
        a = np.asarray(self.alice_axes, dtype=float)
        b = np.asarray(self.bob_axes, dtype=float)
        if a.shape != (2, 3) or b.shape != (2, 3):
            raise ValidationError("each party needs exactly two 3-vector axes")
        if np.any(np.abs(np.linalg.norm(a, axis=1) - 1) > 1e-9) or np.any(
            np.abs(np.linalg.norm(b, axis=1) - 1) > 1e-9
        ):
            raise ValidationError("measurement axes must be unit vectors")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "alice_axes", a)
        object.__setattr__(self, "bob_axes", b)

    def to_json(self) -> dict:
        return {
            "alice": [[float(x) for x in ax] for ax in self.alice_axes],
            "bob": [[float(x) for x in ax] for ax in self.bob_axes],
        }

    @classmethod
    def from_json(cls, data) -> "ChshSetting":
        return cls(np.asarray(data["alice"], float), np.asarray(data["bob"], float))


def _axis_from_plane_angle(theta: float) -> np.ndarray:
    """Unit vector at angle theta from z toward x, in the x-z plane."""
    return np.array([math.sin(theta), 0.0, math.cos(theta)])


def e91_axes() -> tuple:
    """The three-basis configuration: Alice at 0/45/90 degrees, Bob at 45/90/135."""
    alice = [_axis_from_plane_angle(t) for t in (0.0, math.pi / 4, math.pi / 2)]
    bob = [_axis_from_plane_angle(t) for t in (math.pi / 4, math.pi / 2, 3 * math.pi / 4)]
    return np.array(alice), np.array(bob)


def _e91_chsh_setting() -> ChshSetting:
    alice, bob = e91_axes()
    return ChshSetting(alice[[0, 2]], bob[[0, 2]])


E91_SETTING = _e91_chsh_setting()


def _spin_projectors(axis: np.ndarray) -> tuple:
    sigma = axis[0] * PAULI_X + axis[1] * PAULI_Y + axis[2] * PAULI_Z
    plus = (np.eye(2) + sigma) / 2
    minus = (np.eye(2) - sigma) / 2
    return plus, minus


def correlation(rho: DensityOperator, axis_a: np.ndarray, axis_b: np.ndarray) -> float:
    """E(a, b) = P++ + P-- - P+- - P-+ for spin measurements along two axes."""
    pa, ma = _spin_projectors(np.asarray(axis_a, float))
    pb, mb = _spin_projectors(np.asarray(axis_b, float))
    obs = np.kron(pa - ma, pb - mb)
    return float(np.real(np.trace(obs @ rho.matrix)))


def chsh_value(rho: DensityOperator, setting: ChshSetting = E91_SETTING) -> float:
    """CHSH combination S = E(0,0) - E(0,1) + E(1,0) + E(1,1) from exact Born rules.

    |S| <= 2 for every product state; the quantum bound 2*sqrt(2) is asserted
    as an internal sanity check.
    """
    if rho.dim != 4:
        raise DimensionMismatchError("CHSH needs a two-qubit state")
    e = lambda i, j: correlation(rho, setting.alice_axes[i], setting.bob_axes[j])
    s = e(0, 0) - e(0, 1) + e(1, 0) + e(1, 1)
    if abs(s) > 2 * math.sqrt(2.0) + 1e-9:
        raise RuntimeError("CHSH value exceeded the quantum bound; numerical fault")
    return float(s)
