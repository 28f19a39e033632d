"""Seeded protocol simulations: BB84, E91, teleportation, superdense coding,
entanglement swapping and recurrence purification.

Every protocol samples exact Born-rule probabilities from round randomness
derived deterministically from (seed, round index), so transcripts are
bit-exact reproducible and portable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import KrausChannel
from .entanglement import (
    BELL_LABELS,
    BellLabel,
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    bell_vector,
    bxor_label_map,
    e91_axes,
    _spin_projectors,
)
from .exceptions import DimensionMismatchError, ValidationError
from .rng import round_uniforms, substream
from .states import DensityOperator, StateVector

__all__ = [
    "EveStrategy",
    "QkdTranscript",
    "bb84",
    "bb84_expected_qber",
    "ekert91",
    "TeleportResult",
    "teleport",
    "SuperdenseResult",
    "superdense_send",
    "SwapResult",
    "entanglement_swap",
    "purify_step_analytic",
    "purify_step_simulated",
    "PurificationRound",
    "PurificationRun",
    "run_purification",
    "CORRECTION_FOR_OUTCOME",
]

_CORRECTIONS = {
    PHI_PLUS: np.eye(2, dtype=complex),
    PHI_MINUS: PAULI_Z,
    PSI_PLUS: PAULI_X,
    PSI_MINUS: PAULI_Y,
}
CORRECTION_FOR_OUTCOME = _CORRECTIONS


# --------------------------------------------------------------------------
# Eavesdropping strategies
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EveStrategy:
    """What the eavesdropper does to each flying system.

    kind "none": the channel is perfect.
    kind "intercept_resend": Eve measures in a basis chosen per ``policy``
    ("random", "z", or "rotated") and resends the eigenstate she saw.
    kind "kraus": Eve applies a fixed channel (one qubit for BB84; one qubit
    or the whole pair for E91).
    """

    kind: str = "none"
    policy: str = "random"
    channel: KrausChannel | None = None

    def __post_init__(self):
        if self.kind not in ("none", "intercept_resend", "kraus"):
            raise ValidationError(f"unknown eavesdropping kind {self.kind!r}")
        if self.kind == "intercept_resend" and self.policy not in ("random", "z", "rotated"):
            raise ValidationError(f"unknown basis policy {self.policy!r}")
        if self.kind == "kraus":
            if self.channel is None:
                raise ValidationError("kraus strategy needs a channel")
            if self.channel.dim_in != self.channel.dim_out:
                raise ValidationError("attack channel must preserve dimension")

    @staticmethod
    def none() -> "EveStrategy":
        return EveStrategy("none")

    @staticmethod
    def intercept_resend(policy: str = "random") -> "EveStrategy":
        return EveStrategy("intercept_resend", policy=policy)

    @staticmethod
    def kraus_attack(channel: KrausChannel) -> "EveStrategy":
        return EveStrategy("kraus", channel=channel)


# --------------------------------------------------------------------------
# Transcripts
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QkdTranscript:
    """Per-round record of a key-distribution run plus derived statistics."""

    protocol: str
    seed: int
    alice_basis: np.ndarray
    bob_basis: np.ndarray
    alice_value: np.ndarray  # prepared bit (BB84) or measured bit (E91)
    bob_outcome: np.ndarray
    eve_note: np.ndarray  # -1 means no action recorded
    sifted_mask: np.ndarray = field(repr=False, default=None)
    sifted_key_alice: np.ndarray = field(repr=False, default=None)
    sifted_key_bob: np.ndarray = field(repr=False, default=None)
    qber: float = 0.0
    sift_fraction: float = 0.0
    chsh_estimate: float | None = None

    @property
    def n_rounds(self) -> int:
        return self.alice_basis.size

    def rounds(self):
        """Yield one JSON-ready dict per round."""
        for i in range(self.n_rounds):
            rec = {
                "round": i,
                "alice_basis": int(self.alice_basis[i]),
                "bob_basis": int(self.bob_basis[i]),
                "alice_value": int(self.alice_value[i]),
                "bob_outcome": int(self.bob_outcome[i]),
                "sifted": bool(self.sifted_mask[i]),
            }
            if self.eve_note[i] >= 0:
                rec["eve"] = int(self.eve_note[i])
            yield rec

    def summary(self) -> dict:
        out = {
            "protocol": self.protocol,
            "seed": self.seed,
            "rounds": self.n_rounds,
            "sifted_bits": int(self.sifted_mask.sum()),
            "sift_fraction": self.sift_fraction,
            "qber": self.qber,
            "key_alice": "".join(str(b) for b in self.sifted_key_alice[:64]),
            "key_bob": "".join(str(b) for b in self.sifted_key_bob[:64]),
        }
        if self.chsh_estimate is not None:
            out["chsh_estimate"] = self.chsh_estimate
        return out


def _finalize_transcript(protocol, seed, ab, bb, av, bo, eve, sifted, key_a, key_b, chsh=None):
    n_sift = int(sifted.sum())
    qber = float(np.mean(key_a != key_b)) if n_sift else 0.0
    return QkdTranscript(
        protocol=protocol,
        seed=seed,
        alice_basis=ab,
        bob_basis=bb,
        alice_value=av,
        bob_outcome=bo,
        eve_note=eve,
        sifted_mask=sifted,
        sifted_key_alice=key_a,
        sifted_key_bob=key_b,
        qber=qber,
        sift_fraction=n_sift / ab.size,
        chsh_estimate=chsh,
    )


# --------------------------------------------------------------------------
# BB84
# --------------------------------------------------------------------------

def _bb84_states(angle: float) -> np.ndarray:
    """Prepared states indexed [basis, value]; basis 1 is rotated by ``angle``."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array(
        [
            [[1.0, 0.0], [0.0, 1.0]],
            [[c, s], [-s, c]],
        ],
        dtype=complex,
    )


def bb84(
    n_rounds: int,
    eve: EveStrategy = EveStrategy.none(),
    seed: int = 0,
    basis_angle: float = math.pi / 4,
) -> QkdTranscript:
    """Run BB84 with exact Born sampling and an optional eavesdropper.

    Alice prepares random bits in the computational basis or in the basis
    rotated by ``basis_angle`` (default 45 degrees), Bob measures in a random
    basis, and the matched-basis rounds form the sifted key.  With no
    eavesdropper the sifted keys agree exactly.
    """
    if n_rounds < 1:
        raise ValidationError("need at least one round")
    states = _bb84_states(basis_angle)
    u = round_uniforms(seed, n_rounds, 6)
    alice_basis = (u[:, 0] < 0.5).astype(np.int8)
    alice_value = (u[:, 1] < 0.5).astype(np.int8)
    bob_basis = (u[:, 2] < 0.5).astype(np.int8)
    eve_note = np.full(n_rounds, -1, dtype=np.int8)

    if eve.kind == "none":
        # p0[b, v, m]: probability Bob reads 0 given preparation (b, v), basis m
        p0 = np.abs(np.einsum("mi,bvi->bvm", states[:, 0, :].conj(), states)) ** 2
        prob0 = p0[alice_basis, alice_value, bob_basis]
        bob_outcome = (u[:, 5] >= prob0).astype(np.int8)
    elif eve.kind == "intercept_resend":
        if eve.policy == "random":
            eve_basis = (u[:, 3] < 0.5).astype(np.int8)
        elif eve.policy == "z":
            eve_basis = np.zeros(n_rounds, dtype=np.int8)
        else:
            eve_basis = np.ones(n_rounds, dtype=np.int8)
        # Eve's outcome distribution, then Bob's given the resent eigenstate
        overlap_ea = np.abs(np.einsum("eoi,bvi->bveo", states.conj(), states)) ** 2
        p_eve0 = overlap_ea[alice_basis, alice_value, eve_basis, 0]
        eve_outcome = (u[:, 4] >= p_eve0).astype(np.int8)
        overlap_be = np.abs(np.einsum("mi,eoi->eom", states[:, 0, :].conj(), states)) ** 2
        prob0 = overlap_be[eve_basis, eve_outcome, bob_basis]
        bob_outcome = (u[:, 5] >= prob0).astype(np.int8)
        eve_note = eve_outcome
    else:  # kraus attack on the flying qubit
        if eve.channel.dim_in != 2:
            raise DimensionMismatchError("BB84 attack channel must act on one qubit")
        p0 = np.empty((2, 2, 2))
        for b in range(2):
            for v in range(2):
                rho = sum(
                    op @ np.outer(states[b, v], states[b, v].conj()) @ op.conj().T
                    for op in eve.channel.operators
                )
                for m in range(2):
                    vec = states[m, 0]
                    p0[b, v, m] = max(np.real(vec.conj() @ rho @ vec), 0.0)
        prob0 = p0[alice_basis, alice_value, bob_basis]
        bob_outcome = (u[:, 5] >= prob0).astype(np.int8)

    sifted = alice_basis == bob_basis
    key_a = alice_value[sifted]
    key_b = bob_outcome[sifted]
    return _finalize_transcript(
        "bb84", seed, alice_basis, bob_basis, alice_value, bob_outcome,
        eve_note, sifted, key_a, key_b,
    )


def bb84_expected_qber(eve: EveStrategy, basis_angle: float = math.pi / 4) -> float:
    """Exact expected QBER of a BB84 run under the given strategy."""
    states = _bb84_states(basis_angle)
    if eve.kind == "none":
        return 0.0
    total = 0.0
    for b in range(2):
        for v in range(2):
            psi = states[b, v]
            wrong = states[b, 1 - v]
            if eve.kind == "kraus":
                rho = sum(
                    op @ np.outer(psi, psi.conj()) @ op.conj().T
                    for op in eve.channel.operators
                )
                total += np.real(wrong.conj() @ rho @ wrong)
            else:
                bases = (0, 1) if eve.policy == "random" else (
                    (0,) if eve.policy == "z" else (1,)
                )
                for e in bases:
                    for o in range(2):
                        p_eve = abs(np.vdot(states[e, o], psi)) ** 2
                        p_flip = abs(np.vdot(wrong, states[e, o])) ** 2
                        total += p_eve * p_flip / len(bases)
    return total / 4.0


# --------------------------------------------------------------------------
# E91
# --------------------------------------------------------------------------

def ekert91(
    n_rounds: int,
    eve: EveStrategy = EveStrategy.none(),
    seed: int = 0,
) -> QkdTranscript:
    """Run the entangled-pair protocol on shared singlets.

    Both parties pick one of three axes per round; the two matched-axis
    combinations give perfectly anti-correlated key bits, and the rounds where
    both parties used their outer axes estimate the CHSH combination, which
    sits at -2*sqrt(2) for undisturbed singlets.
    """
    if n_rounds < 1:
        raise ValidationError("need at least one round")
    alice_axes, bob_axes = e91_axes()
    psi = bell_vector(PSI_MINUS)
    rho = np.outer(psi, psi.conj())
    if eve.kind == "kraus":
        ch = eve.channel
        if ch.dim_in == 2:
            ops = [np.kron(np.eye(2), op) for op in ch.operators]
        elif ch.dim_in == 4:
            ops = ch.operators
        else:
            raise DimensionMismatchError("E91 attack must act on a qubit or the pair")
        rho = sum(op @ rho @ op.conj().T for op in ops)
    elif eve.kind != "none":
        raise ValidationError("E91 supports only 'none' and 'kraus' strategies")

    # outcome distributions for each of the nine axis pairs
    cum = np.empty((3, 3, 4))
    for i in range(3):
        pa, ma = _spin_projectors(alice_axes[i])
        for j in range(3):
            pb, mb = _spin_projectors(bob_axes[j])
            probs = [
                max(np.real(np.trace(np.kron(x, y) @ rho)), 0.0)
                for x in (pa, ma)
                for y in (pb, mb)
            ]
            cum[i, j] = np.cumsum(np.array(probs) / sum(probs))

    u = round_uniforms(seed, n_rounds, 3)
    alice_basis = np.minimum((u[:, 0] * 3).astype(np.int8), 2)
    bob_basis = np.minimum((u[:, 1] * 3).astype(np.int8), 2)
    slot = (u[:, 2][:, None] >= cum[alice_basis, bob_basis]).sum(axis=1)
    alice_bit = (slot >= 2).astype(np.int8)  # 0 for "+", 1 for "-"
    bob_bit = (slot % 2).astype(np.int8)

    sifted = ((alice_basis == 1) & (bob_basis == 0)) | (
        (alice_basis == 2) & (bob_basis == 1)
    )
    key_a = alice_bit[sifted]
    key_b = 1 - bob_bit[sifted]  # outcomes anti-correlate; Bob flips his bit

    # CHSH estimate from the outer-axis rounds
    spin_a = 1.0 - 2.0 * alice_bit
    spin_b = 1.0 - 2.0 * bob_bit
    s = 0.0
    complete = True
    terms = {(0, 0): 1.0, (0, 2): -1.0, (2, 0): 1.0, (2, 2): 1.0}
    for (i, j), coeff in terms.items():
        mask = (alice_basis == i) & (bob_basis == j)
        if not mask.any():
            complete = False
            break
        s += coeff * float(np.mean(spin_a[mask] * spin_b[mask]))
    chsh = s if complete else None

    return _finalize_transcript(
        "e91", seed, alice_basis, bob_basis, alice_bit, bob_bit,
        np.full(n_rounds, -1, dtype=np.int8), sifted, key_a, key_b, chsh,
    )


# --------------------------------------------------------------------------
# Teleportation, superdense coding, entanglement swapping
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TeleportResult:
    outcome: BellLabel
    probabilities: dict
    bob_before: StateVector
    bob_after: StateVector
    fidelity: float


def teleport(
    mu: StateVector, outcome: BellLabel | None = None, seed: int = 0
) -> TeleportResult:
    """Teleport a qubit through a shared phi+ pair.

    Alice Bell-measures her half together with the input; Bob applies the
    outcome-indexed Pauli correction and ends up with the input state.  Fix
    ``outcome`` to follow one branch deterministically, or leave it None to
    sample one of the four equiprobable outcomes with the seed.
    """
    if mu.dim != 2:
        raise ValidationError("teleportation moves one qubit")
    shared = bell_vector(PHI_PLUS)
    # qubit order (A, B, C): shared pair on (A, B), input on C
    joint = np.kron(shared, mu.amps).reshape(2, 2, 2)

    amps = {}
    probs = {}
    for label in BELL_LABELS:
        bell_ac = bell_vector(label).reshape(2, 2)
        branch = np.einsum("ac,abc->b", bell_ac.conj(), joint)
        p = float(np.linalg.norm(branch) ** 2)
        amps[label] = branch
        probs[label] = p

    if outcome is None:
        u = substream(seed, 0).random()
        acc = 0.0
        for label in BELL_LABELS:
            acc += probs[label]
            if u < acc or label is BELL_LABELS[-1]:
                outcome = label
                break
    branch = amps[outcome]
    if np.linalg.norm(branch) < 1e-12:
        raise ValidationError("conditioning on a zero-probability outcome")
    before = StateVector(branch / np.linalg.norm(branch))
    after_amps = _CORRECTIONS[outcome] @ before.amps
    after = StateVector(after_amps / np.linalg.norm(after_amps))
    fid = abs(np.vdot(mu.amps, after.amps)) ** 2
    return TeleportResult(
        outcome=outcome,
        probabilities={l.name: probs[l] for l in BELL_LABELS},
        bob_before=before,
        bob_after=after,
        fidelity=float(fid),
    )


_MESSAGE_TO_LABEL = {
    (0, 0): PHI_PLUS,
    (0, 1): PSI_PLUS,
    (1, 0): PSI_MINUS,
    (1, 1): PHI_MINUS,
}
_MESSAGE_TO_PAULI = {
    (0, 0): np.eye(2, dtype=complex),
    (0, 1): PAULI_X,
    (1, 0): PAULI_Y,
    (1, 1): PAULI_Z,
}


@dataclass(frozen=True)
class SuperdenseResult:
    decoded: tuple
    probabilities: dict


def superdense_send(
    message: tuple,
    shared: DensityOperator | None = None,
    seed: int = 0,
) -> SuperdenseResult:
    """Send two classical bits through one qubit of a shared pair.

    Alice applies the message-indexed Pauli to her half, Bob Bell-measures
    both qubits.  With the ideal phi+ resource every message decodes with
    probability one; a degraded resource gives the Born distribution instead,
    and the decoded message is sampled from it.
    """
    message = (int(message[0]), int(message[1]))
    if message not in _MESSAGE_TO_PAULI:
        raise ValidationError("message must be two bits")
    if shared is None:
        v = bell_vector(PHI_PLUS)
        rho = np.outer(v, v.conj())
    else:
        if shared.dim != 4:
            raise DimensionMismatchError("shared resource must be two qubits")
        rho = shared.matrix
    u_a = np.kron(_MESSAGE_TO_PAULI[message], np.eye(2))
    rho = u_a @ rho @ u_a.conj().T

    label_probs = {}
    for bits, label in _MESSAGE_TO_LABEL.items():
        v = bell_vector(label)
        label_probs[bits] = max(float(np.real(v.conj() @ rho @ v)), 0.0)
    total = sum(label_probs.values())
    ordered = sorted(label_probs)
    cum = 0.0
    decoded = ordered[-1]
    u = substream(seed, 0).random()
    for bits in ordered:
        cum += label_probs[bits] / total
        if u < cum:
            decoded = bits
            break
    return SuperdenseResult(
        decoded=decoded,
        probabilities={f"{b0}{b1}": p / total for (b0, b1), p in label_probs.items()},
    )


@dataclass(frozen=True)
class SwapResult:
    bc_outcome: BellLabel
    probabilities: dict
    ad_before: StateVector
    ad_after: StateVector


def entanglement_swap(
    outcome: BellLabel | None = None, seed: int = 0
) -> SwapResult:
    """Project two independent phi+ pairs into entanglement between strangers.

    A Bell measurement on the inner qubits (B, C) leaves the outer pair (A, D)
    in the Bell state matching the outcome, each with probability 1/4; a local
    rotation on A then restores phi+.
    """
    v = bell_vector(PHI_PLUS)
    joint = np.kron(v, v).reshape(2, 2, 2, 2)  # (A, B, C, D)

    amps = {}
    probs = {}
    for label in BELL_LABELS:
        bell_bc = bell_vector(label).reshape(2, 2)
        branch = np.einsum("bc,abcd->ad", bell_bc.conj(), joint)
        amps[label] = branch.reshape(4)
        probs[label] = float(np.linalg.norm(branch) ** 2)

    if outcome is None:
        u = substream(seed, 0).random()
        acc = 0.0
        for label in BELL_LABELS:
            acc += probs[label]
            if u < acc or label is BELL_LABELS[-1]:
                outcome = label
                break
    branch = amps[outcome]
    before = StateVector(branch / np.linalg.norm(branch), dims=(2, 2))
    correction = np.kron(_CORRECTIONS[outcome], np.eye(2))
    after_amps = correction @ before.amps
    after = StateVector(after_amps / np.linalg.norm(after_amps), dims=(2, 2))
    return SwapResult(
        bc_outcome=outcome,
        probabilities={l.name: probs[l] for l in BELL_LABELS},
        ad_before=before,
        ad_after=after,
    )


# --------------------------------------------------------------------------
# Recurrence purification
# --------------------------------------------------------------------------

def purify_step_analytic(f: float) -> tuple:
    """One recurrence step on Werner pairs: returns (F_next, p_pass).

    p_pass = F^2 + (2/3)F(1-F) + (5/9)(1-F)^2 and the passing pairs jump to
    F' = (F^2 + (1-F)^2/9) / p_pass; F' > F on 1/2 < F < 1, with fixed points
    at F = 1/4 and F = 1.
    """
    if not 0.0 <= f <= 1.0:
        raise ValidationError("fidelity must lie in [0, 1]")
    g = 1.0 - f
    p_pass = f * f + 2.0 * f * g / 3.0 + 5.0 * g * g / 9.0
    f_next = (f * f + g * g / 9.0) / p_pass
    return f_next, p_pass


def _werner_label_weights(f: float) -> np.ndarray:
    return np.array(
        [f if l == PHI_PLUS else (1.0 - f) / 3.0 for l in BELL_LABELS]
    )


def _bxor_keep_and_source() -> tuple:
    """Index tables for the label-level recurrence step.

    keep[s, t] is True when the bilateral CNOT leaves the target pair in a
    phi state (local target measurements agree), and source[s, t] is the
    post-operation source label index.
    """
    table = bxor_label_map()
    keep = np.zeros((4, 4), dtype=bool)
    source = np.zeros((4, 4), dtype=np.int8)
    for i, s in enumerate(BELL_LABELS):
        for j, t in enumerate(BELL_LABELS):
            s2, t2 = table[(s, t)]
            keep[i, j] = t2.amplitude_bit == 1
            source[i, j] = BELL_LABELS.index(s2)
    return keep, source


def purify_step_simulated(f: float, n_pairs: int, seed: int = 0) -> tuple:
    """Monte-Carlo recurrence step on ``n_pairs`` Werner pairs.

    Pairs are classical mixtures of Bell states (twirling licenses this
    bookkeeping), consumed two at a time: bilateral CNOT, local measurement
    of the target pair's amplitude bit, post-selection on agreement.  Returns
    (empirical F_next, empirical p_pass, surviving source-pair count).
    """
    if n_pairs < 2 or n_pairs % 2:
        raise ValidationError("need an even number of pairs, at least two")
    if not 0.0 <= f <= 1.0:
        raise ValidationError("fidelity must lie in [0, 1]")
    weights = _werner_label_weights(f)
    labels = substream(seed, 0).choice(4, size=n_pairs, p=weights)
    keep, source = _bxor_keep_and_source()
    src, tgt = labels[0::2], labels[1::2]
    kept = keep[src, tgt]
    survivors = source[src, tgt][kept]
    n_out = int(survivors.size)
    p_pass = n_out / (n_pairs // 2)
    phi_plus_ix = BELL_LABELS.index(PHI_PLUS)
    f_next = float(np.mean(survivors == phi_plus_ix)) if n_out else 0.0
    return f_next, p_pass, n_out


@dataclass(frozen=True)
class PurificationRound:
    fidelity: float
    p_pass: float
    pairs_remaining: float


@dataclass(frozen=True)
class PurificationRun:
    initial_fidelity: float
    mode: str
    rounds: list


def run_purification(
    f0: float,
    n_rounds: int,
    mode: str = "analytic",
    n_pairs: int = 0,
    seed: int = 0,
) -> PurificationRun:
    """Iterate the recurrence from fidelity ``f0``.

    Analytic mode applies the exact recursion and tracks the expected pair
    count (halved, then thinned by p_pass, each round).  Simulated mode keeps
    an explicit pool of Bell labels: each round re-twirls the pool, pairs
    consecutive survivors, and carries any odd leftover into the next round.
    """
    if n_rounds < 0:
        raise ValidationError("round count must be non-negative")
    rounds = []
    if mode == "analytic":
        f = f0
        pairs = float(n_pairs) if n_pairs else 1.0
        for _ in range(n_rounds):
            f, p = purify_step_analytic(f)
            pairs = pairs / 2.0 * p
            rounds.append(PurificationRound(f, p, pairs))
        return PurificationRun(f0, "analytic", rounds)
    if mode != "simulated":
        raise ValidationError(f"unknown purification mode {mode!r}")
    if n_pairs < 2:
        raise ValidationError("simulated mode needs an initial pool of pairs")

    keep, source = _bxor_keep_and_source()
    phi_plus_ix = BELL_LABELS.index(PHI_PLUS)
    pool = substream(seed, 0).choice(4, size=n_pairs, p=_werner_label_weights(f0))
    for r in range(1, n_rounds + 1):
        if pool.size < 2:
            break
        rng = substream(seed, r)
        # twirl at the label level: non-phi+ labels scatter uniformly over
        # the three non-phi+ labels, the phi+ weight is untouched
        scatter = pool != phi_plus_ix
        others = [i for i in range(4) if i != phi_plus_ix]
        pool = pool.copy()
        pool[scatter] = rng.choice(others, size=int(scatter.sum()))
        n_use = pool.size - (pool.size % 2)
        src, tgt = pool[0:n_use:2], pool[1:n_use:2]
        kept_mask = keep[src, tgt]
        survivors = source[src, tgt][kept_mask]
        leftover = pool[n_use:]
        p_pass = float(kept_mask.mean()) if src.size else 0.0
        pool = np.concatenate([survivors, leftover]).astype(pool.dtype)
        f_emp = float(np.mean(pool == phi_plus_ix)) if pool.size else 0.0
        rounds.append(PurificationRound(f_emp, p_pass, float(pool.size)))
    return PurificationRun(f0, "simulated", rounds)
