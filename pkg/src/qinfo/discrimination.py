"""Ensembles, information bounds and state discrimination.

Holevo information and preparation information of signal ensembles, a
multi-start search lower-bounding the accessible information, the optimal
two-state error probability, classical Chernoff/overlap measures, and
zero-error (unambiguous) discrimination of linearly independent pure states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .dynamics import Povm
from .exceptions import DimensionMismatchError, ValidationError
from .probability import Distribution, JointDistribution, LogBase, mutual_information, shannon_entropy
from .rng import substream
from .states import DensityOperator, StateVector, trace_distance, von_neumann_entropy

__all__ = [
    "Ensemble",
    "DiscriminationProblem",
    "holevo_chi",
    "preparation_information",
    "povm_mutual_information",
    "AccessibleInfoResult",
    "accessible_information_search",
    "error_probability",
    "chernoff_bound",
    "classical_overlap",
    "UnambiguousDiscriminator",
    "unambiguous_discriminator",
]


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted list of signal states sharing one Hilbert space."""

    probs: Distribution
    states: list  # DensityOperator entries

    def __post_init__(self):
        if self.probs.size != len(self.states):
            raise ValidationError("need one probability per state")
        if not self.states:
            raise ValidationError("ensemble must contain at least one state")
        d = self.states[0].dim
        if any(s.dim != d for s in self.states):
            raise DimensionMismatchError("ensemble states must share one dimension")

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def average(self) -> DensityOperator:
        avg = sum(p * s.matrix for p, s in zip(self.probs.probs, self.states))
        return DensityOperator(avg)

    @staticmethod
    def from_state_vectors(probs, vectors) -> "Ensemble":
        states = [v.density() if isinstance(v, StateVector) else v for v in vectors]
        return Ensemble(Distribution(np.asarray(probs, dtype=float)), states)

    def to_json(self) -> dict:
        return {
            "probs": self.probs.to_json(),
            "states": [s.to_json()["matrix"] for s in self.states],
        }

    @classmethod
    def from_json(cls, data) -> "Ensemble":
        states = [DensityOperator.from_json({"matrix": m}) for m in data["states"]]
        return cls(Distribution.from_json(data["probs"]), states)


@dataclass(frozen=True, eq=False)
class DiscriminationProblem:
    """Two candidate states with prior weights."""

    priors: Distribution
    rho0: DensityOperator
    rho1: DensityOperator

    def __post_init__(self):
        if self.priors.size != 2:
            raise ValidationError("discrimination priors are a length-2 distribution")
        if self.rho0.dim != self.rho1.dim:
            raise DimensionMismatchError("states must share one dimension")


def holevo_chi(e: Ensemble, base=LogBase.BITS) -> float:
    """Holevo information S(avg) - sum_i p_i S(rho_i) of an ensemble."""
    avg_entropy = von_neumann_entropy(e.average(), base)
    member = sum(
        p * von_neumann_entropy(s, base) for p, s in zip(e.probs.probs, e.states)
    )
    return avg_entropy - member


def preparation_information(e: Ensemble, base=LogBase.BITS) -> float:
    """Entropy H(p) of the signal labels; never less than the Holevo information."""
    i_p = shannon_entropy(e.probs, base)
    if holevo_chi(e, base) > i_p + 1e-10:
        raise RuntimeError("Holevo information exceeded preparation information")
    return i_p


def povm_mutual_information(e: Ensemble, povm: Povm, base=LogBase.BITS) -> float:
    """Mutual information between the signal label and a POVM's outcome."""
    if povm.dim != e.dim:
        raise DimensionMismatchError("POVM does not match ensemble dimension")
    joint = np.zeros((len(e.states), povm.n_outcomes))
    for j, (p, s) in enumerate(zip(e.probs.probs, e.states)):
        for b, el in enumerate(povm.elements):
            joint[j, b] = p * max(np.trace(el @ s.matrix).real, 0.0)
    return mutual_information(JointDistribution(joint / joint.sum()), base)


@dataclass(frozen=True)
class AccessibleInfoResult:
    """Best lower bound found for the accessible information."""

    j_lower: float
    povm: Povm
    approximate: bool  # True when the local refinements hit their budget


def accessible_information_search(
    e: Ensemble,
    n_elements: int | None = None,
    restarts: int = 8,
    seed: int = 0,
    base=LogBase.BITS,
    max_dim: int = 4,
) -> AccessibleInfoResult:
    """Search over rank-1 POVMs for the most informative measurement.

    Parameterizes N unnormalized vectors (D <= N <= D^2 elements suffice for
    the optimum) and restores completeness by whitening with the inverse
    square root of their frame operator, then refines each start with a local
    simplex search.  Deterministic starts (average-state eigenbasis, the
    square-root measurement) are tried alongside seeded random ones, and each
    restart draws its own random substream.

    The result is a lower bound on the accessible information, never the
    accessible information itself; it is checked against the Holevo bound
    before being returned.
    """
    d = e.dim
    if d > max_dim:
        raise ValidationError(
            f"search supports dimensions up to {max_dim}; got {d}"
        )
    n = 2 * d if n_elements is None else int(n_elements)
    if not d <= n <= d * d:
        raise ValidationError("element count must lie between D and D^2")

    def params_to_povm(x: np.ndarray) -> Povm | None:
        vecs = x.reshape(n, 2, d)
        vecs = vecs[:, 0, :] + 1j * vecs[:, 1, :]
        frame = vecs.conj().T @ vecs  # sum of |v><v| transposed into D x D
        frame = frame.T
        vals, basis = np.linalg.eigh(frame)
        if vals.min() < 1e-10:
            return None
        whiten = (basis / np.sqrt(vals)) @ basis.conj().T
        els = []
        for v in vecs:
            w = whiten @ v
            els.append(np.outer(w, w.conj()))
        try:
            return Povm(els)
        except ValidationError:
            return None

    def objective(x: np.ndarray) -> float:
        povm = params_to_povm(x)
        if povm is None:
            return 1e6
        return -povm_mutual_information(e, povm, base)

    starts = []
    # eigenbasis of the average state, padded with repeated vectors
    basis = e.average().spectral().eigenvectors
    eig_vecs = [basis[:, i % d] * (1.0 if i < d else 1e-3) for i in range(n)]
    starts.append(_vectors_to_params(eig_vecs, d))
    # square-root measurement directions p_i sqrt(avg)^-1 rho_i sqrt(avg)^-1
    starts.append(_vectors_to_params(_srm_vectors(e, n), d))
    for r in range(restarts):
        rng = substream(seed, r + 1)
        starts.append(rng.standard_normal(n * 2 * d))

    best_val = math.inf
    best_povm = None
    exhausted = True
    for x0 in starts:
        res = optimize.minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"maxiter": 4000, "xatol": 1e-8, "fatol": 1e-10},
        )
        if res.fun < best_val and params_to_povm(res.x) is not None:
            best_val = res.fun
            best_povm = params_to_povm(res.x)
            exhausted = not res.success

    if best_povm is None:
        raise RuntimeError("no feasible POVM found during the search")
    j_lower = -best_val
    chi = holevo_chi(e, base)
    if j_lower > chi + 1e-9:
        raise RuntimeError("search exceeded the Holevo bound; numerical fault")
    return AccessibleInfoResult(j_lower=j_lower, povm=best_povm, approximate=exhausted)


def _vectors_to_params(vectors, d: int) -> np.ndarray:
    arr = np.stack([np.stack([v.real, v.imag]) for v in vectors])
    return arr.reshape(-1)


def _srm_vectors(e: Ensemble, n: int) -> list:
    vals, basis = np.linalg.eigh(e.average().matrix)
    vals = np.clip(vals, 1e-12, None)
    inv_root = (basis / np.sqrt(vals)) @ basis.conj().T
    vecs = []
    for i in range(n):
        p = e.probs.probs[i % len(e.states)]
        s = e.states[i % len(e.states)]
        top = s.spectral().eigenvectors[:, 0]
        v = math.sqrt(max(p, 1e-6)) * (inv_root @ top)
        vecs.append(v if i < len(e.states) else v * 1e-3)
    return vecs


def error_probability(p: DiscriminationProblem) -> float:
    """Minimum error probability for one-shot discrimination of two states.

    Equals (1 - ||pi0 rho0 - pi1 rho1||_tr) / 2, the best any measurement and
    guessing rule can do; 0 for orthogonal equiprobable states, min(pi0, pi1)
    for identical ones.
    """
    pi0, pi1 = p.priors.probs
    gap = pi0 * p.rho0.matrix - pi1 * p.rho1.matrix
    tr_norm = float(np.abs(np.linalg.eigvalsh(gap)).sum())
    return 0.5 * (1.0 - tr_norm)


def chernoff_bound(p0: Distribution, p1: Distribution, tol: float = 1e-12):
    """Asymptotic error exponent min_a sum p0^a p1^(1-a) with its minimizer.

    Returns (lambda, alpha_star); lambda = 1 iff the distributions coincide
    and 0 when their supports are disjoint.
    """
    if p0.size != p1.size:
        raise DimensionMismatchError("distributions live on different alphabets")
    common = (p0.probs > 0) & (p1.probs > 0)
    if not np.any(common):
        return 0.0, 0.5
    a = p0.probs[common]
    b = p1.probs[common]

    def g(alpha: float) -> float:
        return float(np.sum(a**alpha * b ** (1.0 - alpha)))

    res = optimize.minimize_scalar(g, bounds=(0.0, 1.0), method="bounded",
                                   options={"xatol": tol})
    candidates = [(g(0.0), 0.0), (g(1.0), 1.0), (float(res.fun), float(res.x))]
    lam, alpha = min(candidates)
    return lam, alpha


def classical_overlap(p0: Distribution, p1: Distribution) -> float:
    """Statistical overlap sum sqrt(p0 p1); 1 iff equal, 0 iff disjoint."""
    if p0.size != p1.size:
        raise DimensionMismatchError("distributions live on different alphabets")
    return float(np.sum(np.sqrt(p0.probs * p1.probs)))


@dataclass(frozen=True, eq=False)
class UnambiguousDiscriminator:
    """Zero-error discrimination POVM for linearly independent pure states.

    ``elements[j]`` fires only on state j; ``inconclusive`` absorbs the rest.
    ``success_probs[j]`` is the probability state j is identified.
    ``unscaled_feasible`` records whether the bare projectors already summed
    to at most the identity before any scaling.
    """

    elements: list
    inconclusive: np.ndarray
    success_probs: np.ndarray
    scales: np.ndarray
    unscaled_feasible: bool

    def as_povm(self) -> Povm:
        return Povm(self.elements + [self.inconclusive])


def unambiguous_discriminator(
    states: list, priors=None, tol: float = 1e-10
) -> UnambiguousDiscriminator:
    """Build and scale the zero-error discriminator for the given pure states.

    Element j is proportional to the projector onto the part of state j
    orthogonal to the span of all the others, so Tr(E_j |psi_k><psi_k|) = 0
    for k != j.  Scales start on the gradient ray of the average success
    probability and are pushed to the boundary where the inconclusive
    operator stays positive, then refined coordinatewise; ties settle onto
    equal per-state success.
    """
    vecs = [s.amps if isinstance(s, StateVector) else np.asarray(s, complex).ravel()
            for s in states]
    n = len(vecs)
    if n < 1:
        raise ValidationError("need at least one state")
    d = vecs[0].size
    if any(v.size != d for v in vecs):
        raise DimensionMismatchError("states must share one dimension")
    mat = np.stack(vecs, axis=1)  # columns are states
    gram = mat.conj().T @ mat
    if abs(np.linalg.det(gram)) <= 1e-10:
        raise ValidationError("states are linearly dependent; cannot discriminate")
    if priors is None:
        priors = Distribution.uniform(n)

    # restrict to the span of the states so each complement is 1-dimensional
    span = np.linalg.qr(mat)[0][:, :n]
    coords = span.conj().T @ mat  # states in span coordinates, n x n

    projectors = []
    for j in range(n):
        others = np.delete(coords, j, axis=1)
        q = np.linalg.qr(others)[0][:, : n - 1] if n > 1 else np.zeros((n, 0))
        comp = np.eye(n) - q @ q.conj().T
        vals, basis = np.linalg.eigh(comp)
        direction = basis[:, -1]  # the single unit vector orthogonal to the rest
        proj_small = np.outer(direction, direction.conj())
        projectors.append(span @ proj_small @ span.conj().T)

    detect = np.array(
        [max(np.real(np.vdot(vecs[j], projectors[j] @ vecs[j])), 0.0) for j in range(n)]
    )
    total = sum(projectors)
    unscaled_feasible = np.linalg.eigvalsh(np.eye(d) - total).min() >= -tol

    scales = _ascend_scales(projectors, priors.probs * detect, d)
    elements = [scales[j] * projectors[j] for j in range(n)]
    inconclusive = np.eye(d) - sum(elements)
    # clip the tiny negative dust so the POVM constructor accepts the result
    success = scales * detect
    for j in range(n):
        for k in range(n):
            if j != k:
                leak = abs(np.vdot(vecs[k], elements[j] @ vecs[k]))
                if leak > tol:
                    raise RuntimeError("unambiguous construction leaked probability")
    return UnambiguousDiscriminator(
        elements=elements,
        inconclusive=inconclusive,
        success_probs=success,
        scales=scales,
        unscaled_feasible=bool(unscaled_feasible),
    )


def _ascend_scales(projectors, weights, d, iters: int = 200) -> np.ndarray:
    """Projected ascent of sum_j w_j c_j over {c >= 0 : I - sum c_j P_j >= 0}."""
    n = len(projectors)
    w = np.asarray(weights, dtype=float)
    if np.all(w <= 0):
        w = np.ones(n)

    def feasible(c: np.ndarray) -> bool:
        m = np.eye(d) - sum(cj * pj for cj, pj in zip(c, projectors))
        return np.linalg.eigvalsh(m).min() >= -1e-12

    def max_step(c: np.ndarray, direction: np.ndarray) -> float:
        lo, hi = 0.0, 1.0
        while feasible(c + hi * direction) and hi < 2**20:
            lo, hi = hi, hi * 2
        for _ in range(60):
            mid = (lo + hi) / 2
            if feasible(c + mid * direction):
                lo = mid
            else:
                hi = mid
        return lo

    c = np.zeros(n)
    c = c + max_step(c, w) * w  # ray search along the gradient
    for _ in range(iters):
        moved = 0.0
        for j in range(n):
            e = np.zeros(n)
            e[j] = 1.0
            step = max_step(c, e)
            c = c + step * e
            moved += step
        if moved < 1e-12:
            break
    return np.minimum(c, 1e6)
