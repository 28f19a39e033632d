"""Classical probability, entropy functionals and channel capacity.

Finite distributions and memoryless channels, the Shannon entropy family,
closed-form and numerically optimized channel capacities, exhaustive typical
sets, and a seeded Monte-Carlo demonstration of reliable transmission below
capacity with random block codes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    EnumerationCapError,
    ValidationError,
)
from .rng import substream

__all__ = [
    "LogBase",
    "Distribution",
    "JointDistribution",
    "DiscreteChannel",
    "shannon_entropy",
    "conditional_entropy",
    "mutual_information",
    "kl_divergence",
    "bayes_posterior",
    "binary_entropy",
    "binary_symmetric_channel",
    "ternary_channel",
    "noiseless_channel",
    "channel_capacity_closed",
    "channel_capacity_numeric",
    "typical_set",
    "noisy_coding_demo",
    "DEFAULT_ENUM_CAP",
]

_SUM_TOL = 1e-12
DEFAULT_ENUM_CAP = 2**20


class LogBase(str, Enum):
    """Information unit: base-2 logarithms (bits) or natural logarithms (nats)."""

    BITS = "bits"
    NATS = "nats"

    @property
    def log(self):
        return np.log2 if self is LogBase.BITS else np.log

    def convert_from_nats(self, value: float) -> float:
        return value / math.log(2.0) if self is LogBase.BITS else value


def _as_base(base) -> LogBase:
    if isinstance(base, LogBase):
        return base
    try:
        return LogBase(str(base).lower())
    except ValueError:
        raise ValidationError(f"unknown log base {base!r}; use 'bits' or 'nats'") from None


def _plogp(probs: np.ndarray, base: LogBase) -> float:
    """Negative sum of p log p with the 0 log 0 := 0 convention."""
    p = probs[probs > 0]
    return float(-np.sum(p * base.log(p)))


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector over a finite alphabet."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValidationError("a distribution is a non-empty 1-D vector")
        if np.any(p < 0):
            raise ValidationError("probabilities must be non-negative")
        if abs(p.sum() - 1.0) > _SUM_TOL:
            raise ValidationError(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def size(self) -> int:
        return self.probs.size

    @staticmethod
    def uniform(n: int) -> "Distribution":
        return Distribution(np.full(n, 1.0 / n))

    def to_json(self) -> list:
        return [float(x) for x in self.probs]

    @classmethod
    def from_json(cls, data) -> "Distribution":
        return cls(np.asarray(data, dtype=float))


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint probability matrix p(a, b) with valid marginals."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 2 or p.size < 1:
            raise ValidationError("a joint distribution is a 2-D matrix")
        if np.any(p < 0):
            raise ValidationError("probabilities must be non-negative")
        if abs(p.sum() - 1.0) > _SUM_TOL:
            raise ValidationError(f"probabilities sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def marginal_a(self) -> Distribution:
        return Distribution(self.probs.sum(axis=1))

    def marginal_b(self) -> Distribution:
        return Distribution(self.probs.sum(axis=0))

    @staticmethod
    def from_product(pa: Distribution, pb: Distribution) -> "JointDistribution":
        return JointDistribution(np.outer(pa.probs, pb.probs))

    def to_json(self) -> list:
        return [[float(x) for x in row] for row in self.probs]

    @classmethod
    def from_json(cls, data) -> "JointDistribution":
        return cls(np.asarray(data, dtype=float))


@dataclass(frozen=True, eq=False)
class DiscreteChannel:
    """Memoryless channel given by a row-stochastic matrix p(y|x)."""

    transitions: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.transitions, dtype=float)
        if t.ndim != 2 or t.size < 1:
            raise ValidationError("channel transitions form a 2-D matrix")
        if np.any(t < 0):
            raise ValidationError("transition probabilities must be non-negative")
        if np.any(np.abs(t.sum(axis=1) - 1.0) > _SUM_TOL):
            raise ValidationError("every channel row must sum to 1")
        t.setflags(write=False)
        object.__setattr__(self, "transitions", t)

    @property
    def n_inputs(self) -> int:
        return self.transitions.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.transitions.shape[1]

    def joint(self, input_dist: Distribution) -> JointDistribution:
        """Joint distribution p(x, y) induced by an input distribution."""
        if input_dist.size != self.n_inputs:
            raise DimensionMismatchError("input distribution does not match channel")
        return JointDistribution(input_dist.probs[:, None] * self.transitions)

    def to_json(self) -> list:
        return [[float(x) for x in row] for row in self.transitions]

    @classmethod
    def from_json(cls, data) -> "DiscreteChannel":
        return cls(np.asarray(data, dtype=float))


def shannon_entropy(p: Distribution, base=LogBase.BITS) -> float:
    """Entropy -sum p log p of a distribution, in bits or nats."""
    return _plogp(p.probs, _as_base(base))


def binary_entropy(p: float, base=LogBase.BITS) -> float:
    """Entropy of a coin with heads probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError("binary entropy needs 0 <= p <= 1")
    return shannon_entropy(Distribution(np.array([p, 1.0 - p])), base)


def conditional_entropy(j: JointDistribution, base=LogBase.BITS) -> float:
    """H(B|A) = H(A,B) - H(A) for a joint distribution on A x B."""
    b = _as_base(base)
    return _plogp(j.probs.ravel(), b) - _plogp(j.marginal_a().probs, b)


def mutual_information(j: JointDistribution, base=LogBase.BITS) -> float:
    """I(A:B) = H(A) + H(B) - H(A,B); zero iff the joint is a product."""
    b = _as_base(base)
    h_a = _plogp(j.marginal_a().probs, b)
    h_b = _plogp(j.marginal_b().probs, b)
    h_ab = _plogp(j.probs.ravel(), b)
    return h_a + h_b - h_ab


def kl_divergence(p: Distribution, q: Distribution, base=LogBase.BITS) -> float:
    """Relative information D(p||q); +inf where p puts mass outside supp(q)."""
    if p.size != q.size:
        raise DimensionMismatchError("distributions live on different alphabets")
    b = _as_base(base)
    mask = p.probs > 0
    if np.any(q.probs[mask] == 0):
        return math.inf
    pm = p.probs[mask]
    return float(np.sum(pm * b.log(pm / q.probs[mask])))


def bayes_posterior(
    prior: Distribution, likelihoods: DiscreteChannel, observation: int
) -> Distribution:
    """Posterior over hypotheses given one observation.

    ``likelihoods`` holds p(observation | hypothesis) row by row; the posterior
    is likelihood times prior, renormalized.
    """
    if prior.size != likelihoods.n_inputs:
        raise DimensionMismatchError("prior does not match likelihood rows")
    if not 0 <= observation < likelihoods.n_outputs:
        raise ValidationError("observation index out of range")
    unnorm = prior.probs * likelihoods.transitions[:, observation]
    total = unnorm.sum()
    if total <= 0:
        raise ValidationError("observation has zero prior probability")
    return Distribution(unnorm / total)


# --------------------------------------------------------------------------
# Channel capacity
# --------------------------------------------------------------------------

def binary_symmetric_channel(p: float) -> DiscreteChannel:
    """Binary channel flipping each bit independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError("flip probability must lie in [0, 1]")
    return DiscreteChannel(np.array([[1 - p, p], [p, 1 - p]]))


def ternary_channel(p: float) -> DiscreteChannel:
    """Three-symbol channel: 0 passes cleanly, 1 and 2 swap with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError("swap probability must lie in [0, 1]")
    return DiscreteChannel(
        np.array([[1.0, 0.0, 0.0], [0.0, 1 - p, p], [0.0, p, 1 - p]])
    )


def noiseless_channel(n: int) -> DiscreteChannel:
    """Identity channel on an n-symbol alphabet."""
    if n < 1:
        raise ValidationError("alphabet size must be at least 1")
    return DiscreteChannel(np.eye(n))


def channel_capacity_closed(kind: str, param, base=LogBase.BITS):
    """Closed-form capacity and maximizing input for the stock channels.

    kind = "binary_symmetric": C = 1 - H(p) bits at uniform input.
    kind = "ternary": with a = H(p) in nats, the clean symbol gets weight
    P = e^a / (e^a + 2) and C = log((e^a + 2) / e^a).
    kind = "noiseless": C = log n at uniform input.

    Returns (capacity, optimal_input).
    """
    b = _as_base(base)
    if kind == "binary_symmetric":
        p = float(param)
        if not 0.0 <= p <= 1.0:
            raise ValidationError("flip probability must lie in [0, 1]")
        cap_bits = 1.0 - binary_entropy(p, LogBase.BITS)
        cap = cap_bits if b is LogBase.BITS else cap_bits * math.log(2.0)
        return cap, Distribution.uniform(2)
    if kind == "ternary":
        p = float(param)
        if not 0.0 <= p <= 1.0:
            raise ValidationError("swap probability must lie in [0, 1]")
        alpha = binary_entropy(p, LogBase.NATS)
        ea = math.exp(alpha)
        big_p = ea / (ea + 2.0)
        q = 1.0 / (ea + 2.0)
        cap_nats = math.log((ea + 2.0) / ea)
        return b.convert_from_nats(cap_nats), Distribution(np.array([big_p, q, q]))
    if kind == "noiseless":
        n = int(param)
        if n < 1:
            raise ValidationError("alphabet size must be at least 1")
        cap_nats = math.log(n)
        return b.convert_from_nats(cap_nats), Distribution.uniform(n)
    raise ValidationError(f"unknown closed-form channel kind {kind!r}")


def channel_capacity_numeric(
    ch: DiscreteChannel,
    tol: float = 1e-9,
    base=LogBase.BITS,
    max_iter: int = 100_000,
):
    """Maximize I(X:Y) over input distributions by alternating ascent.

    Each sweep re-weights the input distribution by the exponentiated relative
    information of its row against the current output distribution; the upper
    and lower capacity bounds this produces bracket the maximum, and iteration
    stops once they agree to within ``tol`` (in the requested base).

    Returns (capacity, optimal_input).  Raises ConvergenceError carrying the
    best iterate if the cap of ``max_iter`` sweeps is hit first.
    """
    b = _as_base(base)
    t = ch.transitions
    mask = t > 0
    log_t = np.zeros_like(t)
    log_t[mask] = np.log(t[mask])

    r = np.full(ch.n_inputs, 1.0 / ch.n_inputs)
    scale = 1.0 if b is LogBase.NATS else math.log(2.0)
    best = None
    for _ in range(max_iter):
        q = r @ t  # output distribution
        log_q = np.where(q > 0, np.log(np.where(q > 0, q, 1.0)), 0.0)
        # d[x] = D(p(.|x) || q) in nats
        d = np.sum(np.where(mask, t * (log_t - log_q[None, :]), 0.0), axis=1)
        lower = math.log(float(np.dot(r, np.exp(d))))
        upper = float(np.max(d))
        best = (lower / scale, Distribution(r / r.sum()))
        if upper - lower < tol * scale:
            return best
        r = r * np.exp(d - upper)
        r /= r.sum()
    raise ConvergenceError(
        f"capacity ascent did not converge in {max_iter} iterations", best=best
    )


# --------------------------------------------------------------------------
# Typical sets and the random-coding demonstration
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TypicalSet:
    """Exhaustively enumerated typical set of source strings."""

    members: list
    total_prob: float
    entropy_bits: float
    n: int
    eps: float

    @property
    def size(self) -> int:
        return len(self.members)


def typical_set(p: Distribution, n: int, eps: float, cap: int | None = None) -> TypicalSet:
    """All length-n strings whose probability is within 2^(+-n*eps) of 2^(-nH).

    A string x qualifies when 2^(-n(H+eps)) <= p(x) <= 2^(-n(H-eps)), with H
    the source entropy in bits.  Enumeration is exact and refuses alphabets
    with more than ``cap`` strings (default 2**20); sample instead of
    enumerating if you need longer blocks.
    """
    if n < 1:
        raise ValidationError("block length must be at least 1")
    if eps <= 0:
        raise ValidationError("eps must be positive")
    cap = DEFAULT_ENUM_CAP if cap is None else int(cap)
    k = p.size
    total = k**n
    if total > cap:
        raise EnumerationCapError(
            f"{k}^{n} = {total} strings exceed the enumeration cap {cap}; "
            "use a sampling estimate instead"
        )
    h = shannon_entropy(p, LogBase.BITS)
    lo = 2.0 ** (-n * (h + eps))
    hi = 2.0 ** (-n * (h - eps))
    # per-position probabilities for every string, built digit by digit
    probs = np.ones(1)
    for _ in range(n):
        probs = (probs[:, None] * p.probs[None, :]).ravel()
    slack = 1e-12
    chosen = np.nonzero((probs >= lo * (1 - slack)) & (probs <= hi * (1 + slack)))[0]
    members = [_index_to_string(i, k, n) for i in chosen]
    return TypicalSet(
        members=members,
        total_prob=float(probs[chosen].sum()),
        entropy_bits=h,
        n=n,
        eps=eps,
    )


def _index_to_string(ix: int, k: int, n: int) -> tuple:
    digits = []
    for _ in range(n):
        ix, rem = divmod(ix, k)
        digits.append(rem)
    return tuple(reversed(digits))


@dataclass(frozen=True)
class CodingTrialResult:
    """Empirical block-error rate of random codes at one block length."""

    block_length: int
    n_codewords: int
    trials: int
    block_error_rate: float


def noisy_coding_demo(
    ch: DiscreteChannel,
    rate: float,
    block_lengths: list,
    trials: int,
    seed: int,
) -> list:
    """Monte-Carlo block-error rates for random codes at a fixed rate.

    For each block length n, each trial draws a fresh code of
    round(2^(n*rate)) distinct codewords (uniform among injective codebooks),
    sends a uniformly random message through n independent channel uses and
    decodes by maximum likelihood, breaking ties toward the lexicographically
    smallest codeword.  Below capacity the error rate falls with n; above
    capacity it does not vanish.  Trial t uses random stream (seed, t), so
    trials may run in any order.
    """
    if rate <= 0:
        raise ValidationError("rate must be positive")
    if trials < 1:
        raise ValidationError("need at least one trial")
    t = ch.transitions
    n_in = ch.n_inputs
    with np.errstate(divide="ignore"):
        log_t = np.log(t)  # -inf where impossible; fine for scoring

    results = []
    for n in block_lengths:
        n = int(n)
        if n < 1:
            raise ValidationError("block lengths must be positive")
        n_words = n_in**n
        m = max(1, round(2.0 ** (n * rate)))
        if m > n_words:
            raise ValidationError(
                f"rate {rate} requires {m} codewords but only {n_words} strings exist"
            )
        cum = np.cumsum(t, axis=1)
        errors = 0
        for trial in range(trials):
            rng = substream(seed, trial)
            codebook_ix = np.sort(_draw_distinct(rng, n_words, m))
            codebook = _indices_to_strings(codebook_ix, n_in, n)
            msg = rng.integers(m)
            sent = codebook[msg]
            received = (rng.random(n)[:, None] >= cum[sent]).sum(axis=1)
            scores = log_t[codebook, received[None, :]].sum(axis=1)
            # ties go to the smallest codeword; codebook rows are sorted, so
            # the first argmax is the lexicographically smallest winner
            decoded = int(np.argmax(scores))
            errors += decoded != msg
        results.append(
            CodingTrialResult(
                block_length=n,
                n_codewords=m,
                trials=trials,
                block_error_rate=errors / trials,
            )
        )
    return results


def _draw_distinct(rng: np.random.Generator, population: int, m: int) -> np.ndarray:
    """m distinct integers below ``population``, uniform among injective draws."""
    if m * m <= population:
        # collisions are rare enough to redraw the whole batch
        while True:
            draw = rng.integers(population, size=m)
            if np.unique(draw).size == m:
                return draw
    return rng.permutation(population)[:m]


def _indices_to_strings(indices: np.ndarray, k: int, n: int) -> np.ndarray:
    out = np.empty((indices.size, n), dtype=np.int64)
    rem = indices.copy()
    for pos in range(n - 1, -1, -1):
        rem, digit = np.divmod(rem, k)
        out[:, pos] = digit
    return out
