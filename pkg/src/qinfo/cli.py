"""Command-line front end: every demo, seeded, with machine-readable output.

Summaries print to stdout as a single JSON object (or CSV with
``--format csv``); protocol subcommands can additionally stream one JSON line
per round to ``--out``.  All numbers are emitted with 12 significant digits,
and identical (arguments, seed) runs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import secrets
import sys

import numpy as np

from . import coding, discrimination, dynamics, entanglement, probability, protocols, states
from .exceptions import ValidationError

ENUM_CAP_ENV = "QINFO_ENUM_CAP"


def _enum_cap(default: int) -> int:
    raw = os.environ.get(ENUM_CAP_ENV)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{ENUM_CAP_ENV} must be an integer, got {raw!r}")


def _round12(value):
    """Round every float in a JSON-ready structure to 12 significant digits."""
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round12(v) for v in value]
    return value


def _emit(summary: dict, args, rounds=None) -> None:
    summary = _round12(summary)
    if args.out:
        with open(args.out, "w") as fh:
            if rounds is not None:
                for rec in rounds:
                    fh.write(json.dumps(_round12(rec), sort_keys=True))
                    fh.write("\n")
            elif args.format == "csv":
                fh.write(_as_csv(summary))
            else:
                fh.write(json.dumps(summary, sort_keys=True, indent=2))
                fh.write("\n")
    if args.format == "csv":
        sys.stdout.write(_as_csv(summary))
    else:
        print(json.dumps(summary, sort_keys=True, indent=2))


def _as_csv(summary: dict) -> str:
    flat = {
        k: (json.dumps(v) if isinstance(v, (dict, list)) else v)
        for k, v in summary.items()
    }
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=sorted(flat))
    writer.writeheader()
    writer.writerow(flat)
    return buf.getvalue()


def _parse_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",") if x.strip() != ""])
    except ValueError:
        raise ValidationError(f"could not parse {text!r} as comma-separated reals")


def _parse_amps(text: str) -> np.ndarray:
    try:
        vals = [complex(x.replace("i", "j")) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"could not parse {text!r} as comma-separated amplitudes")
    v = np.array(vals, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValidationError("state amplitudes cannot all vanish")
    return v / norm


def _resolve_seed(args) -> int:
    if args.seed is None:
        seed = secrets.randbits(48)
        print(f"seed: {seed}", file=sys.stderr)
        return seed
    return args.seed


def vernam_xor(message_bits: str, key_bits: str) -> str:
    """One-time-pad XOR of two equal-length bit strings."""
    if len(key_bits) < len(message_bits):
        raise ValidationError("key is shorter than the message")
    if any(c not in "01" for c in message_bits + key_bits):
        raise ValidationError("messages and keys are bit strings")
    return "".join(
        str(int(m) ^ int(k)) for m, k in zip(message_bits, key_bits)
    )


# --------------------------------------------------------------------------
# subcommand handlers
# --------------------------------------------------------------------------

def _cmd_entropy(args) -> dict:
    dist = probability.Distribution(_parse_floats(args.dist))
    return {
        "entropy": probability.shannon_entropy(dist, args.base),
        "base": args.base,
        "alphabet": dist.size,
    }


def _cmd_capacity(args) -> dict:
    if args.bsc is not None:
        kind, param = "binary_symmetric", args.bsc
        channel = probability.binary_symmetric_channel(args.bsc)
    elif args.ternary is not None:
        kind, param = "ternary", args.ternary
        channel = probability.ternary_channel(args.ternary)
    elif args.noiseless is not None:
        kind, param = "noiseless", args.noiseless
        channel = probability.noiseless_channel(args.noiseless)
    else:
        channel = probability.DiscreteChannel(np.array(json.loads(args.channel)))
        kind = None
    out = {}
    if kind is not None:
        cap, dist = probability.channel_capacity_closed(kind, param)
        out["capacity_bits"] = cap
        out["optimal_input"] = dist.to_json()
    if kind is None or args.numeric:
        cap, dist = probability.channel_capacity_numeric(channel, tol=args.tol)
        out["numeric_capacity_bits"] = cap
        out["numeric_optimal_input"] = dist.to_json()
        out.setdefault("capacity_bits", cap)
    return out


def _cmd_typical(args) -> dict:
    dist = probability.Distribution(_parse_floats(args.dist))
    ts = probability.typical_set(
        dist, args.n, args.eps, cap=_enum_cap(probability.DEFAULT_ENUM_CAP)
    )
    out = {
        "size": ts.size,
        "total_prob": ts.total_prob,
        "entropy_bits": ts.entropy_bits,
        "n": ts.n,
        "eps": ts.eps,
        "size_upper_bound": 2.0 ** (ts.n * (ts.entropy_bits + ts.eps)),
    }
    rounds = ({"sequence": list(m)} for m in ts.members) if args.out else None
    return out, rounds


def _cmd_shannon2(args) -> dict:
    seed = _resolve_seed(args)
    channel = probability.binary_symmetric_channel(args.bsc)
    table = probability.noisy_coding_demo(
        channel, args.rate, [int(x) for x in args.block_lengths.split(",")],
        args.trials, seed,
    )
    return {
        "seed": seed,
        "rate": args.rate,
        "flip_probability": args.bsc,
        "capacity_bits": probability.channel_capacity_closed("binary_symmetric", args.bsc)[0],
        "table": [
            {
                "block_length": r.block_length,
                "codewords": r.n_codewords,
                "trials": r.trials,
                "block_error_rate": r.block_error_rate,
            }
            for r in table
        ],
    }


def _h45_ensemble() -> discrimination.Ensemble:
    h = states.StateVector(np.array([1.0, 0.0]))
    diag = states.StateVector(np.array([1.0, 1.0]) / math.sqrt(2.0))
    return discrimination.Ensemble.from_state_vectors([0.5, 0.5], [h, diag])


def _load_ensemble(args) -> discrimination.Ensemble:
    if args.ensemble:
        with open(args.ensemble) as fh:
            return discrimination.Ensemble.from_json(json.load(fh))
    return _h45_ensemble()


def _cmd_holevo(args) -> dict:
    ens = _load_ensemble(args)
    out = {
        "chi_bits": discrimination.holevo_chi(ens),
        "preparation_information_bits": discrimination.preparation_information(ens),
        "average_state_entropy_bits": states.von_neumann_entropy(ens.average()),
    }
    if args.search:
        seed = _resolve_seed(args)
        res = discrimination.accessible_information_search(
            ens, seed=seed, restarts=args.restarts
        )
        out["j_lower_bits"] = res.j_lower
        out["search_approximate"] = res.approximate
        out["seed"] = seed
    return out


def _cmd_discriminate(args) -> dict:
    ens = _load_ensemble(args)
    if len(ens.states) != 2:
        raise ValidationError("discrimination needs exactly two states")
    rho0, rho1 = ens.states
    priors = ens.probs
    problem = discrimination.DiscriminationProblem(priors, rho0, rho1)
    return {
        "error_probability": discrimination.error_probability(problem),
        "fidelity": states.fidelity(rho0, rho1),
        "statistical_overlap": states.statistical_overlap(rho0, rho1),
        "trace_distance": states.trace_distance(rho0, rho1),
    }


def _cmd_chsh(args) -> dict:
    if args.werner is not None:
        rho = entanglement.werner_density(args.werner)
        label = f"werner({args.werner})"
    else:
        rho = entanglement.bell_state(entanglement.BellLabel.from_name(args.bell)).density()
        label = args.bell
    return {
        "state": label,
        "chsh": entanglement.chsh_value(rho),
        "classical_bound": 2.0,
        "quantum_bound": 2.0 * math.sqrt(2.0),
    }


def _eve_from_args(args) -> protocols.EveStrategy:
    if args.eve == "none":
        return protocols.EveStrategy.none()
    if args.eve == "intercept":
        return protocols.EveStrategy.intercept_resend()
    if args.eve == "depolarize":
        return protocols.EveStrategy.kraus_attack(dynamics.KrausChannel.depolarizing(args.eve_strength))
    if args.eve == "kraus":
        if not args.eve_channel:
            raise ValidationError("--eve kraus needs --eve-channel FILE")
        with open(args.eve_channel) as fh:
            return protocols.EveStrategy.kraus_attack(dynamics.KrausChannel.from_json(json.load(fh)))
    raise ValidationError(f"unknown eavesdropper {args.eve!r}")


def _cmd_bb84(args):
    seed = _resolve_seed(args)
    transcript = protocols.bb84(args.rounds, eve=_eve_from_args(args), seed=seed)
    summary = transcript.summary()
    summary["aborted"] = transcript.qber > args.abort_qber
    summary["abort_qber"] = args.abort_qber
    if args.message:
        key = "".join(str(b) for b in transcript.sifted_key_alice)
        summary["encrypted"] = vernam_xor(args.message, key)
        summary["decrypted"] = vernam_xor(summary["encrypted"], key)
    rounds = transcript.rounds() if args.out else None
    return summary, rounds


def _cmd_e91(args):
    seed = _resolve_seed(args)
    transcript = protocols.ekert91(args.rounds, eve=_eve_from_args(args), seed=seed)
    summary = transcript.summary()
    summary["aborted"] = transcript.qber > args.abort_qber
    rounds = transcript.rounds() if args.out else None
    return summary, rounds


def _cmd_teleport(args) -> dict:
    mu = states.StateVector(_parse_amps(args.state))
    outcome = (
        entanglement.BellLabel.from_name(args.outcome)
        if args.outcome != "random"
        else None
    )
    seed = _resolve_seed(args)
    res = protocols.teleport(mu, outcome=outcome, seed=seed)
    return {
        "outcome": res.outcome.name,
        "fidelity": res.fidelity,
        "outcome_probabilities": res.probabilities,
        "bob_state": res.bob_after.to_json()["amps"],
    }


def _cmd_superdense(args) -> dict:
    bits = args.message.strip()
    if len(bits) != 2 or any(c not in "01" for c in bits):
        raise ValidationError("message must be two bits, e.g. 10")
    seed = _resolve_seed(args)
    res = protocols.superdense_send((int(bits[0]), int(bits[1])), seed=seed)
    return {
        "message": bits,
        "decoded": f"{res.decoded[0]}{res.decoded[1]}",
        "probabilities": res.probabilities,
    }


def _cmd_swap(args) -> dict:
    outcome = (
        entanglement.BellLabel.from_name(args.outcome)
        if args.outcome != "random"
        else None
    )
    seed = _resolve_seed(args)
    res = protocols.entanglement_swap(outcome=outcome, seed=seed)
    return {
        "bc_outcome": res.bc_outcome.name,
        "outcome_probabilities": res.probabilities,
        "fidelity_to_phi_plus": entanglement.fidelity_to_phi_plus(res.ad_after.density()),
    }


def _cmd_purify(args) -> dict:
    if args.mode == "analytic" and args.rounds_count == 1:
        f_next, p_pass = protocols.purify_step_analytic(args.start)
        return {"F": args.start, "F_next": f_next, "p_pass": p_pass, "mode": "analytic"}
    seed = _resolve_seed(args) if args.mode == "simulated" else 0
    run = protocols.run_purification(
        args.start, args.rounds_count, mode=args.mode,
        n_pairs=args.pairs, seed=seed,
    )
    out = {
        "F": args.start,
        "mode": args.mode,
        "rounds": [
            {"F": r.fidelity, "p_pass": r.p_pass, "pairs_remaining": r.pairs_remaining}
            for r in run.rounds
        ],
    }
    if run.rounds:
        out["F_next"] = run.rounds[-1].fidelity
        out["p_pass"] = run.rounds[-1].p_pass
    if args.mode == "simulated":
        out["seed"] = seed
    return out


def _cmd_schumacher(args) -> dict:
    rho = states.DensityOperator(np.diag([args.p, 1.0 - args.p]))
    res = coding.schumacher_roundtrip(
        rho, args.n, args.delta, rate_limit=args.rate_limit,
        cap=_enum_cap(coding.DEFAULT_BLOCK_CAP),
    )
    return {
        "p": args.p,
        "n": res.n,
        "delta": args.delta,
        "avg_fidelity": res.avg_fidelity,
        "rate_qubits_per_signal": res.rate_qubits_per_signal,
        "subspace_dimension": res.dimension,
        "weight": res.weight,
        "eta": res.eta,
        "fidelity_floor": 1.0 - 2.0 * res.eta,
    }


def _cmd_qecc(args) -> dict:
    if args.code:
        with open(args.code) as fh:
            code = coding.CodeSubspace.from_json(json.load(fh))
    else:
        code = coding.repetition_code()
    if args.errors:
        error_set = coding.PauliErrorSet([e.strip() for e in args.errors.split(",")])
    else:
        error_set = coding.PauliErrorSet.single_qubit(code.n_qubits, "X")
    res = coding.qecc_check(code, error_set)
    out = {"correctable": res.correctable, "errors": list(error_set.errors)}
    if res.witness:
        witness = dict(res.witness)
        for key in ("value",):
            if key in witness:
                witness[key] = [witness[key].real, witness[key].imag]
        if "values" in witness:
            witness["values"] = [[v.real, v.imag] for v in witness["values"]]
        out["witness"] = witness
    return out


def _cmd_hamming(args) -> dict:
    return {"n": args.n, "t": args.t, "max_k": coding.hamming_bound(args.n, args.t)}


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qinfo",
        description="Classical and quantum information demos with seeded, reproducible output.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default: fresh, printed)")
        p.add_argument("--out", type=str, default=None, help="write per-round/detail output to this file")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        return p

    p = add("entropy", _cmd_entropy, "Shannon entropy of a distribution")
    p.add_argument("--dist", required=True, help="comma-separated probabilities")
    p.add_argument("--base", choices=("bits", "nats"), default="bits")

    p = add("capacity", _cmd_capacity, "channel capacity, closed-form and numeric")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--bsc", type=float, help="binary symmetric channel flip probability")
    group.add_argument("--ternary", type=float, help="ternary channel swap probability")
    group.add_argument("--noiseless", type=int, help="noiseless channel alphabet size")
    group.add_argument("--channel", type=str, help="JSON row-stochastic matrix")
    p.add_argument("--numeric", action="store_true", help="also run the iterative optimizer")
    p.add_argument("--tol", type=float, default=1e-9)

    p = add("typical", _cmd_typical, "exhaustive typical set of a memoryless source")
    p.add_argument("--dist", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)

    p = add("shannon2", _cmd_shannon2, "random-coding block-error demonstration")
    p.add_argument("--bsc", type=float, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--block-lengths", default="8,12,16")
    p.add_argument("--trials", type=int, default=2000)

    p = add("holevo", _cmd_holevo, "Holevo information of an ensemble")
    p.add_argument("--ensemble", type=str, help="JSON file {probs, states}; default: horizontal/diagonal pair")
    p.add_argument("--search", action="store_true", help="lower-bound the accessible information")
    p.add_argument("--restarts", type=int, default=8)

    p = add("discriminate", _cmd_discriminate, "two-state distinguishability measures")
    p.add_argument("--ensemble", type=str, help="JSON file with two states; default: horizontal/diagonal pair")

    p = add("chsh", _cmd_chsh, "CHSH value at the three-basis settings")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--bell", default="psi_minus", help="bell label, e.g. psi_minus")
    group.add_argument("--werner", type=float, help="Werner-state fidelity parameter")

    p = add("bb84", _cmd_bb84, "prepare-and-measure key distribution")
    p.add_argument("--rounds", type=int, default=10_000)
    p.add_argument("--eve", default="none", choices=("none", "intercept", "depolarize", "kraus"))
    p.add_argument("--eve-strength", type=float, default=1.0)
    p.add_argument("--eve-channel", type=str, default=None, help="JSON Kraus operator list")
    p.add_argument("--abort-qber", type=float, default=0.11,
                   help="declare the run compromised above this error rate")
    p.add_argument("--message", type=str, default=None,
                   help="bit string to one-time-pad with the sifted key")

    p = add("e91", _cmd_e91, "entangled-pair key distribution with CHSH monitoring")
    p.add_argument("--rounds", type=int, default=10_000)
    p.add_argument("--eve", default="none", choices=("none", "depolarize", "kraus"))
    p.add_argument("--eve-strength", type=float, default=1.0)
    p.add_argument("--eve-channel", type=str, default=None)
    p.add_argument("--abort-qber", type=float, default=0.11)

    p = add("teleport", _cmd_teleport, "teleport one qubit through a shared pair")
    p.add_argument("--state", required=True, help="comma-separated amplitudes, e.g. 1,0")
    p.add_argument("--outcome", default="random", help="bell label or 'random'")

    p = add("superdense", _cmd_superdense, "send two bits with one qubit")
    p.add_argument("--message", required=True, help="two bits, e.g. 10")

    p = add("swap", _cmd_swap, "entanglement swapping through a joint measurement")
    p.add_argument("--outcome", default="random")

    p = add("purify", _cmd_purify, "recurrence entanglement purification")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--rounds", dest="rounds_count", type=int, default=1)
    p.add_argument("--mode", choices=("analytic", "simulated"), default="analytic")
    p.add_argument("--pairs", type=int, default=100_000)

    p = add("schumacher", _cmd_schumacher, "typical-subspace block compression")
    p.add_argument("--p", type=float, default=0.9, help="larger eigenvalue of the source qubit")
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--rate-limit", type=float, default=None)

    p = add("qecc", _cmd_qecc, "codeword conditions for a Pauli error set")
    p.add_argument("--code", type=str, default=None, help="JSON code file; default 3-qubit repetition")
    p.add_argument("--errors", type=str, default=None, help="comma-separated Pauli strings")

    p = add("hamming", _cmd_hamming, "Hamming bound on classical block codes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, tuple):
        summary, rounds = result
    else:
        summary, rounds = result, None
    _emit(summary, args, rounds)
    return 0


if __name__ == "__main__":
    sys.exit(main())
