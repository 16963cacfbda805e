"""``mobs`` command-line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .attack import InconsistentTranscript, monico_attack, telescope_attack
from .automorphism import build_prime_cycle_perm, primes_for_k
from .boolmat import BitMatrix, DimensionError
from .experiments import (
    DEFAULT_EXPONENT,
    experiment_fixed_matrix,
    experiment_orbit_vs_solutions,
    experiment_random_matrix,
    exponent_invariance,
    summarize,
    trial_rng,
    write_csv,
    write_json,
)
from .protocol import ProtocolInvariantError, load_transcript, run_exchange, sample_exponent
from .telescoping import count_orbit, count_solutions, is_regular, telescope_rhs


class UsageError(Exception):
    pass


def _parse_primes(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"--primes must be comma-separated integers, got {text!r}") from None


def resolve_primes(k: int | None, primes: str | None) -> list[int]:
    """Cycle lengths from ``--k`` and/or ``--primes``; defaults to k=10."""
    if primes is not None:
        plist = _parse_primes(primes)
        if k is not None and sum(plist) != k:
            raise UsageError(f"--primes sum to {sum(plist)} but --k is {k}")
        return plist
    try:
        return primes_for_k(10 if k is None else k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _build_h(args):
    try:
        return build_prime_cycle_perm(resolve_primes(args.k, args.primes))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_transcript(path: str):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read transcript {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"transcript {path} is not valid JSON: {exc}") from None
    try:
        return load_transcript(data)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"transcript {path} is malformed: {exc}") from None


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ------------------------------------------------------------ subcommands


def cmd_demo_exchange(args) -> int:
    h = _build_h(args)
    rng = trial_rng(args.seed)
    M = BitMatrix.random(args.n, h.k, rng)
    x = sample_exponent(rng, args.e_min, args.e_max)
    y = sample_exponent(rng, args.e_min, args.e_max)
    transcript = run_exchange(M, h, x, y)
    _emit(transcript.to_json(reveal_private=args.reveal_private), args.out)
    return 0


def cmd_count_solutions(args) -> int:
    view, _ = _read_transcript(args.transcript)
    C = telescope_rhs(view.M, view.h, view.A)
    reg = is_regular(view.M, view.h, view.A)
    _emit({
        "solutions": count_solutions(C, view.A).to_json(),
        "orbit": count_orbit(view.A).to_json(),
        "regular": reg.regular,
        "reverse_solutions": reg.backward.to_json(),
    }, args.out)
    return 0


def _exp_common(args, name, records, summary: dict) -> int:
    out = _out_dir(args.out)
    write_csv(records, out / f"{name}.csv", timing=args.timing)
    write_json(summary, out / f"{name}_summary.json")
    print(f"{name}: {len(records)} trials -> {out}", file=sys.stderr)
    return 0


def cmd_exp1(args) -> int:
    h = _build_h(args)
    M = BitMatrix.random(args.n, h.k, trial_rng(args.seed))
    records = experiment_fixed_matrix(M, h, args.trials, args.e_min, args.e_max, args.seed, workers=args.workers)
    summary = summarize(records).to_json()
    summary["exponent_invariance"] = exponent_invariance(records)
    summary["M"] = M.to_json()
    summary["h"] = h.to_json()
    return _exp_common(args, "exp1", records, summary)


def cmd_exp2(args) -> int:
    h = _build_h(args)
    records = experiment_random_matrix(h, args.exponent, args.n, h.k, args.trials, args.seed, workers=args.workers)
    return _exp_common(args, "exp2", records, summarize(records).to_json())


def cmd_exp3(args) -> int:
    h = _build_h(args)
    records, stats = experiment_orbit_vs_solutions(h, args.exponent, args.n, h.k, args.trials, args.seed,
                                                   workers=args.workers)
    return _exp_common(args, "exp3", records, stats.to_json())


def cmd_attack_monico(args) -> int:
    view, private = _read_transcript(args.transcript)
    outcome = monico_attack(view, private.get("K"), enumerate_all=args.enumerate_all, cap=args.cap)
    _emit(outcome.to_json(), args.out)
    return 0


def cmd_attack_telescope(args) -> int:
    view, private = _read_transcript(args.transcript)
    outcome = telescope_attack(view, args.budget, private.get("K"))
    _emit(outcome.to_json(), args.out)
    return 0


# ------------------------------------------------------------ parser


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _non_negative(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    from .experiments import default_workers

    parser = argparse.ArgumentParser(prog="mobs", description="MOBS key exchange analysis workbench.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def params(p, seed_required=True):
        p.add_argument("--n", type=_positive, default=3, help="matrix dimension (default 3)")
        p.add_argument("--k", type=_positive, help="bitstring length; must be a sum of the first few primes")
        p.add_argument("--primes", help="comma-separated distinct prime cycle lengths, e.g. 2,3,5")
        p.add_argument("--seed", type=_non_negative, required=seed_required, help="master random seed")

    def exponent_range(p, e_max):
        p.add_argument("--e-min", type=_non_negative, default=7, help="exponents drawn from [2^e_min, 2^e_max]")
        p.add_argument("--e-max", type=_non_negative, default=e_max)

    p = sub.add_parser("demo-exchange", help="simulate one key exchange and print its transcript")
    params(p)
    exponent_range(p, 12)
    p.add_argument("--reveal-private", action="store_true", help="include x, y and K")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_demo_exchange)

    p = sub.add_parser("count-solutions", help="count telescoping solutions and ideal size for a transcript")
    p.add_argument("--transcript", required=True)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_count_solutions)

    for name, helptext in (
        ("exp1", "fixed matrix, varying exponent"),
        ("exp2", "fixed exponent, varying matrix"),
        ("exp3", "ideal size vs. solution count"),
    ):
        p = sub.add_parser(name, help=helptext)
        params(p)
        p.add_argument("--trials", type=_positive, default=None,
                       help="trial count (default 1000, or 100 when k > 10)")
        p.add_argument("--exponent", type=_positive, default=DEFAULT_EXPONENT, help="fixed exponent (exp2/exp3)")
        exponent_range(p, 10)
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--workers", type=_positive, default=default_workers(),
                       help="worker processes (default $MOBS_WORKERS or 1)")
        p.add_argument("--timing", action="store_true", help="fill the ms column with wall time")
        p.set_defaults(func={"exp1": cmd_exp1, "exp2": cmd_exp2, "exp3": cmd_exp3}[name])

    attack = sub.add_parser("attack", help="key-recovery attacks on a transcript")
    attack_sub = attack.add_subparsers(dest="attack", required=True)
    p = attack_sub.add_parser("monico", help="prime-cycle residues combined by CRT")
    p.add_argument("--transcript", required=True)
    p.add_argument("--enumerate-all", action="store_true", help="try every residue combination up to --cap")
    p.add_argument("--cap", type=_positive, default=10_000)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_attack_monico)
    p = attack_sub.add_parser("telescope", help="guess solutions of the telescoping equation")
    p.add_argument("--transcript", required=True)
    p.add_argument("--budget", type=_positive, required=True, help="maximum number of guesses")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_attack_telescope)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 0) is None:
        k = args.k if args.k is not None else sum(_parse_primes(args.primes)) if args.primes else 10
        args.trials = 1000 if k <= 10 else 100
    if getattr(args, "e_min", 0) > getattr(args, "e_max", 0):
        print("mobs: error: --e-min must not exceed --e-max", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mobs: error: {exc}", file=sys.stderr)
        return 2
    except (DimensionError, InconsistentTranscript) as exc:
        print(f"mobs: error: {exc}", file=sys.stderr)
        return 3
    except ProtocolInvariantError as exc:
        print(f"mobs: invariant violated: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
