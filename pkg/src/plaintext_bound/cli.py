"""JSON-only command line front end."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .attack import MASK64, AttackConfig, SplitMix64, build_codebook, make_permutation, run_trials, splitmix64
from .blockspace import BlockGrammar, brute_force_enumerate, check_domination, dp_count
from .bound import (
    DEFAULT_B,
    DEFAULT_MU,
    DEFAULT_N,
    DEFAULT_PUNCT,
    DEFAULT_X,
    MODE_ALIASES,
    BoundParams,
    bound_total,
    measured_params,
    x_constant,
)
from .combinatorics import to_fraction
from .errors import BoundError
from .vocab import VocabStats, affix_profile, length_profile, load_wordlist_path

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= MASK64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="plaintext-bound", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("vocab-stats", help="length and affix statistics of a word list")
    p.add_argument("--words", required=True)
    p.add_argument("--block-len", type=_positive, default=DEFAULT_B)
    p.add_argument("--mu", default=str(DEFAULT_MU))
    p.add_argument("--lenient", action="store_true", help="skip invalid lines instead of failing")

    p = sub.add_parser("bound", help="evaluate the block-count upper bound")
    p.add_argument("--mode", choices=sorted(MODE_ALIASES), default="paper")
    p.add_argument("--block-len", type=_positive, default=DEFAULT_B)
    p.add_argument("--words")
    p.add_argument("--mu")
    p.add_argument("--N", type=_positive)
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--x")
    p.add_argument("--punct-count", type=int, default=DEFAULT_PUNCT)
    p.add_argument("--lenient", action="store_true")

    p = sub.add_parser("count", help="exact number of grammar blocks over a word list")
    p.add_argument("--words", required=True)
    p.add_argument("--block-len", type=_positive, required=True)
    p.add_argument("--brute-force", action="store_true")
    p.add_argument("--dump")
    p.add_argument("--visible-spaces", action="store_true")
    p.add_argument("--lenient", action="store_true")

    p = sub.add_parser("check", help="compare exact counts with the exact-sum bound")
    p.add_argument("--words", required=True)
    p.add_argument("--block-len", type=_positive, required=True)
    p.add_argument("--mu", help="mu target; defaults to the measured value")
    p.add_argument("--lenient", action="store_true")

    p = sub.add_parser("attack", help="simulate codebook recovery on a toy cipher")
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--dict-size", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--codebook", help="write the first trial's codebook here")
    return parser


def _digest(path: str) -> dict:
    data = Path(path).read_bytes()
    return {"path": path, "sha256": hashlib.sha256(data).hexdigest()}


def _manifest(args: argparse.Namespace, inputs: dict, notes: list) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k != "command"}
    return {
        "subcommand": args.command,
        "params": params,
        "version": __version__,
        "inputs": inputs,
        "notes": notes,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def cmd_vocab_stats(args) -> tuple[dict, dict, list]:
    voc = load_wordlist_path(args.words, strict=not args.lenient)
    stats = VocabStats.from_vocabulary(voc, args.block_len)
    body = {
        "stats": stats.to_dict(),
        "skipped_lines": voc.skipped,
        "length_profile": length_profile(stats, args.block_len, to_fraction(args.mu)).to_dict(),
        "affix_profile": affix_profile(stats, args.block_len).to_dict(),
    }
    return body, {"words": _digest(args.words)}, []


def _bound_params(args) -> tuple[BoundParams, dict, list]:
    mode = MODE_ALIASES[args.mode]
    B = args.block_len
    notes: list[str] = []
    inputs = {}
    lam = to_fraction(args.lam) if args.lam is not None else None
    X, source = None, "literal"
    if args.words:
        voc = load_wordlist_path(args.words, strict=not args.lenient)
        inputs["words"] = _digest(args.words)
        base = measured_params(VocabStats.from_vocabulary(voc, B), punct_count=args.punct_count)
        mu, N, X, source = base.mu, base.N, base.X, "computed"
        notes.append("mu, N and X measured from the word list")
        if args.mu is not None or args.N is not None or args.x is not None:
            notes.append("explicit --mu/--N/--x override measured values")
    else:
        mu, N = to_fraction(DEFAULT_MU), DEFAULT_N
    if args.mu is not None:
        mu = to_fraction(args.mu)
    if args.N is not None:
        N = args.N
    if args.x is not None:
        X, source = to_fraction(args.x), "override"
    elif args.N is not None or (X is None and B != DEFAULT_B):
        X, source = x_constant(B, N), "computed"
    elif X is None:
        X = to_fraction(DEFAULT_X)
    p = BoundParams(B=B, N=N, mu=mu, punct_count=args.punct_count, X=X, lam=lam, mode=mode, x_source=source)
    return p, inputs, notes


def cmd_bound(args):
    p, inputs, notes = _bound_params(args)
    return bound_total(p).to_dict(), inputs, notes


def cmd_count(args):
    voc = load_wordlist_path(args.words, strict=not args.lenient)
    g = BlockGrammar(args.block_len)
    counts = dp_count(VocabStats.from_vocabulary(voc, g.B), g)
    body = {"dp": counts.to_dict()}
    if args.brute_force or args.dump:
        enum = brute_force_enumerate(voc, g)
        body["brute_force"] = enum.counts.to_dict()
        body["path_count"] = str(enum.path_count)
        body["injective"] = enum.injective
        body["agree"] = enum.counts.by_class() == counts.by_class()
        if args.dump:
            Path(args.dump).write_text("\n".join(enum.dump_lines(args.visible_spaces)) + "\n", encoding="utf-8")
    return body, {"words": _digest(args.words)}, []


def cmd_check(args):
    voc = load_wordlist_path(args.words, strict=not args.lenient)
    g = BlockGrammar(args.block_len)
    p = None
    notes = []
    if args.mu is not None and g.B >= 2:
        base = measured_params(VocabStats.from_vocabulary(voc, g.B), punct_count=g.p)
        p = BoundParams(B=base.B, N=base.N, mu=to_fraction(args.mu), punct_count=base.punct_count,
                        X=base.X, mode=base.mode, x_source=base.x_source)
        notes.append("explicit --mu overrides the measured value")
    return check_domination(voc, g, p).to_dict(), {"words": _digest(args.words)}, notes


def cmd_attack(args):
    cfg = AttackConfig(m=args.bits, trials=args.trials, seed=args.seed, D=args.dict_size, S=args.samples)
    body = run_trials(cfg).to_dict()
    if args.codebook:
        rng = SplitMix64(splitmix64(cfg.seed))
        cipher = make_permutation(cfg.m, rng.next())
        book = build_codebook(cipher, cfg.D, rng.next())
        book.save(args.codebook)
        body["codebook"] = {"path": args.codebook, "trial": 0, "D": book.D}
    return body, {}, []


COMMANDS = {
    "vocab-stats": cmd_vocab_stats,
    "bound": cmd_bound,
    "count": cmd_count,
    "check": cmd_check,
    "attack": cmd_attack,
}


def render(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(render({"error": "usage_error", "message": str(exc)}))
        return EXIT_USAGE
    try:
        body, inputs, notes = COMMANDS[args.command](args)
    except BoundError as exc:
        sys.stderr.write(render(exc.to_dict()))
        return EXIT_DOMAIN
    except (OSError, UnicodeDecodeError) as exc:
        sys.stderr.write(render({"error": "io_error", "message": str(exc)}))
        return EXIT_DOMAIN
    sys.stdout.write(render({"manifest": _manifest(args, inputs, notes), **body}))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
