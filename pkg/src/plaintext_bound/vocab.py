"""Word-list ingestion and the length / affix statistics of a vocabulary."""

from __future__ import annotations

import io
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import BinaryIO, Iterable

from .combinatorics import binomial, to_fraction
from .errors import ParameterError, WordlistParseError

log = logging.getLogger(__name__)

_LETTERS = re.compile(r"[A-Za-z]+")

AFFIX_CONJECTURE = 26
AFFIX_CHECK_RANGE = range(2, 6)


@dataclass(frozen=True)
class Vocabulary:
    words: frozenset[str]
    skipped: int = 0

    def __post_init__(self):
        for w in self.words:
            if not (w.isascii() and w.isalpha() and w.islower()):
                raise ParameterError(f"vocabulary word {w!r} is not [a-z]+")

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "Vocabulary":
        return cls(frozenset(w.lower() for w in words))

    @property
    def N(self) -> int:
        return len(self.words)

    def dumps(self) -> str:
        return "".join(w + "\n" for w in sorted(self.words))

    # Segment sets, materialized once per instance.
    @cached_property
    def prefixes(self) -> frozenset[str]:
        return frozenset(w[:i] for w in self.words for i in range(1, len(w) + 1))

    @cached_property
    def suffixes(self) -> frozenset[str]:
        return frozenset(w[-i:] for w in self.words for i in range(1, len(w) + 1))

    @cached_property
    def substrings(self) -> frozenset[str]:
        return frozenset(
            w[a:b] for w in self.words for a in range(len(w)) for b in range(a + 1, len(w) + 1)
        )


def load_wordlist(source: BinaryIO | bytes, strict: bool = True) -> Vocabulary:
    """Read one word per line; ``#`` lines and blank lines are ignored.

    In strict mode a line holding anything but ASCII letters raises
    :class:`WordlistParseError`; otherwise it is skipped and counted.
    """
    data = source if isinstance(source, bytes) else source.read()
    text = data.decode("utf-8")
    words: set[str] = set()
    skipped = 0
    for line_no, raw in enumerate(io.StringIO(text, newline=None), start=1):
        line = raw.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        if not _LETTERS.fullmatch(line):
            if strict:
                raise WordlistParseError(line_no, line)
            skipped += 1
            continue
        words.add(line.lower())
    if skipped:
        log.warning("skipped %d invalid word-list lines", skipped)
    return Vocabulary(frozenset(words), skipped)


def load_wordlist_path(path, strict: bool = True) -> Vocabulary:
    with open(path, "rb") as fh:
        return load_wordlist(fh, strict=strict)


def _per_length(strings: Iterable[str], B: int) -> tuple[int, ...]:
    counts = [0] * (B + 1)
    for s in strings:
        if len(s) <= B:
            counts[len(s)] += 1
    return tuple(counts)


@dataclass(frozen=True)
class VocabStats:
    """Per-length counts, indexed 1..B (index 0 is always 0).

    ``W`` counts words of exactly that length; ``P``, ``S`` and ``X_sub``
    count distinct prefixes, suffixes and substrings of that length.
    """

    B: int
    N: int
    W: tuple[int, ...]
    P: tuple[int, ...]
    S: tuple[int, ...]
    X_sub: tuple[int, ...]

    @classmethod
    def from_vocabulary(cls, voc: Vocabulary, B: int) -> "VocabStats":
        if B < 1:
            raise ParameterError(f"block length must be >= 1, got {B}")
        return cls(
            B=B,
            N=voc.N,
            W=_per_length(voc.words, B),
            P=_per_length(voc.prefixes, B),
            S=_per_length(voc.suffixes, B),
            X_sub=_per_length(voc.substrings, B),
        )

    def to_dict(self) -> dict:
        return {
            "B": self.B,
            "N": str(self.N),
            "W": list(self.W[1:]),
            "P": list(self.P[1:]),
            "S": list(self.S[1:]),
            "X_sub": list(self.X_sub[1:]),
        }


@dataclass(frozen=True)
class LengthProfile:
    B: int
    mu_target: Fraction
    mu_i: tuple[Fraction, ...]  # index 1..B
    mu: Fraction
    violations: tuple[int, ...] = field(default=())

    @property
    def satisfied(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "mu_target": float(self.mu_target),
            "mu_i": [float(x) for x in self.mu_i[1:]],
            "mu": float(self.mu),
            "satisfied": self.satisfied,
            "violations": list(self.violations),
        }


def length_profile(voc: Vocabulary | VocabStats, B: int, mu_target=2) -> LengthProfile:
    """Ratios |Q_i| / C(B, i-1) and which lengths break the mu condition."""
    stats = voc if isinstance(voc, VocabStats) else VocabStats.from_vocabulary(voc, B)
    target = to_fraction(mu_target)
    mu_i = (Fraction(0),) + tuple(Fraction(stats.W[i], binomial(B, i - 1)) for i in range(1, B + 1))
    mu = max(mu_i)
    violations = tuple(i for i in range(1, B + 1) if mu_i[i] > target)
    return LengthProfile(B, target, mu_i, mu, violations)


@dataclass(frozen=True)
class AffixProfile:
    B: int
    P: tuple[int, ...]
    S: tuple[int, ...]
    X_sub: tuple[int, ...]
    lambda_prefix: tuple[Fraction, ...]
    lambda_suffix: tuple[Fraction, ...]

    @property
    def lam(self) -> Fraction:
        return max(self.lambda_prefix + self.lambda_suffix)

    def conjecture_holds(self) -> dict[int, bool]:
        """Whether both ratios stay <= 26 for the lengths 2..5 still in doubt."""
        return {
            i: self.lambda_prefix[i] <= AFFIX_CONJECTURE and self.lambda_suffix[i] <= AFFIX_CONJECTURE
            for i in AFFIX_CHECK_RANGE
            if i <= self.B
        }

    def to_dict(self) -> dict:
        return {
            "P": list(self.P[1:]),
            "S": list(self.S[1:]),
            "X_sub": list(self.X_sub[1:]),
            "lambda_prefix": [float(x) for x in self.lambda_prefix[1:]],
            "lambda_suffix": [float(x) for x in self.lambda_suffix[1:]],
            "lambda": float(self.lam),
            "conjecture_26": {str(i): ok for i, ok in self.conjecture_holds().items()},
        }


def affix_profile(voc: Vocabulary | VocabStats, B: int) -> AffixProfile:
    stats = voc if isinstance(voc, VocabStats) else VocabStats.from_vocabulary(voc, B)
    lp = (Fraction(0),) + tuple(Fraction(stats.P[i], binomial(B, i - 1)) for i in range(1, B + 1))
    ls = (Fraction(0),) + tuple(Fraction(stats.S[i], binomial(B, i - 1)) for i in range(1, B + 1))
    return AffixProfile(B, stats.P, stats.S, stats.X_sub, lp, ls)
