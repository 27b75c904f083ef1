"""Exact counting of grammar-derivable B-byte blocks.

Grammar
-------
A block is a sequence of k >= 1 nonempty letter segments joined by single
spaces, in one of four forms:

    F1  w1 w2 ... wk        F2  w1 w2 ... wk_
    F3  _w1 w2 ... wk       F4  _w1 w2 ... wk_

A word followed by a space may carry one punctuation character before
that space. The first segment of F1/F2 may have its start cut (a suffix
of a vocabulary word), the last segment of F1/F3 may have its end cut (a
prefix), and the lone segment of a one-term F1 may be cut on both ends
(a substring). Every other segment is a whole word.

Classes split blocks by their first letter:

    M   all lowercase, any form
    C   first letter of the first segment capitalized, start not cut
    P   one punctuation character, then a lowercase F3/F4 block of B-1 bytes

Spaces and punctuation fix the parse, so each string has exactly one
derivation; the brute-force enumerator certifies this by comparing path
and distinct-string counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .bound import EXACT_MODE, BoundParams, bound_total, measured_params, term_exact, with_mode
from .combinatorics import binomial, ceil_fraction, format_count
from .errors import ParameterError, ResourceError
from .vocab import VocabStats, Vocabulary, length_profile

CLASSES = ("M", "C", "P")
FORMS = (1, 2, 3, 4)
DEFAULT_PUNCT = (",", ".", ";")
DEFAULT_ENUM_CAP = 10**7

WORD, PREFIX, SUFFIX, SUBSTRING = "word", "prefix", "suffix", "substring"


@dataclass(frozen=True)
class BlockGrammar:
    B: int
    punct_set: tuple[str, ...] = DEFAULT_PUNCT

    def __post_init__(self):
        object.__setattr__(self, "punct_set", tuple(self.punct_set))
        if self.B < 1:
            raise ParameterError(f"block length must be >= 1, got {self.B}")
        if len(set(self.punct_set)) != len(self.punct_set):
            raise ParameterError("punctuation characters must be distinct")
        for ch in self.punct_set:
            if len(ch) != 1 or ch.isalpha() or ch == " " or not ch.isascii():
                raise ParameterError(f"invalid punctuation character {ch!r}")

    @property
    def p(self) -> int:
        return len(self.punct_set)


def leading_space(form: int) -> bool:
    return form in (3, 4)


def trailing_space(form: int) -> bool:
    return form in (2, 4)


def segment_kinds(cls: str, form: int, k: int) -> tuple[str, ...]:
    """Which segment set each of the k positions draws from."""
    start_cut = cls == "M" and form in (1, 2)
    end_cut = form in (1, 3)
    kinds = []
    for j in range(k):
        cut_l = start_cut and j == 0
        cut_r = end_cut and j == k - 1
        if cut_l and cut_r:
            kinds.append(SUBSTRING)
        elif cut_l:
            kinds.append(SUFFIX)
        elif cut_r:
            kinds.append(PREFIX)
        else:
            kinds.append(WORD)
    return tuple(kinds)


def followed_by_space(form: int, k: int, j: int) -> bool:
    return j < k - 1 or trailing_space(form)


def _cell_length(cls: str, g: BlockGrammar) -> tuple[int, tuple[int, ...]]:
    """(string length the F-part must fill, forms allowed) for a class."""
    if cls == "P":
        return g.B - 1, (3, 4)
    return g.B, FORMS


def _max_k(length: int) -> int:
    # k letters and k-1 separating spaces at minimum
    return (length + 1) // 2


@dataclass
class ClassCounts:
    m_count: int = 0
    c_count: int = 0
    p_count: int = 0
    cells: dict = field(default_factory=dict)  # (cls, form, k) -> count

    @property
    def total(self) -> int:
        return self.m_count + self.c_count + self.p_count

    def by_class(self) -> dict[str, int]:
        return {"M": self.m_count, "C": self.c_count, "P": self.p_count}

    def add(self, cls: str, form: int, k: int, n: int) -> None:
        if not n:
            return
        key = (cls, form, k)
        self.cells[key] = self.cells.get(key, 0) + n
        if cls == "M":
            self.m_count += n
        elif cls == "C":
            self.c_count += n
        else:
            self.p_count += n

    def to_dict(self) -> dict:
        return {
            "M": format_count(self.m_count),
            "C": format_count(self.c_count),
            "P": format_count(self.p_count),
            "total": format_count(self.total),
            "cells": [
                {"class": c, "form": f, "k": k, "count": format_count(n)}
                for (c, f, k), n in sorted(self.cells.items(), key=lambda kv: (CLASSES.index(kv[0][0]), kv[0][1:]))
            ],
        }


def _poly_mul(a: list[int], b: list[int], limit: int) -> list[int]:
    out = [0] * (limit + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b[: limit + 1 - i]):
            if y:
                out[i + j] += x * y
    return out


def dp_count(stats: VocabStats, g: BlockGrammar) -> ClassCounts:
    """Count distinct blocks by multiplying per-length segment-set sizes."""
    if stats.B < g.B:
        raise ParameterError(f"stats cover lengths up to {stats.B}, grammar needs {g.B}")
    tables = {WORD: stats.W, PREFIX: stats.P, SUFFIX: stats.S, SUBSTRING: stats.X_sub}
    counts = ClassCounts()
    for cls in CLASSES:
        length, forms = _cell_length(cls, g)
        if length < 1:
            continue
        seg_poly = {kind: [0] + list(t[1 : length + 1]) for kind, t in tables.items()}
        sep = [0, 1, g.p]  # space, or punctuation then space
        for form in forms:
            for k in range(1, _max_k(length) + 1):
                poly = [0, 1] if leading_space(form) else [1]
                for j, kind in enumerate(segment_kinds(cls, form, k)):
                    poly = _poly_mul(poly, seg_poly[kind], length)
                    if followed_by_space(form, k, j):
                        poly = _poly_mul(poly, sep, length)
                n = poly[length] if len(poly) > length else 0
                if cls == "P":
                    n *= g.p
                counts.add(cls, form, k, n)
    return counts


@dataclass(frozen=True)
class Parse:
    cls: str
    form: int
    k: int
    composition: tuple[int, ...]
    punct: tuple[str, ...]  # per segment, "" when none
    accepted = True

    def key(self) -> tuple:
        return (self.cls, self.form, self.k, self.composition, self.punct)


@dataclass(frozen=True)
class Reject:
    reason: str
    detail: str = ""
    accepted = False


REJECT_REASONS = (
    "bad_length",
    "bad_character",
    "double_space",
    "unknown_word",
    "bad_affix",
    "bad_punctuation",
    "bad_capitalization",
)


def _segment_sets(voc: Vocabulary) -> dict[str, frozenset[str]]:
    return {WORD: voc.words, PREFIX: voc.prefixes, SUFFIX: voc.suffixes, SUBSTRING: voc.substrings}


def recognize(block: bytes | str, voc: Vocabulary, g: BlockGrammar) -> Parse | Reject:
    """Parse a block back into (class, form, k, composition) or say why not."""
    if isinstance(block, bytes):
        try:
            block = block.decode("ascii")
        except UnicodeDecodeError:
            return Reject("bad_character", "non-ASCII byte")
    if len(block) != g.B:
        return Reject("bad_length", f"expected {g.B} bytes, got {len(block)}")
    for ch in block:
        if not (ch == " " or ch in g.punct_set or (ch.isascii() and ch.isalpha())):
            return Reject("bad_character", repr(ch))

    cls = "M"
    body = block
    if block[0] in g.punct_set:
        cls = "P"
        body = block[1:]
        if not body.startswith(" "):
            return Reject("bad_punctuation", "punctuation-first block must continue with a space")

    letters_at = [i for i, ch in enumerate(body) if ch.isalpha()]
    uppers = [i for i in letters_at if body[i].isupper()]
    if uppers:
        if cls == "P" or uppers != [letters_at[0]]:
            return Reject("bad_capitalization", "only the first letter of a block may be capital")
        cls = "C"
        i = uppers[0]
        body = body[:i] + body[i].lower() + body[i + 1 :]

    lead = body.startswith(" ")
    trail = body.endswith(" ")
    inner = body[1 if lead else 0 : len(body) - 1 if trail else len(body)]
    if not inner:
        return Reject("double_space", "no segment")
    pieces = inner.split(" ")
    if any(not piece for piece in pieces):
        return Reject("double_space")
    form = {(False, False): 1, (False, True): 2, (True, False): 3, (True, True): 4}[(lead, trail)]
    if cls == "P" and form not in (3, 4):
        return Reject("bad_punctuation", "punctuation-first block must start a form with a leading space")
    k = len(pieces)
    kinds = segment_kinds(cls, form, k)
    sets = _segment_sets(voc)
    segments, puncts = [], []
    for j, piece in enumerate(pieces):
        mark = ""
        if piece[-1] in g.punct_set:
            mark, piece = piece[-1], piece[:-1]
            if not followed_by_space(form, k, j):
                return Reject("bad_punctuation", "punctuation must be followed by a space")
        if not piece.isalpha():
            return Reject("bad_punctuation", f"segment {j + 1}")
        if piece not in sets[kinds[j]]:
            reason = "unknown_word" if kinds[j] == WORD else "bad_affix"
            return Reject(reason, f"segment {j + 1} {piece!r} is not a known {kinds[j]}")
        segments.append(piece)
        puncts.append(mark)
    return Parse(cls, form, k, tuple(len(s) for s in segments), tuple(puncts))


@dataclass
class Enumeration:
    counts: ClassCounts
    path_count: int
    blocks: dict  # block string -> Parse of the generating path

    @property
    def distinct(self) -> int:
        return len(self.blocks)

    @property
    def injective(self) -> bool:
        return self.path_count == self.distinct

    def dump_lines(self, visible_spaces: bool = False) -> list[str]:
        lines = []
        for block, parse in self.blocks.items():
            text = block.replace(" ", "␣") if visible_spaces else block
            lines.append(f"{parse.cls},{parse.form},{parse.k},{text}")
        return sorted(lines)


def _generate_cell(
    cls: str, form: int, k: int, length: int, by_len: dict, g: BlockGrammar
) -> Iterator[tuple[str, tuple[int, ...], tuple[str, ...]]]:
    kinds = segment_kinds(cls, form, k)
    start = " " if leading_space(form) else ""

    def rec(j: int, text: str, comp: tuple, marks: tuple):
        if j == k:
            if len(text) == length:
                yield text, comp, marks
            return
        room = length - len(text)
        spaced = followed_by_space(form, k, j)
        for seg_len, pool in by_len[kinds[j]].items():
            if seg_len > room:
                continue
            for seg in pool:
                if cls == "C" and j == 0:
                    seg = seg[0].upper() + seg[1:]
                if not spaced:
                    yield from rec(j + 1, text + seg, comp + (seg_len,), marks + ("",))
                    continue
                for mark in ("",) + g.punct_set:
                    yield from rec(j + 1, text + seg + mark + " ", comp + (seg_len,), marks + (mark,))

    yield from rec(0, start, (), ())


def brute_force_enumerate(voc: Vocabulary, g: BlockGrammar, cap: int = DEFAULT_ENUM_CAP) -> Enumeration:
    """Materialize every derivable block into a set of distinct strings."""
    estimate = dp_count(VocabStats.from_vocabulary(voc, g.B), g).total
    if estimate > cap:
        raise ResourceError(f"enumeration would produce about {estimate} blocks, cap is {cap}")
    by_len: dict[str, dict[int, list[str]]] = {}
    for kind, pool in _segment_sets(voc).items():
        groups: dict[int, list[str]] = {}
        for s in sorted(pool):
            groups.setdefault(len(s), []).append(s)
        by_len[kind] = groups

    counts = ClassCounts()
    blocks: dict[str, Parse] = {}
    paths = 0
    for cls in CLASSES:
        length, forms = _cell_length(cls, g)
        if length < 1:
            continue
        heads = g.punct_set if cls == "P" else ("",)
        for form in forms:
            for k in range(1, _max_k(length) + 1):
                gen_cls = "M" if cls == "P" else cls
                for text, comp, marks in _generate_cell(gen_cls, form, k, length, by_len, g):
                    for head in heads:
                        paths += 1
                        if paths > cap:
                            raise ResourceError(f"enumeration passed the cap of {cap} paths")
                        block = head + text
                        if block not in blocks:
                            blocks[block] = Parse(cls, form, k, comp, marks)
                            counts.add(cls, form, k, 1)
    return Enumeration(counts, paths, blocks)


@dataclass
class DominationReport:
    comparable: bool
    refusals: list = field(default_factory=list)
    params: BoundParams | None = None
    counts: ClassCounts | None = None
    class_bounds: dict = field(default_factory=dict)
    cells: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        return [c for c in self.cells if not c["ok"]]

    @property
    def holds(self) -> bool:
        if not self.comparable:
            return False
        class_ok = all(
            self.counts.by_class()[c] <= self.class_bounds[c] for c in CLASSES
        ) and self.counts.total <= self.class_bounds["total"]
        return class_ok and not self.failures

    def to_dict(self) -> dict:
        out = {"comparable": self.comparable, "refusals": self.refusals}
        if not self.comparable:
            return out
        out.update(
            params=self.params.to_dict(),
            counts=self.counts.to_dict(),
            bounds={k: format_count(v) for k, v in self.class_bounds.items()},
            holds=self.holds,
            failures=[
                {**c, "count": format_count(c["count"]), "bound": format_count(c["bound"])} for c in self.failures
            ],
        )
        return out


def _preconditions(stats: VocabStats, g: BlockGrammar, p: BoundParams) -> list[dict]:
    """Every assumption the exact bound needs, checked against the data."""
    refusals = []
    if p.B != g.B:
        refusals.append({"reason": "block_length_mismatch", "params_B": p.B, "grammar_B": g.B})
        return refusals
    if p.punct_count < g.p:
        refusals.append({"reason": "punct_count_too_small", "punct_count": p.punct_count, "grammar": g.p})
    prof = length_profile(stats, g.B, p.mu)
    for i in prof.violations:
        refusals.append({"reason": "mu_condition_violated", "index": i, "mu_i": float(prof.mu_i[i])})
    if p.mu > p.X:
        refusals.append({"reason": "mu_exceeds_X", "mu": float(p.mu), "X": float(p.X)})
    for c in range(1, g.B + 1):
        cap = p.X * binomial(g.B, c - 1)
        worst = max(stats.P[c], stats.S[c], stats.X_sub[c] if c == g.B else 0)
        if worst > cap:
            refusals.append({"reason": "edge_condition_violated", "index": c, "segments": worst})
    return refusals


def check_domination(voc: Vocabulary, g: BlockGrammar, p: BoundParams | None = None) -> DominationReport:
    """Compare exact block counts with the exact-sum bound, cell by cell."""
    stats = VocabStats.from_vocabulary(voc, g.B)
    if g.B < 2:
        return DominationReport(False, [{"reason": "block_length_too_small", "B": g.B}])
    if p is None:
        p = measured_params(stats, punct_count=g.p)
    elif p.mode != EXACT_MODE:
        p = with_mode(p, EXACT_MODE)
    refusals = _preconditions(stats, g, p)
    if refusals:
        return DominationReport(False, refusals, p)

    counts = dp_count(stats, g)
    report = bound_total(p)
    class_bounds = {
        "M": report.F_minuscule,
        "C": report.F_capital,
        "P": report.F_punct_first,
        "total": report.F_total,
    }
    ratio = p.mu / p.edge
    cells = []
    for cls in CLASSES:
        length, forms = _cell_length(cls, g)
        for form in forms:
            for k in range(1, _max_k(max(length, 1)) + 1):
                n = counts.cells.get((cls, form, k), 0)
                if cls == "P":
                    b = p.punct_count * term_exact(form, k, p, offset=1) if length >= 1 else Fraction(0)
                else:
                    b = term_exact(form, k, p)
                    if cls == "C" and form in (1, 2):
                        b = ratio * b
                bound = ceil_fraction(b)
                cells.append({"class": cls, "form": form, "k": k, "count": n, "bound": bound, "ok": n <= bound})
    return DominationReport(True, [], p, counts, class_bounds, cells)

