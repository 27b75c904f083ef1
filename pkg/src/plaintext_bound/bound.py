"""Upper bounds on the number of B-byte English plaintext blocks.

Three evaluation modes share one term grid:

``paper-stirling``
    closed form with the Stirling lower bound in the denominator, over the
    k-range where the slot count is positive, plus the constant
    ``X**2 * mu**(B//2 - 2)`` term.
``exact-sum``
    the binomial sums themselves as exact rationals, over every k whose
    terms do not vanish.
``affix-refined``
    ``paper-stirling`` with the boundary constant X replaced by the affix
    constant lambda.

A block of k terms in form f spends ``B + delta(f) - 2k`` letters beyond
the mandatory one per word ("slots"); delta is +1, 0, 0, -1 for forms 1..4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Union

from .combinatorics import binomial, ceil_fraction, format_count, format_rational, to_fraction
from .errors import DomainError, ParameterError, RangeError
from .vocab import VocabStats, length_profile

Real = Union[Fraction, float]

PAPER_MODE = "paper-stirling"
EXACT_MODE = "exact-sum"
AFFIX_MODE = "affix-refined"
MODES = (PAPER_MODE, EXACT_MODE, AFFIX_MODE)
MODE_ALIASES = {"paper": PAPER_MODE, "exact": EXACT_MODE, "affix": AFFIX_MODE}

FORM_DELTA = {1: 1, 2: 0, 3: 0, 4: -1}
ALPHABET = 26

DEFAULT_B = 16
DEFAULT_N = 60000
DEFAULT_MU = 2
DEFAULT_PUNCT = 3
DEFAULT_X = 147
DEFAULT_LAMBDA = 26

# Published figures for the default configuration, used for the
# comparison block in reports.
REFERENCE_FIGURES = {
    PAPER_MODE: {
        "F_minuscule": 3.73e16,
        "F_capital": 4.2e14,
        "F_punct_first": 4e13,
        "F_total": 3.8e16,
    },
    AFFIX_MODE: {"F_total": 1.8e15},
}


@dataclass(frozen=True)
class BoundParams:
    B: int = DEFAULT_B
    N: int = DEFAULT_N
    mu: Fraction = Fraction(DEFAULT_MU)
    punct_count: int = DEFAULT_PUNCT
    X: Fraction = Fraction(DEFAULT_X)
    lam: Fraction | None = None
    mode: str = PAPER_MODE
    x_source: str = "literal"

    def __post_init__(self):
        mode = MODE_ALIASES.get(self.mode, self.mode)
        if mode not in MODES:
            raise ParameterError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        object.__setattr__(self, "mode", mode)
        for name in ("mu", "X"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))
        if self.lam is None and mode == AFFIX_MODE:
            object.__setattr__(self, "lam", Fraction(DEFAULT_LAMBDA))
        elif self.lam is not None:
            object.__setattr__(self, "lam", to_fraction(self.lam))
        if self.B < 2:
            raise ParameterError(f"block length must be >= 2, got {self.B}")
        if self.N < 1:
            raise ParameterError(f"N must be >= 1, got {self.N}")
        if self.mu <= 0:
            raise ParameterError(f"mu must be > 0, got {self.mu}")
        if self.punct_count < 0:
            raise ParameterError(f"punct_count must be >= 0, got {self.punct_count}")
        if self.X < 1:
            raise ParameterError(f"X must be >= 1, got {self.X}")
        if self.lam is not None and self.lam < 1:
            raise ParameterError(f"lambda must be >= 1, got {self.lam}")

    @property
    def edge(self) -> Fraction:
        """Constant bounding partial edge segments: lambda in affix mode, else X."""
        return self.lam if self.mode == AFFIX_MODE else self.X

    @property
    def uses_stirling(self) -> bool:
        return self.mode != EXACT_MODE

    def to_dict(self) -> dict:
        return {
            "B": self.B,
            "N": str(self.N),
            "mu": float(self.mu),
            "punct_count": self.punct_count,
            "X": float(self.X),
            "X_source": self.x_source,
            "lambda": None if self.lam is None else float(self.lam),
            "mode": self.mode,
        }


def x_constant(B: int, N: int) -> Fraction:
    """max of min(26**c, N) / C(B, c-1) over edge-segment lengths c.

    An edge segment of a block with two or more terms is at most B-2
    letters long, so c runs over 1..max(1, B-2). Single-term blocks are
    not covered by this constant.
    """
    if B < 2:
        raise ParameterError(f"block length must be >= 2, got {B}")
    return max(Fraction(min(ALPHABET**c, N), binomial(B, c - 1)) for c in range(1, max(1, B - 2) + 1))


def slots(form: int, k: int, B: int, offset: int = 0) -> int:
    if form not in FORM_DELTA:
        raise ParameterError(f"form must be 1..4, got {form}")
    return B + FORM_DELTA[form] - 2 * k - offset


def _prefactor_exponents(form: int) -> tuple[int, int]:
    """(power of edge constant, power of mu offset from k) for a form."""
    return {1: (2, -2), 2: (1, -1), 3: (1, -1), 4: (0, 0)}[form]


def term_stirling(form: int, k: int, p: BoundParams, offset: int = 0) -> float:
    """Closed-form bound for one (form, k) cell.

    ``offset`` shortens the block by that many bytes while keeping the
    binomial base at ``p.B``; the punctuation-first class uses offset 1.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    s0 = slots(form, k, p.B, offset)
    if s0 < 1:
        raise DomainError(f"form {form}, k={k}: slot count {s0} < 1, Stirling form undefined")
    e_pow, _ = _prefactor_exponents(form)
    mu = float(p.mu)
    edge_over_mu = float(p.edge) / mu
    Bk = p.B * k
    log_v = (
        e_pow * math.log(edge_over_mu)
        + k * math.log(mu)
        - 0.5 * math.log(2 * math.pi * s0)
        + s0 * math.log(math.e * Bk / s0)
        + k * math.log1p(p.punct_count * s0 / Bk)
    )
    try:
        return math.exp(log_v)
    except OverflowError as exc:
        raise RangeError(f"form {form}, k={k}: term overflows a double") from exc


def _exact_inner(form: int, k: int, p: BoundParams, offset: int) -> tuple[int, ...]:
    s0 = slots(form, k, p.B, offset)
    Bk = p.B * k
    return tuple(
        binomial(k, i) * p.punct_count**i * (binomial(Bk, s0 - i) if s0 - i >= 0 else 0)
        for i in range(k + 1)
    )


def _exact_prefactor(form: int, k: int, p: BoundParams) -> Fraction:
    e_pow, mu_shift = _prefactor_exponents(form)
    return p.edge**e_pow * p.mu ** (k + mu_shift)


def term_exact(form: int, k: int, p: BoundParams, offset: int = 0) -> Fraction:
    """Exact binomial-sum bound for one (form, k) cell; zero once slots run out."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    return _exact_prefactor(form, k, p) * sum(_exact_inner(form, k, p, offset))


@dataclass(frozen=True)
class FormTerm:
    form: int
    k: int
    value: Real
    i_breakdown: tuple[Real, ...] = ()

    def to_dict(self, mode: str) -> dict:
        if isinstance(self.value, Fraction):
            value = format_rational(self.value)
            log2 = _log2(self.value)
        else:
            value = self.value
            log2 = math.log2(self.value) if self.value > 0 else None
        return {
            "form": self.form,
            "k": self.k,
            "mode": mode,
            "value": value,
            "value_log2": log2,
            "i_breakdown": [format_rational(v) if isinstance(v, Fraction) else v for v in self.i_breakdown],
        }


def _log2(q: Fraction | int) -> float | None:
    if q <= 0:
        return None
    q = Fraction(q)
    return math.log2(q.numerator) - math.log2(q.denominator)


def _k_range(form: int, p: BoundParams, offset: int):
    lowest = 1 if p.uses_stirling else 0
    k = 1
    while slots(form, k, p.B, offset) >= lowest:
        yield k
        k += 1


def _form_terms(form: int, p: BoundParams, offset: int = 0) -> list[FormTerm]:
    terms = []
    for k in _k_range(form, p, offset):
        if p.uses_stirling:
            terms.append(FormTerm(form, k, term_stirling(form, k, p, offset)))
        else:
            pre = _exact_prefactor(form, k, p)
            parts = tuple(pre * v for v in _exact_inner(form, k, p, offset))
            terms.append(FormTerm(form, k, sum(parts, Fraction(0)), parts))
    return terms


def constant_term(p: BoundParams) -> Fraction:
    """Trailing constant of the closed form, edge**2 * mu**(B//2 - 2)."""
    return p.edge**2 * p.mu ** (p.B // 2 - 2)


@dataclass(frozen=True)
class MinusculeBound:
    value: Real
    terms: tuple[FormTerm, ...]
    form_sums: dict
    constant: Fraction | None

    @property
    def count(self) -> int:
        return _ceil(self.value)


def _ceil(v: Real) -> int:
    if isinstance(v, Fraction):
        return ceil_fraction(v)
    return math.ceil(v)


def bound_minuscule(p: BoundParams) -> MinusculeBound:
    """Bound on blocks whose first letter is lowercase (forms 1-4 summed)."""
    terms: list[FormTerm] = []
    form_sums = {}
    for form in (1, 2, 3, 4):
        ft = _form_terms(form, p)
        terms.extend(ft)
        form_sums[form] = sum((t.value for t in ft), Fraction(0) if not p.uses_stirling else 0.0)
    total = sum(form_sums.values())
    const = None
    if p.uses_stirling:
        const = constant_term(p)
        total += float(const)
    return MinusculeBound(total, tuple(terms), form_sums, const)


def bound_capital(p: BoundParams, F_minuscule: Real, F3_sum: Real, F4_sum: Real) -> int:
    """ceil((mu / X) * F_minuscule + F3 + F4)."""
    if all(isinstance(v, (int, Fraction)) for v in (F_minuscule, F3_sum, F4_sum)):
        return _ceil(p.mu / p.edge * F_minuscule + F3_sum + F4_sum)
    return _ceil(float(p.mu / p.edge) * float(F_minuscule) + float(F3_sum) + float(F4_sum))


@dataclass(frozen=True)
class PunctBound:
    count: int
    terms: tuple[FormTerm, ...]
    value: Real


def bound_punct_first(p: BoundParams) -> PunctBound:
    """punct_count times the form-3 and form-4 totals one byte shorter."""
    zero = 0.0 if p.uses_stirling else Fraction(0)
    if p.B < 3 or p.punct_count == 0:
        return PunctBound(0, (), zero)
    terms = _form_terms(3, p, offset=1) + _form_terms(4, p, offset=1)
    value = p.punct_count * sum((t.value for t in terms), zero)
    return PunctBound(_ceil(value), tuple(terms), value)


@dataclass(frozen=True)
class BoundReport:
    params: BoundParams
    F_minuscule: int
    F_capital: int
    F_punct_first: int
    minuscule: MinusculeBound
    punct: PunctBound
    notes: tuple[dict, ...] = field(default=())

    @property
    def F_total(self) -> int:
        return self.F_minuscule + self.F_capital + self.F_punct_first

    @property
    def log2_total(self) -> float:
        return _log2(self.F_total) if self.F_total > 0 else float("-inf")

    def reference(self) -> dict | None:
        if not is_reference_config(self.params):
            return None
        figures = REFERENCE_FIGURES.get(self.params.mode)
        if figures is None:
            return None
        out = {}
        for name, ref in figures.items():
            computed = getattr(self, name)
            out[name] = {"reference": ref, "computed": float(computed), "ratio": float(computed) / ref}
        return out

    def to_dict(self) -> dict:
        mode = self.params.mode
        return {
            "params": self.params.to_dict(),
            "F_minuscule": format_count(self.F_minuscule),
            "F_capital": format_count(self.F_capital),
            "F_punct_first": format_count(self.F_punct_first),
            "F_total": format_count(self.F_total),
            "log2_minuscule": _log2(self.F_minuscule),
            "log2_total": self.log2_total,
            "form_sums": {
                str(f): (format_rational(v) if isinstance(v, Fraction) else v)
                for f, v in self.minuscule.form_sums.items()
            },
            "constant_term": None if self.minuscule.constant is None else float(self.minuscule.constant),
            "terms": [t.to_dict(mode) for t in self.minuscule.terms],
            "punct_terms": [t.to_dict(mode) for t in self.punct.terms],
            "reference": self.reference(),
            "notes": list(self.notes),
        }


def is_reference_config(p: BoundParams) -> bool:
    return (
        p.B == DEFAULT_B
        and p.mu == DEFAULT_MU
        and p.X == DEFAULT_X
        and p.punct_count == DEFAULT_PUNCT
        and (p.mode != AFFIX_MODE or p.lam == DEFAULT_LAMBDA)
    )


def bound_total(p: BoundParams) -> BoundReport:
    mb = bound_minuscule(p)
    cap = bound_capital(p, mb.value, mb.form_sums[3], mb.form_sums[4])
    pb = bound_punct_first(p)
    notes = []
    if p.mode == PAPER_MODE and is_reference_config(p):
        ref = REFERENCE_FIGURES[PAPER_MODE]["F_capital"]
        if cap > ref:
            notes.append(
                {
                    "code": "capital_formula_exceeds_reference",
                    "message": (
                        "(mu/X)*F_minuscule + F3 + F4 evaluates above the reference capital-class "
                        "figure; the formula value is reported"
                    ),
                    "computed": float(cap),
                    "reference": ref,
                }
            )
    return BoundReport(p, mb.count, cap, pb.count, mb, pb, tuple(notes))


def measured_params(
    stats: VocabStats,
    mode: str = EXACT_MODE,
    punct_count: int = DEFAULT_PUNCT,
    lam=None,
) -> BoundParams:
    """Parameters read off a vocabulary.

    mu is the largest |Q_i| / C(B, i-1) (1 when no word fits in B); N is
    the vocabulary size, raised to the number of distinct B-letter
    substrings when that is larger, so the single-segment cell stays
    covered; X follows from N.
    """
    mu = length_profile(stats, stats.B).mu or Fraction(1)
    N = max(1, stats.N, stats.X_sub[stats.B])
    X = x_constant(stats.B, N)
    return BoundParams(B=stats.B, N=N, mu=mu, punct_count=punct_count, X=X, lam=lam, mode=mode, x_source="computed")


def with_mode(p: BoundParams, mode: str) -> BoundParams:
    return replace(p, mode=mode)
