import json
import math
from fractions import Fraction

import pytest

from plaintext_bound.bound import (
    AFFIX_MODE,
    EXACT_MODE,
    MODES,
    PAPER_MODE,
    BoundParams,
    bound_capital,
    bound_minuscule,
    bound_punct_first,
    bound_total,
    constant_term,
    slots,
    term_exact,
    term_stirling,
    x_constant,
)
from plaintext_bound.combinatorics import binomial
from plaintext_bound.errors import DomainError, ParameterError

PAPER = BoundParams()
EXACT = BoundParams(mode=EXACT_MODE)


def stirling_oracle(form, k, B=16, mu=2.0, X=147.0, p=3):
    """Closed form written out term by term, no logs."""
    s0 = {1: B + 1, 2: B, 3: B, 4: B - 1}[form] - 2 * k
    pre = {1: (X / mu) ** 2, 2: X / mu, 3: X / mu, 4: 1.0}[form]
    return pre * mu**k / math.sqrt(2 * math.pi * s0) * (math.e * B * k / s0) ** s0 * (1 + p * s0 / (B * k)) ** k


def test_x_constant_paper_value():
    x = x_constant(16, 60000)
    assert x == Fraction(26**3, 120)
    assert 146 < x <= 147
    assert float(x) == pytest.approx(146.47, abs=0.01)


def test_x_constant_small_vocab():
    assert x_constant(16, 26) == 26


def test_x_constant_b4_direct():
    # edge segments of a multi-term 4-byte block have 1 or 2 letters
    direct = max(min(26.0**c, 60000) / math.comb(4, c - 1) for c in (1, 2))
    assert float(x_constant(4, 60000)) == pytest.approx(direct) == 169


def test_x_constant_ignores_single_term_lengths():
    # c = 16 would give 60000 / 16 = 3750
    assert x_constant(16, 60000) < 60000 / 16


def test_slots_match_block_shapes():
    assert [slots(f, 1, 16) for f in (1, 2, 3, 4)] == [15, 14, 14, 13]
    assert slots(1, 8, 16) == 1 and slots(4, 7, 16) == 1


@pytest.mark.parametrize("form,k", [(1, 1), (1, 5), (1, 8), (2, 3), (3, 7), (4, 1), (4, 7)])
def test_term_stirling_matches_direct_formula(form, k):
    assert term_stirling(form, k, PAPER) == pytest.approx(stirling_oracle(form, k), rel=1e-12)


def test_term_stirling_examples():
    assert term_stirling(1, 8, PAPER) == pytest.approx(2.31e8, rel=0.01)
    v = term_stirling(4, 7, PAPER)
    assert math.isfinite(v) and v > 0
    with pytest.raises(DomainError):
        term_stirling(1, 9, PAPER)


def test_term_exact_examples():
    assert term_exact(1, 1, PAPER) == Fraction(147**2 * 376, 2) == 4_062_492
    assert term_exact(1, 8, PAPER) == 147**2 * 2**6 * (128 + 24)
    assert term_exact(1, 9, PAPER) == 0
    assert term_exact(4, 9, PAPER) == 0


def test_term_exact_is_sum_over_punctuation_counts():
    # form 2, k=2: X * mu * sum_i C(2,i) 3^i C(32, 12 - i)
    expected = 147 * 2 * sum(math.comb(2, i) * 3**i * math.comb(32, 12 - i) for i in range(3))
    assert term_exact(2, 2, PAPER) == expected


def test_term_domination_on_paper_grid():
    for form, kmax in ((1, 8), (2, 7), (3, 7), (4, 7)):
        for k in range(1, kmax + 1):
            assert term_exact(form, k, PAPER) <= term_stirling(form, k, PAPER)


@pytest.mark.parametrize("B", [4, 7, 8, 12, 16, 24])
def test_term_domination_other_lengths(B):
    p = BoundParams(B=B, X=x_constant(B, 60000))
    for form in (1, 2, 3, 4):
        k = 1
        while slots(form, k, B) >= 1:
            assert term_exact(form, k, p) <= term_stirling(form, k, p)
            assert term_exact(form, k, p, offset=1) <= (
                term_stirling(form, k, p, offset=1) if slots(form, k, B, 1) >= 1 else math.inf
            )
            k += 1


def test_paper_grid_completeness():
    mb = bound_minuscule(PAPER)
    cells = sorted((t.form, t.k) for t in mb.terms)
    expected = sorted([(1, k) for k in range(1, 9)] + [(f, k) for f in (2, 3, 4) for k in range(1, 8)])
    assert cells == expected
    assert mb.constant == 147**2 * 2**6


def test_minuscule_paper_value():
    mb = bound_minuscule(PAPER)
    assert mb.value == pytest.approx(3.73e16, rel=0.05)


def test_exact_minuscule_below_paper():
    assert bound_minuscule(EXACT).count < bound_minuscule(PAPER).count


def test_affix_minuscule_scales_with_edge_squared():
    paper, affix = bound_minuscule(PAPER), bound_minuscule(BoundParams(mode=AFFIX_MODE, lam=26))
    form1_ratio = affix.form_sums[1] / paper.form_sums[1]
    assert form1_ratio == pytest.approx((26 / 147) ** 2)
    assert affix.value / paper.value == pytest.approx((26 / 147) ** 2, rel=0.05)


def test_bound_capital_trivial():
    assert bound_capital(EXACT, Fraction(0), Fraction(0), Fraction(0)) == 0
    p = BoundParams(mu=5, X=5, mode=EXACT_MODE)
    assert bound_capital(p, Fraction(10), Fraction(3), Fraction(4)) == 17


def test_bound_capital_paper_order():
    r = bound_total(PAPER)
    assert 4.2e14 / 1.5 <= r.F_capital <= 4.2e14 * 1.5
    assert any(n["code"] == "capital_formula_exceeds_reference" for n in r.notes)


def test_bound_punct_first():
    assert bound_punct_first(PAPER).count == pytest.approx(4e13, rel=0.1)
    assert bound_punct_first(BoundParams(punct_count=0)).count == 0
    assert bound_punct_first(BoundParams(B=2, mode=EXACT_MODE)).count == 0


def test_bound_punct_first_b3_hand_value():
    # one byte of punctuation, then " x" with x a one-letter prefix: 3 * X
    p = BoundParams(B=3, mode=EXACT_MODE)
    assert bound_punct_first(p).count == 3 * term_exact(3, 1, p, offset=1) == 3 * 147


def test_report_paper_totals():
    r = bound_total(PAPER)
    assert r.F_total == r.F_minuscule + r.F_capital + r.F_punct_first
    assert r.F_total < 2**56
    assert r.F_total == pytest.approx(3.8e16, rel=0.1)
    assert r.log2_total < 56
    assert r.log2_total == pytest.approx(math.log2(r.F_total), abs=1e-9)


def test_report_affix_totals():
    r = bound_total(BoundParams(mode=AFFIX_MODE, lam=26))
    assert 1.8e15 / 1.5 <= r.F_total <= 1.8e15 * 1.5
    assert r.log2_total < 51


def test_exact_total_below_paper_total():
    assert bound_total(EXACT).F_total <= bound_total(PAPER).F_total


def test_computed_x_not_above_literal():
    for mode in MODES:
        lit = bound_total(BoundParams(mode=mode))
        comp = bound_total(BoundParams(mode=mode, X=x_constant(16, 60000)))
        assert comp.F_total <= lit.F_total


def test_exact_mode_is_reproducible():
    a = json.dumps(bound_total(EXACT).to_dict(), sort_keys=True)
    b = json.dumps(bound_total(BoundParams(mode="exact")).to_dict(), sort_keys=True)
    assert a == b
    assert bound_total(EXACT).F_minuscule == sum(
        term_exact(f, k, EXACT) for f in (1, 2, 3, 4) for k in range(1, 10)
    ).__ceil__()


def _total(mode, B, **kw):
    base = dict(B=B, mu=2, X=x_constant(B, 60000), mode=mode)
    base.update(kw)
    return bound_total(BoundParams(**base)).F_total


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("B", [8, 12, 16])
def test_monotone_in_mu(mode, B):
    values = [_total(mode, B, mu=m) for m in (Fraction(1, 2), 1, 2, 3, 8)]
    assert values == sorted(values)


def test_mu_monotonicity_breaks_for_short_blocks():
    # the single-term form-1 cell carries 1/mu and dominates at B=4
    assert _total(EXACT_MODE, 4, mu=1) > _total(EXACT_MODE, 4, mu=2)


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("B", [4, 8, 16])
def test_monotone_in_N_and_punct(mode, B):
    by_n = [_total(mode, B, X=x_constant(B, n)) for n in (1, 26, 100, 1000, 60000)]
    assert by_n == sorted(by_n)
    by_p = [_total(mode, B, punct_count=p) for p in (0, 1, 3, 5)]
    assert by_p == sorted(by_p)


@pytest.mark.parametrize("B", [4, 8, 16])
def test_monotone_in_lambda(B):
    values = [_total(AFFIX_MODE, B, lam=v) for v in (5, 10, 26, 50, 147)]
    assert values == sorted(values)


def test_constant_term():
    assert constant_term(PAPER) == 147**2 * 64


@pytest.mark.parametrize(
    "kwargs",
    [dict(B=1), dict(N=0), dict(mu=0), dict(mu=-1), dict(punct_count=-1), dict(X=0.5), dict(mode="stirling")],
)
def test_params_validation(kwargs):
    with pytest.raises(ParameterError):
        BoundParams(**kwargs)


def test_report_json_shape():
    d = bound_total(EXACT).to_dict()
    json.dumps(d)
    assert isinstance(d["F_total"], str) and int(d["F_total"]) > 0
    row = d["terms"][0]
    assert set(row) >= {"form", "k", "mode", "value", "value_log2"}
    num, den = row["value"].split("/")
    assert Fraction(int(num), int(den)) == term_exact(row["form"], row["k"], EXACT)
    assert d["reference"] is None


def test_binomial_base_stays_at_block_length_for_punct_class():
    # shortening the block by one byte keeps C(B*k, .) at the full B
    p = BoundParams(mode=EXACT_MODE)
    k = 3
    s0 = slots(3, k, 16, offset=1)
    expected = 147 * 2 ** (k - 1) * sum(math.comb(k, i) * 3**i * binomial(16 * k, s0 - i) for i in range(k + 1))
    assert term_exact(3, k, p, offset=1) == expected
