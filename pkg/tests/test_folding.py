from fractions import Fraction

import pytest

from mahlerfold.contfrac import continuants, euclid_cf
from mahlerfold.folding import (
    FoldEngine,
    FoldSyntaxError,
    NotSpecialError,
    RuleConst,
    RuleRef,
    cohn_congruence_test,
    fold_continuants,
    fold_continuants_series,
    ij_series,
    ij_system_check,
    iterate_fold,
    named_spec,
    parse_fold_spec,
    rho_head,
    rho_word_equations,
    sign_generating_functions,
    signed_even_subword,
    special_recursion_polys,
    specializable_iterated,
    specialize,
    specialize_three_step,
    specialized_digits,
    word_lengths,
    word_to_cf,
)
from mahlerfold.poly import Polynomial, RationalFunction, parse_poly
from mahlerfold.series import truncated_partial

P = Polynomial


# -- DSL ----------------------------------------------------------------------

def test_parse_rho_spec():
    spec = parse_fold_spec("bases:[],[] ; rule: w2, s*x, -~w2, s*x, w1")
    assert spec.bases == ((), ())
    assert spec.rule == (
        RuleRef(2),
        RuleConst(1, parity=True),
        RuleRef(2, reverse=True, negate=True),
        RuleConst(1, parity=True),
        RuleRef(1),
    )
    assert spec == named_spec("rho")


def test_parse_dragon_spec():
    spec = parse_fold_spec("bases:[] ; rule: w1, x, -~w1")
    assert spec == named_spec("dragon")


def test_parse_unknown_token():
    with pytest.raises(FoldSyntaxError) as err:
        parse_fold_spec("rule: w1, q3, x")
    assert "q3" in str(err.value)


def test_parse_depth_exceeds_bases():
    with pytest.raises(ValueError):
        parse_fold_spec("bases:[] ; rule: w2, x")


def test_pretty_roundtrip():
    for name in ("dragon", "rho", "cubic", "quintic", "rational-ex"):
        spec = named_spec(name)
        assert parse_fold_spec(spec.pretty()) == spec


def test_parse_base_signs():
    spec = parse_fold_spec("bases:[+,-,+] ; rule: w1, x")
    assert spec.bases == ((1, -1, 1),)


# -- word iteration -----------------------------------------------------------

def test_rho_word_n4():
    assert iterate_fold("rho", 4) == [1, 1, 1, -1, -1, 1, -1, -1, 1, 1]


def test_rho_word_lengths():
    assert word_lengths("rho", 5) == [0, 0, 2, 4, 10, 20]
    lens = word_lengths("rho", 14)
    for n, k in enumerate(lens):
        assert k == ((1 << (n + 1)) + (-1) ** n) // 3 - 1


def test_rho_length_parity_mod_4():
    lens = word_lengths("rho", 16)
    for n in range(2, 17, 2):
        assert lens[n] % 4 == 2
    for n in range(1, 17, 2):
        assert lens[n] % 4 == 0


def test_dragon_word_n4():
    assert iterate_fold("dragon", 4) == [
        1, 1, -1, 1, 1, -1, -1, 1, 1, 1, -1, -1, 1, -1, -1,
    ]


def dragon_sign(i: int) -> int:
    """Independent closed form: strip trailing zeros of i+1, look at bit 1."""
    n = i + 1
    n >>= (n & -n).bit_length() - 1
    return -1 if n & 2 else 1


def test_dragon_matches_bit_oracle():
    word = iterate_fold("dragon", 16)
    assert len(word) == (1 << 16) - 1
    for i in (0, 1, 2, 3, 100, 12345, 65533):
        assert word[i] == dragon_sign(i)
    assert all(word[i] == dragon_sign(i) for i in range(len(word)))


def test_dragon_even_positions_alternate():
    # Toeplitz property: positions 0, 2, 4, ... carry +1, -1, +1, ...
    word = iterate_fold("dragon", 16)
    for m in range(len(word) // 2):
        assert word[2 * m] == (1 if m % 2 == 0 else -1)


def test_rho_odd_positions():
    for n, sign in ((8, 1), (9, -1)):
        word = iterate_fold("rho", n)
        for m in range(len(word)):
            if m % 4 == 1:
                assert word[m] == sign
            elif m % 4 == 3:
                assert word[m] == -sign


def test_e_words():
    # w_4 = [1,1,1,-1,-1,1,-1,-1,1,1] gives e_4 = [1,-1,-1,1,1]
    assert signed_even_subword(iterate_fold("rho", 4)) == [1, -1, -1, 1, 1]
    for n in range(0, 9):
        w = iterate_fold("rho", n)
        e_next = signed_even_subword(iterate_fold("rho", n + 1))
        if n % 2 == 0:
            assert w == [-s for s in e_next]
        else:
            assert [1] + w == e_next


# -- continuants through the recursion ---------------------------------------

def test_rho_theorem_continuants():
    for n in range(0, 13):
        mat = fold_continuants("rho", n, rho_head(n))
        assert mat.p == truncated_partial("H", n)
        assert mat.q == truncated_partial("H", n - 1).substitute_power(2)


def test_fold_engine_matches_direct_product():
    # engine transforms (transpose / sign-conjugate) equal the literal
    # Key Lemma product over the materialized word
    cases = {"dragon": 7, "rho": 7, "cubic": 4, "quintic": 4, "rational-ex": 4}
    for name, top in cases.items():
        spec = named_spec(name)
        engine = FoldEngine(spec, P.x())
        for n in range(0, top + 1):
            word = iterate_fold(spec, n)
            direct = continuants(word_to_cf(P.one(), word))
            assert engine.with_head(n, P.one()) == direct


def test_dragon_literal_continuants():
    mat = fold_continuants("dragon", 3, P.one())
    assert mat.p == P([1, 0, 0, 0, 1, 0, -1, -1])
    assert mat.q == P.monomial(7, -1)


def test_dragon_n4_ratio():
    # [1; p_4] = 1 + 1/x - 1/x^3 - 1/x^7 - 1/x^15: the truncation of the
    # classic x*sum(x^-2^k) folded series with the signs the +x-fold
    # actually produces
    ratio = fold_continuants("dragon", 4, P.one()).ratio()
    assert ratio.den == P.monomial(15)
    assert ratio.num == P([-1, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 0, -1, 0, 1, 1])


def test_fold_continuants_series_prefix():
    # series-ring continuants agree with the polynomial ring ones
    full = fold_continuants("rho", 8, rho_head(8))
    pref = fold_continuants_series("rho", 8, 40, rho_head(8))
    assert pref.p.coeffs == tuple(full.p.coeff(i) for i in range(41))
    assert pref.q.coeffs == tuple(full.q.coeff(i) for i in range(41))


# -- specialization -----------------------------------------------------------

def test_specialize_rho4():
    word = iterate_fold("rho", 4)
    sp = specialize(rho_head(4), word)
    x = P.x()
    one = P.one()
    assert sp.head == one
    assert list(sp.entries) == [
        x, x, x - 1, one, x - 1, x - 1, one, x - 2, one, x - 1, x - 1, one, x - 1, x,
    ]


def test_specialize_matches_three_step_on_even_words():
    for n in (2, 4, 6, 8):
        word = iterate_fold("rho", n)
        a = specialize(rho_head(n), word)
        b = specialize_three_step(rho_head(n), word)
        assert a == b


def test_specialize_matches_slicing_reference():
    # the parity-flag rewrite equals the literal tail-negating ripple,
    # including words that open with -x (where the three-step is undefined)
    import random

    from mahlerfold.folding import specialize_by_slicing

    rng = random.Random(5)
    for _ in range(30):
        word = [rng.choice((1, -1)) for _ in range(rng.randint(1, 40))]
        head = P([1, 1]) if word[0] < 0 else P.one()
        assert specialize(head, word) == specialize_by_slicing(head, word)


def test_specialize_all_positive_unchanged():
    sp = specialize(P.one(), [1, 1, 1])
    assert list(sp.entries) == [P.x()] * 3


def test_specialize_preserves_value_and_bounds():
    import random

    rng = random.Random(11)
    for _ in range(20):
        word = [rng.choice((1, -1)) for _ in range(rng.randint(1, 64))]
        original = continuants(word_to_cf(P([1, 1]), word)).ratio()
        sp = specialize(P([1, 1]), word)
        assert continuants(sp).ratio() == original
        assert len(sp.entries) <= 2 * len(word)
        for entry in sp.entries:
            assert entry.coeffs[-1] > 0  # no negative partial quotients


def test_specialized_digits_at_5():
    even = specialized_digits("rho", 12, 5, 20)
    assert even == [1, 5, 5, 4, 1, 4, 4, 1, 3, 1, 4, 4, 1, 4, 5, 4, 1, 4, 4, 1]
    odd = specialized_digits("rho", 13, 5, 20)
    assert odd == [5, 1, 4, 4, 1, 4, 4, 1, 4, 5, 4, 1, 4, 4, 1, 3, 1, 4, 5, 4]


# -- generating functions and the I/J system ---------------------------------

def test_sign_generating_functions_residuals():
    res_f, res_g = rho_word_equations(64)
    assert res_f.is_zero()
    assert res_g.is_zero()


def test_sign_gf_odd_positions():
    f, g = sign_generating_functions("rho", 64)
    for m in range(1, 65, 2):
        expect = 1 if m % 4 == 1 else -1
        assert f.coeffs[m] == expect
        assert g.coeffs[m] == -expect


def test_ij_system():
    report = ij_system_check(96)
    assert report.ok


def test_ij_coefficient_range():
    i_s, j_s = ij_series(96)
    assert set(i_s.coeffs) <= {0, 1, -1}
    assert set(j_s.coeffs) <= {0, 1, -1}


# -- special recursions -------------------------------------------------------

def test_special_polys_dragon():
    p, q = special_recursion_polys("dragon")
    assert p == P([0, 1])  # P(y) = y
    assert q == P.one()


def test_special_polys_five_term():
    # the canonical chain (w_0 empty, so word lengths stay even) satisfies
    # P(y) = 1 + y^2; odd-length variants of the same rule flip the sign of
    # the quadratic term
    p, q = special_recursion_polys(parse_fold_spec("bases:[] ; rule: w1, x, -~w1, x, w1"))
    assert p == P([1, 0, 1])  # 1 + y^2
    assert q == P([0, 1])  # y


def test_special_polys_five_term_odd_variant():
    # the odd-length instance [x], x, [-x], x, [x] of the same rule has
    # P(y) = 1 - y^2, Q(y) = y: p = p~ (1 - (x p~)^2) with p~ = x
    from mahlerfold.contfrac import continuants

    mat = continuants(word_to_cf(P([0, 1]), [1, -1, 1, 1]))  # [x; x, -x, x, x]
    p_tilde = P.x()
    arg = P.x() * p_tilde
    assert mat.p == p_tilde * (P.one() - arg * arg)


def test_special_polys_20_nonconstant():
    rule = []
    for i in range(20):
        if i:
            rule.append("x")
        rule.append("-~w1" if i % 2 else "w1")
    spec = parse_fold_spec("bases:[] ; rule: " + ", ".join(rule))
    p, q = special_recursion_polys(spec)
    from math import comb

    # coefficient magnitudes are the Fibonacci-polynomial binomials
    # C(19-k, k) for P and C(18-k, k) for Q; the canonical chain carries
    # alternating signs on them
    expect_p = [0] * 20
    for k in range(10):
        expect_p[19 - 2 * k] = (-1) ** k * comb(19 - k, k)
    expect_q = [0] * 19
    for k in range(10):
        expect_q[18 - 2 * k] = (-1) ** (k + 1) * comb(18 - k, k)
    assert p == P(expect_p)
    assert q == P(expect_q)


def test_special_polys_degree_dominance():
    # deg P >= deg Q for all-positive special specs
    for refs in (2, 3, 4, 5):
        rule = []
        for i in range(refs):
            if i:
                rule.append("x")
            rule.append("-~w1" if i % 2 else "w1")
        spec = parse_fold_spec("bases:[] ; rule: " + ", ".join(rule))
        p, q = special_recursion_polys(spec)
        assert p.degree >= q.degree


def test_special_rejects_non_special():
    with pytest.raises(NotSpecialError):
        special_recursion_polys("cubic")


# -- Cohn specializability ----------------------------------------------------

def test_cohn_congruences():
    assert cohn_congruence_test(parse_poly("x^2")) == [1]
    # 1 + x^2*(x-1)*x satisfies item 3
    f = parse_poly("x^4-x^3+1")
    assert 3 in cohn_congruence_test(f)
    assert cohn_congruence_test(parse_poly("x^2+x+1")) == []


def test_specializable_x_squared():
    report = specializable_iterated(parse_poly("x^2"), "irregular", 6)
    assert report.specializable


def test_specializable_x2_minus_2():
    report = specializable_iterated(parse_poly("x^2-2"), "irregular", 6)
    assert report.specializable
    # the truncations' regular CFs have sign-alternating quotients +-(x^2-2)
    from mahlerfold.contfrac import IrregularCF, eval_irregular

    f = parse_poly("x^2-2")
    iterates = [P.x()]
    for _ in range(5):
        iterates.append(f(iterates[-1]))
    pairs = tuple((iterates[m], P.one()) for m in range(1, 6))
    value = eval_irregular(IrregularCF(P.x(), pairs), RationalFunction.x())
    word = euclid_cf(value)
    tail = list(word.entries)
    for i in range(len(tail) - 1):
        assert tail[i] == -tail[i + 1]
        assert tail[i] in (f, -f)


def test_not_specializable_cohn_sum():
    report = specializable_iterated(parse_poly("x^2+x+1"), "cohn_sum", 4)
    assert not report.specializable
    assert report.fails_at is not None
    assert report.witness is not None and not report.witness.is_integer()


def test_specializable_cohn_sum_positive():
    # x^2 satisfies congruence 1, so the Cohn sum is specializable
    report = specializable_iterated(parse_poly("x^2"), "cohn_sum", 6)
    assert report.specializable


def test_degree_cap():
    from mahlerfold.folding import DegreeCapExceeded

    with pytest.raises(DegreeCapExceeded):
        specializable_iterated(parse_poly("x^4+1"), "cohn_sum", 8, degree_cap=512)
