"""Boson words, parsing, and exact normal ordering."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonstirling import (
    BosonWord,
    NormalForm,
    ParseError,
    ValidationError,
    double_dot,
    excess,
    multiply_normal_forms,
    normal_order,
    parse_word,
    word_power,
)

from oracles import all_words, rewrite_normal_order

EXAMPLE_WORD = "a a+ a a a+ a"  # a a† a a a† a


class TestParseWord:
    def test_letter_tokens(self):
        assert parse_word("d a").letters == ("d", "a")

    def test_plus_suffix_synonym(self):
        assert parse_word(EXAMPLE_WORD).letters == ("a", "d", "a", "a", "d", "a")

    def test_rs_vector_syntax(self):
        assert parse_word("rs:[2,1;1,2]").letters == ("d", "d", "a", "d", "a", "a")

    def test_case_insensitive_and_compact(self):
        assert parse_word("DA") == parse_word("d a")
        assert parse_word("A+a") == parse_word("d a")

    def test_empty_text_is_identity_word(self):
        assert parse_word("") == BosonWord()
        assert parse_word("   ") == BosonWord()

    def test_unknown_token_reports_offset(self):
        with pytest.raises(ParseError) as exc:
            parse_word("a a b")
        assert exc.value.offset == 4

    def test_bare_plus_is_an_error(self):
        with pytest.raises(ParseError) as exc:
            parse_word("d +")
        assert exc.value.offset == 2

    def test_rs_negative_exponent(self):
        with pytest.raises(ValidationError):
            parse_word("rs:[1,-2]")

    def test_rs_malformed(self):
        with pytest.raises(ParseError):
            parse_word("rs:[1;2]")
        with pytest.raises(ParseError):
            parse_word("rs:[1,2")

    def test_text_round_trip(self):
        w = parse_word("rs:[2,1;0,3;1,0]")
        assert parse_word(w.text) == w

    def test_rs_pairs_round_trip(self):
        for text in ("", "a", "d", "ad", "da", "aadd", "ddaada"):
            w = parse_word(text)
            assert BosonWord.from_rs(w.rs_pairs()) == w


class TestExcessAndPower:
    @pytest.mark.parametrize(
        "text,expected",
        [("d a", 0), ("d a d", 1), ("d a a d d", 1), ("a", -1), ("", 0)],
    )
    def test_excess(self, text, expected):
        assert excess(parse_word(text)) == expected

    def test_power_concatenates(self):
        w = parse_word("d a")
        assert word_power(w, 2).text == "dada"
        assert word_power(parse_word("d a d"), 3).text == "dad" * 3

    def test_power_zero_is_identity(self):
        assert word_power(parse_word("d a a"), 0) == BosonWord()

    def test_power_negative_rejected(self):
        with pytest.raises(ValidationError):
            word_power(parse_word("a"), -1)


class TestNormalOrder:
    def test_already_ordered(self):
        assert normal_order(parse_word("d a")).terms == {(1, 1): 1}

    def test_single_swap(self):
        assert normal_order(parse_word("a d")).terms == {(0, 0): 1, (1, 1): 1}

    def test_empty_word(self):
        assert normal_order(BosonWord()) == NormalForm.identity()

    def test_worked_example(self):
        # The source text prints 3 a†a³ here, but its own expansion two lines
        # earlier (2a² + 3a†a³ + a†(1+a†a)a³) collects to coefficient 4, and
        # the elementary rewriting oracle, the d/dx representation, and
        # sympy's normal ordering all agree on 4.
        nf = normal_order(parse_word(EXAMPLE_WORD))
        assert nf.terms == {(0, 2): 2, (1, 3): 4, (2, 4): 1}
        assert nf.terms == rewrite_normal_order(("a", "d", "a", "a", "d", "a"))

    @pytest.mark.parametrize("length", range(0, 6))
    def test_matches_rewriting_oracle(self, length):
        for letters in all_words(length):
            w = BosonWord(letters)
            assert normal_order(w).terms == rewrite_normal_order(letters), letters

    def test_positive_coefficients_and_constant_excess(self):
        rng = random.Random(20240811)
        for _ in range(50):
            letters = tuple(rng.choice("ad") for _ in range(rng.randint(1, 7)))
            w = BosonWord(letters)
            nf = normal_order(w)
            d = excess(w)
            assert all(c > 0 for c in nf.terms.values())
            assert all(j - l == d for (j, l) in nf.terms)

    def test_power_homomorphism(self):
        rng = random.Random(99)
        for _ in range(20):
            letters = tuple(rng.choice("ad") for _ in range(rng.randint(1, 4)))
            w = BosonWord(letters)
            n = rng.randint(0, 3)
            folded = NormalForm.identity()
            for _ in range(n):
                folded = multiply_normal_forms(folded, normal_order(w))
            assert normal_order(word_power(w, n)) == folded

    def test_unit_coefficient_at_letter_counts(self):
        rng = random.Random(7)
        for _ in range(30):
            letters = tuple(rng.choice("ad") for _ in range(rng.randint(0, 7)))
            w = BosonWord(letters)
            assert normal_order(w).coefficient(w.creator_count, w.annihilator_count) == 1


class TestDoubleDot:
    def test_worked_example(self):
        assert double_dot(parse_word(EXAMPLE_WORD)).terms == {(2, 4): 1}

    def test_empty_word(self):
        assert double_dot(BosonWord()).terms == {(0, 0): 1}

    def test_already_ordered(self):
        assert double_dot(parse_word("d a")).terms == {(1, 1): 1}

    @given(st.lists(st.sampled_from("ad"), max_size=8))
    def test_counts_letters(self, letters):
        w = BosonWord(tuple(letters))
        (j, l), c = next(iter(double_dot(w).terms.items()))
        assert (j, l, c) == (w.creator_count, w.annihilator_count, 1)

    @given(st.integers(0, 4), st.integers(0, 4))
    def test_equals_normal_order_on_segregated_words(self, j, l):
        w = BosonWord(("d",) * j + ("a",) * l)
        assert double_dot(w) == normal_order(w)


class TestMultiplyNormalForms:
    def test_brute_force_example(self):
        p = NormalForm({(1, 1): 1})
        assert multiply_normal_forms(p, p).terms == rewrite_normal_order(
            ("d", "a", "d", "a")
        )
        assert multiply_normal_forms(p, p).terms == {(1, 1): 1, (2, 2): 1}

    def test_identity_element(self):
        p = NormalForm({(2, 1): 5, (0, 3): 2})
        e = NormalForm.identity()
        assert multiply_normal_forms(e, p) == p
        assert multiply_normal_forms(p, e) == p

    def test_single_commutation(self):
        out = multiply_normal_forms(NormalForm({(0, 1): 1}), NormalForm({(1, 0): 1}))
        assert out.terms == {(0, 0): 1, (1, 1): 1}

    def test_associative(self):
        rng = random.Random(3)
        for _ in range(20):
            forms = [
                normal_order(BosonWord(tuple(rng.choice("ad") for _ in range(3))))
                for _ in range(3)
            ]
            a, b, c = forms
            left = multiply_normal_forms(multiply_normal_forms(a, b), c)
            right = multiply_normal_forms(a, multiply_normal_forms(b, c))
            assert left == right

    def test_bilinear_over_disjoint_sums(self):
        p = NormalForm({(1, 0): 2, (0, 1): 3})
        q = NormalForm({(1, 1): 1})
        out = multiply_normal_forms(p, q)
        out_a = multiply_normal_forms(NormalForm({(1, 0): 2}), q)
        out_b = multiply_normal_forms(NormalForm({(0, 1): 3}), q)
        merged = dict(out_a.terms)
        for key, val in out_b.terms.items():
            merged[key] = merged.get(key, 0) + val
        assert out.terms == merged


class TestNormalFormValue:
    def test_rejects_non_integer_coefficients(self):
        with pytest.raises(ValidationError):
            NormalForm({(0, 0): 1.5})

    def test_drops_zero_coefficients(self):
        assert NormalForm({(0, 0): 1, (1, 1): 0}).terms == {(0, 0): 1}

    def test_sorted_ascending_in_j_then_l(self):
        nf = NormalForm({(2, 4): 1, (0, 2): 2, (1, 3): 4})
        assert [key for key, _ in nf.sorted_terms()] == [(0, 2), (1, 3), (2, 4)]

    def test_str_forms(self):
        assert str(NormalForm.identity()) == "1"
        nf = normal_order(parse_word(EXAMPLE_WORD))
        assert str(nf) == "2 (a†)^0 a^2 + 4 (a†)^1 a^3 + 1 (a†)^2 a^4"

    def test_json_round_trip(self):
        nf = normal_order(parse_word("a d a d"))
        obj = nf.to_json_obj()
        assert all(isinstance(t["coeff"], str) for t in obj)
        assert NormalForm.from_json_obj(obj) == nf


@settings(max_examples=60)
@given(st.lists(st.sampled_from("ad"), max_size=6))
def test_oracle_equivalence_property(letters):
    w = BosonWord(tuple(letters))
    assert normal_order(w).terms == rewrite_normal_order(tuple(letters))
