"""Number normalizer parsing and rendering."""

import random
from fractions import Fraction

from factalign.numbers import (
    is_number_word,
    is_ordinal_word,
    parse_digit_token,
    parse_values,
    render_cardinal,
    render_grouped,
    render_ordinal_suffix,
    render_ordinal_words,
    values_equal,
)


class TestParsing:
    def test_digit_forms(self):
        assert parse_digit_token("2000") == 2000
        assert parse_digit_token("2,000") == 2000
        assert parse_digit_token("3.5") == Fraction(7, 2)
        assert parse_digit_token("22nd") == 22
        assert parse_digit_token("1,23") is None
        assert parse_digit_token("v2") is None

    def test_word_forms(self):
        assert parse_values("twenty-five") == (("n", Fraction(25)),)
        assert parse_values("one hundred fifty-four") == (("n", Fraction(154)),)
        assert parse_values("two thousand and 1") == (("n", Fraction(2001)),)
        assert parse_values("second") == (("n", Fraction(2)),)

    def test_dates_and_months(self):
        assert parse_values("22 June 1990") == (
            ("n", Fraction(22)),
            ("m", 6),
            ("n", Fraction(1990)),
        )
        # lowercase "may" is a verb, not a month
        assert parse_values("it may rain") == ()
        assert parse_values("May 4") == (("m", 5), ("n", Fraction(4)))

    def test_adjacent_groups_stay_separate(self):
        assert parse_values("five five") == (("n", Fraction(5)), ("n", Fraction(5)))
        assert parse_values("nineteen ninety") == (("n", Fraction(19)), ("n", Fraction(90)))

    def test_unparseable(self):
        assert parse_values("no numerals at all") == ()
        assert values_equal("plain words", "other words") is None


class TestEquality:
    def test_rephrase_pairs_are_value_equal(self):
        assert values_equal("2,000", "2000") is True
        assert values_equal("twenty-five", "25") is True
        assert values_equal("100", "one hundred") is True
        assert values_equal("second", "2nd") is True
        assert values_equal("2001", "two thousand and 1") is True

    def test_changed_pairs_differ(self):
        assert values_equal("100", "101") is False
        assert values_equal("22 June 1990", "22 July 1990") is False
        assert values_equal("more than 10 years ago", "more than 11 years ago") is False

    def test_order_insensitive(self):
        assert values_equal("22 June 1990", "June 22 1990") is True


class TestRendering:
    def test_cardinals(self):
        assert render_cardinal(0) == "zero"
        assert render_cardinal(17) == "seventeen"
        assert render_cardinal(40) == "forty"
        assert render_cardinal(154) == "one hundred fifty-four"
        assert render_cardinal(2000) == "two thousand"
        assert render_cardinal(1000000) == "one million"

    def test_ordinals(self):
        assert render_ordinal_words(2) == "second"
        assert render_ordinal_words(22) == "twenty-second"
        assert render_ordinal_words(20) == "twentieth"
        assert render_ordinal_suffix(1) == "1st"
        assert render_ordinal_suffix(13) == "13th"
        assert render_ordinal_suffix(22) == "22nd"
        assert render_ordinal_suffix(111) == "111th"

    def test_grouping(self):
        assert render_grouped(2000) == "2,000"
        assert render_grouped(999) == "999"
        assert render_grouped(1234567) == "1,234,567"

    def test_cardinal_round_trip(self):
        rng = random.Random(4)
        for _ in range(500):
            n = rng.randrange(0, 1000000)
            assert parse_values(render_cardinal(n)) == (("n", Fraction(n)),)

    def test_ordinal_round_trip(self):
        rng = random.Random(5)
        for _ in range(200):
            n = rng.randrange(1, 1000)
            assert parse_values(render_ordinal_words(n)) == (("n", Fraction(n)),)
            assert parse_values(render_ordinal_suffix(n)) == (("n", Fraction(n)),)


class TestWordPredicates:
    def test_is_number_word(self):
        assert is_number_word("seven")
        assert is_number_word("twenty-five")
        assert is_number_word("Twentieth")
        assert not is_number_word("sevenish")
        assert not is_number_word("twenty-horses")

    def test_is_ordinal_word(self):
        assert is_ordinal_word("second")
        assert is_ordinal_word("twenty-second")
        assert not is_ordinal_word("two thousand")
        assert not is_ordinal_word("seven")
